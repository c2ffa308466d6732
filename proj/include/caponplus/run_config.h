#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "caponplus/errors.h"
#include "caponplus/montecarlo.h"

namespace caponplus {

enum class OutputFormat { Csv, Json };

std::string_view to_string(OutputFormat format);

/// File form of ScenarioConfig plus output settings.
struct RunConfig {
  ScenarioConfig scenario;
  std::string output_path = "results.csv";
  OutputFormat output_format = OutputFormat::Csv;
};

/// Malformed JSON, or a key the schema does not know.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, std::size_t line, std::string key = {})
      : ConfigError(what), line_(line), key_(std::move(key)) {}
  std::size_t line() const noexcept { return line_; }  // 0 when unknown
  const std::string& key() const noexcept { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

/// Well-formed config that breaks one or more invariants.
class ValidationError : public ConfigError {
 public:
  ValidationError(const std::string& what, std::vector<std::string> violations)
      : ConfigError(what), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Names accepted by --preset.
std::vector<std::string> preset_names();

/// Preset as JSON text in the config schema. Throws ConfigError for an unknown name.
std::string preset_json(std::string_view name);

/// Parses config text layered over an optional preset (config keys win).
/// `source` only labels error messages.
RunConfig parse_config(std::string_view text, std::string_view preset = {},
                       std::string_view source = "<config>");

/// Reads from `path`, or stdin when path is "-".
RunConfig parse_config_file(const std::string& path, std::string_view preset = {});

}  // namespace caponplus
