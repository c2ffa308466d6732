#include "caponplus/results_io.h"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace caponplus {

namespace {

constexpr std::array<const char*, 11> kColumns = {
    "sweep_variable", "sweep_value",   "method",         "mean_rel_bias",
    "stderr_rel_bias", "mean_se_nmse", "stderr_se_nmse", "mean_sp_nmse",
    "stderr_sp_nmse", "n_trials",      "n_failed"};

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string format_results(const ScenarioReport& report, OutputFormat format) {
  const std::string variable(to_string(report.config.sweep.variable));
  if (format == OutputFormat::Csv) {
    std::string out;
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      if (c) out += ',';
      out += kColumns[c];
    }
    out += '\n';
    for (const auto& point : report.points) {
      for (const auto& a : point.aggregates) {
        out += variable + ',' + format_number(point.sweep_value) + ',' + a.method + ',' +
               format_number(a.mean_rel_bias) + ',' + format_number(a.stderr_rel_bias) + ',' +
               format_number(a.mean_se_nmse) + ',' + format_number(a.stderr_se_nmse) + ',' +
               format_number(a.mean_sp_nmse) + ',' + format_number(a.stderr_sp_nmse) + ',' +
               std::to_string(a.n_trials) + ',' + std::to_string(a.n_failed) + '\n';
      }
    }
    return out;
  }

  // numbers are spliced in as raw text so the JSON keeps the same digits as the CSV
  std::string out = "[";
  bool first = true;
  auto field = [&out](const char* key, const std::string& raw, bool last = false) {
    out += std::string("\"") + key + "\": " + raw + (last ? "" : ", ");
  };
  for (const auto& point : report.points) {
    for (const auto& a : point.aggregates) {
      out += first ? "\n  {" : ",\n  {";
      first = false;
      field("sweep_variable", nlohmann::json(variable).dump());
      field("sweep_value", format_number(point.sweep_value));
      field("method", nlohmann::json(a.method).dump());
      field("mean_rel_bias", format_number(a.mean_rel_bias));
      field("stderr_rel_bias", format_number(a.stderr_rel_bias));
      field("mean_se_nmse", format_number(a.mean_se_nmse));
      field("stderr_se_nmse", format_number(a.stderr_se_nmse));
      field("mean_sp_nmse", format_number(a.mean_sp_nmse));
      field("stderr_sp_nmse", format_number(a.stderr_sp_nmse));
      field("n_trials", std::to_string(a.n_trials));
      field("n_failed", std::to_string(a.n_failed), true);
      out += '}';
    }
  }
  out += first ? "]\n" : "\n]\n";
  return out;
}

void emit_results(const ScenarioReport& report, OutputFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << format_results(report, format);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace caponplus
