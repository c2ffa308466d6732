#pragma once

#include <string>

#include "caponplus/montecarlo.h"
#include "caponplus/run_config.h"

namespace caponplus {

/// Shortest decimal that parses back to the same double.
std::string format_number(double value);

/// CSV with a fixed header, or a JSON array of records with the same fields.
/// An empty report yields the header only (or "[]").
std::string format_results(const ScenarioReport& report, OutputFormat format);

/// Throws IoError when the file cannot be written.
void emit_results(const ScenarioReport& report, OutputFormat format, const std::string& path);

}  // namespace caponplus
