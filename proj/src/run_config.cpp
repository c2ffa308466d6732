#include "caponplus/run_config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

#include <json.hpp>

namespace caponplus {

using nlohmann::json;

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::Json ? "json" : "csv";
}

namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// best effort: first place the quoted key appears
std::size_t line_of_key(std::string_view text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string_view::npos ? 0 : line_of_offset(text, pos);
}

json grid(double start, double stop, double step) {
  json out = json::array();
  const int n = static_cast<int>(std::lround((stop - start) / step));
  // snap to 1e-9 so the values print as short decimals
  for (int i = 0; i <= n; ++i) out.push_back(std::round((start + i * step) * 1e9) / 1e9);
  return out;
}

json t0_grid() { return json::array({30, 35, 40, 45, 50, 60, 70, 80, 90, 100, 110, 120}); }

json build_preset(std::string_view name) {
  if (name == "fig1") {
    return {{"regime", "oracle"}, {"waveform", "gaussian"}, {"snapshots", 60}, {"trials", 15000},
            {"sweep", {{"variable", "snr_db"}, {"values", grid(0.0, -8.5, -0.5)}}}};
  }
  if (name == "fig2") {
    return {{"regime", "oracle"}, {"waveform", "gaussian"}, {"snapshots", 60}, {"snr_db", -6.0},
            {"sweep", {{"variable", "alpha"}, {"values", grid(0.5, 1.1, 0.005)}}}};
  }
  if (name == "fig3") {
    return {{"regime", "a"}, {"waveform", "psk8"}, {"snapshots", 60}, {"trials", 10000},
            {"sweep", {{"variable", "snr_db"}, {"values", grid(0.0, -10.0, -1.0)}}}};
  }
  if (name == "fig4a" || name == "fig4b" || name == "fig4c") {
    const int t = name == "fig4a" ? 200 : name == "fig4b" ? 500 : 100;
    return {{"regime", "b"}, {"waveform", "psk8"}, {"snapshots", t}, {"trials", 10000},
            {"sweep", {{"variable", "snr_db"}, {"values", grid(5.0, -10.0, -1.0)}}}};
  }
  if (name == "fig5" || name == "fig6") {
    return {{"regime", name == "fig5" ? "c" : "d"}, {"waveform", "psk8"}, {"snapshots", 60},
            {"snr_db", -5.0}, {"trials", 10000},
            {"sweep", {{"variable", "secondary_snapshots"}, {"values", t0_grid()}}}};
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

const std::set<std::string> kTopKeys = {
    "$schema",  "description", "regime",    "array",  "soi_doa_deg",         "interferers",
    "snr_db",   "waveform",    "oracle_kurtosis", "snapshots", "secondary_snapshots", "trials",
    "seed",     "sweep",       "output_path", "output_format", "emit_theory"};
const std::set<std::string> kArrayKeys = {"elements", "spacing_wavelengths"};
const std::set<std::string> kInterfererKeys = {"doa_deg", "offset_db"};
const std::set<std::string> kSweepKeys = {"variable", "values"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where,
                    std::string_view text, std::string_view source) {
  for (const auto& [key, _] : obj.items()) {
    if (allowed.count(key)) continue;
    const std::string path = where.empty() ? key : where + "." + key;
    const std::size_t line = line_of_key(text, key);
    std::string msg = std::string(source);
    if (line) msg += ":" + std::to_string(line);
    throw ParseError(msg + ": unknown key '" + path + "'", line, path);
  }
}

// Typed field reader that collects problems instead of throwing.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

  template <typename F>
  void number(const json& obj, const char* key, const std::string& path, F&& set) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      problems_.push_back(path + ": expected a number");
      return;
    }
    set(v.get<double>());
  }

  template <typename F>
  void integer(const json& obj, const char* key, const std::string& path, F&& set) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
      problems_.push_back(path + ": expected an integer");
      return;
    }
    set(v);
  }

  template <typename F>
  void string(const json& obj, const char* key, const std::string& path, F&& set) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      problems_.push_back(path + ": expected a string");
      return;
    }
    set(v.get<std::string>());
  }

  void bad(std::string msg) { problems_.push_back(std::move(msg)); }

 private:
  std::vector<std::string>& problems_;
};

RunConfig from_json(const json& j, std::string_view text, std::string_view source) {
  if (!j.is_object()) throw ParseError(std::string(source) + ": top level must be an object", 1);
  reject_unknown(j, kTopKeys, "", text, source);
  if (j.contains("array") && j["array"].is_object()) {
    reject_unknown(j["array"], kArrayKeys, "array", text, source);
  }
  if (j.contains("sweep") && j["sweep"].is_object()) {
    reject_unknown(j["sweep"], kSweepKeys, "sweep", text, source);
  }
  if (j.contains("interferers") && j["interferers"].is_array()) {
    for (std::size_t k = 0; k < j["interferers"].size(); ++k) {
      const json& item = j["interferers"][k];
      if (item.is_object()) {
        reject_unknown(item, kInterfererKeys, "interferers[" + std::to_string(k) + "]", text, source);
      }
    }
  }

  RunConfig rc;
  ScenarioConfig& sc = rc.scenario;
  std::vector<std::string> problems;
  Reader rd(problems);

  if (!j.contains("regime")) problems.push_back("regime: required");
  rd.string(j, "regime", "regime", [&](const std::string& s) {
    if (s == "oracle") sc.regime = Regime::Oracle;
    else if (s == "a") sc.regime = Regime::A;
    else if (s == "b") sc.regime = Regime::B;
    else if (s == "c") sc.regime = Regime::C;
    else if (s == "d") sc.regime = Regime::D;
    else rd.bad("regime: '" + s + "' is not one of oracle, a, b, c, d");
  });
  sc.trials = sc.regime == Regime::Oracle ? 15000 : 10000;

  if (j.contains("array")) {
    const json& arr = j["array"];
    if (!arr.is_object()) {
      rd.bad("array: expected an object");
    } else {
      rd.integer(arr, "elements", "array.elements", [&](const json& v) {
        if (v.get<long long>() < 1) rd.bad("array.elements: must be >= 1");
        else sc.geom.elements = v.get<std::size_t>();
      });
      rd.number(arr, "spacing_wavelengths", "array.spacing_wavelengths",
                [&](double v) { sc.geom.spacing_wavelengths = v; });
    }
  }
  rd.number(j, "soi_doa_deg", "soi_doa_deg", [&](double v) { sc.scene.soi_doa_deg = v; });
  if (j.contains("interferers")) {
    const json& list = j["interferers"];
    if (!list.is_array()) {
      rd.bad("interferers: expected an array");
    } else {
      sc.scene.interferers.clear();
      for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string path = "interferers[" + std::to_string(k) + "]";
        const json& item = list[k];
        if (!item.is_object()) {
          rd.bad(path + ": expected an object");
          continue;
        }
        InterfererTemplate it;
        if (!item.contains("doa_deg")) rd.bad(path + ".doa_deg: required");
        rd.number(item, "doa_deg", path + ".doa_deg", [&](double v) { it.doa_deg = v; });
        rd.number(item, "offset_db", path + ".offset_db", [&](double v) { it.offset_db = v; });
        sc.scene.interferers.push_back(it);
      }
    }
  }
  rd.number(j, "snr_db", "snr_db", [&](double v) { sc.snr_db = v; });
  rd.string(j, "waveform", "waveform", [&](const std::string& s) {
    if (s == "gaussian") sc.waveform = WaveformKind::CircularGaussian;
    else if (s == "psk8") sc.waveform = WaveformKind::Psk8;
    else rd.bad("waveform: '" + s + "' is not one of gaussian, psk8");
  });
  rd.string(j, "oracle_kurtosis", "oracle_kurtosis", [&](const std::string& s) {
    if (s == "exact") sc.oracle_kurtosis = OracleKurtosis::Exact;
    else if (s == "constant_modulus") sc.oracle_kurtosis = OracleKurtosis::ConstantModulus;
    else rd.bad("oracle_kurtosis: '" + s + "' is not one of exact, constant_modulus");
  });
  rd.integer(j, "snapshots", "snapshots", [&](const json& v) {
    const long long t = v.get<long long>();
    if (t < 1 || t > 100000000) rd.bad("snapshots: must be in [1, 1e8]");
    else sc.snapshots = static_cast<int>(t);
  });
  rd.integer(j, "secondary_snapshots", "secondary_snapshots", [&](const json& v) {
    const long long t = v.get<long long>();
    if (t < 0 || t > 100000000) rd.bad("secondary_snapshots: must be in [0, 1e8]");
    else sc.secondary_snapshots = static_cast<int>(t);
  });
  rd.integer(j, "trials", "trials", [&](const json& v) {
    if (v.get<long long>() < 0) rd.bad("trials: must be >= 100");
    else sc.trials = v.get<std::size_t>();
  });
  rd.integer(j, "seed", "seed", [&](const json& v) {
    if (v.is_number_unsigned()) sc.master_seed = v.get<std::uint64_t>();
    else rd.bad("seed: must be a non-negative 64-bit integer");
  });

  bool have_values = false;
  if (j.contains("sweep")) {
    const json& sw = j["sweep"];
    if (!sw.is_object()) {
      rd.bad("sweep: expected an object");
    } else {
      rd.string(sw, "variable", "sweep.variable", [&](const std::string& s) {
        if (s == "snr_db") sc.sweep.variable = SweepVariable::SnrDb;
        else if (s == "secondary_snapshots") sc.sweep.variable = SweepVariable::SecondarySnapshots;
        else if (s == "alpha") sc.sweep.variable = SweepVariable::Alpha;
        else rd.bad("sweep.variable: '" + s + "' is not one of snr_db, secondary_snapshots, alpha");
      });
      if (sw.contains("values")) {
        have_values = true;
        const json& vals = sw["values"];
        if (!vals.is_array()) {
          rd.bad("sweep.values: expected an array of numbers");
        } else {
          for (const json& v : vals) {
            if (!v.is_number()) {
              rd.bad("sweep.values: expected an array of numbers");
              sc.sweep.values.clear();
              break;
            }
            sc.sweep.values.push_back(v.get<double>());
          }
        }
      }
    }
  }
  if (!have_values && sc.sweep.variable == SweepVariable::SnrDb) {
    for (const json& v : grid(0.0, -8.5, -0.5)) sc.sweep.values.push_back(v.get<double>());
  }

  rd.string(j, "output_format", "output_format", [&](const std::string& s) {
    if (s == "csv") rc.output_format = OutputFormat::Csv;
    else if (s == "json") rc.output_format = OutputFormat::Json;
    else rd.bad("output_format: '" + s + "' is not one of csv, json");
  });
  rc.output_path = rc.output_format == OutputFormat::Json ? "results.json" : "results.csv";
  rd.string(j, "output_path", "output_path", [&](const std::string& s) {
    if (s.empty()) rd.bad("output_path: must not be empty");
    else rc.output_path = s;
  });
  if (j.contains("emit_theory")) {
    if (!j["emit_theory"].is_boolean()) rd.bad("emit_theory: expected a boolean");
    else sc.emit_theory = j["emit_theory"].get<bool>();
  }

  for (auto& v : sc.violations()) problems.push_back(std::move(v));
  if (!problems.empty()) {
    std::string msg = std::string(source) + ": invalid configuration";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ValidationError(msg, std::move(problems));
  }
  return rc;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig1", "fig2", "fig3", "fig4a", "fig4b", "fig4c", "fig5", "fig6"};
}

std::string preset_json(std::string_view name) { return build_preset(name).dump(2); }

RunConfig parse_config(std::string_view text, std::string_view preset, std::string_view source) {
  json user;
  try {
    user = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t line = line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(std::string(source) + ":" + std::to_string(line) + ": malformed JSON (" +
                         e.what() + ")",
                     line);
  }
  if (!user.is_object()) throw ParseError(std::string(source) + ": top level must be an object", 1);
  if (preset.empty()) return from_json(user, text, source);

  json merged = build_preset(preset);
  merged.merge_patch(user);
  return from_json(merged, text, source);
}

RunConfig parse_config_file(const std::string& path, std::string_view preset) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_config(text, preset, path == "-" ? "<stdin>" : path);
}

}  // namespace caponplus
