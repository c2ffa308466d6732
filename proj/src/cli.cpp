#include "caponplus/cli.h"

#include <charconv>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "caponplus/results_io.h"
#include "caponplus/run_config.h"

namespace caponplus {

namespace {

std::optional<unsigned> parse_threads(const char* text) {
  if (!text || !*text) return std::nullopt;
  unsigned v = 0;
  const char* end = text + std::char_traits<char>::length(text);
  const auto res = std::from_chars(text, end, v);
  if (res.ec != std::errc{} || res.ptr != end || v == 0) return std::nullopt;
  return v;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capon, MMSE and Capon+ power estimation experiments", "caponplus"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format;
  unsigned threads = 0;

  CLI::App* run = app.add_subcommand("run", "Run a scenario and write results");
  run->add_option("config", config_path, "JSON config file, '-' for stdin");
  run->add_option("--preset", preset, "Start from a named preset")
      ->check(CLI::IsMember(preset_names()));
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--out", out_path, "Override output_path");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--threads", threads, "Worker threads (default: CAPONPLUS_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  CLI::App* presets = app.add_subcommand("presets", "List presets, or print one as JSON");
  std::string preset_to_show;
  presets->add_option("name", preset_to_show)->check(CLI::IsMember(preset_names()));

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "caponplus: " << e.what() << '\n';
    return kExitConfig;
  }

  if (presets->parsed()) {
    if (preset_to_show.empty()) {
      for (const auto& n : preset_names()) out << n << '\n';
    } else {
      out << preset_json(preset_to_show) << '\n';
    }
    return kExitOk;
  }

  if (config_path.empty() && preset.empty()) {
    err << "caponplus: run needs a config file or --preset\n";
    return kExitConfig;
  }

  RunConfig rc;
  try {
    rc = config_path.empty() ? parse_config("{}", preset, "<preset>")
                             : parse_config_file(config_path, preset);
    if (seed) rc.scenario.master_seed = *seed;
    if (!format.empty()) {
      const OutputFormat f = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
      if (f != rc.output_format && out_path.empty() &&
          rc.output_path == (f == OutputFormat::Json ? "results.csv" : "results.json")) {
        rc.output_path = f == OutputFormat::Json ? "results.json" : "results.csv";
      }
      rc.output_format = f;
    }
    if (!out_path.empty()) rc.output_path = out_path;
  } catch (const Error& e) {
    err << "caponplus: " << e.what() << '\n';
    return kExitConfig;
  }

  RunOptions options;
  if (threads > 0) {
    options.threads = threads;
  } else if (const char* env = std::getenv("CAPONPLUS_THREADS")) {
    const auto t = parse_threads(env);
    if (!t) {
      err << "caponplus: CAPONPLUS_THREADS must be a positive integer, got '" << env << "'\n";
      return kExitConfig;
    }
    options.threads = *t;
  } else {
    options.threads = std::max(1u, std::thread::hardware_concurrency());
  }

  int status = kExitOk;
  ScenarioReport report;
  try {
    report = run_scenario(rc.scenario, options);
  } catch (const TrialFailures& e) {
    err << "caponplus: " << e.what() << '\n';
    report = e.report();
    status = kExitTrials;
  } catch (const ConfigError& e) {
    err << "caponplus: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "caponplus: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    emit_results(report, rc.output_format, rc.output_path);
  } catch (const IoError& e) {
    err << "caponplus: " << e.what() << '\n';
    return kExitConfig;
  }
  err << "wrote " << rc.output_path << " (" << report.points.size() << " sweep points, "
      << report.wall_time_s << " s, " << options.threads << " threads)\n";
  return status;
}

}  // namespace caponplus
