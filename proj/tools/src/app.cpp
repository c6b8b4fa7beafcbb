#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "specanom/acceptance.hpp"
#include "specanom/cli.hpp"

namespace specanom::cli {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int write_report(const ReportDocument& doc, const std::string& format, const std::string& path, bool timing,
                 std::ostream& out) {
  const std::string text = emit(doc, format, timing);
  if (path.empty()) {
    out << text;
  } else {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text;
    std::size_t failed = 0;
    for (const auto& t : doc.tasks) failed += t.pass ? 0 : 1;
    out << (doc.pass ? "PASS" : "FAIL") << ": " << doc.tasks.size() - failed << "/" << doc.tasks.size()
        << " tasks passed; report written to " << path << "\n";
  }
  return doc.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zeta-regularized spectral invariants and tracial anomaly checks on model operators"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  RunOptions options;
  bool no_timestamp = false;
  std::string format;
  std::string output;
  app.add_option("--jobs", options.jobs, "Concurrent tasks")->check(CLI::PositiveNumber);
  app.add_option("--tolerance-scale", options.tolerance_scale, "Multiply every tolerance")
      ->check(CLI::PositiveNumber);
  app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp and timings for byte-stable output");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", output, "Write the report to a file instead of stdout");

  std::string config_path;
  CLI::App* run_cmd = app.add_subcommand("run", "Run the tasks of a JSON config");
  run_cmd->add_option("config", config_path, "Config file")->required();
  CLI::App* list_cmd = app.add_subcommand("list-models", "List model kinds and task kinds");
  CLI::App* self_cmd = app.add_subcommand("selftest", "Run the built-in acceptance catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfig;
  }
  options.timestamp = !no_timestamp;

  try {
    if (list_cmd->parsed()) {
      out << nlohmann::json{{"models", model_catalog()}, {"tasks", task_kinds()}}.dump(2) << "\n";
      return kExitPass;
    }
    if (self_cmd->parsed()) {
      const ReportDocument doc = acceptance::selftest(options);
      return write_report(doc, format.empty() ? "json" : format, output, options.timestamp, out);
    }
    if (run_cmd->parsed()) {
      const TaskConfig config = parse_config_text(read_file(config_path));
      const ReportDocument doc = run(config, options);
      return write_report(doc, format.empty() ? config.format : format, output.empty() ? config.output_path : output,
                          options.timestamp, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace specanom::cli
