#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "specanom/report.hpp"

namespace specanom::cli {

inline constexpr const char* kToolVersion = "specanom 0.1.0";

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitConfig = 2 };

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct TaskSpec {
  std::string id;
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
  std::optional<double> tolerance;
};

struct TaskConfig {
  nlohmann::json models = nlohmann::json::object();  // name -> spectrum descriptor
  std::vector<TaskSpec> tasks;
  std::string format = "json";
  std::string output_path;  // empty: stdout
};

const std::vector<std::string>& task_kinds();

/// Validates models, task kinds, references and tolerances; unknown keys are
/// rejected. Throws ConfigError.
TaskConfig parse_config(const nlohmann::json& doc);
TaskConfig parse_config_text(std::string_view text);

struct TaskResult {
  std::string id;
  std::string kind;
  bool pass = false;
  std::string error;  // set when the task threw
  std::vector<AnomalyReport> entries;
  nlohmann::json data = nlohmann::json::object();
  double wall_seconds = 0.0;
};

struct ReportDocument {
  std::string version = kToolVersion;
  std::string timestamp;  // empty when suppressed
  std::vector<TaskResult> tasks;
  bool pass = true;
};

struct RunOptions {
  int jobs = 1;
  double tolerance_scale = 1.0;
  bool timestamp = true;
};

/// Runs one task; errors are captured in the result.
TaskResult run_task(const TaskConfig& config, const TaskSpec& task, double tolerance_scale = 1.0);

/// Runs jobs concurrently up to options.jobs; results keep the job order.
ReportDocument run_jobs(const std::vector<std::function<TaskResult()>>& jobs, const RunOptions& options);
ReportDocument run(const TaskConfig& config, const RunOptions& options = {});

/// Multiplies the tolerance of a report and of every absorbed sub-report.
void scale_tolerance(AnomalyReport& report, double factor);

/// Field order is fixed; `timing` adds per-task wall-clock seconds.
nlohmann::json to_json(const ReportDocument& report, bool timing = true);
ReportDocument report_document_from_json(const nlohmann::json& j);
std::string emit(const ReportDocument& report, std::string_view format, bool timing = true);

/// Model kinds accepted in "models", with their parameters.
nlohmann::json model_catalog();

/// Entry point of the specanom executable.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace specanom::cli
