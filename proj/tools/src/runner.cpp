#include <atomic>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <sstream>
#include <thread>

#include "internal.hpp"
#include "specanom/czeta.hpp"

namespace specanom::cli {
namespace {

using detail::number_from_json;
using detail::resolve_model;

double default_tolerance(const Spectrum& s) { return s.lattice() ? kToleranceTorus : kTolerance1D; }

AnomalyReport expectation(const std::string& name, const nlohmann::json& inputs, double value, double expected,
                          double tolerance) {
  return AnomalyReport::compare(name, inputs, value, expected, tolerance);
}

void run_invariants(const TaskConfig& c, const TaskSpec& t, TaskResult& r) {
  const Spectrum s = resolve_model(c, t.params.at("model"));
  const double tol = default_tolerance(s);
  const nlohmann::json inputs{{"model", t.params.at("model")}};
  std::optional<double> phase;
  if (s.flags().self_adjoint && s.is_real()) {
    const double eta_value = eta(s);
    r.data["eta"] = eta_value;
    const Spectrum abs_spec = transform(s, SpectrumOp::abs());
    r.data["zeta_abs_at_zero"] = zeta(abs_spec, 0.0).real();
    bool negative = false;
    for (const auto& ray : s.rays()) negative = negative || ray.scale.real() < 0.0;
    for (const auto& e : s.extras()) negative = negative || e.value.real() < 0.0;
    if (negative) {
      const SelfAdjointDet sa = phase_and_det_selfadjoint(s, tol);
      r.data["det"] = to_json(sa.det);
      r.data["det_direct"] = to_json(sa.direct);
      r.data["realized_sign"] = sa.realized_sign;
      r.entries.push_back(sa.log_trace_check);
      phase = sa.det.phase;
    }
  }
  if (!phase) {
    const DetValue d = det_zeta(s);
    r.data["det"] = to_json(d);
    phase = d.phase;
  }
  if (!t.params.contains("expect")) return;
  const auto& det = r.data.at("det");
  const double modulus = std::exp(det.at("log_modulus").get<double>());
  for (const auto& [key, v] : t.params.at("expect").items()) {
    const double expected = number_from_json(v);
    double value = 0.0;
    if (key == "eta" || key == "zeta_abs_at_zero") {
      if (!r.data.contains(key)) throw DomainError("invariants: '" + key + "' needs a self-adjoint spectrum");
      value = r.data.at(key).get<double>();
    } else if (key == "det_modulus") {
      value = modulus;
    } else if (key == "phase") {
      value = *phase;
    } else {
      value = std::abs(*phase);
    }
    const double scale = key == "det_modulus" ? std::max(1.0, std::abs(expected)) : 1.0;
    r.entries.push_back(expectation(key, inputs, value, expected, tol * scale));
  }
}

void run_task_body(const TaskConfig& c, const TaskSpec& t, TaskResult& r) {
  const auto& p = t.params;
  const std::string& k = t.kind;
  if (k == "invariants") {
    run_invariants(c, t, r);
  } else if (k == "anomaly.mult") {
    r.entries.push_back(mult_anomaly(resolve_model(c, p.at("a")), resolve_model(c, p.at("b"))));
  } else if (k == "anomaly.pfaffian") {
    r.entries.push_back(pfaffian_anomaly(resolve_model(c, p.at("model"))));
  } else if (k == "anomaly.okikiolu") {
    r.entries.push_back(
        okikiolu_diff(resolve_model(c, p.at("a")), resolve_model(c, p.at("q1")), resolve_model(c, p.at("q2"))));
  } else if (k == "anomaly.jacobian") {
    r.entries.push_back(jacobian_anomaly(resolve_model(c, p.at("q")), resolve_model(c, p.at("c"))));
  } else if (k == "flow") {
    const OperatorFamily f = family_from_json(p.at("family"));
    const FlowResult flow = spectral_flow(f);
    r.data = to_json(flow);
    if (p.contains("expect_sf")) {
      r.entries.push_back(AnomalyReport::compare("spectral_flow", {{"family", f.name}}, flow.sf,
                                                 p.at("expect_sf").get<int>(), 0.5));
    }
    if (p.contains("shift")) r.entries.push_back(shift_check(f, number_from_json(p.at("shift"))));
  } else if (k == "eta_variation") {
    r.entries.push_back(eta_variation_report(family_from_json(p.at("family"))));
  } else if (k == "phase_difference") {
    const OperatorFamily f = family_from_json(p.at("family"));
    AnomalyReport rep = phase_difference(f);
    if (p.contains("expect")) {
      rep.absorb("expected", AnomalyReport::compare("phase_difference_expected", {{"family", f.name}}, rep.lhs,
                                                    number_from_json(p.at("expect")), rep.tolerance));
    }
    r.entries.push_back(std::move(rep));
  } else if (k == "radul") {
    const ExactSymbol a = symbol_from_json(p.at("a"));
    const ExactSymbol b = symbol_from_json(p.at("b"));
    const Spectrum w = resolve_model(c, p.at("weight"));
    const NumericSymbol q = multiplier_to_symbol(Multiplier::from_spectrum(w));
    const cplx symbol_side = radul_cocycle(to_numeric(a), to_numeric(b), q);
    const cplx operator_side = radul_operator_side(a, b, w);
    AnomalyReport rep = AnomalyReport::compare("radul", {{"a", p.at("a")}, {"b", p.at("b")}, {"weight", p.at("weight")}},
                                               symbol_side, operator_side, kTolerance1D);
    if (p.contains("expect")) {
      rep.absorb("expected", AnomalyReport::compare("radul_expected", rep.inputs, symbol_side,
                                                    number_from_json(p.at("expect")), kTolerance1D));
    }
    r.entries.push_back(std::move(rep));
  } else if (k == "gamma_check") {
    const Spectrum q = resolve_model(c, p.at("q"));
    r.entries.push_back(gamma_relation_check(detail::multiplier_from_json(c, p.at("a"), q), q));
    r.data["gamma_sign"] = kHeatZetaGammaSign;
  } else {
    throw ConfigError("unknown task kind '" + k + "'");
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

void scale_tolerance(AnomalyReport& report, double factor) {
  if (factor == 1.0) return;
  for (auto& [name, sub] : report.details.items()) {
    if (sub.is_object() && sub.contains("pass") && sub.contains("discrepancy") && sub.contains("tolerance")) {
      AnomalyReport inner = report_from_json(sub);
      scale_tolerance(inner, factor);
      sub = to_json(inner);
    }
  }
  report.set_tolerance(report.tolerance * factor);
}

TaskResult run_task(const TaskConfig& config, const TaskSpec& task, double tolerance_scale) {
  TaskResult r;
  r.id = task.id;
  r.kind = task.kind;
  const auto start = std::chrono::steady_clock::now();
  try {
    run_task_body(config, task, r);
    r.pass = true;
    for (auto& e : r.entries) {
      if (task.tolerance) e.set_tolerance(*task.tolerance);
      scale_tolerance(e, tolerance_scale);
      r.pass = r.pass && e.pass;
    }
  } catch (const std::exception& e) {
    r.error = e.what();
    r.pass = false;
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

ReportDocument run_jobs(const std::vector<std::function<TaskResult()>>& jobs, const RunOptions& options) {
  ReportDocument doc;
  if (options.timestamp) doc.timestamp = utc_timestamp();
  doc.tasks.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) doc.tasks[i] = jobs[i]();
  };
  const auto n = static_cast<std::size_t>(std::max(1, options.jobs));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < std::min(n, jobs.size()); ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& t : doc.tasks) doc.pass = doc.pass && t.pass;
  return doc;
}

ReportDocument run(const TaskConfig& config, const RunOptions& options) {
  std::vector<std::function<TaskResult()>> jobs;
  for (const auto& t : config.tasks) {
    jobs.emplace_back([&config, &t, &options] { return run_task(config, t, options.tolerance_scale); });
  }
  return run_jobs(jobs, options);
}

nlohmann::json to_json(const ReportDocument& report, bool timing) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& t : report.tasks) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : t.entries) entries.push_back(to_json(e));
    nlohmann::json j{{"id", t.id}, {"kind", t.kind}, {"pass", t.pass}, {"entries", entries}, {"data", t.data}};
    if (!t.error.empty()) j["error"] = t.error;
    if (timing) j["wall_seconds"] = t.wall_seconds;
    tasks.push_back(std::move(j));
  }
  nlohmann::json j{{"version", report.version}, {"pass", report.pass}, {"tasks", tasks}};
  if (!report.timestamp.empty()) j["timestamp"] = report.timestamp;
  return j;
}

ReportDocument report_document_from_json(const nlohmann::json& j) {
  ReportDocument doc;
  doc.version = j.at("version").get<std::string>();
  doc.pass = j.at("pass").get<bool>();
  doc.timestamp = j.value("timestamp", std::string());
  for (const auto& t : j.at("tasks")) {
    TaskResult r;
    r.id = t.at("id").get<std::string>();
    r.kind = t.at("kind").get<std::string>();
    r.pass = t.at("pass").get<bool>();
    r.error = t.value("error", std::string());
    r.data = t.at("data");
    r.wall_seconds = t.value("wall_seconds", 0.0);
    for (const auto& e : t.at("entries")) r.entries.push_back(report_from_json(e));
    doc.tasks.push_back(std::move(r));
  }
  return doc;
}

std::string emit(const ReportDocument& report, std::string_view format, bool timing) {
  if (format == "json") return to_json(report, timing).dump(2) + "\n";
  if (format != "csv") throw ConfigError("unknown output format '" + std::string(format) + "'");
  std::string out = "task,identity,lhs_re,lhs_im,rhs_re,rhs_im,discrepancy,pass\n";
  for (const auto& t : report.tasks) {
    if (!t.error.empty()) {
      out += csv_field(t.id) + "," + csv_field("error: " + t.error) + ",,,,,,false\n";
      continue;
    }
    for (const auto& e : t.entries) {
      out += csv_field(t.id) + "," + csv_field(e.identity) + "," + csv_number(e.lhs.real()) + "," +
             csv_number(e.lhs.imag()) + "," + csv_number(e.rhs.real()) + "," + csv_number(e.rhs.imag()) + "," +
             csv_number(e.discrepancy) + "," + (e.pass ? "true" : "false") + "\n";
    }
  }
  return out;
}

}  // namespace specanom::cli
