#include "specanom/report.hpp"

#include <cmath>

namespace specanom {

AnomalyReport AnomalyReport::compare(std::string identity, nlohmann::json inputs, cplx lhs, cplx rhs,
                                     double tolerance) {
  if (!(tolerance > 0.0)) throw DomainError("report: tolerance must be positive");
  AnomalyReport r;
  r.identity = std::move(identity);
  r.inputs = std::move(inputs);
  r.lhs = lhs;
  r.rhs = rhs;
  r.discrepancy = std::abs(lhs - rhs);
  r.tolerance = tolerance;
  r.pass = std::isfinite(r.discrepancy) && r.discrepancy <= tolerance;
  return r;
}

void AnomalyReport::absorb(const std::string& name, const AnomalyReport& sub) {
  details[name] = to_json(sub);
  pass = pass && sub.pass;
}

void AnomalyReport::set_tolerance(double t) {
  if (!(t > 0.0)) throw DomainError("report: tolerance must be positive");
  tolerance = t;
  pass = std::isfinite(discrepancy) && discrepancy <= tolerance;
  for (auto& [name, sub] : details.items()) {
    if (sub.is_object() && sub.contains("pass") && sub.contains("discrepancy") && sub.contains("tolerance")) {
      pass = pass && sub.at("pass").get<bool>();
    }
  }
}

nlohmann::json complex_json(cplx v) { return nlohmann::json{{"re", v.real()}, {"im", v.imag()}}; }

cplx complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

nlohmann::json to_json(const AnomalyReport& r) {
  nlohmann::json j;
  j["identity"] = r.identity;
  j["inputs"] = r.inputs;
  j["lhs"] = complex_json(r.lhs);
  j["rhs"] = complex_json(r.rhs);
  j["discrepancy"] = r.discrepancy;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  if (!r.details.empty()) j["details"] = r.details;
  return j;
}

AnomalyReport report_from_json(const nlohmann::json& j) {
  AnomalyReport r;
  r.identity = j.at("identity").get<std::string>();
  r.inputs = j.at("inputs");
  r.lhs = complex_from_json(j.at("lhs"));
  r.rhs = complex_from_json(j.at("rhs"));
  r.discrepancy = j.at("discrepancy").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.pass = j.at("pass").get<bool>();
  if (j.contains("details")) r.details = j.at("details");
  return r;
}

double wrap_phase(double phase) {
  double p = std::remainder(phase, 2.0 * kPi);
  if (p <= -kPi) p += 2.0 * kPi;
  return p;
}

double DetValue::modulus() const { return std::exp(log_modulus); }

cplx DetValue::value() const { return std::polar(modulus(), phase); }

DetValue DetValue::from_log(cplx log_det, std::string method, double err) {
  return {log_det.real(), wrap_phase(log_det.imag()), std::move(method), err};
}

nlohmann::json to_json(const DetValue& d) {
  return nlohmann::json{{"modulus", d.modulus()}, {"log_modulus", d.log_modulus}, {"phase", d.phase},
                        {"method", d.method}, {"err", d.err}};
}

}  // namespace specanom
