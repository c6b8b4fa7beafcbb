#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "specanom/common.hpp"

namespace specanom {

/// Result of checking lhs == rhs for one identity.
struct AnomalyReport {
  std::string identity;
  nlohmann::json inputs = nlohmann::json::object();
  cplx lhs = 0.0;
  cplx rhs = 0.0;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// Auxiliary values (conventions realized, sub-checks); serialized as "details".
  nlohmann::json details = nlohmann::json::object();

  [[nodiscard]] static AnomalyReport compare(std::string identity, nlohmann::json inputs, cplx lhs, cplx rhs,
                                             double tolerance);
  /// Folds a sub-check into this report: pass requires both.
  void absorb(const std::string& name, const AnomalyReport& sub);
  /// Rescales the tolerance and recomputes pass.
  void set_tolerance(double tolerance);
};

nlohmann::json to_json(const AnomalyReport& report);
AnomalyReport report_from_json(const nlohmann::json& j);

/// A regularized determinant modulus·e^{i·phase}.
struct DetValue {
  double log_modulus = 0.0;
  double phase = 0.0;  // radians in (−π, π]
  std::string method;
  double err = 0.0;

  [[nodiscard]] double modulus() const;
  [[nodiscard]] cplx value() const;
  [[nodiscard]] cplx log_value() const { return {log_modulus, phase}; }
  [[nodiscard]] static DetValue from_log(cplx log_det, std::string method, double err);
};

nlohmann::json to_json(const DetValue& det);

/// Wraps an angle to (−π, π].
double wrap_phase(double phase);

nlohmann::json complex_json(cplx v);
cplx complex_from_json(const nlohmann::json& j);

}  // namespace specanom
