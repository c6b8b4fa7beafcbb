#pragma once

#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "specanom/common.hpp"

namespace specanom {

enum class GermMethod { hurwitz, euler_maclaurin, heat_mellin };

std::string to_string(GermMethod method);

/// Laurent data of a spectral function at a point:
/// double_pole/z² + residue/z + finite_part + next·z + ...
struct MeromorphicGerm {
  cplx double_pole = 0.0;
  cplx residue = 0.0;
  cplx finite_part = 0.0;
  std::optional<cplx> next;
  GermMethod method = GermMethod::hurwitz;
  double err = 0.0;

  MeromorphicGerm& operator+=(const MeromorphicGerm& other);
  MeromorphicGerm& operator*=(cplx c);
  friend MeromorphicGerm operator+(MeromorphicGerm a, const MeromorphicGerm& b) { return a += b; }
  friend MeromorphicGerm operator-(MeromorphicGerm a, const MeromorphicGerm& b) { return a += b * cplx(-1.0); }
  friend MeromorphicGerm operator*(MeromorphicGerm a, cplx c) { return a *= c; }
  friend MeromorphicGerm operator*(cplx c, MeromorphicGerm a) { return a *= c; }
};

nlohmann::json to_json(const MeromorphicGerm& germ);

/// Laurent coefficients c_{-2..1} of f around `center` from `points` samples
/// on the circle |z − center| = radius (trapezoidal Cauchy integrals). The
/// error estimate combines the spurious c_{-3}, c_{-4} with rounding.
MeromorphicGerm laurent_at(const std::function<cplx(cplx)>& f, cplx center, double radius, int points = 64);

}  // namespace specanom
