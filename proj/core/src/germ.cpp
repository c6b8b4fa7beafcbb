#include "specanom/germ.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace specanom {

std::string to_string(GermMethod method) {
  switch (method) {
    case GermMethod::hurwitz:
      return "hurwitz";
    case GermMethod::euler_maclaurin:
      return "euler_maclaurin";
    case GermMethod::heat_mellin:
      return "heat_mellin";
  }
  return "unknown";
}

MeromorphicGerm& MeromorphicGerm::operator+=(const MeromorphicGerm& other) {
  double_pole += other.double_pole;
  residue += other.residue;
  finite_part += other.finite_part;
  if (next && other.next) {
    *next += *other.next;
  } else {
    next.reset();
  }
  err += other.err;
  if (other.method != GermMethod::hurwitz) method = other.method;
  return *this;
}

MeromorphicGerm& MeromorphicGerm::operator*=(cplx c) {
  double_pole *= c;
  residue *= c;
  finite_part *= c;
  if (next) *next *= c;
  err *= std::abs(c);
  return *this;
}

nlohmann::json to_json(const MeromorphicGerm& germ) {
  auto z = [](cplx v) { return nlohmann::json{{"re", v.real()}, {"im", v.imag()}}; };
  nlohmann::json j;
  j["residue"] = z(germ.residue);
  j["finite_part"] = z(germ.finite_part);
  j["next"] = germ.next ? z(*germ.next) : nlohmann::json(nullptr);
  j["method"] = to_string(germ.method);
  j["err"] = germ.err;
  return j;
}

MeromorphicGerm laurent_at(const std::function<cplx(cplx)>& f, cplx center, double radius, int points) {
  if (points < 16 || !(radius > 0.0)) throw DomainError("laurent_at: need radius > 0 and at least 16 points");
  std::vector<cplx> samples(static_cast<std::size_t>(points));
  double scale = 0.0;
  for (int i = 0; i < points; ++i) {
    const double theta = 2.0 * kPi * (i + 0.5) / points;
    const cplx u = std::polar(1.0, theta);
    const cplx v = f(center + radius * u);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ContinuationError("laurent_at: non-finite sample on the contour");
    }
    samples[static_cast<std::size_t>(i)] = v;
    scale = std::max(scale, std::abs(v));
  }
  // c_k = (1/N) Σ f(z_i) (radius·u_i)^{-k}.
  auto coeff = [&](int k) {
    cplx acc = 0.0;
    for (int i = 0; i < points; ++i) {
      const double theta = 2.0 * kPi * (i + 0.5) / points;
      acc += samples[static_cast<std::size_t>(i)] * std::polar(1.0, -k * theta);
    }
    return acc / static_cast<double>(points) * std::pow(radius, -k);
  };
  MeromorphicGerm g;
  g.double_pole = coeff(-2);
  g.residue = coeff(-1);
  g.finite_part = coeff(0);
  g.next = coeff(1);
  const double spurious = std::max(std::abs(coeff(-3)) / (radius * radius * radius),
                                   std::abs(coeff(-4)) / std::pow(radius, 4));
  g.err = spurious + 64.0 * std::numeric_limits<double>::epsilon() * scale;
  return g;
}

}  // namespace specanom
