#include "specanom/series.hpp"

#include <algorithm>

namespace specanom::series {

Series truncate(Series s, std::size_t n) {
  if (s.size() > n) s.resize(n);
  return s;
}

Series add(const Series& a, const Series& b) {
  Series out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Series scale(const Series& a, cplx c) {
  Series out = a;
  for (auto& v : out) v *= c;
  return out;
}

Series mul(const Series& a, const Series& b, std::size_t n) {
  if (a.empty() || b.empty()) return {};
  Series out(std::min(n, a.size() + b.size() - 1), 0.0);
  for (std::size_t i = 0; i < a.size() && i < out.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < out.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Series exp(const Series& f, std::size_t n) {
  // g' = f' g, so k g_k = Σ_{j=1..k} j f_j g_{k-j}.
  if (!f.empty() && std::abs(f[0]) > 0.0) throw DomainError("series::exp needs a zero constant term");
  Series g(n, 0.0);
  if (n == 0) return g;
  g[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    cplx acc = 0.0;
    for (std::size_t j = 1; j <= k && j < f.size(); ++j) acc += static_cast<double>(j) * f[j] * g[k - j];
    g[k] = acc / static_cast<double>(k);
  }
  return g;
}

Series log(const Series& f, std::size_t n) {
  // g' = f'/f, so k g_k = k f_k − Σ_{j=1..k-1} j g_j f_{k-j}.
  if (f.empty() || std::abs(f[0] - 1.0) > 1e-15) throw DomainError("series::log needs a unit constant term");
  Series g(n, 0.0);
  auto at = [&](std::size_t i) { return i < f.size() ? f[i] : cplx(0.0); };
  for (std::size_t k = 1; k < n; ++k) {
    cplx acc = static_cast<double>(k) * at(k);
    for (std::size_t j = 1; j < k; ++j) acc -= static_cast<double>(j) * g[j] * at(k - j);
    g[k] = acc / static_cast<double>(k);
  }
  return g;
}

Series pow(const Series& f, cplx r, std::size_t n) { return exp(scale(log(f, n), r), n); }

Series compose(const Series& f, const Series& g, std::size_t n) {
  if (!g.empty() && std::abs(g[0]) > 0.0) throw DomainError("series::compose needs g(0) == 0");
  Series out(n, 0.0);
  Series power(n, 0.0);
  if (n == 0) return out;
  power[0] = 1.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) out[i] += f[j] * power[i];
    power = mul(power, g, n);
    power.resize(n, 0.0);
  }
  return out;
}

Series one_plus(const std::vector<double>& corrections, std::size_t n) {
  Series s(std::max<std::size_t>(1, std::min(n, corrections.size() + 1)), 0.0);
  s[0] = 1.0;
  for (std::size_t j = 0; j + 1 < s.size(); ++j) s[j + 1] = corrections[j];
  return s;
}

cplx eval(const Series& s, cplx w) {
  cplx acc = 0.0;
  for (auto it = s.rbegin(); it != s.rend(); ++it) acc = acc * w + *it;
  return acc;
}

}  // namespace specanom::series
