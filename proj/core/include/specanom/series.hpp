#pragma once

#include <vector>

#include "specanom/common.hpp"

namespace specanom::series {

/// Truncated power series Σ c[j] w^j.
using Series = std::vector<cplx>;

inline constexpr std::size_t kDefaultLength = 16;

Series truncate(Series s, std::size_t n);
Series add(const Series& a, const Series& b);
Series scale(const Series& a, cplx c);
Series mul(const Series& a, const Series& b, std::size_t n);
/// exp(f) for f[0] == 0.
Series exp(const Series& f, std::size_t n);
/// log(f) for f[0] == 1.
Series log(const Series& f, std::size_t n);
/// f^r for f[0] == 1.
Series pow(const Series& f, cplx r, std::size_t n);
/// f(g(w)) for g[0] == 0.
Series compose(const Series& f, const Series& g, std::size_t n);
/// 1 + Σ corr[j-1] w^j as a series.
Series one_plus(const std::vector<double>& corrections, std::size_t n);
cplx eval(const Series& s, cplx w);

}  // namespace specanom::series
