#pragma once
// Commutator kernel K(i,j) = (b(z_i) - b(z_j))/(z_i - z_j) on set samples,
// with diagonal-regularity profiles distinguishing holomorphic from
// non-holomorphic symbols.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "functions.hpp"
#include "jets.hpp"
#include "plane_sets.hpp"

namespace jetplane {

// Dense-matrix point cap; larger samples are subsampled with a fixed seed.
inline constexpr std::size_t kKernelCap = 20000;

namespace detail {

// Uniform index in [0, bound) from a raw 64-bit generator, by rejection.
// Avoids std::uniform_int_distribution so streams are compiler-independent.
template <class Rng>
std::uint64_t bounded_index(Rng& rng, std::uint64_t bound) {
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                        std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % bound;
}

// Exact diameter of a planar point set: direct scan for small sets, convex
// hull plus rotating calipers otherwise.
inline double point_set_diameter(std::vector<std::array<double, 2>>& pts) {
  std::size_t m = pts.size();
  if (m < 2) return 0;
  auto d2 = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
    double dx = a[0] - b[0], dy = a[1] - b[1];
    return dx * dx + dy * dy;
  };
  if (m <= 96) {
    double best = 0;
    for (std::size_t i = 0; i + 1 < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) best = std::max(best, d2(pts[i], pts[j]));
    return std::sqrt(best);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  m = pts.size();
  if (m < 2) return 0;
  auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a,
                  const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  // Monotone chain with strict turns: hull is strictly convex, CCW.
  std::vector<std::array<double, 2>> hull(2 * m);
  std::size_t k = 0;
  for (std::size_t i = 0; i < m; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = m - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  k = hull.size();
  if (k == 1) return 0;
  if (k == 2) return std::sqrt(d2(hull[0], hull[1]));
  double best = 0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t ni = (i + 1) % k;
    auto edge = [&](const std::array<double, 2>& p) {
      return (hull[ni][0] - hull[i][0]) * (p[1] - hull[i][1]) -
             (hull[ni][1] - hull[i][1]) * (p[0] - hull[i][0]);
    };
    while (edge(hull[(j + 1) % k]) > edge(hull[j])) j = (j + 1) % k;
    best = std::max({best, d2(hull[i], hull[j]), d2(hull[ni], hull[j])});
  }
  return std::sqrt(best);
}

}  // namespace detail

struct KernelMatrix {
  SetSample base;
  std::size_t n = 0;
  std::vector<cdouble> entries;  // row-major; diagonal slots carry `diagonal`
  std::vector<cdouble> diagonal;
  bool has_diagonal = false;

  cdouble at(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

namespace detail {

inline KernelMatrix kernel_from_values(SetSample sample, std::vector<cdouble> values,
                                       std::vector<cdouble> diag, bool has_diag,
                                       std::uint64_t seed, std::size_t cap) {
  if (sample.points.size() != values.size())
    throw std::invalid_argument("build_kernel: one value per point required");
  if (cap < 2) throw std::invalid_argument("build_kernel: cap below 2");
  if (sample.points.size() > cap) {
    std::mt19937_64 rng(seed);
    std::size_t total = sample.points.size();
    std::vector<std::size_t> idx(total);
    for (std::size_t i = 0; i < total; ++i) idx[i] = i;
    for (std::size_t i = 0; i < cap; ++i)
      std::swap(idx[i], idx[i + detail::bounded_index(rng, total - i)]);
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
    SetSample sub;
    sub.h = sample.h;
    sub.depth = sample.depth;
    sub.kind = sample.kind;
    sub.generator = sample.generator;
    sub.base = sample.base;
    std::vector<cdouble> v2, d2;
    for (std::size_t i : idx) {
      sub.points.push_back(sample.points[i]);
      if (!sample.cells.empty()) sub.cells.push_back(sample.cells[i]);
      v2.push_back(values[i]);
      if (has_diag) d2.push_back(diag[i]);
    }
    sample = std::move(sub);
    values = std::move(v2);
    diag = std::move(d2);
  }
  KernelMatrix K;
  K.n = sample.points.size();
  K.base = std::move(sample);
  K.has_diagonal = has_diag;
  for (cdouble v : values) require_finite(v, "build_kernel: symbol value");
  K.entries.assign(K.n * K.n, cdouble(0, 0));
  if (has_diag) {
    K.diagonal = diag;
    for (std::size_t i = 0; i < K.n; ++i) K.entries[i * K.n + i] = diag[i];
  }
  const std::vector<cdouble>& z = K.base.points;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < (std::ptrdiff_t)K.n; ++i)
    for (std::size_t j = i + 1; j < K.n; ++j) {
      cdouble q = (values[i] - values[j]) / (z[i] - z[j]);
      K.entries[i * K.n + j] = q;
      K.entries[j * K.n + i] = q;
    }
  for (cdouble q : K.entries)
    if (!is_finite(q)) throw NonFiniteValue("build_kernel: kernel entry");
  return K;
}

}  // namespace detail

inline KernelMatrix build_kernel(const SmoothFunction& b, const SetSample& sample,
                                 std::uint64_t seed = 0, std::size_t cap = kKernelCap) {
  std::vector<cdouble> values(sample.points.size());
  std::vector<cdouble> diag;
  for (std::size_t i = 0; i < sample.points.size(); ++i) values[i] = b.f(sample.points[i]);
  if (b.has_derivatives) {
    diag.resize(sample.points.size());
    for (std::size_t i = 0; i < sample.points.size(); ++i)
      diag[i] = b.dz(sample.points[i]);
  }
  return detail::kernel_from_values(sample, std::move(values), std::move(diag),
                                    b.has_derivatives, seed, cap);
}

inline KernelMatrix build_kernel(const Jet1& jet, std::uint64_t seed = 0,
                                 std::size_t cap = kKernelCap) {
  return detail::kernel_from_values(jet.sample, jet.value, jet.dz, true, seed, cap);
}

struct ProfileRow {
  double scale = 0;
  double osc = 0;     // max over pairs |z_i - z_j| <= s of |K(i,j) - diagonal(i)|
  double angvar = 0;  // max over i of diam{K(i,j) : 0 < |z_i - z_j| <= s}
  std::size_t pairs = 0;
  bool has_osc = false;
};

struct DiagonalProfile {
  std::vector<ProfileRow> rows;
  bool has_diagonal = false;
};

inline DiagonalProfile diagonal_profile(const KernelMatrix& K,
                                        const std::vector<double>& scales) {
  DiagonalProfile prof;
  prof.has_diagonal = K.has_diagonal;
  const std::vector<cdouble>& z = K.base.points;
  for (double s : scales) {
    if (!(s > 0)) throw std::invalid_argument("diagonal_profile: scales must be positive");
    double osc = 0, angvar = 0;
    std::size_t pairs = 0;
#pragma omp parallel reduction(max : osc, angvar) reduction(+ : pairs)
    {
      std::vector<std::array<double, 2>> vals;
#pragma omp for schedule(static)
      for (std::ptrdiff_t i = 0; i < (std::ptrdiff_t)K.n; ++i) {
        vals.clear();
        for (std::size_t j = 0; j < K.n; ++j) {
          if ((std::size_t)i == j) continue;
          if (std::abs(z[i] - z[j]) > s) continue;
          cdouble q = K.at(i, j);
          vals.push_back({q.real(), q.imag()});
          ++pairs;
          if (K.has_diagonal) osc = std::max(osc, std::abs(q - K.diagonal[i]));
        }
        angvar = std::max(angvar, detail::point_set_diameter(vals));
      }
    }
    if (pairs == 0) continue;  // row absent
    ProfileRow row;
    row.scale = s;
    row.osc = osc;
    row.angvar = angvar;
    row.pairs = pairs;
    row.has_osc = K.has_diagonal;
    prof.rows.push_back(row);
  }
  return prof;
}

struct RegularityVerdict {
  bool holomorphic_like = false;
  double exponent = 0;
  bool degraded = false;  // no diagonal available, angvar-only verdict
};

// Classifier thresholds 0.5 (osc slope) and 0.2 (smallest-scale angvar) are
// calibrated on the b = z^2 and b = conj(z) extremes.
inline RegularityVerdict regularity_verdict(const DiagonalProfile& prof) {
  if (prof.rows.size() < 3)
    throw std::invalid_argument("regularity_verdict: need at least 3 scale rows");
  std::vector<ProfileRow> rows = prof.rows;
  std::sort(rows.begin(), rows.end(),
            [](const ProfileRow& a, const ProfileRow& b) { return a.scale < b.scale; });
  double angvar_small = rows.front().angvar;
  auto fit_slope = [](const std::vector<std::array<double, 2>>& xy) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& p : xy) {
      sx += p[0];
      sy += p[1];
      sxx += p[0] * p[0];
      sxy += p[0] * p[1];
    }
    double n = (double)xy.size();
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  RegularityVerdict v;
  std::vector<std::array<double, 2>> xy;
  if (prof.has_diagonal) {
    for (const ProfileRow& r : rows)
      if (r.osc > 0) xy.push_back({std::log(r.scale), std::log(r.osc)});
    if (xy.size() >= 2) {
      v.exponent = fit_slope(xy);
      v.holomorphic_like = v.exponent >= 0.5 && angvar_small <= 0.2;
    } else {
      // osc vanishes identically (affine symbol): trivially regular.
      v.exponent = std::numeric_limits<double>::quiet_NaN();
      v.holomorphic_like = angvar_small <= 0.2;
    }
  } else {
    v.degraded = true;
    for (const ProfileRow& r : rows)
      if (r.angvar > 0) xy.push_back({std::log(r.scale), std::log(r.angvar)});
    v.exponent = xy.size() >= 2 ? fit_slope(xy) : std::numeric_limits<double>::quiet_NaN();
    v.holomorphic_like = angvar_small <= 0.2;
  }
  return v;
}

}  // namespace jetplane
