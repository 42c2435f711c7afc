#pragma once
// First-order jets on finite samples and the Whitney compatibility modulus.
//
// A jet assigns to each sample point a value and a real-linear differential
// (dz, dzbar).  The remainder ratio
//   R(z, w) = |f(z) - f(w) - df_w(z - w)| / |z - w|
// measures first-order compatibility; sup_R per scale is its modulus.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "core.hpp"
#include "functions.hpp"
#include "plane_sets.hpp"
#include "wirtinger.hpp"

namespace jetplane {

struct Jet1 {
  SetSample sample;
  std::vector<cdouble> value;
  std::vector<cdouble> dz;
  std::vector<cdouble> dzbar;

  std::size_t size() const { return value.size(); }

  RealLinearMap diff_at(std::size_t i) const {
    RealLinearMap L = RealLinearMap::zero(1);
    L.holo[0] = dz[i];
    L.anti[0] = dzbar[i];
    return L;
  }

  void validate() const {
    std::size_t n = sample.points.size();
    if (value.size() != n || dz.size() != n || dzbar.size() != n)
      throw std::invalid_argument("Jet1: field lengths disagree");
    for (std::size_t i = 0; i < n; ++i) {
      require_finite(value[i], "Jet1 value");
      require_finite(dz[i], "Jet1 dz");
      require_finite(dzbar[i], "Jet1 dzbar");
    }
  }
};

struct ModulusRow {
  double scale = 0;
  double sup_R = 0;
  std::size_t pairs = 0;  // ordered pairs with 0 < |z - w| <= scale
};

struct ModulusTable {
  std::vector<ModulusRow> rows;
};

inline constexpr std::size_t kPairBudget = 1000000;

namespace detail {

// Bin update shared by the exact and bucketed scans.  Scales ascending;
// each pair lands in the smallest scale that admits it.
struct ScaleBins {
  std::vector<double> scales;  // ascending
  std::vector<double> sup;
  std::vector<std::size_t> count;

  explicit ScaleBins(std::vector<double> s) : scales(std::move(s)) {
    sup.assign(scales.size(), 0.0);
    count.assign(scales.size(), 0);
  }
  void add(double dist, double R) {
    auto it = std::lower_bound(scales.begin(), scales.end(), dist);
    if (it == scales.end()) return;
    std::size_t k = it - scales.begin();
    sup[k] = std::max(sup[k], R);
    ++count[k];
  }
  // prefix-accumulate: row k covers all pairs with dist <= scales[k]
  void finalize() {
    for (std::size_t k = 1; k < scales.size(); ++k) {
      sup[k] = std::max(sup[k], sup[k - 1]);
      count[k] += count[k - 1];
    }
  }
};

inline double remainder_ratio(const Jet1& jet, std::size_t i, std::size_t j,
                              double dist) {
  cdouble d = jet.sample.points[i] - jet.sample.points[j];
  cdouble rem = jet.value[i] - jet.value[j] - jet.dz[j] * d - jet.dzbar[j] * std::conj(d);
  return std::abs(rem) / dist;
}

}  // namespace detail

// Exact sup of R per scale over all ordered pairs within the scale.  Above
// the pair budget a grid-bucket pass over cells of the largest scale visits
// exactly the pairs that can land in a bin, producing identical rows.
inline ModulusTable whitney_modulus(const Jet1& jet, const std::vector<double>& scales) {
  jet.validate();
  for (double s : scales)
    if (!(s > 0)) throw std::invalid_argument("whitney_modulus: scales must be positive");
  std::size_t n = jet.size();

  std::vector<std::size_t> order(scales.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scales[a] < scales[b]; });
  std::vector<double> asc(scales.size());
  for (std::size_t k = 0; k < order.size(); ++k) asc[k] = scales[order[k]];
  detail::ScaleBins bins(asc);

  double smax = asc.empty() ? 0.0 : asc.back();
  bool bucketed = n * n > kPairBudget;
  if (!bucketed) {
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        double dist = std::abs(jet.sample.points[i] - jet.sample.points[j]);
        if (dist <= 0 || dist > smax) continue;
        bins.add(dist, detail::remainder_ratio(jet, i, j, dist));
      }
  } else {
    double x0, x1, y0, y1;
    jet.sample.bbox(x0, x1, y0, y1);
    double cell = smax;
    long bx = static_cast<long>((x1 - x0) / cell) + 1;
    long by = static_cast<long>((y1 - y0) / cell) + 1;
    std::unordered_map<long long, std::vector<std::size_t>> buckets;
    auto key = [bx](long cx, long cy) { return static_cast<long long>(cy) * bx + cx; };
    for (std::size_t i = 0; i < n; ++i) {
      long cx = static_cast<long>((jet.sample.points[i].real() - x0) / cell);
      long cy = static_cast<long>((jet.sample.points[i].imag() - y0) / cell);
      buckets[key(cx, cy)].push_back(i);
    }
    for (std::size_t j = 0; j < n; ++j) {
      long cx = static_cast<long>((jet.sample.points[j].real() - x0) / cell);
      long cy = static_cast<long>((jet.sample.points[j].imag() - y0) / cell);
      for (long dy = -1; dy <= 1; ++dy)
        for (long dx = -1; dx <= 1; ++dx) {
          long nxc = cx + dx, nyc = cy + dy;
          if (nxc < 0 || nyc < 0 || nxc >= bx || nyc >= by) continue;
          auto it = buckets.find(key(nxc, nyc));
          if (it == buckets.end()) continue;
          for (std::size_t i : it->second) {
            if (i == j) continue;
            double dist = std::abs(jet.sample.points[i] - jet.sample.points[j]);
            if (dist <= 0 || dist > smax) continue;
            bins.add(dist, detail::remainder_ratio(jet, i, j, dist));
          }
        }
    }
  }
  bins.finalize();

  ModulusTable out;
  out.rows.resize(scales.size());
  for (std::size_t k = 0; k < order.size(); ++k)
    out.rows[order[k]] = ModulusRow{scales[order[k]], bins.sup[k], bins.count[k]};
  return out;
}

struct HolderFit {
  double exponent = 0;   // slope of log sup_R against log scale
  double amplitude = 0;  // exp(intercept)
  int rows_used = 0;
};

// Least-squares fit on rows that actually saw pairs and a nonzero sup.
inline HolderFit holder_fit(const ModulusTable& table) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const ModulusRow& r : table.rows) {
    if (r.pairs == 0 || !(r.sup_R > 0)) continue;
    double x = std::log(r.scale), y = std::log(r.sup_R);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 3) throw std::invalid_argument("holder_fit: fewer than 3 usable scales");
  HolderFit fit;
  fit.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.amplitude = std::exp((sy - fit.exponent * sx) / m);
  fit.rows_used = m;
  return fit;
}

inline Jet1 restrict_smooth(const SmoothFunction& F, const SetSample& sample) {
  if (!F.has_derivatives)
    throw std::invalid_argument("restrict_smooth: function lacks derivatives");
  Jet1 jet;
  jet.sample = sample;
  std::size_t n = sample.points.size();
  jet.value.resize(n);
  jet.dz.resize(n);
  jet.dzbar.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    cdouble z = sample.points[i];
    jet.value[i] = F.f(z);
    jet.dz[i] = F.dz(z);
    jet.dzbar[i] = F.dzbar(z);
    require_finite(jet.value[i], "restrict_smooth value");
    require_finite(jet.dz[i], "restrict_smooth dz");
    require_finite(jet.dzbar[i], "restrict_smooth dzbar");
  }
  return jet;
}

struct DbarDefect {
  double max_abs = 0;
  std::size_t argmax = 0;
};

inline DbarDefect dbar_defect(const Jet1& jet) {
  DbarDefect d;
  for (std::size_t i = 0; i < jet.size(); ++i) {
    double a = std::abs(jet.dzbar[i]);
    if (a > d.max_abs) {
      d.max_abs = a;
      d.argmax = i;
    }
  }
  return d;
}

struct LocallyConstant {
  Jet1 jet;               // zero differentials
  double uniform_error = 0;
  int level = 0;
};

// Constant value per generation-`level` cell: the value of f at the cell's
// representative.  Error is the sup over points of |f(z) - value|.
inline LocallyConstant locally_constant_jet(const SetSample& sample,
                                            const std::function<cdouble(cdouble)>& f,
                                            int level) {
  if (sample.kind != "ifs" || !sample.generator)
    throw std::invalid_argument("locally_constant_jet: sample has no cell tree");
  if (level < 0 || level > sample.depth)
    throw std::invalid_argument("locally_constant_jet: level outside [0, depth]");
  LocallyConstant out;
  out.level = level;
  out.jet.sample = sample;
  std::size_t n = sample.points.size();
  out.jet.value.resize(n);
  out.jet.dz.assign(n, 0.0);
  out.jet.dzbar.assign(n, 0.0);

  std::unordered_map<std::string, cdouble> cache;
  for (std::size_t i = 0; i < n; ++i) {
    std::string prefix = sample.cells[i].substr(0, level);
    auto it = cache.find(prefix);
    cdouble v;
    if (it == cache.end()) {
      v = f(cell_representative(sample, sample.cells[i], level));
      require_finite(v, "locally_constant_jet");
      cache.emplace(prefix, v);
    } else {
      v = it->second;
    }
    out.jet.value[i] = v;
    double err = std::abs(f(sample.points[i]) - v);
    out.uniform_error = std::max(out.uniform_error, err);
  }
  return out;
}

// The parameter as a function on a snowflake curve, with zero differential.
// Since |t - s| ~ |z(t) - z(s)|^{1/alpha}, the modulus of this jet grows like
// scale^{1/alpha - 1}.
inline Jet1 snowflake_zero_diff_jet(const SnowflakeCurve& curve) {
  if (!(curve.alpha < 1.0))
    throw std::invalid_argument("snowflake_zero_diff_jet: need alpha < 1");
  Jet1 jet;
  jet.sample = curve.to_sample();
  std::size_t n = curve.size();
  jet.value.resize(n);
  jet.dz.assign(n, 0.0);
  jet.dzbar.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) jet.value[i] = curve.ts[i];
  return jet;
}

}  // namespace jetplane
