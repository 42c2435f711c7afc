#pragma once
// Finite samplings of planar compacta: self-similar attractors, snowflake
// curves, and piecewise-smooth regions, plus rasterized neighborhoods.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "grid.hpp"

namespace jetplane {

struct IfsMap {
  double rho = 0;   // contraction ratio, 0 < rho < 1
  double theta = 0; // rotation angle
  cdouble trans;    // translation

  cdouble factor() const { return rho * cdouble(std::cos(theta), std::sin(theta)); }
  cdouble apply(cdouble z) const { return factor() * z + trans; }
};

struct IfsSpec {
  std::vector<IfsMap> maps;

  void validate() const {
    if (maps.empty()) throw std::invalid_argument("IfsSpec: no maps");
    for (const IfsMap& m : maps)
      if (!(m.rho > 0) || !(m.rho < 1))
        throw std::invalid_argument("IfsSpec: contraction ratio outside (0,1)");
  }
  double max_rho() const {
    double r = 0;
    for (const IfsMap& m : maps) r = std::max(r, m.rho);
    return r;
  }
  double max_trans() const {
    double t = 0;
    for (const IfsMap& m : maps) t = std::max(t, std::abs(m.trans));
    return t;
  }
  // The attractor lies in the ball of this radius about the origin.
  double radius_bound() const { return max_trans() / (1.0 - max_rho()); }
  double diam_bound() const { return 2.0 * radius_bound(); }
  // Fixed point of the first map; images of an attractor point stay inside.
  cdouble base_point() const { return maps[0].trans / (1.0 - maps[0].factor()); }

  // Four contractions by 1/4 toward the corners of the unit square.
  static IfsSpec four_corner() {
    IfsSpec s;
    s.maps = {{0.25, 0.0, cdouble(0, 0)},
              {0.25, 0.0, cdouble(0.75, 0)},
              {0.25, 0.0, cdouble(0, 0.75)},
              {0.25, 0.0, cdouble(0.75, 0.75)}};
    return s;
  }
  // Product of two middle-thirds constructions in the unit square.
  static IfsSpec middle_thirds_square() {
    IfsSpec s;
    double r = 1.0 / 3.0;
    s.maps = {{r, 0.0, cdouble(0, 0)},
              {r, 0.0, cdouble(2.0 / 3.0, 0)},
              {r, 0.0, cdouble(0, 2.0 / 3.0)},
              {r, 0.0, cdouble(2.0 / 3.0, 2.0 / 3.0)}};
    return s;
  }
};

// One representative point per generation-m cell, tagged by its word.
struct SetSample {
  std::vector<cdouble> points;
  std::vector<std::string> cells;
  double h = 0;       // every attractor/curve point is within h of a sample point
  int depth = 0;
  std::string kind;   // "ifs", "curve", or "points"
  std::optional<IfsSpec> generator;
  cdouble base = 0;

  std::size_t size() const { return points.size(); }

  void bbox(double& x0, double& x1, double& y0, double& y1) const {
    x0 = y0 = 1e300;
    x1 = y1 = -1e300;
    for (cdouble p : points) {
      x0 = std::min(x0, p.real());
      x1 = std::max(x1, p.real());
      y0 = std::min(y0, p.imag());
      y1 = std::max(y1, p.imag());
    }
  }
  double bbox_diameter() const {
    double x0, x1, y0, y1;
    bbox(x0, x1, y0, y1);
    return std::hypot(x1 - x0, y1 - y0);
  }
};

namespace detail {

inline char word_char(std::size_t k) {
  return k < 10 ? static_cast<char>('0' + k) : static_cast<char>('a' + k - 10);
}

inline std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > kDefaultBudget * 1000ull / std::max<std::size_t>(b, 1)) return SIZE_MAX;
    r *= b;
  }
  return r;
}

}  // namespace detail

// Enumerates all words of the given depth in lexicographic order and places
// one representative per cell: the image of the base point under the word.
inline SetSample ifs_sample(const IfsSpec& spec, int depth) {
  spec.validate();
  if (depth < 0) throw std::invalid_argument("ifs_sample: negative depth");
  std::size_t K = spec.maps.size();
  if (K > 36) throw std::invalid_argument("ifs_sample: more than 36 maps");
  std::size_t total = detail::ipow(K, depth);
  check_budget(total, "ifs_sample");

  cdouble base = spec.base_point();
  // Affine composition along each word: z -> a z + b.
  struct Aff { cdouble a, b; std::string word; };
  std::vector<Aff> level = {{cdouble(1, 0), cdouble(0, 0), std::string()}};
  for (int d = 0; d < depth; ++d) {
    std::vector<Aff> next;
    next.reserve(level.size() * K);
    for (const Aff& w : level)
      for (std::size_t k = 0; k < K; ++k)
        next.push_back({w.a * spec.maps[k].factor(),
                        w.a * spec.maps[k].trans + w.b,
                        w.word + detail::word_char(k)});
    level.swap(next);
  }

  SetSample s;
  s.kind = "ifs";
  s.depth = depth;
  s.generator = spec;
  s.base = base;
  s.h = std::pow(spec.max_rho(), depth) * spec.diam_bound();
  s.points.reserve(level.size());
  s.cells.reserve(level.size());
  for (const Aff& w : level) {
    cdouble p = w.a * base + w.b;
    require_finite(p, "ifs_sample");
    s.points.push_back(p);
    s.cells.push_back(w.word);
  }

  // Representatives of distinct cells must be distinct points.
  std::vector<cdouble> sorted = s.points;
  std::sort(sorted.begin(), sorted.end(), [](cdouble a, cdouble b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1])
      throw std::invalid_argument("ifs_sample: coincident cell representatives");
  return s;
}

// Image of the base point under the first `level` letters of the word; the
// representative of the ancestor cell at that generation.
inline cdouble cell_representative(const SetSample& s, const std::string& word,
                                   int level) {
  if (!s.generator) throw std::invalid_argument("cell_representative: no generator");
  if (level < 0 || level > static_cast<int>(word.size()))
    throw std::invalid_argument("cell_representative: bad level");
  cdouble z = s.base;
  for (int i = level - 1; i >= 0; --i) {
    char c = word[i];
    std::size_t k = c <= '9' ? c - '0' : c - 'a' + 10;
    z = s.generator->maps[k].apply(z);
  }
  return z;
}

// Snowflake curve built from the four-segment generator with bump angle
// beta.  All segments have common ratio rho = 1/(2(1+cos beta)), so the arc
// between parameters t, s has diameter comparable to |t-s|^alpha with
// alpha = log(1/rho)/log 4.
struct SnowflakeCurve {
  double beta = 0;
  double rho = 0;
  double alpha = 0;
  int depth = 0;
  std::vector<double> ts;   // quaternary parameters, 4^depth + 1 of them
  std::vector<cdouble> zs;  // z(t), z(0) = 0 and z(1) = 1

  std::size_t size() const { return zs.size(); }

  SetSample to_sample() const {
    SetSample s;
    s.kind = "curve";
    s.depth = depth;
    s.points = zs;
    s.cells.reserve(ts.size());
    for (double t : ts) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", t);
      s.cells.emplace_back(buf);
    }
    // Each sub-arc of generation `depth` has diameter <= rho^depth * diam,
    // and diam of the whole curve is < 2.
    s.h = 2.0 * std::pow(rho, depth);
    return s;
  }
};

inline SnowflakeCurve snowflake_sample(double beta, int depth) {
  if (!(beta > 0) || !(beta < kPi / 2))
    throw std::invalid_argument("snowflake_sample: beta outside (0, pi/2)");
  if (depth < 0) throw std::invalid_argument("snowflake_sample: negative depth");
  std::size_t total = detail::ipow(4, depth) + 1;
  check_budget(total, "snowflake_sample");

  SnowflakeCurve c;
  c.beta = beta;
  c.rho = 1.0 / (2.0 * (1.0 + std::cos(beta)));
  c.alpha = std::log(1.0 / c.rho) / std::log(4.0);
  c.depth = depth;
  c.ts = {0.0, 1.0};
  c.zs = {cdouble(0, 0), cdouble(1, 0)};
  for (int d = 0; d < depth; ++d) {
    std::vector<double> ts;
    std::vector<cdouble> zs;
    ts.reserve((c.ts.size() - 1) * 4 + 1);
    zs.reserve(ts.capacity());
    for (std::size_t i = 0; i + 1 < c.zs.size(); ++i) {
      cdouble p = c.zs[i], q = c.zs[i + 1];
      cdouble dir = q - p;
      double t0 = c.ts[i], t1 = c.ts[i + 1], dt = t1 - t0;
      ts.push_back(t0);
      zs.push_back(p);
      ts.push_back(t0 + 0.25 * dt);
      zs.push_back(p + c.rho * dir);
      ts.push_back(t0 + 0.5 * dt);
      zs.push_back(p + dir * cdouble(0.5, c.rho * std::sin(c.beta)));
      ts.push_back(t0 + 0.75 * dt);
      zs.push_back(p + (1.0 - c.rho) * dir);
    }
    ts.push_back(c.ts.back());
    zs.push_back(c.zs.back());
    c.ts.swap(ts);
    c.zs.swap(zs);
  }
  return c;
}

// min and max of |z(t)-z(s)| / |t-s|^alpha over all sampled pairs.
inline void double_ratio_bounds(const SnowflakeCurve& c, double& lo, double& hi) {
  lo = 1e300;
  hi = 0;
  std::ptrdiff_t n = static_cast<std::ptrdiff_t>(c.size());
#pragma omp parallel
  {
    double l = 1e300, h = 0;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i)
      for (std::ptrdiff_t j = i + 1; j < n; ++j) {
        double r = std::abs(c.zs[i] - c.zs[j]) /
                   std::pow(std::abs(c.ts[i] - c.ts[j]), c.alpha);
        l = std::min(l, r);
        h = std::max(h, r);
      }
#pragma omp critical
    {
      lo = std::min(lo, l);
      hi = std::max(hi, h);
    }
  }
}

// Piecewise-smooth region: disk or simple polygon, positively oriented.
struct Region {
  std::string kind;               // "disk", "square", or "polygon"
  cdouble center;                 // disk only
  double radius = 0;              // disk only
  std::vector<cdouble> vertices;  // polygon/square, CCW, closed implicitly
  double area = 0;
  double perimeter = 0;

  bool contains(cdouble z) const {
    if (kind == "disk") return std::abs(z - center) <= radius;
    // even-odd crossing rule
    bool in = false;
    std::size_t n = vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      double xi = vertices[i].real(), yi = vertices[i].imag();
      double xj = vertices[j].real(), yj = vertices[j].imag();
      if ((yi > z.imag()) != (yj > z.imag())) {
        double xc = xi + (z.imag() - yi) / (yj - yi) * (xj - xi);
        if (z.real() < xc) in = !in;
      }
    }
    return in;
  }

  void bbox(double& x0, double& x1, double& y0, double& y1) const {
    if (kind == "disk") {
      x0 = center.real() - radius;
      x1 = center.real() + radius;
      y0 = center.imag() - radius;
      y1 = center.imag() + radius;
      return;
    }
    x0 = y0 = 1e300;
    x1 = y1 = -1e300;
    for (cdouble v : vertices) {
      x0 = std::min(x0, v.real());
      x1 = std::max(x1, v.real());
      y0 = std::min(y0, v.imag());
      y1 = std::max(y1, v.imag());
    }
  }
};

namespace detail {

inline double shoelace(const std::vector<cdouble>& v) {
  double a = 0;
  for (std::size_t i = 0, n = v.size(); i < n; ++i) {
    cdouble p = v[i], q = v[(i + 1) % n];
    a += p.real() * q.imag() - q.real() * p.imag();
  }
  return 0.5 * a;
}

inline bool segments_cross(cdouble a, cdouble b, cdouble c, cdouble d) {
  auto orient = [](cdouble p, cdouble q, cdouble r) {
    double v = (q.real() - p.real()) * (r.imag() - p.imag()) -
               (q.imag() - p.imag()) * (r.real() - p.real());
    return v > 0 ? 1 : v < 0 ? -1 : 0;
  };
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

}  // namespace detail

inline Region region_disk(cdouble center, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("region_disk: radius must be positive");
  Region r;
  r.kind = "disk";
  r.center = center;
  r.radius = radius;
  r.area = kPi * radius * radius;
  r.perimeter = 2 * kPi * radius;
  return r;
}

inline Region region_polygon(std::vector<cdouble> vertices, const char* kind = "polygon") {
  if (vertices.size() < 3)
    throw std::invalid_argument("region_polygon: need at least 3 vertices");
  double a = detail::shoelace(vertices);
  if (a == 0) throw std::invalid_argument("region_polygon: degenerate polygon");
  if (a < 0) {  // normalize to positive orientation
    std::reverse(vertices.begin(), vertices.end());
    a = -a;
  }
  std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // shared endpoint
      if (detail::segments_cross(vertices[i], vertices[(i + 1) % n], vertices[j],
                                 vertices[(j + 1) % n]))
        throw std::invalid_argument("region_polygon: self-intersecting boundary");
    }
  Region r;
  r.kind = kind;
  r.vertices = std::move(vertices);
  r.area = a;
  r.perimeter = 0;
  for (std::size_t i = 0; i < n; ++i)
    r.perimeter += std::abs(r.vertices[(i + 1) % n] - r.vertices[i]);
  return r;
}

inline Region region_square(cdouble lower_left, double side) {
  if (!(side > 0)) throw std::invalid_argument("region_square: side must be positive");
  return region_polygon({lower_left, lower_left + cdouble(side, 0),
                         lower_left + cdouble(side, side), lower_left + cdouble(0, side)},
                        "square");
}

struct DeltaMask {
  GridMask mask;
  double delta = 0;
  std::size_t cell_count = 0;
  double area_estimate = 0;
  bool under_resolved = false;  // delta below the sample resolution h
};

// Rasterized closed delta-neighborhood: grid cells whose center lies within
// delta of some sample point.
inline DeltaMask delta_mask(const SetSample& s, double delta, const GridSpec& grid) {
  if (!(delta > 0)) throw std::invalid_argument("delta_mask: delta must be positive");
  if (s.points.empty()) throw std::invalid_argument("delta_mask: empty sample");
  double x0, x1, y0, y1;
  s.bbox(x0, x1, y0, y1);
  if (x0 - delta < grid.corner.real() || y0 - delta < grid.corner.imag() ||
      x1 + delta > grid.corner.real() + grid.width() ||
      y1 + delta > grid.corner.imag() + grid.height())
    throw std::invalid_argument("delta_mask: grid does not cover sample padded by delta");

  DeltaMask out;
  out.mask = GridMask(grid);
  out.delta = delta;
  out.under_resolved = delta < s.h;
  double d2 = delta * delta;
  for (cdouble p : s.points) {
    double px = p.real() - grid.corner.real();
    double py = p.imag() - grid.corner.imag();
    // cell centers at (i + 0.5) h; restrict to the bounding box of the disk
    long ix0 = std::max(0L, static_cast<long>(std::floor((px - delta) / grid.h - 0.5)));
    long ix1 = std::min(static_cast<long>(grid.nx) - 1,
                        static_cast<long>(std::ceil((px + delta) / grid.h - 0.5)));
    long iy0 = std::max(0L, static_cast<long>(std::floor((py - delta) / grid.h - 0.5)));
    long iy1 = std::min(static_cast<long>(grid.ny) - 1,
                        static_cast<long>(std::ceil((py + delta) / grid.h - 0.5)));
    for (long iy = iy0; iy <= iy1; ++iy)
      for (long ix = ix0; ix <= ix1; ++ix) {
        double dx = (ix + 0.5) * grid.h - px;
        double dy = (iy + 0.5) * grid.h - py;
        if (dx * dx + dy * dy <= d2) out.mask.inside[iy * grid.nx + ix] = 1;
      }
  }
  out.cell_count = out.mask.count();
  out.area_estimate = out.cell_count * grid.h * grid.h;
  return out;
}

}  // namespace jetplane
