#pragma once
// Dual evaluation of the pairing <dbar(f 1_E), phi> on finite-perimeter
// regions: area quadrature over cells whose centers lie in the region
// against a contour route closed by Stokes.  The boundary measure itself is
// never materialized.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "functions.hpp"
#include "grid.hpp"
#include "plane_sets.hpp"

namespace jetplane {

namespace detail {

// 8-node Gauss-Legendre rule on [-1, 1]; exact through degree 15.
inline const double kGl8Node[8] = {
    -0.96028985649753623168, -0.79666647741362673959, -0.52553240991632898582,
    -0.18343464249564980494, 0.18343464249564980494,  0.52553240991632898582,
    0.79666647741362673959,  0.96028985649753623168};
inline const double kGl8Weight[8] = {
    0.10122853629037625915, 0.22238103445337447054, 0.31370664587788728734,
    0.36268378337836198297, 0.36268378337836198297, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915};

}  // namespace detail

// Contour integral of F dz over the positively oriented region boundary,
// composite Gauss-Legendre with panels no longer than max_seg.
inline cdouble contour_integrate(const std::function<cdouble(cdouble)>& F,
                                 const Region& region, double max_seg) {
  if (!(max_seg > 0)) throw std::invalid_argument("contour_integrate: panel length");
  cdouble acc = 0;
  if (region.kind == "disk") {
    double R = region.radius;
    std::size_t m = (std::size_t)std::ceil(2 * kPi * R / max_seg);
    m = std::max<std::size_t>(m, 4);
    double dt = 2 * kPi / m;
    for (std::size_t seg = 0; seg < m; ++seg) {
      double t0 = seg * dt;
      cdouble part = 0;
      for (int k = 0; k < 8; ++k) {
        double t = t0 + 0.5 * dt * (1 + detail::kGl8Node[k]);
        cdouble e(std::cos(t), std::sin(t));
        cdouble z = region.center + R * e;
        part += detail::kGl8Weight[k] * F(z) * cdouble(0, 1) * R * e;
      }
      acc += part * (0.5 * dt);
    }
    return acc;
  }
  std::size_t nv = region.vertices.size();
  for (std::size_t i = 0; i < nv; ++i) {
    cdouble a = region.vertices[i], b = region.vertices[(i + 1) % nv];
    double len = std::abs(b - a);
    std::size_t m = std::max<std::size_t>(1, (std::size_t)std::ceil(len / max_seg));
    cdouble d = (b - a) / (double)m;
    for (std::size_t seg = 0; seg < m; ++seg) {
      cdouble mid = a + d * (seg + 0.5);
      cdouble part = 0;
      for (int k = 0; k < 8; ++k)
        part += detail::kGl8Weight[k] * F(mid + 0.5 * d * detail::kGl8Node[k]);
      acc += part * (0.5 * d);
    }
  }
  return acc;
}

struct PairingReport {
  std::string case_label;
  cdouble lhs = 0;          // -integral_E f dbar(phi)
  cdouble rhs_area = 0;     // -integral_E dbar(f phi)
  cdouble rhs_contour = 0;  // -(1/2i) contour of f phi
  cdouble residual = 0;     // lhs - rhs_area = integral_E (dbar f) phi
  double stokes_gap = 0;    // |rhs_area - rhs_contour|
};

namespace detail {

// Row-parallel cell quadrature with a fixed sequential combine, so sums are
// bit-identical across thread counts.
inline cdouble region_cell_sum(const GridSpec& g, const Region& region,
                               const std::function<cdouble(cdouble)>& integrand) {
  std::vector<cdouble> rows(g.ny, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t iy = 0; iy < (std::ptrdiff_t)g.ny; ++iy) {
    cdouble acc = 0;
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      cdouble z = g.node(ix, iy);
      if (region.contains(z)) acc += integrand(z);
    }
    rows[iy] = acc;
  }
  cdouble total = 0;
  for (std::size_t iy = 0; iy < g.ny; ++iy) total += rows[iy];
  return total * (g.h * g.h);
}

}  // namespace detail

inline PairingReport pair(const SmoothFunction& f, const SmoothFunction& phi,
                          const Region& region, const GridSpec& grid,
                          const std::string& case_label = "") {
  if (!f.has_derivatives || !phi.has_derivatives)
    throw std::invalid_argument("pair: f and phi need exact Wirtinger derivatives");
  double x0, x1, y0, y1;
  region.bbox(x0, x1, y0, y1);
  if (x0 < grid.corner.real() || y0 < grid.corner.imag() ||
      x1 > grid.corner.real() + grid.width() || y1 > grid.corner.imag() + grid.height())
    throw std::invalid_argument("pair: region outside the grid");
  for (std::size_t ix = 0; ix < grid.nx; ++ix)
    for (std::size_t iy : {std::size_t(0), grid.ny - 1})
      if (phi.f(grid.node(ix, iy)) != cdouble(0, 0))
        throw std::invalid_argument("pair: phi support touches the grid boundary");
  for (std::size_t iy = 0; iy < grid.ny; ++iy)
    for (std::size_t ix : {std::size_t(0), grid.nx - 1})
      if (phi.f(grid.node(ix, iy)) != cdouble(0, 0))
        throw std::invalid_argument("pair: phi support touches the grid boundary");

  PairingReport rep;
  rep.case_label = case_label.empty() ? f.id : case_label;
  rep.lhs = -detail::region_cell_sum(grid, region,
                                     [&](cdouble z) { return f.f(z) * phi.dzbar(z); });
  rep.rhs_area = -detail::region_cell_sum(grid, region, [&](cdouble z) {
    return f.dzbar(z) * phi.f(z) + f.f(z) * phi.dzbar(z);
  });
  cdouble loop =
      contour_integrate([&](cdouble z) { return f.f(z) * phi.f(z); }, region, grid.h);
  rep.rhs_contour = -loop / cdouble(0, 2);
  rep.residual = rep.lhs - rep.rhs_area;
  rep.stokes_gap = std::abs(rep.rhs_area - rep.rhs_contour);
  if (!is_finite(rep.lhs) || !is_finite(rep.rhs_area) || !is_finite(rep.rhs_contour))
    throw NonFiniteValue("pair: non-finite pairing value");
  return rep;
}

inline std::vector<PairingReport> uniform_limit_stability(
    const std::vector<SmoothFunction>& fs, const SmoothFunction& phi,
    const Region& region, const GridSpec& grid) {
  if (fs.size() < 2)
    throw std::invalid_argument("uniform_limit_stability: need at least 2 members");
  std::vector<PairingReport> out;
  out.reserve(fs.size());
  for (std::size_t k = 0; k < fs.size(); ++k)
    out.push_back(pair(fs[k], phi, region, grid, fs[k].id + "[" + std::to_string(k) + "]"));
  return out;
}

}  // namespace jetplane
