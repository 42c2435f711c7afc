#pragma once
// Uniform square grids on an axis-aligned rectangle.  Nodes sit at cell
// centers; storage is row major with x fastest.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "core.hpp"

namespace jetplane {

struct GridSpec {
  cdouble corner;       // lower-left corner of the rectangle
  std::size_t nx = 0;   // cells along x
  std::size_t ny = 0;   // cells along y
  double h = 0;

  GridSpec() = default;
  GridSpec(cdouble corner_, std::size_t nx_, std::size_t ny_, double h_)
      : corner(corner_), nx(nx_), ny(ny_), h(h_) {
    if (nx == 0 || ny == 0 || !(h > 0))
      throw std::invalid_argument("GridSpec: need nx, ny >= 1 and h > 0");
    check_budget(nx * ny, "GridSpec");
  }

  std::size_t size() const { return nx * ny; }
  double width() const { return nx * h; }
  double height() const { return ny * h; }
  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx + ix; }
  cdouble node(std::size_t ix, std::size_t iy) const {
    return corner + cdouble((ix + 0.5) * h, (iy + 0.5) * h);
  }
  // Corner lattice point (ix, iy) in 0..nx, 0..ny.
  cdouble lattice(std::size_t ix, std::size_t iy) const {
    return corner + cdouble(ix * h, iy * h);
  }
  bool same_layout(const GridSpec& o) const {
    return corner == o.corner && nx == o.nx && ny == o.ny && h == o.h;
  }

  // Smallest grid of spacing h covering [x0,x1] x [y0,y1] padded by pad.
  static GridSpec covering(double x0, double x1, double y0, double y1, double h,
                           double pad) {
    double cx = x0 - pad, cy = y0 - pad;
    std::size_t nx = static_cast<std::size_t>(std::ceil((x1 + pad - cx) / h));
    std::size_t ny = static_cast<std::size_t>(std::ceil((y1 + pad - cy) / h));
    return GridSpec(cdouble(cx, cy), std::max<std::size_t>(nx, 1),
                    std::max<std::size_t>(ny, 1), h);
  }
};

struct GridFunction {
  GridSpec grid;
  std::vector<cdouble> v;

  GridFunction() = default;
  explicit GridFunction(const GridSpec& g) : grid(g), v(g.size(), cdouble(0, 0)) {}

  cdouble& at(std::size_t ix, std::size_t iy) { return v[grid.index(ix, iy)]; }
  const cdouble& at(std::size_t ix, std::size_t iy) const {
    return v[grid.index(ix, iy)];
  }

  double sup_norm() const {
    double m = 0;
    for (const cdouble& z : v) m = std::max(m, std::abs(z));
    return m;
  }
  double l1_norm() const {
    double s = 0;
    for (const cdouble& z : v) s += std::abs(z);
    return s * grid.h * grid.h;
  }
  bool finite() const {
    for (const cdouble& z : v)
      if (!is_finite(z)) return false;
    return true;
  }

  static GridFunction sample(const GridSpec& g, const std::function<cdouble(cdouble)>& f) {
    GridFunction u(g);
    for (std::size_t iy = 0; iy < g.ny; ++iy)
      for (std::size_t ix = 0; ix < g.nx; ++ix) {
        cdouble val = f(g.node(ix, iy));
        if (!is_finite(val)) throw NonFiniteValue("GridFunction::sample");
        u.at(ix, iy) = val;
      }
    return u;
  }
};

struct GridMask {
  GridSpec grid;
  std::vector<std::uint8_t> inside;

  GridMask() = default;
  explicit GridMask(const GridSpec& g) : grid(g), inside(g.size(), 0) {}
  std::size_t count() const {
    std::size_t c = 0;
    for (auto b : inside) c += b != 0;
    return c;
  }
  double area() const { return count() * grid.h * grid.h; }
  GridMask complement() const {
    GridMask m(grid);
    for (std::size_t i = 0; i < inside.size(); ++i) m.inside[i] = inside[i] ? 0 : 1;
    return m;
  }
};

}  // namespace jetplane
