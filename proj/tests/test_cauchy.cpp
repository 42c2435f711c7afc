#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <jetplane/cauchy.hpp>
#include <jetplane/functions.hpp>
#include <jetplane/plane_sets.hpp>

#include "oracles.hpp"

using jetplane::cdouble;
using jetplane::GridFunction;
using jetplane::GridMask;
using jetplane::GridSpec;
using jetplane::SetSample;
using jetplane::SmoothFunction;

namespace {

// Polynomial cutoff (1 - |z|^2)^2 on the unit disk, C^1 across the circle.
SmoothFunction poly_bump() {
  SmoothFunction f;
  f.id = "poly-bump";
  f.f = [](cdouble z) {
    double u = 1.0 - std::norm(z);
    return u > 0 ? cdouble(u * u, 0) : cdouble(0, 0);
  };
  f.dz = [](cdouble z) {
    double u = 1.0 - std::norm(z);
    return u > 0 ? -2.0 * u * std::conj(z) : cdouble(0, 0);
  };
  f.dzbar = [](cdouble z) {
    double u = 1.0 - std::norm(z);
    return u > 0 ? -2.0 * u * z : cdouble(0, 0);
  };
  f.has_derivatives = true;
  return f;
}

double interior_residual(const GridFunction& transform, const GridFunction& g) {
  GridFunction d = jetplane::dbar_fd(transform);
  double m = 0;
  for (std::size_t iy = 1; iy + 1 < g.grid.ny; ++iy)
    for (std::size_t ix = 1; ix + 1 < g.grid.nx; ++ix)
      m = std::max(m, std::abs(d.at(ix, iy) - g.at(ix, iy)));
  return m;
}

}  // namespace

TEST(DbarFd, ExactOnAffine) {
  GridSpec grid(cdouble(-1, -1), 21, 21, 0.1);
  GridFunction uz = GridFunction::sample(grid, [](cdouble z) { return z; });
  GridFunction dz = jetplane::dbar_fd(uz);
  for (cdouble v : dz.v) EXPECT_LE(std::abs(v), 1e-12);

  GridFunction uc = GridFunction::sample(grid, [](cdouble z) { return std::conj(z); });
  GridFunction dc = jetplane::dbar_fd(uc);
  for (cdouble v : dc.v) EXPECT_LE(std::abs(v - cdouble(1, 0)), 1e-12);

  GridFunction uk = GridFunction::sample(grid, [](cdouble) { return cdouble(3, 2); });
  for (cdouble v : jetplane::dbar_fd(uk).v) EXPECT_LE(std::abs(v), 1e-12);
}

TEST(DbarFd, CenteredExactOnModulusSquared) {
  GridSpec grid(cdouble(-1, -1), 25, 25, 1.0 / 12);
  GridFunction u = GridFunction::sample(grid, [](cdouble z) { return cdouble(std::norm(z), 0); });
  GridFunction d = jetplane::dbar_fd(u);
  for (std::size_t iy = 1; iy + 1 < grid.ny; ++iy)
    for (std::size_t ix = 1; ix + 1 < grid.nx; ++ix)
      EXPECT_LE(std::abs(d.at(ix, iy) - grid.node(ix, iy)), 1e-10);
}

TEST(DbarFd, RejectsTinyGrids) {
  GridSpec grid(cdouble(0, 0), 2, 5, 0.1);
  GridFunction u(grid);
  EXPECT_THROW(jetplane::dbar_fd(u), std::invalid_argument);
}

TEST(CellIntegral, FarFieldOracle) {
  double x0 = 0.3, y0 = -0.2, w = 0.15, hh = 0.15;
  cdouble z(2.0, 1.5);
  cdouble exact = jetplane::detail::cell_integral(x0 - z.real(), x0 + w - z.real(),
                                                  y0 - z.imag(), y0 + hh - z.imag());
  cdouble quad = oracles::rect_quadrature(
      [&](cdouble p) { return 1.0 / (p - z); }, x0, y0, w, hh, 400);
  EXPECT_LE(std::abs(exact - quad), 1e-9);
}

TEST(CellIntegral, NearFieldOracle) {
  double x0 = 0.3, y0 = -0.2, w = 0.15, hh = 0.15;
  cdouble z(0.5, -0.05);  // outside, one cell size away
  cdouble exact = jetplane::detail::cell_integral(x0 - z.real(), x0 + w - z.real(),
                                                  y0 - z.imag(), y0 + hh - z.imag());
  cdouble quad = oracles::rect_quadrature(
      [&](cdouble p) { return 1.0 / (p - z); }, x0, y0, w, hh, 2000);
  EXPECT_LE(std::abs(exact - quad), 1e-6 * std::abs(exact));
}

TEST(CellIntegral, CornerAnchoredOracle) {
  // Pole exactly at a cell corner: the integral stays finite and matches
  // dense midpoint quadrature of the integrable singularity.
  cdouble exact = jetplane::detail::cell_integral(0.0, 1.0, 0.0, 1.0);
  cdouble quad = oracles::rect_quadrature(
      [](cdouble p) { return 1.0 / p; }, 0.0, 0.0, 1.0, 1.0, 3000);
  EXPECT_LE(std::abs(exact - quad), 2e-3);
  // Analytic value for the unit cell with the pole at its corner.
  double c = 0.5 * std::log(2.0) + jetplane::kPi / 4.0;
  EXPECT_LE(std::abs(exact - cdouble(c, -c)), 1e-12);
}

TEST(CellIntegral, InteriorPoleSubdivision) {
  // Pole strictly inside: splitting the cell at the pole into four
  // corner-anchored pieces must reproduce the whole.
  double p = -0.06, q = 0.09, r = -0.11, s = 0.04;
  cdouble whole = jetplane::detail::cell_integral(p, q, r, s);
  cdouble parts = jetplane::detail::cell_integral(p, 0, r, 0) +
                  jetplane::detail::cell_integral(0, q, r, 0) +
                  jetplane::detail::cell_integral(p, 0, 0, s) +
                  jetplane::detail::cell_integral(0, q, 0, s);
  EXPECT_LE(std::abs(whole - parts), 1e-13);
  // Split along a vertical line through the pole: pole on an edge.
  cdouble halves = jetplane::detail::cell_integral(p, 0, r, s) +
                   jetplane::detail::cell_integral(0, q, r, s);
  EXPECT_LE(std::abs(whole - halves), 1e-13);
}

TEST(CellIntegral, SymmetricCellVanishes) {
  for (double a : {0.5, 0.01, 3.0}) {
    cdouble v = jetplane::detail::cell_integral(-a, a, -a, a);
    EXPECT_LE(std::abs(v), 1e-14) << "half-width " << a;
  }
}

TEST(CauchyTransform, ZeroSourceAndNonFiniteGuard) {
  GridSpec grid(cdouble(-1, -1), 16, 16, 0.125);
  GridFunction g(grid);
  GridFunction out = jetplane::cauchy_transform(g);
  for (cdouble v : out.v) EXPECT_EQ(v, cdouble(0, 0));
  EXPECT_EQ(jetplane::cauchy_eval(g, nullptr, cdouble(0.3, 0.4)), cdouble(0, 0));

  g.v[40] = cdouble(std::nan(""), 0);
  EXPECT_THROW(jetplane::cauchy_transform(g), jetplane::NonFiniteValue);
}

TEST(CauchyTransform, Linearity) {
  GridSpec grid(cdouble(-1, -1), 24, 24, 1.0 / 12);
  std::mt19937_64 rng(7);
  auto unit = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
  GridFunction g1(grid), g2(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    g1.v[i] = cdouble(unit() - 0.5, unit() - 0.5);
    g2.v[i] = cdouble(unit() - 0.5, unit() - 0.5);
  }
  cdouble a(2.0, -1.0);
  GridFunction combo(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) combo.v[i] = a * g1.v[i] + g2.v[i];
  GridFunction t1 = jetplane::cauchy_transform(g1);
  GridFunction t2 = jetplane::cauchy_transform(g2);
  GridFunction tc = jetplane::cauchy_transform(combo);
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_LE(std::abs(tc.v[i] - (a * t1.v[i] + t2.v[i])), 1e-10);
}

TEST(CauchyTransform, TranslationEquivariance) {
  double h = 1.0 / 16;
  GridSpec ga(cdouble(-0.5, -0.5), 32, 32, h);
  GridSpec gb(cdouble(-0.5 + 2 * h, -0.5 + 3 * h), 32, 32, h);
  std::mt19937_64 rng(13);
  auto unit = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
  GridFunction fa(ga), fb(gb);
  for (std::size_t i = 0; i < ga.size(); ++i) {
    cdouble v(unit() - 0.5, unit() - 0.5);
    fa.v[i] = v;
    fb.v[i] = v;
  }
  GridFunction ta = jetplane::cauchy_transform(fa);
  GridFunction tb = jetplane::cauchy_transform(fb);
  // The displacement table depends only on index offsets, so the shifted
  // problem is the same computation bit for bit.
  for (std::size_t i = 0; i < ga.size(); ++i) EXPECT_EQ(ta.v[i], tb.v[i]);
}

TEST(CauchyTransform, EvalMatchesGridAtNodes) {
  GridSpec grid(cdouble(-0.6, -0.4), 20, 18, 0.05);
  std::mt19937_64 rng(5);
  auto unit = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
  GridFunction g(grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    g.v[i] = cdouble(unit() - 0.5, unit() - 0.5);
  jetplane::CauchySum sum(g, nullptr);
  GridFunction t = sum.to_grid();
  for (std::size_t iy = 0; iy < grid.ny; iy += 3)
    for (std::size_t ix = 0; ix < grid.nx; ix += 3)
      EXPECT_LE(std::abs(sum.eval(grid.node(ix, iy)) - t.at(ix, iy)), 1e-12);
}

TEST(CauchyTransform, InversionConvergesOnBump) {
  SmoothFunction bump = poly_bump();
  std::vector<double> residuals;
  for (std::size_t n : {64, 128, 256}) {
    GridSpec grid(cdouble(-1.25, -1.25), n, n, 2.5 / n);
    GridFunction g = GridFunction::sample(grid, bump.f);
    GridFunction t = jetplane::cauchy_transform(g);
    residuals.push_back(interior_residual(t, g));
  }
  EXPECT_GE(residuals[0] / residuals[1], 1.5);
  EXPECT_GE(residuals[1] / residuals[2], 1.5);
}

TEST(CauchyTransform, MaskedDiskMatchesClosedForm) {
  double h = 1.0 / 64;
  GridSpec grid(cdouble(-1.25, -1.25), 160, 160, h);
  GridMask mask(grid);
  for (std::size_t iy = 0; iy < grid.ny; ++iy)
    for (std::size_t ix = 0; ix < grid.nx; ++ix)
      if (std::abs(grid.node(ix, iy)) < 1.0) mask.inside[grid.index(ix, iy)] = 1;
  GridFunction one = GridFunction::sample(grid, [](cdouble) { return cdouble(1, 0); });
  GridFunction t = jetplane::cauchy_transform(one, &mask);
  // The transform of the disk indicator is conj(z) inside, 1/z outside.
  for (std::size_t iy = 0; iy < grid.ny; ++iy)
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      cdouble z = grid.node(ix, iy);
      double rad = std::abs(z);
      if (rad <= 1.0 - 2 * h)
        EXPECT_LE(std::abs(t.at(ix, iy) - std::conj(z)), 5 * h);
      else if (rad >= 1.0 + 2 * h)
        EXPECT_LE(std::abs(t.at(ix, iy) - 1.0 / z), 5 * h);
    }
}

TEST(CauchyTransform, MaskedEvalQuadratureOracle) {
  double h = 1.0 / 32;
  GridSpec grid(cdouble(-1.25, -1.25), 80, 80, h);
  GridMask mask(grid);
  for (std::size_t iy = 0; iy < grid.ny; ++iy)
    for (std::size_t ix = 0; ix < grid.nx; ++ix)
      if (std::abs(grid.node(ix, iy)) < 1.0) mask.inside[grid.index(ix, iy)] = 1;
  GridFunction one = GridFunction::sample(grid, [](cdouble) { return cdouble(1, 0); });
  cdouble z(1.6, 0.7);
  cdouble direct = jetplane::cauchy_eval(one, &mask, z);
  cdouble quad = 0;
  for (std::size_t iy = 0; iy < grid.ny; ++iy)
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      if (!mask.inside[grid.index(ix, iy)]) continue;
      cdouble c = grid.node(ix, iy);
      quad += oracles::rect_quadrature([&](cdouble p) { return 1.0 / (p - z); },
                                       c.real() - h / 2, c.imag() - h / 2, h, h, 6);
    }
  quad *= -1.0 / jetplane::kPi;
  EXPECT_LE(std::abs(direct - quad), 1e-4);
}

TEST(HoloApprox, DeltaValidation) {
  SetSample s;
  s.kind = "points";
  s.points = {cdouble(0, 0)};
  s.h = 0.001;
  GridSpec grid(cdouble(-1, -1), 64, 64, 1.0 / 32);
  EXPECT_THROW(jetplane::holo_approx(jetplane::fn_z(), s, 0.0, grid),
               std::invalid_argument);
  EXPECT_THROW(jetplane::holo_approx(jetplane::fn_z(), s, 1.0 / 64, grid),
               std::invalid_argument);
}

TEST(HoloApprox, HolomorphicSourceDegenerates) {
  SetSample s;
  s.kind = "points";
  s.h = 0.01;
  for (int k = 0; k < 8; ++k) {
    double t = 2 * jetplane::kPi * k / 8;
    s.points.push_back(0.5 * cdouble(std::cos(t), std::sin(t)));
  }
  GridSpec grid(cdouble(-1, -1), 64, 64, 1.0 / 32);
  jetplane::HoloApprox out = jetplane::holo_approx(jetplane::fn_z(), s, 0.2, grid);
  // dbar of z vanishes identically, so the truncated transform is zero and
  // the approximation error is just sup |F| on the set.
  for (cdouble v : out.h.v) EXPECT_EQ(v, cdouble(0, 0));
  EXPECT_NEAR(out.report.sup_error_on_E, 0.5, 1e-12);
  EXPECT_EQ(out.report.dbar_residual_inside, 0.0);
  EXPECT_EQ(out.report.dbar_source, "exact");
  EXPECT_GT(out.report.trunc_area, 0.0);
}

TEST(HoloApprox, SinglePointHoleBound) {
  SetSample s;
  s.kind = "points";
  s.points = {cdouble(0, 0)};
  s.h = 0.001;
  SmoothFunction F = poly_bump();
  double delta = 0.15;
  GridSpec grid(cdouble(-1.2, -1.2), 192, 192, 2.4 / 192);
  jetplane::HoloApprox out = jetplane::holo_approx(F, s, delta, grid);
  // |F(0) - h_delta(0)| = (1/pi) |integral over the hole of dbarF / w|,
  // bounded by 2 max|dbarF| (delta + h) for the rasterized hole.
  double M = 4.0 / (3.0 * std::sqrt(3.0));
  EXPECT_LE(out.report.sup_error_on_E, 2 * M * (delta + grid.h) + 1e-9);
  EXPECT_EQ(out.report.dbar_source, "exact");
}

TEST(HoloApprox, TruncationErrorShrinksWithDelta) {
  SetSample s = jetplane::ifs_sample(jetplane::IfsSpec::four_corner(), 4);
  SmoothFunction F = jetplane::fn_bump(cdouble(0.5, 0.5), 1.2);
  GridSpec grid(cdouble(-0.9, -0.9), 128, 128, 2.8 / 128);
  double r2 = std::sqrt(2.0);
  std::vector<jetplane::ApproxReport> reports;
  for (double delta : {r2 / 8, r2 / 16, r2 / 32})
    reports.push_back(jetplane::holo_approx(F, s, delta, grid).report);
  double M = 0;
  for (std::size_t iy = 0; iy < grid.ny; ++iy)
    for (std::size_t ix = 0; ix < grid.nx; ++ix)
      M = std::max(M, std::abs(F.dzbar(grid.node(ix, iy))));
  for (std::size_t k = 1; k < reports.size(); ++k) {
    EXPECT_LE(reports[k].sup_error_on_E,
              reports[k - 1].sup_error_on_E + 5 * grid.h * M);
    EXPECT_LT(reports[k].trunc_area, reports[k - 1].trunc_area);
  }
}

TEST(HoloApprox, TruncationRemovesOnlyNearbySources) {
  // Sources supported away from the set: the delta hole deletes only zero
  // cells, so the truncated and untruncated transforms coincide.
  SetSample s;
  s.kind = "points";
  s.points = {cdouble(0, 0)};
  s.h = 0.001;
  SmoothFunction F = jetplane::fn_bump(cdouble(1.5, 0), 1.2);  // support [0.3, 2.7]
  GridSpec grid = GridSpec::covering(-0.6, 2.9, -1.4, 1.4, 0.025, 0.0);
  double delta = 0.25;
  jetplane::HoloApprox out = jetplane::holo_approx(F, s, delta, grid);

  GridFunction g = GridFunction::sample(grid, F.dzbar);
  GridFunction full = jetplane::cauchy_transform(g);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(out.h.v[i], full.v[i]);

  GridFunction resid = jetplane::dbar_fd(full);
  jetplane::DeltaMask close = jetplane::delta_mask(s, delta / 2, grid);
  double m = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (close.mask.inside[i]) m = std::max(m, std::abs(resid.v[i]));
  EXPECT_EQ(out.report.dbar_residual_inside, m);
}

TEST(MaxPrinciple, CallableExamples) {
  jetplane::Region disk = jetplane::region_disk(cdouble(0, 0), 1.0);
  GridSpec grid(cdouble(-1.1, -1.1), 96, 96, 2.2 / 96);
  auto z5 = [](cdouble z) { return std::pow(z, 5); };
  jetplane::MaxPrincipleReport a = jetplane::max_principle_check(z5, disk, grid);
  EXPECT_TRUE(a.pass);
  EXPECT_NEAR(a.sup_boundary, 1.0, 1e-9);
  EXPECT_LE(a.sup_interior, 1.0 + 1e-12);

  auto ez = [](cdouble z) { return std::exp(z); };
  jetplane::MaxPrincipleReport b = jetplane::max_principle_check(ez, disk, grid);
  EXPECT_TRUE(b.pass);
  EXPECT_NEAR(b.sup_boundary, std::exp(1.0), 1e-6);

  // Negative control: a non-analytic profile peaking at the center.
  auto peak = [](cdouble z) { return cdouble(2.0 - std::norm(z), 0); };
  jetplane::MaxPrincipleReport c = jetplane::max_principle_check(peak, disk, grid);
  EXPECT_FALSE(c.pass);
}

TEST(MaxPrinciple, GridFunctionRingCase) {
  jetplane::Region disk = jetplane::region_disk(cdouble(0, 0), 1.0);
  GridSpec grid(cdouble(-1.1, -1.1), 96, 96, 2.2 / 96);
  GridFunction u = GridFunction::sample(grid, [](cdouble z) { return cdouble(std::norm(z), 0); });
  jetplane::MaxPrincipleReport rep = jetplane::max_principle_check(u, disk);
  // |z|^2 attains its interior max on the discrete ring, so the discrete
  // check cannot distinguish it from an analytic function.
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.sup_interior, rep.sup_boundary);
}
