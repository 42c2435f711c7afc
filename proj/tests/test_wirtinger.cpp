#include <jetplane/wirtinger.hpp>

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using jetplane::cdouble;
using jetplane::RealLinearMap;
using jetplane::RealSubspace;

namespace {

std::vector<cdouble> random_cvec(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cdouble> v(n);
  for (auto& z : v) z = cdouble(u(rng), u(rng));
  return v;
}

}  // namespace

TEST(Wirtinger, IdentitySplitsAsPureHolo) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(2, 2);
  RealLinearMap L = jetplane::from_real_matrix(M);
  EXPECT_NEAR(std::abs(L.holo[0] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(L.anti[0]), 0.0, 1e-15);
}

TEST(Wirtinger, ConjugationSplitsAsPureAnti) {
  Eigen::MatrixXd M(2, 2);
  M << 1, 0, 0, -1;
  RealLinearMap L = jetplane::from_real_matrix(M);
  EXPECT_NEAR(std::abs(L.holo[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(L.anti[0] - 1.0), 0.0, 1e-15);
}

TEST(Wirtinger, SplitReproducesMatrixActionN2) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd M(2, 4);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 4; ++c) M(r, c) = u(rng);
  RealLinearMap L = jetplane::from_real_matrix(M);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<cdouble> v = random_cvec(rng, 2);
    Eigen::VectorXd vr = jetplane::realify(v);
    Eigen::VectorXd img = M * vr;
    cdouble want(img(0), img(1));
    EXPECT_NEAR(std::abs(L.apply(v) - want), 0.0, 1e-12);
  }
}

TEST(Wirtinger, RoundTripRandomMatrices) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + trial % 3;
    Eigen::MatrixXd M(2, 2 * n);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2 * n; ++c) M(r, c) = u(rng);
    Eigen::MatrixXd back = jetplane::to_real_matrix(jetplane::from_real_matrix(M));
    EXPECT_NEAR((back - M).cwiseAbs().maxCoeff(), 0.0, 1e-12);
  }
}

TEST(Wirtinger, RealAxisIsTotallyReal) {
  RealSubspace W(1, {{cdouble(1, 0)}});
  EXPECT_TRUE(jetplane::is_totally_real(W));
  EXPECT_TRUE(jetplane::complex_part(W).empty());
}

TEST(Wirtinger, FullPlaneHasComplexPartOfRealDimTwo) {
  RealSubspace W(1, {{cdouble(1, 0)}, {cdouble(0, 1)}});
  auto P = jetplane::complex_part(W);
  EXPECT_EQ(P.size(), 2u);
  EXPECT_FALSE(jetplane::is_totally_real(W));
}

TEST(Wirtinger, RealPlaneInC2IsTotallyReal) {
  RealSubspace W(2, {{cdouble(1, 0), cdouble(0, 0)}, {cdouble(0, 0), cdouble(1, 0)}});
  EXPECT_TRUE(jetplane::is_totally_real(W));
}

TEST(Wirtinger, DiagonalComplexLineDetected) {
  // (z, z) over C: W ^ iW is the whole plane, real dimension 2.
  RealSubspace W(2, {{cdouble(1, 0), cdouble(1, 0)}, {cdouble(0, 1), cdouble(0, 1)}});
  auto P = jetplane::complex_part(W);
  EXPECT_EQ(P.size(), 2u);
}

TEST(Wirtinger, ComplexPartDimensionIsEven) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + trial % 2;
    int k = 1 + trial % (2 * n);
    std::vector<std::vector<cdouble>> basis;
    for (int m = 0; m < k; ++m) basis.push_back(random_cvec(rng, n));
    RealSubspace W(n, basis);
    EXPECT_EQ(jetplane::complex_part(W).size() % 2, 0u);
  }
}

TEST(Wirtinger, ComplexPartInvariantUnderBasisChange) {
  std::mt19937_64 rng(31);
  // C^1 diagonal in C^2 plus an extra real direction: complex part is the
  // diagonal plane no matter how the basis is mixed.
  std::vector<std::vector<cdouble>> basis = {
      {cdouble(1, 0), cdouble(1, 0)},
      {cdouble(0, 1), cdouble(0, 1)},
      {cdouble(1, 0), cdouble(0, 0)}};
  RealSubspace W(2, basis);
  auto P = jetplane::complex_part(W);
  ASSERT_EQ(P.size(), 2u);

  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<cdouble>> mixed(3, std::vector<cdouble>(2, 0.0));
  for (int m = 0; m < 3; ++m)
    for (int l = 0; l < 3; ++l) {
      double c = u(rng) + (l == m ? 2.0 : 0.0);
      for (int j = 0; j < 2; ++j) mixed[m][j] += c * basis[l][j];
    }
  auto P2 = jetplane::complex_part(RealSubspace(2, mixed));
  ASSERT_EQ(P2.size(), 2u);
  // Same span: every vector of P lies in span_R(P2).
  Eigen::MatrixXd A(4, 2);
  for (int m = 0; m < 2; ++m) A.col(m) = jetplane::realify(P2[m]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  for (const auto& v : P) {
    Eigen::VectorXd rv = jetplane::realify(v);
    Eigen::VectorXd res = A * svd.solve(rv) - rv;
    EXPECT_NEAR(res.cwiseAbs().maxCoeff(), 0.0, 1e-9);
  }
}

TEST(Wirtinger, ZeroSubspaceAccepted) {
  RealSubspace W(2, {});
  EXPECT_TRUE(jetplane::is_totally_real(W));
  auto out = jetplane::extend_complex_linear(W, {});
  EXPECT_TRUE(out.ok);
  EXPECT_EQ(out.map.n(), 2);
}

TEST(Wirtinger, DependentBasisRejected) {
  EXPECT_THROW(RealSubspace(1, {{cdouble(1, 0)}, {cdouble(2, 0)}}),
               std::invalid_argument);
}

TEST(Wirtinger, ExtensionOnRealAxesMatchesPrescription) {
  RealSubspace W(2, {{cdouble(1, 0), cdouble(0, 0)}, {cdouble(0, 0), cdouble(1, 0)}});
  std::vector<cdouble> values = {cdouble(2, 1), cdouble(-1, 3)};
  auto out = jetplane::extend_complex_linear(W, values);
  ASSERT_TRUE(out.ok);
  EXPECT_NEAR(std::abs(out.map.holo[0] - values[0]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(out.map.holo[1] - values[1]), 0.0, 1e-12);
  EXPECT_NEAR(out.map.max_anti(), 0.0, 1e-15);
}

TEST(Wirtinger, ConjugationPrescriptionRejected) {
  // L(1) = 1, L(i) = -i on W = C is conjugation; no complex-linear map does that.
  RealSubspace W(1, {{cdouble(1, 0)}, {cdouble(0, 1)}});
  auto out = jetplane::extend_complex_linear(W, {cdouble(1, 0), cdouble(0, -1)});
  EXPECT_FALSE(out.ok);
  EXPECT_GT(out.criterion_defect, 1e-8);
}

TEST(Wirtinger, ExtensionRecoversComplexLinearRestrictions) {
  std::mt19937_64 rng(41);
  int accepted = 0;
  for (int trial = 0; trial < 300; ++trial) {
    int n = 3;
    int k = 1 + trial % 3;
    std::vector<std::vector<cdouble>> basis;
    for (int m = 0; m < k; ++m) basis.push_back(random_cvec(rng, n));
    RealSubspace W(n, basis);
    if (!jetplane::is_totally_real(W)) continue;
    std::vector<cdouble> a = random_cvec(rng, n);
    std::vector<cdouble> values(k);
    for (int m = 0; m < k; ++m) {
      values[m] = 0;
      for (int j = 0; j < n; ++j) values[m] += a[j] * basis[m][j];
    }
    auto out = jetplane::extend_complex_linear(W, values);
    ASSERT_TRUE(out.ok);
    EXPECT_LE(out.residual, 1e-10);
    ++accepted;
  }
  EXPECT_GT(accepted, 250);
}

TEST(Wirtinger, ExtensionAgreesWithRealLsqOracle) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + trial % 3;
    int k = 1 + trial % n;
    std::vector<std::vector<cdouble>> basis;
    for (int m = 0; m < k; ++m) basis.push_back(random_cvec(rng, n));
    RealSubspace W(n, basis);
    if (!jetplane::is_totally_real(W)) continue;
    std::vector<cdouble> values = random_cvec(rng, k);
    auto out = jetplane::extend_complex_linear(W, values);
    if (!out.ok) continue;  // prescription need not be extendable for k > n
    std::vector<cdouble> ref = oracles::extend_real_lsq(W, values);
    for (int j = 0; j < n; ++j)
      EXPECT_NEAR(std::abs(out.map.holo[j] - ref[j]), 0.0, 1e-8);
  }
}
