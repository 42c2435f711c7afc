#pragma once
// Real-linear maps C^n -> C in split (Wirtinger) form, totally-real
// subspaces, and complex-linear extension off them.
//
// Every real-linear L : C^n -> C decomposes uniquely as
//   L(v) = sum_j holo_j v_j + anti_j conj(v_j),
// recovered from evaluations by
//   holo_j = (L(e_j) - i L(i e_j)) / 2,  anti_j = (L(e_j) + i L(i e_j)) / 2.
// L is complex-linear exactly when all anti_j vanish.
//
// Real coordinates are interleaved: v corresponds to
// (Re v_0, Im v_0, ..., Re v_{n-1}, Im v_{n-1}).

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"

namespace jetplane {

struct RealLinearMap {
  std::vector<cdouble> holo;
  std::vector<cdouble> anti;

  int n() const { return static_cast<int>(holo.size()); }

  cdouble apply(const std::vector<cdouble>& v) const {
    if (static_cast<int>(v.size()) != n())
      throw std::invalid_argument("RealLinearMap::apply: dimension mismatch");
    cdouble acc = 0;
    for (int j = 0; j < n(); ++j)
      acc += holo[j] * v[j] + anti[j] * std::conj(v[j]);
    return acc;
  }

  double max_anti() const {
    double m = 0;
    for (const cdouble& a : anti) m = std::max(m, std::abs(a));
    return m;
  }

  bool is_complex_linear(double tol = 1e-12) const { return max_anti() <= tol; }

  static RealLinearMap zero(int n) {
    return RealLinearMap{std::vector<cdouble>(n, 0.0), std::vector<cdouble>(n, 0.0)};
  }
};

inline Eigen::VectorXd realify(const std::vector<cdouble>& v) {
  Eigen::VectorXd r(2 * v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    r(2 * j) = v[j].real();
    r(2 * j + 1) = v[j].imag();
  }
  return r;
}

inline std::vector<cdouble> complexify(const Eigen::VectorXd& r) {
  if (r.size() % 2 != 0)
    throw std::invalid_argument("complexify: odd real dimension");
  std::vector<cdouble> v(r.size() / 2);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = cdouble(r(2 * j), r(2 * j + 1));
  return v;
}

// M is 2 x 2n over R, acting on interleaved real coordinates; row 0 gives the
// real part of the image, row 1 the imaginary part.
inline RealLinearMap from_real_matrix(const Eigen::MatrixXd& M) {
  if (M.rows() != 2 || M.cols() < 2 || M.cols() % 2 != 0)
    throw std::invalid_argument("from_real_matrix: expected 2 x 2n matrix");
  int n = static_cast<int>(M.cols()) / 2;
  RealLinearMap L = RealLinearMap::zero(n);
  for (int j = 0; j < n; ++j) {
    cdouble Le(M(0, 2 * j), M(1, 2 * j));          // image of e_j
    cdouble Lie(M(0, 2 * j + 1), M(1, 2 * j + 1)); // image of i e_j
    L.holo[j] = 0.5 * (Le - cdouble(0, 1) * Lie);
    L.anti[j] = 0.5 * (Le + cdouble(0, 1) * Lie);
  }
  return L;
}

inline Eigen::MatrixXd to_real_matrix(const RealLinearMap& L) {
  Eigen::MatrixXd M(2, 2 * L.n());
  for (int j = 0; j < L.n(); ++j) {
    cdouble Le = L.holo[j] + L.anti[j];
    cdouble Lie = cdouble(0, 1) * (L.holo[j] - L.anti[j]);
    M(0, 2 * j) = Le.real();
    M(1, 2 * j) = Le.imag();
    M(0, 2 * j + 1) = Lie.real();
    M(1, 2 * j + 1) = Lie.imag();
  }
  return M;
}

// A real-linear subspace of C^n given by a real-linearly independent basis.
// The zero subspace (empty basis) is allowed.
struct RealSubspace {
  int n = 0;
  std::vector<std::vector<cdouble>> basis;

  RealSubspace() = default;
  RealSubspace(int n_, std::vector<std::vector<cdouble>> basis_)
      : n(n_), basis(std::move(basis_)) {
    if (n <= 0) throw std::invalid_argument("RealSubspace: n must be positive");
    for (const auto& w : basis)
      if (static_cast<int>(w.size()) != n)
        throw std::invalid_argument("RealSubspace: basis vector of wrong dimension");
    if (dim() > 2 * n)
      throw std::invalid_argument("RealSubspace: more vectors than real dimension");
    if (dim() > 0) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(real_matrix());
      const auto& s = svd.singularValues();
      if (s(0) <= 0.0 || s(s.size() - 1) <= kRankTol * s(0))
        throw std::invalid_argument("RealSubspace: basis not real-linearly independent");
    }
  }

  int dim() const { return static_cast<int>(basis.size()); }

  // 2n x k, columns are the realified basis vectors.
  Eigen::MatrixXd real_matrix() const {
    Eigen::MatrixXd A(2 * n, dim());
    for (int m = 0; m < dim(); ++m) A.col(m) = realify(basis[m]);
    return A;
  }
};

namespace detail {

inline std::vector<cdouble> times_i(const std::vector<cdouble>& v) {
  std::vector<cdouble> w(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) w[j] = cdouble(0, 1) * v[j];
  return w;
}

}  // namespace detail

// Basis (over R) of W intersect iW, the largest complex-linear subspace
// contained in W.  Solves A x = B y for the stacked real representations of
// the basis and of i times the basis, then orthonormalizes the candidates.
inline std::vector<std::vector<cdouble>> complex_part(const RealSubspace& W,
                                                      double rtol = kRankTol) {
  int k = W.dim();
  if (k == 0) return {};
  Eigen::MatrixXd A = W.real_matrix();
  Eigen::MatrixXd B(2 * W.n, k);
  for (int m = 0; m < k; ++m) B.col(m) = realify(detail::times_i(W.basis[m]));

  Eigen::MatrixXd C(2 * W.n, 2 * k);
  C << A, -B;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() > 0 ? s(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rtol * smax) ++rank;
  int nullity = 2 * k - rank;
  if (nullity == 0) return {};

  Eigen::MatrixXd X = svd.matrixV().rightCols(nullity).topRows(k);
  Eigen::MatrixXd cand = A * X;  // candidates spanning W intersect iW
  Eigen::JacobiSVD<Eigen::MatrixXd> svd2(cand, Eigen::ComputeThinU);
  const auto& s2 = svd2.singularValues();
  double s2max = s2.size() > 0 ? s2(0) : 0.0;
  std::vector<std::vector<cdouble>> out;
  for (int i = 0; i < s2.size(); ++i)
    if (s2(i) > rtol * s2max && s2max > 0)
      out.push_back(complexify(svd2.matrixU().col(i)));
  return out;
}

inline bool is_totally_real(const RealSubspace& W, double rtol = kRankTol) {
  return complex_part(W, rtol).empty();
}

struct ExtendOutcome {
  bool ok = false;
  RealLinearMap map;
  double criterion_defect = 0;  // max |L(i v) - i L(v)| over a basis of W ^ iW
  double residual = 0;          // max |<a, w_m> - c_m| over the constraints
  std::string error;
};

// Complex-linear extension of the prescribed values L(w_m) = values[m].
// Exists exactly when the prescription is complex-linear on W intersect iW;
// that criterion is checked explicitly, then the minimal-norm interpolant is
// produced by a complex SVD solve and verified by substitution.
inline ExtendOutcome extend_complex_linear(const RealSubspace& W,
                                           const std::vector<cdouble>& values,
                                           double tol = 1e-8) {
  ExtendOutcome out;
  int k = W.dim();
  if (static_cast<int>(values.size()) != k)
    throw std::invalid_argument("extend_complex_linear: values/basis size mismatch");
  if (k == 0) {
    out.ok = true;
    out.map = RealLinearMap::zero(W.n);
    return out;
  }
  double scale = 1.0;
  for (const cdouble& c : values) scale = std::max(scale, std::abs(c));

  auto P = complex_part(W);
  if (!P.empty()) {
    Eigen::MatrixXd A = W.real_matrix();
    Eigen::JacobiSVD<Eigen::MatrixXd> svdA(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svdA.setThreshold(kRankTol);
    for (const auto& v : P) {
      Eigen::VectorXd tv = svdA.solve(realify(v));
      Eigen::VectorXd tiv = svdA.solve(realify(detail::times_i(v)));
      cdouble Lv = 0, Liv = 0;
      for (int m = 0; m < k; ++m) {
        Lv += tv(m) * values[m];
        Liv += tiv(m) * values[m];
      }
      out.criterion_defect =
          std::max(out.criterion_defect, std::abs(Liv - cdouble(0, 1) * Lv));
    }
    if (out.criterion_defect > tol * scale) {
      out.error = "values are not complex-linear on the complex part of W";
      return out;
    }
  }

  Eigen::MatrixXcd M(k, W.n);
  Eigen::VectorXcd c(k);
  for (int m = 0; m < k; ++m) {
    for (int j = 0; j < W.n; ++j) M(m, j) = W.basis[m][j];
    c(m) = values[m];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svdM(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svdM.setThreshold(kRankTol);
  Eigen::VectorXcd a = svdM.solve(c);

  Eigen::VectorXcd r = M * a - c;
  for (int m = 0; m < k; ++m) out.residual = std::max(out.residual, std::abs(r(m)));
  if (out.residual > tol * scale) {
    out.error = "constraints inconsistent beyond tolerance";
    return out;
  }
  out.ok = true;
  out.map = RealLinearMap::zero(W.n);
  for (int j = 0; j < W.n; ++j) out.map.holo[j] = a(j);
  return out;
}

}  // namespace jetplane
