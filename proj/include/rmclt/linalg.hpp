#ifndef RMCLT_LINALG_HPP_
#define RMCLT_LINALG_HPP_

// Dense matrix kernel: norms, spectral radius, rank and the product/trace
// inequalities used to bound derivative structures. Everything is templated
// on the Eigen expression type so real and complex matrices share one code
// path; real inputs never get promoted to complex.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <span>
#include <vector>

#include "rmclt/errors.hpp"

namespace rmclt {

using cdouble = std::complex<double>;
using MatrixXd = Eigen::MatrixXd;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXd = Eigen::VectorXd;
using VectorXcd = Eigen::VectorXcd;

// Operator, Hilbert-Schmidt and nuclear norms of one matrix.
struct NormTriple {
  double op_norm = 0.0;
  double hs_norm = 0.0;
  double nuclear_norm = 0.0;
};

namespace linalg {

// Dimension above which singular values come from an iterative solver
// instead of a full decomposition.
inline constexpr Eigen::Index kDenseLimit = 512;

// Default relative tolerance for numerical_rank.
inline constexpr double kRankTol = 1e-10;

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a) {
  if (!a.allFinite()) throw InputError("matrix has non-finite entries");
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) {
    throw ShapeError("expected a square matrix, got " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()));
  }
}

template <typename Derived>
using PlainOf = typename Eigen::MatrixBase<Derived>::PlainObject;

template <typename Derived>
Eigen::VectorXd singular_values(const Eigen::MatrixBase<Derived>& a) {
  require_finite(a);
  if (a.size() == 0) return Eigen::VectorXd();
  Eigen::BDCSVD<PlainOf<Derived>> svd(a.eval());
  return svd.singularValues();
}

namespace detail {

// Largest singular value from Lanczos on A^* A with full reorthogonalisation.
// Stops when the Ritz residual drops below tol times the Ritz value.
template <typename Derived>
double lanczos_operator_norm(const Eigen::MatrixBase<Derived>& a, double tol = 1e-13) {
  using Scalar = typename Derived::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Basis = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = a.cols();
  const Eigen::Index max_steps = std::min<Eigen::Index>(n, 400);
  std::mt19937_64 gen(0x5eed5eedULL);
  std::normal_distribution<double> nd;
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
      v(i) = Scalar(nd(gen), nd(gen));
    } else {
      v(i) = nd(gen);
    }
  }
  v.normalize();
  Basis q(n, max_steps);
  std::vector<double> alpha, beta;
  q.col(0) = v;
  for (Eigen::Index k = 0; k < max_steps; ++k) {
    Vec w = a.adjoint() * (a * q.col(k));
    const double ak = std::real(q.col(k).dot(w));
    alpha.push_back(ak);
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      w -= q.leftCols(k + 1) * (q.leftCols(k + 1).adjoint() * w);
    }
    const double bk = w.norm();
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const double theta = es.eigenvalues()(m - 1);
    if (theta <= 0.0) return 0.0;
    const double residual = bk * std::abs(es.eigenvectors()(m - 1, m - 1));
    if (residual <= tol * theta || bk <= tol * theta || k + 1 == max_steps) {
      return std::sqrt(theta);
    }
    beta.push_back(bk);
    q.col(k + 1) = w / bk;
  }
  throw NumericError("Lanczos iteration for operator norm did not converge");
}

}  // namespace detail

template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& a) {
  require_finite(a);
  if (a.size() == 0) return 0.0;
  if (std::max(a.rows(), a.cols()) > kDenseLimit) return detail::lanczos_operator_norm(a);
  return singular_values(a)(0);
}

template <typename Derived>
double hs_norm(const Eigen::MatrixBase<Derived>& a) {
  require_finite(a);
  return a.norm();
}

template <typename Derived>
double nuclear_norm(const Eigen::MatrixBase<Derived>& a) {
  return singular_values(a).sum();
}

template <typename Derived>
NormTriple norms(const Eigen::MatrixBase<Derived>& a) {
  const Eigen::VectorXd s = singular_values(a);
  NormTriple out;
  if (s.size() == 0) return out;
  out.op_norm = s(0);
  out.hs_norm = s.norm();
  out.nuclear_norm = s.sum();
  return out;
}

template <typename Derived>
double spectral_radius(const Eigen::MatrixBase<Derived>& a) {
  require_square(a);
  require_finite(a);
  if (a.size() == 0) return 0.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a.template cast<cdouble>(), false);
  if (es.info() != Eigen::Success) throw NumericError("eigenvalue iteration failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Largest |eigenvalue| of a hermitian matrix (equal to its operator norm).
template <typename Derived>
double hermitian_spectral_radius(const Eigen::MatrixBase<Derived>& a) {
  require_square(a);
  require_finite(a);
  if (a.size() == 0) return 0.0;
  if (a.rows() > kDenseLimit) return detail::lanczos_operator_norm(a);
  Eigen::SelfAdjointEigenSolver<PlainOf<Derived>> es(a.eval(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("hermitian eigensolver failed");
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

// Number of singular values strictly above tol * (largest singular value).
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& a, double tol = kRankTol) {
  if (tol < 0.0) throw ArgumentError("rank tolerance must be nonnegative");
  const Eigen::VectorXd s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = tol * s(0);
  return static_cast<Eigen::Index>((s.array() > cut).count());
}

template <typename Scalar>
Scalar trace_product(std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> as) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (as.empty()) throw ArgumentError("trace_product needs at least one matrix");
  Mat acc = as.front();
  for (std::size_t k = 1; k < as.size(); ++k) {
    if (acc.cols() != as[k].rows()) {
      throw ShapeError("incompatible chain dimensions at factor " + std::to_string(k + 1));
    }
    acc = acc * as[k];
  }
  require_square(acc);
  return acc.trace();
}

template <typename Scalar>
Scalar trace_product(const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>& as) {
  return trace_product<Scalar>(
      std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>(as));
}

// ||A_i||_HS ||A_j||_HS prod_{k != i,j} ||A_k||, with 1-based i < j. Dominates
// |Tr(A_1 ... A_n)|.
template <typename Scalar>
double trace_product_bound(
    std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> as, std::size_t i,
    std::size_t j) {
  if (i < 1 || j > as.size() || i >= j) {
    throw ArgumentError("trace_product_bound requires 1 <= i < j <= n");
  }
  double bound = hs_norm(as[i - 1]) * hs_norm(as[j - 1]);
  for (std::size_t k = 1; k <= as.size(); ++k) {
    if (k == i || k == j) continue;
    bound *= operator_norm(as[k - 1]);
  }
  return bound;
}

template <typename Scalar>
double trace_product_bound(
    const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>& as, std::size_t i,
    std::size_t j) {
  return trace_product_bound<Scalar>(
      std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>(as), i, j);
}

// Row-major flattening vec(M) used when derivative matrices are stacked.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 1, Eigen::Dynamic> vec_row(
    const Eigen::MatrixBase<Derived>& m) {
  Eigen::Matrix<typename Derived::Scalar, 1, Eigen::Dynamic> out(m.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(k++) = m(i, j);
  return out;
}

}  // namespace linalg
}  // namespace rmclt

#endif  // RMCLT_LINALG_HPP_
