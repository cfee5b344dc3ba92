#ifndef RMCLT_AFUNC_HPP_
#define RMCLT_AFUNC_HPP_

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "rmclt/linalg.hpp"

namespace rmclt {

/// Polynomial test function f(z) = sum_m b_m z^m with complex coefficients.
///
/// Entire functions are handled by truncating their power series; the
/// neglected tail on a disc of radius r is bounded by
/// `truncation_error_bound`.
class AnalyticFn {
 public:
  AnalyticFn() = default;
  explicit AnalyticFn(std::vector<cdouble> coeffs);
  static AnalyticFn real(const std::vector<double>& coeffs);
  static AnalyticFn monomial(int degree, cdouble coeff = 1.0);

  /// Parses "z^3", "1+2z^2", "0.5*z - 3", "-z^2+z". Terms are `c*z^k` with the
  /// coefficient, the `*` and the exponent all optional.
  static AnalyticFn parse(std::string_view text);

  const std::vector<cdouble>& coeffs() const { return coeffs_; }
  cdouble coeff(int m) const;
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_real() const;
  bool is_zero() const { return coeffs_.empty(); }
  // True when every coefficient is real and nonnegative.
  bool has_nonnegative_coeffs() const;

  cdouble operator()(cdouble z) const;
  double eval_real(double x) const;

  AnalyticFn derivative() const;
  // alpha * f, used to read off linear combinations of Re and Im of the trace.
  AnalyticFn scaled(cdouble alpha) const;
  AnalyticFn truncated(int degree) const;

  std::string to_string() const;

  friend bool operator==(const AnalyticFn&, const AnalyticFn&) = default;

 private:
  void trim();
  std::vector<cdouble> coeffs_;  // coeffs_[m] = b_m; no trailing zeros
};

// f1(z) = sum m |b_m| z^(m-1).
AnalyticFn derive_f1(const AnalyticFn& f);
// f2(z) = sum m(m-1) |b_m| z^(m-2).
AnalyticFn derive_f2(const AnalyticFn& f);

// sum_{m > degree} |b_m| r^m.
double truncation_error_bound(const AnalyticFn& f, int degree, double r);

/// Dense second-derivative tensor h_{ij,kl} = d^2 Tr f(A) / da_ij da_kl stored
/// as an n^2 x n^2 matrix with row index i*n+j and column index k*n+l.
struct HessianTensor {
  Eigen::Index n = 0;
  MatrixXcd h;

  cdouble at(Eigen::Index i, Eigen::Index j, Eigen::Index k, Eigen::Index l) const {
    return h(i * n + j, k * n + l);
  }
};

inline constexpr Eigen::Index kDenseHessianLimit = 32;

namespace afunc {

/// f(A) by Horner's rule.
template <typename Derived>
MatrixXcd eval_matrix(const AnalyticFn& f, const Eigen::MatrixBase<Derived>& a) {
  linalg::require_square(a);
  const MatrixXcd ac = a.template cast<cdouble>();
  const Eigen::Index n = a.rows();
  MatrixXcd acc = MatrixXcd::Zero(n, n);
  for (int m = f.degree(); m >= 0; --m) {
    acc = (acc * ac).eval();
    acc.diagonal().array() += f.coeff(m);
  }
  return acc;
}

/// Re Tr f(A) for a real matrix without forming f(A): the last power is
/// folded into an elementwise product, so degree <= 2 costs no matmul.
double re_trace(const AnalyticFn& f, const MatrixXd& a);

/// Tr f(A) for a complex matrix.
cdouble trace(const AnalyticFn& f, const MatrixXcd& a);

/// G with G_ij = d Tr f(A) / d a_ij = (f'(A))_ji.
template <typename Derived>
MatrixXcd trace_f_gradient(const AnalyticFn& f, const Eigen::MatrixBase<Derived>& a) {
  return eval_matrix(f.derivative(), a).transpose();
}

/// sum_{ijkl} b_ij c_kl h_{ij,kl} = sum_m m b_m sum_{r=0}^{m-2} Tr(B A^r C A^{m-r-2}),
/// evaluated without materialising the tensor.
cdouble hessian_bilinear(const AnalyticFn& f, const MatrixXcd& a, const MatrixXcd& b,
                         const MatrixXcd& c);

/// Dense tensor for n <= kDenseHessianLimit; ResourceError beyond that.
HessianTensor hessian_tensor(const AnalyticFn& f, const MatrixXcd& a);

}  // namespace afunc
}  // namespace rmclt

#endif  // RMCLT_AFUNC_HPP_
