#ifndef RMCLT_ENSEMBLES_HPP_
#define RMCLT_ENSEMBLES_HPP_

#include <Eigen/Dense>

#include <istream>
#include <memory>
#include <string>
#include <utility>

#include "rmclt/laws.hpp"
#include "rmclt/linalg.hpp"

namespace rmclt {

enum class EnsembleKind { Wigner, CorrGauss, Toeplitz, Wishart, DoubleWishart };

std::string to_string(EnsembleKind kind);
EnsembleKind parse_ensemble(std::string_view text);

/// Covariance of a centred gaussian vector. Structured forms (identity and
/// the covariance induced by a Toeplitz matrix on its n^2 entries) are never
/// materialised; their norms and row sums come from closed forms.
class CovarianceSpec {
 public:
  enum class Form { Identity, Dense, ToeplitzInduced };

  static CovarianceSpec identity(Eigen::Index dim);
  /// Symmetric PSD sigma; the factor comes from its eigendecomposition.
  static CovarianceSpec dense(const MatrixXd& sigma);
  static CovarianceSpec from_factor(MatrixXd factor);
  /// sigma_{ij,kl} = 1 iff |i-j| = |k-l|, over the n^2 entries of an n x n matrix.
  static CovarianceSpec toeplitz_induced(Eigen::Index n);

  Form form() const { return form_; }
  Eigen::Index dim() const { return dim_; }
  double entry(Eigen::Index a, Eigen::Index b) const;
  MatrixXd materialize() const;
  // Factor F with sigma = F F^t. Identity and Toeplitz forms build it on demand.
  MatrixXd factor() const;
  double operator_norm() const;
  // max_a sum_b |sigma_ab|
  double gershgorin() const;
  VectorXd sample(Rng& rng) const;

 private:
  Form form_ = Form::Identity;
  Eigen::Index dim_ = 0;
  Eigen::Index toeplitz_n_ = 0;
  MatrixXd factor_;
};

double gershgorin_bound(const CovarianceSpec& cov);

/// Per-entry standard deviations s_ij of a generalised Wigner matrix.
class VarianceProfile {
 public:
  static VarianceProfile constant(Eigen::Index n, double s = 1.0);
  static VarianceProfile from_matrix(const MatrixXd& s);
  /// CSV rows "i,j,s" with 1 <= i <= j <= n (1-based); a header line is
  /// optional. Every upper-triangular entry must appear.
  static VarianceProfile from_csv(std::istream& in, Eigen::Index n);

  Eigen::Index dim() const { return s_.rows(); }
  double s(Eigen::Index i, Eigen::Index j) const { return s_(i, j); }
  double lower() const;  // c = min s_ij^2
  double upper() const;  // C = max s_ij^2
  double max_scale() const { return std::sqrt(upper()); }

 private:
  MatrixXd s_;
};

/// A differentiable map x -> A(x) over an ordered index set, with closed-form
/// first and second partials and a sampler for the coordinates.
class MatrixModel {
 public:
  virtual ~MatrixModel() = default;

  virtual EnsembleKind kind() const = 0;
  Eigen::Index dim() const { return n_; }
  virtual Eigen::Index arity() const = 0;
  virtual std::string label(Eigen::Index u) const = 0;

  virtual MatrixXd assemble(const VectorXd& x) const = 0;
  virtual MatrixXd d1(const VectorXd& x, Eigen::Index u) const = 0;
  virtual MatrixXd d2(const VectorXd& x, Eigen::Index u, Eigen::Index v) const = 0;
  virtual VectorXd sample_point(Rng& rng) const = 0;

  // |I| x n^2 matrix whose rows are the row-major flattenings of d1(x, u).
  virtual MatrixXd jacobian(const VectorXd& x) const;
  virtual bool second_derivatives_vanish() const { return false; }

  // Coordinates are independent members of L(c1, c2) when true; otherwise the
  // coordinates are jointly gaussian with `covariance()`.
  virtual bool independent_coordinates() const { return true; }
  virtual double c1() const = 0;
  virtual double c2() const = 0;
  virtual const CovarianceSpec* covariance() const { return nullptr; }
  // Entry laws are symmetric around zero.
  virtual bool symmetric_entries() const = 0;

 protected:
  explicit MatrixModel(Eigen::Index n) : n_(n) {}
  void check_point(const VectorXd& x) const;
  void check_index(Eigen::Index u) const;

  Eigen::Index n_;
};

class WignerModel final : public MatrixModel {
 public:
  WignerModel(Eigen::Index n, VarianceProfile profile, SmoothLaw law);

  EnsembleKind kind() const override { return EnsembleKind::Wigner; }
  Eigen::Index arity() const override { return n_ * (n_ + 1) / 2; }
  std::string label(Eigen::Index u) const override;
  MatrixXd assemble(const VectorXd& x) const override;
  MatrixXd d1(const VectorXd& x, Eigen::Index u) const override;
  MatrixXd d2(const VectorXd& x, Eigen::Index u, Eigen::Index v) const override;
  VectorXd sample_point(Rng& rng) const override;
  bool second_derivatives_vanish() const override { return true; }
  double c1() const override { return law_.c1 * profile_.max_scale(); }
  double c2() const override { return law_.c2 * profile_.max_scale(); }
  bool symmetric_entries() const override { return law_.symmetric; }

  const VarianceProfile& profile() const { return profile_; }
  const SmoothLaw& law() const { return law_; }
  std::pair<Eigen::Index, Eigen::Index> entry_of(Eigen::Index u) const;
  Eigen::Index index_of(Eigen::Index i, Eigen::Index j) const;

 private:
  VarianceProfile profile_;
  SmoothLaw law_;
};

/// A = n^{-1/2} X with X jointly gaussian over its n^2 entries (row-major).
class CorrGaussModel final : public MatrixModel {
 public:
  CorrGaussModel(Eigen::Index n, CovarianceSpec cov);

  EnsembleKind kind() const override { return EnsembleKind::CorrGauss; }
  Eigen::Index arity() const override { return n_ * n_; }
  std::string label(Eigen::Index u) const override;
  MatrixXd assemble(const VectorXd& x) const override;
  MatrixXd d1(const VectorXd& x, Eigen::Index u) const override;
  MatrixXd d2(const VectorXd& x, Eigen::Index u, Eigen::Index v) const override;
  VectorXd sample_point(Rng& rng) const override;
  bool second_derivatives_vanish() const override { return true; }
  bool independent_coordinates() const override { return false; }
  double c1() const override { return 1.0; }
  double c2() const override { return 0.0; }
  const CovarianceSpec* covariance() const override { return &cov_; }
  bool symmetric_entries() const override { return true; }

 private:
  CovarianceSpec cov_;
};

/// A = n^{-1/2} (x_{|i-j|}) with x_0..x_{n-1} iid standard gaussian.
class ToeplitzModel final : public MatrixModel {
 public:
  explicit ToeplitzModel(Eigen::Index n);

  EnsembleKind kind() const override { return EnsembleKind::Toeplitz; }
  Eigen::Index arity() const override { return n_; }
  std::string label(Eigen::Index u) const override;
  MatrixXd assemble(const VectorXd& x) const override;
  MatrixXd d1(const VectorXd& x, Eigen::Index u) const override;
  MatrixXd d2(const VectorXd& x, Eigen::Index u, Eigen::Index v) const override;
  VectorXd sample_point(Rng& rng) const override;
  bool second_derivatives_vanish() const override { return true; }
  double c1() const override { return 1.0; }
  double c2() const override { return 0.0; }
  bool symmetric_entries() const override { return true; }

  // Covariance of the n^2 entries n^{1/2} A_ij.
  CovarianceSpec induced_covariance() const { return CovarianceSpec::toeplitz_induced(n_); }
};

/// A = N^{-1} X X^t with X an n x N array of independent entries.
class WishartModel final : public MatrixModel {
 public:
  WishartModel(Eigen::Index n, Eigen::Index big_n, SmoothLaw law);

  EnsembleKind kind() const override { return EnsembleKind::Wishart; }
  Eigen::Index arity() const override { return n_ * big_n_; }
  std::string label(Eigen::Index u) const override;
  MatrixXd assemble(const VectorXd& x) const override;
  MatrixXd d1(const VectorXd& x, Eigen::Index u) const override;
  MatrixXd d2(const VectorXd& x, Eigen::Index u, Eigen::Index v) const override;
  VectorXd sample_point(Rng& rng) const override;
  double c1() const override { return law_.c1; }
  double c2() const override { return law_.c2; }
  bool symmetric_entries() const override { return law_.symmetric; }

  Eigen::Index samples() const { return big_n_; }
  // Coordinates x_{pq} laid out as the n x N data matrix.
  MatrixXd data(const VectorXd& x) const;

 private:
  Eigen::Index big_n_;
  SmoothLaw law_;
};

/// A = X X^t (Y Y^t)^{-1}, X n x N and Y n x M. Coordinates are the entries
/// of X followed by the entries of Y, each block row-major.
class DoubleWishartModel final : public MatrixModel {
 public:
  DoubleWishartModel(Eigen::Index n, Eigen::Index big_n, Eigen::Index big_m, SmoothLaw law);

  EnsembleKind kind() const override { return EnsembleKind::DoubleWishart; }
  Eigen::Index arity() const override { return n_ * (big_n_ + big_m_); }
  std::string label(Eigen::Index u) const override;
  MatrixXd assemble(const VectorXd& x) const override;
  MatrixXd d1(const VectorXd& x, Eigen::Index u) const override;
  MatrixXd d2(const VectorXd& x, Eigen::Index u, Eigen::Index v) const override;
  MatrixXd jacobian(const VectorXd& x) const override;
  VectorXd sample_point(Rng& rng) const override;
  double c1() const override { return law_.c1; }
  double c2() const override { return law_.c2; }
  bool symmetric_entries() const override { return law_.symmetric; }

  Eigen::Index samples_x() const { return big_n_; }
  Eigen::Index samples_y() const { return big_m_; }
  MatrixXd data_x(const VectorXd& x) const;
  MatrixXd data_y(const VectorXd& x) const;

  // Reciprocal condition number below which Y Y^t counts as singular.
  static constexpr double kMinRcond = 1e-12;

 private:
  struct Point;
  Point prepare(const VectorXd& x) const;

  Eigen::Index big_n_;
  Eigen::Index big_m_;
  SmoothLaw law_;
};

}  // namespace rmclt

#endif  // RMCLT_ENSEMBLES_HPP_
