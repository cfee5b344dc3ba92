#include "rmclt/ensembles.hpp"

#include <cmath>
#include <sstream>

#include "rmclt/errors.hpp"

namespace rmclt {

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::Wigner: return "wigner";
    case EnsembleKind::CorrGauss: return "corr-gauss";
    case EnsembleKind::Toeplitz: return "toeplitz";
    case EnsembleKind::Wishart: return "wishart";
    case EnsembleKind::DoubleWishart: return "double-wishart";
  }
  return "unknown";
}

EnsembleKind parse_ensemble(std::string_view text) {
  if (text == "wigner") return EnsembleKind::Wigner;
  if (text == "corr-gauss") return EnsembleKind::CorrGauss;
  if (text == "toeplitz") return EnsembleKind::Toeplitz;
  if (text == "wishart") return EnsembleKind::Wishart;
  if (text == "double-wishart") return EnsembleKind::DoubleWishart;
  throw InputError("unknown ensemble \"" + std::string(text) + "\"");
}

// ---------------------------------------------------------------------------
// CovarianceSpec

CovarianceSpec CovarianceSpec::identity(Eigen::Index dim) {
  if (dim < 1) throw ArgumentError("covariance dimension must be positive");
  CovarianceSpec c;
  c.form_ = Form::Identity;
  c.dim_ = dim;
  return c;
}

CovarianceSpec CovarianceSpec::dense(const MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) throw ShapeError("covariance must be square");
  linalg::require_finite(sigma);
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ArgumentError("covariance must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sigma);
  const VectorXd& ev = es.eigenvalues();
  if (ev(0) < -1e-10 * scale) throw ArgumentError("covariance is not positive semidefinite");
  CovarianceSpec c;
  c.form_ = Form::Dense;
  c.dim_ = sigma.rows();
  c.factor_ = es.eigenvectors() * ev.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  return c;
}

CovarianceSpec CovarianceSpec::from_factor(MatrixXd factor) {
  if (factor.rows() == 0 || factor.cols() == 0) throw ShapeError("empty covariance factor");
  linalg::require_finite(factor);
  CovarianceSpec c;
  c.form_ = Form::Dense;
  c.dim_ = factor.rows();
  c.factor_ = std::move(factor);
  return c;
}

CovarianceSpec CovarianceSpec::toeplitz_induced(Eigen::Index n) {
  if (n < 1) throw ArgumentError("Toeplitz dimension must be positive");
  CovarianceSpec c;
  c.form_ = Form::ToeplitzInduced;
  c.dim_ = n * n;
  c.toeplitz_n_ = n;
  return c;
}

double CovarianceSpec::entry(Eigen::Index a, Eigen::Index b) const {
  if (a < 0 || b < 0 || a >= dim_ || b >= dim_) throw ArgumentError("covariance index out of range");
  switch (form_) {
    case Form::Identity: return a == b ? 1.0 : 0.0;
    case Form::Dense: return factor_.row(a).dot(factor_.row(b));
    case Form::ToeplitzInduced: {
      const Eigen::Index n = toeplitz_n_;
      return std::abs(a / n - a % n) == std::abs(b / n - b % n) ? 1.0 : 0.0;
    }
  }
  return 0.0;
}

MatrixXd CovarianceSpec::materialize() const {
  if (dim_ > 8192) throw ResourceError("refusing to materialise a covariance of dimension > 8192");
  switch (form_) {
    case Form::Identity: return MatrixXd::Identity(dim_, dim_);
    case Form::Dense: return factor_ * factor_.transpose();
    case Form::ToeplitzInduced: {
      const MatrixXd p = factor();
      return p * p.transpose();
    }
  }
  return {};
}

MatrixXd CovarianceSpec::factor() const {
  switch (form_) {
    case Form::Identity: return MatrixXd::Identity(dim_, dim_);
    case Form::Dense: return factor_;
    case Form::ToeplitzInduced: {
      const Eigen::Index n = toeplitz_n_;
      MatrixXd p = MatrixXd::Zero(dim_, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) p(i * n + j, std::abs(i - j)) = 1.0;
      return p;
    }
  }
  return {};
}

namespace {
// Number of entries (k, l) of an n x n matrix with |k - l| = d.
Eigen::Index diagonal_count(Eigen::Index n, Eigen::Index d) { return d == 0 ? n : 2 * (n - d); }
}  // namespace

double CovarianceSpec::operator_norm() const {
  switch (form_) {
    case Form::Identity: return 1.0;
    case Form::Dense: {
      const double s = linalg::operator_norm(factor_);
      return s * s;
    }
    case Form::ToeplitzInduced:
      // Sigma = P P^t and P^t P is diagonal with the diagonal counts.
      return static_cast<double>(
          std::max(diagonal_count(toeplitz_n_, 0), toeplitz_n_ > 1 ? diagonal_count(toeplitz_n_, 1) : 0));
  }
  return 0.0;
}

double CovarianceSpec::gershgorin() const {
  switch (form_) {
    case Form::Identity: return 1.0;
    case Form::Dense: return (factor_ * factor_.transpose()).cwiseAbs().rowwise().sum().maxCoeff();
    case Form::ToeplitzInduced: {
      // Row (i, j) has one unit entry per (k, l) on the same |k - l| diagonal.
      Eigen::Index best = 0;
      for (Eigen::Index d = 0; d < toeplitz_n_; ++d) best = std::max(best, diagonal_count(toeplitz_n_, d));
      return static_cast<double>(best);
    }
  }
  return 0.0;
}

VectorXd CovarianceSpec::sample(Rng& rng) const {
  std::normal_distribution<double> nd;
  switch (form_) {
    case Form::Identity: {
      VectorXd z(dim_);
      for (Eigen::Index i = 0; i < dim_; ++i) z(i) = nd(rng);
      return z;
    }
    case Form::Dense: {
      VectorXd z(factor_.cols());
      for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = nd(rng);
      return factor_ * z;
    }
    case Form::ToeplitzInduced: {
      const Eigen::Index n = toeplitz_n_;
      VectorXd z(n);
      for (Eigen::Index i = 0; i < n; ++i) z(i) = nd(rng);
      VectorXd x(dim_);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) x(i * n + j) = z(std::abs(i - j));
      return x;
    }
  }
  return {};
}

double gershgorin_bound(const CovarianceSpec& cov) { return cov.gershgorin(); }

// ---------------------------------------------------------------------------
// VarianceProfile

VarianceProfile VarianceProfile::constant(Eigen::Index n, double s) {
  if (n < 1) throw ArgumentError("profile dimension must be positive");
  if (!(s > 0.0)) throw ArgumentError("profile scale must be positive");
  VarianceProfile p;
  p.s_ = MatrixXd::Constant(n, n, s);
  return p;
}

VarianceProfile VarianceProfile::from_matrix(const MatrixXd& s) {
  if (s.rows() != s.cols() || s.rows() == 0) throw ShapeError("profile must be square");
  linalg::require_finite(s);
  VarianceProfile p;
  p.s_ = MatrixXd(s.rows(), s.cols());
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    for (Eigen::Index j = i; j < s.cols(); ++j) p.s_(i, j) = p.s_(j, i) = s(i, j);
  if (!(p.s_.minCoeff() > 0.0)) throw ArgumentError("profile entries must be positive (need c > 0)");
  return p;
}

VarianceProfile VarianceProfile::from_csv(std::istream& in, Eigen::Index n) {
  if (n < 1) throw ArgumentError("profile dimension must be positive");
  MatrixXd s = MatrixXd::Constant(n, n, std::nan(""));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string fi, fj, fs;
    if (!std::getline(ls, fi, ',') || !std::getline(ls, fj, ',') || !std::getline(ls, fs)) {
      throw InputError("profile CSV line " + std::to_string(lineno) + ": expected i,j,s");
    }
    long i = 0, j = 0;
    double v = 0.0;
    try {
      i = std::stol(fi);
      j = std::stol(fj);
      v = std::stod(fs);
    } catch (const std::exception&) {
      if (lineno == 1) continue;  // header
      throw InputError("profile CSV line " + std::to_string(lineno) + ": not numeric");
    }
    if (i < 1 || j < i || j > n) {
      throw InputError("profile CSV line " + std::to_string(lineno) + ": need 1 <= i <= j <= n");
    }
    s(i - 1, j - 1) = v;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      if (std::isnan(s(i, j))) {
        throw InputError("profile CSV is missing entry (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ")");
      }
      s(j, i) = s(i, j);
    }
  return from_matrix(s);
}

double VarianceProfile::lower() const {
  const double m = s_.minCoeff();
  return m * m;
}

double VarianceProfile::upper() const {
  const double m = s_.maxCoeff();
  return m * m;
}

// ---------------------------------------------------------------------------
// MatrixModel

void MatrixModel::check_point(const VectorXd& x) const {
  if (x.size() != arity()) {
    throw ShapeError("point has " + std::to_string(x.size()) + " coordinates, model expects " +
                     std::to_string(arity()));
  }
}

void MatrixModel::check_index(Eigen::Index u) const {
  if (u < 0 || u >= arity()) throw ArgumentError("coordinate index out of range");
}

MatrixXd MatrixModel::jacobian(const VectorXd& x) const {
  check_point(x);
  MatrixXd j(arity(), n_ * n_);
  for (Eigen::Index u = 0; u < arity(); ++u) j.row(u) = linalg::vec_row(d1(x, u));
  return j;
}

namespace {
MatrixXd unit_pair(Eigen::Index n, Eigen::Index i, Eigen::Index j, double value) {
  MatrixXd m = MatrixXd::Zero(n, n);
  m(i, j) += value;
  if (i != j) m(j, i) += value;
  return m;
}
}  // namespace

// ---------------------------------------------------------------------------
// Wigner

WignerModel::WignerModel(Eigen::Index n, VarianceProfile profile, SmoothLaw law)
    : MatrixModel(n), profile_(std::move(profile)), law_(std::move(law)) {
  if (n < 1) throw ArgumentError("Wigner dimension must be positive");
  if (profile_.dim() != n) throw ShapeError("variance profile dimension does not match n");
}

Eigen::Index WignerModel::index_of(Eigen::Index i, Eigen::Index j) const {
  if (i > j) std::swap(i, j);
  return i * n_ - i * (i - 1) / 2 + (j - i);
}

std::pair<Eigen::Index, Eigen::Index> WignerModel::entry_of(Eigen::Index u) const {
  check_index(u);
  Eigen::Index i = 0;
  while (u >= n_ - i) {
    u -= n_ - i;
    ++i;
  }
  return {i, i + u};
}

std::string WignerModel::label(Eigen::Index u) const {
  const auto [i, j] = entry_of(u);
  return "x(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

MatrixXd WignerModel::assemble(const VectorXd& x) const {
  check_point(x);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  MatrixXd a(n_, n_);
  Eigen::Index u = 0;
  for (Eigen::Index i = 0; i < n_; ++i)
    for (Eigen::Index j = i; j < n_; ++j, ++u) a(i, j) = a(j, i) = scale * x(u);
  return a;
}

MatrixXd WignerModel::d1(const VectorXd& x, Eigen::Index u) const {
  check_point(x);
  const auto [i, j] = entry_of(u);
  return unit_pair(n_, i, j, 1.0 / std::sqrt(static_cast<double>(n_)));
}

MatrixXd WignerModel::d2(const VectorXd& x, Eigen::Index u, Eigen::Index v) const {
  check_point(x);
  check_index(u);
  check_index(v);
  return MatrixXd::Zero(n_, n_);
}

VectorXd WignerModel::sample_point(Rng& rng) const {
  std::normal_distribution<double> nd;
  VectorXd x(arity());
  Eigen::Index u = 0;
  for (Eigen::Index i = 0; i < n_; ++i)
    for (Eigen::Index j = i; j < n_; ++j, ++u) x(u) = profile_.s(i, j) * law_.u(nd(rng));
  return x;
}

// ---------------------------------------------------------------------------
// Correlated gaussian

CorrGaussModel::CorrGaussModel(Eigen::Index n, CovarianceSpec cov) : MatrixModel(n), cov_(std::move(cov)) {
  if (n < 1) throw ArgumentError("dimension must be positive");
  if (cov_.dim() != n * n) throw ArgumentError("covariance dimension must equal n^2");
}

std::string CorrGaussModel::label(Eigen::Index u) const {
  check_index(u);
  return "x(" + std::to_string(u / n_ + 1) + "," + std::to_string(u % n_ + 1) + ")";
}

MatrixXd CorrGaussModel::assemble(const VectorXd& x) const {
  check_point(x);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  return scale * Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                     x.data(), n_, n_);
}

MatrixXd CorrGaussModel::d1(const VectorXd& x, Eigen::Index u) const {
  check_point(x);
  check_index(u);
  MatrixXd m = MatrixXd::Zero(n_, n_);
  m(u / n_, u % n_) = 1.0 / std::sqrt(static_cast<double>(n_));
  return m;
}

MatrixXd CorrGaussModel::d2(const VectorXd& x, Eigen::Index u, Eigen::Index v) const {
  check_point(x);
  check_index(u);
  check_index(v);
  return MatrixXd::Zero(n_, n_);
}

VectorXd CorrGaussModel::sample_point(Rng& rng) const { return cov_.sample(rng); }

// ---------------------------------------------------------------------------
// Toeplitz

ToeplitzModel::ToeplitzModel(Eigen::Index n) : MatrixModel(n) {
  if (n < 1) throw ArgumentError("Toeplitz dimension must be positive");
}

std::string ToeplitzModel::label(Eigen::Index u) const {
  check_index(u);
  return "x" + std::to_string(u);
}

MatrixXd ToeplitzModel::assemble(const VectorXd& x) const {
  check_point(x);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  MatrixXd a(n_, n_);
  for (Eigen::Index i = 0; i < n_; ++i)
    for (Eigen::Index j = 0; j < n_; ++j) a(i, j) = scale * x(std::abs(i - j));
  return a;
}

MatrixXd ToeplitzModel::d1(const VectorXd& x, Eigen::Index u) const {
  check_point(x);
  check_index(u);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  MatrixXd m = MatrixXd::Zero(n_, n_);
  for (Eigen::Index i = 0; i + u < n_; ++i) {
    m(i, i + u) = scale;
    m(i + u, i) = scale;
  }
  return m;
}

MatrixXd ToeplitzModel::d2(const VectorXd& x, Eigen::Index u, Eigen::Index v) const {
  check_point(x);
  check_index(u);
  check_index(v);
  return MatrixXd::Zero(n_, n_);
}

VectorXd ToeplitzModel::sample_point(Rng& rng) const {
  std::normal_distribution<double> nd;
  VectorXd x(n_);
  for (Eigen::Index i = 0; i < n_; ++i) x(i) = nd(rng);
  return x;
}

// ---------------------------------------------------------------------------
// Wishart

WishartModel::WishartModel(Eigen::Index n, Eigen::Index big_n, SmoothLaw law)
    : MatrixModel(n), big_n_(big_n), law_(std::move(law)) {
  if (n < 1) throw ArgumentError("Wishart dimension must be positive");
  if (n > big_n) throw ArgumentError("Wishart requires n <= N");
}

std::string WishartModel::label(Eigen::Index u) const {
  check_index(u);
  return "x(" + std::to_string(u / big_n_ + 1) + "," + std::to_string(u % big_n_ + 1) + ")";
}

MatrixXd WishartModel::data(const VectorXd& x) const {
  check_point(x);
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      x.data(), n_, big_n_);
}

MatrixXd WishartModel::assemble(const VectorXd& x) const {
  const MatrixXd xm = data(x);
  MatrixXd a = MatrixXd::Zero(n_, n_);
  a.selfadjointView<Eigen::Lower>().rankUpdate(xm, 1.0 / static_cast<double>(big_n_));
  a.triangularView<Eigen::StrictlyUpper>() = a.transpose();
  return a;
}

MatrixXd WishartModel::d1(const VectorXd& x, Eigen::Index u) const {
  check_index(u);
  const MatrixXd xm = data(x);
  const Eigen::Index p = u / big_n_, q = u % big_n_;
  MatrixXd m = MatrixXd::Zero(n_, n_);
  // N^{-1}(e_p (X e_q)^t + (X e_q) e_p^t)
  m.row(p) += xm.col(q).transpose();
  m.col(p) += xm.col(q);
  return m / static_cast<double>(big_n_);
}

MatrixXd WishartModel::d2(const VectorXd& x, Eigen::Index u, Eigen::Index v) const {
  check_point(x);
  check_index(u);
  check_index(v);
  const Eigen::Index p = u / big_n_, q = u % big_n_;
  const Eigen::Index r = v / big_n_, s = v % big_n_;
  MatrixXd m = MatrixXd::Zero(n_, n_);
  if (q != s) return m;
  m(p, r) += 1.0;
  m(r, p) += 1.0;
  return m / static_cast<double>(big_n_);
}

VectorXd WishartModel::sample_point(Rng& rng) const {
  std::normal_distribution<double> nd;
  VectorXd x(arity());
  for (Eigen::Index u = 0; u < x.size(); ++u) x(u) = law_.u(nd(rng));
  return x;
}

// ---------------------------------------------------------------------------
// Double Wishart

struct DoubleWishartModel::Point {
  MatrixXd x, y, a;
  Eigen::LLT<MatrixXd> d;

  // M D^{-1}, using the symmetry of D.
  MatrixXd rdiv(const MatrixXd& m) const { return d.solve(m.transpose()).transpose(); }
};

DoubleWishartModel::DoubleWishartModel(Eigen::Index n, Eigen::Index big_n, Eigen::Index big_m, SmoothLaw law)
    : MatrixModel(n), big_n_(big_n), big_m_(big_m), law_(std::move(law)) {
  if (n < 1) throw ArgumentError("double Wishart dimension must be positive");
  if (!(n <= big_n && big_n <= big_m)) throw ArgumentError("double Wishart requires n <= N <= M");
}

std::string DoubleWishartModel::label(Eigen::Index u) const {
  check_index(u);
  if (u < n_ * big_n_) {
    return "x(" + std::to_string(u / big_n_ + 1) + "," + std::to_string(u % big_n_ + 1) + ")";
  }
  u -= n_ * big_n_;
  return "y(" + std::to_string(u / big_m_ + 1) + "," + std::to_string(u % big_m_ + 1) + ")";
}

MatrixXd DoubleWishartModel::data_x(const VectorXd& x) const {
  check_point(x);
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      x.data(), n_, big_n_);
}

MatrixXd DoubleWishartModel::data_y(const VectorXd& x) const {
  check_point(x);
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      x.data() + n_ * big_n_, n_, big_m_);
}

DoubleWishartModel::Point DoubleWishartModel::prepare(const VectorXd& x) const {
  Point pt;
  pt.x = data_x(x);
  pt.y = data_y(x);
  const MatrixXd dmat = pt.y * pt.y.transpose();
  pt.d.compute(dmat);
  if (pt.d.info() != Eigen::Success || !(pt.d.rcond() >= kMinRcond)) {
    throw DegenerateError("Y Y^t is numerically singular (reciprocal condition " +
                          std::to_string(pt.d.info() == Eigen::Success ? pt.d.rcond() : 0.0) + ")");
  }
  pt.a = pt.rdiv(pt.x * pt.x.transpose());
  return pt;
}

MatrixXd DoubleWishartModel::assemble(const VectorXd& x) const { return prepare(x).a; }

namespace {
// e_p v^t + v e_p^t
MatrixXd sym_outer(Eigen::Index n, Eigen::Index p, const VectorXd& v) {
  MatrixXd m = MatrixXd::Zero(n, n);
  m.row(p) += v.transpose();
  m.col(p) += v;
  return m;
}
}  // namespace

MatrixXd DoubleWishartModel::d1(const VectorXd& x, Eigen::Index u) const {
  check_index(u);
  const Point pt = prepare(x);
  if (u < n_ * big_n_) {
    const Eigen::Index p = u / big_n_, q = u % big_n_;
    return pt.rdiv(sym_outer(n_, p, pt.x.col(q)));
  }
  u -= n_ * big_n_;
  const Eigen::Index p = u / big_m_, q = u % big_m_;
  return -pt.rdiv(pt.a * sym_outer(n_, p, pt.y.col(q)));
}

MatrixXd DoubleWishartModel::jacobian(const VectorXd& x) const {
  const Point pt = prepare(x);
  MatrixXd j(arity(), n_ * n_);
  Eigen::Index row = 0;
  for (Eigen::Index p = 0; p < n_; ++p)
    for (Eigen::Index q = 0; q < big_n_; ++q) j.row(row++) = linalg::vec_row(pt.rdiv(sym_outer(n_, p, pt.x.col(q))));
  for (Eigen::Index p = 0; p < n_; ++p)
    for (Eigen::Index q = 0; q < big_m_; ++q)
      j.row(row++) = linalg::vec_row(-pt.rdiv(pt.a * sym_outer(n_, p, pt.y.col(q))));
  return j;
}

MatrixXd DoubleWishartModel::d2(const VectorXd& x, Eigen::Index u, Eigen::Index v) const {
  check_index(u);
  check_index(v);
  const Point pt = prepare(x);
  const Eigen::Index nx = n_ * big_n_;
  const bool ux = u < nx, vx = v < nx;
  if (!ux && vx) {
    std::swap(u, v);
  }
  if (ux && vx) {
    const Eigen::Index p = u / big_n_, q = u % big_n_;
    const Eigen::Index r = v / big_n_, s = v % big_n_;
    if (q != s) return MatrixXd::Zero(n_, n_);
    MatrixXd e = MatrixXd::Zero(n_, n_);
    e(p, r) += 1.0;
    e(r, p) += 1.0;
    return pt.rdiv(e);
  }
  if (ux != vx) {
    // u in the x block, v in the y block: -dC D^{-1} dD D^{-1}
    const Eigen::Index p = u / big_n_, q = u % big_n_;
    const Eigen::Index w = v - nx;
    const Eigen::Index r = w / big_m_, s = w % big_m_;
    const MatrixXd dc = sym_outer(n_, p, pt.x.col(q));
    const MatrixXd dd = sym_outer(n_, r, pt.y.col(s));
    return -pt.rdiv(pt.rdiv(dc) * dd);
  }
  const Eigen::Index wu = u - nx, wv = v - nx;
  const Eigen::Index p = wu / big_m_, q = wu % big_m_;
  const Eigen::Index r = wv / big_m_, s = wv % big_m_;
  const MatrixXd ddu = sym_outer(n_, p, pt.y.col(q));
  const MatrixXd ddv = sym_outer(n_, r, pt.y.col(s));
  // A dD_u D^{-1} dD_v D^{-1} + A dD_v D^{-1} dD_u D^{-1} - A d2D D^{-1}
  MatrixXd out = pt.rdiv(pt.rdiv(pt.a * ddu) * ddv) + pt.rdiv(pt.rdiv(pt.a * ddv) * ddu);
  if (q == s) {
    MatrixXd e = MatrixXd::Zero(n_, n_);
    e(p, r) += 1.0;
    e(r, p) += 1.0;
    out -= pt.rdiv(pt.a * e);
  }
  return out;
}

VectorXd DoubleWishartModel::sample_point(Rng& rng) const {
  std::normal_distribution<double> nd;
  VectorXd x(arity());
  for (Eigen::Index u = 0; u < x.size(); ++u) x(u) = law_.u(nd(rng));
  return x;
}

}  // namespace rmclt
