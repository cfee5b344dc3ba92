#include "rmclt/socp.hpp"

#include <cmath>
#include <sstream>

#include "rmclt/errors.hpp"
#include "rmclt/parallel.hpp"

namespace rmclt {

namespace {

double fd_step(double x) { return 6e-6 * std::max(1.0, std::abs(x)); }

std::string describe_point(const VectorXd& x) {
  std::ostringstream os;
  os.precision(6);
  os << "[";
  const Eigen::Index shown = std::min<Eigen::Index>(x.size(), 8);
  for (Eigen::Index i = 0; i < shown; ++i) os << (i ? ", " : "") << x(i);
  if (shown < x.size()) os << ", ... (" << x.size() << " coordinates)";
  os << "]";
  return os.str();
}

const double kTwoSqrt5 = 2.0 * std::sqrt(5.0);

void require_sigma2(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw ArgumentError("sigma2 must be positive and finite");
}

void require_kappas(const KappaTriple& k) {
  for (double v : {k.kappa0, k.kappa1, k.kappa2}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ArgumentError("kappas must be finite and nonnegative");
  }
}

}  // namespace

VectorXd FunctionalModel::gradient(const VectorXd& x) const {
  if (grad) return grad(x);
  if (!eval) throw ArgumentError("functional has neither eval nor grad");
  VectorXd g(x.size());
  VectorXd y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = fd_step(x(i));
    y(i) = x(i) + h;
    const double up = eval(y);
    y(i) = x(i) - h;
    const double down = eval(y);
    y(i) = x(i);
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

MatrixXd FunctionalModel::hessian(const VectorXd& x) const {
  if (hess) return hess(x);
  MatrixXd h(x.size(), x.size());
  VectorXd y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = fd_step(x(i)) * 100.0;
    y(i) = x(i) + step;
    const VectorXd up = gradient(y);
    y(i) = x(i) - step;
    const VectorXd down = gradient(y);
    y(i) = x(i);
    h.col(i) = (up - down) / (2.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

double FunctionalModel::hessian_norm(const VectorXd& x) const {
  if (hess_norm) return hess_norm(x);
  return linalg::hermitian_spectral_radius(hessian(x));
}

FunctionalModel linear_functional(const VectorXd& a) {
  FunctionalModel fm;
  fm.arity = a.size();
  fm.eval = [a](const VectorXd& x) { return a.dot(x); };
  fm.grad = [a](const VectorXd&) { return a; };
  fm.hess_norm = [](const VectorXd&) { return 0.0; };
  return fm;
}

FunctionalModel quadratic_functional(const MatrixXd& b, double scale) {
  linalg::require_square(b);
  const MatrixXd s = 0.5 * (b + b.transpose());
  const double norm = 2.0 * std::abs(scale) * linalg::hermitian_spectral_radius(s);
  FunctionalModel fm;
  fm.arity = b.rows();
  fm.eval = [s, scale](const VectorXd& x) { return scale * x.dot(s * x); };
  fm.grad = [s, scale](const VectorXd& x) -> VectorXd { return 2.0 * scale * (s * x); };
  fm.hess = [s, scale](const VectorXd&) -> MatrixXd { return 2.0 * scale * s; };
  fm.hess_norm = [norm](const VectorXd&) { return norm; };
  return fm;
}

GradientCheck check_gradient(const FunctionalModel& fm, const VectorXd& x, double tol) {
  if (!fm.eval) throw ArgumentError("check_gradient needs eval");
  FunctionalModel fd = fm;
  fd.grad = nullptr;
  const VectorXd g = fm.gradient(x);
  const VectorXd approx = fd.gradient(x);
  GradientCheck out;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double err = std::abs(g(i) - approx(i)) / std::max(1.0, std::abs(g(i)));
    out.max_rel_error = std::max(out.max_rel_error, err);
  }
  out.ok = out.max_rel_error <= tol;
  return out;
}

KappaTriple kappas_from_moments(const MeanEstimate& m0, const MeanEstimate& m1, const MeanEstimate& m2,
                                std::size_t n_mc) {
  KappaTriple k;
  k.n_mc = n_mc;
  k.kappa0 = std::sqrt(std::max(m0.mean, 0.0));
  k.kappa1 = std::pow(std::max(m1.mean, 0.0), 0.25);
  k.kappa2 = std::pow(std::max(m2.mean, 0.0), 0.25);
  // d(m^p) = p m^{p-1} dm
  k.se[0] = k.kappa0 > 0.0 ? m0.se / (2.0 * k.kappa0) : 0.0;
  k.se[1] = k.kappa1 > 0.0 ? m1.se / (4.0 * std::pow(k.kappa1, 3)) : 0.0;
  k.se[2] = k.kappa2 > 0.0 ? m2.se / (4.0 * std::pow(k.kappa2, 3)) : 0.0;
  return k;
}

PointSampler independent_sampler(std::vector<SmoothLaw> laws, Eigen::Index arity) {
  if (laws.empty()) throw ArgumentError("need at least one law");
  if (laws.size() != 1 && static_cast<Eigen::Index>(laws.size()) != arity) {
    throw ShapeError("need one law per coordinate or a single shared law");
  }
  return [laws = std::move(laws), arity](Rng& rng) {
    std::normal_distribution<double> nd;
    VectorXd x(arity);
    for (Eigen::Index i = 0; i < arity; ++i) x(i) = laws[laws.size() == 1 ? 0 : i].u(nd(rng));
    return x;
  };
}

KappaTriple estimate_kappas(const FunctionalModel& fm, const PointSampler& sampler, std::size_t n_mc,
                            std::uint64_t seed, unsigned workers) {
  if (n_mc < 2) throw ArgumentError("estimate_kappas needs n_mc >= 2");
  const auto rows = mc_map<std::array<double, 3>>(n_mc, seed, workers, [&](Rng& rng, std::size_t) {
    const VectorXd x = sampler(rng);
    const VectorXd g = fm.gradient(x);
    const double h = fm.hessian_norm(x);
    if (!g.allFinite() || !std::isfinite(h)) {
      throw SampleDomainError("non-finite derivative at x = " + describe_point(x));
    }
    const double g2 = g.squaredNorm();
    return std::array<double, 3>{g.array().square().square().sum(), g2 * g2, h * h * h * h};
  });
  std::array<MeanEstimate, 3> m;
  std::vector<double> col(n_mc);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n_mc; ++i) col[i] = rows[i][c];
    m[c] = estimate_mean(col);
  }
  return kappas_from_moments(m[0], m[1], m[2], n_mc);
}

KappaTriple estimate_kappas(const FunctionalModel& fm, const std::vector<SmoothLaw>& laws, std::size_t n_mc,
                            std::uint64_t seed, unsigned workers) {
  return estimate_kappas(fm, independent_sampler(laws, fm.arity), n_mc, seed, workers);
}

double tv_bound_independent(double c1, double c2, const KappaTriple& k, double sigma2) {
  require_sigma2(sigma2);
  require_kappas(k);
  if (!(c1 >= 0.0 && c2 >= 0.0)) throw ArgumentError("c1, c2 must be nonnegative");
  return kTwoSqrt5 * (c1 * c2 * k.kappa0 + c1 * c1 * c1 * k.kappa1 * k.kappa2) / sigma2;
}

double tv_bound_covariance(double sigma_op_norm, const KappaTriple& k, double sigma2) {
  require_sigma2(sigma2);
  require_kappas(k);
  if (!(sigma_op_norm >= 0.0)) throw ArgumentError("covariance norm must be nonnegative");
  return kTwoSqrt5 * std::pow(sigma_op_norm, 1.5) * k.kappa1 * k.kappa2 / sigma2;
}

QuadraticDiagnostic quadratic_form_diagnostic(const MatrixXd& b, double threshold) {
  linalg::require_square(b);
  linalg::require_finite(b);
  if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
    throw ArgumentError("quadratic_form_diagnostic needs a symmetric matrix");
  }
  const VectorXd ev = Eigen::SelfAdjointEigenSolver<MatrixXd>(b, Eigen::EigenvaluesOnly).eigenvalues();
  const double total = ev.squaredNorm();
  if (total == 0.0) throw DegenerateError("B = 0: the eigenvalue ratio is undefined");
  QuadraticDiagnostic d;
  d.ratio = ev.cwiseAbs2().maxCoeff() / total;
  d.near_gaussian = d.ratio < threshold;
  d.verdict = d.near_gaussian ? "near-gaussian" : "not near-gaussian";
  return d;
}

double recompute_tv_bound(const BoundReport& r) {
  const double s2 = r.sigma2_used;
  auto dim = [&](const char* key) {
    const auto it = r.dims.find(key);
    if (it == r.dims.end()) throw ArgumentError(std::string("report lacks dimension ") + key);
    return static_cast<double>(it->second);
  };
  auto need = [](const std::optional<double>& v, const char* what) {
    if (!v) throw ArgumentError(std::string("report lacks ") + what);
    return *v;
  };
  if (r.theorem == "independent" || r.theorem == "matrix") return tv_bound_independent(r.c1, r.c2, r.kappas, s2);
  if (r.theorem == "covariance" || r.theorem == "matrix-covariance") {
    return tv_bound_covariance(need(r.sigma_op_norm, "sigma_op_norm"), r.kappas, s2);
  }
  require_sigma2(s2);
  const double a = need(r.a, "a"), b = need(r.b, "b");
  if (r.theorem == "wigner") {
    const double n = dim("n");
    return kTwoSqrt5 / s2 * (4.0 * r.c1 * r.c2 * a * a / std::sqrt(n) + 8.0 * std::pow(r.c1, 3) * a * b / n);
  }
  if (r.theorem == "corr-gaussian") {
    return kTwoSqrt5 * std::pow(need(r.sigma_op_norm, "sigma_op_norm"), 1.5) * a * b / (s2 * dim("n"));
  }
  if (r.theorem == "wishart") {
    const double n = dim("n"), nn = dim("N");
    return 8.0 * std::sqrt(5.0) / s2 *
           (r.c1 * r.c2 * a * a * std::sqrt(n) / nn + std::pow(r.c1, 3) * a * b * n / std::pow(nn, 1.5));
  }
  if (r.theorem == "double-wishart") {
    const double n = dim("n"), nn = dim("N"), mm = dim("M");
    return 4.0 * std::sqrt(10.0) / s2 *
           (r.c1 * r.c2 * a * a * nn * std::sqrt(n) / (mm * mm) +
            2.0 * std::pow(r.c1, 3) * a * b * std::sqrt(nn) * n / (mm * mm));
  }
  throw ArgumentError("unknown theorem tag \"" + r.theorem + "\"");
}

double conservative_sigma2(const VarianceEstimate& v) {
  if (!(v.ci_low > 0.0)) {
    throw DegenerateError("the variance interval reaches zero (low end " + std::to_string(v.ci_low) +
                          "); increase the sample count");
  }
  return v.ci_low;
}

std::optional<std::string> kurtosis_warning(const VarianceEstimate& v) {
  if (v.kurtosis > 100.0) {
    return "kurtosis estimate " + std::to_string(v.kurtosis) +
           " exceeds 100; the finite fourth moment assumption is suspect and the sigma2 interval is unreliable";
  }
  return std::nullopt;
}

}  // namespace rmclt
