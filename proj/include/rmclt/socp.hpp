#ifndef RMCLT_SOCP_HPP_
#define RMCLT_SOCP_HPP_

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmclt/laws.hpp"
#include "rmclt/linalg.hpp"
#include "rmclt/stats.hpp"

namespace rmclt {

/// A smooth functional g: R^n -> R with optional analytic derivatives.
/// Missing derivatives fall back to central differences.
struct FunctionalModel {
  Eigen::Index arity = 0;
  std::function<double(const VectorXd&)> eval;
  std::function<VectorXd(const VectorXd&)> grad;
  std::function<MatrixXd(const VectorXd&)> hess;
  // Cheaper alternative to `hess` when only ||hess(x)|| is needed.
  std::function<double(const VectorXd&)> hess_norm;

  VectorXd gradient(const VectorXd& x) const;
  MatrixXd hessian(const VectorXd& x) const;
  double hessian_norm(const VectorXd& x) const;
};

FunctionalModel linear_functional(const VectorXd& a);
/// g(x) = scale * x^t B x for symmetric B.
FunctionalModel quadratic_functional(const MatrixXd& b, double scale = 1.0);

struct GradientCheck {
  double max_rel_error = 0.0;
  bool ok = false;
};

/// Compares `fm.grad` against central differences of `fm.eval` at x:
/// |g - fd| <= tol * max(1, |g|) coordinatewise.
GradientCheck check_gradient(const FunctionalModel& fm, const VectorXd& x, double tol = 1e-5);

struct KappaTriple {
  double kappa0 = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  std::array<double, 3> se{};  // delta-method standard errors
  std::size_t n_mc = 0;
};

/// Turns the MC means of |d|^4-type moments into the kappa triple:
/// kappa0 = m0^{1/2}, kappa1 = m1^{1/4}, kappa2 = m2^{1/4}.
KappaTriple kappas_from_moments(const MeanEstimate& m0, const MeanEstimate& m1, const MeanEstimate& m2,
                                std::size_t n_mc);

using PointSampler = std::function<VectorXd(Rng&)>;

/// Independent coordinates, coordinate i drawn from laws[i] (or laws[0] for all
/// when a single law is given).
PointSampler independent_sampler(std::vector<SmoothLaw> laws, Eigen::Index arity);

/// MC estimates of E sum|d_i g|^4, E||grad g||^4 and E||hess g||^4.
KappaTriple estimate_kappas(const FunctionalModel& fm, const PointSampler& sampler, std::size_t n_mc,
                            std::uint64_t seed, unsigned workers = 1);
KappaTriple estimate_kappas(const FunctionalModel& fm, const std::vector<SmoothLaw>& laws, std::size_t n_mc,
                            std::uint64_t seed, unsigned workers = 1);

/// 2 sqrt5 (c1 c2 kappa0 + c1^3 kappa1 kappa2) / sigma2
double tv_bound_independent(double c1, double c2, const KappaTriple& k, double sigma2);
/// 2 sqrt5 ||Sigma||^{3/2} kappa1 kappa2 / sigma2
double tv_bound_covariance(double sigma_op_norm, const KappaTriple& k, double sigma2);

struct QuadraticDiagnostic {
  double ratio = 0.0;  // max lambda^2 / sum lambda^2
  bool near_gaussian = false;
  std::string verdict;
};

QuadraticDiagnostic quadratic_form_diagnostic(const MatrixXd& b, double threshold = 0.05);

struct EtaSummary {
  double eta0_mean = 0.0;
  double eta1_mean = 0.0;
  double eta2_mean = 0.0;
  double eta0_max = 0.0;
  double eta1_max = 0.0;
  double eta2_max = 0.0;
};

/// Everything needed to recompute a bound. Which fields participate depends
/// on `theorem`:
///   independent    2 sqrt5 (c1 c2 k0 + c1^3 k1 k2) / s2
///   covariance     2 sqrt5 ||Sigma||^{3/2} k1 k2 / s2
///   matrix         as independent, kappas from the eta profiles
///   wigner, wishart, double-wishart, corr-gaussian
///                  the ensemble closed forms in a, b and dims
/// s2 is `sigma2_used`, the lower end of the variance interval.
struct BoundReport {
  std::string theorem;
  double c1 = 0.0;
  double c2 = 0.0;
  std::optional<double> sigma_op_norm;
  KappaTriple kappas;
  VarianceEstimate sigma2;
  double sigma2_used = 0.0;
  double tv_bound = 0.0;
  std::size_t n_mc = 0;
  std::size_t n_sigma = 0;
  std::uint64_t seed = 0;

  // Matrix-model extension.
  std::optional<std::string> gamma_method;
  std::optional<EtaSummary> eta_summary;
  std::optional<double> a, b, a_se, b_se;
  std::optional<std::string> ensemble;
  std::map<std::string, long long> dims;
  std::map<std::string, double> metadata;
  std::vector<std::string> warnings;
};

/// Recomputes tv_bound from the report's own fields.
double recompute_tv_bound(const BoundReport& r);

/// Picks the variance used in the denominator: the lower CI endpoint when it
/// is positive, otherwise DegenerateError.
double conservative_sigma2(const VarianceEstimate& v);

/// Heavy-tail warning when the kurtosis estimate exceeds 100.
std::optional<std::string> kurtosis_warning(const VarianceEstimate& v);

}  // namespace rmclt

#endif  // RMCLT_SOCP_HPP_
