#ifndef RMCLT_MATRIXBOUND_HPP_
#define RMCLT_MATRIXBOUND_HPP_

#include <cstdint>
#include <string>

#include "rmclt/afunc.hpp"
#include "rmclt/ensembles.hpp"
#include "rmclt/socp.hpp"

namespace rmclt {

/// Suprema of the first and second derivative structures of A at a point.
///
/// For closed forms gamma2_upper == gamma2. For numeric profiles gamma2 is an
/// alternating-ascent lower estimate and gamma2_upper a flattening bound; use
/// `gamma2_upper` wherever an upper bound is required.
struct GammaProfile {
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma2_upper = 0.0;
  std::string method;  // "closed-form" or "numeric"
  VectorXd at;
};

/// Upper bounds from the ensemble's structure, evaluated at x.
/// CapabilityError when the model has no closed form.
GammaProfile gammas_closed_form(const MatrixModel& model, const VectorXd& x);

/// gamma0 = max_u ||dA/dx_u||_*, gamma1 = ||J||, gamma2 by alternating ascent
/// over (alpha, alpha', beta) with at most `iters` sweeps. ResourceError when
/// the second-derivative tensor would exceed kMaxTensorEntries.
GammaProfile gammas_numeric(const MatrixModel& model, const VectorXd& x, int iters = 200);

inline constexpr std::size_t kMaxTensorEntries = 20'000'000;

struct EtaProfile {
  double eta0 = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double lambda = 0.0;
  Eigen::Index rank = 0;
};

/// eta0 = g0 f1(l), eta1 = g1 f1(l) sqrt r, eta2 = g2 f1(l) sqrt r + g1^2 f2(l),
/// with gamma2_upper standing in for g2.
EtaProfile eta_profile(const GammaProfile& g, const AnalyticFn& f, double lambda, Eigen::Index r);

enum class GammaSource { Auto, ClosedForm, Numeric };

struct MatrixKappaEstimate {
  KappaTriple kappas;
  EtaSummary eta;
  std::string gamma_method;
};

/// kappa0 = (E eta0^2 eta1^2)^{1/2}, kappa1 = (E eta1^4)^{1/4},
/// kappa2 = (E eta2^4)^{1/4} over sampled X. Auto uses the closed form when
/// the model has one.
MatrixKappaEstimate estimate_matrix_kappas(const MatrixModel& model, const AnalyticFn& f, std::size_t n_mc,
                                           std::uint64_t seed, unsigned workers = 1,
                                           GammaSource source = GammaSource::Auto);

double tv_bound_matrix(double c1, double c2, const KappaTriple& k, double sigma2);

/// (2 sqrt5 / s2)(4 c1 c2 a^2 / sqrt n + 8 c1^3 a b / n)
double wigner_bound(Eigen::Index n, double c1, double c2, double a, double b, double sigma2);
/// 2 sqrt5 ||Sigma||^{3/2} a b / (s2 n)
double corr_gaussian_bound(double sigma_op, double a, double b, double sigma2, Eigen::Index n);
/// (8 sqrt5 / s2)(c1 c2 a^2 sqrt n / N + c1^3 a b n / N^{3/2})
double wishart_bound(Eigen::Index n, Eigen::Index big_n, double c1, double c2, double a, double b, double sigma2);
/// (4 sqrt10 / s2)(c1 c2 a^2 N sqrt n / M^2 + 2 c1^3 a b sqrt N n / M^2)
double double_wishart_bound(Eigen::Index n, Eigen::Index big_n, Eigen::Index big_m, double c1, double c2, double a,
                            double b, double sigma2);

// The kappa bounds behind each ensemble display, in terms of a and b.
KappaTriple wigner_kappas(Eigen::Index n, double a, double b);
KappaTriple wishart_kappas(Eigen::Index n, Eigen::Index big_n, double a, double b);
KappaTriple double_wishart_kappas(Eigen::Index n, Eigen::Index big_n, Eigen::Index big_m, double a, double b);

/// max{1, lambda_x, lambda_y, 1/delta_y} for the normalised X X^t / N and Y Y^t / M.
double double_wishart_lambda(const DoubleWishartModel& model, const VectorXd& x);

struct EnsembleBoundInputs {
  double a = 0.0;
  double b = 0.0;
  double a_se = 0.0;
  double b_se = 0.0;
  std::string moments;  // which moment definitions were used
  std::size_t n_mc = 0;
};

/// MC estimates of the ensemble's a and b:
///   wigner, corr-gauss, toeplitz  a = (E f1(l)^4)^{1/4},        b = (E f2(l)^4)^{1/4}
///   wishart                       a = (E f1(l)^4 l^2)^{1/4},    b = (E (f1(l) + 2 f2(l) l / sqrt n)^4)^{1/4}
///   double-wishart                a = (E f1(l)^4 l^14)^{1/4},   b = (E (4 f1(l) l^5 + 2 f2(l) l^7 / sqrt n)^4)^{1/4}
/// with l = ||A|| (double Wishart: double_wishart_lambda).
EnsembleBoundInputs estimate_ensemble_inputs(const MatrixModel& model, const AnalyticFn& f, std::size_t n_mc,
                                             std::uint64_t seed, unsigned workers = 1);

/// c^p n(n-1)...(n-p+1) / n^p
double wigner_var_lower(Eigen::Index n, int p, double c);
/// n / (9 (12p)^{p-1}); OutOfRegimeError unless n >= 4p^2.
double toeplitz_var_lower(Eigen::Index n, int p);

}  // namespace rmclt

#endif  // RMCLT_MATRIXBOUND_HPP_
