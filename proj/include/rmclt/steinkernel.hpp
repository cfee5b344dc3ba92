#ifndef RMCLT_STEINKERNEL_HPP_
#define RMCLT_STEINKERNEL_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "rmclt/socp.hpp"

namespace rmclt {

struct GaussLegendre {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

/// n-point Gauss-Legendre rule mapped to [0, 1] (Newton on P_n, tol 1e-15).
GaussLegendre gauss_legendre_unit(int n);

/// T(y) = int_0^1 E[grad f(y) . grad f(s y + sqrt(1 - s^2) Y')] ds for standard
/// gaussian Y', which is the kernel integral after t = s^2.
///
/// The inner expectation averages n_inner antithetic pairs (Y', -Y'), which
/// integrates every gradient that is affine in y exactly. n_inner counts
/// pairs. Deterministic given seed.
double estimate_T(const FunctionalModel& fm, const VectorXd& y, int n_inner, int n_quad, std::uint64_t seed);

struct SteinKernelEstimate {
  std::vector<double> t_values;
  double mean_T = 0.0;
  double mean_T_se = 0.0;
  double var_T = 0.0;
  double tv_bound = 0.0;  // 2 sqrt(var_T)
  GaussLegendre quadrature;
  int n_inner = 0;
  // Pilot moments used to standardise f.
  double pilot_mean = 0.0;
  double pilot_variance = 0.0;
  // Estimated share of var_T contributed by inner MC noise.
  double inner_noise_fraction = 0.0;
};

/// Standardises fm with a pilot run of `n_pilot` samples, then returns
/// 2 [Var T(Y)]^{1/2} over n_outer points. DegenerateError when the pilot
/// variance is below 1e-14.
SteinKernelEstimate tv_bound_kernel(const FunctionalModel& fm, std::size_t n_outer, int n_inner, int n_quad,
                                    std::uint64_t seed, unsigned workers = 1, std::size_t n_pilot = 10'000);

/// Kernel statistics for fm as given, without standardisation.
SteinKernelEstimate kernel_statistics(const FunctionalModel& fm, std::size_t n_outer, int n_inner, int n_quad,
                                      std::uint64_t seed, unsigned workers = 1);

struct SteinEquationSolution {
  std::vector<double> grid;
  std::vector<double> phi;
  std::vector<double> phi_prime;  // central differences of phi
  std::vector<double> residual;   // |phi' - x phi - (u - E u(Z))|
  double mean_u = 0.0;            // E u(Z)
  double sup_u = 0.0;             // sup |u| on the grid
  double max_residual = 0.0;
  double sup_phi_prime = 0.0;
};

/// phi(x) = int_0^inf e^{xs - s^2/2} (u(x - s) - E u(Z)) ds for x <= 0 and
/// -int_0^inf e^{-xs - s^2/2} (u(x + s) - E u(Z)) ds for x > 0, by composite
/// Gauss-Kronrod quadrature on [0, 40]. `kinks` lists points where u is not smooth; the
/// integrals are split there. NumericError when the quadrature error estimate
/// exceeds 1e-11.
SteinEquationSolution stein_solution(const std::function<double(double)>& u, const std::vector<double>& xs,
                                     const std::vector<double>& kinks = {});

}  // namespace rmclt

#endif  // RMCLT_STEINKERNEL_HPP_
