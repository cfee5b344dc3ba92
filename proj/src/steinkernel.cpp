#include "rmclt/steinkernel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rmclt/errors.hpp"
#include "rmclt/parallel.hpp"
#include "rmclt/stats.hpp"

namespace rmclt {

GaussLegendre gauss_legendre_unit(int n) {
  if (n < 1) throw ArgumentError("Gauss-Legendre needs at least one node");
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double step = p0 / dp;
      z -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // [-1, 1] -> [0, 1]
    gl.nodes[i] = 0.5 * (1.0 - z);
    gl.nodes[n - 1 - i] = 0.5 * (1.0 + z);
    gl.weights[i] = gl.weights[n - 1 - i] = 0.5 * w;
  }
  return gl;
}

namespace {

struct KernelPoint {
  double t = 0.0;
  double inner_var = 0.0;  // variance of the inner mean
};

KernelPoint kernel_at(const FunctionalModel& fm, const VectorXd& y, int n_inner, const GaussLegendre& gl,
                      std::uint64_t seed) {
  const VectorXd gy = fm.gradient(y);
  if (!gy.allFinite()) throw SampleDomainError("non-finite gradient at the outer point");
  Rng rng = make_rng(seed, 0);
  std::normal_distribution<double> nd;
  VectorXd yp(y.size());
  std::vector<double> tau(n_inner, 0.0);
  for (int j = 0; j < n_inner; ++j) {
    for (Eigen::Index i = 0; i < y.size(); ++i) yp(i) = nd(rng);
    double acc = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      const double s = gl.nodes[k];
      const double c = std::sqrt(1.0 - s * s);
      const VectorXd plus = fm.gradient(s * y + c * yp);
      const VectorXd minus = fm.gradient(s * y - c * yp);
      const double v = 0.5 * gy.dot(plus + minus);
      if (!std::isfinite(v)) throw SampleDomainError("non-finite gradient inside the kernel integral");
      acc += gl.weights[k] * v;
    }
    tau[j] = acc;
  }
  KernelPoint out;
  if (n_inner >= 2) {
    const MeanEstimate m = estimate_mean(tau);
    out.t = m.mean;
    out.inner_var = m.se * m.se;
  } else {
    out.t = tau[0];
  }
  return out;
}

void require_kernel_args(int n_inner, int n_quad) {
  if (n_inner < 1) throw ArgumentError("n_inner must be positive");
  if (n_quad < 1) throw ArgumentError("n_quad must be positive");
}

SteinKernelEstimate collect(const FunctionalModel& fm, std::size_t n_outer, int n_inner, int n_quad,
                            std::uint64_t seed, unsigned workers) {
  require_kernel_args(n_inner, n_quad);
  if (n_outer < 2) throw ArgumentError("n_outer must be at least 2");
  SteinKernelEstimate est;
  est.quadrature = gauss_legendre_unit(n_quad);
  est.n_inner = n_inner;
  const auto points = mc_map<KernelPoint>(n_outer, seed, workers, [&](Rng& rng, std::size_t i) {
    std::normal_distribution<double> nd;
    VectorXd y(fm.arity);
    for (Eigen::Index k = 0; k < y.size(); ++k) y(k) = nd(rng);
    return kernel_at(fm, y, n_inner, est.quadrature, stream_seed(seed, i + 1));
  });
  est.t_values.resize(n_outer);
  std::vector<double> noise(n_outer);
  for (std::size_t i = 0; i < n_outer; ++i) {
    est.t_values[i] = points[i].t;
    noise[i] = points[i].inner_var;
  }
  const VarianceEstimate v = estimate_variance(est.t_values);
  est.mean_T = v.mean;
  est.var_T = v.variance;
  est.mean_T_se = std::sqrt(v.variance / static_cast<double>(n_outer));
  est.tv_bound = 2.0 * std::sqrt(v.variance);
  est.inner_noise_fraction = v.variance > 0.0 ? pairwise_sum(noise) / static_cast<double>(n_outer) / v.variance : 0.0;
  return est;
}

}  // namespace

double estimate_T(const FunctionalModel& fm, const VectorXd& y, int n_inner, int n_quad, std::uint64_t seed) {
  require_kernel_args(n_inner, n_quad);
  if (y.size() != fm.arity) throw ShapeError("point dimension does not match the functional");
  return kernel_at(fm, y, n_inner, gauss_legendre_unit(n_quad), seed).t;
}

SteinKernelEstimate kernel_statistics(const FunctionalModel& fm, std::size_t n_outer, int n_inner, int n_quad,
                                      std::uint64_t seed, unsigned workers) {
  return collect(fm, n_outer, n_inner, n_quad, seed, workers);
}

SteinKernelEstimate tv_bound_kernel(const FunctionalModel& fm, std::size_t n_outer, int n_inner, int n_quad,
                                    std::uint64_t seed, unsigned workers, std::size_t n_pilot) {
  if (!fm.eval) throw ArgumentError("tv_bound_kernel needs eval for the pilot run");
  if (n_pilot < 2) throw ArgumentError("pilot needs at least two samples");
  const auto pilot = mc_map<double>(n_pilot, stream_seed(seed, 0xfeed), workers, [&](Rng& rng, std::size_t) {
    std::normal_distribution<double> nd;
    VectorXd y(fm.arity);
    for (Eigen::Index k = 0; k < y.size(); ++k) y(k) = nd(rng);
    return fm.eval(y);
  });
  const VarianceEstimate pv = estimate_variance(pilot);
  if (!(pv.variance >= 1e-14)) throw DegenerateError("pilot variance is numerically zero");
  const double sd = std::sqrt(pv.variance);

  FunctionalModel standard;
  standard.arity = fm.arity;
  standard.eval = [&fm, mu = pv.mean, sd](const VectorXd& y) { return (fm.eval(y) - mu) / sd; };
  standard.grad = [&fm, sd](const VectorXd& y) -> VectorXd { return fm.gradient(y) / sd; };

  SteinKernelEstimate est = collect(standard, n_outer, n_inner, n_quad, seed, workers);
  est.pilot_mean = pv.mean;
  est.pilot_variance = pv.variance;
  return est;
}

SteinEquationSolution stein_solution(const std::function<double(double)>& u, const std::vector<double>& xs,
                                     const std::vector<double>& kinks) {
  using boost::math::quadrature::gauss_kronrod;
  constexpr double kSpan = 40.0;
  constexpr double kMaxError = 1e-11;
  if (xs.empty()) throw ArgumentError("stein_solution needs a grid");

  // Fixed 61-point Kronrod rule on unit pieces of [a, b], also split wherever
  // the argument of u crosses a kink. A fixed rule keeps phi smooth in x, which
  // the central differences below rely on.
  auto integrate = [&](auto&& fn, double a, double b, auto&& to_arg) {
    std::vector<double> cuts;
    for (double c = a; c < b; c += 1.0) cuts.push_back(c);
    cuts.push_back(b);
    for (double k : kinks) {
      const double s = to_arg(k);
      if (s > a && s < b) cuts.push_back(s);
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0, err_total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (!(cuts[i + 1] > cuts[i])) continue;
      double err = 0.0;
      total += gauss_kronrod<double, 61>::integrate(fn, cuts[i], cuts[i + 1], 0, 0.0, &err);
      err_total += err * 0.5 * (cuts[i + 1] - cuts[i]);
    }
    if (!std::isfinite(total) || err_total > kMaxError) {
      std::ostringstream msg;
      msg << "quadrature error estimate " << err_total << " on [" << a << ", " << b << "]";
      throw NumericError(msg.str());
    }
    return total;
  };

  SteinEquationSolution sol;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto identity = [](double k) { return k; };
  sol.mean_u = integrate([&](double z) { return u(z) * std::exp(-0.5 * z * z) * inv_sqrt_2pi; }, -kSpan, kSpan,
                         identity);
  const double mu = sol.mean_u;

  auto phi = [&](double x) {
    if (x <= 0.0) {
      return integrate([&](double s) { return std::exp(x * s - 0.5 * s * s) * (u(x - s) - mu); }, 0.0, kSpan,
                       [x](double k) { return x - k; });
    }
    return -integrate([&](double s) { return std::exp(-x * s - 0.5 * s * s) * (u(x + s) - mu); }, 0.0, kSpan,
                      [x](double k) { return k - x; });
  };

  constexpr double h = 1e-6;
  sol.grid = xs;
  for (double x : xs) {
    const double p = phi(x);
    const double dp = (phi(x + h) - phi(x - h)) / (2.0 * h);
    const double res = std::abs(dp - x * p - (u(x) - mu));
    sol.phi.push_back(p);
    sol.phi_prime.push_back(dp);
    sol.residual.push_back(res);
    sol.max_residual = std::max(sol.max_residual, res);
    sol.sup_phi_prime = std::max(sol.sup_phi_prime, std::abs(dp));
    sol.sup_u = std::max(sol.sup_u, std::abs(u(x)));
  }
  return sol;
}

}  // namespace rmclt
