#ifndef RMCLT_STATS_HPP_
#define RMCLT_STATS_HPP_

#include <span>
#include <vector>

namespace rmclt {

double normal_cdf(double x);
double normal_pdf(double x);

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

MeanEstimate estimate_mean(std::span<const double> xs);

/// Sample variance with an asymptotic 95% interval
/// s^2 +- 1.96 sqrt((m4 - s^4) / m), which stays valid for non-normal data.
struct VarianceEstimate {
  double mean = 0.0;
  double variance = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double kurtosis = 0.0;  // m4 / s^4
  std::size_t count = 0;
};

VarianceEstimate estimate_variance(std::span<const double> xs);

/// sup_x |F_m(x) - Phi((x - mu) / sigma)|.
double ks_distance(std::span<const double> samples, double mu, double sigma2);

/// Dvoretzky-Kiefer-Wolfowitz half-width sqrt(ln(2/alpha) / (2m)).
double dkw_band(std::size_t m, double alpha);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  std::vector<double> residuals;
};

/// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace rmclt

#endif  // RMCLT_STATS_HPP_
