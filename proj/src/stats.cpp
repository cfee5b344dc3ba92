#include "rmclt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rmclt/errors.hpp"
#include "rmclt/parallel.hpp"

namespace rmclt {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

MeanEstimate estimate_mean(std::span<const double> xs) {
  if (xs.empty()) throw ArgumentError("estimate_mean: no samples");
  const double m = static_cast<double>(xs.size());
  MeanEstimate out;
  out.mean = pairwise_sum(xs) / m;
  if (xs.size() < 2) return out;
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - out.mean) * (xs[i] - out.mean);
  out.se = std::sqrt(pairwise_sum(sq) / (m - 1.0) / m);
  return out;
}

VarianceEstimate estimate_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw ArgumentError("estimate_variance: need at least two samples");
  const double m = static_cast<double>(xs.size());
  VarianceEstimate out;
  out.count = xs.size();
  out.mean = pairwise_sum(xs) / m;
  std::vector<double> d2(xs.size()), d4(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - out.mean;
    d2[i] = d * d;
    d4[i] = d2[i] * d2[i];
  }
  const double s2 = pairwise_sum(d2) / (m - 1.0);
  const double m4 = pairwise_sum(d4) / m;
  out.variance = s2;
  out.kurtosis = s2 > 0.0 ? m4 / (s2 * s2) : 0.0;
  const double half = 1.959963984540054 * std::sqrt(std::max(m4 - s2 * s2, 0.0) / m);
  out.ci_low = s2 - half;
  out.ci_high = s2 + half;
  return out;
}

double ks_distance(std::span<const double> samples, double mu, double sigma2) {
  if (!(sigma2 > 0.0)) throw ArgumentError("ks_distance: sigma2 must be positive");
  if (samples.size() < 2) throw ArgumentError("ks_distance: need at least two samples");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double m = static_cast<double>(s.size());
  const double sigma = std::sqrt(sigma2);
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double cdf = normal_cdf((s[i] - mu) / sigma);
    const double below = static_cast<double>(i) / m;
    const double above = static_cast<double>(i + 1) / m;
    d = std::max({d, cdf - below, above - cdf});
  }
  return std::clamp(d, 0.0, 1.0);
}

double dkw_band(std::size_t m, double alpha) {
  if (m == 0 || !(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("dkw_band: bad arguments");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(m)));
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("fit_line: need >= 2 paired points");
  const double k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ArgumentError("fit_line: x values are all equal");
  LineFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - out.intercept - out.slope * x[i];
    out.residuals.push_back(r);
    rss += r * r;
  }
  out.slope_se = x.size() > 2 ? std::sqrt(rss / (k - 2.0) / sxx) : 0.0;
  return out;
}

}  // namespace rmclt
