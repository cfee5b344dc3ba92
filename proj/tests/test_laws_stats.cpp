#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "rmclt/laws.hpp"
#include "rmclt/socp.hpp"
#include "rmclt/stats.hpp"

namespace rmclt {
namespace {

std::vector<double> draws(const SmoothLaw& law, std::size_t m, std::uint64_t seed) {
  return mc_map<double>(m, seed, 1, [&](Rng& rng, std::size_t) { return sample(law, rng); });
}

TEST(Laws, GaussianConstants) {
  const SmoothLaw g = gaussian_law();
  EXPECT_EQ(g.c1, 1.0);
  EXPECT_EQ(g.c2, 0.0);
  EXPECT_TRUE(g.symmetric);
  const MeanEstimate m = estimate_mean(draws(g, 100000, 1));
  EXPECT_NEAR(m.mean, 0.0, 0.02);
}

TEST(Laws, UniformConstants) {
  const SmoothLaw u = uniform_law();
  EXPECT_NEAR(u.c1, 1.0 / std::sqrt(2 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(u.c2, 1.0 / std::sqrt(2 * std::numbers::pi * std::numbers::e), 1e-15);
  const auto xs = draws(u, 100000, 2);
  EXPECT_NEAR(estimate_variance(xs).variance, 1.0 / 12, 0.003);
  EXPECT_TRUE(std::all_of(xs.begin(), xs.end(), [](double x) { return x >= 0.0 && x <= 1.0; }));
}

TEST(Laws, ScaledCenteredUniform) {
  const SmoothLaw s1 = scaled_centered_uniform(1.0);
  const auto xs = draws(s1, 100000, 3);
  const VarianceEstimate v = estimate_variance(xs);
  EXPECT_NEAR(v.variance, 1.0, 0.01);
  EXPECT_NEAR(v.mean, 0.0, 0.01);
  EXPECT_EQ(s1.u(0.0), 0.0);
  EXPECT_NEAR(s1.c1, std::sqrt(12.0) / std::sqrt(2 * std::numbers::pi), 1e-14);

  const auto ys = draws(scaled_centered_uniform(2.0), 10000, 4);
  const double edge = 2.0 * std::sqrt(3.0);
  EXPECT_TRUE(std::all_of(ys.begin(), ys.end(), [&](double y) { return std::abs(y) <= edge; }));
  EXPECT_THROW(scaled_centered_uniform(0.0), ArgumentError);
  EXPECT_THROW(scaled_centered_uniform(-1.0), ArgumentError);
}

TEST(Laws, ParseNames) {
  EXPECT_EQ(parse_law("gaussian").c1, 1.0);
  EXPECT_NEAR(parse_law("sym-uniform:2").variance, 4.0, 1e-14);
  EXPECT_NEAR(parse_law("sym-uniform").variance, 1.0, 1e-14);
  EXPECT_THROW(parse_law("cauchy"), InputError);
  EXPECT_THROW(parse_law("sym-uniform:-1"), InputError);
}

TEST(Laws, Certification) {
  for (const SmoothLaw& law : {gaussian_law(), uniform_law(), scaled_centered_uniform(1.5)}) {
    const LawCertificate c = certify(law);
    EXPECT_TRUE(c.ok) << law.name;
    EXPECT_LE(c.max_u_prime, law.c1 + 1e-9);
    EXPECT_LE(c.max_u_second, law.c2 + 1e-9);
    EXPECT_LE(c.max_fd_error, 1e-6);
  }
}

TEST(Laws, SeedDeterminism) {
  Rng a = make_rng(7, 0), b = make_rng(7, 0);
  EXPECT_EQ(sample(gaussian_law(), a), sample(gaussian_law(), b));
}

TEST(Laws, PoincareOnLinearAndSmooth) {
  // linear g with gaussian coordinates: Var g = ||a||^2 exactly
  const VectorXd a = (VectorXd(4) << 1.0, -2.0, 0.5, 3.0).finished();
  const FunctionalModel lin = linear_functional(a);
  const PointSampler ps = independent_sampler({gaussian_law()}, 4);
  const auto lv = mc_map<double>(100000, 8, 1, [&](Rng& r, std::size_t) { return lin.eval(ps(r)); });
  const VarianceEstimate v = estimate_variance(lv);
  EXPECT_LE(std::abs(v.variance - a.squaredNorm()), v.ci_high - v.ci_low);

  // g(x) = sum sin(x_i) x_{i+1}: Var g <= E ||grad g||^2
  FunctionalModel g;
  g.arity = 5;
  g.eval = [](const VectorXd& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) s += std::sin(x(i)) * x(i + 1);
    return s;
  };
  const auto pairs = mc_map<std::array<double, 2>>(20000, 9, 1, [&](Rng& r, std::size_t) {
    const VectorXd x = independent_sampler({gaussian_law()}, 5)(r);
    return std::array<double, 2>{g.eval(x), g.gradient(x).squaredNorm()};
  });
  std::vector<double> w, grad2;
  for (const auto& p : pairs) {
    w.push_back(p[0]);
    grad2.push_back(p[1]);
  }
  const MeanEstimate eg = estimate_mean(grad2);
  EXPECT_LE(estimate_variance(w).variance, eg.mean + 3 * eg.se);
}

TEST(Stats, NormalCdf) {
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-15);
  EXPECT_NEAR(normal_cdf(1.96), 0.9750021048517795, 1e-12);
  EXPECT_NEAR(normal_cdf(-3.0), 0.0013498980316301, 1e-12);
  EXPECT_NEAR(normal_pdf(0.0), 1.0 / std::sqrt(2 * std::numbers::pi), 1e-15);
}

TEST(Stats, KsConstantSamples) {
  const std::vector<double> c(100, 3.0);
  EXPECT_GE(ks_distance(c, 0.0, 1.0), 0.5);
  EXPECT_GE(ks_distance(c, 3.0, 1.0), 0.5);
}

TEST(Stats, KsShiftedNormal) {
  const auto xs = mc_map<double>(100000, 10, 1, [](Rng& r, std::size_t) {
    std::normal_distribution<double> nd(1.0, 1.0);
    return nd(r);
  });
  const double oracle = normal_cdf(0.5) - normal_cdf(-0.5);
  EXPECT_NEAR(oracle, 0.3829, 1e-4);
  EXPECT_NEAR(ks_distance(xs, 0.0, 1.0), oracle, dkw_band(xs.size(), 0.001));
  EXPECT_LT(ks_distance(xs, 1.0, 1.0), dkw_band(xs.size(), 0.001));
}

TEST(Stats, KsRange) {
  const std::vector<double> xs{-1.0, 0.2, 0.5, 3.0};
  const double d = ks_distance(xs, 0.0, 1.0);
  EXPECT_GE(d, 0.0);
  EXPECT_LE(d, 1.0);
  EXPECT_THROW(ks_distance(xs, 0.0, 0.0), ArgumentError);
  EXPECT_THROW(ks_distance(std::vector<double>{1.0}, 0.0, 1.0), ArgumentError);
}

TEST(Stats, DkwBand) {
  EXPECT_NEAR(dkw_band(100000, 0.001), std::sqrt(std::log(2000.0) / 200000.0), 1e-15);
  EXPECT_LT(dkw_band(100000, 0.001), 0.0062);
  EXPECT_THROW(dkw_band(0, 0.001), ArgumentError);
}

TEST(Stats, VarianceInterval) {
  const std::vector<double> xs{1, 2, 3, 4, 5, 6, 7, 8};
  const VarianceEstimate v = estimate_variance(xs);
  EXPECT_NEAR(v.mean, 4.5, 1e-15);
  EXPECT_NEAR(v.variance, 6.0, 1e-14);
  EXPECT_LT(v.ci_low, v.variance);
  EXPECT_GT(v.ci_high, v.variance);
  EXPECT_EQ(v.count, 8u);
}

TEST(Stats, FitLine) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const LineFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.slope_se, 0.0, 1e-12);
  EXPECT_THROW(fit_line(std::vector<double>{1, 1}, std::vector<double>{0, 1}), ArgumentError);
}

TEST(Parallel, PairwiseSumIsExactOnIntegers) {
  std::vector<double> xs(1000);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
  EXPECT_EQ(pairwise_sum(xs), 999.0 * 1000.0 / 2);
}

TEST(Parallel, WorkerCountInvariance) {
  auto run = [](unsigned w) {
    return mc_map<double>(1000, 77, w, [](Rng& r, std::size_t i) {
      std::normal_distribution<double> nd;
      return nd(r) * static_cast<double>(i % 7);
    });
  };
  EXPECT_EQ(run(1), run(4));
  EXPECT_EQ(run(1), run(0));
}

TEST(Parallel, ExceptionsPropagate) {
  EXPECT_THROW(mc_map<double>(500, 1, 3,
                              [](Rng&, std::size_t i) -> double {
                                if (i == 321) throw NumericError("boom");
                                return 0.0;
                              }),
               NumericError);
}

}  // namespace
}  // namespace rmclt
