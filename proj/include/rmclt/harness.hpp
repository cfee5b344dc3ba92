#ifndef RMCLT_HARNESS_HPP_
#define RMCLT_HARNESS_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "rmclt/afunc.hpp"
#include "rmclt/ensembles.hpp"
#include "rmclt/socp.hpp"

namespace rmclt {

inline constexpr const char* kVersion = "0.3.1";

struct ExperimentSpec {
  EnsembleKind ensemble = EnsembleKind::Wigner;
  Eigen::Index n = 0;
  Eigen::Index big_n = 0;  // Wishart / double Wishart sample counts
  Eigen::Index big_m = 0;
  std::string law = "gaussian";
  std::string f = "z";
  double phase = 0.0;  // W = Re Tr (e^{i phase} f(A))

  std::size_t mc_kappa = 2000;
  std::size_t mc_sigma = 100000;
  std::uint64_t seed = 42;
  unsigned workers = 1;

  std::string profile_csv;     // Wigner variance profile, rows "i,j,s"
  std::string covariance_csv;  // corr-gauss covariance, n^2 rows of n^2 values
  std::string route = "proposition";  // or "general"
  // Divide by the proof-derived variance floor instead of the MC interval.
  bool use_floor = false;

  // rate mode
  std::vector<Eigen::Index> grid;
  std::string axis = "n";  // "N" sweeps the Wishart sample count with n = ratio * N
  double ratio = 0.5;

  /// InputError / ArgumentError when the spec cannot describe a model.
  void validate() const;
  nlohmann::json to_json() const;
};

AnalyticFn spec_function(const ExperimentSpec& spec);
std::unique_ptr<MatrixModel> make_model(const ExperimentSpec& spec);

/// Draws one W = Re Tr f(A(X)).
double sample_statistic(const MatrixModel& model, const AnalyticFn& f, Rng& rng);

struct SimulationResult {
  std::vector<double> samples;
  VarianceEstimate moments;
  double ks = 0.0;   // against N(mean, variance)
  double dkw = 0.0;  // DKW half-width at alpha = 0.001
};

/// mc_sigma samples of W. DegenerateError when the variance is below 1e-14.
SimulationResult simulate_statistic(const ExperimentSpec& spec);

BoundReport run_bound(const ExperimentSpec& spec);

struct RateRow {
  Eigen::Index dim = 0;
  double tv_bound = 0.0;
  double sigma2 = 0.0;
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;
};

struct RateFit {
  std::string axis;
  double slope = 0.0;
  double slope_se = 0.0;
  double intercept = 0.0;
  std::vector<RateRow> rows;
};

/// Least squares slope of log tv_bound against log dim over spec.grid
/// (at least four points). NumericError listing every failed grid point.
RateFit rate_fit(const ExperimentSpec& spec);

nlohmann::json report_json(const BoundReport& report, const ExperimentSpec& spec, bool timestamp = true);
nlohmann::json rate_json(const RateFit& fit, const ExperimentSpec& spec, bool timestamp = true);
nlohmann::json simulation_json(const SimulationResult& sim, const ExperimentSpec& spec, bool timestamp = true);

void write_samples_csv(std::ostream& out, const std::vector<double>& samples);

struct VerifyCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

/// Self-checks: "linalg", "afunc", "stein" or "gamma".
std::vector<VerifyCheck> run_verify_suite(std::string_view suite, std::uint64_t seed);

}  // namespace rmclt

#endif  // RMCLT_HARNESS_HPP_
