#include "rmclt/harness.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "rmclt/errors.hpp"
#include "rmclt/matrixbound.hpp"
#include "rmclt/parallel.hpp"
#include "rmclt/stats.hpp"
#include "rmclt/steinkernel.hpp"

namespace rmclt {

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

MatrixXd read_dense_csv(const std::string& path, Eigen::Index dim) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    for (char& c : line)
      if (c == ',' || c == ';') c = ' ';
    std::istringstream ls(line);
    double v = 0.0;
    while (ls >> v) values.push_back(v);
    if (!ls.eof()) throw InputError(path + ": non-numeric entry");
  }
  if (static_cast<Eigen::Index>(values.size()) != dim * dim) {
    throw ShapeError(path + ": expected " + std::to_string(dim * dim) + " values, got " +
                     std::to_string(values.size()));
  }
  return Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(values.data(), dim, dim);
}

// p when f = b_p z^p with p >= 1 and b_p real.
std::optional<int> monomial_power(const AnalyticFn& f) {
  if (!f.is_real() || f.degree() < 1) return std::nullopt;
  for (int m = 0; m < f.degree(); ++m)
    if (f.coeff(m) != cdouble(0.0)) return std::nullopt;
  return f.degree();
}

void set_dims(BoundReport& r, const ExperimentSpec& spec) {
  r.dims["n"] = spec.n;
  if (spec.ensemble == EnsembleKind::Wishart || spec.ensemble == EnsembleKind::DoubleWishart) r.dims["N"] = spec.big_n;
  if (spec.ensemble == EnsembleKind::DoubleWishart) r.dims["M"] = spec.big_m;
}

// Proof-derived lower bound on Var W, when one applies.
std::optional<std::pair<std::string, double>> variance_floor(const ExperimentSpec& spec, const MatrixModel& model,
                                                             const AnalyticFn& f) {
  const auto p = monomial_power(f);
  if (!p) return std::nullopt;
  const double scale = std::norm(f.coeff(*p));
  if (spec.ensemble == EnsembleKind::Wigner) {
    const auto& w = static_cast<const WignerModel&>(model);
    if (!w.law().symmetric || *p > spec.n) return std::nullopt;
    const double c = w.profile().lower() * w.law().variance;
    return std::pair{std::string("wigner_var_lower"), scale * wigner_var_lower(spec.n, *p, c)};
  }
  if (spec.ensemble == EnsembleKind::Toeplitz) {
    // Outside n >= 4p^2 the floor is only an error when it is actually used.
    if (spec.n < 4LL * *p * *p && !spec.use_floor) return std::nullopt;
    return std::pair{std::string("toeplitz_var_lower"), scale * toeplitz_var_lower(spec.n, *p)};
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// ExperimentSpec

void ExperimentSpec::validate() const {
  if (n < 1) throw ArgumentError("--n must be positive");
  if (mc_sigma < 2) throw ArgumentError("--mc-sigma must be at least 2");
  if (mc_kappa < 2) throw ArgumentError("--mc-kappa must be at least 2");
  if (route != "proposition" && route != "general") throw InputError("--route must be proposition or general");
  if (axis != "n" && axis != "N") throw InputError("--axis must be n or N");
  if (!std::isfinite(phase)) throw ArgumentError("--phase must be finite");
  parse_law(law);
  if (spec_function(*this).is_zero()) throw InputError("f is identically zero");
  switch (ensemble) {
    case EnsembleKind::Wishart:
      if (big_n < n) throw ArgumentError("wishart needs N >= n");
      break;
    case EnsembleKind::DoubleWishart:
      if (!(n <= big_n && big_n <= big_m)) throw ArgumentError("double-wishart needs n <= N <= M");
      break;
    case EnsembleKind::CorrGauss:
    case EnsembleKind::Toeplitz:
      if (law != "gaussian") throw ArgumentError(to_string(ensemble) + " entries are gaussian; use --law gaussian");
      break;
    default: break;
  }
}

nlohmann::json ExperimentSpec::to_json() const {
  nlohmann::json j{{"ensemble", to_string(ensemble)}, {"n", n}, {"law", law}, {"f", f}, {"mc_kappa", mc_kappa},
                   {"mc_sigma", mc_sigma}, {"seed", seed}, {"route", route}};
  if (ensemble == EnsembleKind::Wishart || ensemble == EnsembleKind::DoubleWishart) j["N"] = big_n;
  if (ensemble == EnsembleKind::DoubleWishart) j["M"] = big_m;
  if (phase != 0.0) j["phase"] = phase;
  if (!profile_csv.empty()) j["profile"] = profile_csv;
  if (!covariance_csv.empty()) j["covariance"] = covariance_csv;
  if (use_floor) j["use_floor"] = true;
  if (!grid.empty()) {
    j["grid"] = grid;
    j["axis"] = axis;
    if (axis == "N") j["ratio"] = ratio;
  }
  return j;
}

AnalyticFn spec_function(const ExperimentSpec& spec) {
  const AnalyticFn f = AnalyticFn::parse(spec.f);
  if (spec.phase == 0.0) return f;
  return f.scaled(std::polar(1.0, spec.phase));
}

std::unique_ptr<MatrixModel> make_model(const ExperimentSpec& spec) {
  switch (spec.ensemble) {
    case EnsembleKind::Wigner: {
      VarianceProfile profile = VarianceProfile::constant(spec.n);
      if (!spec.profile_csv.empty()) {
        std::ifstream in(spec.profile_csv);
        if (!in) throw InputError("cannot open " + spec.profile_csv);
        profile = VarianceProfile::from_csv(in, spec.n);
      }
      return std::make_unique<WignerModel>(spec.n, std::move(profile), parse_law(spec.law));
    }
    case EnsembleKind::CorrGauss: {
      const Eigen::Index dim = spec.n * spec.n;
      CovarianceSpec cov = spec.covariance_csv.empty() ? CovarianceSpec::identity(dim)
                                                       : CovarianceSpec::dense(read_dense_csv(spec.covariance_csv, dim));
      return std::make_unique<CorrGaussModel>(spec.n, std::move(cov));
    }
    case EnsembleKind::Toeplitz: return std::make_unique<ToeplitzModel>(spec.n);
    case EnsembleKind::Wishart: return std::make_unique<WishartModel>(spec.n, spec.big_n, parse_law(spec.law));
    case EnsembleKind::DoubleWishart:
      return std::make_unique<DoubleWishartModel>(spec.n, spec.big_n, spec.big_m, parse_law(spec.law));
  }
  throw InputError("unknown ensemble");
}

// ---------------------------------------------------------------------------
// Simulation

double sample_statistic(const MatrixModel& model, const AnalyticFn& f, Rng& rng) {
  return afunc::re_trace(f, model.assemble(model.sample_point(rng)));
}

SimulationResult simulate_statistic(const ExperimentSpec& spec) {
  spec.validate();
  const auto model = make_model(spec);
  const AnalyticFn f = spec_function(spec);

  std::function<double(Rng&)> draw = [&](Rng& rng) { return sample_statistic(*model, f, rng); };
  // Wigner with deg f <= 1: Tr A = n^{-1/2} sum_i x_ii, so only the diagonal is drawn.
  if (const auto* w = dynamic_cast<const WignerModel*>(model.get()); w && f.degree() <= 1) {
    const double b0 = f.coeff(0).real(), b1 = f.coeff(1).real();
    const Eigen::Index n = spec.n;
    draw = [w, b0, b1, n](Rng& rng) {
      std::normal_distribution<double> nd;
      double s = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) s += w->profile().s(i, i) * w->law().u(nd(rng));
      return static_cast<double>(n) * b0 + b1 * s / std::sqrt(static_cast<double>(n));
    };
  }

  SimulationResult out;
  out.samples = mc_map<double>(spec.mc_sigma, spec.seed, spec.workers, [&](Rng& rng, std::size_t) {
    const double w = draw(rng);
    if (!std::isfinite(w)) throw SampleDomainError("non-finite statistic");
    return w;
  });
  out.moments = estimate_variance(out.samples);
  if (!(out.moments.variance >= 1e-14)) {
    throw DegenerateError("variance of W is numerically zero (" + std::to_string(out.moments.variance) + ")");
  }
  out.ks = ks_distance(out.samples, out.moments.mean, out.moments.variance);
  out.dkw = dkw_band(out.samples.size(), 0.001);
  return out;
}

// ---------------------------------------------------------------------------
// Bounds

BoundReport run_bound(const ExperimentSpec& spec) {
  spec.validate();
  const auto model = make_model(spec);
  const AnalyticFn f = spec_function(spec);
  const SimulationResult sim = simulate_statistic(spec);

  BoundReport r;
  r.seed = spec.seed;
  r.n_mc = spec.mc_kappa;
  r.n_sigma = spec.mc_sigma;
  r.sigma2 = sim.moments;
  r.ensemble = to_string(spec.ensemble);
  set_dims(r, spec);
  r.c1 = model->c1();
  r.c2 = model->c2();
  if (auto w = kurtosis_warning(sim.moments)) r.warnings.push_back(*w);

  const auto floor = variance_floor(spec, *model, f);
  if (floor) r.metadata[floor->first] = floor->second;
  if (spec.use_floor) {
    if (!floor) throw CapabilityError("no proof-derived variance floor for this ensemble and f");
    r.sigma2_used = floor->second;
  } else {
    r.sigma2_used = conservative_sigma2(sim.moments);
  }
  const double s2 = r.sigma2_used;
  const std::uint64_t kseed = stream_seed(spec.seed, 2);

  if (spec.route == "general") {
    const MatrixKappaEstimate mk = estimate_matrix_kappas(*model, f, spec.mc_kappa, kseed, spec.workers);
    r.kappas = mk.kappas;
    r.gamma_method = mk.gamma_method;
    r.eta_summary = mk.eta;
    if (const CovarianceSpec* cov = model->covariance()) {
      r.theorem = "matrix-covariance";
      r.sigma_op_norm = cov->operator_norm();
      r.tv_bound = tv_bound_covariance(*r.sigma_op_norm, r.kappas, s2);
    } else {
      r.theorem = "matrix";
      r.tv_bound = tv_bound_matrix(r.c1, r.c2, r.kappas, s2);
    }
    return r;
  }

  const EnsembleBoundInputs in = estimate_ensemble_inputs(*model, f, spec.mc_kappa, kseed, spec.workers);
  r.a = in.a;
  r.b = in.b;
  r.a_se = in.a_se;
  r.b_se = in.b_se;
  r.metadata["kappa_bound_moments_n_mc"] = static_cast<double>(in.n_mc);
  const double nd = static_cast<double>(spec.n);
  switch (spec.ensemble) {
    case EnsembleKind::Wigner:
      r.theorem = "wigner";
      r.kappas = wigner_kappas(spec.n, in.a, in.b);
      r.tv_bound = wigner_bound(spec.n, r.c1, r.c2, in.a, in.b, s2);
      break;
    case EnsembleKind::CorrGauss:
    case EnsembleKind::Toeplitz: {
      r.theorem = "corr-gaussian";
      // Toeplitz entries are the gaussian vector with the induced covariance,
      // whose norm is bounded by its largest row sum.
      r.sigma_op_norm = spec.ensemble == EnsembleKind::Toeplitz
                            ? gershgorin_bound(CovarianceSpec::toeplitz_induced(spec.n))
                            : model->covariance()->operator_norm();
      r.c1 = 1.0;
      r.c2 = 0.0;
      r.kappas.kappa0 = in.a * in.a / std::sqrt(nd);
      r.kappas.kappa1 = in.a;
      r.kappas.kappa2 = in.b / nd;
      r.tv_bound = corr_gaussian_bound(*r.sigma_op_norm, in.a, in.b, s2, spec.n);
      break;
    }
    case EnsembleKind::Wishart:
      r.theorem = "wishart";
      r.kappas = wishart_kappas(spec.n, spec.big_n, in.a, in.b);
      r.tv_bound = wishart_bound(spec.n, spec.big_n, r.c1, r.c2, in.a, in.b, s2);
      break;
    case EnsembleKind::DoubleWishart: {
      r.theorem = "double-wishart";
      r.kappas = double_wishart_kappas(spec.n, spec.big_n, spec.big_m, in.a, in.b);
      r.tv_bound = double_wishart_bound(spec.n, spec.big_n, spec.big_m, r.c1, r.c2, in.a, in.b, s2);
      const double via_kappas = tv_bound_independent(r.c1, r.c2, r.kappas, s2);
      r.metadata["tv_bound_from_kappas"] = via_kappas;
      r.warnings.push_back(
          "the stated double Wishart constant 4 sqrt10 is half of what its own kappa bounds give; "
          "tv_bound_from_kappas carries the 8 sqrt10 value");
      break;
    }
  }
  r.kappas.n_mc = in.n_mc;
  return r;
}

RateFit rate_fit(const ExperimentSpec& spec) {
  if (spec.grid.size() < 4) throw ArgumentError("rate fit needs at least four grid points");
  RateFit fit;
  fit.axis = spec.axis;
  std::vector<std::string> failures;
  std::vector<double> lx, ly;
  for (const Eigen::Index d : spec.grid) {
    ExperimentSpec point = spec;
    point.grid.clear();
    if (spec.axis == "N") {
      point.big_n = d;
      point.n = std::max<Eigen::Index>(1, std::llround(spec.ratio * static_cast<double>(d)));
      if (spec.ensemble == EnsembleKind::DoubleWishart && point.big_m < point.big_n) point.big_m = 2 * d;
    } else {
      point.n = d;
    }
    try {
      const BoundReport r = run_bound(point);
      if (!(r.tv_bound > 0.0)) throw DegenerateError("bound is zero, log undefined");
      RateRow row;
      row.dim = d;
      row.tv_bound = r.tv_bound;
      row.sigma2 = r.sigma2.variance;
      row.a = r.a.value_or(0.0);
      row.b = r.b.value_or(0.0);
      fit.rows.push_back(row);
      lx.push_back(std::log(static_cast<double>(d)));
      ly.push_back(std::log(r.tv_bound));
    } catch (const Error& e) {
      failures.push_back(std::to_string(d) + ": " + e.what());
    }
  }
  if (!failures.empty()) {
    std::string msg = "rate fit failed at " + std::to_string(failures.size()) + " grid point(s):";
    for (const auto& f : failures) msg += "\n  " + f;
    throw NumericError(msg);
  }
  const LineFit lf = fit_line(lx, ly);
  fit.slope = lf.slope;
  fit.slope_se = lf.slope_se;
  fit.intercept = lf.intercept;
  for (std::size_t i = 0; i < fit.rows.size(); ++i) fit.rows[i].residual = lf.residuals[i];
  return fit;
}

// ---------------------------------------------------------------------------
// Output

nlohmann::json report_json(const BoundReport& r, const ExperimentSpec& spec, bool timestamp) {
  nlohmann::json j;
  j["theorem"] = r.theorem;
  j["c1"] = r.c1;
  j["c2"] = r.c2;
  if (r.sigma_op_norm) j["sigma_op_norm"] = *r.sigma_op_norm;
  j["kappa0"] = r.kappas.kappa0;
  j["kappa1"] = r.kappas.kappa1;
  j["kappa2"] = r.kappas.kappa2;
  j["kappa_se"] = r.kappas.se;
  j["sigma2"] = r.sigma2.variance;
  j["sigma2_ci"] = {r.sigma2.ci_low, r.sigma2.ci_high};
  j["sigma2_used"] = r.sigma2_used;
  j["kurtosis"] = r.sigma2.kurtosis;
  j["tv_bound"] = r.tv_bound;
  j["n_mc"] = r.n_mc;
  j["n_sigma"] = r.n_sigma;
  j["seed"] = r.seed;
  if (r.gamma_method) j["gamma_method"] = *r.gamma_method;
  if (r.eta_summary) {
    const EtaSummary& e = *r.eta_summary;
    j["eta_summary"] = {{"eta0_mean", e.eta0_mean}, {"eta1_mean", e.eta1_mean}, {"eta2_mean", e.eta2_mean},
                        {"eta0_max", e.eta0_max},   {"eta1_max", e.eta1_max},   {"eta2_max", e.eta2_max}};
  }
  if (r.a) j["a"] = *r.a;
  if (r.b) j["b"] = *r.b;
  if (r.a_se) j["a_se"] = *r.a_se;
  if (r.b_se) j["b_se"] = *r.b_se;
  if (r.ensemble) j["ensemble"] = *r.ensemble;
  j["dims"] = r.dims;
  if (!r.metadata.empty()) j["metadata"] = r.metadata;
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  j["spec"] = spec.to_json();
  if (timestamp) j["timestamp"] = utc_timestamp();
  j["version"] = kVersion;
  return j;
}

nlohmann::json rate_json(const RateFit& fit, const ExperimentSpec& spec, bool timestamp) {
  nlohmann::json rows = nlohmann::json::array();
  for (const RateRow& r : fit.rows) {
    rows.push_back({{"dim", r.dim}, {"tv_bound", r.tv_bound}, {"sigma2", r.sigma2}, {"a", r.a}, {"b", r.b},
                    {"residual", r.residual}});
  }
  nlohmann::json j{{"axis", fit.axis},     {"slope", fit.slope}, {"slope_se", fit.slope_se},
                   {"intercept", fit.intercept}, {"table", rows}, {"spec", spec.to_json()}};
  if (timestamp) j["timestamp"] = utc_timestamp();
  j["version"] = kVersion;
  return j;
}

nlohmann::json simulation_json(const SimulationResult& sim, const ExperimentSpec& spec, bool timestamp) {
  nlohmann::json j{{"mean", sim.moments.mean},
                   {"variance", sim.moments.variance},
                   {"variance_ci", {sim.moments.ci_low, sim.moments.ci_high}},
                   {"kurtosis", sim.moments.kurtosis},
                   {"ks", sim.ks},
                   {"dkw", sim.dkw},
                   {"m", sim.samples.size()},
                   {"spec", spec.to_json()}};
  if (timestamp) j["timestamp"] = utc_timestamp();
  j["version"] = kVersion;
  return j;
}

void write_samples_csv(std::ostream& out, const std::vector<double>& samples) {
  out << "index,W\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < samples.size(); ++i) out << i << ',' << samples[i] << '\n';
}

// ---------------------------------------------------------------------------
// verify suites

namespace {

MatrixXcd random_complex(Rng& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> nd;
  MatrixXcd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cdouble(nd(rng), nd(rng));
  return m;
}

AnalyticFn random_poly(Rng& rng, int degree) {
  std::normal_distribution<double> nd;
  std::vector<cdouble> c(degree + 1);
  for (auto& v : c) v = cdouble(nd(rng), nd(rng)) / 2.0;
  c.back() = cdouble(1.0, 0.5);
  return AnalyticFn(c);
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << v;
  return os.str();
}

std::vector<VerifyCheck> verify_linalg(std::uint64_t seed) {
  Rng rng = make_rng(seed, 11);
  std::uniform_int_distribution<int> dim(1, 6), len(3, 5);
  int hs_violations = 0, trace_violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index p = dim(rng), q = dim(rng), s = dim(rng);
    const MatrixXcd a1 = random_complex(rng, p, q), a2 = random_complex(rng, q, s);
    const double lhs = linalg::hs_norm(a1 * a2);
    const double rhs = std::min(linalg::operator_norm(a1) * linalg::hs_norm(a2),
                                linalg::hs_norm(a1) * linalg::operator_norm(a2));
    if (lhs > rhs + 1e-9 * std::max(1.0, rhs)) ++hs_violations;
  }
  for (int t = 0; t < 1000; ++t) {
    const int k = len(rng);
    std::vector<Eigen::Index> dims(k + 1);
    for (auto& d : dims) d = dim(rng);
    dims[k] = dims[0];
    std::vector<MatrixXcd> chain;
    for (int i = 0; i < k; ++i) chain.push_back(random_complex(rng, dims[i], dims[i + 1]));
    const double tr = std::abs(linalg::trace_product(chain));
    for (int i = 1; i <= k; ++i)
      for (int j = i + 1; j <= k; ++j) {
        const double b = linalg::trace_product_bound(chain, i, j);
        if (tr > b + 1e-9 * std::max(1.0, b)) ++trace_violations;
      }
  }
  std::vector<VerifyCheck> out;
  out.push_back({"hs-product inequality", hs_violations == 0, std::to_string(hs_violations) + " violations / 1000"});
  out.push_back({"trace-chain inequality", trace_violations == 0,
                 std::to_string(trace_violations) + " violations over 1000 chains"});

  const MatrixXd big = random_complex(rng, 600, 600).real();
  const double lz = linalg::operator_norm(big);
  const double svd = Eigen::BDCSVD<MatrixXd>(big).singularValues()(0);
  std::ostringstream os;
  os << std::setprecision(12) << "iterative " << lz << " vs svd " << svd;
  out.push_back({"iterative operator norm", std::abs(lz - svd) <= 1e-8 * svd, os.str()});
  return out;
}

std::vector<VerifyCheck> verify_afunc(std::uint64_t seed) {
  Rng rng = make_rng(seed, 12);
  std::uniform_int_distribution<int> dim(2, 8), deg(1, 5);
  double worst_grad = 0.0, worst_hess = 0.0;
  constexpr double h = 1e-5;
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = dim(rng);
    const AnalyticFn f = random_poly(rng, deg(rng));
    const MatrixXcd a = random_complex(rng, n, n) / std::sqrt(static_cast<double>(n));
    const MatrixXcd g = afunc::trace_f_gradient(f, a);
    const HessianTensor ht = afunc::hessian_tensor(f, a);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        MatrixXcd e = MatrixXcd::Zero(n, n);
        e(i, j) = h;
        const cdouble fd = (afunc::trace(f, a + e) - afunc::trace(f, a - e)) / (2.0 * h);
        worst_grad = std::max(worst_grad, std::abs(fd - g(i, j)) / std::max(1.0, std::abs(fd)));
        const MatrixXcd dg = (afunc::trace_f_gradient(f, a + e) - afunc::trace_f_gradient(f, a - e)) / (2.0 * h);
        for (Eigen::Index k = 0; k < n; ++k)
          for (Eigen::Index l = 0; l < n; ++l)
            worst_hess = std::max(worst_hess, std::abs(dg(k, l) - ht.at(k, l, i, j)) / std::max(1.0, std::abs(dg(k, l))));
      }
  }
  return {{"trace gradient vs finite differences", worst_grad <= 1e-5, "max rel error " + sci(worst_grad)},
          {"hessian tensor vs finite differences", worst_hess <= 1e-5, "max rel error " + sci(worst_hess)}};
}

std::vector<VerifyCheck> verify_stein(std::uint64_t seed) {
  std::vector<VerifyCheck> out;
  const Eigen::Index n = 20;
  MatrixXd b = MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) b(i, i + 1) = b(i + 1, i) = 1.0;
  const FunctionalModel fm = quadratic_functional(b);
  Rng rng = make_rng(seed, 13);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = nd(rng);
    const double exact = 2.0 * y.dot(b * b * y);
    const double est = estimate_T(fm, y, 64, 32, stream_seed(seed, t));
    worst = std::max(worst, std::abs(est - exact) / std::abs(exact));
  }
  out.push_back({"kernel of a quadratic form", worst <= 1e-4, "max rel error " + sci(worst)});

  std::vector<double> grid;
  for (int k = -60; k <= 60; ++k) grid.push_back(k / 10.0);
  struct Case {
    std::string name;
    std::function<double(double)> u;
    std::vector<double> kinks;
  };
  const std::vector<Case> cases{{"x", [](double x) { return x; }, {}},
                                {"tanh", [](double x) { return std::tanh(x); }, {}},
                                {"clipped-linear", [](double x) { return std::clamp(x, -1.0, 1.0); }, {-1.0, 1.0}}};
  for (const auto& [name, u, kinks] : cases) {
    const SteinEquationSolution s = stein_solution(u, grid, kinks);
    std::ostringstream os;
    os << "residual " << s.max_residual << ", sup |phi'| " << s.sup_phi_prime;
    out.push_back({"stein equation, u = " + name, s.max_residual < 1e-6 && s.sup_phi_prime <= 4.0, os.str()});
  }
  return out;
}

std::vector<VerifyCheck> verify_gamma(std::uint64_t seed) {
  Rng rng = make_rng(seed, 14);
  std::vector<VerifyCheck> out;
  auto compare = [&](const MatrixModel& m, const std::string& name) {
    const VectorXd x = m.sample_point(rng);
    const GammaProfile c = gammas_closed_form(m, x);
    const GammaProfile g = gammas_numeric(m, x);
    const bool ok = g.gamma0 <= c.gamma0 + 1e-8 && g.gamma1 <= c.gamma1 + 1e-8 && g.gamma2 <= c.gamma2 + 1e-8;
    std::ostringstream os;
    os << std::setprecision(6) << "numeric (" << g.gamma0 << ", " << g.gamma1 << ", " << g.gamma2
       << ") closed-form (" << c.gamma0 << ", " << c.gamma1 << ", " << c.gamma2 << ")";
    out.push_back({name, ok, os.str()});
    return g;
  };
  const WignerModel wig(4, VarianceProfile::constant(4), scaled_centered_uniform(1.0));
  const GammaProfile gw = compare(wig, "wigner n=4 numeric <= closed-form");
  out.push_back({"wigner numeric gamma2 is zero", gw.gamma2 == 0.0 && gw.gamma2_upper == 0.0,
                 "gamma2 = " + sci(gw.gamma2)});
  compare(WishartModel(2, 3, gaussian_law()), "wishart n=2 N=3 numeric <= closed-form");
  compare(WishartModel(4, 8, uniform_law()), "wishart n=4 N=8 numeric <= closed-form");
  return out;
}

}  // namespace

std::vector<VerifyCheck> run_verify_suite(std::string_view suite, std::uint64_t seed) {
  if (suite == "linalg") return verify_linalg(seed);
  if (suite == "afunc") return verify_afunc(seed);
  if (suite == "stein") return verify_stein(seed);
  if (suite == "gamma") return verify_gamma(seed);
  throw InputError("unknown verify suite \"" + std::string(suite) + "\" (linalg, afunc, stein, gamma)");
}

}  // namespace rmclt
