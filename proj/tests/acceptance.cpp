// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "rmclt/afunc.hpp"
#include "rmclt/errors.hpp"
#include "rmclt/harness.hpp"
#include "rmclt/linalg.hpp"
#include "rmclt/matrixbound.hpp"
#include "rmclt/stats.hpp"
#include "rmclt/steinkernel.hpp"

using namespace rmclt;

namespace {

int failures = 0;

void report(int id, const std::string& what, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  detail << std::setprecision(6);
  bool ok = false;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << "  [" << id << "] " << what << "  (" << detail.str() << "; "
            << std::fixed << std::setprecision(1) << secs << "s)" << std::endl;
}

MatrixXcd random_complex(Rng& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> nd;
  MatrixXcd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cdouble(nd(rng), nd(rng));
  return m;
}

ExperimentSpec wigner(Eigen::Index n, const std::string& f, const std::string& law) {
  ExperimentSpec s;
  s.ensemble = EnsembleKind::Wigner;
  s.n = n;
  s.f = f;
  s.law = law;
  return s;
}

MatrixXd tridiag(Eigen::Index n) {
  MatrixXd b = MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) b(i, i + 1) = b(i + 1, i) = 1.0;
  return b;
}

}  // namespace

int main() {
  report(1, "gaussian Wigner f=z, n=100: bound is 0 and KS < 0.0062", [](std::ostringstream& d) {
    ExperimentSpec s = wigner(100, "z", "gaussian");
    s.mc_sigma = 100000;
    s.mc_kappa = 200;
    const BoundReport r = run_bound(s);
    const SimulationResult sim = simulate_statistic(s);
    d << "tv_bound " << r.tv_bound << ", KS " << sim.ks << " over " << sim.samples.size();
    return r.tv_bound == 0.0 && sim.ks < 0.0062;
  });

  report(2, "trace gradient and hessian vs finite differences", [](std::ostringstream& d) {
    Rng rng = make_rng(2024, 1);
    std::uniform_int_distribution<int> dim(1, 8), deg(1, 5);
    std::normal_distribution<double> nd;
    constexpr double h = 1e-5;
    double worst_grad = 0.0, worst_hess = 0.0;
    for (int t = 0; t < 20; ++t) {
      const Eigen::Index n = dim(rng);
      std::vector<cdouble> c(deg(rng) + 1);
      for (auto& v : c) v = cdouble(nd(rng), nd(rng));
      const AnalyticFn f(c);
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
              worst_hess =
                  std::max(worst_hess, std::abs(dg(k, l) - ht.at(k, l, i, j)) / std::max(1.0, std::abs(dg(k, l))));
        }
    }
    d << std::scientific << std::setprecision(2) << "max rel error gradient " << worst_grad << ", hessian "
      << worst_hess;
    return worst_grad <= 1e-5 && worst_hess <= 1e-5;
  });

  report(3, "HS-product and trace-chain inequalities on 1e3 complex instances", [](std::ostringstream& d) {
    Rng rng = make_rng(2024, 2);
    std::uniform_int_distribution<int> dim(1, 7), len(2, 6);
    int hs_bad = 0, chain_bad = 0;
    for (int t = 0; t < 1000; ++t) {
      const Eigen::Index p = dim(rng), q = dim(rng), s = dim(rng);
      const MatrixXcd a1 = random_complex(rng, p, q), a2 = random_complex(rng, q, s);
      const double lhs = linalg::hs_norm(a1 * a2);
      const double rhs = std::min(linalg::operator_norm(a1) * linalg::hs_norm(a2),
                                  linalg::hs_norm(a1) * linalg::operator_norm(a2));
      if (lhs > rhs + 1e-9 * std::max(1.0, rhs)) ++hs_bad;
    }
    for (int t = 0; t < 1000; ++t) {
      const int k = len(rng);
      std::vector<Eigen::Index> dims(k + 1);
      for (auto& v : dims) v = dim(rng);
      dims[k] = dims[0];
      std::vector<MatrixXcd> chain;
      for (int i = 0; i < k; ++i) chain.push_back(random_complex(rng, dims[i], dims[i + 1]));
      const double tr = std::abs(linalg::trace_product(chain));
      bool bad = false;
      for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j) {
          const double b = linalg::trace_product_bound(chain, i, j);
          if (tr > b + 1e-9 * std::max(1.0, b)) bad = true;
        }
      chain_bad += bad;
    }
    d << hs_bad << " HS violations, " << chain_bad << " chain violations";
    return hs_bad == 0 && chain_bad == 0;
  });

  report(4, "numeric gammas <= closed forms; Wigner gamma2 = 0", [](std::ostringstream& d) {
    Rng rng = make_rng(2024, 3);
    int checked = 0, bad = 0;
    bool wigner_zero = true;
    double worst = -1e300;
    auto check = [&](const MatrixModel& m, bool is_wigner) {
      const VectorXd x = m.sample_point(rng);
      const GammaProfile c = gammas_closed_form(m, x);
      const GammaProfile g = gammas_numeric(m, x);
      ++checked;
      worst = std::max({worst, g.gamma0 - c.gamma0, g.gamma1 - c.gamma1, g.gamma2 - c.gamma2});
      if (g.gamma0 > c.gamma0 + 1e-8 || g.gamma1 > c.gamma1 + 1e-8 || g.gamma2 > c.gamma2 + 1e-8) ++bad;
      if (is_wigner && g.gamma2 != 0.0) wigner_zero = false;
    };
    for (Eigen::Index n : {2, 5, 8, 16}) {
      check(WignerModel(n, VarianceProfile::constant(n), gaussian_law()), true);
      check(WignerModel(n, VarianceProfile::constant(n), scaled_centered_uniform(1.0)), true);
    }
    for (auto [n, big_n] : std::vector<std::pair<int, int>>{{2, 3}, {4, 8}, {8, 8}, {8, 16}}) {
      check(WishartModel(n, big_n, gaussian_law()), false);
      check(WishartModel(n, big_n, uniform_law()), false);
    }
    d << checked << " models, " << bad << " above closed form, worst excess " << worst
      << (wigner_zero ? ", wigner gamma2 all zero" : ", wigner gamma2 nonzero");
    return bad == 0 && wigner_zero;
  });

  report(5, "variance oracles and floors for z^2 at n=64", [](std::ostringstream& d) {
    ExperimentSpec w = wigner(64, "z^2", "gaussian");
    w.mc_sigma = 20000;
    const double vw = simulate_statistic(w).moments.variance;
    ExperimentSpec t = w;
    t.ensemble = EnsembleKind::Toeplitz;
    const double vt = simulate_statistic(t).moments.variance;
    const double n = 64;
    double sum = 0.0;
    for (int dd = 1; dd < 64; ++dd) sum += (n - dd) * (n - dd);
    const double toeplitz_exact = 2.0 / (n * n) * (n * n + 4.0 * sum);
    const double wf = wigner_var_lower(64, 2, 1.0), tf = toeplitz_var_lower(64, 2);
    d << "wigner " << vw << " vs 3.96875 (floor " << wf << "), toeplitz " << vt << " vs " << toeplitz_exact
      << " (floor " << tf << ")";
    return std::abs(vw / 3.96875 - 1) < 0.05 && std::abs(vt / toeplitz_exact - 1) < 0.05 &&
           std::abs(toeplitz_exact - 168.69) < 0.01 && std::abs(wf - 0.984) < 5e-4 &&
           std::abs(tf - 64.0 / 216) < 1e-12 && vw > wf && vt > tf;
  });

  report(6, "stein kernel for the nearest-neighbour quadratic form, n=50", [](std::ostringstream& d) {
    const Eigen::Index n = 50;
    const MatrixXd b = tridiag(n);
    const FunctionalModel fm = quadratic_functional(b);
    Rng rng = make_rng(2024, 6);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      VectorXd y(n);
      for (Eigen::Index i = 0; i < n; ++i) y(i) = nd(rng);
      const double exact = 2.0 * y.dot(b * b * y);
      worst = std::max(worst, std::abs(estimate_T(fm, y, 512, 16, stream_seed(6, t)) - exact) / std::abs(exact));
    }
    const SteinKernelEstimate est = tv_bound_kernel(fm, 4000, 2, 16, 66);
    const double t2 = b.squaredNorm(), t4 = (b * b).squaredNorm();
    const double analytic = 2 * std::sqrt(2 * t4) / t2;
    d << "max rel error of T " << std::scientific << std::setprecision(2) << worst << std::defaultfloat
      << std::setprecision(6) << ", mean T " << est.mean_T << " +- " << est.mean_T_se << ", bound "
      << est.tv_bound << " vs " << analytic;
    return worst <= 1e-4 && std::abs(est.mean_T - 1.0) <= 3 * est.mean_T_se &&
           std::abs(est.tv_bound - analytic) <= 0.25 * analytic;
  });

  report(7, "stein equation residual < 1e-6 and sup |phi'| <= 4", [](std::ostringstream& d) {
    std::vector<double> grid;
    for (int k = -120; k <= 120; ++k) grid.push_back(k / 20.0);
    struct Case {
      std::string name;
      std::function<double(double)> u;
      std::vector<double> kinks;
    };
    const std::vector<Case> cases{{"x", [](double x) { return x; }, {}},
                                  {"x^2", [](double x) { return x * x; }, {}},
                                  {"tanh", [](double x) { return std::tanh(x); }, {}},
                                  {"clipped-linear", [](double x) { return std::clamp(x, -1.0, 1.0); }, {-1.0, 1.0}}};
    bool ok = true;
    for (const auto& c : cases) {
      const SteinEquationSolution s = stein_solution(c.u, grid, c.kinks);
      d << c.name << ": " << std::scientific << std::setprecision(1) << s.max_residual << "/" << std::defaultfloat
        << std::setprecision(3) << s.sup_phi_prime << "  ";
      ok = ok && s.max_residual < 1e-6 && s.sup_phi_prime <= 4.0;
    }
    return ok;
  });

  report(8, "KS <= tv_bound + DKW (sym-uniform f=z n=500, gaussian f=z^2 n=128)", [](std::ostringstream& d) {
    bool ok = true;
    const std::vector<ExperimentSpec> specs{wigner(400, "z", "sym-uniform:1"), wigner(500, "z", "sym-uniform:1"),
                                            wigner(128, "z^2", "gaussian")};
    for (std::size_t i = 0; i < specs.size(); ++i) {
      ExperimentSpec s = specs[i];
      s.mc_sigma = 10000;
      s.mc_kappa = 500;
      const BoundReport r = run_bound(s);
      const SimulationResult sim = simulate_statistic(s);
      d << s.f << " n=" << s.n << ": KS " << sim.ks << " bound " << r.tv_bound << " dkw " << sim.dkw << "  ";
      // n=400 is only reported: the bound is above 1 there.
      if (i > 0) ok = ok && sim.ks <= r.tv_bound + sim.dkw && r.tv_bound < 1.0;
    }
    return ok;
  });

  struct Rate {
    std::string name;
    ExperimentSpec spec;
    double target;
  };
  std::vector<Rate> rates;
  {
    ExperimentSpec g = wigner(32, "z^2", "gaussian");
    g.grid = {32, 64, 128, 256, 512};
    rates.push_back({"gaussian Wigner z^2", g, -1.0});
    ExperimentSpec u = g;
    u.law = "sym-uniform:1";
    rates.push_back({"sym-uniform Wigner z^2", u, -0.5});
    ExperimentSpec w;
    w.ensemble = EnsembleKind::Wishart;
    w.f = "z^2";
    w.axis = "N";
    w.ratio = 0.5;
    w.grid = {32, 64, 128, 256, 512};
    rates.push_back({"Wishart z^2, n = N/2", w, -0.5});
  }
  for (Rate& r : rates) {
    report(9, "log-log slope, " + r.name, [&r](std::ostringstream& d) {
      r.spec.mc_sigma = 2000;
      r.spec.mc_kappa = 200;
      const RateFit fit = rate_fit(r.spec);
      d << "slope " << fit.slope << " +- " << fit.slope_se << " (target " << r.target << " +- 0.3)";
      return std::abs(fit.slope - r.target) <= 0.3;
    });
  }

  report(10, "determinism and worker invariance", [](std::ostringstream& d) {
    ExperimentSpec s = wigner(24, "z^2+0.5z^3", "sym-uniform:1");
    s.mc_sigma = 5000;
    s.mc_kappa = 200;
    const BoundReport a = run_bound(s);
    const BoundReport b = run_bound(s);
    nlohmann::json ja = report_json(a, s), jb = report_json(b, s);
    ja.erase("timestamp");
    jb.erase("timestamp");
    ExperimentSpec p = s;
    p.workers = 4;
    const BoundReport c = run_bound(p);
    const double dtv = std::abs(a.tv_bound - c.tv_bound) / a.tv_bound;
    const double dvar = std::abs(a.sigma2.variance - c.sigma2.variance) / a.sigma2.variance;
    const double dk = std::abs(a.kappas.kappa1 - c.kappas.kappa1) / std::max(1e-300, a.kappas.kappa1);
    d << (ja == jb ? "reports identical" : "reports differ") << ", worker rel diff tv " << dtv << " sigma2 " << dvar
      << " kappa1 " << dk;
    return ja == jb && dtv <= 1e-12 && dvar <= 1e-12 && dk <= 1e-12;
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion line(s) failed")
            << std::endl;
  return failures;
}
