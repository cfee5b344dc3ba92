// rmclt: normal-approximation bounds for linear statistics of random matrices.
//
//   rmclt bound    --ensemble wigner --n 128 --law sym-uniform:1 --f "z^2" --out report.json
//   rmclt simulate --ensemble toeplitz --n 64 --f "z^2" --csv samples.csv
//   rmclt rate     --ensemble wigner --ns 32,64,128,256,512 --f "z^2"
//   rmclt verify   --suite gamma
//
// Exit status: 0 ok, 2 invalid spec, 3 numeric failure, 4 out of regime.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "rmclt/errors.hpp"
#include "rmclt/harness.hpp"

namespace {

void add_spec_options(CLI::App* cmd, rmclt::ExperimentSpec& spec, std::string& ensemble) {
  cmd->add_option("--ensemble", ensemble, "wigner, corr-gauss, toeplitz, wishart, double-wishart");
  cmd->add_option("--n", spec.n, "matrix dimension");
  cmd->add_option("--N", spec.big_n, "Wishart sample count");
  cmd->add_option("--M", spec.big_m, "double Wishart second sample count");
  cmd->add_option("--law", spec.law, "gaussian, uniform, sym-uniform:s");
  cmd->add_option("--f", spec.f, "polynomial in z, e.g. \"z^2\" or \"1+0.5z^3\"");
  cmd->add_option("--phase", spec.phase, "statistic is Re Tr(e^{i phase} f(A))");
  cmd->add_option("--mc-kappa", spec.mc_kappa, "samples for the kappa / (a, b) moments");
  cmd->add_option("--mc-sigma", spec.mc_sigma, "samples of W");
  cmd->add_option("--seed", spec.seed);
  cmd->add_option("--workers", spec.workers, "threads, 0 = all cores; results do not depend on it");
  cmd->add_option("--profile", spec.profile_csv, "Wigner variance profile CSV (i,j,s rows, 1-based, i <= j)");
  cmd->add_option("--cov", spec.covariance_csv, "corr-gauss covariance CSV (n^2 x n^2)");
  cmd->add_option("--route", spec.route, "proposition (ensemble closed forms) or general (eta profiles)");
  cmd->add_flag("--use-floor", spec.use_floor, "divide by the proof-derived variance floor");
}

void emit(const nlohmann::json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw rmclt::InputError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normal-approximation bounds for linear statistics of random matrices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rmclt::kVersion);

  rmclt::ExperimentSpec spec;
  std::string ensemble = "wigner";
  std::string out_path, csv_path, suite;
  std::vector<Eigen::Index> grid;

  auto* bound = app.add_subcommand("bound", "estimate the total variation bound");
  add_spec_options(bound, spec, ensemble);
  bound->add_option("--out", out_path, "JSON report path (stdout when omitted)");

  auto* simulate = app.add_subcommand("simulate", "sample W and compare it to the matched normal");
  add_spec_options(simulate, spec, ensemble);
  simulate->add_option("--out", out_path);
  simulate->add_option("--csv", csv_path, "write samples as index,W");

  auto* rate = app.add_subcommand("rate", "fit the log-log decay of the bound over a dimension grid");
  add_spec_options(rate, spec, ensemble);
  rate->add_option("--ns", grid, "dimension grid")->delimiter(',')->required();
  rate->add_option("--axis", spec.axis, "n, or N for Wishart sample counts with n = ratio * N");
  rate->add_option("--ratio", spec.ratio);
  rate->add_option("--out", out_path);

  auto* verify = app.add_subcommand("verify", "run a numerical self-check suite");
  verify->add_option("--suite", suite, "linalg, afunc, stein or gamma")->required();
  verify->add_option("--seed", spec.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      bool ok = true;
      for (const auto& c : rmclt::run_verify_suite(suite, spec.seed)) {
        std::cout << (c.ok ? "ok   " : "FAIL ") << c.name << "  (" << c.detail << ")\n";
        ok = ok && c.ok;
      }
      return ok ? 0 : 3;
    }
    spec.ensemble = rmclt::parse_ensemble(ensemble);
    if (spec.n == 0 && !grid.empty()) spec.n = grid.front();
    if (*bound) {
      emit(rmclt::report_json(rmclt::run_bound(spec), spec), out_path);
    } else if (*simulate) {
      const auto sim = rmclt::simulate_statistic(spec);
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw rmclt::InputError("cannot write " + csv_path);
        rmclt::write_samples_csv(csv, sim.samples);
      }
      emit(rmclt::simulation_json(sim, spec), out_path);
    } else if (*rate) {
      spec.grid = grid;
      emit(rmclt::rate_json(rmclt::rate_fit(spec), spec), out_path);
    }
  } catch (const rmclt::Error& e) {
    std::cerr << "rmclt: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "rmclt: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
