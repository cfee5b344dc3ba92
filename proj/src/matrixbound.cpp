#include "rmclt/matrixbound.hpp"

#include <cmath>

#include "rmclt/errors.hpp"
#include "rmclt/parallel.hpp"

namespace rmclt {

namespace {

const double kTwoSqrt5 = 2.0 * std::sqrt(5.0);

void require_sigma2(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw ArgumentError("sigma2 must be positive and finite");
}

bool is_symmetric(const MatrixXd& a) { return a == a.transpose(); }

// ||A||; the symmetric case only needs eigenvalues.
double matrix_norm(const MatrixXd& a) {
  return is_symmetric(a) ? linalg::hermitian_spectral_radius(a) : linalg::operator_norm(a);
}

// Largest singular triple of a small dense matrix.
struct TopPair {
  double sigma = 0.0;
  VectorXd left, right;
};

TopPair top_pair(const MatrixXd& g) {
  Eigen::JacobiSVD<MatrixXd> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.singularValues()(0), svd.matrixU().col(0), svd.matrixV().col(0)};
}

double sqrt_top_eigenvalue(const MatrixXd& gram) {
  const VectorXd ev = Eigen::SelfAdjointEigenSolver<MatrixXd>(gram, Eigen::EigenvaluesOnly).eigenvalues();
  return std::sqrt(std::max(ev(ev.size() - 1), 0.0));
}

}  // namespace

GammaProfile gammas_closed_form(const MatrixModel& model, const VectorXd& x) {
  const double n = static_cast<double>(model.dim());
  GammaProfile g;
  g.method = "closed-form";
  g.at = x;
  switch (model.kind()) {
    case EnsembleKind::Wigner:
      g.gamma0 = g.gamma1 = 2.0 / std::sqrt(n);
      break;
    case EnsembleKind::CorrGauss:
      g.gamma0 = g.gamma1 = 1.0 / std::sqrt(n);
      break;
    case EnsembleKind::Toeplitz: {
      // dA/dx_d = T_d / sqrt n has nuclear norm <= max(n, 2(n-d)) and the
      // Jacobian rows are orthogonal with squared norms |{(i,j): |i-j| = d}| / n.
      const double widest = model.dim() > 1 ? std::max(n, 2.0 * (n - 1.0)) : n;
      g.gamma0 = widest / std::sqrt(n);
      g.gamma1 = std::sqrt(widest / n);
      break;
    }
    case EnsembleKind::Wishart: {
      const auto& w = static_cast<const WishartModel&>(model);
      const double lambda = linalg::hermitian_spectral_radius(w.assemble(x));
      const double big_n = static_cast<double>(w.samples());
      g.gamma0 = g.gamma1 = 2.0 * std::sqrt(lambda / big_n);
      g.gamma2 = 2.0 / big_n;
      break;
    }
    case EnsembleKind::DoubleWishart: {
      const auto& dw = static_cast<const DoubleWishartModel&>(model);
      const double lambda = double_wishart_lambda(dw, x);
      const double big_n = static_cast<double>(dw.samples_x());
      const double big_m = static_cast<double>(dw.samples_y());
      g.gamma0 = 2.0 * std::pow(lambda, 3.5) * std::sqrt(big_n) / big_m;
      g.gamma1 = std::sqrt(2.0) * g.gamma0;
      g.gamma2 = 16.0 * std::pow(lambda, 5) / big_m;
      break;
    }
    default:
      throw CapabilityError("no closed-form gammas for " + to_string(model.kind()));
  }
  g.gamma2_upper = g.gamma2;
  return g;
}

GammaProfile gammas_numeric(const MatrixModel& model, const VectorXd& x, int iters) {
  if (iters < 1) throw ArgumentError("gammas_numeric needs iters >= 1");
  const Eigen::Index k = model.arity();
  const Eigen::Index n = model.dim();
  const Eigen::Index n2 = n * n;
  GammaProfile g;
  g.method = "numeric";
  g.at = x;

  const MatrixXd jac = model.jacobian(x);
  for (Eigen::Index u = 0; u < k; ++u) {
    const VectorXd row = jac.row(u).transpose();
    const MatrixXd d = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        row.data(), n, n);
    g.gamma0 = std::max(g.gamma0, linalg::nuclear_norm(d));
  }
  g.gamma1 = sqrt_top_eigenvalue(jac.rows() <= jac.cols() ? MatrixXd(jac * jac.transpose())
                                                          : MatrixXd(jac.transpose() * jac));

  const std::size_t entries = static_cast<std::size_t>(k) * k * n2;
  if (entries > kMaxTensorEntries) {
    if (model.second_derivatives_vanish()) return g;
    throw ResourceError("second-derivative tensor has " + std::to_string(entries) + " entries (limit " +
                        std::to_string(kMaxTensorEntries) + ")");
  }
  // Mode-1 flattening: row u, column v * n2 + (ij).
  MatrixXd flat(k, k * n2);
  for (Eigen::Index u = 0; u < k; ++u) {
    for (Eigen::Index v = u; v < k; ++v) {
      const MatrixXd d = model.d2(x, u, v);
      const auto row = linalg::vec_row(d);
      flat.block(u, v * n2, 1, n2) = row;
      flat.block(v, u * n2, 1, n2) = row;
    }
  }
  if (flat.cwiseAbs().maxCoeff() == 0.0) return g;

  // Upper bound: the operator norm of a flattening dominates the tensor norm.
  g.gamma2_upper = sqrt_top_eigenvalue(flat * flat.transpose());

  auto contract_beta = [&](const VectorXd& beta) {
    MatrixXd gm(k, k);
    for (Eigen::Index u = 0; u < k; ++u)
      for (Eigen::Index v = 0; v < k; ++v) gm(u, v) = flat.row(u).segment(v * n2, n2).dot(beta.transpose());
    return gm;
  };
  auto contract_alpha = [&](const VectorXd& a, const VectorXd& ap) {
    VectorXd m = VectorXd::Zero(n2);
    for (Eigen::Index u = 0; u < k; ++u) {
      if (a(u) == 0.0) continue;
      for (Eigen::Index v = 0; v < k; ++v) m += a(u) * ap(v) * flat.row(u).segment(v * n2, n2).transpose();
    }
    return m;
  };

  // Start from the dominant (u, v) slice pair of the second flattening.
  Eigen::Index bu = 0, bv = 0;
  double best_slice = -1.0;
  for (Eigen::Index u = 0; u < k; ++u)
    for (Eigen::Index v = 0; v < k; ++v) {
      const double s = flat.row(u).segment(v * n2, n2).squaredNorm();
      if (s > best_slice) {
        best_slice = s;
        bu = u;
        bv = v;
      }
    }
  VectorXd a = VectorXd::Unit(k, bu), ap = VectorXd::Unit(k, bv);
  double value = 0.0;
  for (int it = 0; it < iters; ++it) {
    VectorXd beta = contract_alpha(a, ap);
    const double bn = beta.norm();
    if (bn == 0.0) break;
    beta /= bn;
    const TopPair tp = top_pair(contract_beta(beta));
    a = tp.left;
    ap = tp.right;
    const double gain = tp.sigma - value;
    value = std::max(value, tp.sigma);
    if (it > 0 && gain <= 1e-14 * std::max(1.0, value)) break;
  }
  g.gamma2 = value;
  return g;
}

EtaProfile eta_profile(const GammaProfile& g, const AnalyticFn& f, double lambda, Eigen::Index r) {
  if (r < 0) throw ArgumentError("rank must be nonnegative");
  const double f1 = derive_f1(f).eval_real(lambda);
  const double f2 = derive_f2(f).eval_real(lambda);
  const double sr = std::sqrt(static_cast<double>(r));
  EtaProfile e;
  e.lambda = lambda;
  e.rank = r;
  e.eta0 = g.gamma0 * f1;
  e.eta1 = g.gamma1 * f1 * sr;
  e.eta2 = g.gamma2_upper * f1 * sr + g.gamma1 * g.gamma1 * f2;
  return e;
}

MatrixKappaEstimate estimate_matrix_kappas(const MatrixModel& model, const AnalyticFn& f, std::size_t n_mc,
                                           std::uint64_t seed, unsigned workers, GammaSource source) {
  if (n_mc < 2) throw ArgumentError("estimate_matrix_kappas needs n_mc >= 2");
  bool closed = source != GammaSource::Numeric;
  if (source == GammaSource::Auto) {
    try {
      Rng probe = make_rng(seed, ~0ULL);
      gammas_closed_form(model, model.sample_point(probe));
    } catch (const CapabilityError&) {
      closed = false;
    }
  }
  // Rank is computed exactly for small n; above that r = n bounds it.
  constexpr Eigen::Index kRankLimit = 128;
  const auto etas = mc_map<std::array<double, 3>>(n_mc, seed, workers, [&](Rng& rng, std::size_t) {
    const VectorXd x = model.sample_point(rng);
    const MatrixXd a = model.assemble(x);
    const GammaProfile g = closed ? gammas_closed_form(model, x) : gammas_numeric(model, x);
    const Eigen::Index r = model.dim() <= kRankLimit ? linalg::numerical_rank(a) : model.dim();
    const EtaProfile e = eta_profile(g, f, matrix_norm(a), r);
    if (!std::isfinite(e.eta0) || !std::isfinite(e.eta1) || !std::isfinite(e.eta2)) {
      throw SampleDomainError("non-finite eta at a sampled point (lambda = " + std::to_string(e.lambda) + ")");
    }
    return std::array<double, 3>{e.eta0, e.eta1, e.eta2};
  });
  std::vector<double> m0(n_mc), m1(n_mc), m2(n_mc);
  MatrixKappaEstimate out;
  out.gamma_method = closed ? "closed-form" : "numeric";
  std::vector<double> e0(n_mc), e1(n_mc), e2(n_mc);
  for (std::size_t i = 0; i < n_mc; ++i) {
    const auto& [a0, a1, a2] = etas[i];
    m0[i] = a0 * a0 * a1 * a1;
    m1[i] = std::pow(a1, 4);
    m2[i] = std::pow(a2, 4);
    e0[i] = a0;
    e1[i] = a1;
    e2[i] = a2;
    out.eta.eta0_max = std::max(out.eta.eta0_max, a0);
    out.eta.eta1_max = std::max(out.eta.eta1_max, a1);
    out.eta.eta2_max = std::max(out.eta.eta2_max, a2);
  }
  out.eta.eta0_mean = estimate_mean(e0).mean;
  out.eta.eta1_mean = estimate_mean(e1).mean;
  out.eta.eta2_mean = estimate_mean(e2).mean;
  out.kappas = kappas_from_moments(estimate_mean(m0), estimate_mean(m1), estimate_mean(m2), n_mc);
  return out;
}

double tv_bound_matrix(double c1, double c2, const KappaTriple& k, double sigma2) {
  return tv_bound_independent(c1, c2, k, sigma2);
}

double wigner_bound(Eigen::Index n, double c1, double c2, double a, double b, double sigma2) {
  require_sigma2(sigma2);
  if (n < 1) throw ArgumentError("n must be positive");
  const double nd = static_cast<double>(n);
  return kTwoSqrt5 / sigma2 * (4.0 * c1 * c2 * a * a / std::sqrt(nd) + 8.0 * c1 * c1 * c1 * a * b / nd);
}

double corr_gaussian_bound(double sigma_op, double a, double b, double sigma2, Eigen::Index n) {
  require_sigma2(sigma2);
  if (n < 1) throw ArgumentError("n must be positive");
  return kTwoSqrt5 * std::pow(sigma_op, 1.5) * a * b / (sigma2 * static_cast<double>(n));
}

double wishart_bound(Eigen::Index n, Eigen::Index big_n, double c1, double c2, double a, double b, double sigma2) {
  require_sigma2(sigma2);
  if (n < 1 || n > big_n) throw ArgumentError("wishart_bound needs 1 <= n <= N");
  const double nd = static_cast<double>(n), nn = static_cast<double>(big_n);
  return 8.0 * std::sqrt(5.0) / sigma2 *
         (c1 * c2 * a * a * std::sqrt(nd) / nn + c1 * c1 * c1 * a * b * nd / std::pow(nn, 1.5));
}

double double_wishart_bound(Eigen::Index n, Eigen::Index big_n, Eigen::Index big_m, double c1, double c2, double a,
                            double b, double sigma2) {
  require_sigma2(sigma2);
  if (n < 1 || n > big_n || big_n > big_m) throw ArgumentError("double_wishart_bound needs 1 <= n <= N <= M");
  const double nd = static_cast<double>(n), nn = static_cast<double>(big_n), mm = static_cast<double>(big_m);
  return 4.0 * std::sqrt(10.0) / sigma2 *
         (c1 * c2 * a * a * nn * std::sqrt(nd) / (mm * mm) +
          2.0 * c1 * c1 * c1 * a * b * std::sqrt(nn) * nd / (mm * mm));
}

KappaTriple wigner_kappas(Eigen::Index n, double a, double b) {
  const double nd = static_cast<double>(n);
  KappaTriple k;
  k.kappa0 = 4.0 * a * a / std::sqrt(nd);
  k.kappa1 = 2.0 * a;
  k.kappa2 = 4.0 * b / nd;
  return k;
}

KappaTriple wishart_kappas(Eigen::Index n, Eigen::Index big_n, double a, double b) {
  const double rn = std::sqrt(static_cast<double>(n)), nn = static_cast<double>(big_n);
  KappaTriple k;
  k.kappa0 = 4.0 * rn * a * a / nn;
  k.kappa1 = 2.0 * rn * a / std::sqrt(nn);
  k.kappa2 = 2.0 * rn * b / nn;
  return k;
}

KappaTriple double_wishart_kappas(Eigen::Index n, Eigen::Index big_n, Eigen::Index big_m, double a, double b) {
  const double nd = static_cast<double>(n), nn = static_cast<double>(big_n), mm = static_cast<double>(big_m);
  KappaTriple k;
  k.kappa0 = 4.0 * nn * std::sqrt(2.0 * nd) * a * a / (mm * mm);
  k.kappa1 = 2.0 * std::sqrt(2.0 * nn * nd) * a / mm;
  k.kappa2 = 4.0 * std::sqrt(nd) * b / mm;
  return k;
}

double double_wishart_lambda(const DoubleWishartModel& model, const VectorXd& x) {
  const MatrixXd xm = model.data_x(x);
  const MatrixXd ym = model.data_y(x);
  const MatrixXd cx = xm * xm.transpose() / static_cast<double>(model.samples_x());
  const MatrixXd cy = ym * ym.transpose() / static_cast<double>(model.samples_y());
  const VectorXd ex = Eigen::SelfAdjointEigenSolver<MatrixXd>(cx, Eigen::EigenvaluesOnly).eigenvalues();
  const VectorXd ey = Eigen::SelfAdjointEigenSolver<MatrixXd>(cy, Eigen::EigenvaluesOnly).eigenvalues();
  if (!(ey(0) > 0.0)) throw DegenerateError("Y Y^t is singular");
  return std::max({1.0, ex(ex.size() - 1), ey(ey.size() - 1), 1.0 / ey(0)});
}

EnsembleBoundInputs estimate_ensemble_inputs(const MatrixModel& model, const AnalyticFn& f, std::size_t n_mc,
                                             std::uint64_t seed, unsigned workers) {
  if (n_mc < 2) throw ArgumentError("estimate_ensemble_inputs needs n_mc >= 2");
  const AnalyticFn f1 = derive_f1(f), f2 = derive_f2(f);
  const double rn = std::sqrt(static_cast<double>(model.dim()));
  const EnsembleKind kind = model.kind();
  EnsembleBoundInputs out;
  out.n_mc = n_mc;

  // Plain moments with constant f1 and f2 need no sampling at all.
  const bool plain = kind == EnsembleKind::Wigner || kind == EnsembleKind::CorrGauss || kind == EnsembleKind::Toeplitz;
  if (plain && f.degree() <= 1) {
    out.a = f1.eval_real(0.0);
    out.b = 0.0;
    out.moments = "E f1(l)^4, E f2(l)^4 (constant)";
    return out;
  }

  const auto rows = mc_map<std::array<double, 2>>(n_mc, seed, workers, [&](Rng& rng, std::size_t) {
    const VectorXd x = model.sample_point(rng);
    double l = 0.0;
    if (kind == EnsembleKind::DoubleWishart) {
      l = double_wishart_lambda(static_cast<const DoubleWishartModel&>(model), x);
    } else {
      l = matrix_norm(model.assemble(x));
    }
    const double v1 = f1.eval_real(l), v2 = f2.eval_real(l);
    double qa = 0.0, qb = 0.0;
    switch (kind) {
      case EnsembleKind::Wishart:
        qa = std::pow(v1, 4) * l * l;
        qb = std::pow(v1 + 2.0 * v2 * l / rn, 4);
        break;
      case EnsembleKind::DoubleWishart:
        qa = std::pow(v1, 4) * std::pow(l, 14);
        qb = std::pow(4.0 * v1 * std::pow(l, 5) + 2.0 * v2 * std::pow(l, 7) / rn, 4);
        break;
      default:
        qa = std::pow(v1, 4);
        qb = std::pow(v2, 4);
    }
    if (!std::isfinite(qa) || !std::isfinite(qb)) {
      throw SampleDomainError("non-finite moment at a sampled point (lambda = " + std::to_string(l) + ")");
    }
    return std::array<double, 2>{qa, qb};
  });
  std::vector<double> ca(n_mc), cb(n_mc);
  for (std::size_t i = 0; i < n_mc; ++i) {
    ca[i] = rows[i][0];
    cb[i] = rows[i][1];
  }
  const MeanEstimate ma = estimate_mean(ca), mb = estimate_mean(cb);
  out.a = std::pow(ma.mean, 0.25);
  out.b = std::pow(mb.mean, 0.25);
  out.a_se = out.a > 0.0 ? ma.se / (4.0 * std::pow(out.a, 3)) : 0.0;
  out.b_se = out.b > 0.0 ? mb.se / (4.0 * std::pow(out.b, 3)) : 0.0;
  switch (kind) {
    case EnsembleKind::Wishart: out.moments = "E f1(l)^4 l^2, E (f1(l) + 2 f2(l) l / sqrt n)^4"; break;
    case EnsembleKind::DoubleWishart:
      out.moments = "E f1(l)^4 l^14, E (4 f1(l) l^5 + 2 f2(l) l^7 / sqrt n)^4";
      break;
    default: out.moments = "E f1(l)^4, E f2(l)^4";
  }
  return out;
}

double wigner_var_lower(Eigen::Index n, int p, double c) {
  if (p < 1 || p > n) throw ArgumentError("wigner_var_lower needs 1 <= p <= n");
  if (!(c > 0.0)) throw ArgumentError("wigner_var_lower needs c > 0");
  const double nd = static_cast<double>(n);
  double v = std::pow(c, p);
  for (int k = 0; k < p; ++k) v *= (nd - k) / nd;
  return v;
}

double toeplitz_var_lower(Eigen::Index n, int p) {
  if (p < 1) throw ArgumentError("toeplitz_var_lower needs p >= 1");
  if (n < 4LL * p * p) {
    throw OutOfRegimeError("toeplitz_var_lower needs n >= 4p^2 (n = " + std::to_string(n) +
                           ", p = " + std::to_string(p) + ")");
  }
  return static_cast<double>(n) / (9.0 * std::pow(12.0 * p, p - 1));
}

}  // namespace rmclt
