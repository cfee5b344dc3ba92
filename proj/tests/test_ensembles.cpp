#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <sstream>

#include "rmclt/ensembles.hpp"
#include "rmclt/stats.hpp"

namespace rmclt {
namespace {

double rel_gap(const MatrixXd& a, const MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

// Worst relative gap between d1 / d2 and central differences of assemble / d1.
std::pair<double, double> fd_gaps(const MatrixModel& m, const VectorXd& x, double h) {
  double g1 = 0.0, g2 = 0.0;
  const Eigen::Index k = m.arity();
  for (Eigen::Index u = 0; u < k; ++u) {
    VectorXd p = x, q = x;
    p(u) += h;
    q(u) -= h;
    g1 = std::max(g1, rel_gap(m.d1(x, u), (m.assemble(p) - m.assemble(q)) / (2 * h)));
    for (Eigen::Index v = 0; v < k; ++v) {
      g2 = std::max(g2, rel_gap(m.d2(x, u, v), (m.d1(p, v) - m.d1(q, v)) / (2 * h)));
    }
  }
  return {g1, g2};
}

void check_all_points(const MatrixModel& m, std::uint64_t seed, double tol) {
  Rng rng = make_rng(seed, 0);
  for (int t = 0; t < 20; ++t) {
    const VectorXd x = m.sample_point(rng);
    const auto [g1, g2] = fd_gaps(m, x, 1e-5);
    EXPECT_LT(g1, tol) << to_string(m.kind()) << " d1 at point " << t;
    EXPECT_LT(g2, tol) << to_string(m.kind()) << " d2 at point " << t;
  }
}

TEST(Derivatives, WignerMatchesFiniteDifferences) {
  check_all_points(WignerModel(4, VarianceProfile::constant(4), scaled_centered_uniform(1.0)), 1, 1e-6);
}

TEST(Derivatives, CorrGaussMatchesFiniteDifferences) {
  check_all_points(CorrGaussModel(3, CovarianceSpec::identity(9)), 2, 1e-6);
}

TEST(Derivatives, ToeplitzMatchesFiniteDifferences) { check_all_points(ToeplitzModel(5), 3, 1e-6); }

TEST(Derivatives, WishartMatchesFiniteDifferences) {
  check_all_points(WishartModel(2, 3, gaussian_law()), 4, 1e-6);
  check_all_points(WishartModel(3, 5, uniform_law()), 5, 1e-6);
}

TEST(Derivatives, DoubleWishartMatchesFiniteDifferences) {
  check_all_points(DoubleWishartModel(2, 3, 4, gaussian_law()), 6, 1e-5);
}

TEST(Derivatives, JacobianRowsAreFlattenedPartials) {
  Rng rng = make_rng(7, 0);
  const DoubleWishartModel dw(2, 3, 4, gaussian_law());
  const WishartModel w(2, 4, gaussian_law());
  for (const MatrixModel* m : {static_cast<const MatrixModel*>(&dw), static_cast<const MatrixModel*>(&w)}) {
    const VectorXd x = m->sample_point(rng);
    const MatrixXd j = m->jacobian(x);
    ASSERT_EQ(j.rows(), m->arity());
    ASSERT_EQ(j.cols(), m->dim() * m->dim());
    for (Eigen::Index u = 0; u < m->arity(); ++u) {
      EXPECT_LT((j.row(u) - linalg::vec_row(m->d1(x, u))).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Wigner, StructureAndPartials) {
  const Eigen::Index n = 5;
  const WignerModel m(n, VarianceProfile::constant(n), gaussian_law());
  Rng rng = make_rng(8, 0);
  const VectorXd x = m.sample_point(rng);
  const MatrixXd a = m.assemble(x);
  EXPECT_EQ((a - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
  const Eigen::Index u12 = m.index_of(0, 1);
  EXPECT_EQ(m.entry_of(u12), std::make_pair(Eigen::Index{0}, Eigen::Index{1}));
  const MatrixXd d = m.d1(x, u12);
  EXPECT_NEAR(d(0, 1), 1.0 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(d(1, 0), 1.0 / std::sqrt(5.0), 1e-15);
  EXPECT_EQ(d(0, 0), 0.0);
  for (Eigen::Index u = 0; u < m.arity(); ++u)
    for (Eigen::Index v = 0; v < m.arity(); ++v) EXPECT_EQ(m.d2(x, u, v).cwiseAbs().maxCoeff(), 0.0);
  for (Eigen::Index u = 0; u < m.arity(); ++u) {
    const auto [i, j] = m.entry_of(u);
    EXPECT_EQ(m.index_of(i, j), u);
  }
  EXPECT_THROW(WignerModel(0, VarianceProfile::constant(1), gaussian_law()), InputError);
}

TEST(Wigner, EntryVariance) {
  const Eigen::Index n = 100;
  const WignerModel m(n, VarianceProfile::constant(n), gaussian_law());
  const auto xs = mc_map<double>(10000, 9, 1, [&](Rng& r, std::size_t) {
    return m.assemble(m.sample_point(r))(0, 1);
  });
  EXPECT_NEAR(estimate_variance(xs).variance, 0.01, 0.001);
}

TEST(Wigner, ProfileScalesEntries) {
  MatrixXd s = MatrixXd::Constant(3, 3, 1.0);
  s(0, 2) = s(2, 0) = 2.0;
  const WignerModel m(3, VarianceProfile::from_matrix(s), gaussian_law());
  EXPECT_NEAR(m.c1(), 2.0, 1e-15);
  const auto xs = mc_map<double>(20000, 10, 1, [&](Rng& r, std::size_t) { return m.sample_point(r)(m.index_of(0, 2)); });
  EXPECT_NEAR(estimate_variance(xs).variance, 4.0, 0.15);
}

TEST(VarianceProfile, Csv) {
  std::istringstream in("i,j,s\n1,1,1\n1,2,0.5\n2,2,2\n");
  const VarianceProfile p = VarianceProfile::from_csv(in, 2);
  EXPECT_EQ(p.s(1, 0), 0.5);
  EXPECT_EQ(p.lower(), 0.25);
  EXPECT_EQ(p.upper(), 4.0);
  std::istringstream missing("1,1,1\n2,2,1\n");
  EXPECT_THROW(VarianceProfile::from_csv(missing, 2), InputError);
  std::istringstream lower("1,1,1\n2,1,1\n2,2,1\n");
  EXPECT_THROW(VarianceProfile::from_csv(lower, 2), InputError);
}

TEST(CorrGauss, IdentityEntriesAreIid) {
  const CorrGaussModel m(2, CovarianceSpec::identity(4));
  const auto pairs = mc_map<std::array<double, 2>>(100000, 11, 1, [&](Rng& r, std::size_t) {
    const MatrixXd a = m.assemble(m.sample_point(r));
    return std::array<double, 2>{a(0, 0), a(0, 1)};
  });
  std::vector<double> a00, prod;
  for (const auto& p : pairs) {
    a00.push_back(p[0]);
    prod.push_back(p[0] * p[1]);
  }
  EXPECT_NEAR(estimate_variance(a00).variance, 0.5, 0.01);
  const MeanEstimate c = estimate_mean(prod);
  EXPECT_LT(std::abs(c.mean), 3 * c.se);
}

TEST(CorrGauss, EmpiricalCovarianceMatchesSigma) {
  MatrixXd sigma = MatrixXd::Identity(4, 4);
  sigma(0, 1) = sigma(1, 0) = 0.6;
  sigma(2, 3) = sigma(3, 2) = -0.3;
  const CovarianceSpec cov = CovarianceSpec::dense(sigma);
  EXPECT_LT((cov.factor() * cov.factor().transpose() - sigma).cwiseAbs().maxCoeff(), 1e-10);
  const CorrGaussModel m(2, cov);
  const auto prods = mc_map<double>(100000, 12, 1, [&](Rng& r, std::size_t) {
    const VectorXd x = m.sample_point(r);
    return x(0) * x(1);
  });
  const MeanEstimate c = estimate_mean(prods);
  EXPECT_LT(std::abs(c.mean - 0.6), 3 * c.se);
  EXPECT_THROW(CorrGaussModel(3, CovarianceSpec::identity(4)), InputError);
}

TEST(Covariance, RejectsBadMatrices) {
  MatrixXd asym = MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.5;
  EXPECT_THROW(CovarianceSpec::dense(asym), InputError);
  MatrixXd indef = MatrixXd::Identity(2, 2);
  indef(0, 1) = indef(1, 0) = 2.0;
  EXPECT_THROW(CovarianceSpec::dense(indef), InputError);
}

TEST(Covariance, Gershgorin) {
  EXPECT_EQ(gershgorin_bound(CovarianceSpec::identity(9)), 1.0);
  Rng rng = make_rng(13, 0);
  std::normal_distribution<double> nd;
  MatrixXd g(9, 9);
  for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = nd(rng);
  const CovarianceSpec c = CovarianceSpec::dense(g * g.transpose());
  EXPECT_GE(gershgorin_bound(c), c.operator_norm() * (1 - 1e-12));
}

TEST(Toeplitz, InducedCovariance) {
  for (Eigen::Index n : {1, 2, 3, 5, 8}) {
    const CovarianceSpec c = ToeplitzModel(n).induced_covariance();
    const MatrixXd sigma = c.materialize();
    EXPECT_LE(gershgorin_bound(c), 2.0 * n);
    EXPECT_NEAR(gershgorin_bound(c), sigma.cwiseAbs().rowwise().sum().maxCoeff(), 1e-12);
    EXPECT_GE(gershgorin_bound(c), linalg::operator_norm(sigma) * (1 - 1e-12));
    EXPECT_NEAR(c.operator_norm(), linalg::operator_norm(sigma), 1e-9 * std::max<double>(1, n));
    for (Eigen::Index a = 0; a < n * n; ++a)
      for (Eigen::Index b = 0; b < n * n; ++b) {
        const bool same = std::abs(a / n - a % n) == std::abs(b / n - b % n);
        EXPECT_EQ(sigma(a, b), same ? 1.0 : 0.0);
      }
  }
}

TEST(Toeplitz, ConstantAlongDiagonals) {
  const ToeplitzModel m(6);
  Rng rng = make_rng(14, 0);
  const VectorXd x = m.sample_point(rng);
  const MatrixXd a = m.assemble(x);
  EXPECT_EQ((a - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 6; ++j) EXPECT_DOUBLE_EQ(a(i, j), x(std::abs(i - j)) / std::sqrt(6.0));
  const MatrixXd d = m.d1(x, 2);
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 6; ++j) EXPECT_DOUBLE_EQ(d(i, j), std::abs(i - j) == 2 ? 1.0 / std::sqrt(6.0) : 0.0);
}

TEST(Wishart, PsdAndSecondDerivativePattern) {
  const WishartModel m(3, 5, gaussian_law());
  Rng rng = make_rng(15, 0);
  for (int t = 0; t < 20; ++t) {
    const VectorXd x = m.sample_point(rng);
    const MatrixXd a = m.assemble(x);
    EXPECT_EQ((a - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<MatrixXd>(a).eigenvalues()(0), -1e-10);
  }
  const VectorXd x = m.sample_point(rng);
  for (Eigen::Index u = 0; u < m.arity(); ++u)
    for (Eigen::Index v = 0; v < m.arity(); ++v) {
      if (u % 5 != v % 5) EXPECT_EQ(m.d2(x, u, v).cwiseAbs().maxCoeff(), 0.0);
    }
  EXPECT_THROW(WishartModel(4, 3, gaussian_law()), InputError);
}

TEST(DoubleWishart, Structure) {
  const DoubleWishartModel m(2, 3, 4, gaussian_law());
  Rng rng = make_rng(16, 0);
  const VectorXd x = m.sample_point(rng);
  const MatrixXd a = m.assemble(x);
  EXPECT_TRUE(a.allFinite());
  EXPECT_LE(linalg::numerical_rank(a), 2);
  const MatrixXd xm = m.data_x(x), ym = m.data_y(x);
  const MatrixXd direct = xm * xm.transpose() * (ym * ym.transpose()).inverse();
  EXPECT_LT(rel_gap(a, direct), 1e-12);
  // x-x second partials vanish unless the sample columns agree
  for (Eigen::Index u = 0; u < 6; ++u)
    for (Eigen::Index v = 0; v < 6; ++v) {
      if (u % 3 != v % 3) EXPECT_EQ(m.d2(x, u, v).cwiseAbs().maxCoeff(), 0.0);
    }
  EXPECT_THROW(DoubleWishartModel(2, 5, 4, gaussian_law()), InputError);
}

TEST(DoubleWishart, SingularDenominator) {
  const DoubleWishartModel m(2, 2, 2, gaussian_law());
  VectorXd x = VectorXd::Ones(m.arity());
  EXPECT_THROW(m.assemble(x), DegenerateError);
}

TEST(Ensembles, ParseNames) {
  EXPECT_EQ(parse_ensemble("wigner"), EnsembleKind::Wigner);
  EXPECT_EQ(parse_ensemble("corr-gauss"), EnsembleKind::CorrGauss);
  EXPECT_EQ(parse_ensemble("toeplitz"), EnsembleKind::Toeplitz);
  EXPECT_EQ(parse_ensemble("wishart"), EnsembleKind::Wishart);
  EXPECT_EQ(parse_ensemble("double-wishart"), EnsembleKind::DoubleWishart);
  EXPECT_EQ(to_string(EnsembleKind::DoubleWishart), "double-wishart");
  EXPECT_THROW(parse_ensemble("goe"), InputError);
}

}  // namespace
}  // namespace rmclt
