#include "netreach/reach.hpp"

#include <random>

#include <gtest/gtest.h>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"
#include "netreach/errors.hpp"
#include "netreach/fixtures.hpp"

namespace netreach {
namespace {

Eigen::MatrixXd from_columns(const oracle::Dense& cols) {
  Eigen::MatrixXd M(cols.front().size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < cols[c].size(); ++r) M(r, c) = cols[c][r];
  return M;
}

GTEST_TEST(ControllabilityMatrix, ZeroStateMatrix) {
  const Eigen::MatrixXd R =
      controllability_matrix(Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Identity(3, 3));
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 9);
  expected.leftCols(3).setIdentity();
  EXPECT_EQ(R, expected);
}

GTEST_TEST(ControllabilityMatrix, StarMatchesOracle) {
  const oracle::Dense A_f = {{0.2, 1, 1}, {2, 0.2, 2}, {3, 3, 0.2}};
  const Eigen::MatrixXd expected = from_columns(oracle::krylov_columns(A_f, {1, 0, 0}));
  // Frozen oracle output.
  EXPECT_NEAR(expected(0, 2), 5.04, 1e-14);
  EXPECT_NEAR(expected(1, 2), 6.8, 1e-14);
  EXPECT_NEAR(expected(2, 2), 7.2, 1e-14);
  const AggregateSystem agg = build_aggregate(fixtures::star());
  EXPECT_LE((controllability_matrix(agg.A_f, agg.B_f) - expected).cwiseAbs().maxCoeff(), 1e-14);
}

GTEST_TEST(ControllabilityMatrix, CirculantMatchesOracle) {
  const oracle::Dense A_f = {{0.2, 1, 0.5}, {0.5, 0.2, 1}, {1, 0.5, 0.2}};
  const Eigen::MatrixXd expected = from_columns(oracle::krylov_columns(A_f, {1, 0, 0}));
  EXPECT_NEAR(expected(0, 1), 0.2, 1e-14);
  EXPECT_NEAR(expected(1, 1), 0.5, 1e-14);
  EXPECT_NEAR(expected(2, 1), 1.0, 1e-14);
  EXPECT_NEAR(expected(0, 2), 1.04, 1e-14);
  EXPECT_NEAR(expected(1, 2), 1.2, 1e-14);
  EXPECT_NEAR(expected(2, 2), 0.65, 1e-14);
  const AggregateSystem agg = build_aggregate(fixtures::circulant());
  EXPECT_LE((controllability_matrix(agg.A_f, agg.B_f) - expected).cwiseAbs().maxCoeff(), 1e-14);
}

GTEST_TEST(ControllabilityMatrix, DimensionMismatch) {
  EXPECT_THROW(controllability_matrix(Eigen::MatrixXd::Zero(2, 3), Eigen::MatrixXd::Zero(2, 1)),
               DimensionMismatch);
  EXPECT_THROW(controllability_matrix(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 1)),
               DimensionMismatch);
}

GTEST_TEST(NumericalRank, Basics) {
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd::Zero(3, 4)).rank, 0);
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd::Identity(5, 5)).rank, 5);
  EXPECT_EQ(numerical_rank(Eigen::Vector2d(1, 1e-14).asDiagonal().toDenseMatrix(), 1e-10).rank, 1);
  const RankResult r = numerical_rank(Eigen::Vector3d(3, 1, 2).asDiagonal().toDenseMatrix());
  EXPECT_EQ(r.singular_values, (std::vector<double>{3, 2, 1}));
}

GTEST_TEST(NumericalRank, ThresholdScalesWithLargestSingularValue) {
  // 1e-9 clears the absolute floor but not 1e-10 * 1e2.
  const Eigen::MatrixXd M = Eigen::Vector2d(1e2, 1e-9).asDiagonal();
  EXPECT_EQ(numerical_rank(M, 1e-10).rank, 1);
  const Eigen::MatrixXd small = Eigen::Vector2d(1e-3, 1e-9).asDiagonal();
  EXPECT_EQ(numerical_rank(small, 1e-10).rank, 2);
}

GTEST_TEST(NumericalRank, NonFiniteIsNumericalFailure) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(2, 2);
  M(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(numerical_rank(M), NumericalFailure);
}

GTEST_TEST(LeaderReachability, Star) {
  const AggregateSystem agg = build_aggregate(fixtures::star());
  const ReachabilityReport r = is_leader_reachable(agg);
  EXPECT_TRUE(r.reachable());
  EXPECT_EQ(r.rank, 3);
  const oracle::Dense A_f = {{0.2, 1, 1}, {2, 0.2, 2}, {3, 3, 0.2}};
  EXPECT_NEAR(oracle::cofactor_det(oracle::transpose(oracle::krylov_columns(A_f, {1, 0, 0}))),
              -6.0, 1e-12);
}

GTEST_TEST(LeaderReachability, Circulant) {
  const AggregateSystem agg = build_aggregate(fixtures::circulant());
  EXPECT_TRUE(is_leader_reachable(agg).reachable());
  const oracle::Dense A_f = {{0.2, 1, 0.5}, {0.5, 0.2, 1}, {1, 0.5, 0.2}};
  EXPECT_NEAR(oracle::cofactor_det(oracle::transpose(oracle::krylov_columns(A_f, {1, 0, 0}))),
              -0.875, 1e-12);
}

GTEST_TEST(LeaderReachability, ZeroInputMatrix) {
  AggregateSystem agg = build_aggregate(fixtures::star());
  agg.B_f.setZero();
  for (Method m : {Method::KalmanRank, Method::PBH, Method::Gramian}) {
    const ReachabilityReport r = is_leader_reachable(agg, kDefaultTolerance, m);
    EXPECT_FALSE(r.reachable()) << to_string(m);
    if (m != Method::PBH) {
      EXPECT_EQ(r.rank, 0);
    }
  }
}

GTEST_TEST(BaseReachability, ScalarLeader) {
  EXPECT_TRUE(is_base_reachable(build_aggregate(fixtures::star())).reachable());
}

GTEST_TEST(BaseReachability, IndependentVsSharedLeaders) {
  NetworkSpec spec = fixtures::star();
  SubsystemModel second = spec.subsystems[3];
  second.id = 5;
  spec.subsystems.push_back(second);
  const ReachabilityReport independent = is_base_reachable(build_aggregate(spec));
  EXPECT_TRUE(independent.reachable());
  EXPECT_EQ(independent.rank, 2);

  spec.base_input_mode = BaseInputMode::Shared;
  const AggregateSystem shared = build_aggregate(spec);
  // Oracle: R_b = [[1, 0.2], [1, 0.2]] has two identical rows.
  EXPECT_EQ(oracle::cofactor_det({{1, 0.2}, {1, 0.2}}), 0.0);
  const ReachabilityReport r = is_base_reachable(shared);
  EXPECT_FALSE(r.reachable());
  EXPECT_EQ(r.rank, 1);
}

GTEST_TEST(PBH, IdentityInputIsReachable) {
  const ReachabilityReport r =
      pbh_test(Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Identity(3, 3));
  EXPECT_TRUE(r.reachable());
  EXPECT_FALSE(r.witness.has_value());
}

GTEST_TEST(PBH, RepeatedEigenvalueSingleInput) {
  const ReachabilityReport r = pbh_test(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1, 1));
  EXPECT_FALSE(r.reachable());
  ASSERT_TRUE(r.witness.has_value());
  const Eigen::VectorXcd& w = *r.witness;
  // Witness lies in span{(1, -1)}.
  EXPECT_NEAR(std::abs(w(0) + w(1)), 0.0, 1e-12);
  EXPECT_NEAR(w.norm(), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(w.dot(Eigen::Vector2cd(1, 1))), 0.0, 1e-12);
}

GTEST_TEST(PBH, WitnessIsLeftEigenvectorOrthogonalToB) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4;
    Eigen::MatrixXd A = testing::gaussian(rng, n, n);
    A.bottomLeftCorner(2, 2).setZero();
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, 2);
    B.topRows(2) = testing::gaussian(rng, 2, 2);
    const ReachabilityReport r = pbh_test(A, B);
    ASSERT_FALSE(r.reachable());
    ASSERT_TRUE(r.witness && r.witness_eigenvalue);
    const Eigen::VectorXcd& nu = *r.witness;
    const Eigen::MatrixXcd Ac = A.cast<std::complex<double>>();
    EXPECT_LE((nu.adjoint() * Ac - *r.witness_eigenvalue * nu.adjoint()).norm(), 1e-10);
    EXPECT_LE((nu.adjoint() * B.cast<std::complex<double>>()).norm(), 1e-10);
  }
}

GTEST_TEST(PBH, AgreesWithKalmanOnStar) {
  const AggregateSystem agg = build_aggregate(fixtures::star());
  EXPECT_EQ(pbh_test(agg.A_f, agg.B_f).verdict, kalman_test(agg.A_f, agg.B_f).verdict);
  EXPECT_TRUE(pbh_test(agg.A_f, agg.B_f).reachable());
}

GTEST_TEST(Gramian, Basics) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd A = testing::gaussian(rng, 3, 3);
  const Eigen::MatrixXd B = testing::gaussian(rng, 3, 2);
  EXPECT_LE((reachability_gramian(A, B, 1) - B * B.transpose()).norm(), 1e-15);
  for (int T : {1, 2, 7}) {
    EXPECT_EQ(reachability_gramian(Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Identity(3, 3), T),
              Eigen::MatrixXd::Identity(3, 3));
  }
  const Eigen::MatrixXd W = reachability_gramian(A, B, 5);
  EXPECT_EQ(W, W.transpose());
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(W).eigenvalues().minCoeff(), -1e-12);
  EXPECT_THROW(reachability_gramian(A, B, 0), DimensionMismatch);
  const Eigen::MatrixXd L = gramian_factor(A, B, 5);
  EXPECT_LE((L * L.transpose() - W).norm(), 1e-12 * W.norm());
  EXPECT_TRUE(L.isLowerTriangular());
}

GTEST_TEST(Gramian, FactorKeepsSmallDirections) {
  // sigma_min of the controllability matrix is about 1e-7, so the Gramian
  // eigenvalue is about 1e-14: invisible to a 1e-10 rank rule on W itself.
  Eigen::Matrix2d A;
  A << 1, 1e-7, 0, 1;
  const Eigen::Vector2d B(0, 1);
  EXPECT_TRUE(kalman_test(A, B).reachable());
  EXPECT_TRUE(gramian_test(A, B).reachable());
  EXPECT_EQ(numerical_rank(reachability_gramian(A, B, 2)).rank, 1);
}

GTEST_TEST(Gramian, StarRankMatchesKalman) {
  const AggregateSystem agg = build_aggregate(fixtures::star());
  const Eigen::MatrixXd W = reachability_gramian(agg.A_f, agg.B_f, 3);
  EXPECT_EQ(numerical_rank(W).rank, 3);
  EXPECT_EQ(numerical_rank(W).rank, kalman_test(agg.A_f, agg.B_f).rank);
}

GTEST_TEST(Properties, MethodAgreementSmallEnsemble) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = testing::random_pair(rng, 8, 3);
    const Verdict k = kalman_test(inst.A, inst.B).verdict;
    EXPECT_EQ(pbh_test(inst.A, inst.B).verdict, k) << "trial " << trial;
    EXPECT_EQ(gramian_test(inst.A, inst.B).verdict, k) << "trial " << trial;
    if (inst.constructed_unreachable) {
      EXPECT_EQ(k, Verdict::Unreachable);
    }
  }
}

GTEST_TEST(Properties, CayleyHamiltonSaturation) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = testing::random_pair(rng, 8, 3);
    const int n = static_cast<int>(inst.A.rows());
    const int base = numerical_rank(controllability_matrix(inst.A, inst.B)).rank;
    const int extended = numerical_rank(krylov_matrix(inst.A, inst.B, 2 * n)).rank;
    EXPECT_LE(extended, base) << "trial " << trial;
  }
}

GTEST_TEST(Properties, SimilarityInvariance) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = testing::random_pair(rng, 6, 2);
    const int n = static_cast<int>(inst.A.rows());
    const Eigen::MatrixXd S = testing::random_conditioned(rng, n, 1e3);
    const Eigen::MatrixXd A2 = S * inst.A * S.inverse();
    const Eigen::MatrixXd B2 = S * inst.B;
    for (Method m : {Method::KalmanRank, Method::PBH, Method::Gramian}) {
      EXPECT_EQ(test_reachability(A2, B2, m).verdict, test_reachability(inst.A, inst.B, m).verdict)
          << "trial " << trial << " " << to_string(m);
    }
  }
}

GTEST_TEST(Properties, ZeroInputDegeneracy) {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 6; ++n) {
    const Eigen::MatrixXd A = testing::gaussian(rng, n, n);
    const Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, 2);
    for (Method m : {Method::KalmanRank, Method::PBH, Method::Gramian}) {
      EXPECT_FALSE(test_reachability(A, B, m).reachable()) << n << " " << to_string(m);
    }
  }
}

}  // namespace
}  // namespace netreach
