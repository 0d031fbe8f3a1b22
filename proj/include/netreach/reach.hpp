#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "netreach/aggregate.hpp"

namespace netreach {

inline constexpr double kDefaultTolerance = 1e-10;

enum class Verdict { Reachable, Unreachable };
enum class Method { KalmanRank, PBH, Gramian };

const char* to_string(Verdict verdict);
const char* to_string(Method method);

struct RankResult {
  int rank = 0;
  std::vector<double> singular_values;  // descending
};

/// rank = #{ sigma_k > tol * max(1, sigma_1) } from a full SVD.
/// Throws NumericalFailure on non-finite input or SVD output.
RankResult numerical_rank(const Eigen::MatrixXd& M, double tol = kDefaultTolerance);

struct ReachabilityReport {
  Verdict verdict = Verdict::Unreachable;
  Method method = Method::KalmanRank;
  int rank = 0;
  int state_dim = 0;
  std::vector<double> singular_values;
  double tolerance = kDefaultTolerance;
  // PBH only: a left eigenvector nu with nu^H A = lambda nu^H and nu^H B ~ 0.
  std::optional<Eigen::VectorXcd> witness;
  std::optional<std::complex<double>> witness_eigenvalue;

  bool reachable() const { return verdict == Verdict::Reachable; }
};

/// (B, AB, ..., A^{n-1} B), powers by repeated multiplication.
Eigen::MatrixXd controllability_matrix(const Eigen::MatrixXd& A,
                                       const Eigen::MatrixXd& B);

/// (B, AB, ..., A^{blocks-1} B).
Eigen::MatrixXd krylov_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                              int blocks);

/// sum_{t<T} A^t B B^T (A^T)^t
Eigen::MatrixXd reachability_gramian(const Eigen::MatrixXd& A,
                                     const Eigen::MatrixXd& B, int steps);

ReachabilityReport kalman_test(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               double tol = kDefaultTolerance);

/// Eigenvector test. For every eigenvalue lambda of A the pencil
/// [lambda I - A, B] must have full row rank; a deficient pencil yields the
/// left null vector as witness. Repeated eigenvalues are covered because
/// the whole left eigenspace is probed at once.
ReachabilityReport pbh_test(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                            double tol = kDefaultTolerance);

/// Lower-triangular L with L L^T = reachability_gramian(A, B, steps),
/// built by the square-root recursion L_{t+1} = tri([A L_t, B]) so that
/// small Gramian eigenvalues are not lost to squaring.
Eigen::MatrixXd gramian_factor(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               int steps);

/// Rank of the n-step Gramian, read off its square-root factor. The
/// reported singular values are those of the factor, i.e. the square roots
/// of the Gramian eigenvalues.
ReachabilityReport gramian_test(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                double tol = kDefaultTolerance);

ReachabilityReport test_reachability(const Eigen::MatrixXd& A,
                                     const Eigen::MatrixXd& B, Method method,
                                     double tol = kDefaultTolerance);

/// Rank test on (A_f, B_f): leader states as the follower input.
ReachabilityReport is_leader_reachable(const AggregateSystem& agg,
                                       double tol = kDefaultTolerance,
                                       Method method = Method::KalmanRank);

/// Rank test on (A_l, B_l): base command as the leader input.
ReachabilityReport is_base_reachable(const AggregateSystem& agg,
                                     double tol = kDefaultTolerance,
                                     Method method = Method::KalmanRank);

}  // namespace netreach
