#pragma once

#include <optional>

#include <Eigen/Dense>

#include "netreach/aggregate.hpp"
#include "netreach/model.hpp"
#include "netreach/reach.hpp"

namespace netreach {

/// Serial connection base -> leaders -> followers:
///
///   [x^f]+   [A_f  B_f] [x^f]   [ 0 ]
///   [x^l]  = [ 0   A_l] [x^l] + [B_l] u
struct CascadeSystem {
  Eigen::MatrixXd A_c;
  Eigen::MatrixXd B_c;
  Eigen::MatrixXd C_c;  // blkdiag(C_f, C_l)
  Eigen::MatrixXd P_f;  // [I 0], picks the follower block
  int n_f = 0;
  int n_l = 0;

  int state_dim() const { return n_f + n_l; }
  int input_dim() const { return static_cast<int>(B_c.cols()); }
};

CascadeSystem build_cascade(const AggregateSystem& agg);

/// Columns (A^{T-1} B, ..., A B, B) so that x_T = A^T x_0 + map * vec(u)
/// with vec(u) = (u_0; u_1; ...; u_{T-1}).
Eigen::MatrixXd steering_map(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                             int steps);

/// Row rank of P_f times the cascade controllability matrix. The rank is
/// taken with A_c divided by max(1, spectral radius), which rescales each
/// Krylov block and leaves the exact rank alone; singular values in the
/// report refer to that rescaled matrix.
ReachabilityReport follower_steerable(const CascadeSystem& cascade,
                                      double tol = kDefaultTolerance);

/// Row rank of the projected T-step steering map.
ReachabilityReport follower_steerable_at(const CascadeSystem& cascade, int steps,
                                         double tol = kDefaultTolerance);

/// Shortest horizon at which follower_steerable_at holds, by bisection on
/// [1, state_dim]. Empty when not steerable at all.
std::optional<int> min_feasible_horizon(const CascadeSystem& cascade,
                                        double tol = kDefaultTolerance);

struct SteeringPlan {
  int horizon = 0;
  Eigen::MatrixXd inputs;  // m_base x T, column t = u_t
  Trajectory predicted;
  Eigen::VectorXd x0;      // full cascade state
  Eigen::VectorXd target;  // follower block
  double achieved_error = 0.0;
  double energy = 0.0;  // sum_t ||u_t||^2
  int projected_rank = 0;
};

/// Minimum-norm input sequence with P_f x_T = target, from the SVD
/// pseudo-inverse of the projected steering map. Throws HorizonTooShort if
/// that map has row rank below n_f.
SteeringPlan min_energy_steer(const CascadeSystem& cascade, const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& target, int steps,
                              double tol = kDefaultTolerance);

/// Orthonormal basis of the null space of P_f * steering_map(T).
Eigen::MatrixXd projected_null_space(const CascadeSystem& cascade, int steps,
                                     double tol = kDefaultTolerance);

/// Runs the cascade forward from x0 under the given inputs.
Trajectory simulate_cascade(const CascadeSystem& cascade, const Eigen::VectorXd& x0,
                            const Eigen::MatrixXd& inputs);

struct PlanVerification {
  double resimulated_error = 0.0;
  double energy_recomputed = 0.0;
  bool consistent = false;  // |resimulated - achieved| <= 1e-9
};

/// Replays the plan through simulate_subsystem_level, independently of the
/// aggregate and the cascade.
PlanVerification verify_plan(const NetworkSpec& spec, const SteeringPlan& plan);

}  // namespace netreach
