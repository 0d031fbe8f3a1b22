#include "netreach/synth.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "netreach/errors.hpp"

namespace netreach {

CascadeSystem build_cascade(const AggregateSystem& agg) {
  const int n_f = agg.dims.n_f;
  const int n_l = agg.dims.n_l;
  if (n_f < 1 || n_l < 1) {
    throw DimensionMismatch("cascade needs at least one follower and one leader state");
  }
  const int n = n_f + n_l;
  const Eigen::Index m = agg.B_l.cols();

  CascadeSystem c;
  c.n_f = n_f;
  c.n_l = n_l;
  c.A_c = Eigen::MatrixXd::Zero(n, n);
  c.A_c.topLeftCorner(n_f, n_f) = agg.A_f;
  c.A_c.topRightCorner(n_f, n_l) = agg.B_f;
  c.A_c.bottomRightCorner(n_l, n_l) = agg.A_l;
  c.B_c = Eigen::MatrixXd::Zero(n, m);
  c.B_c.bottomRows(n_l) = agg.B_l;
  c.C_c = block_diagonal({agg.C_f, agg.C_l});
  c.P_f = Eigen::MatrixXd::Zero(n_f, n);
  c.P_f.leftCols(n_f).setIdentity();
  return c;
}

Eigen::MatrixXd steering_map(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int steps) {
  if (steps < 1) throw DimensionMismatch("steering horizon must be >= 1");
  if (A.rows() != A.cols() || B.rows() != A.rows()) {
    throw DimensionMismatch("steering map needs square A and matching B");
  }
  const Eigen::Index m = B.cols();
  Eigen::MatrixXd map(A.rows(), steps * m);
  // Block k multiplies u_k and equals A^{T-1-k} B; fill from the last block.
  map.rightCols(m) = B;
  for (int k = steps - 2; k >= 0; --k) {
    map.middleCols(k * m, m) = A * map.middleCols((k + 1) * m, m);
  }
  return map;
}

namespace {

ReachabilityReport projected_report(const Eigen::MatrixXd& M, int n_f, double tol) {
  const RankResult r = numerical_rank(M, tol);
  ReachabilityReport rep;
  rep.method = Method::KalmanRank;
  rep.rank = r.rank;
  rep.state_dim = n_f;
  rep.singular_values = r.singular_values;
  rep.tolerance = tol;
  rep.verdict = r.rank == n_f ? Verdict::Reachable : Verdict::Unreachable;
  return rep;
}

// Rank decisions use the Krylov matrix of (A_c / s, B_c) with
// s = max(1, spectral radius). Each block A^k B is only multiplied by
// s^{-k}, so the exact rank is unchanged, but the top block no longer
// swamps the others when A_c has eigenvalues far outside the unit disk.
ReachabilityReport decide(const CascadeSystem& cascade, int steps, double tol) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(cascade.A_c, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
  const double s = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  const Eigen::MatrixXd A = cascade.A_c / s;
  return projected_report(cascade.P_f * steering_map(A, cascade.B_c, steps), cascade.n_f, tol);
}

Eigen::VectorXd matrix_power_times(const Eigen::MatrixXd& A, Eigen::VectorXd x, int k) {
  for (int i = 0; i < k; ++i) x = A * x;
  return x;
}

}  // namespace

ReachabilityReport follower_steerable(const CascadeSystem& cascade, double tol) {
  return decide(cascade, cascade.state_dim(), tol);
}

ReachabilityReport follower_steerable_at(const CascadeSystem& cascade, int steps, double tol) {
  if (steps < 1) throw DimensionMismatch("steering horizon must be >= 1");
  return decide(cascade, steps, tol);
}

std::optional<int> min_feasible_horizon(const CascadeSystem& cascade, double tol) {
  int hi = cascade.state_dim();
  if (!follower_steerable_at(cascade, hi, tol).reachable()) return std::nullopt;
  int lo = 1;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (follower_steerable_at(cascade, mid, tol).reachable()) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

Trajectory simulate_cascade(const CascadeSystem& cascade, const Eigen::VectorXd& x0,
                            const Eigen::MatrixXd& inputs) {
  if (x0.size() != cascade.state_dim() || inputs.rows() != cascade.input_dim()) {
    throw DimensionMismatch("cascade simulation dimensions do not match");
  }
  const int steps = static_cast<int>(inputs.cols());
  Trajectory traj;
  traj.states.resize(cascade.state_dim(), steps + 1);
  traj.outputs.resize(cascade.C_c.rows(), steps + 1);
  Eigen::VectorXd x = x0;
  for (int t = 0;; ++t) {
    traj.times.push_back(t);
    traj.states.col(t) = x;
    traj.outputs.col(t) = cascade.C_c * x;
    if (t == steps) break;
    x = cascade.A_c * x + cascade.B_c * inputs.col(t);
  }
  return traj;
}

SteeringPlan min_energy_steer(const CascadeSystem& cascade, const Eigen::VectorXd& x0,
                              const Eigen::VectorXd& target, int steps, double tol) {
  if (steps < 1) throw DimensionMismatch("steering horizon must be >= 1");
  if (x0.size() != cascade.state_dim()) {
    throw DimensionMismatch("x0 must have " + std::to_string(cascade.state_dim()) + " entries");
  }
  if (target.size() != cascade.n_f) {
    throw DimensionMismatch("target must have " + std::to_string(cascade.n_f) + " entries");
  }
  if (!x0.allFinite() || !target.allFinite()) throw NumericalFailure("non-finite x0 or target");

  const Eigen::MatrixXd M = cascade.P_f * steering_map(cascade.A_c, cascade.B_c, steps);
  const Eigen::VectorXd free = cascade.P_f * matrix_power_times(cascade.A_c, x0, steps);
  const Eigen::VectorXd rhs = target - free;

  const ReachabilityReport feasible = decide(cascade, steps, tol);
  if (!feasible.reachable()) {
    throw HorizonTooShort("projected steering map has rank " + std::to_string(feasible.rank) +
                              " < " + std::to_string(cascade.n_f) + " at horizon " +
                              std::to_string(steps),
                          steps, feasible.rank, cascade.n_f);
  }

  // Full row rank is established, so the pseudo-inverse keeps all n_f
  // singular values of the unscaled map.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  if (!sv.allFinite()) throw NumericalFailure("SVD of the steering map failed");
  const int rank = cascade.n_f;
  if (!(sv(rank - 1) > 0.0)) throw NumericalFailure("steering map lost rank in the SVD");

  const Eigen::MatrixXd U = svd.matrixU().leftCols(rank);
  const Eigen::MatrixXd V = svd.matrixV().leftCols(rank);
  const Eigen::VectorXd coeffs =
      (U.transpose() * rhs).cwiseQuotient(sv.head(rank));
  const Eigen::VectorXd u = V * coeffs;

  SteeringPlan plan;
  plan.horizon = steps;
  const Eigen::Index m = cascade.input_dim();
  plan.inputs = Eigen::Map<const Eigen::MatrixXd>(u.data(), m, steps);
  plan.x0 = x0;
  plan.target = target;
  plan.predicted = simulate_cascade(cascade, x0, plan.inputs);
  plan.achieved_error =
      (cascade.P_f * plan.predicted.states.col(steps) - target).norm();
  plan.energy = u.squaredNorm();
  plan.projected_rank = rank;
  return plan;
}

Eigen::MatrixXd projected_null_space(const CascadeSystem& cascade, int steps, double tol) {
  const Eigen::MatrixXd M = cascade.P_f * steering_map(cascade.A_c, cascade.B_c, steps);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const int rank = decide(cascade, steps, tol).rank;
  return svd.matrixV().rightCols(M.cols() - rank);
}

PlanVerification verify_plan(const NetworkSpec& spec, const SteeringPlan& plan) {
  const NetworkDims dims = compute_dims(spec);
  if (plan.x0.size() != dims.n_f + dims.n_l || plan.target.size() != dims.n_f ||
      plan.inputs.rows() != dims.m_base || plan.inputs.cols() != plan.horizon) {
    throw DimensionMismatch("plan dimensions do not match the network");
  }
  const Trajectory traj =
      simulate_subsystem_level(spec, plan.x0, plan.inputs, plan.horizon);
  PlanVerification out;
  out.resimulated_error =
      (traj.states.col(plan.horizon).head(dims.n_f) - plan.target).norm();
  out.energy_recomputed = plan.inputs.squaredNorm();
  out.consistent = std::abs(out.resimulated_error - plan.achieved_error) <= 1e-9;
  return out;
}

}  // namespace netreach
