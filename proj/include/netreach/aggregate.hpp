#pragma once

#include <vector>

#include <Eigen/Dense>

#include "netreach/model.hpp"

namespace netreach {

/// Stacked closed-loop matrices of the two network levels.
///
///   followers:  x^f+ = A_f x^f + B_f x^l,   w^f = C_f x^f
///   leaders:    x^l+ = A_l x^l + B_l u,     w^l = C_l x^l
///
/// with A_f = Abar_f + Bbar_f L_ff C_f and B_f = Bbar_f L_lf C_l.
struct AggregateSystem {
  Eigen::MatrixXd A_f;
  Eigen::MatrixXd B_f;
  Eigen::MatrixXd C_f;
  Eigen::MatrixXd A_l;
  Eigen::MatrixXd B_l;
  Eigen::MatrixXd C_l;

  Eigen::MatrixXd Abar_f;
  Eigen::MatrixXd Bbar_f;
  Eigen::MatrixXd L_ff;
  Eigen::MatrixXd L_lf;

  NetworkDims dims;
  BaseInputMode base_input_mode = BaseInputMode::Independent;
};

struct GainSplit {
  Eigen::MatrixXd L_ff;  // m_f x p_f
  Eigen::MatrixXd L_lf;  // m_f x p_l
};

/// Dense m_f x p_bar gain assembled from the sparse blocks.
Eigen::MatrixXd dense_gain(const NetworkSpec& spec);

GainSplit split_gain(const NetworkSpec& spec);

AggregateSystem build_aggregate(const NetworkSpec& spec);

Eigen::MatrixXd block_diagonal(const std::vector<Eigen::MatrixXd>& blocks);

/// Per-step states and outputs. Column t holds the stacked follower then
/// leader vectors at step t; times runs 0..T.
struct Trajectory {
  std::vector<int> times;
  Eigen::MatrixXd states;
  Eigen::MatrixXd outputs;

  int steps() const { return static_cast<int>(times.size()) - 1; }
};

/// Iterates every subsystem with v^i = sum_j L_ij w^j (followers) and the
/// base command (leaders). x0 stacks all subsystem states in network order;
/// u has one column per step (m_base rows, at least T columns).
Trajectory simulate_subsystem_level(const NetworkSpec& spec,
                                    const Eigen::VectorXd& x0,
                                    const Eigen::MatrixXd& u, int steps);

Trajectory simulate_aggregate(const AggregateSystem& agg,
                              const Eigen::VectorXd& x0_f,
                              const Eigen::VectorXd& x0_l,
                              const Eigen::MatrixXd& u, int steps);

}  // namespace netreach
