#include "netreach/aggregate.hpp"

#include "netreach/errors.hpp"

namespace netreach {

Eigen::MatrixXd block_diagonal(const std::vector<Eigen::MatrixXd>& blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

namespace {

// Row offsets of each follower's input slice and column offsets of each
// subsystem's output slice inside the dense gain.
struct GainOffsets {
  std::vector<Eigen::Index> row;
  std::vector<Eigen::Index> col;
};

GainOffsets gain_offsets(const NetworkSpec& spec) {
  GainOffsets off;
  Eigen::Index r = 0, c = 0;
  for (const auto& s : spec.subsystems) {
    off.col.push_back(c);
    c += s.p();
    off.row.push_back(r);
    if (s.role == Role::Follower) r += s.m();
  }
  return off;
}

}  // namespace

Eigen::MatrixXd dense_gain(const NetworkSpec& spec) {
  const NetworkDims dims = compute_dims(spec);
  const GainOffsets off = gain_offsets(spec);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(dims.m_f, dims.p_bar);
  for (const auto& [key, block] : spec.gains.blocks()) {
    const auto [to, from] = key;
    if (block.rows() != spec.subsystem(to).m() || block.cols() != spec.subsystem(from).p()) {
      throw DimensionMismatch("gain block (" + std::to_string(to) + ", " +
                              std::to_string(from) + ") has the wrong shape");
    }
    L.block(off.row[to - 1], off.col[from - 1], block.rows(), block.cols()) = block;
  }
  return L;
}

GainSplit split_gain(const NetworkSpec& spec) {
  const NetworkDims dims = compute_dims(spec);
  const Eigen::MatrixXd L = dense_gain(spec);
  return {L.leftCols(dims.p_f), L.rightCols(dims.p_l)};
}

AggregateSystem build_aggregate(const NetworkSpec& spec) {
  std::vector<Eigen::MatrixXd> fA, fB, fC, lA, lB, lC;
  for (const auto& s : spec.subsystems) {
    if (s.B.rows() != s.A.rows() || s.C.cols() != s.A.rows() || s.A.rows() != s.A.cols()) {
      throw DimensionMismatch("subsystem " + std::to_string(s.id) +
                              " has inconsistent dimensions");
    }
    auto& A = s.role == Role::Follower ? fA : lA;
    auto& B = s.role == Role::Follower ? fB : lB;
    auto& C = s.role == Role::Follower ? fC : lC;
    A.push_back(s.A);
    B.push_back(s.B);
    C.push_back(s.C);
  }

  AggregateSystem agg;
  agg.dims = compute_dims(spec);
  agg.base_input_mode = spec.base_input_mode;
  agg.Abar_f = block_diagonal(fA);
  agg.Bbar_f = block_diagonal(fB);
  agg.C_f = block_diagonal(fC);
  agg.A_l = block_diagonal(lA);
  agg.C_l = block_diagonal(lC);

  if (spec.base_input_mode == BaseInputMode::Independent) {
    agg.B_l = block_diagonal(lB);
  } else {
    const Eigen::Index m = lB.empty() ? 0 : lB.front().cols();
    agg.B_l.resize(agg.dims.n_l, m);
    Eigen::Index r = 0;
    for (const auto& b : lB) {
      if (b.cols() != m) {
        throw DimensionMismatch("shared base input requires equal leader input dimensions");
      }
      agg.B_l.middleRows(r, b.rows()) = b;
      r += b.rows();
    }
  }

  const GainSplit split = split_gain(spec);
  agg.L_ff = split.L_ff;
  agg.L_lf = split.L_lf;
  agg.A_f = agg.Abar_f + agg.Bbar_f * agg.L_ff * agg.C_f;
  agg.B_f = agg.Bbar_f * agg.L_lf * agg.C_l;
  return agg;
}

Trajectory simulate_subsystem_level(const NetworkSpec& spec, const Eigen::VectorXd& x0,
                                    const Eigen::MatrixXd& u, int steps) {
  const NetworkDims dims = compute_dims(spec);
  const int n = dims.n_f + dims.n_l;
  if (steps < 0) throw DimensionMismatch("horizon must be nonnegative");
  if (x0.size() != n) {
    throw DimensionMismatch("x0 has " + std::to_string(x0.size()) + " entries, expected " +
                            std::to_string(n));
  }
  if (steps > 0 && (u.rows() != dims.m_base || u.cols() < steps)) {
    throw DimensionMismatch("input sequence must be " + std::to_string(dims.m_base) +
                            " x T with T >= " + std::to_string(steps));
  }

  const int N = spec.size();
  std::vector<Eigen::VectorXd> x(N), w(N);
  std::vector<Eigen::Index> state_offset(N), output_offset(N), input_offset(N);
  Eigen::Index so = 0, oo = 0, io = 0;
  for (int k = 0; k < N; ++k) {
    const auto& s = spec.subsystems[k];
    state_offset[k] = so;
    output_offset[k] = oo;
    input_offset[k] = io;
    x[k] = x0.segment(so, s.n());
    so += s.n();
    oo += s.p();
    if (s.role == Role::Leader && spec.base_input_mode == BaseInputMode::Independent) {
      io += s.m();
    }
  }

  Trajectory traj;
  traj.states.resize(n, steps + 1);
  traj.outputs.resize(dims.p_bar, steps + 1);
  auto record = [&](int t) {
    traj.times.push_back(t);
    for (int k = 0; k < N; ++k) {
      const auto& s = spec.subsystems[k];
      w[k] = s.C * x[k];
      traj.states.col(t).segment(state_offset[k], s.n()) = x[k];
      traj.outputs.col(t).segment(output_offset[k], s.p()) = w[k];
    }
  };

  record(0);
  for (int t = 0; t < steps; ++t) {
    std::vector<Eigen::VectorXd> next(N);
    for (int i = 0; i < N; ++i) {
      const auto& s = spec.subsystems[i];
      Eigen::VectorXd v;
      if (s.role == Role::Follower) {
        v = Eigen::VectorXd::Zero(s.m());
        for (int j = 0; j < N; ++j) {
          if (const auto* L = spec.gains.find(i + 1, j + 1)) v += *L * w[j];
        }
      } else if (spec.base_input_mode == BaseInputMode::Independent) {
        v = u.col(t).segment(input_offset[i], s.m());
      } else {
        v = u.col(t);
      }
      next[i] = s.A * x[i] + s.B * v;
    }
    x = std::move(next);
    record(t + 1);
  }
  return traj;
}

Trajectory simulate_aggregate(const AggregateSystem& agg, const Eigen::VectorXd& x0_f,
                              const Eigen::VectorXd& x0_l, const Eigen::MatrixXd& u,
                              int steps) {
  const auto& d = agg.dims;
  if (steps < 0) throw DimensionMismatch("horizon must be nonnegative");
  if (x0_f.size() != d.n_f || x0_l.size() != d.n_l) {
    throw DimensionMismatch("initial state dimensions do not match the aggregate");
  }
  if (steps > 0 && (u.rows() != agg.B_l.cols() || u.cols() < steps)) {
    throw DimensionMismatch("input sequence must be " + std::to_string(agg.B_l.cols()) +
                            " x T with T >= " + std::to_string(steps));
  }

  Trajectory traj;
  traj.states.resize(d.n_f + d.n_l, steps + 1);
  traj.outputs.resize(d.p_bar, steps + 1);
  Eigen::VectorXd xf = x0_f, xl = x0_l;
  for (int t = 0;; ++t) {
    traj.times.push_back(t);
    traj.states.col(t) << xf, xl;
    traj.outputs.col(t) << agg.C_f * xf, agg.C_l * xl;
    if (t == steps) break;
    Eigen::VectorXd xf_next = agg.A_f * xf + agg.B_f * xl;
    xl = agg.A_l * xl + agg.B_l * u.col(t);
    xf = std::move(xf_next);
  }
  return traj;
}

}  // namespace netreach
