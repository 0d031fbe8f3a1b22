#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "netreach/model.hpp"
#include "netreach/reach.hpp"

namespace netreach {

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  bool leader = false;
  bool base = false;
  bool cascade = false;
  double margin = 0.0;  // sigma_{n_f}(R_l) / sigma_1(R_l)
};

/// Monte-Carlo evidence that leader-, base- and cascade reachability hold
/// for randomly drawn parameters.
struct GenericityReport {
  int trials = 0;
  int leader_reachable = 0;
  int base_reachable = 0;
  int cascade_reachable = 0;
  double min_margin = 0.0;
  std::uint64_t seed = 0;
  double tolerance = kDefaultTolerance;
  DimensionProfile profile;
  std::vector<TrialRecord> records;

  // Trials where at least one property failed.
  std::vector<TrialRecord> failures() const;
};

/// Seed of trial `trial` in an experiment seeded by `seed`. Trials only
/// depend on this value, so any execution order gives the same report.
std::uint64_t trial_seed(std::uint64_t seed, int trial);

/// sigma_{n_f} / sigma_1 of the leader controllability matrix, 0 when it
/// has fewer than n_f nonzero singular values.
double leader_margin(const NetworkSpec& spec);

GenericityReport genericity_experiment(const DimensionProfile& profile, int trials,
                                       std::uint64_t seed,
                                       double tol = kDefaultTolerance);

/// Flattening of every parameter: vec(A_i), vec(B_i), vec(C_i), then the
/// dense gain L (m_f x p_bar), all column-major.
Eigen::VectorXd flatten_parameters(const NetworkSpec& spec);

/// Rebuilds a spec with the shape of `shape` from flattened parameters.
/// Gain blocks that are exactly zero are omitted.
NetworkSpec unflatten_parameters(const NetworkSpec& shape, const Eigen::VectorXd& theta);

/// Unit-norm standard normal direction in parameter space.
Eigen::VectorXd random_direction(const NetworkSpec& spec, std::uint64_t seed);

std::vector<double> geometric_magnitudes(double lo, double hi, int steps);

struct MarginSample {
  double magnitude = 0.0;
  double sigma = 0.0;       // sigma_{n_f}(R_l)
  double normalized = 0.0;  // sigma / sigma_1
  Verdict verdict = Verdict::Unreachable;
};

/// Leader margin of theta + magnitude * direction for each magnitude.
std::vector<MarginSample> margin_probe(const NetworkSpec& spec,
                                       const Eigen::VectorXd& direction,
                                       std::span<const double> magnitudes,
                                       double tol = kDefaultTolerance);

/// Random direction from direction_seed; magnitude 0 followed by `steps`
/// geometric magnitudes in [1e-8, 1e-1].
std::vector<MarginSample> margin_probe(const NetworkSpec& spec,
                                       std::uint64_t direction_seed, int steps,
                                       double tol = kDefaultTolerance);

}  // namespace netreach
