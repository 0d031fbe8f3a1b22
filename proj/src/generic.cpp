#include "netreach/generic.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "netreach/aggregate.hpp"
#include "netreach/errors.hpp"
#include "netreach/synth.hpp"

namespace netreach {

std::vector<TrialRecord> GenericityReport::failures() const {
  std::vector<TrialRecord> out;
  for (const auto& r : records)
    if (!(r.leader && r.base && r.cascade)) out.push_back(r);
  return out;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[1]) << 32) | words[0];
}

namespace {

double normalized_sigma(const std::vector<double>& sv, int k) {
  if (k <= 0) return 1.0;
  if (static_cast<int>(sv.size()) < k || sv.front() == 0.0) return 0.0;
  return sv[k - 1] / sv.front();
}

}  // namespace

double leader_margin(const NetworkSpec& spec) {
  const AggregateSystem agg = build_aggregate(spec);
  const RankResult r = numerical_rank(controllability_matrix(agg.A_f, agg.B_f));
  return normalized_sigma(r.singular_values, agg.dims.n_f);
}

GenericityReport genericity_experiment(const DimensionProfile& profile, int trials,
                                       std::uint64_t seed, double tol) {
  check_profile(profile);
  if (trials < 1) throw InvalidProfile("trials must be >= 1");

  GenericityReport report;
  report.trials = trials;
  report.seed = seed;
  report.tolerance = tol;
  report.profile = profile;
  report.min_margin = std::numeric_limits<double>::infinity();
  report.records.resize(trials);

  // Each trial depends only on trial_seed(seed, t).
  for (int t = 0; t < trials; ++t) {
    TrialRecord& rec = report.records[t];
    rec.trial = t;
    rec.seed = trial_seed(seed, t);
    const NetworkSpec spec = random_network(rec.seed, profile);
    const AggregateSystem agg = build_aggregate(spec);
    const ReachabilityReport leader = is_leader_reachable(agg, tol);
    rec.leader = leader.reachable();
    rec.base = is_base_reachable(agg, tol).reachable();
    rec.cascade = follower_steerable(build_cascade(agg), tol).reachable();
    rec.margin = normalized_sigma(leader.singular_values, agg.dims.n_f);
  }

  for (const auto& rec : report.records) {
    report.leader_reachable += rec.leader;
    report.base_reachable += rec.base;
    report.cascade_reachable += rec.cascade;
    report.min_margin = std::min(report.min_margin, rec.margin);
  }
  return report;
}

Eigen::VectorXd flatten_parameters(const NetworkSpec& spec) {
  std::vector<double> theta;
  auto append = [&](const Eigen::MatrixXd& M) {
    theta.insert(theta.end(), M.data(), M.data() + M.size());
  };
  for (const auto& s : spec.subsystems) append(s.A);
  for (const auto& s : spec.subsystems) append(s.B);
  for (const auto& s : spec.subsystems) append(s.C);
  append(dense_gain(spec));
  return Eigen::Map<Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size()));
}

NetworkSpec unflatten_parameters(const NetworkSpec& shape, const Eigen::VectorXd& theta) {
  NetworkSpec spec;
  spec.base_input_mode = shape.base_input_mode;
  spec.subsystems = shape.subsystems;
  Eigen::Index pos = 0;
  auto take = [&](Eigen::MatrixXd& M) {
    if (pos + M.size() > theta.size()) {
      throw DimensionMismatch("parameter vector is too short for the network shape");
    }
    M = Eigen::Map<const Eigen::MatrixXd>(theta.data() + pos, M.rows(), M.cols());
    pos += M.size();
  };
  for (auto& s : spec.subsystems) take(s.A);
  for (auto& s : spec.subsystems) take(s.B);
  for (auto& s : spec.subsystems) take(s.C);

  const NetworkDims dims = compute_dims(shape);
  Eigen::MatrixXd L(dims.m_f, dims.p_bar);
  take(L);
  if (pos != theta.size()) {
    throw DimensionMismatch("parameter vector is too long for the network shape");
  }

  Eigen::Index row = 0;
  for (const auto& to : spec.subsystems) {
    if (to.role != Role::Follower) continue;
    Eigen::Index col = 0;
    for (const auto& from : spec.subsystems) {
      const Eigen::MatrixXd block = L.block(row, col, to.m(), from.p());
      if ((block.array() != 0.0).any()) spec.gains.set(to.id, from.id, block);
      col += from.p();
    }
    row += to.m();
  }
  return spec;
}

Eigen::VectorXd random_direction(const NetworkSpec& spec, std::uint64_t seed) {
  const Eigen::Index size = flatten_parameters(spec).size();
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd d(size);
  for (Eigen::Index k = 0; k < size; ++k) d(k) = normal(rng);
  const double norm = d.norm();
  return norm > 0 ? Eigen::VectorXd(d / norm) : d;
}

std::vector<double> geometric_magnitudes(double lo, double hi, int steps) {
  if (steps < 1 || !(lo > 0) || !(hi >= lo)) {
    throw std::invalid_argument("geometric range needs steps >= 1 and 0 < lo <= hi");
  }
  std::vector<double> out;
  if (steps == 1) return {lo};
  const double ratio = std::log(hi / lo) / (steps - 1);
  for (int k = 0; k < steps; ++k) out.push_back(lo * std::exp(ratio * k));
  out.back() = hi;
  return out;
}

std::vector<MarginSample> margin_probe(const NetworkSpec& spec, const Eigen::VectorXd& direction,
                                       std::span<const double> magnitudes, double tol) {
  const Eigen::VectorXd theta = flatten_parameters(spec);
  if (direction.size() != theta.size()) {
    throw DimensionMismatch("direction has the wrong parameter count");
  }
  std::vector<MarginSample> out;
  for (double mag : magnitudes) {
    const NetworkSpec perturbed = unflatten_parameters(spec, theta + mag * direction);
    const AggregateSystem agg = build_aggregate(perturbed);
    const ReachabilityReport rep = is_leader_reachable(agg, tol);
    MarginSample s;
    s.magnitude = mag;
    const int n_f = agg.dims.n_f;
    s.sigma = static_cast<int>(rep.singular_values.size()) >= n_f
                  ? rep.singular_values[n_f - 1]
                  : 0.0;
    s.normalized = normalized_sigma(rep.singular_values, n_f);
    s.verdict = rep.verdict;
    out.push_back(s);
  }
  return out;
}

std::vector<MarginSample> margin_probe(const NetworkSpec& spec, std::uint64_t direction_seed,
                                       int steps, double tol) {
  std::vector<double> mags{0.0};
  const auto geo = geometric_magnitudes(1e-8, 1e-1, steps);
  mags.insert(mags.end(), geo.begin(), geo.end());
  return margin_probe(spec, random_direction(spec, direction_seed), mags, tol);
}

}  // namespace netreach
