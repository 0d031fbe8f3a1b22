#include "netreach/model.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "netreach/errors.hpp"
#include "netreach/reach.hpp"

namespace netreach {

const char* to_string(Role role) {
  return role == Role::Follower ? "follower" : "leader";
}

const char* to_string(BaseInputMode mode) {
  return mode == BaseInputMode::Independent ? "independent" : "shared";
}

void GainMatrix::set(int to, int from, Eigen::MatrixXd block) {
  blocks_[{to, from}] = std::move(block);
}

const Eigen::MatrixXd* GainMatrix::find(int to, int from) const {
  auto it = blocks_.find({to, from});
  return it == blocks_.end() ? nullptr : &it->second;
}

int NetworkSpec::num_followers() const {
  return static_cast<int>(std::count_if(
      subsystems.begin(), subsystems.end(),
      [](const SubsystemModel& s) { return s.role == Role::Follower; }));
}

int NetworkSpec::num_leaders() const { return size() - num_followers(); }

NetworkDims compute_dims(const NetworkSpec& spec) {
  NetworkDims d;
  bool shared_m_set = false;
  for (const auto& s : spec.subsystems) {
    if (s.role == Role::Follower) {
      d.n_f += s.n();
      d.m_f += s.m();
      d.p_f += s.p();
    } else {
      d.n_l += s.n();
      d.p_l += s.p();
      if (spec.base_input_mode == BaseInputMode::Independent) {
        d.m_base += s.m();
      } else if (!shared_m_set) {
        d.m_base = s.m();
        shared_m_set = true;
      }
    }
  }
  d.p_bar = d.p_f + d.p_l;
  return d;
}

bool ValidationReport::has_error(const std::string& code) const {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const Diagnostic& d) { return d.code == code; });
}

bool ValidationReport::has_warning(const std::string& code) const {
  return std::any_of(warnings.begin(), warnings.end(),
                     [&](const Diagnostic& d) { return d.code == code; });
}

namespace {

std::string shape(const Eigen::MatrixXd& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

bool finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

}  // namespace

ValidationReport validate_network(const NetworkSpec& spec) {
  ValidationReport report;
  auto error = [&](std::string code, std::string msg) {
    report.errors.push_back({std::move(code), std::move(msg)});
  };
  auto warn = [&](std::string code, std::string msg) {
    report.warnings.push_back({std::move(code), std::move(msg)});
  };

  const int N = spec.size();
  const int N_f = spec.num_followers();
  const int N_l = spec.num_leaders();
  if (N_f < 1) error("no_followers", "network has no follower subsystem");
  if (N_l < 1) error("no_leaders", "network has no leader subsystem");

  // One ordering error no matter how many subsystems are out of place.
  for (int k = 0; k < N; ++k) {
    const bool should_follow = k < N_f;
    if ((spec.subsystems[k].role == Role::Follower) != should_follow) {
      error("ordering", "followers must precede all leaders (subsystem " +
                            std::to_string(k + 1) + " is out of place)");
      break;
    }
  }

  bool dims_ok = true;
  for (int k = 0; k < N; ++k) {
    const auto& s = spec.subsystems[k];
    const std::string name = "subsystem " + std::to_string(k + 1);
    if (s.id != k + 1) {
      error("id", name + " has id " + std::to_string(s.id) + ", expected " +
                      std::to_string(k + 1));
    }
    if (s.A.rows() < 1 || s.A.rows() != s.A.cols()) {
      error("dimension", name + ": A must be square and nonempty, got " + shape(s.A));
      dims_ok = false;
      continue;
    }
    if (s.B.rows() != s.A.rows() || s.B.cols() < 1) {
      error("dimension", name + ": B must be " + std::to_string(s.n()) +
                             "xm with m >= 1, got " + shape(s.B));
      dims_ok = false;
    }
    if (s.C.cols() != s.A.rows() || s.C.rows() < 1) {
      error("dimension", name + ": C must be px" + std::to_string(s.n()) +
                             " with p >= 1, got " + shape(s.C));
      dims_ok = false;
    }
    if (!finite(s.A) || !finite(s.B) || !finite(s.C)) {
      error("non_finite", name + " has non-finite entries");
    }
  }

  for (const auto& [key, block] : spec.gains.blocks()) {
    const auto [to, from] = key;
    const std::string name =
        "gain block (" + std::to_string(to) + ", " + std::to_string(from) + ")";
    if (to < 1 || to > N || from < 1 || from > N) {
      error("gain_index", name + " refers to a nonexistent subsystem");
      continue;
    }
    if (spec.subsystem(to).role != Role::Follower) {
      error("gain_target", name + " targets a leader; only followers receive gains");
    }
    const auto& target = spec.subsystem(to);
    const auto& source = spec.subsystem(from);
    if (block.rows() != target.m() || block.cols() != source.p()) {
      error("dimension", name + " must be " + std::to_string(target.m()) + "x" +
                             std::to_string(source.p()) + ", got " + shape(block));
    }
    if (!finite(block)) error("non_finite", name + " has non-finite entries");
  }

  if (spec.base_input_mode == BaseInputMode::Shared) {
    int m = -1;
    for (const auto& s : spec.subsystems) {
      if (s.role != Role::Leader) continue;
      if (m < 0) {
        m = s.m();
      } else if (s.m() != m) {
        error("shared_input", "shared base input requires equal leader input "
                              "dimensions (subsystem " +
                                  std::to_string(s.id) + " has m = " +
                                  std::to_string(s.m()) + ")");
        break;
      }
    }
  }

  if (N_f >= 1 && N_l >= 1 && N_f <= N_l) {
    warn("few_followers", "N_f = " + std::to_string(N_f) + " <= N_l = " +
                              std::to_string(N_l));
  }

  if (dims_ok) {
    for (const auto& s : spec.subsystems) {
      if (!finite(s.A) || !finite(s.B) || !finite(s.C)) continue;
      if (!kalman_test(s.A, s.B).reachable()) {
        warn("unreachable_subsystem",
             "(A, B) of subsystem " + std::to_string(s.id) + " is not reachable");
      }
      if (!kalman_test(s.A.transpose(), s.C.transpose()).reachable()) {
        warn("unobservable_subsystem",
             "(A, C) of subsystem " + std::to_string(s.id) + " is not observable");
      }
    }
  }
  return report;
}

void require_valid(const NetworkSpec& spec) {
  const auto report = validate_network(spec);
  if (!report.ok()) {
    throw SchemaError("invalid network: " + report.errors.front().message);
  }
}

void check_profile(const DimensionProfile& profile) {
  if (profile.followers.empty()) throw InvalidProfile("profile has no followers");
  if (profile.leaders.empty()) throw InvalidProfile("profile has no leaders");
  auto check = [](const SubsystemDims& d) {
    if (d.n < 1 || d.m < 1 || d.p < 1) {
      throw InvalidProfile("profile dimensions must be >= 1");
    }
  };
  std::for_each(profile.followers.begin(), profile.followers.end(), check);
  std::for_each(profile.leaders.begin(), profile.leaders.end(), check);
  if (profile.base_input_mode == BaseInputMode::Shared) {
    for (const auto& d : profile.leaders) {
      if (d.m != profile.leaders.front().m) {
        throw InvalidProfile("shared base input requires equal leader input dimensions");
      }
    }
  }
}

NetworkSpec random_network(std::uint64_t seed, const DimensionProfile& profile) {
  check_profile(profile);
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    // Fixed row-major draw order.
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = normal(rng);
    return m;
  };

  NetworkSpec spec;
  spec.base_input_mode = profile.base_input_mode;
  auto add = [&](const SubsystemDims& d, Role role) {
    SubsystemModel s;
    s.id = spec.size() + 1;
    s.role = role;
    s.A = draw(d.n, d.n);
    s.B = draw(d.n, d.m);
    s.C = draw(d.p, d.n);
    spec.subsystems.push_back(std::move(s));
  };
  for (const auto& d : profile.followers) add(d, Role::Follower);
  for (const auto& d : profile.leaders) add(d, Role::Leader);

  const int N_f = static_cast<int>(profile.followers.size());
  for (int i = 1; i <= N_f; ++i) {
    for (int j = 1; j <= spec.size(); ++j) {
      if (profile.zero_leader_gains && j > N_f) continue;
      spec.gains.set(i, j, draw(spec.subsystem(i).m(), spec.subsystem(j).p()));
    }
  }
  return spec;
}

DimensionProfile profile_of(const NetworkSpec& spec) {
  DimensionProfile profile;
  profile.base_input_mode = spec.base_input_mode;
  for (const auto& s : spec.subsystems) {
    SubsystemDims d{s.n(), s.m(), s.p()};
    (s.role == Role::Follower ? profile.followers : profile.leaders).push_back(d);
  }
  return profile;
}

}  // namespace netreach
