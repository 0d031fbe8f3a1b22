#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace netreach {

enum class Role { Follower, Leader };

/// How the base-station command reaches the leaders.
///  - Independent: each leader gets its own slice of a stacked input, so B_l
///    is block diagonal.
///  - Shared: every leader receives the same u_t; all leaders must have the
///    same input dimension and B_l is the vertical stack of the B_i.
enum class BaseInputMode { Independent, Shared };

const char* to_string(Role role);
const char* to_string(BaseInputMode mode);

/// One discrete-time LTI subsystem x+ = A x + B v, w = C x.
struct SubsystemModel {
  int id = 0;  // 1-based position in the network
  Role role = Role::Follower;
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
  int p() const { return static_cast<int>(C.rows()); }
};

/// Sparse interconnection gain L. Keys are (to, from) subsystem ids, both
/// 1-based. Absent blocks are zero.
class GainMatrix {
 public:
  using Key = std::pair<int, int>;
  using Map = std::map<Key, Eigen::MatrixXd>;

  void set(int to, int from, Eigen::MatrixXd block);
  const Eigen::MatrixXd* find(int to, int from) const;
  bool empty() const { return blocks_.empty(); }
  std::size_t size() const { return blocks_.size(); }
  const Map& blocks() const { return blocks_; }

 private:
  Map blocks_;
};

struct NetworkSpec {
  std::vector<SubsystemModel> subsystems;
  GainMatrix gains;
  BaseInputMode base_input_mode = BaseInputMode::Independent;

  int size() const { return static_cast<int>(subsystems.size()); }
  int num_followers() const;
  int num_leaders() const;
  const SubsystemModel& subsystem(int id) const { return subsystems.at(id - 1); }
};

/// Summed dimensions of the follower and leader groups.
struct NetworkDims {
  int n_f = 0;
  int m_f = 0;
  int p_f = 0;
  int n_l = 0;
  int p_l = 0;
  int p_bar = 0;
  int m_base = 0;

  bool operator==(const NetworkDims&) const = default;
};

/// Follower-first layout is assumed; call validate_network first.
NetworkDims compute_dims(const NetworkSpec& spec);

struct Diagnostic {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;

  bool ok() const { return errors.empty(); }
  bool has_error(const std::string& code) const;
  bool has_warning(const std::string& code) const;
};

/// Checks every structural invariant of the network. Errors make the spec
/// unusable downstream; warnings flag modeling assumptions that the
/// analysis does not need (N_f <= N_l, unreachable or unobservable
/// subsystems).
ValidationReport validate_network(const NetworkSpec& spec);

/// Throws SchemaError carrying the first error when validation fails.
void require_valid(const NetworkSpec& spec);

struct SubsystemDims {
  int n = 1;
  int m = 1;
  int p = 1;
};

/// Shape of a randomly generated network.
struct DimensionProfile {
  std::vector<SubsystemDims> followers;
  std::vector<SubsystemDims> leaders;
  BaseInputMode base_input_mode = BaseInputMode::Independent;
  // Drop every follower <- leader block, forcing L_lf = 0.
  bool zero_leader_gains = false;
};

/// Draws every entry of every A_i, B_i, C_i and every gain block i.i.d.
/// standard normal. The gain is dense over (follower, any subsystem) pairs.
/// Identical (seed, profile) gives bit-identical output.
NetworkSpec random_network(std::uint64_t seed, const DimensionProfile& profile);

void check_profile(const DimensionProfile& profile);

/// Profile matching a network's shape and mode.
DimensionProfile profile_of(const NetworkSpec& spec);

}  // namespace netreach
