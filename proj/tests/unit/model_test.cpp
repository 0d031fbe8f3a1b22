#include "netreach/model.hpp"

#include <gtest/gtest.h>

#include "netreach/aggregate.hpp"
#include "netreach/errors.hpp"
#include "netreach/fixtures.hpp"
#include "netreach/serialize.hpp"

namespace netreach {
namespace {

constexpr const char* kMinimal = R"({
  "subsystems": [
    {"id": 1, "role": "follower", "A": [[0.5]], "B": [[1]], "C": [[1]]},
    {"id": 2, "role": "leader", "A": [[0.3]], "B": [[1]], "C": [[1]]}
  ],
  "gains": [{"to": 1, "from": 2, "L": [[2]]}]
})";

SubsystemModel scalar(int id, Role role, double a, double b = 1.0, double c = 1.0) {
  SubsystemModel s;
  s.id = id;
  s.role = role;
  s.A = Eigen::MatrixXd::Constant(1, 1, a);
  s.B = Eigen::MatrixXd::Constant(1, 1, b);
  s.C = Eigen::MatrixXd::Constant(1, 1, c);
  return s;
}

DimensionProfile star_profile() {
  DimensionProfile p;
  p.followers.assign(3, SubsystemDims{1, 1, 1});
  p.leaders.assign(1, SubsystemDims{1, 1, 1});
  return p;
}

GTEST_TEST(ParseNetworkSpec, MinimalDocument) {
  const NetworkSpec spec = parse_network_spec(kMinimal);
  EXPECT_EQ(spec.size(), 2);
  EXPECT_EQ(spec.num_followers(), 1);
  EXPECT_EQ(spec.num_leaders(), 1);
  EXPECT_EQ(spec.base_input_mode, BaseInputMode::Independent);
  ASSERT_NE(spec.gains.find(1, 2), nullptr);
  EXPECT_EQ((*spec.gains.find(1, 2))(0, 0), 2.0);
  EXPECT_TRUE(validate_network(spec).ok());
}

GTEST_TEST(ParseNetworkSpec, StarFixtureReproducesFollowerMatrix) {
  const AggregateSystem agg = build_aggregate(fixtures::star());
  Eigen::Matrix3d expected;
  // clang-format off
  expected << 0.2, 1,   1,
              2,   0.2, 2,
              3,   3,   0.2;
  // clang-format on
  EXPECT_EQ(agg.A_f, Eigen::MatrixXd(expected));
}

GTEST_TEST(ParseNetworkSpec, GainTargetingLeaderIsSchemaError) {
  constexpr const char* doc = R"({
    "subsystems": [
      {"id": 1, "role": "follower", "A": [[0.5]], "B": [[1]], "C": [[1]]},
      {"id": 2, "role": "leader", "A": [[0.3]], "B": [[1]], "C": [[1]]}
    ],
    "gains": [{"to": 2, "from": 1, "L": [[1]]}]
  })";
  EXPECT_THROW(parse_network_spec(doc), SchemaError);
}

GTEST_TEST(ParseNetworkSpec, Errors) {
  EXPECT_THROW(parse_network_spec("{not json"), ParseError);
  EXPECT_THROW(parse_network_spec(R"({"gains": []})"), SchemaError);
  EXPECT_THROW(parse_network_spec(R"({"subsystems": [{"id": 1, "role": "follower",
      "A": [[1, 2], [3]], "B": [[1]], "C": [[1]]}]})"),
               SchemaError);
  EXPECT_THROW(parse_network_spec(R"({"subsystems": [{"id": 1, "role": "boss",
      "A": [[1]], "B": [[1]], "C": [[1]]}]})"),
               SchemaError);
  EXPECT_THROW(parse_network_spec(R"({"subsystems": [], "base_input_mode": "both"})"),
               SchemaError);
}

GTEST_TEST(ParseNetworkSpec, ExactDecimals) {
  const NetworkSpec spec = parse_network_spec(R"({"subsystems": [
    {"id": 1, "role": "follower", "A": [[0.1]], "B": [[1e-300]], "C": [[-123456.789012345678]]}]})");
  EXPECT_EQ(spec.subsystems[0].A(0, 0), 0.1);
  EXPECT_EQ(spec.subsystems[0].B(0, 0), 1e-300);
  EXPECT_EQ(spec.subsystems[0].C(0, 0), -123456.789012345678);
}

GTEST_TEST(Serialize, RoundTripIsExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    DimensionProfile profile;
    profile.followers = {{2, 1, 2}, {1, 2, 1}, {3, 1, 1}};
    profile.leaders = {{2, 2, 1}, {1, 1, 2}};
    profile.base_input_mode = seed % 2 ? BaseInputMode::Shared : BaseInputMode::Independent;
    if (profile.base_input_mode == BaseInputMode::Shared) profile.leaders[1].m = 2;
    const NetworkSpec spec = random_network(seed, profile);
    const NetworkSpec back = parse_network_spec(serialize_network_spec(spec));
    ASSERT_EQ(back.size(), spec.size());
    EXPECT_EQ(back.base_input_mode, spec.base_input_mode);
    for (int k = 0; k < spec.size(); ++k) {
      EXPECT_EQ(back.subsystems[k].A, spec.subsystems[k].A);
      EXPECT_EQ(back.subsystems[k].B, spec.subsystems[k].B);
      EXPECT_EQ(back.subsystems[k].C, spec.subsystems[k].C);
      EXPECT_EQ(back.subsystems[k].role, spec.subsystems[k].role);
    }
    ASSERT_EQ(back.gains.size(), spec.gains.size());
    for (const auto& [key, block] : spec.gains.blocks()) {
      ASSERT_NE(back.gains.find(key.first, key.second), nullptr);
      EXPECT_EQ(*back.gains.find(key.first, key.second), block);
    }
  }
}

GTEST_TEST(ValidateNetwork, StarFixtureIsClean) {
  const ValidationReport r = validate_network(fixtures::star());
  EXPECT_TRUE(r.errors.empty());
  EXPECT_TRUE(r.warnings.empty());
}

GTEST_TEST(ValidateNetwork, WrongBlockShapeNamesTheBlock) {
  NetworkSpec spec = parse_network_spec(kMinimal);
  spec.gains.set(1, 2, Eigen::MatrixXd::Ones(1, 2));
  const ValidationReport r = validate_network(spec);
  ASSERT_TRUE(r.has_error("dimension"));
  EXPECT_NE(r.errors.front().message.find("gain block (1, 2)"), std::string::npos);
}

GTEST_TEST(ValidateNetwork, UnreachableSubsystemOnlyWarns) {
  NetworkSpec spec = parse_network_spec(kMinimal);
  spec.subsystems[0].B(0, 0) = 0.0;
  spec.subsystems[0].A(0, 0) = 1.0;
  const ValidationReport r = validate_network(spec);
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.has_warning("unreachable_subsystem"));
}

GTEST_TEST(ValidateNetwork, FewFollowersWarns) {
  const ValidationReport r = validate_network(parse_network_spec(kMinimal));
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.has_warning("few_followers"));  // N_f = N_l = 1
}

GTEST_TEST(ValidateNetwork, OrderingViolationGivesExactlyOneError) {
  NetworkSpec spec;
  spec.subsystems = {scalar(1, Role::Leader, 0.1), scalar(2, Role::Follower, 0.2),
                     scalar(3, Role::Leader, 0.3), scalar(4, Role::Follower, 0.4),
                     scalar(5, Role::Follower, 0.5)};
  const ValidationReport r = validate_network(spec);
  const auto count = std::count_if(r.errors.begin(), r.errors.end(),
                                   [](const Diagnostic& d) { return d.code == "ordering"; });
  EXPECT_EQ(count, 1);
}

GTEST_TEST(ValidateNetwork, MissingGroupsAndSharedMismatch) {
  NetworkSpec spec;
  spec.subsystems = {scalar(1, Role::Follower, 0.1)};
  EXPECT_TRUE(validate_network(spec).has_error("no_leaders"));

  spec.subsystems = {scalar(1, Role::Follower, 0.1), scalar(2, Role::Leader, 0.2),
                     scalar(3, Role::Leader, 0.3)};
  spec.subsystems[2].B = Eigen::MatrixXd::Ones(1, 2);
  spec.base_input_mode = BaseInputMode::Shared;
  EXPECT_TRUE(validate_network(spec).has_error("shared_input"));
  spec.base_input_mode = BaseInputMode::Independent;
  EXPECT_FALSE(validate_network(spec).has_error("shared_input"));
}

GTEST_TEST(ValidateNetwork, NetworkDims) {
  NetworkSpec spec;
  spec.subsystems = {scalar(1, Role::Follower, 0.1), scalar(2, Role::Leader, 0.2),
                     scalar(3, Role::Leader, 0.3)};
  spec.subsystems[0].A = Eigen::MatrixXd::Identity(2, 2);
  spec.subsystems[0].B = Eigen::MatrixXd::Ones(2, 3);
  spec.subsystems[0].C = Eigen::MatrixXd::Ones(4, 2);
  spec.subsystems[2].B = Eigen::MatrixXd::Ones(1, 2);
  const NetworkDims d = compute_dims(spec);
  EXPECT_EQ(d, (NetworkDims{2, 3, 4, 2, 2, 6, 3}));
  spec.subsystems[2].B = Eigen::MatrixXd::Ones(1, 1);
  spec.base_input_mode = BaseInputMode::Shared;
  EXPECT_EQ(compute_dims(spec).m_base, 1);
}

GTEST_TEST(RandomNetwork, Deterministic) {
  const NetworkSpec a = random_network(0, star_profile());
  const NetworkSpec b = random_network(0, star_profile());
  EXPECT_EQ(serialize_network_spec(a), serialize_network_spec(b));
}

GTEST_TEST(RandomNetwork, SeedsDiffer) {
  const NetworkSpec a = random_network(0, star_profile());
  const NetworkSpec b = random_network(1, star_profile());
  EXPECT_NE(*a.gains.find(1, 2), *b.gains.find(1, 2));
}

GTEST_TEST(RandomNetwork, ValidForManySeeds) {
  EXPECT_TRUE(validate_network(random_network(42, star_profile())).ok());
  DimensionProfile mixed;
  mixed.followers = {{2, 1, 1}, {3, 2, 2}, {1, 1, 3}};
  mixed.leaders = {{2, 2, 2}, {1, 2, 1}};
  mixed.base_input_mode = BaseInputMode::Shared;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    EXPECT_TRUE(validate_network(random_network(seed, mixed)).ok()) << "seed " << seed;
    EXPECT_TRUE(validate_network(random_network(seed, star_profile())).ok()) << "seed " << seed;
  }
}

GTEST_TEST(RandomNetwork, InvalidProfile) {
  DimensionProfile p = star_profile();
  p.followers[1].n = 0;
  EXPECT_THROW(random_network(0, p), InvalidProfile);
  p = star_profile();
  p.leaders.clear();
  EXPECT_THROW(random_network(0, p), InvalidProfile);
}

GTEST_TEST(RandomNetwork, ZeroLeaderGains) {
  DimensionProfile p = star_profile();
  p.zero_leader_gains = true;
  const NetworkSpec spec = random_network(3, p);
  EXPECT_EQ(spec.gains.find(1, 4), nullptr);
  EXPECT_NE(spec.gains.find(1, 2), nullptr);
}

GTEST_TEST(ParseProfile, CountExpands) {
  const DimensionProfile p = parse_profile(R"({"followers": [{"n": 2, "count": 3}],
      "leaders": [{"m": 2}], "base_input_mode": "shared", "zero_leader_gains": true})");
  ASSERT_EQ(p.followers.size(), 3u);
  EXPECT_EQ(p.followers[2].n, 2);
  EXPECT_EQ(p.leaders[0].m, 2);
  EXPECT_EQ(p.base_input_mode, BaseInputMode::Shared);
  EXPECT_TRUE(p.zero_leader_gains);
  EXPECT_THROW(parse_profile(R"({"followers": []})"), SchemaError);
}

}  // namespace
}  // namespace netreach
