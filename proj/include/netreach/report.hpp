#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "netreach/aggregate.hpp"
#include "netreach/generic.hpp"
#include "netreach/model.hpp"
#include "netreach/reach.hpp"
#include "netreach/structured.hpp"
#include "netreach/synth.hpp"

namespace netreach {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const NetworkDims& dims);
nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const AggregateSystem& agg);
nlohmann::json to_json(const ReachabilityReport& report);
nlohmann::json to_json(const StructuredVerdict& verdict);
nlohmann::json to_json(const CirculantData& data);
nlohmann::json to_json(const SteeringPlan& plan);
nlohmann::json to_json(const PlanVerification& verification);
nlohmann::json to_json(const GenericityReport& report);

nlohmann::json complex_to_json(std::complex<double> z);

/// Header row "t,x_1..x_n,w_1..w_p" then one row per step, 17 significant digits.
std::string trajectory_csv(const Trajectory& traj);
/// Header row "t,u_1..u_m" then one row per input step.
std::string inputs_csv(const Eigen::MatrixXd& inputs);

}  // namespace netreach
