#include "netreach/report.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "netreach/serialize.hpp"

namespace netreach {

using nlohmann::json;

namespace {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Non-finite values have no JSON literal.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json vector_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back(number(v(k)));
  return arr;
}

}  // namespace

json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json to_json(const NetworkDims& d) {
  return {{"n_f", d.n_f}, {"m_f", d.m_f}, {"p_f", d.p_f}, {"n_l", d.n_l},
          {"p_l", d.p_l}, {"p_bar", d.p_bar}, {"m_base", d.m_base}};
}

json to_json(const ValidationReport& report) {
  auto list = [](const std::vector<Diagnostic>& diags) {
    json arr = json::array();
    for (const auto& d : diags) arr.push_back({{"code", d.code}, {"message", d.message}});
    return arr;
  };
  return {{"valid", report.ok()},
          {"errors", list(report.errors)},
          {"warnings", list(report.warnings)}};
}

json to_json(const AggregateSystem& agg) {
  return {{"dims", to_json(agg.dims)},
          {"base_input_mode", to_string(agg.base_input_mode)},
          {"A_f", matrix_to_json(agg.A_f)},
          {"B_f", matrix_to_json(agg.B_f)},
          {"C_f", matrix_to_json(agg.C_f)},
          {"A_l", matrix_to_json(agg.A_l)},
          {"B_l", matrix_to_json(agg.B_l)},
          {"C_l", matrix_to_json(agg.C_l)},
          {"L_ff", matrix_to_json(agg.L_ff)},
          {"L_lf", matrix_to_json(agg.L_lf)}};
}

json to_json(const ReachabilityReport& r) {
  json out = {{"verdict", to_string(r.verdict)},
              {"method", to_string(r.method)},
              {"rank", r.rank},
              {"state_dim", r.state_dim},
              {"singular_values", r.singular_values},
              {"tolerance", r.tolerance},
              {"rank_rule", "sigma_k > tolerance * max(1, sigma_1)"}};
  if (r.witness) {
    json w = json::array();
    for (Eigen::Index k = 0; k < r.witness->size(); ++k) w.push_back(complex_to_json((*r.witness)(k)));
    out["witness"] = std::move(w);
  }
  if (r.witness_eigenvalue) out["witness_eigenvalue"] = complex_to_json(*r.witness_eigenvalue);
  return out;
}

json to_json(const StructuredVerdict& v) {
  json out = {{"applies", v.applies},
              {"hypotheses_hold", v.hypotheses_hold},
              {"detail", v.detail},
              {"cross_check", to_json(v.cross_check)}};
  if (v.applies) {
    out["min_projection"] = number(v.min_projection);
    out["min_projection_conjugate"] = number(v.min_projection_conj);
    out["projection_threshold"] = v.projection_threshold;
    out["min_eigen_gap"] = number(v.min_eigen_gap);
    out["gap_threshold"] = v.gap_threshold;
    out["declined_repeated_eigenvalues"] = v.declined_repeated_eigenvalues;
    out["asserted"] = v.asserted ? json(to_string(*v.asserted)) : json(nullptr);
    out["agrees_with_rank_test"] = v.agrees;
  }
  return out;
}

json to_json(const CirculantData& data) {
  json gamma = json::array();
  for (Eigen::Index k = 0; k < data.Gamma.size(); ++k) gamma.push_back(complex_to_json(data.Gamma(k)));
  return {{"first_row", vector_json(data.first_row)},
          {"omega", complex_to_json(data.omega)},
          {"symbol_values", std::move(gamma)}};
}

json to_json(const SteeringPlan& plan) {
  json inputs = json::array();
  for (Eigen::Index t = 0; t < plan.inputs.cols(); ++t) {
    inputs.push_back(vector_json(plan.inputs.col(t)));
  }
  const Eigen::VectorXd final_state = plan.predicted.states.col(plan.horizon);
  return {{"horizon", plan.horizon},
          {"x0", vector_json(plan.x0)},
          {"target", vector_json(plan.target)},
          {"inputs", std::move(inputs)},
          {"energy", plan.energy},
          {"achieved_error", plan.achieved_error},
          {"projected_rank", plan.projected_rank},
          {"final_state", vector_json(final_state)}};
}

json to_json(const PlanVerification& v) {
  return {{"resimulated_error", v.resimulated_error},
          {"energy_recomputed", v.energy_recomputed},
          {"consistent", v.consistent}};
}

json to_json(const GenericityReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures()) {
    failures.push_back({{"trial", f.trial},
                        {"seed", f.seed},
                        {"leader", f.leader},
                        {"base", f.base},
                        {"cascade", f.cascade},
                        {"margin", f.margin}});
  }
  return {{"trials", r.trials},
          {"seed", r.seed},
          {"tolerance", r.tolerance},
          {"profile", profile_to_json(r.profile)},
          {"reachable_count",
           {{"leader", r.leader_reachable}, {"base", r.base_reachable}, {"cascade", r.cascade_reachable}}},
          {"min_margin", number(r.min_margin)},
          {"failures", std::move(failures)},
          {"label", "Monte-Carlo evidence consistent with generic reachability; not a proof"}};
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  for (Eigen::Index k = 0; k < traj.states.rows(); ++k) out += ",x_" + std::to_string(k + 1);
  for (Eigen::Index k = 0; k < traj.outputs.rows(); ++k) out += ",w_" + std::to_string(k + 1);
  out += '\n';
  for (std::size_t t = 0; t < traj.times.size(); ++t) {
    out += std::to_string(traj.times[t]);
    const auto col = static_cast<Eigen::Index>(t);
    for (Eigen::Index k = 0; k < traj.states.rows(); ++k) out += "," + format17(traj.states(k, col));
    for (Eigen::Index k = 0; k < traj.outputs.rows(); ++k) out += "," + format17(traj.outputs(k, col));
    out += '\n';
  }
  return out;
}

std::string inputs_csv(const Eigen::MatrixXd& inputs) {
  std::string out = "t";
  for (Eigen::Index k = 0; k < inputs.rows(); ++k) out += ",u_" + std::to_string(k + 1);
  out += '\n';
  for (Eigen::Index t = 0; t < inputs.cols(); ++t) {
    out += std::to_string(t);
    for (Eigen::Index k = 0; k < inputs.rows(); ++k) out += "," + format17(inputs(k, t));
    out += '\n';
  }
  return out;
}

}  // namespace netreach
