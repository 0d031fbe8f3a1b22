#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "netreach/aggregate.hpp"
#include "netreach/errors.hpp"
#include "netreach/fixtures.hpp"
#include "netreach/generic.hpp"
#include "netreach/model.hpp"
#include "netreach/reach.hpp"
#include "netreach/report.hpp"
#include "netreach/serialize.hpp"
#include "netreach/structured.hpp"
#include "netreach/synth.hpp"

namespace py = pybind11;
using namespace netreach;

namespace {

// Reports cross the boundary as plain dicts via their JSON encoding.
template <typename T>
py::object as_dict(const T& value) {
  return py::module_::import("json").attr("loads")(to_json(value).dump());
}

}  // namespace

PYBIND11_MODULE(_netreach, m) {
  m.doc() = "Reachability analysis and minimum-energy steering for leader-follower networks";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
  py::register_exception<InvalidProfile>(m, "InvalidProfile", base.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  py::register_exception<NumericalFailure>(m, "NumericalFailure", base.ptr());
  py::register_exception<HorizonTooShort>(m, "HorizonTooShort", base.ptr());

  py::enum_<Verdict>(m, "Verdict")
      .value("Reachable", Verdict::Reachable)
      .value("Unreachable", Verdict::Unreachable);
  py::enum_<Method>(m, "Method")
      .value("KalmanRank", Method::KalmanRank)
      .value("PBH", Method::PBH)
      .value("Gramian", Method::Gramian);
  py::enum_<BaseInputMode>(m, "BaseInputMode")
      .value("Independent", BaseInputMode::Independent)
      .value("Shared", BaseInputMode::Shared);

  py::class_<NetworkSpec>(m, "NetworkSpec")
      .def_property_readonly("size", &NetworkSpec::size)
      .def_property_readonly("num_followers", &NetworkSpec::num_followers)
      .def_property_readonly("num_leaders", &NetworkSpec::num_leaders)
      .def("to_json", [](const NetworkSpec& s) { return serialize_network_spec(s); });

  py::class_<AggregateSystem>(m, "AggregateSystem")
      .def_readonly("A_f", &AggregateSystem::A_f)
      .def_readonly("B_f", &AggregateSystem::B_f)
      .def_readonly("C_f", &AggregateSystem::C_f)
      .def_readonly("A_l", &AggregateSystem::A_l)
      .def_readonly("B_l", &AggregateSystem::B_l)
      .def_readonly("C_l", &AggregateSystem::C_l)
      .def_readonly("L_ff", &AggregateSystem::L_ff)
      .def_readonly("L_lf", &AggregateSystem::L_lf);

  py::class_<CascadeSystem>(m, "CascadeSystem")
      .def_readonly("A_c", &CascadeSystem::A_c)
      .def_readonly("B_c", &CascadeSystem::B_c)
      .def_readonly("P_f", &CascadeSystem::P_f)
      .def_readonly("n_f", &CascadeSystem::n_f)
      .def_readonly("n_l", &CascadeSystem::n_l);

  py::class_<SteeringPlan>(m, "SteeringPlan")
      .def_readonly("horizon", &SteeringPlan::horizon)
      .def_readonly("inputs", &SteeringPlan::inputs)
      .def_readonly("target", &SteeringPlan::target)
      .def_readonly("achieved_error", &SteeringPlan::achieved_error)
      .def_readonly("energy", &SteeringPlan::energy)
      .def_property_readonly("states",
                             [](const SteeringPlan& p) { return p.predicted.states; });

  m.def("parse_network_spec", [](const std::string& text) { return parse_network_spec(text); });
  m.def("serialize_network_spec", &serialize_network_spec, py::arg("spec"), py::arg("indent") = 2);
  m.def("validate_network", [](const NetworkSpec& s) { return as_dict(validate_network(s)); });
  m.def("random_network", [](std::uint64_t seed, const std::string& profile_json) {
    return random_network(seed, parse_profile(profile_json));
  }, py::arg("seed"), py::arg("profile_json"));
  m.def("star_network", &fixtures::star);
  m.def("circulant_network", &fixtures::circulant);

  m.def("build_aggregate", &build_aggregate);
  m.def("simulate_subsystem_level", [](const NetworkSpec& s, const Eigen::VectorXd& x0,
                                       const Eigen::MatrixXd& u, int steps) {
    return simulate_subsystem_level(s, x0, u, steps).states;
  });
  m.def("simulate_aggregate", [](const AggregateSystem& a, const Eigen::VectorXd& x0_f,
                                 const Eigen::VectorXd& x0_l, const Eigen::MatrixXd& u,
                                 int steps) {
    return simulate_aggregate(a, x0_f, x0_l, u, steps).states;
  });

  m.def("controllability_matrix", &controllability_matrix);
  m.def("reachability_gramian", &reachability_gramian);
  m.def("numerical_rank", [](const Eigen::MatrixXd& M, double tol) {
    const RankResult r = numerical_rank(M, tol);
    return py::make_tuple(r.rank, r.singular_values);
  }, py::arg("M"), py::arg("tol") = kDefaultTolerance);
  m.def("test_reachability", [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                Method method, double tol) {
    return as_dict(test_reachability(A, B, method, tol));
  }, py::arg("A"), py::arg("B"), py::arg("method") = Method::KalmanRank,
        py::arg("tol") = kDefaultTolerance);
  m.def("is_leader_reachable", [](const AggregateSystem& a, double tol, Method method) {
    return as_dict(is_leader_reachable(a, tol, method));
  }, py::arg("agg"), py::arg("tol") = kDefaultTolerance, py::arg("method") = Method::KalmanRank);
  m.def("is_base_reachable", [](const AggregateSystem& a, double tol, Method method) {
    return as_dict(is_base_reachable(a, tol, method));
  }, py::arg("agg"), py::arg("tol") = kDefaultTolerance, py::arg("method") = Method::KalmanRank);

  m.def("fourier_matrix", &fourier_matrix);
  m.def("circulant_eigenvalues", &circulant_eigenvalues);
  m.def("detect_circulant", &detect_circulant, py::arg("M"), py::arg("tol") = kDefaultTolerance);
  m.def("is_symmetric", &is_symmetric, py::arg("M"), py::arg("tol") = kDefaultTolerance);
  m.def("symmetric_sufficiency_test", [](const AggregateSystem& a, double tol) {
    return as_dict(symmetric_sufficiency_test(a, tol));
  }, py::arg("agg"), py::arg("tol") = kDefaultTolerance);
  m.def("circulant_sufficiency_test", [](const AggregateSystem& a, double tol) {
    return as_dict(circulant_sufficiency_test(a, tol));
  }, py::arg("agg"), py::arg("tol") = kDefaultTolerance);

  m.def("build_cascade", &build_cascade);
  m.def("steering_map", &steering_map);
  m.def("follower_steerable", [](const CascadeSystem& c, double tol) {
    return as_dict(follower_steerable(c, tol));
  }, py::arg("cascade"), py::arg("tol") = kDefaultTolerance);
  m.def("min_energy_steer", &min_energy_steer, py::arg("cascade"), py::arg("x0"),
        py::arg("target"), py::arg("steps"), py::arg("tol") = kDefaultTolerance);
  m.def("verify_plan", [](const NetworkSpec& s, const SteeringPlan& p) {
    return as_dict(verify_plan(s, p));
  });

  m.def("genericity_experiment", [](const std::string& profile_json, int trials,
                                    std::uint64_t seed, double tol) {
    return as_dict(genericity_experiment(parse_profile(profile_json), trials, seed, tol));
  }, py::arg("profile_json"), py::arg("trials"), py::arg("seed"),
        py::arg("tol") = kDefaultTolerance);
}
