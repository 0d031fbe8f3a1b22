#include "netreach/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "netreach/aggregate.hpp"
#include "netreach/errors.hpp"
#include "netreach/fixtures.hpp"
#include "netreach/generic.hpp"
#include "netreach/reach.hpp"
#include "netreach/report.hpp"
#include "netreach/serialize.hpp"
#include "netreach/structured.hpp"
#include "netreach/synth.hpp"

namespace netreach::cli {

using nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
  }
  return os.str();
}

namespace {

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::string command;
  json inputs = json::object();
  std::string out_path;

  std::ostream& summary() { return out_path.empty() ? err : out; }

  std::string load(const std::string& path) {
    std::string text = read_file(path);
    inputs[path] = sha256_hex(text);
    return text;
  }

  void emit(json results) {
    json report = {{"tool", "netreach"},
                   {"tool_version", kToolVersion},
                   {"schema_version", kSchemaVersion},
                   {"command", command},
                   {"inputs_digest", inputs},
                   {"results", std::move(results)}};
    write(report.dump(2) + "\n");
  }

  void write(const std::string& text) {
    if (out_path.empty()) {
      out << text;
      return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ParseError("cannot write '" + out_path + "'");
    f << text;
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + path + "'");
  f << text;
}

NetworkSpec load_network(Context& ctx, const std::string& path) {
  NetworkSpec spec = parse_network_spec(ctx.load(path));
  require_valid(spec);
  return spec;
}

std::string verdict_line(const std::string& label, const ReachabilityReport& r) {
  std::ostringstream os;
  os << label << ": " << to_string(r.verdict) << " (" << to_string(r.method) << ", rank "
     << r.rank << "/" << r.state_dim << ")";
  return os.str();
}

std::vector<Method> methods_for(const std::string& name) {
  if (name == "kalman") return {Method::KalmanRank};
  if (name == "pbh") return {Method::PBH};
  if (name == "gramian") return {Method::Gramian};
  return {Method::KalmanRank, Method::PBH, Method::Gramian};
}

constexpr const char* kLeaderNote =
    "leader-reachability: rank test on (A_f, B_f) with the leader states as the follower "
    "input. When leaders are themselves driven by the base station this same property is "
    "sometimes called base-reachability of the follower system; both names refer to this "
    "test.";

json reach_section(Context& ctx, const AggregateSystem& agg, const std::string& which,
                   const std::string& method, double tol) {
  json results = json::object();
  const auto methods = methods_for(method);
  auto run_level = [&](const char* level, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    json level_json = json::object();
    std::optional<Verdict> first;
    bool agree = true;
    for (Method m : methods) {
      const ReachabilityReport r = test_reachability(A, B, m, tol);
      ctx.summary() << verdict_line(level, r) << "\n";
      if (first && *first != r.verdict) agree = false;
      first = r.verdict;
      level_json[to_string(m)] = to_json(r);
    }
    if (methods.size() > 1) level_json["methods_agree"] = agree;
    return level_json;
  };
  if (which == "leader" || which == "both") {
    results["leader"] = run_level("leader", agg.A_f, agg.B_f);
    results["leader"]["aliases"] = {"leader-reachable", "base-reachable (follower system)"};
    results["leader"]["note"] = kLeaderNote;
  }
  if (which == "base" || which == "both") {
    results["base"] = run_level("base", agg.A_l, agg.B_l);
  }
  return results;
}

json structured_section(Context& ctx, const AggregateSystem& agg, double tol) {
  const StructuredVerdict sym = symmetric_sufficiency_test(agg, tol);
  const StructuredVerdict circ = circulant_sufficiency_test(agg, tol);
  json results;
  results["symmetric"] = to_json(sym);
  results["circulant"] = to_json(circ);
  if (circ.applies) {
    results["circulant"]["data"] = to_json(circulant_data(*detect_circulant(agg.A_f, tol)));
  }
  std::string detected = "none";
  if (sym.applies && circ.applies) {
    detected = "symmetric+circulant";
  } else if (sym.applies) {
    detected = "symmetric";
  } else if (circ.applies) {
    detected = "circulant";
  }
  results["detected"] = detected;
  auto line = [&](const char* name, const StructuredVerdict& v) {
    ctx.summary() << name << ": ";
    if (!v.applies) {
      ctx.summary() << "not applicable";
    } else {
      ctx.summary() << (v.hypotheses_hold ? "hypotheses hold, asserts reachable"
                                          : "hypotheses fail, silent")
                    << "; min projection " << v.min_projection << ", min eigen-gap "
                    << v.min_eigen_gap;
    }
    ctx.summary() << "; rank test " << to_string(v.cross_check.verdict) << "\n";
  };
  line("symmetric test", sym);
  line("circulant test", circ);
  return results;
}

json steer_section(Context& ctx, const NetworkSpec& spec, const Eigen::VectorXd& target,
                   std::optional<Eigen::VectorXd> x0, std::optional<int> steps, double tol,
                   SteeringPlan* plan_out) {
  const AggregateSystem agg = build_aggregate(spec);
  const CascadeSystem cascade = build_cascade(agg);
  const Eigen::VectorXd start = x0.value_or(Eigen::VectorXd::Zero(cascade.state_dim()));
  const int horizon = steps.value_or(cascade.state_dim());
  json results;
  results["follower_steerable"] = to_json(follower_steerable(cascade, tol));
  const auto min_h = min_feasible_horizon(cascade, tol);
  results["min_feasible_horizon"] = min_h ? json(*min_h) : json(nullptr);
  const SteeringPlan plan = min_energy_steer(cascade, start, target, horizon, tol);
  const PlanVerification check = verify_plan(spec, plan);
  results["plan"] = to_json(plan);
  results["verification"] = to_json(check);
  results["tolerance"] = tol;
  ctx.summary() << "steering plan: horizon " << plan.horizon << ", energy " << plan.energy
                << ", achieved error " << plan.achieved_error << ", re-simulated error "
                << check.resimulated_error << "\n";
  if (plan_out) *plan_out = plan;
  return results;
}

int cmd_validate(Context& ctx, const std::string& file) {
  const NetworkSpec spec = parse_network_spec(ctx.load(file));
  const ValidationReport report = validate_network(spec);
  json results = to_json(report);
  if (report.ok()) results["dims"] = to_json(compute_dims(spec));
  ctx.emit(results);
  for (const auto& e : report.errors) ctx.summary() << "error: " << e.message << "\n";
  for (const auto& w : report.warnings) ctx.summary() << "warning: " << w.message << "\n";
  ctx.summary() << (report.ok() ? "valid" : "invalid") << "\n";
  return report.ok() ? kExitOk : kExitInvalidInput;
}

int cmd_aggregate(Context& ctx, const std::string& file) {
  const NetworkSpec spec = load_network(ctx, file);
  ctx.emit(to_json(build_aggregate(spec)));
  return kExitOk;
}

struct SimulateArgs {
  std::string file, x0, u, level = "aggregate";
  int steps = 0;
};

int cmd_simulate(Context& ctx, const SimulateArgs& a) {
  const NetworkSpec spec = load_network(ctx, a.file);
  const NetworkDims dims = compute_dims(spec);
  const int n = dims.n_f + dims.n_l;
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  if (!a.x0.empty()) x0 = parse_vector(ctx.load(a.x0));
  if (x0.size() != n) {
    throw DimensionMismatch("x0 must have " + std::to_string(n) + " entries");
  }
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(dims.m_base, a.steps);
  if (!a.u.empty()) u = parse_sequence(ctx.load(a.u), dims.m_base);
  Trajectory traj;
  if (a.level == "subsystem") {
    traj = simulate_subsystem_level(spec, x0, u, a.steps);
  } else {
    const AggregateSystem agg = build_aggregate(spec);
    traj = simulate_aggregate(agg, x0.head(dims.n_f), x0.tail(dims.n_l), u, a.steps);
  }
  ctx.write(trajectory_csv(traj));
  return kExitOk;
}

int cmd_reach(Context& ctx, const std::string& file, const std::string& which,
              const std::string& method, double tol) {
  const NetworkSpec spec = load_network(ctx, file);
  ctx.emit(reach_section(ctx, build_aggregate(spec), which, method, tol));
  return kExitOk;
}

int cmd_structured(Context& ctx, const std::string& file, double tol) {
  const NetworkSpec spec = load_network(ctx, file);
  ctx.emit(structured_section(ctx, build_aggregate(spec), tol));
  return kExitOk;
}

struct SteerArgs {
  std::string file, target, x0, inputs_csv, trajectory_csv;
  std::optional<int> steps;
  double tol = kDefaultTolerance;
};

int cmd_steer(Context& ctx, const SteerArgs& a) {
  const NetworkSpec spec = load_network(ctx, a.file);
  const Eigen::VectorXd target = parse_vector(ctx.load(a.target));
  std::optional<Eigen::VectorXd> x0;
  if (!a.x0.empty()) x0 = parse_vector(ctx.load(a.x0));
  SteeringPlan plan;
  json results = steer_section(ctx, spec, target, x0, a.steps, a.tol, &plan);
  if (!a.inputs_csv.empty()) write_file(a.inputs_csv, inputs_csv(plan.inputs));
  if (!a.trajectory_csv.empty()) write_file(a.trajectory_csv, trajectory_csv(plan.predicted));
  ctx.emit(results);
  return kExitOk;
}

struct GenericArgs {
  std::string profile, margins_csv;
  int trials = 100;
  std::uint64_t seed = 0;
  double tol = kDefaultTolerance;
};

int cmd_generic(Context& ctx, const GenericArgs& a) {
  const DimensionProfile profile = parse_profile(ctx.load(a.profile));
  const GenericityReport report = genericity_experiment(profile, a.trials, a.seed, a.tol);
  if (!a.margins_csv.empty()) {
    std::ostringstream csv;
    csv << "trial,seed,leader,base,cascade,margin\n" << std::setprecision(17);
    for (const auto& r : report.records) {
      csv << r.trial << "," << r.seed << "," << r.leader << "," << r.base << "," << r.cascade
          << "," << r.margin << "\n";
    }
    write_file(a.margins_csv, csv.str());
  }
  ctx.emit(to_json(report));
  ctx.summary() << "trials " << report.trials << ": leader " << report.leader_reachable
                << ", base " << report.base_reachable << ", cascade "
                << report.cascade_reachable << ", min margin " << report.min_margin << "\n";
  for (const auto& f : report.failures()) {
    ctx.summary() << "failure: trial " << f.trial << " seed " << f.seed << "\n";
  }
  return kExitOk;
}

int cmd_demo(Context& ctx, const std::string& name) {
  std::string_view text;
  if (name == "fig3" || name == "star") {
    text = fixtures::star_json();
  } else if (name == "fig4" || name == "circulant") {
    text = fixtures::circulant_json();
  } else {
    throw SchemaError("unknown demo '" + name + "' (expected fig3 or fig4)");
  }
  const auto started = std::chrono::steady_clock::now();
  ctx.inputs["fixture:" + name] = sha256_hex(std::string(text));
  const NetworkSpec spec = parse_network_spec(text);
  const ValidationReport validation = validate_network(spec);
  if (!validation.ok()) throw SchemaError(validation.errors.front().message);
  const AggregateSystem agg = build_aggregate(spec);

  json results;
  results["fixture"] = name;
  results["validation"] = to_json(validation);
  results["aggregate"] = to_json(agg);
  results["reach"] = reach_section(ctx, agg, "both", "all", kDefaultTolerance);
  results["structured"] = structured_section(ctx, agg, kDefaultTolerance);
  const Eigen::VectorXd target = Eigen::VectorXd::Ones(agg.dims.n_f);
  results["steer"] = steer_section(ctx, spec, target, std::nullopt, std::nullopt,
                                   kDefaultTolerance, nullptr);
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);
  results["elapsed_seconds"] = elapsed.count();
  ctx.emit(results);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reachability analysis and steering for leader-follower networks", "netreach"};
  app.require_subcommand(1);
  Context ctx{out, err, {}, json::object(), {}};

  std::string file;
  double tol = kDefaultTolerance;

  auto* validate = app.add_subcommand("validate", "Check a network document");
  validate->add_option("file", file, "Network document")->required();
  validate->add_option("--out", ctx.out_path, "Write the report here instead of stdout");

  auto* aggregate = app.add_subcommand("aggregate", "Emit the aggregated closed-loop matrices");
  aggregate->add_option("file", file, "Network document")->required();
  aggregate->add_option("--out", ctx.out_path, "Report path");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate the network, CSV trajectory out");
  simulate->add_option("file", sim.file, "Network document")->required();
  simulate->add_option("--x0", sim.x0, "Initial state vector (JSON array); default zero");
  simulate->add_option("--u", sim.u, "Base input sequence (JSON array of steps); default zero");
  simulate->add_option("--steps", sim.steps, "Horizon T")->required()->check(CLI::NonNegativeNumber);
  simulate->add_option("--level", sim.level, "subsystem or aggregate")
      ->check(CLI::IsMember({"subsystem", "aggregate"}));
  simulate->add_option("--out", ctx.out_path, "CSV path");

  std::string which = "both", method = "kalman";
  auto* reach = app.add_subcommand("reach", "Leader- and base-reachability rank tests");
  reach->add_option("file", file, "Network document")->required();
  reach->add_option("--which", which, "leader, base or both")
      ->check(CLI::IsMember({"leader", "base", "both"}));
  reach->add_option("--method", method, "kalman, pbh, gramian or all")
      ->check(CLI::IsMember({"kalman", "pbh", "gramian", "all"}));
  reach->add_option("--tol", tol, "Relative rank tolerance")->check(CLI::PositiveNumber);
  reach->add_option("--out", ctx.out_path, "Report path");

  auto* structured = app.add_subcommand("structured", "Symmetric and circulant sufficiency tests");
  structured->add_option("file", file, "Network document")->required();
  structured->add_option("--tol", tol, "Tolerance")->check(CLI::PositiveNumber);
  structured->add_option("--out", ctx.out_path, "Report path");

  SteerArgs st;
  int steer_steps = 0;
  auto* steer = app.add_subcommand("steer", "Minimum-energy base input to a follower target");
  steer->add_option("file", st.file, "Network document")->required();
  steer->add_option("--target", st.target, "Follower target (JSON array)")->required();
  steer->add_option("--x0", st.x0, "Initial cascade state (JSON array); default zero");
  auto* steps_opt = steer->add_option("--steps", steer_steps, "Horizon T; default n_f + n_l")
                        ->check(CLI::PositiveNumber);
  steer->add_option("--tol", st.tol, "Rank tolerance")->check(CLI::PositiveNumber);
  steer->add_option("--inputs-csv", st.inputs_csv, "Write the input sequence as CSV");
  steer->add_option("--trajectory", st.trajectory_csv, "Write the predicted trajectory as CSV");
  steer->add_option("--out", ctx.out_path, "Plan document path");

  GenericArgs gen;
  auto* generic = app.add_subcommand("generic", "Randomized reachability experiment");
  generic->add_option("--profile", gen.profile, "Dimension profile document")->required();
  generic->add_option("--trials", gen.trials, "Number of random networks")->check(CLI::PositiveNumber);
  generic->add_option("--seed", gen.seed, "Experiment seed");
  generic->add_option("--tol", gen.tol, "Rank tolerance")->check(CLI::PositiveNumber);
  generic->add_option("--margins-csv", gen.margins_csv, "Write per-trial margins as CSV");
  generic->add_option("--out", ctx.out_path, "Report path");

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "Run the full pipeline on a shipped fixture");
  demo->add_option("name", demo_name, "fig3 or fig4")->required();
  demo->add_option("--out", ctx.out_path, "Report path");

  // CLI11 wants argv order reversed when given a vector.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "netreach: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (validate->parsed()) {
      ctx.command = "validate";
      return cmd_validate(ctx, file);
    }
    if (aggregate->parsed()) {
      ctx.command = "aggregate";
      return cmd_aggregate(ctx, file);
    }
    if (simulate->parsed()) {
      ctx.command = "simulate";
      return cmd_simulate(ctx, sim);
    }
    if (reach->parsed()) {
      ctx.command = "reach";
      return cmd_reach(ctx, file, which, method, tol);
    }
    if (structured->parsed()) {
      ctx.command = "structured";
      return cmd_structured(ctx, file, tol);
    }
    if (steer->parsed()) {
      ctx.command = "steer";
      if (steps_opt->count() > 0) st.steps = steer_steps;
      return cmd_steer(ctx, st);
    }
    if (generic->parsed()) {
      ctx.command = "generic";
      return cmd_generic(ctx, gen);
    }
    if (demo->parsed()) {
      ctx.command = "demo";
      return cmd_demo(ctx, demo_name);
    }
  } catch (const NumericalFailure& e) {
    err << "netreach: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const HorizonTooShort& e) {
    err << "netreach: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "netreach: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "netreach: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace netreach::cli
