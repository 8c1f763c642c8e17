// collective: scenario runner and exact frame calculator.
//
// Exit codes: 0 success, 1 runtime failure or negative verdict, 2 invalid
// input (schema, validation, malformed arguments).

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "collective/bodies.hpp"
#include "collective/engine.hpp"
#include "collective/export.hpp"
#include "collective/frames.hpp"
#include "collective/isomorphism.hpp"
#include "collective/scenario.hpp"
#include "json.hpp"

namespace {

using namespace collective;

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kInvalid = 2;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

Rational rational_arg(const std::string& text, const std::string& flag) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw InputError(flag + ": " + e.what());
  }
}

RationalVector vector_arg(const std::string& text, std::size_t size, const std::string& flag) {
  RationalVector v;
  try {
    v = parse_rational_list(text);
  } catch (const std::invalid_argument& e) {
    throw InputError(flag + ": " + e.what());
  }
  if (v.size() != size) {
    throw InputError(flag + ": expected " + std::to_string(size) + " comma-separated values");
  }
  return v;
}

void print_motion(const char* label, const MotionParams& m) {
  std::cout << label << ".v = " << format_vector(m.v) << '\n';
  std::cout << label << ".w = " << format_rational(m.w) << '\n';
}

void print_frame(const FrameMap& f) {
  std::cout << "lambda = " << format_vector(f.boost.lambda) << '\n';
  for (std::size_t r = 0; r < f.matrix.rows(); ++r) {
    std::cout << "L[" << r << "] = " << format_vector(f.matrix.row(r)) << '\n';
  }
}

RationalVector to_rational(const IntVector& v) {
  RationalVector out;
  for (auto x : v) out.emplace_back(static_cast<long>(x));
  return out;
}

struct FramesArgs {
  std::size_t dim = 1;
  bool step_basis = false;
  std::string v = "0", w = "1";
  std::string v1, v2, w1 = "1", w2 = "1";
  std::string lambda, lambda1, lambda2;
  std::string rod = "1", slice = "0";
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collectives of stateless automata on lattice environments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "collective 1.0.0");

  // validate
  std::string scenario_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", scenario_path, "Scenario JSON")->required();

  // run
  std::optional<std::int64_t> horizon;
  std::string trace_out, events_out;
  bool serial = false;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and export the trace");
  run_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
  run_cmd->add_option("--horizon", horizon, "Number of steps (overrides the scenario)");
  run_cmd->add_option("--out", trace_out, "Trace CSV (stdout when omitted)");
  run_cmd->add_option("--events", events_out, "Event log, one JSON object per line");
  run_cmd->add_flag("--serial", serial, "Disable engine parallelism");

  // analyze
  std::string body_name, kinematics_out, tau_text = "1";
  bool want_period = false;
  std::int64_t search_horizon = 4096;
  auto* analyze = app.add_subcommand("analyze", "Body kinematics, periodicity and proper time");
  analyze->add_option("scenario", scenario_path, "Scenario JSON")->required();
  analyze->add_option("--body", body_name, "Body name")->required();
  analyze->add_option("--horizon", horizon, "Number of steps (overrides the scenario)");
  analyze->add_option("--kinematics", kinematics_out, "Kinematics CSV output");
  analyze->add_flag("--period", want_period, "Detect the period and assign proper time");
  analyze->add_option("--tau-per-period", tau_text, "Proper time per period (p/q)");
  analyze->add_option("--search-horizon", search_horizon, "Steps simulated for the period search")
      ->check(CLI::PositiveNumber);

  // frames
  FramesArgs fa;
  auto* frames = app.add_subcommand("frames", "Exact frame algebra");
  frames->require_subcommand(1);
  frames->add_option("--dim", fa.dim, "Spatial dimension")->check(CLI::Range(1, 8));
  frames->add_flag("--step-basis", fa.step_basis, "Use e_i = (i, 1) instead of (i, 1/(n+1)); non-normative");
  auto* boost = frames->add_subcommand("boost", "Diagonal boost and frame map of (v, w)");
  boost->add_option("--v", fa.v, "Velocity, comma-separated p/q");
  boost->add_option("--w", fa.w, "Proper-time velocity p/q");
  auto* compose_cmd = frames->add_subcommand("compose", "Compose two boosts given by their diagonals");
  compose_cmd->add_option("--lambda1", fa.lambda1, "Outer boost diagonal")->required();
  compose_cmd->add_option("--lambda2", fa.lambda2, "Inner boost diagonal")->required();
  auto* invert_cmd = frames->add_subcommand("invert", "Inverse boost");
  invert_cmd->add_option("--lambda", fa.lambda, "Boost diagonal");
  invert_cmd->add_option("--v", fa.v, "Velocity, comma-separated p/q");
  invert_cmd->add_option("--w", fa.w, "Proper-time velocity p/q");
  auto* addvel = frames->add_subcommand("addvel", "Velocity addition via boost composition");
  addvel->add_option("--v1", fa.v1, "First velocity")->required();
  addvel->add_option("--v2", fa.v2, "Second velocity")->required();
  addvel->add_option("--w1", fa.w1, "First proper-time velocity");
  addvel->add_option("--w2", fa.w2, "Second proper-time velocity");
  auto* length = frames->add_subcommand("length", "Measured length of a rod at rest in the moving frame");
  length->add_option("--rod", fa.rod, "Rest length p/q");
  length->add_option("--v", fa.v, "Velocity p/q");
  length->add_option("--w", fa.w, "Proper-time velocity p/q");
  length->add_option("--slice", fa.slice, "Target-frame time of the slice");

  // iso
  std::string path_a, path_b, body_a, body_b, tau_a = "1", tau_b = "1";
  auto* iso = app.add_subcommand("iso", "Affine isomorphism of two periodic bodies");
  iso->add_option("scenarioA", path_a, "First scenario")->required();
  iso->add_option("--bodyA", body_a, "Body in the first scenario")->required();
  iso->add_option("scenarioB", path_b, "Second scenario")->required();
  iso->add_option("--bodyB", body_b, "Body in the second scenario")->required();
  iso->add_option("--tau-a", tau_a, "Proper time per period of A");
  iso->add_option("--tau-b", tau_b, "Proper time per period of B");
  iso->add_option("--search-horizon", search_horizon, "Steps simulated for each body")
      ->check(CLI::PositiveNumber);

  // diagram
  std::string svg_out;
  bool no_timestamp = false;
  auto* diagram = app.add_subcommand("diagram", "Spacetime diagram of a one-dimensional scenario");
  diagram->add_option("scenario", scenario_path, "Scenario JSON")->required();
  diagram->add_option("--out", svg_out, "SVG output")->required();
  diagram->add_option("--horizon", horizon, "Number of steps (overrides the scenario)");
  diagram->add_flag("--no-timestamp", no_timestamp, "Omit the generation timestamp");

  // verify
  std::string csv_path;
  auto* verify = app.add_subcommand("verify", "Replay a trace CSV against its scenario");
  verify->add_option("scenario", scenario_path, "Scenario JSON")->required();
  verify->add_option("trace", csv_path, "Trace CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    const auto simulate = [&](const Scenario& sc) {
      return run(sc.initial_state(), horizon.value_or(sc.horizon), StepOptions{!serial});
    };

    if (*validate) {
      const Scenario sc = load_scenario(scenario_path);
      sc.initial_state();
      std::cout << "ok: dimension " << sc.environment().dimension() << ", "
                << sc.dynamics->colours.size() << " colours, " << sc.population.size()
                << " elementary bodies, " << sc.bodies.size() << " bodies, horizon " << sc.horizon << '\n';
      return kOk;
    }

    if (*run_cmd) {
      const Scenario sc = load_scenario(scenario_path);
      const Trace trace = simulate(sc);
      if (trace_out.empty()) {
        write_trace_csv(std::cout, trace);
      } else {
        auto out = open_output(trace_out);
        write_trace_csv(out, trace);
      }
      if (!events_out.empty()) {
        auto out = open_output(events_out);
        write_events_jsonl(out, trace);
      }
      return kOk;
    }

    if (*analyze) {
      const Scenario sc = load_scenario(scenario_path);
      const Body& body = sc.body(body_name);
      const Trace trace = simulate(sc);
      if (!kinematics_out.empty()) {
        auto out = open_output(kinematics_out);
        write_kinematics_csv(out, trace, body);
      }
      std::cout << "body " << body.name << ": " << body.members.size() << " members, horizon "
                << trace.horizon() << '\n';
      std::cout << "xB(0) = " << format_vector(avg_position(trace, body, 0)) << '\n';
      if (want_period) {
        const Trace long_trace =
            run(sc.initial_state(), std::max(trace.horizon(), search_horizon), StepOptions{!serial});
        const auto cert = detect_period(long_trace, body);
        if (!cert) {
          std::cout << "period: none within horizon\n";
          return kRuntime;
        }
        const auto pt = assign_proper_time(*cert, rational_arg(tau_text, "--tau-per-period"));
        std::cout << "period: P = " << cert->period << ", t0 = " << cert->t0 << ", displacement = "
                  << format_vector(to_rational(cert->displacement))
                  << ", turns = " << cert->turns_per_period << '\n';
        if (pt.degenerate()) {
          std::cout << "proper time: degenerate (no turns per period)\n";
        } else {
          std::cout << "proper time: w = " << format_rational(pt.rate) << '\n';
        }
      }
      return kOk;
    }

    if (*frames) {
      const auto basis = ActualBasis::build(standard_directions(fa.dim), fa.step_basis
                                                                             ? BasisConvention::StepBasis
                                                                             : BasisConvention::Normative);
      const std::size_t n = fa.dim;
      const auto parse_motion = [&](const std::string& v, const std::string& w, const std::string& flag) {
        RationalVector vel = v == "0" ? zero_vector(n) : vector_arg(v, n, flag + " v");
        return MotionParams{vel, rational_arg(w, flag + " w")};
      };
      if (*boost) {
        const MotionParams m = parse_motion(fa.v, fa.w, "--v/--w");
        print_frame(frame_map(basis, lambda_from_motion(basis, m)));
      } else if (*compose_cmd) {
        const DiagonalBoost a{vector_arg(fa.lambda1, n + 1, "--lambda1")};
        const DiagonalBoost b{vector_arg(fa.lambda2, n + 1, "--lambda2")};
        const DiagonalBoost c = compose(a, b);
        print_frame(frame_map(basis, c));
        print_motion("motion", motion_from_lambda(basis, c));
      } else if (*invert_cmd) {
        const DiagonalBoost forward = fa.lambda.empty()
                                          ? lambda_from_motion(basis, parse_motion(fa.v, fa.w, "--v/--w"))
                                          : DiagonalBoost{vector_arg(fa.lambda, n + 1, "--lambda")};
        const DiagonalBoost back = invert(forward);
        print_frame(frame_map(basis, back));
        print_motion("motion", motion_from_lambda(basis, back));
      } else if (*addvel) {
        const MotionParams a = parse_motion(fa.v1, fa.w1, "--v1/--w1");
        const MotionParams b = parse_motion(fa.v2, fa.w2, "--v2/--w2");
        print_motion("sum", velocity_addition(basis, a, b));
      } else if (*length) {
        if (n != 1) throw InputError("length: only one-dimensional frames are supported");
        const MotionParams m = parse_motion(fa.v, fa.w, "--v/--w");
        const FrameMap f = frame_map(basis, lambda_from_motion(basis, m));
        std::cout << "length = "
                  << format_rational(measure_length(f, Rational(0), rational_arg(fa.rod, "--rod"),
                                                    rational_arg(fa.slice, "--slice")))
                  << '\n';
      }
      return kOk;
    }

    if (*iso) {
      const Scenario sa = load_scenario(path_a);
      const Scenario sb = load_scenario(path_b);
      const Body& ba = sa.body(body_a);
      const Body& bb = sb.body(body_b);
      const Trace ta = run(sa.initial_state(), std::max(sa.horizon, search_horizon));
      const Trace tb = run(sb.initial_state(), std::max(sb.horizon, search_horizon));
      IsoSearch search;
      search.tau_per_period_a = rational_arg(tau_a, "--tau-a");
      search.tau_per_period_b = rational_arg(tau_b, "--tau-b");
      const auto witness = affine_isomorphic(ta, ba, tb, bb, search);
      nlohmann::ordered_json out;
      out["isomorphic"] = witness.has_value();
      auto phi = nlohmann::ordered_json::array();
      if (witness) {
        for (const auto& [x, y] : witness->phi) phi.push_back({x, y});
      }
      out["phi"] = phi;
      out["tauA"] = witness ? format_rational(witness->tau_a) : nullptr;
      out["tauB"] = witness ? format_rational(witness->tau_b) : nullptr;
      std::cout << out.dump() << '\n';
      return witness ? kOk : kRuntime;
    }

    if (*diagram) {
      const Scenario sc = load_scenario(scenario_path);
      const Trace trace = simulate(sc);
      auto out = open_output(svg_out);
      write_spacetime_svg(out, trace, !no_timestamp);
      return kOk;
    }

    if (*verify) {
      const Scenario sc = load_scenario(scenario_path);
      std::ifstream in(csv_path);
      if (!in) throw InputError("cannot open " + csv_path);
      const auto result = verify_trace_csv(sc, in);
      if (result.ok()) {
        std::cout << "ok\n";
        return kOk;
      }
      for (const auto& p : result.problems) std::cerr << p << '\n';
      return kRuntime;
    }
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
