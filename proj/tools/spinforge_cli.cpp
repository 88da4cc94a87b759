// Copyright 2026 The spinforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// spinforge command-line front end.
//
// Exit codes: 0 success, 1 unexpected failure, 2 schema or usage error,
// 3 infeasible gate or scheduling error, 4 fidelity below threshold.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "spinforge/errors.hpp"
#include "spinforge/evolve.hpp"
#include "spinforge/io.hpp"
#include "spinforge/optimize.hpp"

namespace fs = std::filesystem;
using namespace spinforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitSchema = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitFidelity = 4;
constexpr double kFidelityThreshold = 1.0 - 1e-6;

struct Options {
  std::string input;
  std::string device;
  std::string out = ".";
  std::string target;
  int trotter_steps = 4000;
  std::optional<std::uint64_t> seed;
  int samples_per_segment = kDefaultShapeGrid;
  std::string minus_branch = "+";
  bool allow_constant_shape = false;
  double sigma = 0.0;
  int grid = kDefaultShapeGrid;
};

void init_logging() {
  auto logger = spdlog::stderr_color_mt("spinforge");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SPINFORGE_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only honour explicit "off".
    if (level != spdlog::level::off || std::string(env) == "off") {
      spdlog::set_level(level);
    } else {
      spdlog::warn("ignoring unknown SPINFORGE_LOG level `{}`", env);
    }
  }
}

SynthOptions synth_options(const Options& o) {
  SynthOptions opts;
  opts.minus_branch =
      o.minus_branch == "-" ? MinusBranch::kMinus : MinusBranch::kPlus;
  opts.allow_constant_shape = o.allow_constant_shape;
  return opts;
}

void ensure_dir(const fs::path& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

void write_csv(const fs::path& path, const Schedule& schedule,
               int samples_per_segment) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  write_pulse_table(out, schedule, samples_per_segment);
}

int cmd_synth(const Options& o) {
  const fs::path input(o.input);
  json doc = read_json_file(input);
  if (!o.device.empty()) doc["device"] = read_json_file(o.device);
  const CircuitRequest circuit = circuit_from_json(doc, input.parent_path());
  const Schedule schedule = compile_circuit(circuit, synth_options(o));
  spdlog::info("synthesized {} segment(s) for {} gate step(s)",
               schedule.segments.size(), circuit.steps.size());

  const auto frame = rotating_frame_check(schedule);
  if (!frame.pass) spdlog::warn("{}", frame.warning);

  const fs::path out_dir(o.out);
  ensure_dir(out_dir);
  write_json_file(out_dir / "schedule.json", to_json(schedule));
  write_csv(out_dir / "pulses.csv", schedule, o.samples_per_segment);
  spdlog::info("wrote {} and {}", (out_dir / "schedule.json").string(),
               (out_dir / "pulses.csv").string());
  return kExitOk;
}

Operator resolve_target(const std::string& spec, const Schedule& schedule,
                        std::string& name) {
  if (spec.empty()) {
    if (!schedule.target) {
      throw SchemaError("schedule has no embedded target; pass --target");
    }
    name = "embedded";
    return *schedule.target;
  }
  if (fs::path(spec).extension() == ".json") {
    name = spec;
    const json doc = read_json_file(spec);
    Operator target =
        operator_from_json(doc.contains("target") ? doc.at("target") : doc);
    if (!target.is_unitary())
      throw SchemaError(spec + ": target is not unitary");
    return target;
  }
  name = spec;
  return named_target(spec, schedule.device.n_qubits());
}

json frame_json(const RotatingFrameReport& r) {
  json j{{"pass", r.pass},
         {"segment_cycles", r.segment_cycles},
         {"segment_deficits", r.segment_deficits},
         {"total_cycles", r.total_cycles},
         {"total_deficit", r.total_deficit}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

int cmd_verify(const Options& o) {
  if (o.trotter_steps < 1)
    throw ValidationError("--trotter-steps must be >= 1");
  const Schedule schedule =
      schedule_from_json(read_json_file(o.input), o.allow_constant_shape);
  std::string target_name;
  const Operator target = resolve_target(o.target, schedule, target_name);
  if (target.n_qubits() != schedule.device.n_qubits()) {
    throw SchemaError("target size does not match the schedule register");
  }

  const Operator exact = sequence_unitary(schedule);
  Operator trotter = Operator::identity(schedule.device.n_qubits());
  for (const auto& seg : schedule.segments) {
    trotter = trotter_unitary(seg, o.trotter_steps) * trotter;
  }
  const FidelityReport vs_target = gate_fidelity(exact, target, target_name);
  const FidelityReport vs_trotter = gate_fidelity(trotter, exact, "exact");
  const RotatingFrameReport frame = rotating_frame_check(schedule);
  if (!frame.pass) spdlog::warn("{}", frame.warning);

  json report{{"exact_vs_target", to_json(vs_target)},
              {"exact_vs_trotter", to_json(vs_trotter)},
              {"trotter_steps", o.trotter_steps},
              {"trotter_error", vs_trotter.max_elementwise_error},
              {"rotating_frame", frame_json(frame)}};
  std::cout << std::setw(2) << report << '\n';
  return vs_target.fidelity >= kFidelityThreshold ? kExitOk : kExitFidelity;
}

int cmd_optimize(const Options& o) {
  const fs::path input(o.input);
  json doc = read_json_file(input);
  if (!o.device.empty()) doc["device"] = read_json_file(o.device);
  if (o.seed) doc["seed"] = *o.seed;
  const OptimizationRequest req =
      optimization_from_json(doc, input.parent_path());
  spdlog::info("optimizing {} parameters with {} restart(s), method {}",
               req.problem.n_params(), req.options.restarts,
               to_string(req.options.method));

  const OptimizationResult result = optimize_sequence(req.problem, req.options);
  const Schedule schedule =
      to_schedule(result.params, req.problem, req.device,
                  std::span<const ShapeFunction>(&req.shape, 1), req.duration);
  if (!result.converged) {
    spdlog::warn("optimizer did not reach tol {}; best infidelity {}",
                 req.options.tol, result.infidelity);
  }

  const fs::path out_dir(o.out);
  ensure_dir(out_dir);
  write_json_file(out_dir / "schedule.json", to_json(schedule));
  write_json_file(out_dir / "result.json",
                  {{"infidelity", result.infidelity},
                   {"converged", result.converged},
                   {"method", to_string(req.options.method)},
                   {"seed", req.problem.seed()},
                   {"n_segments", req.problem.n_segments()},
                   {"restart_best", result.restart_best},
                   {"evaluations", result.evaluations},
                   {"params", result.params}});
  std::ofstream trace(out_dir / "trace.csv");
  trace << "iteration,best_infidelity\n"
        << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    trace << i << ',' << result.trace[i] << '\n';
  }
  std::cout << std::setw(2)
            << json{{"infidelity", result.infidelity},
                    {"converged", result.converged}}
            << '\n';
  return kExitOk;
}

int cmd_export_shape(const Options& o) {
  ShapeFunction shape = ShapeFunction::constant();
  if (!o.input.empty()) {
    const fs::path input(o.input);
    shape = shape_from_json(read_json_file(input), input.parent_path());
  } else if (o.sigma > 0.0) {
    shape = shifted_gaussian(o.sigma, o.grid);
  } else {
    throw SchemaError("export-shape needs --sigma or a shape JSON file");
  }
  const fs::path out(o.out);
  if (out.has_parent_path()) ensure_dir(out.parent_path());
  save_shape_csv(shape, out);
  spdlog::info("wrote {} ({} samples)", out.string(), shape.grid_size());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  init_logging();
  CLI::App app{"spinforge: exact pulse synthesis for linear spin-qubit arrays"};
  app.require_subcommand(1);
  Options o;

  auto add_branch = [&](CLI::App* cmd) {
    cmd->add_option("--minus-branch", o.minus_branch,
                    "Sign of A_- for non-resonant qubits")
        ->check(CLI::IsMember({"+", "-"}));
    cmd->add_flag("--allow-constant-shape", o.allow_constant_shape,
                  "Accept the non-physical constant shape");
  };

  auto* synth = app.add_subcommand("synth", "Compile a circuit into pulses");
  synth->add_option("circuit", o.input, "circuit.json")->required();
  synth->add_option("--device", o.device, "device.json overriding the circuit");
  synth->add_option("--out", o.out, "Output directory");
  synth->add_option("--samples-per-segment", o.samples_per_segment,
                    "Rows per segment in pulses.csv (odd)");
  add_branch(synth);

  auto* verify = app.add_subcommand("verify", "Check a schedule's fidelity");
  verify->add_option("schedule", o.input, "schedule.json")->required();
  verify->add_option("--target", o.target, "Target name or unitary JSON");
  verify->add_option("--trotter-steps", o.trotter_steps,
                     "Steps per segment for the Trotter cross-check");
  verify->add_flag("--allow-constant-shape", o.allow_constant_shape,
                   "Accept the non-physical constant shape");

  auto* optimize = app.add_subcommand("optimize", "Optimize a pulse sequence");
  optimize->add_option("problem", o.input, "problem.json")->required();
  optimize->add_option("--device", o.device, "device.json");
  optimize->add_option("--out", o.out, "Output directory");
  optimize->add_option("--seed", o.seed, "Override the problem seed");

  auto* shape = app.add_subcommand("export-shape", "Write a shape as CSV");
  shape->add_option("shape", o.input, "Optional shape JSON");
  shape->add_option("--sigma", o.sigma, "Shifted-Gaussian width");
  shape->add_option("--grid", o.grid, "Number of samples (odd)");
  shape->add_option("--out", o.out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSchema;
  }

  try {
    if (*synth) return cmd_synth(o);
    if (*verify) return cmd_verify(o);
    if (*optimize) return cmd_optimize(o);
    if (*shape) return cmd_export_shape(o);
  } catch (const InfeasibleRotationError& e) {
    spdlog::error("infeasible gate: {}", e.what());
    return kExitInfeasible;
  } catch (const SchedulingError& e) {
    spdlog::error("scheduling error [{}]: {}", e.rule(), e.what());
    return kExitInfeasible;
  } catch (const CommutationError& e) {
    spdlog::error("{}", e.what());
    return kExitInfeasible;
  } catch (const json::exception& e) {
    spdlog::error("schema error: {}", e.what());
    return kExitSchema;
  } catch (const std::invalid_argument& e) {
    spdlog::error("{}", e.what());
    return kExitSchema;
  } catch (const std::out_of_range& e) {
    spdlog::error("{}", e.what());
    return kExitSchema;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
