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

#include "spinforge/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "spinforge/errors.hpp"
#include "spinforge/evolve.hpp"

namespace spinforge {
namespace {

using std::numbers::pi;
namespace fs = std::filesystem;

[[noreturn]] void schema_fail(const std::string& path, const std::string& msg) {
  throw SchemaError(path + ": " + msg);
}

const json& field(const json& j, const std::string& key,
                  const std::string& path) {
  if (!j.is_object()) schema_fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_fail(path + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_fail(path, "must be finite");
  return v;
}

double number_field(const json& j, const std::string& key,
                    const std::string& path) {
  return number(field(j, key, path), path + "." + key);
}

double number_or(const json& j, const std::string& key, double fallback,
                 const std::string& path) {
  return j.contains(key) ? number_field(j, key, path) : fallback;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_fail(path, "expected an integer");
  return j.get<int>();
}

int integer_field(const json& j, const std::string& key,
                  const std::string& path) {
  return integer(field(j, key, path), path + "." + key);
}

std::string string_field(const json& j, const std::string& key,
                         const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_string()) schema_fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> number_array(const json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<int> int_array(const json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(integer(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void expect_sites(const std::vector<int>& sites, std::size_t count,
                  const std::string& path) {
  if (sites.size() != count) {
    schema_fail(path, "expected " + std::to_string(count) + " site(s)");
  }
}

int pair_site(const std::vector<int>& sites, const std::string& path) {
  expect_sites(sites, 2, path);
  if (sites[1] != sites[0] + 1) {
    throw SchedulingError("nearest-neighbour-pair",
                          path + ": two-qubit gates act on (j, j+1) pairs");
  }
  return sites[0];
}

struct ParsedGate {
  GateSpec gate;
  std::vector<ShapeFunction> shapes;
};

ParsedGate parse_gate(const json& g, const std::string& path,
                      const fs::path& base_dir) {
  const std::string kind = string_field(g, "kind", path);
  const json params = g.contains("params") ? g.at("params") : json::object();
  if (!params.is_object()) schema_fail(path + ".params", "expected an object");
  const std::string ppath = path + ".params";
  std::vector<int> sites;
  if (g.contains("sites")) sites = int_array(g.at("sites"), path + ".sites");

  auto one_shape = [&]() {
    return std::vector<ShapeFunction>{
        shape_from_json(field(g, "shape", path), base_dir)};
  };

  if (kind == "z_rotation") {
    expect_sites(sites, 1, path + ".sites");
    return {ZRotation{sites[0], number_field(params, "theta", ppath)},
            one_shape()};
  }
  if (kind == "swap_pow") {
    return {SwapPower{pair_site(sites, path + ".sites"),
                      number_or(params, "k", 1.0, ppath)},
            one_shape()};
  }
  if (kind == "global_rotation") {
    return {GlobalRotation{number_or(params, "phi", 0.0, ppath),
                           number_field(params, "theta", ppath)},
            one_shape()};
  }
  if (kind == "selective_rotation") {
    const auto axis =
        number_array(field(params, "axis", ppath), ppath + ".axis");
    if (axis.size() != 3) schema_fail(ppath + ".axis", "expected 3 entries");
    return {SelectiveRotation{{axis[0], axis[1], axis[2]},
                              number_field(params, "theta", ppath),
                              sites},
            one_shape()};
  }
  if (kind == "cphase") {
    return {ControlledPhase{pair_site(sites, path + ".sites"),
                            number_field(params, "alpha", ppath)},
            one_shape()};
  }
  if (kind == "cnot") {
    expect_sites(sites, 2, path + ".sites");
    std::vector<ShapeFunction> shapes;
    if (params.contains("sigmas")) {
      const auto sig = number_array(params.at("sigmas"), ppath + ".sigmas");
      if (sig.size() != 3) schema_fail(ppath + ".sigmas", "expected 3 widths");
      for (double s : sig) shapes.push_back(shifted_gaussian(s));
    } else {
      const json& shape = field(g, "shape", path);
      if (shape.is_array()) {
        if (shape.size() != 3)
          schema_fail(path + ".shape", "expected 3 shapes");
        for (const json& s : shape)
          shapes.push_back(shape_from_json(s, base_dir));
      } else {
        const ShapeFunction s = shape_from_json(shape, base_dir);
        shapes = {s, s, s};
      }
    }
    return {Cnot{sites[0], sites[1]}, std::move(shapes)};
  }
  schema_fail(path + ".kind", "unknown gate kind `" + kind + "`");
}

}  // namespace

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path.string() + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << std::setw(2) << doc << '\n';
}

DeviceConfig device_from_json(const json& j) {
  const std::string p = "device";
  try {
    return DeviceConfig(integer_field(j, "n_qubits", p),
                        number_field(j, "b_z_tesla", p),
                        number_field(j, "g_idle", p));
  } catch (const SchemaError&) {
    throw;
  } catch (const ValidationError& e) {
    throw SchemaError(std::string("device: ") + e.what());
  }
}

json to_json(const DeviceConfig& device) {
  return {{"n_qubits", device.n_qubits()},
          {"b_z_tesla", device.b_z()},
          {"g_idle", device.g_idle()}};
}

ShapeFunction shape_from_json(const json& j, const fs::path& base_dir) {
  const std::string p = "shape";
  const std::string kind = string_field(j, "kind", p);
  const int grid =
      j.contains("grid") ? integer_field(j, "grid", p) : kDefaultShapeGrid;
  if (kind == "shifted_gaussian") {
    const double sigma = number_field(j, "sigma", p);
    if (sigma <= 0.0) schema_fail(p + ".sigma", "must be positive");
    return shifted_gaussian(sigma, grid);
  }
  if (kind == "constant") return ShapeFunction::constant(grid);
  if (kind == "tabulated") {
    if (j.contains("samples")) {
      return normalize(number_array(j.at("samples"), p + ".samples"));
    }
    fs::path csv = string_field(j, "csv", p);
    if (csv.is_relative() && !base_dir.empty()) csv = base_dir / csv;
    return load_shape_csv(csv);
  }
  schema_fail(p + ".kind", "unknown shape kind `" + kind + "`");
}

json to_json(const ShapeFunction& shape) {
  json j{{"kind", to_string(shape.kind())}, {"grid", shape.grid_size()}};
  if (shape.kind() == ShapeKind::kShiftedGaussian) j["sigma"] = *shape.sigma();
  if (shape.kind() == ShapeKind::kTabulated) {
    j["samples"] =
        std::vector<double>(shape.samples().begin(), shape.samples().end());
  }
  return j;
}

Operator operator_from_json(const json& j) {
  const std::string p = "target";
  const json& re = field(j, "real", p);
  const json& im = field(j, "imag", p);
  if (!re.is_array() || !im.is_array() || re.size() != im.size()) {
    schema_fail(p, "real and imag must be arrays of equal size");
  }
  const auto d = static_cast<Eigen::Index>(re.size());
  int n = 0;
  while ((Eigen::Index{1} << n) < d) ++n;
  if (d < 2 || (Eigen::Index{1} << n) != d || n > kMaxQubits) {
    schema_fail(
        p, "matrix dimension must be a power of two, got " + std::to_string(d));
  }
  Matrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const std::string rp = "[" + std::to_string(r) + "]";
    const auto rr = number_array(re[r], p + ".real" + rp);
    const auto ri = number_array(im[r], p + ".imag" + rp);
    if (static_cast<Eigen::Index>(rr.size()) != d ||
        static_cast<Eigen::Index>(ri.size()) != d) {
      schema_fail(p + rp, "row length must equal the matrix dimension");
    }
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = Complex(rr[c], ri[c]);
  }
  return Operator(n, std::move(m));
}

json to_json(const Operator& op) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < op.dim(); ++r) {
    json rr = json::array();
    json ri = json::array();
    for (Eigen::Index c = 0; c < op.dim(); ++c) {
      rr.push_back(op(r, c).real());
      ri.push_back(op(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"real", std::move(re)}, {"imag", std::move(im)}};
}

CircuitRequest circuit_from_json(const json& j, const fs::path& base_dir) {
  CircuitRequest circuit{device_from_json(field(j, "device", "circuit")), {}};
  const json& gates = field(j, "gates", "circuit");
  if (!gates.is_array()) schema_fail("gates", "expected an array");
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const std::string path = "gates[" + std::to_string(i) + "]";
    const json& g = gates[i];
    CircuitStep step;
    step.duration = number_field(g, "duration_s", path);
    if (step.duration <= 0.0) schema_fail(path + ".duration_s", "must be > 0");
    if (string_field(g, "kind", path) == "parallel") {
      step.parallel = true;
      const json& members =
          field(field(g, "params", path), "gates", path + ".params");
      if (!members.is_array() || members.empty()) {
        schema_fail(path + ".params.gates", "expected a non-empty array");
      }
      for (std::size_t m = 0; m < members.size(); ++m) {
        auto parsed = parse_gate(
            members[m], path + ".params.gates[" + std::to_string(m) + "]",
            base_dir);
        if (std::holds_alternative<Cnot>(parsed.gate)) {
          schema_fail(path, "a CNOT cannot be part of a parallel group");
        }
        step.gates.push_back(std::move(parsed.gate));
        step.shapes.push_back(std::move(parsed.shapes.front()));
      }
    } else {
      auto parsed = parse_gate(g, path, base_dir);
      step.gates.push_back(std::move(parsed.gate));
      step.shapes = std::move(parsed.shapes);
    }
    circuit.steps.push_back(std::move(step));
  }
  return circuit;
}

Schedule compile_circuit(const CircuitRequest& circuit,
                         const SynthOptions& opts) {
  const int n = circuit.device.n_qubits();
  Schedule schedule{circuit.device, {}, Operator::identity(n)};
  Operator target = Operator::identity(n);
  for (const CircuitStep& step : circuit.steps) {
    if (step.parallel) {
      schedule.segments.push_back(
          schedule_parallel(step.gates, step.shapes, step.duration, n, opts));
    } else if (const auto* c = std::get_if<Cnot>(&step.gates.front())) {
      std::array<ShapeFunction, 3> shapes{step.shapes[0], step.shapes[1],
                                          step.shapes[2]};
      auto part = synth_cnot(c->control, c->target,
                             std::span<const ShapeFunction, 3>(shapes),
                             step.duration, circuit.device, opts);
      for (auto& s : part.segments) schedule.segments.push_back(std::move(s));
    } else {
      for (auto& s : synthesize(step.gates.front(), step.shapes.front(),
                                step.duration, n, opts)) {
        schedule.segments.push_back(std::move(s));
      }
    }
    for (const GateSpec& g : step.gates) target = ideal_unitary(g, n) * target;
  }
  schedule.target = target;
  return schedule;
}

json to_json(const PulseSegment& segment) {
  const auto& k = segment.coeffs();
  json blocks = json::array();
  for (const ShapeBlock& b : segment.blocks()) {
    blocks.push_back({{"shape", to_json(b.shape)},
                      {"sites", b.sites},
                      {"couplings", b.couplings},
                      {"esr", b.esr}});
  }
  return {{"duration_s", segment.duration()},
          {"coefficients",
           {{"a", k.a}, {"beta", k.beta}, {"c", k.c}, {"phi", k.phi}}},
          {"blocks", std::move(blocks)}};
}

PulseSegment segment_from_json(const json& j, int n_qubits,
                               bool allow_constant_shape) {
  const std::string p = "segment";
  const json& kj = field(j, "coefficients", p);
  PulseCoefficients k;
  k.a =
      number_array(field(kj, "a", p + ".coefficients"), p + ".coefficients.a");
  k.beta = number_field(kj, "beta", p + ".coefficients");
  k.c =
      number_array(field(kj, "c", p + ".coefficients"), p + ".coefficients.c");
  k.phi = number_field(kj, "phi", p + ".coefficients");
  if (k.n_qubits() != n_qubits) {
    schema_fail(p + ".coefficients.a", "length must match device n_qubits");
  }
  std::vector<ShapeBlock> blocks;
  const json& bj = field(j, "blocks", p);
  if (!bj.is_array() || bj.empty())
    schema_fail(p + ".blocks", "expected array");
  for (std::size_t i = 0; i < bj.size(); ++i) {
    const std::string bp = p + ".blocks[" + std::to_string(i) + "]";
    ShapeBlock b{shape_from_json(field(bj[i], "shape", bp)),
                 int_array(field(bj[i], "sites", bp), bp + ".sites"),
                 int_array(field(bj[i], "couplings", bp), bp + ".couplings"),
                 field(bj[i], "esr", bp).get<bool>()};
    blocks.push_back(std::move(b));
  }
  try {
    return PulseSegment(std::move(k), std::move(blocks),
                        number_field(j, "duration_s", p), allow_constant_shape);
  } catch (const SchemaError&) {
    throw;
  } catch (const ValidationError& e) {
    throw SchemaError(p + ": " + e.what());
  }
}

json to_json(const Schedule& schedule) {
  json segments = json::array();
  for (const auto& s : schedule.segments) segments.push_back(to_json(s));
  json j{{"device", to_json(schedule.device)},
         {"segments", std::move(segments)}};
  if (schedule.target) j["target"] = to_json(*schedule.target);
  return j;
}

Schedule schedule_from_json(const json& j, bool allow_constant_shape) {
  Schedule schedule{device_from_json(field(j, "device", "schedule")), {}, {}};
  const json& segments = field(j, "segments", "schedule");
  if (!segments.is_array()) schema_fail("schedule.segments", "expected array");
  for (const json& s : segments) {
    schedule.segments.push_back(
        segment_from_json(s, schedule.device.n_qubits(), allow_constant_shape));
  }
  if (j.contains("target"))
    schedule.target = operator_from_json(j.at("target"));
  return schedule;
}

json to_json(const FidelityReport& report) {
  return {{"target", report.target_name},
          {"fidelity", report.fidelity},
          {"global_phase", report.global_phase},
          {"max_elementwise_error", report.max_elementwise_error}};
}

void write_pulse_table(std::ostream& out, const Schedule& schedule,
                       int samples_per_segment) {
  if (samples_per_segment < 3 || samples_per_segment % 2 == 0) {
    throw ValidationError("samples per segment must be odd and >= 3");
  }
  const int n = schedule.device.n_qubits();
  out << "t_s";
  for (int j = 0; j < n; ++j) out << ",g_" << j;
  for (int j = 0; j + 1 < n; ++j) out << ",J_" << j;
  out << ",b_rf_T,omega_rf_rad_s,phi_rad\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  double start = 0.0;
  for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
    const PulseSegment& seg = schedule.segments[k];
    out << "#segment " << k << '\n';
    for (int i = 0; i < samples_per_segment; ++i) {
      const double tau = static_cast<double>(i) / (samples_per_segment - 1);
      const PhysicalControls c =
          coefficients_to_physical(seg, schedule.device, tau);
      out << start + tau * seg.duration();
      for (double g : c.g) out << ',' << g;
      for (double jj : c.exchange_j) out << ',' << jj;
      out << ',' << c.b_rf << ',' << c.omega_rf << ',' << c.phi << '\n';
    }
    start += seg.duration();
  }
}

PulseTable read_pulse_table(std::istream& in) {
  PulseTable table;
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("pulse table: empty input");
  {
    std::stringstream header(line);
    std::string col;
    while (std::getline(header, col, ',')) table.columns.push_back(col);
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("#segment", 0) == 0) {
      table.segments.emplace_back();
      continue;
    }
    if (table.segments.empty()) {
      throw SchemaError("pulse table:" + std::to_string(line_no) +
                        ": data before the first #segment marker");
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != table.columns.size()) {
      throw SchemaError("pulse table:" + std::to_string(line_no) +
                        ": expected " + std::to_string(table.columns.size()) +
                        " columns");
    }
    table.segments.back().push_back(std::move(row));
  }
  return table;
}

PulseCoefficients recover_coefficients(
    const std::vector<std::vector<double>>& rows, const DeviceConfig& device) {
  const int n = device.n_qubits();
  const std::size_t width = 2 * n + 3;
  if (rows.size() < 3 || rows.size() % 2 == 0) {
    throw ValidationError("segment needs an odd number of rows >= 3");
  }
  for (const auto& r : rows) {
    if (r.size() != width) throw ValidationError("row width mismatch");
  }
  const double span = rows.back()[0] - rows.front()[0];
  auto integrate = [&](auto&& value) {
    std::vector<double> v(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) v[i] = value(rows[i]);
    return simpson(v) * span;
  };
  const std::size_t b_col = 2 * n;
  const std::size_t w_col = 2 * n + 1;
  const std::size_t p_col = 2 * n + 2;

  PulseCoefficients k = PulseCoefficients::zeros(n);
  for (int j = 0; j < n; ++j) {
    k.a[j] = integrate([&](const auto& r) {
      return device.larmor_per_g() * r[1 + j] - r[w_col];
    });
  }
  for (int j = 0; j + 1 < n; ++j) {
    k.c[j] = integrate([&](const auto& r) { return r[1 + n + j] / kHbar; });
  }
  const auto peak = std::max_element(
      rows.begin(), rows.end(),
      [&](const auto& x, const auto& y) { return x[b_col] < y[b_col]; });
  const double reference = (*peak)[p_col];
  const double signed_beta = integrate([&](const auto& r) {
    const bool flipped = std::abs(wrap_phase(r[p_col] - reference)) > pi / 2;
    return (flipped ? -1.0 : 1.0) * kBohrMagneton * r[b_col] / kHbar;
  });
  k.beta = std::abs(signed_beta);
  k.phi = signed_beta < 0.0 ? wrap_phase(reference + pi) : reference;
  return k;
}

OptimizationRequest optimization_from_json(const json& j,
                                           const fs::path& base_dir) {
  const std::string p = "problem";
  const json& tj = field(j, "target", p);
  std::optional<DeviceConfig> device;
  if (j.contains("device")) device = device_from_json(j.at("device"));

  Operator target;
  if (tj.is_string()) {
    const std::string name = tj.get<std::string>();
    int n = 2;
    if (device) {
      n = device->n_qubits();
    } else if (name == "cswap") {
      n = 3;
    } else if (name == "identity") {
      n = integer_field(j, "n_qubits", p);
    }
    target = named_target(name, n);
  } else {
    target = operator_from_json(tj);
    if (!target.is_unitary())
      schema_fail(p + ".target", "matrix is not unitary");
  }
  if (!device) device = DeviceConfig(target.n_qubits(), 1.0, 2.0);
  if (device->n_qubits() != target.n_qubits()) {
    schema_fail(p + ".device", "n_qubits does not match the target size");
  }

  const int n_segments = integer_field(j, "n_segments", p);
  if (n_segments < 1) schema_fail(p + ".n_segments", "must be >= 1");
  const auto seed =
      j.contains("seed") ? j.at("seed").get<std::uint64_t>() : std::uint64_t{0};
  std::vector<ParameterBounds> bounds =
      OptimizationProblem::default_bounds(target.n_qubits(), n_segments);
  if (j.contains("bounds")) {
    const json& bj = j.at("bounds");
    if (!bj.is_array() || bj.size() != bounds.size()) {
      schema_fail(p + ".bounds", "expected " + std::to_string(bounds.size()) +
                                     " [lower, upper] pairs");
    }
    for (std::size_t i = 0; i < bj.size(); ++i) {
      const auto pair =
          number_array(bj[i], p + ".bounds[" + std::to_string(i) + "]");
      if (pair.size() != 2) schema_fail(p + ".bounds", "pairs need 2 values");
      bounds[i] = {pair[0], pair[1]};
    }
  }

  OptimizeOptions options;
  if (j.contains("method")) {
    options.method = parse_optimizer_method(string_field(j, "method", p));
  }
  if (j.contains("max_iters"))
    options.max_iters = integer_field(j, "max_iters", p);
  options.tol = number_or(j, "tol", options.tol, p);
  if (j.contains("restarts"))
    options.restarts = integer_field(j, "restarts", p);
  if (j.contains("zero_init"))
    options.zero_init = j.at("zero_init").get<bool>();
  if (j.contains("max_evaluations")) {
    options.max_evaluations = j.at("max_evaluations").get<std::int64_t>();
  }

  ShapeFunction shape = j.contains("shape")
                            ? shape_from_json(j.at("shape"), base_dir)
                            : shifted_gaussian(0.15);
  const double duration = number_or(j, "duration_s", 1e-6, p);
  try {
    return {OptimizationProblem(std::move(target), n_segments,
                                std::move(bounds), seed),
            options, *device, std::move(shape), duration};
  } catch (const SchemaError&) {
    throw;
  } catch (const ValidationError& e) {
    throw SchemaError(p + ": " + e.what());
  }
}

}  // namespace spinforge
