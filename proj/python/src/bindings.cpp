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

// Python bindings. Operators cross the boundary as complex NumPy matrices.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "spinforge/errors.hpp"
#include "spinforge/evolve.hpp"
#include "spinforge/io.hpp"
#include "spinforge/optimize.hpp"

namespace py = pybind11;
using namespace spinforge;

namespace {

Operator to_operator(const Matrix& m) {
  int n = 0;
  while ((Eigen::Index{1} << n) < m.rows()) ++n;
  return Operator(n, m);
}

std::vector<PulseSegment> segments_of(const Schedule& s) { return s.segments; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "spinforge: exact pulse synthesis for linear spin-qubit arrays";
  m.attr("__version__") = "0.1.0";

  auto validation = py::register_exception<ValidationError>(
      m, "ValidationError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<InfeasibleRotationError>(m, "InfeasibleRotationError",
                                                  PyExc_ValueError);
  py::register_exception<CommutationError>(m, "CommutationError",
                                           PyExc_RuntimeError);
  py::register_exception<SchedulingError>(m, "SchedulingError",
                                          PyExc_RuntimeError);
  py::register_exception<SchemaError>(m, "SchemaError", validation.ptr());

  // spinops
  m.def(
      "pauli",
      [](char axis, int site, int n) {
        const Pauli p = axis == 'x'   ? Pauli::kX
                        : axis == 'y' ? Pauli::kY
                                      : Pauli::kZ;
        if (axis != 'x' && axis != 'y' && axis != 'z') {
          throw ValidationError("axis must be 'x', 'y' or 'z'");
        }
        return pauli_embed(p, site, n).matrix();
      },
      py::arg("axis"), py::arg("site"), py::arg("n_qubits"));
  m.def(
      "exchange_term",
      [](int site, int n) { return exchange_term(site, n).matrix(); },
      py::arg("site"), py::arg("n_qubits"));
  m.def(
      "hermitian_expm",
      [](const Matrix& h, double scale) {
        return hermitian_expm(to_operator(h), scale).matrix();
      },
      py::arg("h"), py::arg("scale") = 1.0);

  // shapes
  py::class_<ShapeFunction>(m, "ShapeFunction")
      .def_static("constant", &ShapeFunction::constant,
                  py::arg("grid_size") = kDefaultShapeGrid)
      .def_property_readonly("kind",
                             [](const ShapeFunction& s) {
                               return std::string(to_string(s.kind()));
                             })
      .def_property_readonly("sigma", &ShapeFunction::sigma)
      .def_property_readonly("is_physical", &ShapeFunction::is_physical)
      .def_property_readonly("samples",
                             [](const ShapeFunction& s) {
                               return std::vector<double>(s.samples().begin(),
                                                          s.samples().end());
                             })
      .def_property_readonly("grid_size", &ShapeFunction::grid_size)
      .def("__call__", &ShapeFunction::operator(), py::arg("tau"))
      .def("cumulative", &ShapeFunction::cumulative, py::arg("tau"))
      .def("mean", &ShapeFunction::mean)
      .def("changes_sign", &ShapeFunction::changes_sign)
      .def("__eq__", [](const ShapeFunction& a,
                        const ShapeFunction& b) { return a == b; })
      .def("__repr__", &ShapeFunction::describe);
  m.def("shifted_gaussian", &shifted_gaussian, py::arg("sigma"),
        py::arg("grid_size") = kDefaultShapeGrid);
  m.def(
      "normalize",
      [](const std::vector<double>& raw) { return normalize(raw); },
      py::arg("samples"));

  // hamiltonian
  py::class_<DeviceConfig>(m, "DeviceConfig")
      .def(py::init<int, double, double>(), py::arg("n_qubits"),
           py::arg("b_z_tesla"), py::arg("g_idle"))
      .def_property_readonly("n_qubits", &DeviceConfig::n_qubits)
      .def_property_readonly("b_z", &DeviceConfig::b_z)
      .def_property_readonly("g_idle", &DeviceConfig::g_idle)
      .def_property_readonly("omega_rf", &DeviceConfig::omega_rf_idle);

  py::class_<PulseCoefficients>(m, "PulseCoefficients")
      .def(py::init([](std::vector<double> a, double beta,
                       std::vector<double> c, double phi) {
             PulseCoefficients k{std::move(a), beta, std::move(c), phi};
             k.validate(k.n_qubits());
             return k;
           }),
           py::arg("a"), py::arg("beta"), py::arg("c"), py::arg("phi"))
      .def_readonly("a", &PulseCoefficients::a)
      .def_readonly("beta", &PulseCoefficients::beta)
      .def_readonly("c", &PulseCoefficients::c)
      .def_readonly("phi", &PulseCoefficients::phi)
      .def("__repr__", [](const PulseCoefficients& k) {
        std::ostringstream os;
        os << "PulseCoefficients(n_qubits=" << k.n_qubits()
           << ", beta=" << k.beta << ", phi=" << k.phi << ")";
        return os.str();
      });

  py::class_<PulseSegment>(m, "PulseSegment")
      .def(py::init<PulseCoefficients, ShapeFunction, double, bool>(),
           py::arg("coeffs"), py::arg("shape"), py::arg("duration"),
           py::arg("allow_constant_shape") = false)
      .def_property_readonly("coeffs", &PulseSegment::coeffs)
      .def_property_readonly("duration", &PulseSegment::duration)
      .def_property_readonly("n_qubits", &PulseSegment::n_qubits)
      .def_property_readonly(
          "n_blocks", [](const PulseSegment& s) { return s.blocks().size(); });
  m.def(
      "build_h0",
      [](const PulseCoefficients& k) {
        return build_h0(k, k.n_qubits()).matrix();
      },
      py::arg("coeffs"));
  m.def("verify_commuting", &verify_commuting, py::arg("segment"),
        py::arg("n_samples") = 17);

  // synthesis
  py::class_<ZRotation>(m, "ZRotation")
      .def(py::init<int, double>(), py::arg("site"), py::arg("theta"));
  py::class_<SwapPower>(m, "SwapPower")
      .def(py::init<int, double>(), py::arg("site"), py::arg("k") = 1.0);
  py::class_<GlobalRotation>(m, "GlobalRotation")
      .def(py::init<double, double>(), py::arg("phi"), py::arg("theta"));
  py::class_<SelectiveRotation>(m, "SelectiveRotation")
      .def(py::init<std::array<double, 3>, double, std::vector<int>>(),
           py::arg("axis"), py::arg("theta"), py::arg("resonant"));
  py::class_<ControlledPhase>(m, "ControlledPhase")
      .def(py::init<int, double>(), py::arg("site"), py::arg("alpha"));
  py::class_<Cnot>(m, "Cnot").def(py::init<int, int>(), py::arg("control"),
                                  py::arg("target"));

  py::class_<SynthOptions>(m, "SynthOptions")
      .def(py::init([](bool minus, bool allow_constant) {
             return SynthOptions{
                 minus ? MinusBranch::kMinus : MinusBranch::kPlus,
                 allow_constant};
           }),
           py::arg("minus_branch") = false,
           py::arg("allow_constant_shape") = false);

  m.def("synthesize", &synthesize, py::arg("gate"), py::arg("shape"),
        py::arg("duration"), py::arg("n_qubits"),
        py::arg("options") = SynthOptions{});
  m.def(
      "schedule_parallel",
      [](const std::vector<GateSpec>& gates,
         const std::vector<ShapeFunction>& shapes, double duration, int n,
         const SynthOptions& opts) {
        return schedule_parallel(gates, shapes, duration, n, opts);
      },
      py::arg("gates"), py::arg("shapes"), py::arg("duration"),
      py::arg("n_qubits"), py::arg("options") = SynthOptions{});
  m.def(
      "cphase_coefficients",
      [](double alpha) {
        const auto k = cphase_coefficients(alpha);
        return py::make_tuple(k.a1, k.a2, k.c);
      },
      py::arg("alpha"));
  m.def(
      "ideal_unitary",
      [](const GateSpec& g, int n) { return ideal_unitary(g, n).matrix(); },
      py::arg("gate"), py::arg("n_qubits"));
  m.def(
      "named_target",
      [](const std::string& name, int n) {
        return named_target(name, n).matrix();
      },
      py::arg("name"), py::arg("n_qubits"));

  py::class_<Schedule>(m, "Schedule")
      .def_property_readonly("device",
                             [](const Schedule& s) { return s.device; })
      .def_property_readonly("segments", &segments_of)
      .def_property_readonly("target",
                             [](const Schedule& s) -> py::object {
                               if (!s.target) return py::none();
                               return py::cast(s.target->matrix());
                             })
      .def("to_json", [](const Schedule& s) { return to_json(s).dump(); })
      .def_static(
          "from_json",
          [](const std::string& text) {
            return schedule_from_json(json::parse(text));
          },
          py::arg("text"))
      .def(
          "pulse_table",
          [](const Schedule& s, int samples) {
            std::ostringstream os;
            write_pulse_table(os, s, samples);
            return os.str();
          },
          py::arg("samples_per_segment") = kDefaultShapeGrid);
  m.def(
      "synth_cnot",
      [](int control, int target, std::array<double, 3> sigmas, double duration,
         const DeviceConfig& device) {
        return synth_cnot(control, target, sigmas, duration, device);
      },
      py::arg("control"), py::arg("target"),
      py::arg("sigmas") = std::array<double, 3>{0.1, 0.15, 0.3},
      py::arg("duration") = 1e-6, py::arg("device"));
  m.def(
      "compile_circuit",
      [](const std::string& text, const SynthOptions& o) {
        return compile_circuit(circuit_from_json(json::parse(text)), o);
      },
      py::arg("circuit_json"), py::arg("options") = SynthOptions{});

  // evolve
  m.def(
      "exact_unitary",
      [](const PulseSegment& s) { return exact_unitary(s).matrix(); },
      py::arg("segment"));
  m.def(
      "trotter_unitary",
      [](const PulseSegment& s, int n) {
        return trotter_unitary(s, n).matrix();
      },
      py::arg("segment"), py::arg("n_steps"));
  m.def(
      "sequence_unitary",
      [](const std::vector<PulseSegment>& segs) {
        return sequence_unitary(segs).matrix();
      },
      py::arg("segments"));

  py::class_<FidelityReport>(m, "FidelityReport")
      .def_readonly("fidelity", &FidelityReport::fidelity)
      .def_readonly("global_phase", &FidelityReport::global_phase)
      .def_readonly("max_elementwise_error",
                    &FidelityReport::max_elementwise_error);
  m.def(
      "gate_fidelity",
      [](const Matrix& u, const Matrix& v) {
        return gate_fidelity(to_operator(u), to_operator(v));
      },
      py::arg("u"), py::arg("v"));

  py::class_<RotatingFrameReport>(m, "RotatingFrameReport")
      .def_readonly("passed", &RotatingFrameReport::pass)
      .def_readonly("segment_cycles", &RotatingFrameReport::segment_cycles)
      .def_readonly("segment_deficits", &RotatingFrameReport::segment_deficits)
      .def_readonly("total_cycles", &RotatingFrameReport::total_cycles)
      .def_readonly("warning", &RotatingFrameReport::warning);
  m.def("rotating_frame_check", &rotating_frame_check, py::arg("schedule"),
        py::arg("tolerance") = kRotatingFrameTolerance);

  // optimize
  py::class_<OptimizationProblem>(m, "OptimizationProblem")
      .def(py::init([](const Matrix& target, int n_segments,
                       std::uint64_t seed) {
             return OptimizationProblem(to_operator(target), n_segments, seed);
           }),
           py::arg("target"), py::arg("n_segments"), py::arg("seed") = 0)
      .def_property_readonly("n_params", &OptimizationProblem::n_params)
      .def(
          "infidelity",
          [](const OptimizationProblem& p, const std::vector<double>& x) {
            return infidelity(x, p);
          },
          py::arg("params"));

  py::class_<OptimizationResult>(m, "OptimizationResult")
      .def_readonly("params", &OptimizationResult::params)
      .def_readonly("infidelity", &OptimizationResult::infidelity)
      .def_readonly("converged", &OptimizationResult::converged)
      .def_readonly("trace", &OptimizationResult::trace)
      .def_readonly("restart_best", &OptimizationResult::restart_best)
      .def_readonly("evaluations", &OptimizationResult::evaluations);
  m.def(
      "optimize_sequence",
      [](const OptimizationProblem& p, const std::string& method, int restarts,
         int max_iters, double tol, bool zero_init) {
        OptimizeOptions o;
        o.method = parse_optimizer_method(method);
        o.restarts = restarts;
        o.max_iters = max_iters;
        o.tol = tol;
        o.zero_init = zero_init;
        py::gil_scoped_release release;
        return optimize_sequence(p, o);
      },
      py::arg("problem"), py::arg("method") = "nelder_mead",
      py::arg("restarts") = 1, py::arg("max_iters") = 20000,
      py::arg("tol") = 1e-10, py::arg("zero_init") = false);
}
