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

#include "spinforge/optimize.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "spinforge/errors.hpp"

namespace spinforge {
namespace {

using std::numbers::pi;

using Vector = std::vector<double>;

// Search-space geometry. A segment's drive enters H0 only through
// beta (cos phi, sin phi), so when phi's bounds span a full turn the search
// runs on raw coordinates where phi wraps and a negative beta is read as
// (-beta, phi + pi). Every other parameter is clamped to its bounds.
class Geometry {
 public:
  explicit Geometry(const OptimizationProblem& problem)
      : bounds_(problem.bounds()),
        periodic_(bounds_.size(), false),
        reflect_to_(bounds_.size(), -1) {
    const int n = problem.n_qubits();
    const int per = problem.params_per_segment();
    for (int s = 0; s < problem.n_segments(); ++s) {
      const int beta = s * per + n;
      const int phi = s * per + per - 1;
      const auto& pb = bounds_[phi];
      if (std::abs((pb.upper - pb.lower) - 2.0 * pi) < 1e-12) {
        periodic_[phi] = true;
        if (bounds_[beta].lower == 0.0) reflect_to_[beta] = phi;
      }
    }
  }

  // Raw-coordinate limits; periodic parameters are unbounded.
  double lower(std::size_t i) const {
    if (periodic_[i]) return -std::numeric_limits<double>::infinity();
    return reflect_to_[i] >= 0 ? -bounds_[i].upper : bounds_[i].lower;
  }
  double upper(std::size_t i) const {
    if (periodic_[i]) return std::numeric_limits<double>::infinity();
    return bounds_[i].upper;
  }

  // Keeps raw coordinates inside the region that maps onto the bounds.
  void clamp(Vector& x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = std::clamp(x[i], lower(i), upper(i));
    }
  }

  // Equivalent point inside the bounds box.
  Vector canonical(const Vector& raw) const {
    Vector x = raw;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (reflect_to_[i] >= 0 && x[i] < 0.0) {
        x[i] = -x[i];
        x[reflect_to_[i]] += pi;
      }
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto& b = bounds_[i];
      if (periodic_[i]) {
        x[i] =
            b.lower +
            std::fmod(std::fmod(x[i] - b.lower, 2.0 * pi) + 2.0 * pi, 2.0 * pi);
      }
      x[i] = std::clamp(x[i], b.lower, b.upper);
    }
    return x;
  }

 private:
  std::vector<ParameterBounds> bounds_;
  std::vector<bool> periodic_;
  std::vector<int> reflect_to_;
};

// Evaluates raw coordinates, tracking the best canonical point and the
// evaluation budget.
class Tracker {
 public:
  Tracker(const InfidelityObjective& f, const Geometry& geometry,
          std::int64_t budget)
      : f_(f), geometry_(geometry), budget_(budget) {}

  double operator()(const Vector& raw) {
    Vector x = geometry_.canonical(raw);
    const double v = f_(x);
    ++count_;
    if (v < best_) {
      best_ = v;
      best_x_ = std::move(x);
    }
    return v;
  }

  const Geometry& geometry() const { return geometry_; }
  bool exhausted() const { return budget_ > 0 && count_ >= budget_; }
  double best() const { return best_; }
  const Vector& best_x() const { return best_x_; }
  std::int64_t count() const { return count_; }

 private:
  const InfidelityObjective& f_;
  const Geometry& geometry_;
  std::int64_t budget_;
  std::int64_t count_ = 0;
  double best_ = std::numeric_limits<double>::infinity();
  Vector best_x_;
};

// Adaptive Nelder-Mead (dimension-dependent coefficients) on the box.
void nelder_mead(Vector x0, const std::vector<ParameterBounds>& bounds,
                 const OptimizeOptions& opts, Tracker& eval,
                 std::vector<double>& trace) {
  const std::size_t n = x0.size();
  const double dn = static_cast<double>(n);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / dn;
  const double contract = 0.75 - 0.5 / dn;
  const double shrink = 1.0 - 1.0 / dn;

  std::vector<Vector> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) {
    const double width = bounds[i].upper - bounds[i].lower;
    double step = 0.05 * (width > 0.0 ? width : 1.0);
    if (x0[i] + step > bounds[i].upper) step = -step;
    simplex[i + 1][i] += step;
    eval.geometry().clamp(simplex[i + 1]);
  }
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  Vector centroid(n), trial(n), second(n);
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return values[a] < values[b];
    });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t next_worst = order[n - 1];
    trace.push_back(eval.best());
    if (eval.best() <= opts.tol || eval.exhausted()) return;
    if (values[worst] - values[best] < 1e-15) {
      double diameter = 0.0;
      for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
          diameter =
              std::max(diameter, std::abs(simplex[i][k] - simplex[best][k]));
        }
      }
      if (diameter < 1e-10) return;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / dn;
    }
    auto along = [&](double t, Vector& out) {
      for (std::size_t k = 0; k < n; ++k) {
        out[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
      }
      eval.geometry().clamp(out);
      return eval(out);
    };

    const double fr = along(-reflect, trial);
    if (fr < values[best]) {
      const double fe = along(-expand, second);
      if (fe < fr) {
        simplex[worst] = second;
        values[worst] = fe;
      } else {
        simplex[worst] = trial;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[next_worst]) {
      simplex[worst] = trial;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const double fc = along(outside ? -contract : contract, second);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = second;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k) {
        simplex[i][k] =
            simplex[best][k] + shrink * (simplex[i][k] - simplex[best][k]);
      }
      values[i] = eval(simplex[i]);
    }
  }
}

Vector gradient_of(Tracker& eval, const Vector& x, double h) {
  Vector g(x.size());
  Vector probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = eval(probe);
    probe[i] = x[i] - h;
    const double down = eval(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

double dot(const Vector& a, const Vector& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Projected quasi-Newton (BFGS) descent on central finite-difference
// gradients with Armijo backtracking. Coordinates pinned at a bound with the
// gradient pointing outward are frozen; the inverse Hessian is reset whenever
// that active set changes.
void gradient_descent(Vector x, const OptimizeOptions& opts, Tracker& eval,
                      std::vector<double>& trace) {
  const std::size_t n = x.size();
  const Geometry& geo = eval.geometry();
  constexpr double kStep = 1e-6;
  constexpr int kStallLimit = 10;
  geo.clamp(x);
  double fx = eval(x);
  Vector g = gradient_of(eval, x, kStep);
  Eigen::MatrixXd inv_h = Eigen::MatrixXd::Identity(n, n);
  std::vector<bool> active(n, false);
  Vector dir(n), next(n), s(n), y(n);
  int stalled = 0;

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    trace.push_back(eval.best());
    if (eval.best() <= opts.tol || eval.exhausted()) return;

    bool changed = false;
    double projected = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool pin = (x[i] <= geo.lower(i) && g[i] > 0.0) ||
                       (x[i] >= geo.upper(i) && g[i] < 0.0);
      changed = changed || pin != active[i];
      active[i] = pin;
      if (!pin) projected += g[i] * g[i];
    }
    if (std::sqrt(projected) < 1e-12) return;
    if (changed) inv_h.setIdentity();

    Vector gf = g;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i]) gf[i] = 0.0;
    }
    Eigen::Map<const Eigen::VectorXd> gv(gf.data(), n);
    Eigen::VectorXd d = -(inv_h * gv);
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i]) d[i] = 0.0;
    }
    if (d.dot(gv) >= 0.0) {
      inv_h.setIdentity();
      d = -gv;
    }
    std::copy(d.data(), d.data() + n, dir.begin());

    double t = 1.0;
    double fn = 0.0;
    bool accepted = false;
    for (int k = 0; k < 40; ++k) {
      for (std::size_t i = 0; i < n; ++i) next[i] = x[i] + t * dir[i];
      geo.clamp(next);
      fn = eval(next);
      for (std::size_t i = 0; i < n; ++i) s[i] = next[i] - x[i];
      if (fn <= fx + 1e-4 * dot(g, s)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (inv_h.isIdentity()) return;
      inv_h.setIdentity();
      continue;
    }
    stalled = fx - fn <= 1e-15 * std::max(fx, 1e-300) ? stalled + 1 : 0;
    if (stalled >= kStallLimit) return;

    const Vector g_next = gradient_of(eval, next, kStep);
    for (std::size_t i = 0; i < n; ++i) y[i] = g_next[i] - g[i];
    const double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      Eigen::Map<const Eigen::VectorXd> sv(s.data(), n);
      Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
      inv_h = (id - rho * sv * yv.transpose()) * inv_h *
                  (id - rho * yv * sv.transpose()) +
              rho * sv * sv.transpose();
    }
    x = next;
    fx = fn;
    g = g_next;
  }
}

}  // namespace

OptimizationProblem::OptimizationProblem(Operator target, int n_segments,
                                         std::uint64_t seed)
    : OptimizationProblem(
          target, n_segments,
          default_bounds(target.n_qubits(), std::max(n_segments, 0)), seed) {}

OptimizationProblem::OptimizationProblem(Operator target, int n_segments,
                                         std::vector<ParameterBounds> bounds,
                                         std::uint64_t seed)
    : target_(std::move(target)),
      n_segments_(n_segments),
      bounds_(std::move(bounds)),
      seed_(seed) {
  register_dim(target_.n_qubits());
  if (n_segments < 1) {
    throw ValidationError("optimization needs at least one segment");
  }
  if (!target_.is_unitary()) {
    throw ValidationError("optimization target must be unitary");
  }
  if (static_cast<int>(bounds_.size()) != n_params()) {
    throw ValidationError("expected " + std::to_string(n_params()) +
                          " parameter bounds, got " +
                          std::to_string(bounds_.size()));
  }
  const int per = params_per_segment();
  for (int i = 0; i < n_params(); ++i) {
    const auto& b = bounds_[i];
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper) ||
        b.lower > b.upper) {
      throw ValidationError("parameter bounds must be finite intervals");
    }
    if (i % per == n_qubits() && b.lower < 0.0) {
      throw ValidationError("beta bounds must be non-negative");
    }
  }
}

std::vector<ParameterBounds> OptimizationProblem::default_bounds(
    int n_qubits, int n_segments) {
  std::vector<ParameterBounds> b;
  for (int s = 0; s < n_segments; ++s) {
    for (int j = 0; j < n_qubits; ++j) b.push_back({-4.0 * pi, 4.0 * pi});
    b.push_back({0.0, 4.0 * pi});
    for (int j = 0; j + 1 < n_qubits; ++j) b.push_back({-4.0 * pi, 4.0 * pi});
    b.push_back({-pi, pi});
  }
  return b;
}

PulseCoefficients unpack_segment(std::span<const double> params, int n_qubits,
                                 int segment) {
  const std::size_t per = 2 * n_qubits + 1;
  if (params.size() < per * (segment + 1)) {
    throw ValidationError("parameter vector too short for segment " +
                          std::to_string(segment));
  }
  const auto p = params.subspan(per * segment, per);
  PulseCoefficients k;
  k.a.assign(p.begin(), p.begin() + n_qubits);
  k.beta = p[n_qubits];
  k.c.assign(p.begin() + n_qubits + 1, p.begin() + 2 * n_qubits);
  k.phi = p[2 * n_qubits];
  return k;
}

std::vector<double> pack_segments(std::span<const PulseCoefficients> segments) {
  std::vector<double> out;
  for (const auto& k : segments) {
    out.insert(out.end(), k.a.begin(), k.a.end());
    out.push_back(k.beta);
    out.insert(out.end(), k.c.begin(), k.c.end());
    out.push_back(k.phi);
  }
  return out;
}

InfidelityObjective::InfidelityObjective(const OptimizationProblem& problem)
    : problem_(problem), n_(problem.n_qubits()) {
  const auto d = register_dim(n_);
  x_sum_ = Matrix::Zero(d, d);
  y_sum_ = Matrix::Zero(d, d);
  for (int j = 0; j < n_; ++j) {
    z_.push_back(pauli_embed(Pauli::kZ, j, n_).matrix());
    x_sum_ += pauli_embed(Pauli::kX, j, n_).matrix();
    y_sum_ += pauli_embed(Pauli::kY, j, n_).matrix();
  }
  for (int j = 0; j + 1 < n_; ++j) {
    exchange_.push_back(exchange_term(j, n_).matrix());
  }
}

Matrix InfidelityObjective::propagator(std::span<const double> params) const {
  if (static_cast<int>(params.size()) != problem_.n_params()) {
    throw ValidationError("expected " + std::to_string(problem_.n_params()) +
                          " parameters, got " + std::to_string(params.size()));
  }
  const auto d = problem_.target().dim();
  const int per = problem_.params_per_segment();
  Matrix u = Matrix::Identity(d, d);
  Matrix h(d, d);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(d);
  Eigen::VectorXcd phases(d);
  for (int s = 0; s < problem_.n_segments(); ++s) {
    const double* p = params.data() + s * per;
    const double beta = p[n_];
    const double phi = p[2 * n_];
    h = (0.5 * beta * std::cos(phi)) * x_sum_ +
        (0.5 * beta * std::sin(phi)) * y_sum_;
    for (int j = 0; j < n_; ++j) h += (0.5 * p[j]) * z_[j];
    for (int j = 0; j + 1 < n_; ++j) h += (0.25 * p[n_ + 1 + j]) * exchange_[j];
    solver.compute(h);
    const auto& w = solver.eigenvalues();
    for (Eigen::Index k = 0; k < d; ++k) phases(k) = std::polar(1.0, -w(k));
    const Matrix& v = solver.eigenvectors();
    u = v * (phases.asDiagonal() * (v.adjoint() * u));
  }
  return u;
}

double InfidelityObjective::operator()(std::span<const double> params) const {
  ++evaluations_;
  const Matrix u = propagator(params);
  const Complex overlap =
      (problem_.target().matrix().conjugate().cwiseProduct(u)).sum();
  return std::max(0.0, 1.0 - std::abs(overlap) / static_cast<double>(u.rows()));
}

double infidelity(std::span<const double> params,
                  const OptimizationProblem& problem) {
  return InfidelityObjective(problem)(params);
}

std::vector<double> finite_difference_gradient(
    std::span<const double> params, const OptimizationProblem& problem,
    double h) {
  const InfidelityObjective f(problem);
  std::vector<double> probe(params.begin(), params.end());
  std::vector<double> g(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    probe[i] = params[i] + h;
    const double up = f(probe);
    probe[i] = params[i] - h;
    const double down = f(probe);
    probe[i] = params[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

const char* to_string(OptimizerMethod method) {
  switch (method) {
    case OptimizerMethod::kNelderMead:
      return "nelder_mead";
    case OptimizerMethod::kFiniteDiffGradient:
      return "finite_diff_gradient";
  }
  return "unknown";
}

OptimizerMethod parse_optimizer_method(const std::string& raw) {
  std::string name = raw;
  std::replace(name.begin(), name.end(), '-', '_');
  if (name == "nelder_mead") return OptimizerMethod::kNelderMead;
  if (name == "finite_diff_gradient") {
    return OptimizerMethod::kFiniteDiffGradient;
  }
  throw ValidationError("unknown optimizer method `" + raw + "`");
}

OptimizationResult optimize_sequence(const OptimizationProblem& problem,
                                     const OptimizeOptions& options) {
  if (options.restarts < 1 || options.max_iters < 1) {
    throw ValidationError("optimizer needs restarts >= 1 and max_iters >= 1");
  }
  const InfidelityObjective objective(problem);
  const Geometry geometry(problem);
  std::mt19937_64 rng(problem.seed());
  const auto& bounds = problem.bounds();

  OptimizationResult result;
  for (int r = 0; r < options.restarts; ++r) {
    std::int64_t budget = 0;
    if (options.max_evaluations > 0) {
      budget = options.max_evaluations - result.evaluations;
      if (budget <= 0) break;
    }
    Vector x0(problem.n_params());
    if (options.zero_init && r == 0) {
      std::fill(x0.begin(), x0.end(), 0.0);
      geometry.clamp(x0);
    } else {
      for (std::size_t i = 0; i < x0.size(); ++i) {
        std::uniform_real_distribution<double> u(bounds[i].lower,
                                                 bounds[i].upper);
        x0[i] = u(rng);
      }
    }
    Tracker local(objective, geometry, budget);
    std::vector<double> local_trace;
    if (options.method == OptimizerMethod::kNelderMead) {
      nelder_mead(x0, bounds, options, local, local_trace);
    } else {
      gradient_descent(x0, options, local, local_trace);
    }
    result.evaluations += local.count();
    result.restart_best.push_back(local.best());
    if (local.best() < result.infidelity || result.params.empty()) {
      result.infidelity = local.best();
      result.params = local.best_x();
    }
    for (double v : local_trace) {
      const double prev = result.trace.empty() ? v : result.trace.back();
      result.trace.push_back(std::min(v, prev));
    }
    if (!result.trace.empty()) {
      result.trace.back() = std::min(result.trace.back(), result.infidelity);
    }
    if (result.infidelity <= options.tol) break;
  }
  result.converged = result.infidelity <= options.tol;
  return result;
}

Schedule to_schedule(std::span<const double> params,
                     const OptimizationProblem& problem,
                     const DeviceConfig& device,
                     std::span<const ShapeFunction> shapes, double duration) {
  if (device.n_qubits() != problem.n_qubits()) {
    throw ValidationError("device and problem register sizes differ");
  }
  if (shapes.empty() ||
      (shapes.size() != 1 &&
       static_cast<int>(shapes.size()) != problem.n_segments())) {
    throw ValidationError("need one shape, or one shape per segment");
  }
  Schedule schedule{device, {}, problem.target()};
  for (int s = 0; s < problem.n_segments(); ++s) {
    const ShapeFunction& shape = shapes.size() == 1 ? shapes[0] : shapes[s];
    schedule.segments.emplace_back(
        unpack_segment(params, problem.n_qubits(), s), shape, duration);
  }
  return schedule;
}

}  // namespace spinforge
