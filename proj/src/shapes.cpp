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

#include "spinforge/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spinforge/errors.hpp"

namespace spinforge {
namespace {

void check_grid(std::size_t n) {
  if (n < 3 || n % 2 == 0) {
    throw ValidationError(
        "shape grid must have an odd number of samples >= 3, got " +
        std::to_string(n));
  }
}

void check_tau(double tau, const char* what) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::domain_error(std::string(what) + ": tau must lie in [0, 1]");
  }
}

}  // namespace

const char* to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kShiftedGaussian:
      return "shifted_gaussian";
    case ShapeKind::kConstant:
      return "constant";
    case ShapeKind::kTabulated:
      return "tabulated";
  }
  return "unknown";
}

double simpson(std::span<const double> samples) {
  check_grid(samples.size());
  const std::size_t last = samples.size() - 1;
  const double h = 1.0 / static_cast<double>(last);
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i < last; ++i) {
    (i % 2 == 1 ? odd : even) += samples[i];
  }
  return h / 3.0 * (samples.front() + samples.back() + 4.0 * odd + 2.0 * even);
}

ShapeFunction::ShapeFunction(ShapeKind kind, std::optional<double> sigma,
                             std::vector<double> samples)
    : kind_(kind), sigma_(sigma), samples_(std::move(samples)) {}

ShapeFunction ShapeFunction::constant(int grid_size) {
  check_grid(static_cast<std::size_t>(std::max(grid_size, 0)));
  return ShapeFunction(ShapeKind::kConstant, std::nullopt,
                       std::vector<double>(grid_size, 1.0));
}

ShapeFunction shifted_gaussian(double sigma, int grid_size) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::domain_error("shifted_gaussian: sigma must be positive");
  }
  check_grid(static_cast<std::size_t>(std::max(grid_size, 0)));
  const double floor = std::exp(-1.0 / (8.0 * sigma * sigma));
  const double h = 1.0 / (grid_size - 1);
  std::vector<double> s(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    const double x = i * h - 0.5;
    s[i] = std::exp(-x * x / (2.0 * sigma * sigma)) - floor;
  }
  // The analytic numerator vanishes at the ends; pin it against rounding.
  s.front() = 0.0;
  s.back() = 0.0;
  const double d = simpson(s);
  for (double& v : s) {
    v = std::max(v, 0.0) / d;
  }
  return ShapeFunction(ShapeKind::kShiftedGaussian, sigma, std::move(s));
}

ShapeFunction normalize(std::span<const double> raw) {
  check_grid(raw.size());
  for (double v : raw) {
    if (!std::isfinite(v)) {
      throw ValidationError("normalize: shape samples must be finite");
    }
  }
  if (std::abs(raw.front()) > kShapeEndpointTolerance ||
      std::abs(raw.back()) > kShapeEndpointTolerance) {
    throw ValidationError("normalize: shape must start and end at zero");
  }
  std::vector<double> s(raw.begin(), raw.end());
  s.front() = 0.0;
  s.back() = 0.0;
  const double integral = simpson(s);
  const double scale = std::max(
      1.0, *std::max_element(s.begin(), s.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
      }));
  if (std::abs(integral) <= 1e-14 * std::abs(scale)) {
    throw DegenerateShapeError("normalize: shape integrates to zero");
  }
  for (double& v : s) v /= integral;
  return ShapeFunction(ShapeKind::kTabulated, std::nullopt, std::move(s));
}

double ShapeFunction::operator()(double tau) const {
  check_tau(tau, "shape value");
  // Quadratic through the three nodes of the enclosing Simpson panel, so
  // point values integrate exactly to the normalization quadrature.
  const std::size_t last = samples_.size() - 1;
  const double x = tau * static_cast<double>(last);
  const std::size_t base =
      2 * std::min(static_cast<std::size_t>(x / 2.0), last / 2 - 1);
  const double u = x - static_cast<double>(base);
  return 0.5 * (u - 1.0) * (u - 2.0) * samples_[base] -
         u * (u - 2.0) * samples_[base + 1] +
         0.5 * u * (u - 1.0) * samples_[base + 2];
}

double ShapeFunction::cumulative(double tau) const {
  check_tau(tau, "cumulative");
  const std::size_t last = samples_.size() - 1;
  const double h = step();
  const double x = tau * static_cast<double>(last);
  std::size_t panel = static_cast<std::size_t>(x / 2.0);
  panel = std::min(panel, last / 2 - 1);
  const std::size_t base = 2 * panel;

  double total = 0.0;
  for (std::size_t i = 0; i < base; i += 2) {
    total += h / 3.0 * (samples_[i] + 4.0 * samples_[i + 1] + samples_[i + 2]);
  }
  // Integrate the quadratic through the panel's three nodes from its start.
  const double u = x - static_cast<double>(base);
  const double f0 = samples_[base];
  const double f1 = samples_[base + 1];
  const double f2 = samples_[base + 2];
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double w0 = u3 / 6.0 - 0.75 * u2 + u;
  const double w1 = -u3 / 3.0 + u2;
  const double w2 = u3 / 6.0 - 0.25 * u2;
  return total + h * (f0 * w0 + f1 * w1 + f2 * w2);
}

double ShapeFunction::mean() const { return simpson(samples_); }

bool ShapeFunction::changes_sign() const {
  return std::any_of(samples_.begin(), samples_.end(),
                     [](double v) { return v < 0.0; });
}

std::string ShapeFunction::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (sigma_) os << "(sigma=" << *sigma_ << ")";
  os << "[M=" << samples_.size() << "]";
  return os.str();
}

bool operator==(const ShapeFunction& a, const ShapeFunction& b) {
  return a.kind_ == b.kind_ && a.sigma_ == b.sigma_ && a.samples_ == b.samples_;
}

double cumulative(const ShapeFunction& shape, double tau) {
  return shape.cumulative(tau);
}

ShapeFunction load_shape_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open shape file " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError(path.string() + ": empty shape file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "s") {
    throw ValidationError(path.string() + ":1: expected header `s`");
  }
  std::vector<double> values;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      values.push_back(std::stod(line, &used));
      if (used != line.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": not a number: " + line);
    }
  }
  return normalize(values);
}

void save_shape_csv(const ShapeFunction& shape,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("cannot write shape file " + path.string());
  }
  out << "s\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (double v : shape.samples()) out << v << '\n';
}

}  // namespace spinforge
