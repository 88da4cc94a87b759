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

#pragma once

// Normalized pulse profiles S(tau) on tau = t/T in [0, 1].
//
// Every shape is stored as samples on a uniform grid with an odd number of
// points. Integrals use composite Simpson on that grid; point values use the
// quadratic through the enclosing Simpson panel, consistent with the integral.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spinforge {

inline constexpr int kDefaultShapeGrid = 2001;
inline constexpr double kShapeEndpointTolerance = 1e-9;

enum class ShapeKind { kShiftedGaussian, kConstant, kTabulated };

const char* to_string(ShapeKind kind);

class ShapeFunction {
 public:
  // Constant S = 1. Violates S(0) = S(1) = 0, so is_physical() is false and
  // synthesis refuses it without an explicit override.
  static ShapeFunction constant(int grid_size = kDefaultShapeGrid);

  ShapeKind kind() const noexcept { return kind_; }
  std::optional<double> sigma() const noexcept { return sigma_; }
  bool is_physical() const noexcept { return kind_ != ShapeKind::kConstant; }

  std::span<const double> samples() const noexcept { return samples_; }
  int grid_size() const noexcept { return static_cast<int>(samples_.size()); }
  double step() const noexcept { return 1.0 / (grid_size() - 1); }

  // S(tau) by panel-quadratic interpolation. Throws std::domain_error
  // outside [0, 1].
  double operator()(double tau) const;

  // Integral of S over [0, tau]; exact for the piecewise-quadratic
  // interpolant, so cumulative(1) reproduces the Simpson mean.
  double cumulative(double tau) const;

  // Simpson integral over [0, 1].
  double mean() const;

  bool changes_sign() const;
  std::string describe() const;

  friend bool operator==(const ShapeFunction& a, const ShapeFunction& b);

 private:
  friend ShapeFunction shifted_gaussian(double sigma, int grid_size);
  friend ShapeFunction normalize(std::span<const double> raw);

  ShapeFunction(ShapeKind kind, std::optional<double> sigma,
                std::vector<double> samples);

  ShapeKind kind_ = ShapeKind::kConstant;
  std::optional<double> sigma_;
  std::vector<double> samples_;
};

// [exp(-(tau-1/2)^2 / 2 sigma^2) - exp(-1/(8 sigma^2))] / D, with D the
// Simpson integral of the numerator, so endpoints are exactly zero and the
// mean is one. Throws std::domain_error for sigma <= 0 and
// ValidationError for an even or too-small grid.
ShapeFunction shifted_gaussian(double sigma, int grid_size = kDefaultShapeGrid);

// Scales tabulated samples to unit mean. Requires an odd count >= 3 and
// endpoints within kShapeEndpointTolerance of zero (they are then pinned to
// exactly zero). Throws ValidationError / DegenerateShapeError.
ShapeFunction normalize(std::span<const double> raw);

double cumulative(const ShapeFunction& shape, double tau);

// Composite Simpson over [0, 1] for an odd number of uniform samples.
double simpson(std::span<const double> samples);

// Single-column CSV with header `s`.
ShapeFunction load_shape_csv(const std::filesystem::path& path);
void save_shape_csv(const ShapeFunction& shape,
                    const std::filesystem::path& path);

}  // namespace spinforge
