/*
 Copyright 2026 The alip-stairs Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <array>
#include <span>

namespace alip {

/// Fourth-order scalar Bezier curve on [0, duration] in Bernstein form.
class BezierCurve {
 public:
  static constexpr int kOrder = 4;
  static constexpr int kNumPoints = kOrder + 1;
  using ControlPoints = std::array<double, kNumPoints>;

  BezierCurve(const ControlPoints& control_points, double duration);

  const ControlPoints& control_points() const noexcept { return points_; }
  double duration() const noexcept { return duration_; }

  /// Value at time t in [0, duration]; RangeError outside.
  double eval(double t) const;
  /// Exact time derivative via the hodograph.
  double derivative(double t) const;
  double second_derivative(double t) const;

  double min_control_point() const noexcept;
  double max_control_point() const noexcept;

  friend bool operator==(const BezierCurve&, const BezierCurve&) = default;

 private:
  double phase(double t) const;

  ControlPoints points_;
  double duration_;
};

struct TimedSample {
  double t;
  double value;
};

struct BezierFit {
  BezierCurve curve;
  /// Euclidean norm of the sample residual vector.
  double residual;
};

/// Least-squares fourth-order fit. Needs at least five distinct sample
/// times in [0, duration]; throws RankError otherwise.
BezierFit bezier_fit(std::span<const TimedSample> samples, double duration);

/// Bernstein basis of degree n at s in [0, 1].
template <int N>
std::array<double, N + 1> bernstein(double s) {
  std::array<double, N + 1> b{};
  const double u = 1.0 - s;
  b[0] = 1.0;
  for (int k = 1; k <= N; ++k) {
    double carry = 0.0;
    for (int i = 0; i < k; ++i) {
      const double bi = b[i];
      b[i] = carry + u * bi;
      carry = s * bi;
    }
    b[k] = carry;
  }
  return b;
}

}  // namespace alip
