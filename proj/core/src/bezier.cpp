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

#include "alip/bezier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "alip/errors.hpp"

namespace alip {

BezierCurve::BezierCurve(const ControlPoints& control_points, double duration)
    : points_(control_points), duration_(duration) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ParameterError("BezierCurve: duration must be positive");
  }
  for (double p : points_) {
    if (!std::isfinite(p)) throw ParameterError("BezierCurve: non-finite control point");
  }
}

double BezierCurve::phase(double t) const {
  if (!(t >= 0.0 && t <= duration_)) {
    std::ostringstream os;
    os << "BezierCurve: t=" << t << " outside [0, " << duration_ << "]";
    throw RangeError(os.str());
  }
  return t / duration_;
}

double BezierCurve::eval(double t) const {
  const auto b = bernstein<4>(phase(t));
  double v = 0.0;
  for (int i = 0; i < kNumPoints; ++i) v += b[i] * points_[i];
  return v;
}

double BezierCurve::derivative(double t) const {
  const auto b = bernstein<3>(phase(t));
  double v = 0.0;
  for (int i = 0; i < 4; ++i) v += b[i] * (points_[i + 1] - points_[i]);
  return 4.0 * v / duration_;
}

double BezierCurve::second_derivative(double t) const {
  const auto b = bernstein<2>(phase(t));
  double v = 0.0;
  for (int i = 0; i < 3; ++i) v += b[i] * (points_[i + 2] - 2.0 * points_[i + 1] + points_[i]);
  return 12.0 * v / (duration_ * duration_);
}

double BezierCurve::min_control_point() const noexcept {
  return *std::min_element(points_.begin(), points_.end());
}

double BezierCurve::max_control_point() const noexcept {
  return *std::max_element(points_.begin(), points_.end());
}

BezierFit bezier_fit(std::span<const TimedSample> samples, double duration) {
  if (!(duration > 0.0)) throw ParameterError("bezier_fit: duration must be positive");
  std::set<double> distinct;
  for (const auto& s : samples) {
    if (!(s.t >= 0.0 && s.t <= duration)) {
      throw RangeError("bezier_fit: sample time outside [0, duration]");
    }
    distinct.insert(s.t);
  }
  if (distinct.size() < static_cast<std::size_t>(BezierCurve::kNumPoints)) {
    std::ostringstream os;
    os << "bezier_fit: need at least " << BezierCurve::kNumPoints
       << " distinct sample times, got " << distinct.size();
    throw RankError(os.str());
  }

  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd basis(n, BezierCurve::kNumPoints);
  Eigen::VectorXd values(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto b = bernstein<4>(samples[r].t / duration);
    for (int c = 0; c < BezierCurve::kNumPoints; ++c) basis(r, c) = b[c];
    values(r) = samples[r].value;
  }
  const Eigen::VectorXd cp = basis.colPivHouseholderQr().solve(values);
  BezierCurve::ControlPoints points{};
  for (int i = 0; i < BezierCurve::kNumPoints; ++i) points[i] = cp(i);
  return {BezierCurve(points, duration), (basis * cp - values).norm()};
}

}  // namespace alip
