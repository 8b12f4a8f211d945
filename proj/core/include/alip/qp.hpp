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

#include <Eigen/Dense>
#include <string_view>
#include <vector>

namespace alip {

/// min 1/2 u^T P u + q^T u  s.t.  Aeq u = beq,  lb <= u <= ub.
/// Aeq may have zero rows.
struct QpProblem {
  Eigen::MatrixXd P;
  Eigen::VectorXd q;
  Eigen::MatrixXd Aeq;
  Eigen::VectorXd beq;
  Eigen::VectorXd lb;
  Eigen::VectorXd ub;
  /// Weight w of the penalty w ||Aeq u - beq||^2 used when the equality
  /// rows cannot be met inside the box.
  double relaxation_weight = 1e6;

  Eigen::Index size() const noexcept { return q.size(); }
  bool has_equality() const noexcept { return Aeq.rows() > 0; }
  /// Throws ConstructionError on dimension mismatch or inverted bounds and
  /// ParameterError when P is not symmetric positive definite.
  void validate() const;
  double objective(const Eigen::VectorXd& u) const;
};

enum class QpStatus { optimal, infeasible_equality_relaxed, max_iterations };
enum class BoundState : signed char { lower = -1, free = 0, upper = 1 };

std::string_view to_string(QpStatus status) noexcept;

struct QpSolution {
  Eigen::VectorXd u;
  /// Objective of the problem actually minimized (includes the relaxation
  /// penalty, without its constant term, when the equality was relaxed).
  double objective = 0.0;
  QpStatus status = QpStatus::optimal;
  std::vector<BoundState> active_set;
  int iterations = 0;
};

/// Primal active-set method on the box; equality rows are eliminated with a
/// null-space basis of the free columns. `warm_start`, when non-empty, seeds
/// the initial point and working set.
QpSolution solve_qp(const QpProblem& problem, int max_iter = 500,
                    const Eigen::VectorXd& warm_start = Eigen::VectorXd());

/// Scaled first-order optimality error of u: projected stationarity on the
/// free coordinates, multiplier signs on active bounds, bound violation and
/// equality residual, divided by (1 + ||q||_inf).
double kkt_residual(const QpProblem& problem, const Eigen::VectorXd& u);

}  // namespace alip
