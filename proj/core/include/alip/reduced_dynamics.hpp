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

namespace alip {

/// Constrained equations of motion
///   D qdd + drift = J_st^T F_st + J_s^T F_s + B9 u,
///   J_st qdd + Jdot_st qd = 0,
///   J_s qdd + Jdot_s qd = spring_rhs,
/// with drift = C qd + G - B1 u1 and jdot_qdot = [Jdot_st qd; Jdot_s qd].
struct ConstrainedSystem {
  Eigen::MatrixXd D;
  Eigen::VectorXd drift;
  Eigen::MatrixXd J_st;
  Eigen::MatrixXd J_s;
  Eigen::VectorXd jdot_qdot;
  Eigen::VectorXd spring_rhs;
  Eigen::MatrixXd B9;

  Eigen::Index dofs() const noexcept { return D.rows(); }
  Eigen::Index contact_rows() const noexcept { return J_st.rows(); }
  Eigen::Index spring_rows() const noexcept { return J_s.rows(); }
  Eigen::Index inputs() const noexcept { return B9.cols(); }

  /// ConstructionError on inconsistent sizes; ParameterError when D is not
  /// symmetric positive definite or the stacked Jacobian is rank deficient.
  void validate() const;
};

/// Dtilde [qdd; F_st; F_s] + Htilde = Btilde u.
struct AssembledSystem {
  Eigen::MatrixXd Dtilde;
  Eigen::VectorXd Htilde;
  Eigen::MatrixXd Btilde;
};

AssembledSystem assemble(const ConstrainedSystem& sys);

/// Dense solve of the assembled system for the stacked unknowns.
Eigen::VectorXd full_solve(const AssembledSystem& a, const Eigen::VectorXd& u);

/// D_bar qdd_c + H_bar = B_bar u on the first n_c unknowns.
struct ReducedSystem {
  Eigen::MatrixXd D_bar;
  Eigen::VectorXd H_bar;
  Eigen::MatrixXd B_bar;

  Eigen::VectorXd accelerations(const Eigen::VectorXd& u) const;
};

/// Eliminates the trailing unknowns with a Schur complement. Throws
/// ReductionError when the eliminated block has condition number above 1e12.
ReducedSystem schur_reduce(const Eigen::MatrixXd& Dtilde, const Eigen::VectorXd& Htilde,
                           const Eigen::MatrixXd& Btilde, Eigen::Index n_c);

/// Input that makes ydd = hd_ddot - K_D yd - K_P y, where
/// ydd = J_y qdd_c + jdot_y_qdot. Throws ControlError when the decoupling
/// matrix J_y D_bar^-1 B_bar is not square or not full rank.
Eigen::VectorXd output_torque_solve(const ReducedSystem& reduced, const Eigen::MatrixXd& J_y,
                                    const Eigen::VectorXd& jdot_y_qdot, const Eigen::VectorXd& y,
                                    const Eigen::VectorXd& ydot, const Eigen::VectorXd& hd_ddot,
                                    const Eigen::MatrixXd& K_P, const Eigen::MatrixXd& K_D);

}  // namespace alip
