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

#include "alip/reduced_dynamics.hpp"

#include <limits>
#include <sstream>

#include "alip/errors.hpp"

namespace alip {

namespace {

constexpr double kMaxCondition = 1e12;

double condition_number(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 1.0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  const double lo = s(s.size() - 1);
  return lo > 0.0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

void expect(bool ok, const char* what) {
  if (!ok) throw ConstructionError(what);
}

}  // namespace

void ConstrainedSystem::validate() const {
  const Eigen::Index n = D.rows();
  expect(n > 0 && D.cols() == n, "ConstrainedSystem: D must be square and non-empty");
  expect(drift.size() == n, "ConstrainedSystem: drift size must match D");
  expect(J_st.rows() == 0 || J_st.cols() == n, "ConstrainedSystem: J_st columns must match D");
  expect(J_s.rows() == 0 || J_s.cols() == n, "ConstrainedSystem: J_s columns must match D");
  expect(jdot_qdot.size() == J_st.rows() + J_s.rows(),
         "ConstrainedSystem: jdot_qdot must stack one entry per constraint row");
  expect(spring_rhs.size() == J_s.rows(), "ConstrainedSystem: spring_rhs must match J_s rows");
  expect(B9.rows() == n, "ConstrainedSystem: B9 rows must match D");

  if ((D - D.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + D.cwiseAbs().maxCoeff())) {
    throw ParameterError("ConstrainedSystem: D is not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(D, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues()(0) > 0.0)) {
    throw ParameterError("ConstrainedSystem: D is not positive definite");
  }
  const Eigen::Index c = J_st.rows() + J_s.rows();
  if (c > 0) {
    Eigen::MatrixXd J(c, n);
    if (J_st.rows() > 0) J.topRows(J_st.rows()) = J_st;
    if (J_s.rows() > 0) J.bottomRows(J_s.rows()) = J_s;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    lu.setThreshold(1e-10);
    if (lu.rank() < c) throw ParameterError("ConstrainedSystem: constraint Jacobian is rank deficient");
  }
}

AssembledSystem assemble(const ConstrainedSystem& sys) {
  sys.validate();
  const Eigen::Index n = sys.dofs();
  const Eigen::Index c1 = sys.contact_rows();
  const Eigen::Index c2 = sys.spring_rows();
  const Eigen::Index k = n + c1 + c2;

  AssembledSystem a;
  a.Dtilde = Eigen::MatrixXd::Zero(k, k);
  a.Dtilde.topLeftCorner(n, n) = sys.D;
  if (c1 > 0) {
    a.Dtilde.block(0, n, n, c1) = -sys.J_st.transpose();
    a.Dtilde.block(n, 0, c1, n) = sys.J_st;
  }
  if (c2 > 0) {
    a.Dtilde.block(0, n + c1, n, c2) = -sys.J_s.transpose();
    a.Dtilde.block(n + c1, 0, c2, n) = sys.J_s;
  }
  a.Htilde.resize(k);
  a.Htilde.head(n) = sys.drift;
  a.Htilde.segment(n, c1) = sys.jdot_qdot.head(c1);
  a.Htilde.tail(c2) = sys.jdot_qdot.tail(c2) - sys.spring_rhs;
  a.Btilde = Eigen::MatrixXd::Zero(k, sys.inputs());
  a.Btilde.topRows(n) = sys.B9;
  return a;
}

Eigen::VectorXd full_solve(const AssembledSystem& a, const Eigen::VectorXd& u) {
  expect(a.Btilde.cols() == u.size(), "full_solve: input size mismatch");
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a.Dtilde);
  if (!lu.isInvertible()) throw ReductionError("full_solve: assembled matrix is singular",
                                               condition_number(a.Dtilde));
  return lu.solve(a.Btilde * u - a.Htilde);
}

Eigen::VectorXd ReducedSystem::accelerations(const Eigen::VectorXd& u) const {
  expect(B_bar.cols() == u.size(), "ReducedSystem: input size mismatch");
  return D_bar.partialPivLu().solve(B_bar * u - H_bar);
}

ReducedSystem schur_reduce(const Eigen::MatrixXd& Dtilde, const Eigen::VectorXd& Htilde,
                           const Eigen::MatrixXd& Btilde, Eigen::Index n_c) {
  const Eigen::Index k = Dtilde.rows();
  expect(Dtilde.cols() == k, "schur_reduce: Dtilde must be square");
  expect(Htilde.size() == k && Btilde.rows() == k, "schur_reduce: block sizes disagree");
  expect(n_c >= 1 && n_c <= k, "schur_reduce: n_c out of range");
  const Eigen::Index n_e = k - n_c;

  ReducedSystem r;
  if (n_e == 0) {
    r.D_bar = Dtilde;
    r.H_bar = Htilde;
    r.B_bar = Btilde;
    return r;
  }
  const Eigen::MatrixXd D22 = Dtilde.bottomRightCorner(n_e, n_e);
  const double cond = condition_number(D22);
  if (!(cond <= kMaxCondition)) {
    std::ostringstream os;
    os << "schur_reduce: eliminated block has condition number " << cond;
    throw ReductionError(os.str(), cond);
  }
  const auto D12 = Dtilde.topRightCorner(n_c, n_e);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(D22);
  const Eigen::MatrixXd X = lu.solve(Dtilde.bottomLeftCorner(n_e, n_c));
  r.D_bar = Dtilde.topLeftCorner(n_c, n_c) - D12 * X;
  r.H_bar = Htilde.head(n_c) - D12 * lu.solve(Htilde.tail(n_e));
  r.B_bar = Btilde.topRows(n_c) - D12 * lu.solve(Btilde.bottomRows(n_e));
  return r;
}

Eigen::VectorXd output_torque_solve(const ReducedSystem& reduced, const Eigen::MatrixXd& J_y,
                                    const Eigen::VectorXd& jdot_y_qdot, const Eigen::VectorXd& y,
                                    const Eigen::VectorXd& ydot, const Eigen::VectorXd& hd_ddot,
                                    const Eigen::MatrixXd& K_P, const Eigen::MatrixXd& K_D) {
  const Eigen::Index n_c = reduced.D_bar.rows();
  const Eigen::Index n_y = J_y.rows();
  expect(J_y.cols() == n_c, "output_torque_solve: J_y columns must match the reduced system");
  expect(jdot_y_qdot.size() == n_y && y.size() == n_y && ydot.size() == n_y &&
             hd_ddot.size() == n_y,
         "output_torque_solve: output vectors must have one entry per output");
  expect(K_P.rows() == n_y && K_P.cols() == n_y && K_D.rows() == n_y && K_D.cols() == n_y,
         "output_torque_solve: gain matrices must be n_y x n_y");
  if (n_y != reduced.B_bar.cols()) {
    throw ControlError("output_torque_solve: decoupling matrix is not square");
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> dbar(reduced.D_bar);
  const Eigen::MatrixXd A = J_y * dbar.solve(reduced.B_bar);
  const double cond = condition_number(A);
  if (!(cond <= kMaxCondition)) {
    std::ostringstream os;
    os << "output_torque_solve: decoupling matrix is rank deficient (condition " << cond << ")";
    throw ControlError(os.str());
  }
  const Eigen::VectorXd rhs =
      hd_ddot - K_D * ydot - K_P * y + J_y * dbar.solve(reduced.H_bar) - jdot_y_qdot;
  return A.partialPivLu().solve(rhs);
}

}  // namespace alip
