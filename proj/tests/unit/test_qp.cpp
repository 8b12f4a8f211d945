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

#include <gtest/gtest.h>

#include <random>

#include "alip/errors.hpp"
#include "alip/qp.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

using namespace alip;
using namespace alip::testing;

TEST(SolveQp, InteriorOptimum) {
  const QpProblem p = box_problem(Eigen::MatrixXd::Identity(4, 4), Eigen::VectorXd::Zero(4), -1, 1);
  const QpSolution s = solve_qp(p);
  EXPECT_EQ(s.status, QpStatus::optimal);
  EXPECT_LT(s.u.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SolveQp, SeparableClipping) {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(5);
  q(0) = -10.0;
  const QpProblem p = box_problem(Eigen::MatrixXd::Identity(5, 5), q, -1, 1);
  const QpSolution s = solve_qp(p);
  EXPECT_EQ(s.u(0), 1.0);
  EXPECT_LT(s.u.tail(4).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(s.active_set[0], BoundState::upper);
  EXPECT_EQ(s.active_set[1], BoundState::free);
}

TEST(SolveQp, ValidatesProblem) {
  QpProblem p = box_problem(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), -1, 1);
  p.lb(0) = 2.0;
  EXPECT_THROW(solve_qp(p), ConstructionError);
  p = box_problem(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(3), -1, 1);
  EXPECT_THROW(solve_qp(p), ConstructionError);
  p = box_problem(-Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), -1, 1);
  EXPECT_THROW(solve_qp(p), ParameterError);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.5;
  p = box_problem(asym, Eigen::VectorXd::Zero(2), -1, 1);
  EXPECT_THROW(solve_qp(p), ParameterError);
}

TEST(SolveQp, MatchesEnumerationOracle) {
  std::mt19937_64 rng(99);
  int relaxed = 0, with_eq = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 6;
    bool infeasible = false;
    const QpProblem p = random_problem(rng, n, infeasible);
    const QpSolution s = solve_qp(p);
    EnumeratedQp ref;
    if (infeasible) {
      const double w2 = 2.0 * p.relaxation_weight;
      ref = enumerate_qp(p.P + w2 * p.Aeq.transpose() * p.Aeq, p.q - w2 * p.Aeq.transpose() * p.beq,
                         Eigen::MatrixXd(0, n), Eigen::VectorXd(0), p.lb, p.ub);
      EXPECT_EQ(s.status, QpStatus::infeasible_equality_relaxed);
      ++relaxed;
    } else {
      ref = enumerate_qp(p.P, p.q, p.Aeq, p.beq, p.lb, p.ub);
      EXPECT_EQ(s.status, QpStatus::optimal);
      EXPECT_LE(kkt_residual(p, s.u), 1e-8);
      if (p.has_equality()) ++with_eq;
    }
    ASSERT_TRUE(ref.feasible);
    EXPECT_LE((s.u - ref.u).cwiseAbs().maxCoeff(), 1e-6) << "trial " << trial;
    EXPECT_LE(std::abs(s.objective - ref.objective), 1e-8 * (1.0 + std::abs(ref.objective)));
    EXPECT_TRUE((s.u.array() >= p.lb.array()).all() && (s.u.array() <= p.ub.array()).all());
  }
  EXPECT_GT(relaxed, 10);
  EXPECT_GT(with_eq, 50);
}

TEST(SolveQp, WarmStartGivesSameAnswer) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 20;
    QpProblem p = box_problem(random_spd(rng, n), 20.0 * random_matrix(rng, n, 1), -1.0, 1.0);
    const QpSolution cold = solve_qp(p);
    const QpSolution warm = solve_qp(p, 500, random_matrix(rng, n, 1));
    const QpSolution exact = solve_qp(p, 500, cold.u);
    EXPECT_LE((cold.u - warm.u).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE(exact.iterations, 2);
  }
}

TEST(SolveQp, MaxIterationsReturnsBestIterate) {
  std::mt19937_64 rng(8);
  const int n = 30;
  const QpProblem p = box_problem(random_spd(rng, n), 100.0 * random_matrix(rng, n, 1), -1.0, 1.0);
  const QpSolution s = solve_qp(p, 2);
  EXPECT_EQ(s.status, QpStatus::max_iterations);
  EXPECT_TRUE((s.u.array() >= p.lb.array()).all() && (s.u.array() <= p.ub.array()).all());
}

TEST(SolveQp, EqualityWithoutBoundsMatchesKkt) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + trial % 5;
    QpProblem p = box_problem(random_spd(rng, n), random_matrix(rng, n, 1), -1e6, 1e6);
    p.Aeq = random_matrix(rng, 2, n);
    p.beq = random_matrix(rng, 2, 1);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 2, n + 2);
    K.topLeftCorner(n, n) = p.P;
    K.topRightCorner(n, 2) = p.Aeq.transpose();
    K.bottomLeftCorner(2, n) = p.Aeq;
    Eigen::VectorXd rhs(n + 2);
    rhs << -p.q, p.beq;
    const Eigen::VectorXd x = K.fullPivLu().solve(rhs);
    const QpSolution s = solve_qp(p);
    EXPECT_EQ(s.status, QpStatus::optimal);
    EXPECT_LE((s.u - x.head(n)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(SolveQp, RedundantEqualityRows) {
  QpProblem p = box_problem(Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(3), -5, 5);
  p.Aeq.resize(2, 3);
  p.Aeq << 1, 1, 1, 2, 2, 2;
  p.beq.resize(2);
  p.beq << 3, 6;
  const QpSolution s = solve_qp(p);
  EXPECT_EQ(s.status, QpStatus::optimal);
  EXPECT_LT((s.u - Eigen::Vector3d::Ones()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(KktResidual, FlagsSuboptimalPoints) {
  const QpProblem p = box_problem(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(-3.0, 0.5), -1, 1);
  EXPECT_LT(kkt_residual(p, Eigen::Vector2d(1.0, -0.5)), 1e-15);
  EXPECT_GT(kkt_residual(p, Eigen::Vector2d(0.0, 0.0)), 0.1);
  EXPECT_GT(kkt_residual(p, Eigen::Vector2d(-1.0, -0.5)), 0.1);
}
