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

#include "alip/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alip/errors.hpp"

namespace alip {

std::string_view to_string(QpStatus status) noexcept {
  switch (status) {
    case QpStatus::optimal:
      return "optimal";
    case QpStatus::infeasible_equality_relaxed:
      return "infeasible-equality-relaxed";
    case QpStatus::max_iterations:
      return "max-iterations";
  }
  return "unknown";
}

void QpProblem::validate() const {
  const Eigen::Index n = q.size();
  if (P.rows() != n || P.cols() != n) throw ConstructionError("QpProblem: P must be n x n");
  if (lb.size() != n || ub.size() != n) throw ConstructionError("QpProblem: bounds must have n entries");
  if (Aeq.rows() > 0 && Aeq.cols() != n) throw ConstructionError("QpProblem: Aeq must have n columns");
  if (beq.size() != Aeq.rows()) throw ConstructionError("QpProblem: beq must match Aeq rows");
  if (!P.allFinite() || !q.allFinite() || !Aeq.allFinite() || !beq.allFinite()) {
    throw ParameterError("QpProblem: non-finite data");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(lb(i) <= ub(i))) throw ConstructionError("QpProblem: lb must not exceed ub");
  }
  const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw ParameterError("QpProblem: P must be symmetric");
  }
  if (n > 0 && P.llt().info() != Eigen::Success) {
    throw ParameterError("QpProblem: P must be positive definite");
  }
}

double QpProblem::objective(const Eigen::VectorXd& u) const {
  return 0.5 * u.dot(P * u) + q.dot(u);
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Indices {
  std::vector<Eigen::Index> free;
  std::vector<Eigen::Index> fixed;
};

Indices split(const std::vector<BoundState>& W) {
  Indices ix;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(W.size()); ++i) {
    (W[i] == BoundState::free ? ix.free : ix.fixed).push_back(i);
  }
  return ix;
}

MatrixXd rows_cols(const MatrixXd& M, const std::vector<Eigen::Index>& r,
                   const std::vector<Eigen::Index>& c) {
  MatrixXd out(r.size(), c.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) out(i, j) = M(r[i], c[j]);
  return out;
}

MatrixXd cols(const MatrixXd& M, const std::vector<Eigen::Index>& c) {
  MatrixXd out(M.rows(), c.size());
  for (std::size_t j = 0; j < c.size(); ++j) out.col(j) = M.col(c[j]);
  return out;
}

VectorXd gather(const VectorXd& v, const std::vector<Eigen::Index>& idx) {
  VectorXd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

// Primal active-set iterations from a feasible u. The working set {rows of
// E} + {active bounds} stays linearly independent: E has full row rank on
// entry and a blocking bound is never in the span of the current set.
QpStatus active_set(const MatrixXd& P, const VectorXd& q, const MatrixXd& E, const VectorXd& lb,
                    const VectorXd& ub, VectorXd& u, std::vector<BoundState>& W, int max_iter,
                    int& iterations) {
  const Eigen::Index n = u.size();
  const Eigen::Index m = E.rows();
  const double q_scale = 1.0 + (n > 0 ? q.cwiseAbs().maxCoeff() : 0.0);
  // Set after an unblocked step: u already minimizes over the working set,
  // so a recomputed step would only be rounding noise.
  bool minimized = false;

  while (iterations < max_iter) {
    ++iterations;
    const Indices ix = split(W);
    const VectorXd g = P * u + q;
    const auto nf = static_cast<Eigen::Index>(ix.free.size());

    VectorXd p = VectorXd::Zero(n);
    VectorXd nu = VectorXd::Zero(m);
    if (nf > 0) {
      const MatrixXd PFF = rows_cols(P, ix.free, ix.free);
      const VectorXd gF = gather(g, ix.free);
      VectorXd pF;
      if (minimized) {
        pF = VectorXd::Zero(nf);
        if (m > 0) nu = cols(E, ix.free).transpose().householderQr().solve(-gF);
      } else if (m == 0) {
        pF = -PFF.llt().solve(gF);
      } else {
        const MatrixXd EFt = cols(E, ix.free).transpose();  // nf x m
        Eigen::HouseholderQR<MatrixXd> qr(EFt);
        const MatrixXd Q = qr.householderQ();
        if (nf > m) {
          const MatrixXd Z = Q.rightCols(nf - m);
          const MatrixXd H = Z.transpose() * PFF * Z;
          const VectorXd y = -H.llt().solve(Z.transpose() * gF);
          pF = Z * y;
        } else {
          pF = VectorXd::Zero(nf);
        }
        // E_F^T nu = -(g_F + P_FF p_F) in the least-squares sense.
        const VectorXd rhs = -(gF + PFF * pF);
        nu = qr.solve(rhs);
      }
      for (Eigen::Index k = 0; k < nf; ++k) p(ix.free[k]) = pF(k);
    }

    const double step_tol = 1e-12 * (1.0 + u.lpNorm<Eigen::Infinity>());
    if (p.lpNorm<Eigen::Infinity>() <= step_tol) {
      const VectorXd lambda = g + E.transpose() * nu;
      const double mult_tol = 1e-11 * (q_scale + g.lpNorm<Eigen::Infinity>());
      Eigen::Index release = -1;
      double worst = mult_tol;
      for (Eigen::Index j : ix.fixed) {
        if (lb(j) == ub(j)) continue;
        const double viol = W[j] == BoundState::lower ? -lambda(j) : lambda(j);
        if (viol > worst) {
          worst = viol;
          release = j;
        }
      }
      if (release < 0) return QpStatus::optimal;
      W[release] = BoundState::free;
      minimized = false;
      continue;
    }

    double alpha = 1.0;
    Eigen::Index block = -1;
    BoundState block_state = BoundState::free;
    for (Eigen::Index i : ix.free) {
      if (p(i) < 0.0) {
        const double a = (lb(i) - u(i)) / p(i);
        if (a < alpha) {
          alpha = std::max(a, 0.0);
          block = i;
          block_state = BoundState::lower;
        }
      } else if (p(i) > 0.0) {
        const double a = (ub(i) - u(i)) / p(i);
        if (a < alpha) {
          alpha = std::max(a, 0.0);
          block = i;
          block_state = BoundState::upper;
        }
      }
    }
    for (Eigen::Index i : ix.free) u(i) = std::clamp(u(i) + alpha * p(i), lb(i), ub(i));
    if (block >= 0) {
      u(block) = block_state == BoundState::lower ? lb(block) : ub(block);
      W[block] = block_state;
    }
    minimized = block < 0;
  }
  return QpStatus::max_iterations;
}

std::vector<BoundState> classify(const VectorXd& u, const VectorXd& lb, const VectorXd& ub) {
  std::vector<BoundState> W(u.size(), BoundState::free);
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u(i) <= lb(i)) {
      W[i] = BoundState::lower;
    } else if (u(i) >= ub(i)) {
      W[i] = BoundState::upper;
    }
  }
  return W;
}

VectorXd clamp_to_box(const VectorXd& v, const VectorXd& lb, const VectorXd& ub) {
  return v.cwiseMax(lb).cwiseMin(ub);
}

QpSolution box_only(const MatrixXd& P, const VectorXd& q, const VectorXd& lb, const VectorXd& ub,
                    const VectorXd& start, int max_iter) {
  QpSolution sol;
  sol.u = clamp_to_box(start, lb, ub);
  sol.active_set = classify(sol.u, lb, ub);
  const MatrixXd none(0, q.size());
  sol.status = active_set(P, q, none, lb, ub, sol.u, sol.active_set, max_iter, sol.iterations);
  sol.objective = 0.5 * sol.u.dot(P * sol.u) + q.dot(sol.u);
  return sol;
}

// Orthonormal-row reformulation of the equality block: E' u = e' with the
// same solution set. Returns false when the rows are inconsistent.
bool reduce_equality(const MatrixXd& A, const VectorXd& b, MatrixXd& E, VectorXd& e) {
  Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeThinV);
  const VectorXd& s = svd.singularValues();
  const double tol = 1e-12 * std::max(1.0, s.size() > 0 ? s(0) : 0.0) *
                     static_cast<double>(std::max(A.rows(), A.cols()));
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > tol) ++r;
  const MatrixXd& U = svd.matrixU();
  const VectorXd c = U.transpose() * b;
  E = s.head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();
  e = c.head(r);
  const double tail = c.tail(c.size() - r).lpNorm<Eigen::Infinity>();
  return c.size() == r || tail <= 1e-9 * (1.0 + b.lpNorm<Eigen::Infinity>());
}

// Finds u in the box with E u = e, or returns false.
bool feasible_point(const MatrixXd& E, const VectorXd& e, const VectorXd& lb, const VectorXd& ub,
                    const VectorXd& guess, int max_iter, VectorXd& u) {
  const Eigen::Index n = lb.size();
  if (E.rows() == 0) {
    u = clamp_to_box(guess, lb, ub);
    return true;
  }
  const double sigma = E.norm();
  const double delta = 1e-10 * std::max(1e-300, sigma * sigma);
  const MatrixXd P1 = E.transpose() * E + delta * MatrixXd::Identity(n, n);
  const VectorXd c = clamp_to_box(guess, lb, ub);
  const VectorXd q1 = -E.transpose() * e - delta * c;
  u = box_only(P1, q1, lb, ub, c, max_iter).u;

  // Polish on the interior coordinates to remove the regularization bias.
  for (int pass = 0; pass < 8; ++pass) {
    const VectorXd r = E * u - e;
    if (r.lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + e.lpNorm<Eigen::Infinity>())) break;
    std::vector<Eigen::Index> inner;
    for (Eigen::Index i = 0; i < n; ++i)
      if (u(i) > lb(i) && u(i) < ub(i)) inner.push_back(i);
    if (static_cast<Eigen::Index>(inner.size()) < E.rows()) break;
    const MatrixXd EF = cols(E, inner);
    const MatrixXd G = EF * EF.transpose();
    Eigen::LDLT<MatrixXd> ldlt(G);
    if (ldlt.info() != Eigen::Success) break;
    const VectorXd d = -EF.transpose() * ldlt.solve(r);
    double alpha = 1.0;
    for (std::size_t k = 0; k < inner.size(); ++k) {
      const Eigen::Index i = inner[k];
      if (d(k) < 0.0) alpha = std::min(alpha, (lb(i) - u(i)) / d(k));
      if (d(k) > 0.0) alpha = std::min(alpha, (ub(i) - u(i)) / d(k));
    }
    for (std::size_t k = 0; k < inner.size(); ++k) {
      const Eigen::Index i = inner[k];
      u(i) = std::clamp(u(i) + alpha * d(k), lb(i), ub(i));
    }
  }
  return (E * u - e).lpNorm<Eigen::Infinity>() <= 1e-9 * (1.0 + e.lpNorm<Eigen::Infinity>());
}

}  // namespace

QpSolution solve_qp(const QpProblem& problem, int max_iter, const Eigen::VectorXd& warm_start) {
  problem.validate();
  const Eigen::Index n = problem.size();
  const VectorXd guess =
      warm_start.size() == n ? warm_start : static_cast<VectorXd>(VectorXd::Zero(n));

  if (!problem.has_equality()) {
    return box_only(problem.P, problem.q, problem.lb, problem.ub, guess, max_iter);
  }

  MatrixXd E;
  VectorXd e;
  VectorXd u;
  bool feasible = reduce_equality(problem.Aeq, problem.beq, E, e);
  if (feasible) feasible = feasible_point(E, e, problem.lb, problem.ub, guess, max_iter, u);

  if (!feasible) {
    const double w2 = 2.0 * problem.relaxation_weight;
    const MatrixXd P = problem.P + w2 * problem.Aeq.transpose() * problem.Aeq;
    const VectorXd q = problem.q - w2 * problem.Aeq.transpose() * problem.beq;
    QpSolution sol = box_only(P, q, problem.lb, problem.ub, guess, max_iter);
    if (sol.status == QpStatus::optimal) sol.status = QpStatus::infeasible_equality_relaxed;
    return sol;
  }

  QpSolution sol;
  sol.u = u;
  sol.active_set.assign(n, BoundState::free);
  sol.status = active_set(problem.P, problem.q, E, problem.lb, problem.ub, sol.u, sol.active_set,
                          max_iter, sol.iterations);
  sol.objective = problem.objective(sol.u);
  return sol;
}

double kkt_residual(const QpProblem& problem, const Eigen::VectorXd& u) {
  const Eigen::Index n = problem.size();
  const VectorXd g = problem.P * u + problem.q;
  double worst = 0.0;
  std::vector<Eigen::Index> free, at_lower, at_upper;
  for (Eigen::Index i = 0; i < n; ++i) {
    worst = std::max({worst, problem.lb(i) - u(i), u(i) - problem.ub(i)});
    const double tol = 1e-9 * (1.0 + std::abs(u(i)));
    if (u(i) - problem.lb(i) <= tol && problem.lb(i) < problem.ub(i)) {
      at_lower.push_back(i);
    } else if (problem.ub(i) - u(i) <= tol && problem.lb(i) < problem.ub(i)) {
      at_upper.push_back(i);
    } else if (problem.lb(i) < problem.ub(i)) {
      free.push_back(i);
    }
  }
  VectorXd nu = VectorXd::Zero(problem.Aeq.rows());
  if (problem.has_equality()) {
    worst = std::max(worst, (problem.Aeq * u - problem.beq).lpNorm<Eigen::Infinity>());
    if (!free.empty()) {
      const MatrixXd EFt = cols(problem.Aeq, free).transpose();
      nu = EFt.colPivHouseholderQr().solve(-gather(g, free));
    }
  }
  const VectorXd lambda = g + problem.Aeq.transpose() * nu;
  for (Eigen::Index i : free) worst = std::max(worst, std::abs(lambda(i)));
  for (Eigen::Index i : at_lower) worst = std::max(worst, -lambda(i));
  for (Eigen::Index i : at_upper) worst = std::max(worst, lambda(i));
  return worst / (1.0 + problem.q.lpNorm<Eigen::Infinity>());
}

}  // namespace alip
