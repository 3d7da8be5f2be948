#pragma once

// Reference computations shared by the unit tests and the acceptance binary.
// They are deliberately written without the library's own formulation code.

#include "cusmuda/lp.hpp"
#include "cusmuda/program.hpp"
#include "cusmuda/random.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cusmuda::reference {

struct LPCheck {
  double primal_residual = 0.0;  // worst row or bound violation
  double dual_residual = 0.0;    // worst sign or reduced-cost violation
  double gap = 0.0;              // |c'x - dual objective|
  Eigen::Index rank = 0;         // rank of the active constraint matrix
  Eigen::Index n = 0;
};

/// Certificate check of an optimal LPSolution against the problem data.
/// Assumes every lower bound is 0 or -inf, so the dual objective is
/// eq_rhs'duals_eq + le_rhs'duals_le + upper'duals_upper.
inline LPCheck check_lp(const LPProblem& lp, const LPSolution& sol, double active_tol = 1e-7) {
  LPCheck out;
  const Eigen::Index n = lp.num_vars();
  out.n = n;
  const Vector& x = sol.primal;
  const double scale = 1.0 + x.lpNorm<Eigen::Infinity>();
  if (lp.num_eq()) out.primal_residual = std::max(out.primal_residual, (lp.eq_matrix * x - lp.eq_rhs).lpNorm<Eigen::Infinity>());
  if (lp.num_le()) out.primal_residual = std::max(out.primal_residual, (lp.le_matrix * x - lp.le_rhs).maxCoeff());
  for (Eigen::Index j = 0; j < n; ++j) {
    out.primal_residual = std::max(out.primal_residual, lp.lower_bound(j) - x[j]);
    out.primal_residual = std::max(out.primal_residual, x[j] - lp.upper_bound(j));
  }

  Vector reduced = lp.objective;
  double dual_obj = 0.0;
  if (lp.num_eq()) {
    reduced -= lp.eq_matrix.transpose() * sol.duals_eq;
    dual_obj += lp.eq_rhs.dot(sol.duals_eq);
  }
  if (lp.num_le()) {
    reduced -= lp.le_matrix.transpose() * sol.duals_le;
    dual_obj += lp.le_rhs.dot(sol.duals_le);
    out.dual_residual = std::max(out.dual_residual, sol.duals_le.maxCoeff());
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isfinite(lp.upper_bound(j))) {
      reduced[j] -= sol.duals_upper[j];
      dual_obj += lp.upper_bound(j) * sol.duals_upper[j];
      out.dual_residual = std::max(out.dual_residual, sol.duals_upper[j]);
    }
    if (std::isfinite(lp.lower_bound(j)))
      out.dual_residual = std::max(out.dual_residual, -reduced[j]);
    else
      out.dual_residual = std::max(out.dual_residual, std::fabs(reduced[j]));
  }
  out.gap = std::fabs(lp.objective.dot(x) - dual_obj);

  std::vector<Eigen::RowVectorXd> active;
  for (Eigen::Index i = 0; i < lp.num_eq(); ++i) active.push_back(lp.eq_matrix.row(i));
  for (Eigen::Index i = 0; i < lp.num_le(); ++i)
    if (std::fabs(lp.le_matrix.row(i).dot(x) - lp.le_rhs[i]) <= active_tol * scale) active.push_back(lp.le_matrix.row(i));
  for (Eigen::Index j = 0; j < n; ++j) {
    const bool at_lower = std::isfinite(lp.lower_bound(j)) && std::fabs(x[j] - lp.lower_bound(j)) <= active_tol * scale;
    const bool at_upper = std::isfinite(lp.upper_bound(j)) && std::fabs(x[j] - lp.upper_bound(j)) <= active_tol * scale;
    if (at_lower || at_upper) active.push_back(Eigen::RowVectorXd::Unit(n, j));
  }
  if (!active.empty()) {
    Matrix a(static_cast<Eigen::Index>(active.size()), n);
    for (std::size_t i = 0; i < active.size(); ++i) a.row(static_cast<Eigen::Index>(i)) = active[i];
    Eigen::FullPivLU<Matrix> lu(a);
    lu.setThreshold(1e-9);
    out.rank = lu.rank();
  }
  return out;
}

/// Feasible, bounded LP with up to `max_vars` variables. Every instance has
/// a known feasible point; boundedness comes from a budget row over all
/// variables. With `degenerate` the data are small integers and many
/// right-hand sides are zero.
inline LPProblem random_lp(Rng& rng, int max_vars, bool degenerate) {
  const auto n = static_cast<Eigen::Index>(2 + rng.below(static_cast<std::uint64_t>(max_vars - 1)));
  const auto me = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n / 2 + 1)));
  const auto ml = static_cast<Eigen::Index>(1 + rng.below(static_cast<std::uint64_t>(n)));
  auto coef = [&] {
    if (degenerate) return static_cast<double>(static_cast<int>(rng.below(7)) - 3);
    return rng.uniform() < 0.3 ? 0.0 : rng.uniform(-5.0, 5.0);
  };
  Vector x_feas(n);
  for (Eigen::Index j = 0; j < n; ++j)
    x_feas[j] = degenerate ? static_cast<double>(rng.below(3)) : (rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 4.0));

  LPProblem lp;
  lp.objective.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) lp.objective[j] = coef();
  lp.eq_matrix.resize(me, n);
  for (Eigen::Index i = 0; i < me; ++i)
    for (Eigen::Index j = 0; j < n; ++j) lp.eq_matrix(i, j) = coef();
  lp.eq_rhs = lp.eq_matrix * x_feas;
  lp.le_matrix.resize(ml + 1, n);
  for (Eigen::Index i = 0; i < ml; ++i)
    for (Eigen::Index j = 0; j < n; ++j) lp.le_matrix(i, j) = coef();
  lp.le_matrix.row(ml).setOnes();
  lp.le_rhs = lp.le_matrix * x_feas;
  for (Eigen::Index i = 0; i <= ml; ++i) {
    const bool tight = degenerate ? rng.uniform() < 0.6 : rng.uniform() < 0.2;
    if (!tight) lp.le_rhs[i] += degenerate ? static_cast<double>(rng.below(3)) : rng.uniform(0.0, 3.0);
  }
  if (rng.uniform() < 0.3) {
    lp.upper = Vector::Constant(n, kInf);
    for (Eigen::Index j = 0; j < n; ++j)
      if (rng.uniform() < 0.4) lp.upper[j] = x_feas[j] + (degenerate ? static_cast<double>(rng.below(2)) : rng.uniform(0.0, 2.0));
  }
  return lp;
}

/// Rank check helper: number of nonzero entries above tol.
inline Eigen::Index count_nonzero(const Vector& v, double tol) {
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) c += std::fabs(v[i]) > tol ? 1 : 0;
  return c;
}

/// Scenario formulation of the subproblem rooted at realization `j` of stage
/// `t` with previous decision `x_prev`: one copy of every stage decision per
/// scenario and explicit nonanticipativity rows between scenarios sharing a
/// history. Its optimum is the exact recourse value including stage t's cost.
inline LPProblem scenario_formulation(const MultistageProgram& p, int t, int j, const Vector& x_prev) {
  const int T = p.num_stages();
  std::vector<std::vector<int>> paths{{j}};
  for (int s = t + 1; s < T; ++s) {
    std::vector<std::vector<int>> next;
    for (const auto& path : paths)
      for (int r = 0; r < p.num_realizations(s); ++r) {
        auto q = path;
        q.push_back(r);
        next.push_back(std::move(q));
      }
    paths = std::move(next);
  }
  const auto S = static_cast<Eigen::Index>(paths.size());
  std::vector<Eigen::Index> dims, offs;
  Eigen::Index per = 0;
  for (int s = t; s < T; ++s) {
    offs.push_back(per);
    dims.push_back(p.stage_dim(s));
    per += p.stage_dim(s);
  }
  const Eigen::Index nv = S * per;
  auto col = [&](Eigen::Index sc, int stage) { return sc * per + offs[static_cast<std::size_t>(stage - t)]; };

  Eigen::Index me = 0, ml = 0;
  for (int s = t; s < T; ++s) {
    me += S * p.realization(s, 0).b_eq.size();
    ml += S * p.realization(s, 0).b_le.size();
  }
  // Nonanticipativity: scenario sc equals the first scenario with the same
  // history through stage s.
  std::vector<std::pair<Eigen::Index, std::pair<Eigen::Index, int>>> na;
  for (Eigen::Index sc = 0; sc < S; ++sc)
    for (int s = t; s < T; ++s) {
      Eigen::Index first = sc;
      for (Eigen::Index o = 0; o < sc; ++o) {
        const auto& a = paths[static_cast<std::size_t>(o)];
        const auto& b = paths[static_cast<std::size_t>(sc)];
        if (std::equal(a.begin(), a.begin() + (s - t + 1), b.begin())) {
          first = o;
          break;
        }
      }
      if (first != sc) na.push_back({sc, {first, s}});
    }
  for (const auto& e : na) me += dims[static_cast<std::size_t>(e.second.second - t)];

  LPProblem lp;
  lp.objective = Vector::Zero(nv);
  lp.lower = Vector::Zero(nv);
  lp.eq_matrix = Matrix::Zero(me, nv);
  lp.eq_rhs = Vector::Zero(me);
  lp.le_matrix = Matrix::Zero(ml, nv);
  lp.le_rhs = Vector::Zero(ml);
  Eigen::Index re = 0, rl = 0;
  for (Eigen::Index sc = 0; sc < S; ++sc) {
    const auto& path = paths[static_cast<std::size_t>(sc)];
    double prob = 1.0;
    for (int s = t + 1; s < T; ++s) prob *= p.realization(s, path[static_cast<std::size_t>(s - t)]).probability;
    for (int s = t; s < T; ++s) {
      const auto& r = p.realization(s, path[static_cast<std::size_t>(s - t)]);
      const Eigen::Index c0 = col(sc, s);
      const Eigen::Index n = dims[static_cast<std::size_t>(s - t)];
      lp.objective.segment(c0, n) += prob * r.c;
      for (Eigen::Index v = 0; v < n; ++v)
        if (p.stages[static_cast<std::size_t>(s)].is_free(v)) lp.lower[c0 + v] = -kInf;
      const Eigen::Index ne = r.b_eq.size(), nl = r.b_le.size();
      lp.eq_matrix.block(re, c0, ne, n) = r.A;
      lp.eq_rhs.segment(re, ne) = r.b_eq;
      lp.le_matrix.block(rl, c0, nl, n) = r.G;
      lp.le_rhs.segment(rl, nl) = r.b_le;
      if (s == t) {
        if (ne) lp.eq_rhs.segment(re, ne) -= r.B * x_prev;
        if (nl) lp.le_rhs.segment(rl, nl) -= r.H * x_prev;
      } else {
        const Eigen::Index p0 = col(sc, s - 1);
        const Eigen::Index pn = dims[static_cast<std::size_t>(s - 1 - t)];
        if (ne) lp.eq_matrix.block(re, p0, ne, pn) = r.B;
        if (nl) lp.le_matrix.block(rl, p0, nl, pn) = r.H;
      }
      re += ne;
      rl += nl;
    }
  }
  for (const auto& e : na) {
    const Eigen::Index sc = e.first, first = e.second.first;
    const int s = e.second.second;
    const Eigen::Index n = dims[static_cast<std::size_t>(s - t)];
    for (Eigen::Index v = 0; v < n; ++v) {
      lp.eq_matrix(re, col(sc, s) + v) = 1.0;
      lp.eq_matrix(re, col(first, s) + v) = -1.0;
      ++re;
    }
  }
  return lp;
}

inline LPProblem scenario_formulation(const MultistageProgram& p) {
  return scenario_formulation(p, 0, 0, p.x0);
}

}  // namespace cusmuda::reference
