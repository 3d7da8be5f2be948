#include "cusmuda/stage_problem.hpp"

#include <algorithm>
#include <cmath>

namespace cusmuda {

namespace {

void append_cut_row(LPProblem& lp, Eigen::Index n, Eigen::Index f_col, const Cut& cut) {
  const Eigen::Index r = lp.le_matrix.rows();
  lp.le_matrix.conservativeResize(r + 1, Eigen::NoChange);
  lp.le_rhs.conservativeResize(r + 1);
  lp.le_matrix.row(r).setZero();
  lp.le_matrix.row(r).head(n) = cut.beta.transpose();
  lp.le_matrix(r, f_col) = -1.0;
  lp.le_rhs[r] = -cut.theta;
}

}  // namespace

std::vector<std::uint32_t> starting_cuts(const std::vector<CutPool>& pools, const Vector& hint) {
  std::vector<std::uint32_t> start;
  start.reserve(pools.size());
  for (const auto& pool : pools) {
    const long k = pool.argmax_selected(hint);
    if (k < 0) return {};
    start.push_back(static_cast<std::uint32_t>(k));
  }
  return start;
}

StageSolve solve_stage(const MultistageProgram& program, int t, int j, const Vector& x_prev,
                       const std::vector<CutPool>* next_pools, const Vector* hint,
                       const StageOptions& options) {
  std::vector<std::uint32_t> start;
  if (hint && next_pools) start = starting_cuts(*next_pools, *hint);
  return solve_stage(program, t, j, x_prev, next_pools, start, options);
}

StageSolve solve_stage(const MultistageProgram& program, int t, int j, const Vector& x_prev,
                       const std::vector<CutPool>* next_pools, const std::vector<std::uint32_t>& start,
                       const StageOptions& options) {
  const StageRealization& r = program.realization(t, j);
  const StageDistribution& dist = program.stages[static_cast<std::size_t>(t)];
  const Eigen::Index n = program.stage_dim(t);
  const Eigen::Index me = r.b_eq.size();
  const Eigen::Index ml = r.b_le.size();

  StageSolve out;
  bool with_cuts = next_pools != nullptr && !next_pools->empty();
  if (with_cuts)
    for (const auto& pool : *next_pools)
      if (pool.selected_indices().empty()) with_cuts = false;
  out.myopic = !with_cuts;
  const Eigen::Index L = with_cuts ? static_cast<Eigen::Index>(next_pools->size()) : 0;
  const Eigen::Index nv = n + L;

  LPProblem lp;
  lp.objective = Vector::Zero(nv);
  lp.objective.head(n) = r.c;
  lp.lower = Vector::Zero(nv);
  for (Eigen::Index i = 0; i < n; ++i)
    if (dist.is_free(i)) lp.lower[i] = -kInf;
  const double f_lower = with_cuts ? program.stages[static_cast<std::size_t>(t + 1)].recourse_lower_bound : -kInf;
  for (Eigen::Index l = 0; l < L; ++l) {
    lp.objective[n + l] = program.realization(t + 1, static_cast<int>(l)).probability;
    lp.lower[n + l] = f_lower;
  }
  lp.eq_matrix = Matrix::Zero(me, nv);
  if (me > 0) lp.eq_matrix.leftCols(n) = r.A;
  lp.eq_rhs = r.b_eq;
  if (me > 0 && x_prev.size() > 0) lp.eq_rhs -= r.B * x_prev;
  lp.le_matrix = Matrix::Zero(ml, nv);
  if (ml > 0) lp.le_matrix.leftCols(n) = r.G;
  lp.le_rhs = r.b_le;
  if (ml > 0 && x_prev.size() > 0) lp.le_rhs -= r.H * x_prev;

  // (pool, cut index) of every cut row, in row order.
  std::vector<std::pair<Eigen::Index, std::uint32_t>> rows;
  std::vector<std::vector<std::uint32_t>> active(static_cast<std::size_t>(L));
  for (Eigen::Index l = 0; l < L; ++l) {
    const CutPool& pool = (*next_pools)[static_cast<std::size_t>(l)];
    const auto idx = start.size() == static_cast<std::size_t>(L) ? start[static_cast<std::size_t>(l)]
                                                                  : pool.selected_indices().back();
    append_cut_row(lp, n, n + l, pool.cut(idx));
    rows.emplace_back(l, idx);
    active[static_cast<std::size_t>(l)].push_back(idx);
  }

  while (true) {
    ++out.rounds;
    out.lp = solve_lp(lp, options.simplex);
    if (!out.lp.optimal()) return out;
    const Vector& z = out.lp.primal;
    const Vector x = z.head(n);
    bool added = false;
    for (Eigen::Index l = 0; l < L; ++l) {
      const CutPool& pool = (*next_pools)[static_cast<std::size_t>(l)];
      const auto& sel = pool.selected_indices();
      auto& act = active[static_cast<std::size_t>(l)];
      const Vector values = pool.selected_values(x);
      const double f = z[n + l];
      double worst = f + options.violation_tol * std::max(1.0, std::fabs(f));
      long arg = -1;
      for (std::size_t q = 0; q < sel.size(); ++q) {
        const double v = values[static_cast<Eigen::Index>(q)];
        if (v > worst && std::find(act.begin(), act.end(), sel[q]) == act.end()) {
          worst = v;
          arg = static_cast<long>(sel[q]);
        }
      }
      if (arg >= 0) {
        const auto idx = static_cast<std::uint32_t>(arg);
        append_cut_row(lp, n, n + l, pool.cut(idx));
        rows.emplace_back(l, idx);
        act.push_back(idx);
        added = true;
      }
    }
    if (!added) break;
  }

  out.x = out.lp.primal.head(n);
  out.stage_cost = r.c.dot(out.x);
  out.objective = out.lp.objective_value;
  out.duals_eq = out.lp.duals_eq;
  out.duals_le = out.lp.duals_le.head(ml);
  // Reduced cost of f_l times its lower bound, plus the cut rows' share.
  Vector reduced = lp.objective.tail(L);
  for (std::size_t q = 0; q < rows.size(); ++q) {
    const auto& [l, k] = rows[q];
    const double dual = out.lp.duals_le[ml + static_cast<Eigen::Index>(q)];
    out.cut_term -= dual * (*next_pools)[static_cast<std::size_t>(l)].cut(k).theta;
    reduced[l] += dual;
  }
  if (f_lower != -kInf) out.cut_term += reduced.sum() * f_lower;
  return out;
}

Cut make_cut(const StageRealization& realization, const StageSolve& solve, Eigen::Index prev_dim,
             int birth) {
  Cut cut;
  cut.birth = birth;
  cut.theta = solve.cut_term;
  if (solve.duals_eq.size() > 0) cut.theta += solve.duals_eq.dot(realization.b_eq);
  if (solve.duals_le.size() > 0) cut.theta += solve.duals_le.dot(realization.b_le);
  cut.beta = Vector::Zero(prev_dim);
  if (realization.B.rows() > 0) cut.beta -= realization.B.transpose() * solve.duals_eq;
  if (realization.H.rows() > 0) cut.beta -= realization.H.transpose() * solve.duals_le;
  return cut;
}

}  // namespace cusmuda
