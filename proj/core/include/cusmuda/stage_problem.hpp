#pragma once

#include "cusmuda/cut_pool.hpp"
#include "cusmuda/lp.hpp"
#include "cusmuda/program.hpp"

#include <cstdint>
#include <vector>

namespace cusmuda {

struct StageOptions {
  SimplexOptions simplex;
  /// A cut omitted from the LP counts as violated when it exceeds the
  /// epigraph value by more than this times max(1, |f|).
  double violation_tol = 1e-9;
};

/// Solution of one stage LP
///   min  c'x + sum_l p_l f_l
///   s.t. A x = b_eq - B x_prev
///        G x <= b_le - H x_prev
///        beta'x - f_l <= -theta   for every selected cut of pool l
///        f_l >= L                 when the next stage has a recourse bound L
/// where the pools belong to the next stage. The bound on f_l enters theta
/// through the reduced cost of f_l.
struct StageSolve {
  LPSolution lp;
  Vector x;
  double stage_cost = 0.0;
  double objective = 0.0;
  /// Multipliers of the stage rows, objective = d_eq'rhs_eq + d_le'rhs_le + cut_term.
  Vector duals_eq;
  Vector duals_le;
  double cut_term = 0.0;
  /// True when the cost-to-go term was left out.
  bool myopic = false;
  int rounds = 0;
};

/// Solves the stage problem of realization j at stage t (0-based).
///
/// Cut rows are generated lazily: the LP starts with one cut per pool and
/// adds the most violated selected cut of each pool until none is violated,
/// so the result is a vertex optimum of the full LP and omitted rows have
/// zero multipliers. `next_pools` may be null (last stage); when any of its
/// pools has no selected cut the problem is solved without cost-to-go.
/// `hint` picks the starting cut of each pool (argmax at the hint).
StageSolve solve_stage(const MultistageProgram& program, int t, int j, const Vector& x_prev,
                       const std::vector<CutPool>* next_pools, const Vector* hint = nullptr,
                       const StageOptions& options = {});

/// Same, starting from the given cut of each pool (one index per pool).
StageSolve solve_stage(const MultistageProgram& program, int t, int j, const Vector& x_prev,
                       const std::vector<CutPool>* next_pools, const std::vector<std::uint32_t>& start,
                       const StageOptions& options = {});

/// Per pool, the selected cut with the largest value at `hint`; empty when
/// some pool has no selected cut.
std::vector<std::uint32_t> starting_cuts(const std::vector<CutPool>& pools, const Vector& hint);

/// Cut on the recourse function of (t, j) built from the duals of `solve`:
///   theta = d_eq'b_eq + d_le'b_le + cut_term
///   beta  = -(B'd_eq + H'd_le).
Cut make_cut(const StageRealization& realization, const StageSolve& solve, Eigen::Index prev_dim,
             int birth);

}  // namespace cusmuda
