#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <string>

namespace cusmuda {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Minimise objective'x subject to
///   eq_matrix x  = eq_rhs
///   le_matrix x <= le_rhs
///   lower <= x <= upper
/// An empty `lower` means x >= 0; an empty `upper` means no upper bounds.
/// Lower bounds may be -inf (free variables); upper bounds may be +inf.
struct LPProblem {
  Vector objective;
  Matrix eq_matrix;
  Vector eq_rhs;
  Matrix le_matrix;
  Vector le_rhs;
  Vector lower;
  Vector upper;

  Eigen::Index num_vars() const { return objective.size(); }
  Eigen::Index num_eq() const { return eq_rhs.size(); }
  Eigen::Index num_le() const { return le_rhs.size(); }

  double lower_bound(Eigen::Index j) const { return lower.size() ? lower[j] : 0.0; }
  double upper_bound(Eigen::Index j) const { return upper.size() ? upper[j] : kInf; }

  /// Throws std::invalid_argument on inconsistent dimensions or non-finite data.
  void validate() const;
};

enum class LPStatus { optimal, infeasible, unbounded, numerical_breakdown };

std::string to_string(LPStatus status);

/// Result of solve_lp.
///
/// Duals follow the convention objective_value = duals_eq'eq_rhs +
/// duals_le'le_rhs + duals_upper'upper (+ reduced-cost terms of nonzero
/// finite lower bounds), i.e. each dual is the derivative of the optimal
/// value with respect to its right-hand side. Consequently duals_le <= 0 and
/// duals_upper <= 0.
struct LPSolution {
  LPStatus status = LPStatus::numerical_breakdown;
  Vector primal;
  Vector duals_eq;
  Vector duals_le;
  Vector duals_upper;
  double objective_value = 0.0;
  std::size_t pivots = 0;
  /// Infeasible: Farkas multipliers over [eq rows; le rows; upper rows].
  /// Unbounded: a primal direction of unbounded descent.
  Vector certificate;

  bool optimal() const { return status == LPStatus::optimal; }
};

struct SimplexOptions {
  double feasibility_tol = 1e-8;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-10;
  /// Pivots below this times the largest entry of the entering column are skipped.
  double relative_pivot_tol = 1e-9;
  int refactor_interval = 50;
  /// Consecutive degenerate pivots after which Bland's rule takes over.
  int stall_limit = 100;
  /// 0 selects a size-dependent cap.
  std::size_t max_pivots = 0;
};

/// Two-phase revised simplex with a dense explicit basis inverse.
///
/// Pricing is Dantzig's rule until a stall of `stall_limit` degenerate
/// pivots, then Bland's rule for the remainder of the phase. Optimal
/// solutions are always basic, i.e. vertices of the feasible set. The
/// function is pure and safe to call concurrently.
LPSolution solve_lp(const LPProblem& problem, const SimplexOptions& options = {});

/// Human-readable row listing, for debugging.
std::string dump_lp(const LPProblem& problem);

}  // namespace cusmuda
