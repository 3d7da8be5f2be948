#include "cusmuda/lp.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cusmuda {

void LPProblem::validate() const {
  const Eigen::Index n = num_vars();
  auto fail = [](const std::string& what) { throw std::invalid_argument("LPProblem: " + what); };
  if (eq_matrix.rows() != eq_rhs.size()) fail("eq_matrix rows != eq_rhs size");
  if (le_matrix.rows() != le_rhs.size()) fail("le_matrix rows != le_rhs size");
  if (eq_matrix.rows() > 0 && eq_matrix.cols() != n) fail("eq_matrix cols != variable count");
  if (le_matrix.rows() > 0 && le_matrix.cols() != n) fail("le_matrix cols != variable count");
  if (lower.size() != 0 && lower.size() != n) fail("lower bound size != variable count");
  if (upper.size() != 0 && upper.size() != n) fail("upper bound size != variable count");
  if (!objective.allFinite()) fail("non-finite objective coefficient");
  if (!eq_matrix.allFinite() || !eq_rhs.allFinite()) fail("non-finite equality data");
  if (!le_matrix.allFinite() || !le_rhs.allFinite()) fail("non-finite inequality data");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(lower_bound(j)) || lower_bound(j) == kInf) fail("invalid lower bound");
    if (std::isnan(upper_bound(j)) || upper_bound(j) == -kInf) fail("invalid upper bound");
  }
}

std::string to_string(LPStatus status) {
  switch (status) {
    case LPStatus::optimal: return "optimal";
    case LPStatus::infeasible: return "infeasible";
    case LPStatus::unbounded: return "unbounded";
    case LPStatus::numerical_breakdown: return "numerical breakdown";
  }
  return "unknown";
}

namespace {

enum class PhaseResult { optimal, unbounded, breakdown };

// Standard form: min c's, A s = b, s >= 0, b >= 0.
class Simplex {
 public:
  Simplex(const LPProblem& lp, const SimplexOptions& opt) : lp_(lp), opt_(opt) { build(); }

  LPSolution solve();

 private:
  void build();
  bool refactor();
  bool accurate(const Vector& cost) const;
  PhaseResult run_phase(const Vector& cost);
  void pivot(Eigen::Index r, Eigen::Index q, const Vector& alpha);
  bool drive_out_artificials();
  Vector std_primal() const;
  void fill_duals(const Vector& y, LPSolution& out) const;

  const LPProblem& lp_;
  SimplexOptions opt_;

  // Column bookkeeping for the original variables.
  std::vector<Eigen::Index> col_pos_, col_neg_;
  std::vector<double> shift_;
  std::vector<Eigen::Index> upper_var_;  // original variable of each upper-bound row

  Eigen::Index m_ = 0;         // rows in standard form
  Eigen::Index n_struct_ = 0;  // structural columns
  Eigen::Index n_total_ = 0;
  std::vector<Eigen::Index> row_origin_;  // index into [eq; le; upper]
  std::vector<double> row_sign_;
  std::vector<char> is_artificial_;
  std::vector<char> blocked_;
  Matrix A_;
  Vector b_;
  Vector cost2_;

  std::vector<Eigen::Index> basis_;
  std::vector<char> in_basis_;
  Matrix binv_;
  Vector xb_;
  int since_refactor_ = 0;
  int refactor_every_ = 50;
  std::size_t pivots_ = 0;
  std::size_t max_pivots_ = 0;
  bool infeasible_row_ = false;
  Vector infeasible_cert_;  // over [eq; le; upper] rows, found in presolve

  Eigen::Index unbounded_col_ = -1;
  Vector unbounded_alpha_;
};

void Simplex::build() {
  const Eigen::Index n = lp_.num_vars();
  const Eigen::Index me = lp_.num_eq();
  const Eigen::Index ml = lp_.num_le();

  col_pos_.assign(n, -1);
  col_neg_.assign(n, -1);
  shift_.assign(n, 0.0);
  Eigen::Index cols = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lo = lp_.lower_bound(j);
    col_pos_[j] = cols++;
    if (std::isfinite(lo)) {
      shift_[j] = lo;
    } else {
      col_neg_[j] = cols++;
    }
    if (std::isfinite(lp_.upper_bound(j))) upper_var_.push_back(j);
  }
  n_struct_ = cols;
  const auto mu = static_cast<Eigen::Index>(upper_var_.size());

  // Structural rows before presolve, expressed over standard columns.
  struct Row {
    Eigen::Index origin;
    bool has_slack;
    Eigen::VectorXd coef;
    double rhs;
  };
  std::vector<Row> rows;
  rows.reserve(static_cast<std::size_t>(me + ml + mu));

  auto expand = [&](const auto& orig_row, double rhs) {
    Row r{0, false, Eigen::VectorXd::Zero(n_struct_), rhs};
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = orig_row(j);
      if (a == 0.0) continue;
      r.coef[col_pos_[j]] += a;
      if (col_neg_[j] >= 0) r.coef[col_neg_[j]] -= a;
      r.rhs -= a * shift_[j];
    }
    return r;
  };

  for (Eigen::Index i = 0; i < me; ++i) {
    Row r = expand(lp_.eq_matrix.row(i), lp_.eq_rhs[i]);
    r.origin = i;
    rows.push_back(std::move(r));
  }
  for (Eigen::Index i = 0; i < ml; ++i) {
    Row r = expand(lp_.le_matrix.row(i), lp_.le_rhs[i]);
    r.origin = me + i;
    r.has_slack = true;
    rows.push_back(std::move(r));
  }
  for (Eigen::Index k = 0; k < mu; ++k) {
    const Eigen::Index j = upper_var_[k];
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(n);
    unit[j] = 1.0;
    Row r = expand(unit, lp_.upper_bound(j));
    r.origin = me + ml + k;
    r.has_slack = true;
    rows.push_back(std::move(r));
  }

  // Presolve: drop empty rows, detecting trivial infeasibility.
  std::vector<Row> kept;
  kept.reserve(rows.size());
  for (auto& r : rows) {
    if (r.coef.lpNorm<Eigen::Infinity>() == 0.0) {
      const double tol = opt_.feasibility_tol * std::max(1.0, std::fabs(r.rhs));
      const bool violated = r.has_slack ? (r.rhs < -tol) : (std::fabs(r.rhs) > tol);
      if (violated && !infeasible_row_) {
        infeasible_row_ = true;
        infeasible_cert_ = Vector::Zero(me + ml + mu);
        infeasible_cert_[r.origin] = r.rhs > 0 ? 1.0 : -1.0;
      }
      continue;
    }
    kept.push_back(std::move(r));
  }

  // Presolve: drop equality rows that are combinations of the others. They
  // keep a zero multiplier; an inconsistent one proves infeasibility.
  std::vector<std::size_t> eq_rows;
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (!kept[i].has_slack) eq_rows.push_back(i);
  if (eq_rows.size() >= 2 && !infeasible_row_) {
    const auto k = static_cast<Eigen::Index>(eq_rows.size());
    Matrix E(n_struct_, k);
    for (Eigen::Index c = 0; c < k; ++c) {
      const auto& coef = kept[eq_rows[static_cast<std::size_t>(c)]].coef;
      E.col(c) = coef / coef.norm();
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(E);
    qr.setThreshold(1e-10);
    const Eigen::Index rank = qr.rank();
    if (rank < k) {
      const auto& perm = qr.colsPermutation().indices();
      Matrix basis_rows(n_struct_, rank);
      Vector basis_rhs(rank);
      std::vector<char> drop(kept.size(), 0);
      for (Eigen::Index c = 0; c < rank; ++c) {
        const Row& r = kept[eq_rows[static_cast<std::size_t>(perm[c])]];
        basis_rows.col(c) = r.coef;
        basis_rhs[c] = r.rhs;
      }
      const Eigen::HouseholderQR<Matrix> fit(basis_rows);
      for (Eigen::Index c = rank; c < k; ++c) {
        const std::size_t idx = eq_rows[static_cast<std::size_t>(perm[c])];
        const Row& r = kept[idx];
        const Vector lambda = fit.solve(r.coef);
        const double scale = std::max(1.0, r.coef.lpNorm<Eigen::Infinity>());
        if ((basis_rows * lambda - r.coef).lpNorm<Eigen::Infinity>() > 1e-9 * scale) continue;
        drop[idx] = 1;
        const double excess = r.rhs - lambda.dot(basis_rhs);
        const double tol = opt_.feasibility_tol * std::max({1.0, std::fabs(r.rhs), lambda.lpNorm<1>() *
                                                                    basis_rhs.lpNorm<Eigen::Infinity>()});
        if (std::fabs(excess) > tol && !infeasible_row_) {
          infeasible_row_ = true;
          const double sign = excess > 0 ? 1.0 : -1.0;
          infeasible_cert_ = Vector::Zero(me + ml + mu);
          infeasible_cert_[r.origin] = sign;
          for (Eigen::Index b = 0; b < rank; ++b)
            infeasible_cert_[kept[eq_rows[static_cast<std::size_t>(perm[b])]].origin] -= sign * lambda[b];
        }
      }
      std::vector<Row> independent;
      independent.reserve(kept.size());
      for (std::size_t i = 0; i < kept.size(); ++i)
        if (!drop[i]) independent.push_back(std::move(kept[i]));
      kept = std::move(independent);
    }
  }

  m_ = static_cast<Eigen::Index>(kept.size());
  Eigen::Index n_slack = 0;
  for (const auto& r : kept) n_slack += r.has_slack ? 1 : 0;

  // Crash: a row without a usable slack may start on a structural column
  // that appears in no other row and has a positive coefficient once the
  // row is oriented to a nonnegative right-hand side.
  std::vector<int> col_count(static_cast<std::size_t>(n_struct_), 0);
  for (const auto& r : kept)
    for (Eigen::Index j = 0; j < n_struct_; ++j)
      if (r.coef[j] != 0.0) ++col_count[static_cast<std::size_t>(j)];
  std::vector<Eigen::Index> crash(kept.size(), -1);
  std::vector<char> crash_used(static_cast<std::size_t>(n_struct_), 0);
  Eigen::Index n_art = 0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const auto& r = kept[i];
    if (r.has_slack && r.rhs >= 0.0) continue;
    const double sign = r.rhs < 0.0 ? -1.0 : 1.0;
    for (Eigen::Index j = 0; j < n_struct_; ++j) {
      if (col_count[static_cast<std::size_t>(j)] != 1 || crash_used[static_cast<std::size_t>(j)]) continue;
      if (sign * r.coef[j] > opt_.pivot_tol) {
        crash[i] = j;
        crash_used[static_cast<std::size_t>(j)] = 1;
        break;
      }
    }
    if (crash[i] < 0) ++n_art;
  }
  n_total_ = n_struct_ + n_slack + n_art;

  A_ = Matrix::Zero(m_, n_total_);
  b_.resize(m_);
  row_origin_.resize(m_);
  row_sign_.resize(m_);
  is_artificial_.assign(n_total_, 0);
  blocked_.assign(n_total_, 0);
  basis_.assign(m_, -1);
  in_basis_.assign(n_total_, 0);

  Eigen::Index slack_col = n_struct_;
  Eigen::Index art_col = n_struct_ + n_slack;
  for (Eigen::Index i = 0; i < m_; ++i) {
    const Row& r = kept[i];
    const double sign = r.rhs < 0.0 ? -1.0 : 1.0;
    row_origin_[i] = r.origin;
    row_sign_[i] = sign;
    A_.row(i).head(n_struct_) = sign * r.coef.transpose();
    b_[i] = sign * r.rhs;
    if (r.has_slack) {
      A_(i, slack_col) = sign;
      if (sign > 0) basis_[i] = slack_col;
      ++slack_col;
    }
    if (basis_[i] < 0 && crash[static_cast<std::size_t>(i)] >= 0) basis_[i] = crash[static_cast<std::size_t>(i)];
    if (basis_[i] < 0) {
      A_(i, art_col) = 1.0;
      is_artificial_[art_col] = 1;
      basis_[i] = art_col++;
    }
    in_basis_[basis_[i]] = 1;
  }

  cost2_ = Vector::Zero(n_total_);
  for (Eigen::Index j = 0; j < n; ++j) {
    cost2_[col_pos_[j]] = lp_.objective[j];
    if (col_neg_[j] >= 0) cost2_[col_neg_[j]] = -lp_.objective[j];
  }

  // A refactorization costs O(m^3) against O(m^2) per update.
  refactor_every_ = std::max(opt_.refactor_interval, static_cast<int>(m_ / 8));
  max_pivots_ = opt_.max_pivots ? opt_.max_pivots
                                : static_cast<std::size_t>(100 * (m_ + n_total_) + 1000);
}

bool Simplex::refactor() {
  since_refactor_ = 0;
  if (m_ == 0) {
    binv_.resize(0, 0);
    xb_.resize(0);
    return true;
  }
  Matrix basis_matrix(m_, m_);
  for (Eigen::Index i = 0; i < m_; ++i) basis_matrix.col(i) = A_.col(basis_[i]);
  const Vector diag = basis_matrix.diagonal();
  if ((basis_matrix.cwiseAbs().colwise().sum().transpose() - diag.cwiseAbs()).maxCoeff() == 0.0 &&
      diag.cwiseAbs().minCoeff() > opt_.pivot_tol) {
    binv_ = diag.cwiseInverse().asDiagonal();
    xb_ = binv_ * b_;
    return true;
  }
  Eigen::PartialPivLU<Matrix> lu(basis_matrix);
  if (!(lu.rcond() > 1e-14)) return false;
  binv_ = lu.inverse();
  xb_ = binv_ * b_;
  return binv_.allFinite();
}

bool Simplex::accurate(const Vector& cost) const {
  if (m_ == 0) return true;
  Vector cb(m_);
  Vector bx = Vector::Zero(m_);
  Vector cb_res(m_);
  for (Eigen::Index i = 0; i < m_; ++i) {
    cb[i] = cost[basis_[i]];
    bx += xb_[i] * A_.col(basis_[i]);
  }
  const Vector y = binv_.transpose() * cb;
  for (Eigen::Index i = 0; i < m_; ++i) cb_res[i] = A_.col(basis_[i]).dot(y) - cb[i];
  const double tol = 1e-9;
  const double b_scale = std::max(1.0, b_.lpNorm<Eigen::Infinity>());
  const double c_scale = std::max(1.0, cb.lpNorm<Eigen::Infinity>());
  return (bx - b_).lpNorm<Eigen::Infinity>() <= tol * b_scale &&
         cb_res.lpNorm<Eigen::Infinity>() <= tol * c_scale;
}

void Simplex::pivot(Eigen::Index r, Eigen::Index q, const Vector& alpha) {
  const double theta = std::max(xb_[r], 0.0) / alpha[r];
  xb_ -= theta * alpha;
  xb_[r] = theta;

  const double piv = alpha[r];
  binv_.row(r) /= piv;
  for (Eigen::Index i = 0; i < m_; ++i) {
    if (i == r || alpha[i] == 0.0) continue;
    binv_.row(i) -= alpha[i] * binv_.row(r);
  }
  in_basis_[basis_[r]] = 0;
  basis_[r] = q;
  in_basis_[q] = 1;
  ++pivots_;
  ++since_refactor_;
}

PhaseResult Simplex::run_phase(const Vector& cost) {
  int stall = 0;
  bool bland = false;
  bool fresh = true;  // basis inverse was just refactored

  for (;;) {
    if (since_refactor_ >= refactor_every_) {
      if (!refactor()) return PhaseResult::breakdown;
      fresh = true;
    }
    if (pivots_ > max_pivots_) return PhaseResult::breakdown;

    Vector cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
    const Vector y = binv_.transpose() * cb;
    const Vector d = cost - A_.transpose() * y;

    Eigen::Index q = -1;
    double best = -opt_.optimality_tol;
    for (Eigen::Index j = 0; j < n_total_; ++j) {
      if (in_basis_[j] || blocked_[j]) continue;
      if (d[j] < best) {
        q = j;
        if (bland) break;
        best = d[j];
      }
    }
    if (q < 0) {
      if (!fresh && !accurate(cost)) {
        if (!refactor()) return PhaseResult::breakdown;
        fresh = true;
        continue;
      }
      return PhaseResult::optimal;
    }

    const Vector alpha = binv_ * A_.col(q);
    const double min_pivot = std::max(opt_.pivot_tol, opt_.relative_pivot_tol * alpha.lpNorm<Eigen::Infinity>());
    Eigen::Index r = -1;
    double best_ratio = kInf;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const bool stuck_art = is_artificial_[basis_[i]] && blocked_[basis_[i]];
      double ratio;
      if (stuck_art) {
        if (std::fabs(alpha[i]) <= min_pivot) continue;
        ratio = 0.0;
      } else {
        if (alpha[i] <= min_pivot) continue;
        ratio = std::max(xb_[i], 0.0) / alpha[i];
      }
      const double tie = 1e-12 * (1.0 + best_ratio);
      if (r < 0 || ratio < best_ratio - tie) {
        r = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + tie) {
        const bool better = bland ? basis_[i] < basis_[r]
                                  : std::fabs(alpha[i]) > std::fabs(alpha[r]);
        if (better) {
          r = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
    }
    if (r < 0) {
      unbounded_col_ = q;
      unbounded_alpha_ = alpha;
      return PhaseResult::unbounded;
    }

    if (best_ratio <= 1e-12) {
      if (++stall >= opt_.stall_limit) bland = true;
    } else {
      stall = 0;
    }
    pivot(r, q, alpha);
    fresh = false;
  }
}

bool Simplex::drive_out_artificials() {
  bool pivoted = false;
  for (Eigen::Index r = 0; r < m_; ++r) {
    if (!is_artificial_[basis_[r]]) continue;
    const Eigen::RowVectorXd row = binv_.row(r) * A_;
    Eigen::Index q = -1;
    double best = opt_.pivot_tol * 1e3;
    for (Eigen::Index j = 0; j < n_total_; ++j) {
      if (in_basis_[j] || is_artificial_[j]) continue;
      if (std::fabs(row[j]) > best) {
        best = std::fabs(row[j]);
        q = j;
      }
    }
    if (q >= 0) {
      const Vector alpha = binv_ * A_.col(q);
      // Degenerate pivot: the artificial sits at zero.
      xb_[r] = 0.0;
      pivot(r, q, alpha);
      pivoted = true;
    }
  }
  for (Eigen::Index j = 0; j < n_total_; ++j)
    if (is_artificial_[j]) blocked_[j] = 1;
  return pivoted;
}

Vector Simplex::std_primal() const {
  Vector s = Vector::Zero(n_total_);
  for (Eigen::Index i = 0; i < m_; ++i) s[basis_[i]] = xb_[i];
  return s;
}

void Simplex::fill_duals(const Vector& y, LPSolution& out) const {
  const Eigen::Index me = lp_.num_eq();
  const Eigen::Index ml = lp_.num_le();
  out.duals_eq = Vector::Zero(me);
  out.duals_le = Vector::Zero(ml);
  out.duals_upper = Vector::Zero(lp_.num_vars());
  for (Eigen::Index i = 0; i < m_; ++i) {
    const double v = row_sign_[i] * y[i];
    const Eigen::Index o = row_origin_[i];
    if (o < me) {
      out.duals_eq[o] = v;
    } else if (o < me + ml) {
      out.duals_le[o - me] = v;
    } else {
      out.duals_upper[upper_var_[o - me - ml]] = v;
    }
  }
}

LPSolution Simplex::solve() {
  LPSolution out;
  const Eigen::Index n = lp_.num_vars();
  const Eigen::Index n_rows_orig =
      lp_.num_eq() + lp_.num_le() + static_cast<Eigen::Index>(upper_var_.size());

  if (infeasible_row_) {
    out.status = LPStatus::infeasible;
    out.certificate = infeasible_cert_;
    return out;
  }
  if (!refactor()) {
    out.status = LPStatus::numerical_breakdown;
    return out;
  }

  // Phase 1.
  bool any_artificial = false;
  for (Eigen::Index i = 0; i < m_; ++i) any_artificial |= is_artificial_[basis_[i]] != 0;
  if (any_artificial) {
    Vector cost1 = Vector::Zero(n_total_);
    for (Eigen::Index j = 0; j < n_total_; ++j)
      if (is_artificial_[j]) cost1[j] = 1.0;
    const PhaseResult res = run_phase(cost1);
    out.pivots = pivots_;
    if (res != PhaseResult::optimal) {
      out.status = LPStatus::numerical_breakdown;
      return out;
    }
    double infeas = 0.0;
    for (Eigen::Index i = 0; i < m_; ++i)
      if (is_artificial_[basis_[i]]) infeas += std::max(xb_[i], 0.0);
    const double scale = std::max(1.0, b_.size() ? b_.lpNorm<Eigen::Infinity>() : 0.0);
    if (infeas > opt_.feasibility_tol * scale) {
      out.status = LPStatus::infeasible;
      Vector cb(m_);
      for (Eigen::Index i = 0; i < m_; ++i) cb[i] = cost1[basis_[i]];
      const Vector y = binv_.transpose() * cb;
      out.certificate = Vector::Zero(n_rows_orig);
      for (Eigen::Index i = 0; i < m_; ++i) out.certificate[row_origin_[i]] = row_sign_[i] * y[i];
      return out;
    }
    if (drive_out_artificials() && !refactor()) {
      out.status = LPStatus::numerical_breakdown;
      return out;
    }
  } else {
    for (Eigen::Index j = 0; j < n_total_; ++j)
      if (is_artificial_[j]) blocked_[j] = 1;
  }

  // Phase 2.
  const PhaseResult res = run_phase(cost2_);
  out.pivots = pivots_;
  if (res == PhaseResult::breakdown) {
    out.status = LPStatus::numerical_breakdown;
    return out;
  }
  if (res == PhaseResult::unbounded) {
    out.status = LPStatus::unbounded;
    Vector dir = Vector::Zero(n_total_);
    dir[unbounded_col_] = 1.0;
    for (Eigen::Index i = 0; i < m_; ++i) dir[basis_[i]] -= unbounded_alpha_[i];
    out.certificate = Vector::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      out.certificate[j] = dir[col_pos_[j]] - (col_neg_[j] >= 0 ? dir[col_neg_[j]] : 0.0);
    }
    return out;
  }

  const Vector s = std_primal();
  const double scale = std::max(1.0, b_.size() ? b_.lpNorm<Eigen::Infinity>() : 0.0);
  if (s.minCoeff() < -opt_.feasibility_tol * scale * 10.0) {
    out.status = LPStatus::numerical_breakdown;
    return out;
  }

  out.primal.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double v = shift_[j] + std::max(s[col_pos_[j]], 0.0);
    if (col_neg_[j] >= 0) v -= std::max(s[col_neg_[j]], 0.0);
    out.primal[j] = v;
  }
  Vector cb(m_);
  for (Eigen::Index i = 0; i < m_; ++i) cb[i] = cost2_[basis_[i]];
  const Vector y = binv_.transpose() * cb;
  fill_duals(y, out);
  out.objective_value = lp_.objective.dot(out.primal);
  out.status = LPStatus::optimal;
  return out;
}

}  // namespace

LPSolution solve_lp(const LPProblem& problem, const SimplexOptions& options) {
  problem.validate();
  for (Eigen::Index j = 0; j < problem.num_vars(); ++j) {
    if (problem.upper_bound(j) < problem.lower_bound(j)) {
      LPSolution out;
      out.status = LPStatus::infeasible;
      return out;
    }
  }
  Simplex simplex(problem, options);
  return simplex.solve();
}

std::string dump_lp(const LPProblem& problem) {
  std::string out;
  auto term_list = [&](const auto& row) {
    std::string s;
    for (Eigen::Index j = 0; j < row.size(); ++j) {
      if (row(j) == 0.0) continue;
      s += fmt::format(" {:+.17g} x{}", row(j), j);
    }
    return s.empty() ? std::string(" 0") : s;
  };
  out += "min" + term_list(problem.objective.transpose()) + "\n";
  for (Eigen::Index i = 0; i < problem.num_eq(); ++i)
    out += fmt::format("e{}:{} = {:.17g}\n", i, term_list(problem.eq_matrix.row(i)), problem.eq_rhs[i]);
  for (Eigen::Index i = 0; i < problem.num_le(); ++i)
    out += fmt::format("l{}:{} <= {:.17g}\n", i, term_list(problem.le_matrix.row(i)), problem.le_rhs[i]);
  for (Eigen::Index j = 0; j < problem.num_vars(); ++j) {
    const double lo = problem.lower_bound(j);
    const double hi = problem.upper_bound(j);
    if (lo == 0.0 && hi == kInf) continue;
    out += fmt::format("{:.17g} <= x{} <= {:.17g}\n", lo, j, hi);
  }
  return out;
}

}  // namespace cusmuda
