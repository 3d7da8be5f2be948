#pragma once

#include "cusmuda/lp.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cusmuda {

/// Affine minorant theta + <beta, x> of one recourse function.
struct Cut {
  double theta = 0.0;
  Vector beta;
  int birth = 0;

  double value(const Vector& x) const { return theta + beta.dot(x); }
};

enum class SelectorKind { all, level1, mlm_level1, level_h, custom_monotone };

/// Which cuts of a pool enter the stage subproblems.
///
/// For each trial point, positions (1-based, in ascending index order) are
/// picked from the set of cuts that attain the best value there. Level1
/// keeps them all, MLMLevel1 keeps only the first (oldest), LevelH keeps the
/// H highest-valued cuts, and CustomMonotone uses an explicit table S(m).
class SelectorSpec {
 public:
  static SelectorSpec All();
  static SelectorSpec Level1();
  static SelectorSpec MLMLevel1();
  static SelectorSpec LevelH(int H);
  /// table[m-1] holds S(m). Throws std::invalid_argument unless
  /// S(m) is a subset of {1..m} and of S(m+1) for every m.
  static SelectorSpec CustomMonotone(std::vector<std::vector<int>> table);

  /// Accepts "muda", "cs1", "cs2" and "levelH:<H>".
  static SelectorSpec parse(const std::string& name);

  SelectorKind kind() const { return kind_; }
  int H() const { return H_; }
  const std::vector<std::vector<int>>& table() const { return table_; }
  /// Positions chosen from an argmax set of size m (1-based).
  std::vector<int> positions(std::size_t m) const;
  std::string name() const;

 private:
  SelectorKind kind_ = SelectorKind::all;
  int H_ = 0;
  std::vector<std::vector<int>> table_;
};

struct SelectionStats {
  std::size_t selected = 0;
  std::size_t total = 0;
  double proportion = 0.0;
};

/// Cuts and trial points of one (stage, realization) pair.
///
/// Cuts and trial points are never removed. For every trial point the pool
/// tracks the best cut value m and the ascending index set I of the cuts
/// attaining it, under the eps0-tolerant comparisons
///   strict improvement: V > m + eps0 * max(1, |m|)
///   tie:                |V - m| <= eps0 * max(1, |m|).
/// Every point sees the cuts in birth order, whatever the interleaving of
/// add_cut and add_trial_point. Selection flags are recomputed by sync().
class CutPool {
 public:
  CutPool(Eigen::Index dim, SelectorSpec selector, double epsilon0 = 1e-6);

  Eigen::Index dim() const { return dim_; }
  const SelectorSpec& selector() const { return selector_; }
  double epsilon0() const { return eps0_; }

  std::size_t add_trial_point(const Vector& x);
  std::size_t add_cut(Cut cut);
  void sync();

  std::size_t num_cuts() const { return cuts_.size(); }
  std::size_t num_trial_points() const { return points_.size(); }
  const std::vector<Cut>& cuts() const { return cuts_; }
  const Cut& cut(std::size_t k) const { return cuts_[k]; }
  const Vector& trial_point(std::size_t i) const { return points_[i]; }

  /// -inf when the pool has no cuts.
  double best_value(std::size_t i) const { return best_[i]; }
  /// Empty under the All selector, which does not track argmax sets.
  const std::vector<std::uint32_t>& argmax(std::size_t i) const { return argmax_[i]; }

  /// As of the last sync().
  const std::vector<std::uint32_t>& selected_indices() const { return selected_list_; }
  bool is_selected(std::size_t k) const { return k < selected_.size() && selected_[k]; }
  SelectionStats selection_stats() const;

  /// Max over selected cuts at x; -inf when none is selected.
  double evaluate_model(const Vector& x) const;
  /// Max over all stored cuts at x; -inf when empty.
  double evaluate_all(const Vector& x) const;
  /// Index of the selected cut with the largest value at x (smallest index
  /// on ties); -1 when none is selected.
  long argmax_selected(const Vector& x) const;
  /// Values at x of the selected cuts, in selected_indices() order.
  Vector selected_values(const Vector& x) const;

 private:
  void offer(std::size_t point, std::size_t k, double value);
  bool strictly_better(double v, double m) const;
  bool tied(double v, double m) const;

  Eigen::Index dim_;
  SelectorSpec selector_;
  double eps0_;
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMatrix> beta_block(std::size_t rows) const;
  Eigen::Map<const RowMatrix> point_block(std::size_t rows) const;

  std::vector<Cut> cuts_;
  std::vector<Vector> points_;
  std::vector<double> beta_flat_;   // all cut gradients, row-major
  std::vector<double> theta_flat_;
  std::vector<double> point_flat_;  // all trial points, row-major
  RowMatrix selected_beta_;
  Vector selected_theta_;
  std::vector<double> best_;
  std::vector<std::vector<std::uint32_t>> argmax_;
  std::vector<std::vector<std::pair<double, std::uint32_t>>> top_;  // LevelH only
  std::vector<char> selected_;
  std::vector<std::uint32_t> selected_list_;
};

/// CSV dump: header "birth,theta,beta_1..beta_n,selected", one row per cut.
void write_cut_csv(const CutPool& pool, const std::filesystem::path& path);

struct CutRecord {
  Cut cut;
  bool selected = false;
};
std::vector<CutRecord> read_cut_csv(const std::filesystem::path& path);

}  // namespace cusmuda
