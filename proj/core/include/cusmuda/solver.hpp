#pragma once

#include "cusmuda/cut_pool.hpp"
#include "cusmuda/program.hpp"
#include "cusmuda/stage_problem.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cusmuda {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  int N = 200;
  double alpha = 0.025;
  double epsilon = 0.05;
  double epsilon0 = 1e-6;
  SelectorSpec selector = SelectorSpec::All();
  std::uint64_t seed = 0;
  int max_iterations = 200;
  int workers = 1;
  /// Also stop once two consecutive iterations add no cut that raises the
  /// model at its own trial point by more than epsilon0.
  bool stop_on_stable_cuts = false;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct BoundsRecord {
  int iteration = 0;
  double z_inf = 0.0;
  double cost_mean = 0.0;
  double cost_std = 0.0;
  double z_sup = 0.0;
};

/// Per (iteration, stage, realization) selection counts. Stages and
/// realizations are 0-based here and 1-based in the CSV output.
struct SelectionRecord {
  int iteration = 0;
  int t = 0;
  int j = 0;
  std::size_t selected = 0;
  std::size_t total = 0;

  double proportion() const { return total ? static_cast<double>(selected) / static_cast<double>(total) : 0.0; }
};

enum class Termination { converged, max_iterations };
std::string to_string(Termination termination);

struct RunReport {
  std::vector<BoundsRecord> bounds;
  std::vector<SelectionRecord> selection;
  std::vector<std::size_t> cuts_per_iteration;
  std::vector<double> forward_seconds;
  std::vector<double> backward_seconds;
  Termination termination = Termination::max_iterations;
  /// "bounds", "stable_cuts" or empty when the iteration cap was hit.
  std::string stopping_rule;
  int iterations = 0;
  std::size_t total_cuts = 0;
  double total_seconds = 0.0;
  RunConfig config;
};

/// Mean and population standard deviation of the costs and the upper end
/// of the one-sided (1 - alpha) confidence interval.
BoundsRecord bounds_from_costs(int iteration, double z_inf, const std::vector<double>& costs, double alpha);

/// Stops when z_inf = 0 and z_sup <= epsilon, or when
/// |z_sup - z_inf| <= epsilon * max(1, |z_sup|).
bool should_stop(const BoundsRecord& record, double epsilon);

struct ForwardResult {
  std::vector<ScenarioPath> paths;
  /// trajectories[s][t] is the stage-t decision of scenario s.
  std::vector<std::vector<Vector>> trajectories;
  std::vector<double> costs;
};

/// Everything known about one backward-pass cut when it is appended.
struct CutEvent {
  int iteration = 0;
  int t = 0;         // 0-based stage of the recourse function
  int j = 0;         // 0-based realization
  int scenario = 0;  // forward scenario of the trial point
  const Vector* x_prev = nullptr;
  const StageSolve* solve = nullptr;
  const Cut* cut = nullptr;
  std::size_t index = 0;  // position in the pool
};

/// Multicut nested decomposition with sampling and cut selection.
///
/// pools()[t][j] holds the cuts for the recourse function of realization j
/// at stage t, for t >= 1. Each iteration samples N scenarios, runs the
/// forward pass with the selected cuts, builds N cuts per realization in
/// the backward pass from stage T down to stage 2, then solves the first
/// stage problem for the lower bound.
class Solver {
 public:
  /// Keeps a reference to `program`, which must outlive the solver.
  Solver(const MultistageProgram& program, RunConfig config);
  Solver(MultistageProgram&&, RunConfig) = delete;

  const MultistageProgram& program() const { return program_; }
  const RunConfig& config() const { return config_; }
  const std::vector<std::vector<CutPool>>& pools() const { return pools_; }

  void set_cut_observer(std::function<void(const CutEvent&)> observer) { observer_ = std::move(observer); }

  ForwardResult forward_pass(int iteration);
  /// Returns the number of cuts added.
  std::size_t backward_pass(const ForwardResult& forward, int iteration);
  /// First-stage LP optimum with the selected stage-2 cuts.
  double lower_bound() const;
  BoundsRecord compute_bounds(int iteration, const std::vector<double>& costs) const;

  RunReport run();

 private:
  const MultistageProgram& program_;
  RunConfig config_;
  std::vector<std::vector<CutPool>> pools_;
  std::function<void(const CutEvent&)> observer_;
  bool last_backward_stable_ = false;
};

/// Runs fn(i) for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace cusmuda
