#pragma once

#include "cusmuda/lp.hpp"
#include "cusmuda/random.hpp"

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace cusmuda {

/// One atom of a stage distribution.
///
/// The stage problem given the previous decision x_prev is
///   min  c'x
///   s.t. A x + B x_prev  = b_eq
///        G x + H x_prev <= b_le
///        x >= 0 (except variables flagged free on the stage)
struct StageRealization {
  Matrix A;
  Matrix B;
  Matrix G;
  Matrix H;
  Vector b_eq;
  Vector b_le;
  Vector c;
  double probability = 1.0;
};

struct StageDistribution {
  std::vector<StageRealization> realizations;
  /// Per-variable sign restriction; empty means every variable is >= 0.
  std::vector<bool> free_vars;
  /// Known lower bound on the recourse function of every realization of
  /// this stage; -inf when none is known. Bounds the epigraph variables of
  /// the previous stage's problem while its cut model is still coarse.
  double recourse_lower_bound = -kInf;

  bool is_free(Eigen::Index j) const {
    return !free_vars.empty() && free_vars[static_cast<std::size_t>(j)];
  }
};

/// Multistage stochastic LP with stagewise independent, finitely supported
/// data. Stage indices are zero-based: stages[0] is the deterministic first
/// stage and x0 plays the role of the decision preceding it.
struct MultistageProgram {
  Vector x0;
  std::vector<StageDistribution> stages;

  int num_stages() const { return static_cast<int>(stages.size()); }
  /// Decision dimension of stage t (0-based); stage -1 is x0.
  Eigen::Index stage_dim(int t) const;
  int num_realizations(int t) const {
    return static_cast<int>(stages[static_cast<std::size_t>(t)].realizations.size());
  }
  const StageRealization& realization(int t, int j) const {
    return stages[static_cast<std::size_t>(t)].realizations[static_cast<std::size_t>(j)];
  }
};

/// Empty iff the program satisfies every structural invariant. Each entry
/// names the stage (1-based), realization (1-based) and offending field.
std::vector<std::string> validate(const MultistageProgram& program);

/// Realization indices (0-based) along one sampled path; index 0 is always
/// the first stage's single realization.
struct ScenarioPath {
  std::vector<int> realization_indices;
};

/// Draws one path: each stage's index independently with its probabilities.
ScenarioPath sample_scenario(const MultistageProgram& program, Rng& rng);

/// Program serialization as a JSON document. Matrices are dense row-major
/// arrays of doubles written with round-trip precision.
std::string program_to_json(const MultistageProgram& program);
MultistageProgram program_from_json(const std::string& text);
void write_program(const MultistageProgram& program, const std::filesystem::path& path);
MultistageProgram read_program(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Deterministic equivalent

class TreeTooLarge : public std::runtime_error {
 public:
  TreeTooLarge(double required, std::size_t cap);
  double required_nodes() const { return required_; }
  std::size_t cap() const { return cap_; }

 private:
  double required_;
  std::size_t cap_;
};

struct ExtensiveFormOptions {
  std::size_t max_nodes = 100000;
};

struct TreeNode {
  int stage = 0;        // 0-based
  int realization = 0;  // 0-based
  int parent = -1;      // -1 for the root
  double probability = 1.0;  // conditional on the root
  Eigen::Index offset = 0;   // first variable of this node in the LP
};

struct ExtensiveForm {
  LPProblem lp;
  std::vector<TreeNode> nodes;
};

/// Nodes of the scenario tree below (and including) one node at `stage`.
double scenario_tree_size(const MultistageProgram& program, int stage = 0);

/// Tree-indexed deterministic equivalent. Its optimal value is the optimal
/// expected cost of the whole program.
ExtensiveForm extensive_form(const MultistageProgram& program,
                             const ExtensiveFormOptions& options = {});

/// Deterministic equivalent of the subtree rooted at realization j of stage
/// t with previous decision x_prev; its optimal value is the exact recourse
/// value of (x_prev, xi_tj) including the stage-t cost.
ExtensiveForm subtree_extensive_form(const MultistageProgram& program, int stage,
                                     int realization, const Vector& x_prev,
                                     const ExtensiveFormOptions& options = {});

/// Solves subtree_extensive_form.
LPSolution exact_recourse(const MultistageProgram& program, int stage, int realization,
                          const Vector& x_prev, const ExtensiveFormOptions& options = {});

}  // namespace cusmuda
