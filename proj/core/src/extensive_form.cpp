#include "cusmuda/program.hpp"

#include <fmt/format.h>

namespace cusmuda {

TreeTooLarge::TreeTooLarge(double required, std::size_t cap)
    : std::runtime_error(fmt::format("scenario tree needs {:.6g} nodes, cap is {}", required, cap)),
      required_(required),
      cap_(cap) {}

double scenario_tree_size(const MultistageProgram& program, int stage) {
  double total = 0.0;
  double layer = 1.0;
  for (int t = stage; t < program.num_stages(); ++t) {
    if (t > stage) layer *= program.num_realizations(t);
    total += layer;
  }
  return total;
}

ExtensiveForm subtree_extensive_form(const MultistageProgram& program, int stage, int realization,
                                     const Vector& x_prev, const ExtensiveFormOptions& options) {
  const int T = program.num_stages();
  if (stage < 0 || stage >= T) throw std::out_of_range("subtree_extensive_form: stage out of range");
  if (realization < 0 || realization >= program.num_realizations(stage))
    throw std::out_of_range("subtree_extensive_form: realization out of range");
  if (x_prev.size() != program.stage_dim(stage - 1))
    throw std::invalid_argument("subtree_extensive_form: x_prev has the wrong dimension");

  const double required = scenario_tree_size(program, stage);
  if (required > static_cast<double>(options.max_nodes)) throw TreeTooLarge(required, options.max_nodes);

  ExtensiveForm ef;
  auto& nodes = ef.nodes;
  nodes.push_back(TreeNode{stage, realization, -1, 1.0, 0});
  Eigen::Index n_vars = program.stage_dim(stage);
  Eigen::Index n_eq = program.realization(stage, realization).b_eq.size();
  Eigen::Index n_le = program.realization(stage, realization).b_le.size();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const TreeNode parent = nodes[k];
    const int t = parent.stage + 1;
    if (t >= T) continue;
    for (int j = 0; j < program.num_realizations(t); ++j) {
      const auto& r = program.realization(t, j);
      nodes.push_back(TreeNode{t, j, static_cast<int>(k), parent.probability * r.probability, n_vars});
      n_vars += program.stage_dim(t);
      n_eq += r.b_eq.size();
      n_le += r.b_le.size();
    }
  }

  LPProblem& lp = ef.lp;
  lp.objective = Vector::Zero(n_vars);
  lp.eq_matrix = Matrix::Zero(n_eq, n_vars);
  lp.eq_rhs = Vector::Zero(n_eq);
  lp.le_matrix = Matrix::Zero(n_le, n_vars);
  lp.le_rhs = Vector::Zero(n_le);
  lp.lower = Vector::Zero(n_vars);

  Eigen::Index re = 0, rl = 0;
  for (const auto& node : nodes) {
    const auto& r = program.realization(node.stage, node.realization);
    const auto& dist = program.stages[static_cast<std::size_t>(node.stage)];
    const Eigen::Index n = program.stage_dim(node.stage);
    const Eigen::Index np = program.stage_dim(node.stage - 1);
    lp.objective.segment(node.offset, n) = node.probability * r.c;
    for (Eigen::Index i = 0; i < n; ++i)
      if (dist.is_free(i)) lp.lower[node.offset + i] = -kInf;

    const Eigen::Index me = r.b_eq.size(), ml = r.b_le.size();
    if (me > 0) {
      lp.eq_matrix.block(re, node.offset, me, n) = r.A;
      lp.eq_rhs.segment(re, me) = r.b_eq;
      if (node.parent < 0) {
        lp.eq_rhs.segment(re, me) -= r.B * x_prev;
      } else {
        lp.eq_matrix.block(re, nodes[static_cast<std::size_t>(node.parent)].offset, me, np) = r.B;
      }
    }
    if (ml > 0) {
      lp.le_matrix.block(rl, node.offset, ml, n) = r.G;
      lp.le_rhs.segment(rl, ml) = r.b_le;
      if (node.parent < 0) {
        lp.le_rhs.segment(rl, ml) -= r.H * x_prev;
      } else {
        lp.le_matrix.block(rl, nodes[static_cast<std::size_t>(node.parent)].offset, ml, np) = r.H;
      }
    }
    re += me;
    rl += ml;
  }
  return ef;
}

ExtensiveForm extensive_form(const MultistageProgram& program, const ExtensiveFormOptions& options) {
  return subtree_extensive_form(program, 0, 0, program.x0, options);
}

LPSolution exact_recourse(const MultistageProgram& program, int stage, int realization,
                          const Vector& x_prev, const ExtensiveFormOptions& options) {
  return solve_lp(subtree_extensive_form(program, stage, realization, x_prev, options).lp);
}

}  // namespace cusmuda
