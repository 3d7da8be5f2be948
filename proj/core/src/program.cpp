#include "cusmuda/program.hpp"

#include <fmt/format.h>

#include <cmath>

namespace cusmuda {

Eigen::Index MultistageProgram::stage_dim(int t) const {
  if (t < 0) return x0.size();
  const auto& dist = stages.at(static_cast<std::size_t>(t));
  if (dist.realizations.empty()) return 0;
  return dist.realizations.front().c.size();
}

std::vector<std::string> validate(const MultistageProgram& program) {
  std::vector<std::string> issues;
  const int T = program.num_stages();
  if (T < 1) {
    issues.emplace_back("program has no stages");
    return issues;
  }
  if (!program.x0.allFinite()) issues.emplace_back("x0: non-finite entry");

  for (int t = 0; t < T; ++t) {
    const auto& dist = program.stages[static_cast<std::size_t>(t)];
    const int M = static_cast<int>(dist.realizations.size());
    const std::string where = fmt::format("stage {}", t + 1);
    if (M == 0) {
      issues.push_back(where + ": no realizations");
      continue;
    }
    if (t == 0 && M != 1) issues.push_back(where + ": first stage must have exactly one realization");

    const Eigen::Index n = program.stage_dim(t);
    const Eigen::Index n_prev = program.stage_dim(t - 1);
    const Eigen::Index me = dist.realizations.front().b_eq.size();
    const Eigen::Index ml = dist.realizations.front().b_le.size();
    if (!dist.free_vars.empty() && static_cast<Eigen::Index>(dist.free_vars.size()) != n)
      issues.push_back(where + ": free_vars size does not match the decision dimension");

    if (std::isnan(dist.recourse_lower_bound) || dist.recourse_lower_bound == kInf)
      issues.push_back(where + ": recourse_lower_bound must be finite or -inf");

    double total = 0.0;
    for (int j = 0; j < M; ++j) {
      const auto& r = dist.realizations[static_cast<std::size_t>(j)];
      const std::string at = fmt::format("stage {}, realization {}", t + 1, j + 1);
      auto dims = [&](const Matrix& mat, Eigen::Index rows, Eigen::Index cols, const char* name) {
        if (mat.rows() != rows || (rows > 0 && mat.cols() != cols)) {
          issues.push_back(fmt::format("{}: {} is {}x{}, expected {}x{}", at, name, mat.rows(),
                                       mat.cols(), rows, cols));
        } else if (!mat.allFinite()) {
          issues.push_back(fmt::format("{}: {} has non-finite entries", at, name));
        }
      };
      if (r.c.size() != n) issues.push_back(fmt::format("{}: c has size {}, expected {}", at, r.c.size(), n));
      if (r.b_eq.size() != me) issues.push_back(fmt::format("{}: b_eq has size {}, expected {}", at, r.b_eq.size(), me));
      if (r.b_le.size() != ml) issues.push_back(fmt::format("{}: b_le has size {}, expected {}", at, r.b_le.size(), ml));
      dims(r.A, me, n, "A");
      dims(r.B, me, n_prev, "B");
      dims(r.G, ml, n, "G");
      dims(r.H, ml, n_prev, "H");
      if (!r.c.allFinite() || !r.b_eq.allFinite() || !r.b_le.allFinite())
        issues.push_back(at + ": non-finite vector entries");
      if (!(r.probability > 0.0 && r.probability <= 1.0))
        issues.push_back(fmt::format("{}: probability {} outside (0, 1]", at, r.probability));
      total += r.probability;
    }
    if (std::fabs(total - 1.0) > 1e-12)
      issues.push_back(fmt::format("{}: probabilities sum to {:.17g}, expected 1", where, total));
  }
  return issues;
}

ScenarioPath sample_scenario(const MultistageProgram& program, Rng& rng) {
  ScenarioPath path;
  const int T = program.num_stages();
  path.realization_indices.assign(static_cast<std::size_t>(T), 0);
  for (int t = 1; t < T; ++t) {
    const int M = program.num_realizations(t);
    if (M == 1) {
      // Still consume a draw so that stream positions do not depend on M.
      rng.uniform();
      continue;
    }
    const double u = rng.uniform();
    double acc = 0.0;
    int pick = M - 1;
    for (int j = 0; j < M; ++j) {
      acc += program.realization(t, j).probability;
      if (u < acc) {
        pick = j;
        break;
      }
    }
    path.realization_indices[static_cast<std::size_t>(t)] = pick;
  }
  return path;
}

}  // namespace cusmuda
