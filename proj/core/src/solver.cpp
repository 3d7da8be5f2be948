#include "cusmuda/solver.hpp"

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace cusmuda {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

void RunConfig::validate() const {
  if (N < 1) throw std::invalid_argument("RunConfig.N must be >= 1");
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("RunConfig.alpha must lie in (0, 0.5)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("RunConfig.epsilon must be > 0");
  if (!(epsilon0 >= 0.0)) throw std::invalid_argument("RunConfig.epsilon0 must be >= 0");
  if (max_iterations < 1) throw std::invalid_argument("RunConfig.max_iterations must be >= 1");
  if (workers < 1) throw std::invalid_argument("RunConfig.workers must be >= 1");
}

std::string to_string(Termination termination) {
  return termination == Termination::converged ? "converged" : "max_iterations";
}

BoundsRecord bounds_from_costs(int iteration, double z_inf, const std::vector<double>& costs, double alpha) {
  if (costs.empty()) throw std::invalid_argument("bounds_from_costs: no costs");
  BoundsRecord rec;
  rec.iteration = iteration;
  rec.z_inf = z_inf;
  const double n = static_cast<double>(costs.size());
  double sum = 0.0;
  for (double c : costs) sum += c;
  rec.cost_mean = sum / n;
  double ss = 0.0;
  for (double c : costs) ss += (c - rec.cost_mean) * (c - rec.cost_mean);
  rec.cost_std = std::sqrt(ss / n);
  rec.z_sup = rec.cost_mean + rec.cost_std / std::sqrt(n) * normal_quantile(1.0 - alpha);
  return rec;
}

bool should_stop(const BoundsRecord& record, double epsilon) {
  if (record.z_inf == 0.0 && record.z_sup <= epsilon) return true;
  return std::fabs(record.z_sup - record.z_inf) <= epsilon * std::max(1.0, std::fabs(record.z_sup));
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t threads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < threads; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

Solver::Solver(const MultistageProgram& program, RunConfig config)
    : program_(program), config_(std::move(config)) {
  config_.validate();
  const auto issues = validate(program_);
  if (!issues.empty()) throw std::invalid_argument("invalid program: " + issues.front());
  const int T = program_.num_stages();
  pools_.resize(static_cast<std::size_t>(T));
  for (int t = 1; t < T; ++t)
    for (int j = 0; j < program_.num_realizations(t); ++j)
      pools_[static_cast<std::size_t>(t)].emplace_back(program_.stage_dim(t - 1), config_.selector,
                                                       config_.epsilon0);
}

ForwardResult Solver::forward_pass(int iteration) {
  const int T = program_.num_stages();
  const auto N = static_cast<std::size_t>(config_.N);
  ForwardResult out;
  out.paths.resize(N);
  out.trajectories.assign(N, std::vector<Vector>(static_cast<std::size_t>(T)));
  out.costs.assign(N, 0.0);
  for (std::size_t s = 0; s < N; ++s) {
    Rng rng = Rng::stream(config_.seed, static_cast<std::uint64_t>(iteration), s);
    out.paths[s] = sample_scenario(program_, rng);
  }
  parallel_for(N, config_.workers, [&](std::size_t s) {
    Vector x_prev = program_.x0;
    double cost = 0.0;
    for (int t = 0; t < T; ++t) {
      const int j = out.paths[s].realization_indices[static_cast<std::size_t>(t)];
      const auto* next = t + 1 < T ? &pools_[static_cast<std::size_t>(t + 1)] : nullptr;
      StageSolve sol = solve_stage(program_, t, j, x_prev, next);
      if (!sol.lp.optimal())
        throw SolverError(fmt::format("forward pass: stage {} LP {} (scenario {}, realization {})", t + 1,
                                      to_string(sol.lp.status), s + 1, j + 1));
      cost += sol.stage_cost;
      x_prev = sol.x;
      out.trajectories[s][static_cast<std::size_t>(t)] = std::move(sol.x);
    }
    out.costs[s] = cost;
  });
  return out;
}

std::size_t Solver::backward_pass(const ForwardResult& forward, int iteration) {
  const int T = program_.num_stages();
  const std::size_t N = forward.trajectories.size();
  std::size_t added = 0;
  bool stable = true;
  for (int t = T - 1; t >= 1; --t) {
    const auto M = static_cast<std::size_t>(program_.num_realizations(t));
    const auto* next = t + 1 < T ? &pools_[static_cast<std::size_t>(t + 1)] : nullptr;
    if (next) {
      for (std::size_t l = 0; l < next->size(); ++l)
        if ((*next)[l].selected_indices().empty())
          throw SolverError(fmt::format("backward pass: no selected cut for stage {}, realization {}", t + 2, l + 1));
    }
    auto& stage_pools = pools_[static_cast<std::size_t>(t)];
    std::vector<StageSolve> solves(N * M);
    std::vector<Cut> cuts(N * M);
    std::vector<char> improves(N * M, 0);
    std::vector<std::vector<std::uint32_t>> starts(N);
    if (next)
      parallel_for(N, config_.workers, [&](std::size_t s) {
        starts[s] = starting_cuts(*next, forward.trajectories[s][static_cast<std::size_t>(t)]);
      });
    parallel_for(N * M, config_.workers, [&](std::size_t item) {
      const std::size_t s = item / M;
      const std::size_t j = item % M;
      const Vector& x_prev = forward.trajectories[s][static_cast<std::size_t>(t - 1)];
      StageSolve sol = solve_stage(program_, t, static_cast<int>(j), x_prev, next, starts[s]);
      if (!sol.lp.optimal())
        throw SolverError(fmt::format("backward pass: stage {} LP {} (realization {}, trial point {}, iteration {})",
                                      t + 1, to_string(sol.lp.status), j + 1, s + 1, iteration));
      cuts[item] = make_cut(program_.realization(t, static_cast<int>(j)), sol, program_.stage_dim(t - 1), iteration);
      if (config_.stop_on_stable_cuts) {
        const double prior = stage_pools[j].evaluate_all(x_prev);
        const double v = cuts[item].value(x_prev);
        improves[item] = prior == -kInf || v > prior + config_.epsilon0 * std::max(1.0, std::fabs(prior));
      }
      solves[item] = std::move(sol);
    });

    std::vector<std::size_t> first_index(M);
    parallel_for(M, config_.workers, [&](std::size_t j) {
      CutPool& pool = stage_pools[j];
      first_index[j] = pool.num_cuts();
      for (std::size_t s = 0; s < N; ++s) pool.add_trial_point(forward.trajectories[s][static_cast<std::size_t>(t - 1)]);
      for (std::size_t s = 0; s < N; ++s) pool.add_cut(cuts[s * M + j]);
      pool.sync();
    });
    added += N * M;
    for (char c : improves)
      if (c) stable = false;

    if (observer_) {
      for (std::size_t s = 0; s < N; ++s) {
        for (std::size_t j = 0; j < M; ++j) {
          CutEvent ev;
          ev.iteration = iteration;
          ev.t = t;
          ev.j = static_cast<int>(j);
          ev.scenario = static_cast<int>(s);
          ev.x_prev = &forward.trajectories[s][static_cast<std::size_t>(t - 1)];
          ev.solve = &solves[s * M + j];
          ev.cut = &stage_pools[j].cut(first_index[j] + s);
          ev.index = first_index[j] + s;
          observer_(ev);
        }
      }
    }
  }
  last_backward_stable_ = stable;
  return added;
}

double Solver::lower_bound() const {
  const auto* next = program_.num_stages() > 1 ? &pools_[1] : nullptr;
  StageSolve sol = solve_stage(program_, 0, 0, program_.x0, next);
  if (!sol.lp.optimal())
    throw SolverError(fmt::format("first-stage LP {}", to_string(sol.lp.status)));
  return sol.objective;
}

BoundsRecord Solver::compute_bounds(int iteration, const std::vector<double>& costs) const {
  return bounds_from_costs(iteration, lower_bound(), costs, config_.alpha);
}

RunReport Solver::run() {
  RunReport report;
  report.config = config_;
  const auto start = Clock::now();
  int stable_streak = 0;
  for (int it = 1; it <= config_.max_iterations; ++it) {
    auto t0 = Clock::now();
    ForwardResult fwd = forward_pass(it);
    report.forward_seconds.push_back(seconds_since(t0));
    t0 = Clock::now();
    const std::size_t added = backward_pass(fwd, it);
    report.backward_seconds.push_back(seconds_since(t0));
    report.cuts_per_iteration.push_back(added);
    report.total_cuts += added;

    const BoundsRecord rec = compute_bounds(it, fwd.costs);
    report.bounds.push_back(rec);
    for (int t = 1; t < program_.num_stages(); ++t) {
      const auto& stage_pools = pools_[static_cast<std::size_t>(t)];
      for (std::size_t j = 0; j < stage_pools.size(); ++j) {
        const SelectionStats st = stage_pools[j].selection_stats();
        report.selection.push_back(SelectionRecord{it, t, static_cast<int>(j), st.selected, st.total});
      }
    }
    report.iterations = it;
    stable_streak = last_backward_stable_ ? stable_streak + 1 : 0;
    if (should_stop(rec, config_.epsilon)) {
      report.termination = Termination::converged;
      report.stopping_rule = "bounds";
      break;
    }
    if (config_.stop_on_stable_cuts && stable_streak >= 2) {
      report.termination = Termination::converged;
      report.stopping_rule = "stable_cuts";
      break;
    }
  }
  report.total_seconds = seconds_since(start);
  return report;
}

}  // namespace cusmuda
