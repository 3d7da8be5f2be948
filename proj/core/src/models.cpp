#include "cusmuda/models.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace cusmuda {

namespace {

// Stream tags for the generators.
constexpr std::uint64_t kTagX0 = 1;
constexpr std::uint64_t kTagCosts = 2;
constexpr std::uint64_t kTagReturns = 3;
constexpr std::uint64_t kTagDemand = 4;
constexpr std::uint64_t kTagAssets = 5;

double pick(const std::vector<double>& v, int t, double fallback) {
  return v.empty() ? fallback : v.at(static_cast<std::size_t>(t - 1));
}

}  // namespace

double inventory_purchase_cost(int t) { return 1.5 + std::cos(std::numbers::pi * t / 6.0); }

double inventory_demand_mean(int t) { return 5.0 + 0.5 * t; }

MultistageProgram make_portfolio(const PortfolioParams& p) {
  if (p.T < 1) throw std::invalid_argument("PortfolioParams.T must be >= 1");
  if (p.n < 1) throw std::invalid_argument("PortfolioParams.n must be >= 1");
  if (p.M < 1) throw std::invalid_argument("PortfolioParams.M must be >= 1");
  const Eigen::Index n = p.n;
  const Eigen::Index nx = n + 1;
  const Eigen::Index dim = nx + 2 * n;

  Vector u = p.u.size() ? p.u : Vector::Ones(n);
  if (u.size() != n) throw std::invalid_argument("PortfolioParams.u must have n entries");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(u[i] > 0.0 && u[i] <= 1.0)) throw std::invalid_argument("PortfolioParams.u must lie in (0, 1]");

  Matrix eta = p.eta;
  if (eta.size() == 0) {
    eta.resize(p.T, n);
    for (int t = 0; t < p.T; ++t) {
      Rng rng = Rng::stream(p.seed, kTagCosts, static_cast<std::uint64_t>(t));
      for (Eigen::Index i = 0; i < n; ++i) {
        const double U = 1.0 + static_cast<double>(rng.below(static_cast<std::uint64_t>(p.T)));
        eta(t, i) = 0.08 + 0.06 * std::cos(2.0 * std::numbers::pi * U / p.T);
      }
    }
  }
  const Matrix nu = p.nu.size() ? p.nu : eta;
  if (eta.rows() != p.T || eta.cols() != n || nu.rows() != p.T || nu.cols() != n)
    throw std::invalid_argument("PortfolioParams.eta/nu must be T x n");
  if ((eta.array() < 0.0).any() || (nu.array() < 0.0).any() || (eta.array() >= 1.0).any())
    throw std::invalid_argument("PortfolioParams transaction costs must lie in [0, 1)");
  if (!(p.risk_free_return > 0.0)) throw std::invalid_argument("PortfolioParams.risk_free_return must be > 0");

  MultistageProgram program;
  if (p.x0) {
    if (p.x0->size() != nx) throw std::invalid_argument("PortfolioParams.x0 must have n+1 entries");
    program.x0 = *p.x0;
  } else {
    Rng rng = Rng::stream(p.seed, kTagX0);
    program.x0.resize(nx);
    for (Eigen::Index i = 0; i < nx; ++i) program.x0[i] = rng.uniform(p.x0_low, p.x0_high);
  }

  std::vector<std::vector<Vector>> returns = p.returns;
  if (returns.empty()) {
    Rng arng = Rng::stream(p.seed, kTagAssets);
    Vector drift(n), vol(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      drift[i] = arng.uniform(p.drift_low, p.drift_high);
      vol[i] = arng.uniform(p.vol_low, p.vol_high);
    }
    returns.resize(static_cast<std::size_t>(p.T));
    for (int t = 0; t < p.T; ++t) {
      Rng rng = Rng::stream(p.seed, kTagReturns, static_cast<std::uint64_t>(t));
      const int M = t == 0 ? 1 : p.M;
      for (int j = 0; j < M; ++j) {
        Vector r(n);
        for (Eigen::Index i = 0; i < n; ++i)
          r[i] = std::exp(drift[i] - 0.5 * vol[i] * vol[i] + vol[i] * rng.normal());
        returns[static_cast<std::size_t>(t)].push_back(std::move(r));
      }
    }
  }
  if (static_cast<int>(returns.size()) != p.T) throw std::invalid_argument("PortfolioParams.returns must have T stages");
  if (returns[0].size() != 1) throw std::invalid_argument("PortfolioParams.returns: stage 1 must have one realization");

  Vector terminal;
  if (p.terminal_mean) {
    if (p.terminal_mean->size() != nx) throw std::invalid_argument("PortfolioParams.terminal_mean must have n+1 entries");
    terminal = *p.terminal_mean;
  } else {
    const auto& last = returns.back();
    terminal = Vector::Zero(nx);
    for (const auto& r : last) terminal.head(n) += r;
    terminal.head(n) /= static_cast<double>(last.size());
    terminal[n] = p.risk_free_return;
  }

  for (int t = 0; t < p.T; ++t) {
    StageDistribution dist;
    const auto& stage_returns = returns[static_cast<std::size_t>(t)];
    const double prob = 1.0 / static_cast<double>(stage_returns.size());
    const Eigen::Index prev_dim = t == 0 ? nx : dim;
    for (const auto& risky : stage_returns) {
      if (risky.size() != n) throw std::invalid_argument("PortfolioParams.returns entries must have n components");
      Vector xi(nx);
      xi.head(n) = risky;
      xi[n] = p.risk_free_return;

      StageRealization r;
      r.probability = prob;
      r.c = Vector::Zero(dim);
      if (t == p.T - 1) r.c.head(nx) = -terminal;

      r.A = Matrix::Zero(nx, dim);
      r.B = Matrix::Zero(nx, prev_dim);
      r.b_eq = Vector::Zero(nx);
      for (Eigen::Index i = 0; i < n; ++i) {
        r.A(i, i) = 1.0;
        r.A(i, nx + i) = 1.0;
        r.A(i, nx + n + i) = -1.0;
        r.B(i, i) = -xi[i];
      }
      r.A(n, n) = 1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        r.A(n, nx + i) = -(1.0 - eta(t, i));
        r.A(n, nx + n + i) = 1.0 + nu(t, i);
      }
      r.B(n, n) = -xi[n];

      r.G = Matrix::Zero(2 * n, dim);
      r.H = Matrix::Zero(2 * n, prev_dim);
      r.b_le = Vector::Zero(2 * n);
      for (Eigen::Index i = 0; i < n; ++i) {
        r.G(i, nx + i) = 1.0;
        r.H(i, i) = -xi[i];
        r.G(n + i, i) = 1.0;
        r.H.row(n + i).head(nx) = -u[i] * xi.transpose();
      }
      dist.realizations.push_back(std::move(r));
    }
    program.stages.push_back(std::move(dist));
  }
  return program;
}

std::vector<std::string> inventory_warnings(const InventoryParams& p) {
  std::vector<std::string> out;
  for (int t = 1; t <= p.T; ++t) {
    const double c = pick(p.c, t, inventory_purchase_cost(t));
    const double b = pick(p.b, t, 2.8);
    if (!(b > c)) out.push_back(fmt::format("stage {}: backorder cost {} does not exceed purchase cost {}", t, b, c));
    if (c < 0.0) out.push_back(fmt::format("stage {}: negative purchase cost {}", t, c));
  }
  return out;
}

MultistageProgram make_inventory(const InventoryParams& p) {
  if (p.T < 1) throw std::invalid_argument("InventoryParams.T must be >= 1");
  if (p.M < 1) throw std::invalid_argument("InventoryParams.M must be >= 1");
  auto check_size = [&](const std::vector<double>& v, const char* name) {
    if (!v.empty() && static_cast<int>(v.size()) != p.T)
      throw std::invalid_argument(fmt::format("InventoryParams.{} must have T entries", name));
  };
  check_size(p.c, "c");
  check_size(p.b, "b");
  check_size(p.h, "h");
  check_size(p.demand_mean, "demand_mean");
  if (!p.demands.empty() && static_cast<int>(p.demands.size()) != p.T)
    throw std::invalid_argument("InventoryParams.demands must have T stages");
  if (!(p.noise >= 0.0)) throw std::invalid_argument("InventoryParams.noise must be >= 0");

  // Stage costs are nonnegative from stage t on => recourse values are >= 0.
  std::vector<double> tail_lower(static_cast<std::size_t>(p.T) + 1, 0.0);
  for (int t = p.T; t >= 1; --t) {
    const bool nonneg = pick(p.c, t, inventory_purchase_cost(t)) >= 0.0 && pick(p.b, t, 2.8) >= 0.0 &&
                        pick(p.h, t, 0.2) >= 0.0;
    tail_lower[static_cast<std::size_t>(t - 1)] = nonneg ? tail_lower[static_cast<std::size_t>(t)] : -kInf;
  }

  MultistageProgram program;
  program.x0 = Vector::Zero(5);
  program.x0[4] = p.y1;
  for (int t = 1; t <= p.T; ++t) {
    const double c = pick(p.c, t, inventory_purchase_cost(t));
    const double b = pick(p.b, t, 2.8);
    const double h = pick(p.h, t, 0.2);
    if (h < 0.0) throw std::invalid_argument("InventoryParams.h must be >= 0");
    const double mean = pick(p.demand_mean, t, inventory_demand_mean(t));

    std::vector<double> demands;
    if (!p.demands.empty()) {
      demands = p.demands[static_cast<std::size_t>(t - 1)];
      if (demands.empty() || (t == 1 && demands.size() != 1))
        throw std::invalid_argument("InventoryParams.demands: stage 1 needs one value, later stages at least one");
    } else if (t == 1) {
      demands.push_back(mean);
    } else {
      Rng rng = Rng::stream(p.seed, kTagDemand, static_cast<std::uint64_t>(t));
      for (int j = 0; j < p.M; ++j) demands.push_back(std::max(0.0, mean * (1.0 + p.noise * rng.normal())));
    }

    StageDistribution dist;
    dist.free_vars = {true, false, false, false, true};
    dist.recourse_lower_bound = tail_lower[static_cast<std::size_t>(t - 1)];
    const double prob = 1.0 / static_cast<double>(demands.size());
    for (double d : demands) {
      StageRealization r;
      r.probability = prob;
      r.c = Vector::Zero(5);
      r.c << 0.0, c, b, h, 0.0;
      r.A = Matrix::Zero(2, 5);
      r.A.row(0) << 1.0, -1.0, 0.0, 0.0, 0.0;
      r.A.row(1) << 1.0, 0.0, 0.0, 0.0, -1.0;
      r.B = Matrix::Zero(2, 5);
      r.B(0, 4) = -1.0;
      r.b_eq = Vector::Zero(2);
      r.b_eq[1] = d;
      r.G = Matrix::Zero(2, 5);
      r.G.row(0) << -1.0, 0.0, -1.0, 0.0, 0.0;
      r.G.row(1) << 1.0, 0.0, 0.0, -1.0, 0.0;
      r.H = Matrix::Zero(2, 5);
      r.b_le = Vector::Zero(2);
      r.b_le << -d, d;
      dist.realizations.push_back(std::move(r));
    }
    program.stages.push_back(std::move(dist));
  }
  return program;
}

MultistageProgram Preset::build() const {
  return std::visit(
      [](const auto& params) -> MultistageProgram {
        using P = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<P, InventoryParams>) {
          return make_inventory(params);
        } else {
          return make_portfolio(params);
        }
      },
      params);
}

namespace {

RunConfig reference_run() {
  RunConfig cfg;
  cfg.N = 200;
  cfg.alpha = 0.025;
  cfg.epsilon = 0.05;
  cfg.epsilon0 = 1e-6;
  cfg.seed = 1;
  cfg.max_iterations = 200;
  return cfg;
}

RunConfig micro_run() {
  RunConfig cfg = reference_run();
  cfg.epsilon = 1e-6;
  cfg.stop_on_stable_cuts = true;
  return cfg;
}

std::vector<Preset> make_presets() {
  std::vector<Preset> out;
  for (int T : {5, 10, 15, 20, 25, 30}) {
    InventoryParams p;
    p.T = T;
    p.M = 20;
    p.seed = 2017;
    out.push_back(Preset{fmt::format("inventory-T{}", T), fmt::format("inventory, T={}, M=20", T), p, reference_run(), false});
  }
  for (auto [T, n, M] : {std::tuple{5, 4, 20}, {5, 5, 20}, {5, 6, 20}, {8, 4, 10}, {8, 5, 10}, {8, 6, 10}}) {
    PortfolioParams p;
    p.T = T;
    p.n = n;
    p.M = M;
    p.seed = 2017;
    out.push_back(Preset{fmt::format("portfolio-T{}n{}", T, n), fmt::format("portfolio, T={}, n={}, M={}", T, n, M), p,
                         reference_run(), false});
  }
  {
    PortfolioParams p;
    p.T = 5;
    p.n = 4;
    p.M = 10;
    p.seed = 2017;
    out.push_back(Preset{"portfolio-T5n4M10", "portfolio, T=5, n=4, M=10 (desk scale)", p, reference_run(), false});
  }
  {
    InventoryParams p;
    p.T = 3;
    p.M = 2;
    p.seed = 7;
    out.push_back(Preset{"micro-inventory", "inventory, T=3, M=2", p, micro_run(), true});
    p.T = 4;
    p.M = 3;
    out.push_back(Preset{"micro-inventory-T4M3", "inventory, T=4, M=3", p, micro_run(), true});
  }
  {
    PortfolioParams p;
    p.T = 3;
    p.n = 2;
    p.M = 2;
    p.seed = 7;
    out.push_back(Preset{"micro-portfolio", "portfolio, T=3, n=2, M=2", p, micro_run(), true});
    p.T = 4;
    p.M = 3;
    out.push_back(Preset{"micro-portfolio-T4M3", "portfolio, T=4, n=2, M=3", p, micro_run(), true});
  }
  return out;
}

}  // namespace

const std::vector<Preset>& reference_configs() {
  static const std::vector<Preset> presets = make_presets();
  return presets;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : reference_configs())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace cusmuda
