#pragma once

#include "cusmuda/program.hpp"
#include "cusmuda/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cusmuda {

/// Portfolio selection with proportional transaction costs.
///
/// Stage decision (x, y, z) with x in R^{n+1} (asset n+1 is cash), y the
/// amounts sold and z the amounts bought. Equality rows, in order:
///   x(i) + y(i) - z(i) - xi(i) x_prev(i) = 0                      i = 1..n
///   x(n+1) - sum (1-eta(i)) y(i) + sum (1+nu(i)) z(i) - xi(n+1) x_prev(n+1) = 0
/// Inequality rows, in order:
///   y(i) - xi(i) x_prev(i) <= 0                                   i = 1..n
///   x(i) - u(i) sum_l xi(l) x_prev(l) <= 0                        i = 1..n
/// All stage costs are zero except the last, -E[xi_{T+1}]'x.
struct PortfolioParams {
  int T = 5;
  int n = 4;
  int M = 20;
  Vector u;                     // empty: all ones
  Matrix eta;                   // T x n selling costs; empty: sampled
  Matrix nu;                    // T x n buying costs; empty: equal to eta
  double risk_free_return = 1.001;
  double x0_low = 0.0;
  double x0_high = 10.0;
  std::optional<Vector> x0;     // overrides the sampled x0 (size n+1)
  /// returns[t][j] is the risky gross-return vector of realization j at
  /// stage t (stage 0 has one realization); overrides the generator.
  std::vector<std::vector<Vector>> returns;
  std::optional<Vector> terminal_mean;  // E[xi_{T+1}] (size n+1); default: stage-T mean
  double drift_low = -0.0005;
  double drift_high = 0.0015;
  double vol_low = 0.01;
  double vol_high = 0.025;
  std::uint64_t seed = 1;
};

/// Inventory control with backorders. Stage decision (x, w, u, v, y_next):
/// x the order-up-to level, w = x - y the purchase, u and v the shortage
/// and excess, y_next = x - demand the next stock (x and y_next free).
///   x - w - y          = 0
///   x - y_next         = demand
///   -x - u            <= -demand
///   x - v             <= demand
/// Stage cost c w + b u + h v. x0 = (0, 0, 0, 0, y1).
struct InventoryParams {
  int T = 5;
  int M = 20;
  std::vector<double> c;           // per stage; empty: 1.5 + cos(pi t / 6)
  std::vector<double> b;           // empty: 2.8
  std::vector<double> h;           // empty: 0.2
  double y1 = 10.0;
  std::vector<double> demand_mean; // empty: 5 + 0.5 t
  double noise = 0.1;
  /// demands[t][j] overrides the generator (stage 0 has one realization).
  std::vector<std::vector<double>> demands;
  std::uint64_t seed = 1;
};

MultistageProgram make_portfolio(const PortfolioParams& params);
MultistageProgram make_inventory(const InventoryParams& params);

/// Non-fatal remarks, e.g. backorder cost not above purchase cost.
std::vector<std::string> inventory_warnings(const InventoryParams& params);

/// Default cost schedules, stage index t is 1-based.
double inventory_purchase_cost(int t);
double inventory_demand_mean(int t);

struct Preset {
  std::string name;
  std::string description;
  std::variant<InventoryParams, PortfolioParams> params;
  RunConfig run;
  bool oracle_checkable = false;

  MultistageProgram build() const;
};

/// Full-size presets (inventory-T5..T30, portfolio-T5n4..T8n6), the
/// desk-scale portfolio-T5n4M10, and the oracle-checkable micro presets.
const std::vector<Preset>& reference_configs();
/// Throws std::invalid_argument for unknown names.
const Preset& find_preset(const std::string& name);

}  // namespace cusmuda
