#include "cusmuda/cut_pool.hpp"

#include <fmt/format.h>
#include <fmt/os.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cusmuda {

SelectorSpec SelectorSpec::All() { return SelectorSpec{}; }

SelectorSpec SelectorSpec::Level1() {
  SelectorSpec s;
  s.kind_ = SelectorKind::level1;
  return s;
}

SelectorSpec SelectorSpec::MLMLevel1() {
  SelectorSpec s;
  s.kind_ = SelectorKind::mlm_level1;
  return s;
}

SelectorSpec SelectorSpec::LevelH(int H) {
  if (H < 1) throw std::invalid_argument("LevelH: H must be a positive integer");
  SelectorSpec s;
  s.kind_ = SelectorKind::level_h;
  s.H_ = H;
  return s;
}

SelectorSpec SelectorSpec::CustomMonotone(std::vector<std::vector<int>> table) {
  if (table.empty()) throw std::invalid_argument("CustomMonotone: empty table");
  for (std::size_t m = 1; m <= table.size(); ++m) {
    auto& row = table[m - 1];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    for (int p : row)
      if (p < 1 || p > static_cast<int>(m))
        throw std::invalid_argument(fmt::format("CustomMonotone: S({}) contains {} outside 1..{}", m, p, m));
    if (m >= 2 && !std::includes(row.begin(), row.end(), table[m - 2].begin(), table[m - 2].end()))
      throw std::invalid_argument(fmt::format("CustomMonotone: S({}) is not a subset of S({})", m - 1, m));
  }
  SelectorSpec s;
  s.kind_ = SelectorKind::custom_monotone;
  s.table_ = std::move(table);
  return s;
}

SelectorSpec SelectorSpec::parse(const std::string& name) {
  if (name == "muda") return All();
  if (name == "cs1") return Level1();
  if (name == "cs2") return MLMLevel1();
  const std::string prefix = "levelH:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string digits = name.substr(prefix.size());
    char* end = nullptr;
    const long H = std::strtol(digits.c_str(), &end, 10);
    if (!digits.empty() && *end == '\0' && H >= 1 && H <= 1000000) return LevelH(static_cast<int>(H));
  }
  throw std::invalid_argument("unknown selector '" + name + "' (expected muda, cs1, cs2 or levelH:<H>)");
}

std::vector<int> SelectorSpec::positions(std::size_t m) const {
  std::vector<int> out;
  switch (kind_) {
    case SelectorKind::all:
    case SelectorKind::level1:
      for (std::size_t p = 1; p <= m; ++p) out.push_back(static_cast<int>(p));
      break;
    case SelectorKind::mlm_level1:
      if (m >= 1) out.push_back(1);
      break;
    case SelectorKind::level_h:
      for (std::size_t p = 1; p <= std::min<std::size_t>(m, static_cast<std::size_t>(H_)); ++p)
        out.push_back(static_cast<int>(p));
      break;
    case SelectorKind::custom_monotone:
      if (m >= 1) {
        const auto& row = table_[std::min(m, table_.size()) - 1];
        for (int p : row)
          if (static_cast<std::size_t>(p) <= m) out.push_back(p);
      }
      break;
  }
  return out;
}

std::string SelectorSpec::name() const {
  switch (kind_) {
    case SelectorKind::all: return "muda";
    case SelectorKind::level1: return "cs1";
    case SelectorKind::mlm_level1: return "cs2";
    case SelectorKind::level_h: return fmt::format("levelH:{}", H_);
    case SelectorKind::custom_monotone: return "custom";
  }
  return "unknown";
}

CutPool::CutPool(Eigen::Index dim, SelectorSpec selector, double epsilon0)
    : dim_(dim), selector_(std::move(selector)), eps0_(epsilon0) {
  if (dim < 0) throw std::invalid_argument("CutPool: negative dimension");
  if (!(epsilon0 >= 0.0)) throw std::invalid_argument("CutPool: epsilon0 must be nonnegative");
}

bool CutPool::strictly_better(double v, double m) const {
  return v > m + eps0_ * std::max(1.0, std::fabs(m));
}

bool CutPool::tied(double v, double m) const {
  return std::fabs(v - m) <= eps0_ * std::max(1.0, std::fabs(m));
}

void CutPool::offer(std::size_t point, std::size_t k, double value) {
  double& m = best_[point];
  const auto idx = static_cast<std::uint32_t>(k);
  const SelectorKind kind = selector_.kind();
  if (m == -kInf || strictly_better(value, m)) {
    m = value;
    if (kind != SelectorKind::all) argmax_[point].assign(1, idx);
  } else if (kind != SelectorKind::all && kind != SelectorKind::mlm_level1 && tied(value, m)) {
    argmax_[point].push_back(idx);
  }
  if (kind == SelectorKind::level_h) {
    auto& top = top_[point];
    const auto H = static_cast<std::size_t>(selector_.H());
    auto before = [](const std::pair<double, std::uint32_t>& a, const std::pair<double, std::uint32_t>& b) {
      return a.first > b.first || (a.first == b.first && a.second < b.second);
    };
    const std::pair<double, std::uint32_t> entry{value, idx};
    if (top.size() < H || before(entry, top.back())) {
      top.insert(std::upper_bound(top.begin(), top.end(), entry, before), entry);
      if (top.size() > H) top.pop_back();
    }
  }
}

Eigen::Map<const CutPool::RowMatrix> CutPool::beta_block(std::size_t rows) const {
  return {beta_flat_.data(), static_cast<Eigen::Index>(rows), dim_};
}

Eigen::Map<const CutPool::RowMatrix> CutPool::point_block(std::size_t rows) const {
  return {point_flat_.data(), static_cast<Eigen::Index>(rows), dim_};
}

std::size_t CutPool::add_trial_point(const Vector& x) {
  if (x.size() != dim_)
    throw std::invalid_argument(fmt::format("CutPool::add_trial_point: dimension {} != {}", x.size(), dim_));
  const std::size_t i = points_.size();
  points_.push_back(x);
  point_flat_.insert(point_flat_.end(), x.data(), x.data() + x.size());
  best_.push_back(-kInf);
  argmax_.emplace_back();
  if (selector_.kind() == SelectorKind::level_h) top_.emplace_back();
  if (!cuts_.empty()) {
    Vector values = beta_block(cuts_.size()) * x;
    for (std::size_t k = 0; k < cuts_.size(); ++k) offer(i, k, theta_flat_[k] + values[static_cast<Eigen::Index>(k)]);
  }
  return i;
}

std::size_t CutPool::add_cut(Cut cut) {
  if (cut.beta.size() != dim_)
    throw std::invalid_argument(fmt::format("CutPool::add_cut: dimension {} != {}", cut.beta.size(), dim_));
  const std::size_t k = cuts_.size();
  beta_flat_.insert(beta_flat_.end(), cut.beta.data(), cut.beta.data() + cut.beta.size());
  theta_flat_.push_back(cut.theta);
  cuts_.push_back(std::move(cut));
  if (!points_.empty()) {
    const Cut& c = cuts_.back();
    Vector values = point_block(points_.size()) * c.beta;
    for (std::size_t i = 0; i < points_.size(); ++i) offer(i, k, c.theta + values[static_cast<Eigen::Index>(i)]);
  }
  return k;
}

void CutPool::sync() {
  const std::size_t K = cuts_.size();
  selected_.assign(K, 0);
  selected_list_.clear();
  const SelectorKind kind = selector_.kind();
  if (kind == SelectorKind::all) {
    selected_.assign(K, 1);
    selected_list_.resize(K);
    for (std::size_t k = 0; k < K; ++k) selected_list_[k] = static_cast<std::uint32_t>(k);
  }
  for (std::size_t i = 0; kind != SelectorKind::all && i < points_.size(); ++i) {
    const auto& I = argmax_[i];
    if (I.empty()) continue;
    switch (kind) {
      case SelectorKind::level1:
        for (auto k : I) selected_[k] = 1;
        break;
      case SelectorKind::mlm_level1:
        selected_[I.front()] = 1;
        break;
      case SelectorKind::level_h: {
        const auto H = static_cast<std::size_t>(selector_.H());
        const std::size_t take = std::min(H, I.size());
        for (std::size_t p = 0; p < take; ++p) selected_[I[p]] = 1;
        std::size_t count = take;
        for (const auto& [v, k] : top_[i]) {
          if (count >= H) break;
          if (std::find(I.begin(), I.end(), k) != I.end()) continue;
          selected_[k] = 1;
          ++count;
        }
        break;
      }
      case SelectorKind::custom_monotone:
        for (int p : selector_.positions(I.size())) selected_[I[static_cast<std::size_t>(p - 1)]] = 1;
        break;
      case SelectorKind::all:
        break;
    }
  }
  if (kind != SelectorKind::all)
    for (std::size_t k = 0; k < K; ++k)
      if (selected_[k]) selected_list_.push_back(static_cast<std::uint32_t>(k));
  selected_beta_.resize(static_cast<Eigen::Index>(selected_list_.size()), dim_);
  selected_theta_.resize(static_cast<Eigen::Index>(selected_list_.size()));
  const auto all = beta_block(K);
  for (std::size_t q = 0; q < selected_list_.size(); ++q) {
    const auto k = selected_list_[q];
    selected_beta_.row(static_cast<Eigen::Index>(q)) = all.row(k);
    selected_theta_[static_cast<Eigen::Index>(q)] = theta_flat_[k];
  }
}

SelectionStats CutPool::selection_stats() const {
  SelectionStats s;
  s.total = selected_.size();
  s.selected = selected_list_.size();
  s.proportion = s.total ? static_cast<double>(s.selected) / static_cast<double>(s.total) : 0.0;
  return s;
}

Vector CutPool::selected_values(const Vector& x) const {
  if (x.size() != dim_) throw std::invalid_argument("CutPool::selected_values: dimension mismatch");
  return selected_theta_ + selected_beta_ * x;
}

double CutPool::evaluate_model(const Vector& x) const {
  const Vector v = selected_values(x);
  return v.size() ? v.maxCoeff() : -kInf;
}

double CutPool::evaluate_all(const Vector& x) const {
  if (x.size() != dim_) throw std::invalid_argument("CutPool::evaluate_all: dimension mismatch");
  if (cuts_.empty()) return -kInf;
  const Vector v = beta_block(cuts_.size()) * x;
  double best = -kInf;
  for (std::size_t k = 0; k < cuts_.size(); ++k) best = std::max(best, theta_flat_[k] + v[static_cast<Eigen::Index>(k)]);
  return best;
}

long CutPool::argmax_selected(const Vector& x) const {
  const Vector v = selected_values(x);
  if (v.size() == 0) return -1;
  Eigen::Index q = 0;
  v.maxCoeff(&q);
  return static_cast<long>(selected_list_[static_cast<std::size_t>(q)]);
}

void write_cut_csv(const CutPool& pool, const std::filesystem::path& path) {
  auto out = fmt::output_file(path.string());
  out.print("birth,theta");
  for (Eigen::Index i = 0; i < pool.dim(); ++i) out.print(",beta_{}", i + 1);
  out.print(",selected\n");
  for (std::size_t k = 0; k < pool.num_cuts(); ++k) {
    const Cut& c = pool.cut(k);
    out.print("{},{:.17g}", c.birth, c.theta);
    for (Eigen::Index i = 0; i < c.beta.size(); ++i) out.print(",{:.17g}", c.beta[i]);
    out.print(",{}\n", pool.is_selected(k) ? 1 : 0);
  }
}

std::vector<CutRecord> read_cut_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header");
  const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 3) throw std::runtime_error(path.string() + ": malformed header");
  std::vector<CutRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != columns)
      throw std::runtime_error(fmt::format("{}:{}: expected {} fields", path.string(), lineno, columns));
    CutRecord rec;
    rec.cut.birth = std::stoi(fields[0]);
    rec.cut.theta = std::strtod(fields[1].c_str(), nullptr);
    rec.cut.beta.resize(static_cast<Eigen::Index>(columns - 3));
    for (std::size_t i = 0; i + 3 < columns; ++i)
      rec.cut.beta[static_cast<Eigen::Index>(i)] = std::strtod(fields[2 + i].c_str(), nullptr);
    rec.selected = fields.back() == "1";
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace cusmuda
