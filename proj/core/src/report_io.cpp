#include "cusmuda/report_io.hpp"

#include <fmt/format.h>
#include <fmt/os.h>
#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>

namespace cusmuda {

namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != expected_header)
    throw std::runtime_error(path.string() + ": expected header '" + expected_header + "'");
  const auto columns = static_cast<std::size_t>(std::count(expected_header.begin(), expected_header.end(), ',')) + 1;
  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != columns)
      throw std::runtime_error(fmt::format("{}:{}: expected {} fields, found {}", path.string(), lineno, columns,
                                           fields.size()));
    rows.push_back(std::move(fields));
  }
  return rows;
}

double to_double(const std::string& s, const fs::path& path) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw std::runtime_error(path.string() + ": bad number '" + s + "'");
  return v;
}

long to_long(const std::string& s, const fs::path& path) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw std::runtime_error(path.string() + ": bad integer '" + s + "'");
  return v;
}

const char* kBoundsHeader = "iteration,z_inf,cost_mean,cost_std,z_sup";
const char* kSelectionHeader = "iteration,t,j,selected,total";

}  // namespace

void write_bounds_csv(const std::vector<BoundsRecord>& bounds, const fs::path& path) {
  auto out = fmt::output_file(path.string());
  out.print("{}\n", kBoundsHeader);
  for (const auto& b : bounds)
    out.print("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", b.iteration, b.z_inf, b.cost_mean, b.cost_std, b.z_sup);
}

void write_selection_csv(const std::vector<SelectionRecord>& selection, const fs::path& path) {
  auto out = fmt::output_file(path.string());
  out.print("{}\n", kSelectionHeader);
  for (const auto& s : selection) out.print("{},{},{},{},{}\n", s.iteration, s.t + 1, s.j + 1, s.selected, s.total);
}

std::vector<BoundsRecord> read_bounds_csv(const fs::path& path) {
  std::vector<BoundsRecord> out;
  for (const auto& f : read_csv(path, kBoundsHeader)) {
    BoundsRecord b;
    b.iteration = static_cast<int>(to_long(f[0], path));
    b.z_inf = to_double(f[1], path);
    b.cost_mean = to_double(f[2], path);
    b.cost_std = to_double(f[3], path);
    b.z_sup = to_double(f[4], path);
    out.push_back(b);
  }
  return out;
}

std::vector<SelectionRecord> read_selection_csv(const fs::path& path) {
  std::vector<SelectionRecord> out;
  for (const auto& f : read_csv(path, kSelectionHeader)) {
    SelectionRecord s;
    s.iteration = static_cast<int>(to_long(f[0], path));
    s.t = static_cast<int>(to_long(f[1], path)) - 1;
    s.j = static_cast<int>(to_long(f[2], path)) - 1;
    const long sel = to_long(f[3], path);
    const long tot = to_long(f[4], path);
    if (s.t < 0 || s.j < 0 || sel < 0 || tot < sel) throw std::runtime_error(path.string() + ": inconsistent row");
    s.selected = static_cast<std::size_t>(sel);
    s.total = static_cast<std::size_t>(tot);
    out.push_back(s);
  }
  return out;
}

void write_run_artifacts(const RunReport& report, const fs::path& dir, const std::string& program_source) {
  fs::create_directories(dir);
  write_bounds_csv(report.bounds, dir / "bounds.csv");
  write_selection_csv(report.selection, dir / "selection.csv");

  nlohmann::ordered_json meta;
  meta["program"] = program_source;
  meta["termination"] = to_string(report.termination);
  meta["stopping_rule"] = report.stopping_rule;
  meta["iterations"] = report.iterations;
  meta["total_cuts"] = report.total_cuts;
  meta["seed"] = report.config.seed;
  meta["selector"] = report.config.selector.name();
  meta["scenarios"] = report.config.N;
  meta["alpha"] = report.config.alpha;
  meta["epsilon"] = report.config.epsilon;
  meta["epsilon0"] = report.config.epsilon0;
  meta["max_iterations"] = report.config.max_iterations;
  meta["workers"] = report.config.workers;
  meta["cuts_per_iteration"] = report.cuts_per_iteration;
  meta["forward_seconds"] = report.forward_seconds;
  meta["backward_seconds"] = report.backward_seconds;
  meta["total_seconds"] = report.total_seconds;
  std::ofstream out(dir / "meta.json");
  if (!out) throw std::runtime_error("cannot write " + (dir / "meta.json").string());
  out << meta.dump(2) << '\n';
}

RunSummary summarize(const std::vector<BoundsRecord>& bounds, const std::vector<SelectionRecord>& selection) {
  RunSummary summary;
  if (!bounds.empty()) {
    summary.final_bounds = bounds.back();
    summary.iterations = bounds.back().iteration;
  }
  // stage -> iteration -> (selected, total)
  std::map<int, std::map<int, std::pair<std::size_t, std::size_t>>> per_stage;
  std::map<std::pair<int, int>, std::pair<double, int>> per_realization;
  for (const auto& s : selection) {
    auto& acc = per_stage[s.t][s.iteration];
    acc.first += s.selected;
    acc.second += s.total;
    auto& r = per_realization[{s.t, s.j}];
    r.first += s.proportion();
    r.second += 1;
  }
  for (const auto& [t, iters] : per_stage) {
    double sum = 0.0;
    for (const auto& [it, acc] : iters)
      sum += acc.second ? static_cast<double>(acc.first) / static_cast<double>(acc.second) : 0.0;
    summary.stages.push_back(StageSummary{t, sum / static_cast<double>(iters.size())});
  }
  for (const auto& [key, acc] : per_realization)
    summary.realizations.push_back(RealizationSummary{key.first, key.second, acc.first / acc.second});
  return summary;
}

std::string format_summary(const RunSummary& summary) {
  std::string out;
  out += fmt::format("iterations: {}\n", summary.iterations);
  const auto& b = summary.final_bounds;
  out += fmt::format("final z_inf: {:.10g}\nfinal z_sup: {:.10g}\nfinal cost mean: {:.10g} (std {:.6g})\n", b.z_inf,
                     b.z_sup, b.cost_mean, b.cost_std);
  out += "mean proportion of selected cuts per stage:\n";
  for (const auto& s : summary.stages) out += fmt::format("  stage {:>3}: {:.4f}\n", s.t + 1, s.mean_proportion);
  return out;
}

void write_summary(const RunSummary& summary, const fs::path& dir) {
  fs::create_directories(dir);
  {
    auto out = fmt::output_file((dir / "stage_summary.csv").string());
    out.print("t,mean_proportion\n");
    for (const auto& s : summary.stages) out.print("{},{:.17g}\n", s.t + 1, s.mean_proportion);
  }
  {
    auto out = fmt::output_file((dir / "realization_summary.csv").string());
    out.print("t,j,mean_proportion\n");
    for (const auto& r : summary.realizations) out.print("{},{},{:.17g}\n", r.t + 1, r.j + 1, r.mean_proportion);
  }
  std::ofstream txt(dir / "summary.txt");
  if (!txt) throw std::runtime_error("cannot write " + (dir / "summary.txt").string());
  txt << format_summary(summary);
}

}  // namespace cusmuda
