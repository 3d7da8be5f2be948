#include "cli.hpp"

#include "cusmuda/models.hpp"
#include "cusmuda/program.hpp"
#include "cusmuda/report_io.hpp"
#include "cusmuda/solver.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>

namespace cusmuda::cli {

namespace {

namespace fs = std::filesystem;

struct SourceFlags {
  std::string preset;
  std::string program;
};

struct RunFlags {
  std::optional<std::string> selector;
  std::optional<std::uint64_t> seed;
  std::optional<int> scenarios;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::optional<double> epsilon0;
  std::optional<int> max_iters;
  std::optional<int> workers;
};

struct Loaded {
  MultistageProgram program;
  RunConfig run;
  std::string source;
};

void add_source_flags(CLI::App* cmd, SourceFlags& src) {
  auto* preset = cmd->add_option("--preset", src.preset, "Built-in model preset (see `presets`)");
  auto* program = cmd->add_option("--program", src.program, "Program JSON file");
  preset->excludes(program);
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--selector", f.selector, "muda, cs1, cs2 or levelH:<H>");
  cmd->add_option("--seed", f.seed, "Sampling seed");
  cmd->add_option("--scenarios", f.scenarios, "Forward scenarios per iteration (N)");
  cmd->add_option("--alpha", f.alpha, "Upper-bound confidence level");
  cmd->add_option("--epsilon", f.epsilon, "Stopping tolerance");
  cmd->add_option("--epsilon0", f.epsilon0, "Cut comparison tolerance");
  cmd->add_option("--max-iters", f.max_iters, "Iteration cap");
  cmd->add_option("--workers", f.workers, "Worker threads");
}

Loaded load(const SourceFlags& src, const RunFlags& f) {
  if (src.preset.empty() == src.program.empty())
    throw CLI::ValidationError("source", "exactly one of --preset or --program is required");
  Loaded out;
  if (!src.preset.empty()) {
    const Preset* preset = nullptr;
    try {
      preset = &find_preset(src.preset);
    } catch (const std::invalid_argument& e) {
      throw CLI::ValidationError("--preset", e.what());
    }
    out.program = preset->build();
    out.run = preset->run;
    out.source = "preset:" + preset->name;
  } else {
    out.program = read_program(src.program);
    out.source = "program:" + src.program;
  }
  const auto problems = validate(out.program);
  if (!problems.empty()) {
    std::string msg = "invalid program:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw std::runtime_error(msg);
  }
  RunConfig& cfg = out.run;
  if (f.selector) {
    try {
      cfg.selector = SelectorSpec::parse(*f.selector);
    } catch (const std::invalid_argument& e) {
      throw CLI::ValidationError("--selector", e.what());
    }
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.scenarios) cfg.N = *f.scenarios;
  if (f.alpha) cfg.alpha = *f.alpha;
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  if (f.epsilon0) cfg.epsilon0 = *f.epsilon0;
  if (f.max_iters) cfg.max_iterations = *f.max_iters;
  if (f.workers) cfg.workers = *f.workers;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("run config", e.what());
  }
  return out;
}

void dump_cuts(const Solver& solver, const fs::path& dir) {
  fs::create_directories(dir);
  const auto& pools = solver.pools();
  for (std::size_t t = 1; t < pools.size(); ++t)
    for (std::size_t j = 0; j < pools[t].size(); ++j)
      write_cut_csv(pools[t][j], dir / fmt::format("stage{}_realization{}.csv", t + 1, j + 1));
}

void print_run(std::ostream& out, const RunReport& report) {
  const auto& b = report.bounds.back();
  fmt::print(out, "{} after {} iterations ({} cuts, {:.2f} s)\n", to_string(report.termination), report.iterations,
             report.total_cuts, report.total_seconds);
  fmt::print(out, "z_inf {:.10g}  z_sup {:.10g}\n", b.z_inf, b.z_sup);
}

int cmd_solve(const SourceFlags& src, const RunFlags& f, const std::string& out_dir, bool cuts,
              std::ostream& out) {
  Loaded loaded = load(src, f);
  Solver solver(loaded.program, loaded.run);
  const RunReport report = solver.run();
  write_run_artifacts(report, out_dir, loaded.source);
  if (cuts) dump_cuts(solver, fs::path(out_dir) / "cuts");
  print_run(out, report);
  fmt::print(out, "artifacts in {}\n", out_dir);
  return report.termination == Termination::converged ? ok : max_iterations;
}

int cmd_verify(const SourceFlags& src, const RunFlags& f, const std::string& out_dir, std::size_t max_nodes,
               std::ostream& out, std::ostream& err) {
  Loaded loaded = load(src, f);
  ExtensiveForm ef;
  try {
    ef = extensive_form(loaded.program, ExtensiveFormOptions{max_nodes});
  } catch (const TreeTooLarge& e) {
    fmt::print(err, "verify: {}\n", e.what());
    return tree_too_large;
  }
  const LPSolution oracle = solve_lp(ef.lp);
  if (!oracle.optimal()) {
    fmt::print(err, "verify: extensive form is {}\n", to_string(oracle.status));
    return runtime_error;
  }
  Solver solver(loaded.program, loaded.run);
  const RunReport report = solver.run();
  if (!out_dir.empty()) write_run_artifacts(report, out_dir, loaded.source);
  const double z_inf = report.bounds.back().z_inf;
  const double gap = std::fabs(z_inf - oracle.objective_value) / std::max(1.0, std::fabs(oracle.objective_value));
  print_run(out, report);
  fmt::print(out, "oracle {:.10g}  relative gap {:.3e}  tolerance {:.0e}\n", oracle.objective_value, gap,
             kVerifyTolerance);
  const bool pass = gap <= kVerifyTolerance;
  fmt::print(out, "{}\n", pass ? "PASS" : "FAIL");
  return pass ? ok : verify_failed;
}

int cmd_report(const std::string& run_dir, const std::string& out_dir, std::ostream& out) {
  const fs::path dir(run_dir);
  const auto bounds = read_bounds_csv(dir / "bounds.csv");
  const auto selection = read_selection_csv(dir / "selection.csv");
  const RunSummary summary = summarize(bounds, selection);
  write_summary(summary, out_dir.empty() ? dir : fs::path(out_dir));
  out << format_summary(summary);
  return ok;
}

int cmd_export(const SourceFlags& src, const std::string& path, std::ostream& out) {
  Loaded loaded = load(src, RunFlags{});
  write_program(loaded.program, path);
  fmt::print(out, "wrote {}\n", path);
  return ok;
}

int cmd_presets(std::ostream& out) {
  for (const auto& p : reference_configs())
    fmt::print(out, "{:<24} {}{}\n", p.name, p.description, p.oracle_checkable ? " [oracle]" : "");
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multicut stochastic decomposition with cut selection"};
  app.require_subcommand(1);

  SourceFlags src;
  RunFlags flags;
  std::string out_dir = "out";
  std::string verify_out;
  std::string run_dir;
  std::string report_out;
  std::string export_path;
  bool cuts = false;
  std::size_t max_nodes = ExtensiveFormOptions{}.max_nodes;

  auto* solve = app.add_subcommand("solve", "Run the decomposition and write bounds.csv, selection.csv, meta.json");
  add_source_flags(solve, src);
  add_run_flags(solve, flags);
  solve->add_option("--out", out_dir, "Output directory")->capture_default_str();
  solve->add_flag("--dump-cuts", cuts, "Also write every cut pool to <out>/cuts/");

  auto* verify = app.add_subcommand("verify", "Solve and compare z_inf with the extensive-form optimum");
  add_source_flags(verify, src);
  add_run_flags(verify, flags);
  verify->add_option("--out", verify_out, "Also write run artifacts here");
  verify->add_option("--max-nodes", max_nodes, "Scenario tree cap")->capture_default_str();

  auto* report = app.add_subcommand("report", "Summarize the artifacts of a solve run");
  report->add_option("run", run_dir, "Directory written by solve")->required();
  report->add_option("--out", report_out, "Summary directory (default: the run directory)");

  auto* exp = app.add_subcommand("export", "Write a program as JSON");
  add_source_flags(exp, src);
  exp->add_option("--out", export_path, "Destination file")->required();

  auto* presets = app.add_subcommand("presets", "List built-in presets");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (solve->parsed()) return cmd_solve(src, flags, out_dir, cuts, out);
    if (verify->parsed()) return cmd_verify(src, flags, verify_out, max_nodes, out, err);
    if (report->parsed()) return cmd_report(run_dir, report_out, out);
    if (exp->parsed()) return cmd_export(src, export_path, out);
    if (presets->parsed()) return cmd_presets(out);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return usage_error;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return runtime_error;
  }
  return usage_error;
}

}  // namespace cusmuda::cli
