#pragma once

#include "cusmuda/solver.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cusmuda {

/// Writes bounds.csv, selection.csv and meta.json into `dir`. Numbers are
/// printed with 17 significant digits; stages and realizations are 1-based.
void write_run_artifacts(const RunReport& report, const std::filesystem::path& dir,
                         const std::string& program_source);

void write_bounds_csv(const std::vector<BoundsRecord>& bounds, const std::filesystem::path& path);
void write_selection_csv(const std::vector<SelectionRecord>& selection, const std::filesystem::path& path);

/// Throws std::runtime_error on missing or malformed files.
std::vector<BoundsRecord> read_bounds_csv(const std::filesystem::path& path);
std::vector<SelectionRecord> read_selection_csv(const std::filesystem::path& path);

struct StageSummary {
  int t = 0;  // 0-based
  double mean_proportion = 0.0;
};

struct RealizationSummary {
  int t = 0;
  int j = 0;
  double mean_proportion = 0.0;
};

struct RunSummary {
  int iterations = 0;
  BoundsRecord final_bounds;
  std::vector<StageSummary> stages;
  std::vector<RealizationSummary> realizations;
};

/// Stage proportion at an iteration is the pooled selected/total over its
/// realizations; both summaries average over iterations.
RunSummary summarize(const std::vector<BoundsRecord>& bounds, const std::vector<SelectionRecord>& selection);

/// Writes stage_summary.csv, realization_summary.csv and summary.txt.
void write_summary(const RunSummary& summary, const std::filesystem::path& dir);
std::string format_summary(const RunSummary& summary);

}  // namespace cusmuda
