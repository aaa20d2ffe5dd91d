#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "haarwalk/spectral.hpp"
#include "haarwalk/stats.hpp"
#include "haarwalk/walk.hpp"

namespace haarwalk {

/// Malformed or inconsistent spec file (CLI exit 64).
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Required input file absent (CLI exit 66).
struct MissingInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Group reference: "builtin:cyclic(4)", "circle", or "file:PATH" (relative
/// paths resolve against base_dir).
struct GroupSpecResult {
  bool circle = false;
  GroupPtr group;                // null for the circle
  std::optional<DualSet> dual;   // shipped builtin dual, when one exists
  std::string spec_string;       // normalized reference
};

GroupSpecResult load_group_spec(const std::string& spec, const std::filesystem::path& base_dir);

GroupPtr load_group_file(const std::filesystem::path& path);
DualSet load_dual_file(const std::filesystem::path& path, GroupPtr group);
void write_dual_file(const std::filesystem::path& path, const DualSet& dual);

struct MeasureSpec {
  GroupSpecResult group;
  std::optional<FiniteMeasure> finite;
  std::optional<CircleMeasure> circle;
};

MeasureSpec load_measure_file(const std::filesystem::path& path);

struct FunctionSpec {
  GroupSpecResult group;
  std::optional<FiniteFunction> finite;
  std::optional<CircleFunction> circle;
};

FunctionSpec load_function_file(const std::filesystem::path& path);

struct WalkSpec {
  WalkConfig config;
  GroupSpecResult group;
  std::filesystem::path measure_path;
  std::filesystem::path function_path;
};

WalkSpec load_walk_file(const std::filesystem::path& path);

// --- deterministic emission -------------------------------------------------

std::string analysis_to_json(const AnalysisReport& r);
std::string circle_analysis_to_json(const CircleAnalysis& r);
std::string verdicts_to_json(const std::vector<LawVerdict>& verdicts, const std::string& scenario);
std::string rate_table_csv(const TvSeries& s);
std::string sums_to_csv(const TrajectoryBatch& b);
std::string counts_to_csv(const TrajectoryBatch& b);

std::uint64_t fnv1a_file(const std::filesystem::path& path);

std::string manifest_json(const std::string& command, std::uint64_t seed,
                          const std::vector<std::filesystem::path>& inputs,
                          const std::vector<std::filesystem::path>& outputs);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace haarwalk
