#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spherecol/world.hpp"

namespace spherecol {

inline constexpr std::string_view kMetricsHeader =
    "frame,detect_time_s,solve_time_s,rebuild_count,raw_contacts,validated_contacts,stability_m,tunneled_vertices";
/// Companion file without wall-clock columns, byte-identical across runs.
inline constexpr std::string_view kDeterministicHeader =
    "frame,rebuild_count,raw_contacts,validated_contacts,stability_m,tunneled_vertices";
inline constexpr std::string_view kSweepHeader = "d,mean_rebuild_count,mean_detect_time_s,mean_stability_m";
inline constexpr std::string_view kCompareHeader =
    "method,mean_detect_time_s,mean_solve_time_s,mean_rebuild_count,mean_raw_contacts,mean_validated_contacts,"
    "mean_stability_m,final_tunneled_vertices";

std::string metrics_row(const FrameMetrics& m);
std::string deterministic_row(const FrameMetrics& m);

/// `run.csv` -> `run.det.csv`.
std::filesystem::path deterministic_path(const std::filesystem::path& out);

/// Runs every frame. With a non-empty `out`, rows are flushed as they are
/// produced so an aborted run leaves a partial file. Rethrows SolverInstability.
std::vector<FrameMetrics> run_scene(const SceneConfig& config, const std::filesystem::path& out = {});

struct RunSummary {
    double mean_detect_time_s = 0.0;
    double mean_solve_time_s = 0.0;
    double mean_rebuild_count = 0.0;
    double mean_raw_contacts = 0.0;
    double mean_validated_contacts = 0.0;
    /// Averaged over frames with at least one validated contact.
    double mean_stability_m = 0.0;
    std::size_t final_tunneled_vertices = 0;
};

RunSummary summarize(std::span<const FrameMetrics> frames);

struct SweepRow {
    double d = 0.0;
    RunSummary summary;
    std::vector<FrameMetrics> frames;
};

/// One run per d value (at least two). Writes kSweepHeader rows when `out` is set.
std::vector<SweepRow> sweep_d(const SceneConfig& config, std::span<const double> d_values,
                              const std::filesystem::path& out = {});

struct CompareRow {
    Method method = Method::Circumsphere;
    RunSummary summary;
};

std::vector<CompareRow> compare_methods(const SceneConfig& config, std::span<const Method> methods,
                                        const std::filesystem::path& out = {});

/// Default sweep grid.
inline constexpr double kDefaultSweep[] = {0.0, 0.3, 0.7, 0.9, 1.5, 2.0};

}  // namespace spherecol
