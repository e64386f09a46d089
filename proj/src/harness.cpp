#include "spherecol/harness.hpp"

#include <cstdio>
#include <fstream>

namespace spherecol {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_csv(const std::filesystem::path& path, std::string_view header) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << header << '\n';
    out.flush();
    return out;
}

}  // namespace

std::string metrics_row(const FrameMetrics& m) {
    return std::to_string(m.frame) + ',' + num(m.detect_time_s) + ',' + num(m.solve_time_s) + ',' +
           std::to_string(m.rebuild_count) + ',' + std::to_string(m.raw_contacts) + ',' +
           std::to_string(m.validated_contacts) + ',' + num(m.stability_m) + ',' + std::to_string(m.tunneled_vertices);
}

std::string deterministic_row(const FrameMetrics& m) {
    return std::to_string(m.frame) + ',' + std::to_string(m.rebuild_count) + ',' + std::to_string(m.raw_contacts) +
           ',' + std::to_string(m.validated_contacts) + ',' + num(m.stability_m) + ',' +
           std::to_string(m.tunneled_vertices);
}

std::filesystem::path deterministic_path(const std::filesystem::path& out) {
    auto p = out;
    p.replace_extension(".det.csv");
    return p;
}

std::vector<FrameMetrics> run_scene(const SceneConfig& config, const std::filesystem::path& out) {
    World world = generate_scene(config);
    std::ofstream csv, det;
    if (!out.empty()) {
        csv = open_csv(out, kMetricsHeader);
        det = open_csv(deterministic_path(out), kDeterministicHeader);
    }
    std::vector<FrameMetrics> frames;
    frames.reserve(static_cast<std::size_t>(config.frames));
    for (int f = 0; f < config.frames; ++f) {
        const auto report = step_world(world);
        frames.push_back(report.metrics);
        if (csv.is_open()) {
            csv << metrics_row(report.metrics) << '\n' << std::flush;
            det << deterministic_row(report.metrics) << '\n' << std::flush;
        }
    }
    return frames;
}

RunSummary summarize(std::span<const FrameMetrics> frames) {
    RunSummary s;
    if (frames.empty()) return s;
    std::size_t contact_frames = 0;
    for (const auto& m : frames) {
        s.mean_detect_time_s += m.detect_time_s;
        s.mean_solve_time_s += m.solve_time_s;
        s.mean_rebuild_count += static_cast<double>(m.rebuild_count);
        s.mean_raw_contacts += static_cast<double>(m.raw_contacts);
        s.mean_validated_contacts += static_cast<double>(m.validated_contacts);
        if (m.validated_contacts > 0) {
            s.mean_stability_m += m.stability_m;
            ++contact_frames;
        }
    }
    const auto n = static_cast<double>(frames.size());
    s.mean_detect_time_s /= n;
    s.mean_solve_time_s /= n;
    s.mean_rebuild_count /= n;
    s.mean_raw_contacts /= n;
    s.mean_validated_contacts /= n;
    if (contact_frames > 0) s.mean_stability_m /= static_cast<double>(contact_frames);
    s.final_tunneled_vertices = frames.back().tunneled_vertices;
    return s;
}

std::vector<SweepRow> sweep_d(const SceneConfig& config, std::span<const double> d_values,
                              const std::filesystem::path& out) {
    if (d_values.size() < 2) throw ConfigError("a sweep needs at least two d values");
    for (double d : d_values) {
        if (!(d >= 0.0)) throw ConfigError("d values must be >= 0");
    }
    std::ofstream csv;
    if (!out.empty()) csv = open_csv(out, kSweepHeader);
    std::vector<SweepRow> rows;
    for (double d : d_values) {
        SceneConfig c = config;
        c.method = Method::Circumsphere;
        c.update_threshold_d = d;
        SweepRow row;
        row.d = d;
        row.frames = run_scene(c);
        row.summary = summarize(row.frames);
        if (csv.is_open()) {
            csv << num(d) << ',' << num(row.summary.mean_rebuild_count) << ',' << num(row.summary.mean_detect_time_s)
                << ',' << num(row.summary.mean_stability_m) << '\n'
                << std::flush;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<CompareRow> compare_methods(const SceneConfig& config, std::span<const Method> methods,
                                        const std::filesystem::path& out) {
    if (methods.empty()) throw ConfigError("no methods to compare");
    std::ofstream csv;
    if (!out.empty()) csv = open_csv(out, kCompareHeader);
    std::vector<CompareRow> rows;
    for (auto method : methods) {
        SceneConfig c = config;
        c.method = method;
        const auto frames = run_scene(c);
        CompareRow row{method, summarize(frames)};
        if (csv.is_open()) {
            const auto& s = row.summary;
            csv << to_string(method) << ',' << num(s.mean_detect_time_s) << ',' << num(s.mean_solve_time_s) << ','
                << num(s.mean_rebuild_count) << ',' << num(s.mean_raw_contacts) << ','
                << num(s.mean_validated_contacts) << ',' << num(s.mean_stability_m) << ','
                << s.final_tunneled_vertices << '\n'
                << std::flush;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace spherecol
