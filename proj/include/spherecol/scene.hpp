#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spherecol/detect.hpp"

namespace spherecol {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BodySpec {
    std::string name;
    std::string generator = "cloth";  // cloth | icosphere | mesh
    int resolution = 20;              // cloth vertices per side
    double size = 2.0;                // cloth side, m
    int subdivisions = 2;
    double radius = 0.5;  // icosphere, m
    std::string path;     // mesh file
    double mass = 1.0;    // total, kg
    double stiffness = 1.0;
    std::string pinned = "none";  // none | corners | all | comma-separated vertex indices
    Vec3 translate;
    Vec3 velocity;
    double jitter = 0.0;  // uniform vertex noise amplitude, m
    std::optional<bool> self_collision;
    bool facing_up = false;
    bool braced = false;  // tie each vertex to its farthest vertex
};

struct SceneConfig {
    std::string name = "scene";
    double dt = 1.0 / 60.0;
    int frames = 100;
    int iterations = 10;
    Vec3 gravity{0.0, -9.81, 0.0};
    double damping = 0.99;
    Method method = Method::Circumsphere;
    ConeMode cone_mode = ConeMode::TwoSided;
    double update_threshold_d = 0.7;
    double flat_scale = 1.2;
    double curv_radius_min_frac = 1.0;
    double curv_radius_max_frac = 1.5;
    std::optional<double> k_threshold;  // per body 25 / bbox_diag^2 when unset
    double cone_tolerance_deg = 5.0;
    std::uint64_t seed = 0;
    bool self_collision = false;
    std::vector<BodySpec> bodies;
    std::vector<Obstacle> obstacles;

    /// Throws ConfigError.
    void validate() const;
};

/// Flat `key = value` text; globals first (or under [scene]), then one
/// [body] or [obstacle] section per object. Throws ConfigError naming the line.
SceneConfig parse_scene(std::string_view text);

/// A file path, or `builtin:<name>` for one of builtin_scene_names().
SceneConfig load_scene(const std::string& source);

SceneConfig builtin_scene(std::string_view name);
std::vector<std::string> builtin_scene_names();

/// Text form accepted by parse_scene.
std::string format_scene(const SceneConfig& config);

}  // namespace spherecol
