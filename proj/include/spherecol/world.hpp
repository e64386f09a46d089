#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spherecol/detect.hpp"
#include "spherecol/pbd.hpp"
#include "spherecol/scene.hpp"

namespace spherecol {

struct Body {
    std::string name;
    TriangleMesh mesh;  // vertices follow the particles
    std::uint32_t first_particle = 0;
    Adjacency adjacency;
    CurvatureField curvature;  // computed once from the rest shape
    SphereParams params;
    SphereSet spheres;
    simd::SphereBatch minimal;
    bool self_collision = false;
    bool closed = false;
    std::vector<Vec3> last_synced;

    Triangle particles(std::size_t tri) const {
        const auto& t = mesh.triangles[tri];
        return {first_particle + t[0], first_particle + t[1], first_particle + t[2]};
    }
};

struct World {
    SceneConfig config;
    ParticleState particles;
    std::vector<Body> bodies;
    std::vector<Obstacle> obstacles;
    std::vector<DistanceConstraint> distances;
    SolverConfig solver;
    DetectParams detect;
    std::uint64_t frame = 0;
};

/// Builds meshes, particles, edge constraints and initial spheres.
/// Deterministic for a given config (including seed). Throws ConfigError or MeshError.
World generate_scene(const SceneConfig& config);

struct FrameMetrics {
    std::uint64_t frame = 0;
    double detect_time_s = 0.0;
    double solve_time_s = 0.0;
    std::size_t rebuild_count = 0;
    std::size_t raw_contacts = 0;
    std::size_t validated_contacts = 0;
    double stability_m = 0.0;
    std::size_t tunneled_vertices = 0;
    /// Triangles with a vertex that moved since the previous detection. Not exported.
    std::size_t moved_triangles = 0;
};

struct FrameReport {
    FrameMetrics metrics;
    std::vector<Contact> contacts;
    SolveTrace trace;
};

/// predict -> sync meshes -> detect -> solve -> metrics. Throws SolverInstability.
FrameReport step_world(World& world);

/// Mean |now_i - prev_i| over the listed vertices; 0 when the list is empty.
double stability_metric(std::span<const Vec3> prev, std::span<const Vec3> now, std::span<const std::uint32_t> vertices);

/// Inside test for a closed triangle mesh by ray parity, bucketed on a grid.
class ClosedMeshTest {
public:
    /// Throws std::invalid_argument when `verify` is set and the mesh has boundary edges.
    explicit ClosedMeshTest(const TriangleMesh& mesh, bool verify = true);
    /// Strict interior; points on the surface may go either way.
    bool inside(const Vec3& p) const;

private:
    const TriangleMesh* mesh_;
    std::array<double, 2> lo_{}, hi_{};
    int cells_ = 1;
    std::vector<std::vector<std::uint32_t>> grid_;
};

/// Points strictly inside any analytic obstacle or closed mesh.
std::size_t tunneling_check(std::span<const Vec3> points, std::span<const Obstacle> obstacles,
                            std::span<const TriangleMesh> closed_meshes = {});

/// Tunneled particles of the world: inside an obstacle or inside another closed body.
std::size_t tunneling_check(const World& world);

}  // namespace spherecol
