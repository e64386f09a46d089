#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spherecol/mesh.hpp"
#include "spherecol/sphere.hpp"

namespace spherecol {

enum class Method { Circumsphere, BoundingBall, PolygonExact };
enum class ConeMode { OneSided, TwoSided };

/// "circumsphere", "bounding-ball", "polygon-exact". Throws std::invalid_argument.
Method parse_method(std::string_view name);
std::string_view to_string(Method m);
/// "one-sided", "two-sided". Throws std::invalid_argument.
ConeMode parse_cone_mode(std::string_view name);
std::string_view to_string(ConeMode m);

/// Per-object bounding sphere (R_d).
struct BoundingSphere {
    Vec3 center;
    double radius = 0.0;
    std::string object_id;
};

/// Vertex centroid plus the largest vertex distance. Valid, not minimal.
BoundingSphere object_bounding_sphere(const TriangleMesh& mesh);

/// Sphere around `center` enclosing every sphere of the batch.
BoundingSphere cover_sphere(const simd::SphereBatch& batch, const Vec3& center);

struct CandidatePair {
    std::uint32_t object_a = 0;
    std::uint32_t object_b = 0;
    friend bool operator==(const CandidatePair&, const CandidatePair&) = default;
};

/// Every (a, b) with a < b and |c_a - c_b| <= r_a + r_b, in lexicographic order.
std::vector<CandidatePair> broad_phase(std::span<const BoundingSphere> spheres);

struct TriangleRef {
    std::uint32_t object = 0;
    std::uint32_t triangle = kNone;  // kNone for an analytic obstacle
    friend bool operator==(const TriangleRef&, const TriangleRef&) = default;
};

struct Contact {
    TriangleRef tri_a;
    TriangleRef tri_b;
    Vec3 normal;  // unit, from a to b
    double depth = 0.0;
    Vec3 point;
    bool validated = false;

    // Sphere geometry the contact was detected with.
    Vec3 center_a;
    double radius_a = 0.0;
    Vec3 center_b;
    double radius_b = 0.0;
    // Sphere center minus the centroid of the triangle it was built from.
    Vec3 offset_a;
    Vec3 offset_b;
};

/// Raw contact iff |c_a - c_b| < r_a + r_b. Centers closer than 1e-12 take
/// `fallback_normal`.
std::optional<Contact> sphere_overlap(const Vec3& ca, double ra, const Vec3& cb, double rb, const Vec3& fallback_normal);
std::optional<Contact> sphere_overlap(const Circumsphere& a, const Circumsphere& b);

/// Accepts when the center line lies inside the safety cone of a (and of b in
/// two-sided mode), each widened by `tol` radians. Returns the contact with
/// the validated flag set, or nothing.
std::optional<Contact> cone_validate(const Contact& contact, const Circumsphere& a, const Circumsphere& b,
                                     const Vec3& normal_a, const Vec3& normal_b, double tol,
                                     ConeMode mode = ConeMode::TwoSided);

struct DetectParams {
    double cone_tolerance = 5.0 * std::numbers::pi / 180.0;
    ConeMode cone_mode = ConeMode::TwoSided;
};

/// What narrow phases read for one object. `batch` holds the spheres under
/// test (circumspheres or per-frame minimal spheres, one per triangle);
/// `spheres` is only needed by the circumsphere method.
struct BodyView {
    std::uint32_t object = 0;
    const TriangleMesh* mesh = nullptr;
    const simd::SphereBatch* batch = nullptr;
    const std::vector<Circumsphere>* spheres = nullptr;
    BoundingSphere cover;
};

BodyView make_view(std::uint32_t object, const TriangleMesh& mesh, const SphereSet& set);
BodyView make_view(std::uint32_t object, const TriangleMesh& mesh, const simd::SphereBatch& minimal);

struct NarrowResult {
    std::vector<Contact> contacts;  // accepted contacts, ordered by (tri_a, tri_b)
    std::size_t raw = 0;            // candidates before validation
};

/// Circumsphere overlap followed by the cone filter. `a` and `b` may be the
/// same object, in which case triangles sharing a vertex are skipped.
NarrowResult narrow_phase(const BodyView& a, const BodyView& b, const DetectParams& params);

NarrowResult narrow_phase(const CandidatePair& pair, std::span<const BodyView> bodies, const DetectParams& params);

/// Smallest enclosing sphere of every triangle, recomputed from scratch.
simd::SphereBatch minimal_sphere_batch(const TriangleMesh& mesh);

/// One contact per overlapping pair of minimal triangle spheres. No cone filter.
NarrowResult baseline_bounding_ball(const BodyView& a, const BodyView& b);

/// Triangle box pairs (after culling against the other body's cover sphere)
/// checked with exact_tri_tri. Contact geometry comes from the minimal spheres.
NarrowResult baseline_polygon_exact(const BodyView& a, const BodyView& b);

/// Dispatches to narrow_phase or one of the baselines.
NarrowResult detect_pair(Method method, const BodyView& a, const BodyView& b, const DetectParams& params);

struct SphereObstacle {
    Vec3 center;
    double radius = 0.0;
};

/// Solid half-space {x : normal . x < offset}; `normal` is unit and points out.
struct PlaneObstacle {
    Vec3 normal{0.0, 1.0, 0.0};
    double offset = 0.0;
};

using Obstacle = std::variant<SphereObstacle, PlaneObstacle>;

/// Strict interior test.
bool inside_obstacle(const Obstacle& obstacle, const Vec3& p);

/// Contacts between a body and an analytic obstacle. Only a's cone applies.
NarrowResult obstacle_contacts(const BodyView& a, const Obstacle& obstacle, std::uint32_t obstacle_index, Method method,
                               const DetectParams& params);

}  // namespace spherecol
