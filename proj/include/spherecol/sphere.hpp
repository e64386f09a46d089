#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "spherecol/mesh.hpp"
#include "spherecol/simd/kernels.hpp"

namespace spherecol {

class GeometryError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct SphereParams {
    /// Curvature (1/m^2) at which the Hermite factor reaches 0.
    double k_threshold = 1.0;
    /// Radius multiplier on the circumradius for flat regions.
    double flat_scale = 1.2;
    /// Clamp bounds for 1/|K|, as fractions of the circumradius.
    double curv_radius_min_frac = 1.0;
    double curv_radius_max_frac = 1.5;
    /// Relative vertex displacement that triggers a rebuild (0.7 == 70%).
    double update_threshold_d = 0.7;
    /// Slack added to each safety angle, radians.
    double cone_tolerance = 5.0 * std::numbers::pi / 180.0;

    /// Throws std::invalid_argument.
    void validate() const;
};

/// Defaults with k_threshold = 25 / bbox_diag^2, i.e. a curvature radius of
/// one fifth of the mesh's bounding-box diagonal.
SphereParams default_sphere_params(const TriangleMesh& mesh);

/// Sphere through a triangle's vertices, centered on the inward normal line
/// through the circumcenter.
struct Circumsphere {
    Vec3 center;
    double radius = 0.0;
    std::uint32_t triangle = 0;
    /// atan2(circumradius, offset): half-angle of the normal safety cone.
    double safety_angle = 0.0;
    std::array<Vec3, 3> ref_vertices;
    double ref_radius = 0.0;
    std::uint64_t build_frame = 0;

    Vec3 normal;                // outward unit normal at build time
    double circumradius = 0.0;  // R_c at build time
    double offset = 0.0;        // distance of center below the triangle plane
};

struct Circle {
    Vec3 center;
    double radius = 0.0;
};

/// Throws GeometryError for collinear points.
Circle circumcenter(const Vec3& a, const Vec3& b, const Vec3& c);

/// True when the circumradius exceeds kCollapseRatio times the longest edge
/// (largest angle above 150 degrees) or the points are collinear. Such slivers keep their old sphere.
inline constexpr double kCollapseRatio = 1.0;
bool collapsed_triangle(const Vec3& a, const Vec3& b, const Vec3& c);

/// 1 - 3t^2 + 2t^3 with t = clamp(|K| / k_threshold, 0, 1).
double hermite_factor(double curvature, double k_threshold);

/// Blend of the flat radius (flat_scale * R_c) and the clamped curvature
/// radius 1/|K|, weighted by the Hermite factor.
double sphere_radius(double circumradius, double curvature, const SphereParams& params);

Circumsphere build_circumsphere(const TriangleMesh& mesh, std::uint32_t tri, double curvature,
                                const SphereParams& params, std::uint64_t frame);

/// max_i |v_i(now) - v_i(ref)| / ref_radius.
double shape_change(const Circumsphere& sphere, const TriangleMesh& mesh);

struct SphereSet {
    std::vector<Circumsphere> spheres;
    std::size_t rebuild_count_this_frame = 0;
    /// Centers and radii mirrored for the batched overlap kernels.
    simd::SphereBatch batch;

    std::size_t size() const { return spheres.size(); }
    void store(const Circumsphere& s);
};

SphereSet build_sphere_set(const TriangleMesh& mesh, const CurvatureField& curvature, const SphereParams& params,
                           std::uint64_t frame);

/// Rebuilds every sphere whose shape_change exceeds params.update_threshold_d.
/// Curvature is not recomputed. A collapsed triangle keeps its old sphere. Returns the number rebuilt.
std::size_t update_spheres(SphereSet& set, const TriangleMesh& mesh, const SphereParams& params,
                           const CurvatureField& curvature, std::uint64_t frame);

/// Smallest sphere enclosing a triangle: the circumcircle for non-obtuse
/// triangles, otherwise the circle on the longest edge.
Circle minimal_triangle_sphere(const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace spherecol
