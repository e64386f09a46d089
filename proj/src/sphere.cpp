#include "spherecol/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spherecol {

void SphereParams::validate() const {
    if (!(k_threshold > 0.0)) throw std::invalid_argument("k_threshold must be positive");
    if (!(flat_scale >= 1.0)) throw std::invalid_argument("flat_scale must be >= 1");
    if (!(curv_radius_min_frac > 0.0 && curv_radius_min_frac <= 1.0 && curv_radius_max_frac >= 1.0)) {
        throw std::invalid_argument("need 0 < curv_radius_min_frac <= 1 <= curv_radius_max_frac");
    }
    if (!(update_threshold_d >= 0.0)) throw std::invalid_argument("update_threshold_d must be >= 0");
    if (!(cone_tolerance >= 0.0)) throw std::invalid_argument("cone_tolerance must be >= 0");
}

SphereParams default_sphere_params(const TriangleMesh& mesh) {
    SphereParams p;
    const double diag = bounding_box(mesh.vertices).diagonal();
    if (diag > 0.0) p.k_threshold = 25.0 / (diag * diag);
    return p;
}

Circle circumcenter(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    const Vec3 n = cross(ab, ac);
    const double n2 = norm_sq(n);
    if (!(n2 > 1e-28 * norm_sq(ab) * norm_sq(ac))) throw GeometryError("circumcenter of collinear points");
    const Vec3 rel = (norm_sq(ac) * cross(n, ab) + norm_sq(ab) * cross(ac, n)) / (2.0 * n2);
    return {a + rel, norm(rel)};
}

bool collapsed_triangle(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double longest = std::sqrt(std::max({norm_sq(b - a), norm_sq(c - b), norm_sq(a - c)}));
    try {
        return circumcenter(a, b, c).radius > kCollapseRatio * longest;
    } catch (const GeometryError&) {
        return true;
    }
}

double hermite_factor(double curvature, double k_threshold) {
    const double t = std::clamp(std::abs(curvature) / k_threshold, 0.0, 1.0);
    return 1.0 - 3.0 * t * t + 2.0 * t * t * t;
}

double sphere_radius(double circumradius, double curvature, const SphereParams& params) {
    const double k = std::abs(curvature);
    const double f = hermite_factor(k, params.k_threshold);
    const double r_flat = params.flat_scale * circumradius;
    const double r_curv = k == 0.0 ? r_flat
                                   : std::clamp(1.0 / k, params.curv_radius_min_frac * circumradius,
                                                params.curv_radius_max_frac * circumradius);
    return f * r_flat + (1.0 - f) * r_curv;
}

Circumsphere build_circumsphere(const TriangleMesh& mesh, std::uint32_t tri, double curvature,
                                const SphereParams& params, std::uint64_t frame) {
    const auto verts = mesh.corners(tri);
    const Circle cc = circumcenter(verts[0], verts[1], verts[2]);
    const double r = std::max(sphere_radius(cc.radius, curvature, params), cc.radius);
    const double phi = std::sqrt(std::max(r * r - cc.radius * cc.radius, 0.0));

    Circumsphere s;
    s.normal = triangle_normal(verts[0], verts[1], verts[2]);
    s.circumradius = cc.radius;
    s.offset = phi;
    s.center = cc.center - phi * s.normal;
    s.radius = r;
    s.triangle = tri;
    s.safety_angle = std::atan2(cc.radius, phi);
    s.ref_vertices = verts;
    s.ref_radius = r;
    s.build_frame = frame;
    return s;
}

double shape_change(const Circumsphere& sphere, const TriangleMesh& mesh) {
    const auto now = mesh.corners(sphere.triangle);
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) worst = std::max(worst, distance(now[k], sphere.ref_vertices[k]));
    return worst / sphere.ref_radius;
}

void SphereSet::store(const Circumsphere& s) {
    spheres[s.triangle] = s;
    batch.set(s.triangle, s.center, s.radius);
}

SphereSet build_sphere_set(const TriangleMesh& mesh, const CurvatureField& curvature, const SphereParams& params,
                           std::uint64_t frame) {
    params.validate();
    SphereSet set;
    const auto nt = static_cast<std::uint32_t>(mesh.triangle_count());
    set.spheres.resize(nt);
    set.batch.resize(nt);
    for (std::uint32_t t = 0; t < nt; ++t) set.store(build_circumsphere(mesh, t, triangle_curvature(curvature, t), params, frame));
    set.rebuild_count_this_frame = nt;
    return set;
}

std::size_t update_spheres(SphereSet& set, const TriangleMesh& mesh, const SphereParams& params,
                           const CurvatureField& curvature, std::uint64_t frame) {
    std::size_t rebuilt = 0;
    for (std::uint32_t t = 0; t < set.spheres.size(); ++t) {
        if (!(shape_change(set.spheres[t], mesh) > params.update_threshold_d)) continue;
        const auto v = mesh.corners(t);
        if (collapsed_triangle(v[0], v[1], v[2])) continue;
        set.store(build_circumsphere(mesh, t, triangle_curvature(curvature, t), params, frame));
        ++rebuilt;
    }
    set.rebuild_count_this_frame = rebuilt;
    return rebuilt;
}

Circle minimal_triangle_sphere(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double ab = norm_sq(b - a);
    const double bc = norm_sq(c - b);
    const double ca = norm_sq(a - c);
    // An angle is >= 90 degrees when its opposite edge dominates the other two.
    if (bc >= ab + ca) return {(b + c) * 0.5, std::sqrt(bc) * 0.5};
    if (ca >= ab + bc) return {(c + a) * 0.5, std::sqrt(ca) * 0.5};
    if (ab >= bc + ca) return {(a + b) * 0.5, std::sqrt(ab) * 0.5};
    return circumcenter(a, b, c);
}

}  // namespace spherecol
