#include <numbers>

#include "spherecol/mesh.hpp"

namespace spherecol {

namespace {

double dual_face_area(const DualMesh& dual, std::uint32_t face) {
    const auto& ring = dual.dual_faces[face];
    if (ring.size() < 3) return 0.0;
    Vec3 c;
    for (auto dv : ring) c += dual.dual_vertices[dv];
    c /= static_cast<double>(ring.size());
    double area = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const auto& p = dual.dual_vertices[ring[i]];
        const auto& q = dual.dual_vertices[ring[(i + 1) % ring.size()]];
        area += 0.5 * norm(cross(p - c, q - c));
    }
    return area;
}

double share_of(const DualMesh& dual, std::uint32_t dv, const std::vector<double>& face_area) {
    double a = 0.0;
    for (auto f : dual.incident_faces[dv]) a += face_area[f] / static_cast<double>(dual.dual_faces[f].size());
    if (!(a > 0.0)) throw MeshError(MeshError::Kind::DegenerateFan, "dual vertex " + std::to_string(dv) + " has zero area", dv);
    return a;
}

}  // namespace

double angle_deficit(const DualMesh& dual, std::uint32_t dv) {
    if (!dual.interior[dv]) return 0.0;
    const auto& fan = dual.dual_fans[dv];
    const auto& x = dual.dual_vertices[dv];
    double sum = 0.0;
    for (std::size_t i = 0; i < fan.size(); ++i) {
        sum += angle_between(dual.dual_vertices[fan[i]] - x, dual.dual_vertices[fan[(i + 1) % fan.size()]] - x);
    }
    return 2.0 * std::numbers::pi - sum;
}

double barycentric_area(const DualMesh& dual, std::uint32_t dv) {
    double a = 0.0;
    for (auto f : dual.incident_faces[dv]) a += dual_face_area(dual, f) / static_cast<double>(dual.dual_faces[f].size());
    if (!(a > 0.0)) throw MeshError(MeshError::Kind::DegenerateFan, "dual vertex " + std::to_string(dv) + " has zero area", dv);
    return a;
}

double angle_deficit_curvature(const DualMesh& dual, std::uint32_t dv) {
    if (!dual.interior[dv]) return 0.0;
    double deficit = angle_deficit(dual, dv);
    double area = barycentric_area(dual, dv);
    for (auto n : dual.dual_fans[dv]) {
        if (!dual.interior[n]) continue;
        deficit += angle_deficit(dual, n);
        area += barycentric_area(dual, n);
    }
    return deficit / area;
}

CurvatureField compute_curvature(const DualMesh& dual) {
    const auto n = dual.dual_vertices.size();
    std::vector<double> face_area(dual.dual_faces.size());
    for (std::uint32_t f = 0; f < face_area.size(); ++f) face_area[f] = dual_face_area(dual, f);

    CurvatureField field;
    field.deficit.assign(n, 0.0);
    field.area.assign(n, 0.0);
    field.curvature.assign(n, 0.0);
    for (std::uint32_t dv = 0; dv < n; ++dv) {
        if (!dual.interior[dv]) continue;
        field.deficit[dv] = angle_deficit(dual, dv);
        field.area[dv] = share_of(dual, dv, face_area);
    }
    for (std::uint32_t dv = 0; dv < n; ++dv) {
        if (!dual.interior[dv]) continue;
        double deficit = field.deficit[dv];
        double area = field.area[dv];
        for (auto nb : dual.dual_fans[dv]) {
            if (!dual.interior[nb]) continue;
            deficit += field.deficit[nb];
            area += field.area[nb];
        }
        field.curvature[dv] = deficit / area;
    }
    return field;
}

}  // namespace spherecol
