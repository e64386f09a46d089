#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spherecol/vec3.hpp"

namespace spherecol {

using Triangle = std::array<std::uint32_t, 3>;

inline constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

/// Minimum accepted triangle area, m^2.
inline constexpr double kMinTriangleArea = 1e-12;

class MeshError : public std::runtime_error {
public:
    enum class Kind { Io, Parse, NonTriangleFace, BadIndex, DegenerateTriangle, NonManifoldEdge, DegenerateFan };

    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    MeshError(Kind kind, const std::string& what, std::size_t index = npos)
        : std::runtime_error(what), kind_(kind), index_(index) {}

    Kind kind() const noexcept { return kind_; }
    /// Offending line, face, triangle or dual vertex, depending on kind.
    std::size_t index() const noexcept { return index_; }

private:
    Kind kind_;
    std::size_t index_;
};

/// Indexed triangle surface. Counter-clockwise corners define the outward normal.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    std::string object_id;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t triangle_count() const { return triangles.size(); }

    std::array<Vec3, 3> corners(std::size_t t) const {
        const auto& tri = triangles[t];
        return {vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]};
    }
};

/// Builds a mesh and checks index range and triangle area. Throws MeshError.
TriangleMesh make_mesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles, std::string object_id = {});

/// Throws MeshError if any index is out of range or any triangle is degenerate.
void validate_mesh(const TriangleMesh& mesh);

/// Reads `v x y z` / `f i j k` text (1-based indices, triangles only).
TriangleMesh load_mesh(const std::filesystem::path& path);
TriangleMesh parse_mesh(std::string_view text, std::string object_id = {});
void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path);

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
Vec3 triangle_normal(const Vec3& a, const Vec3& b, const Vec3& c);  // unit, CCW outward
Vec3 triangle_centroid(const Vec3& a, const Vec3& b, const Vec3& c);

struct Aabb {
    Vec3 lo;
    Vec3 hi;
    double diagonal() const { return distance(lo, hi); }
};
Aabb bounding_box(std::span<const Vec3> points);

struct Adjacency {
    /// Neighbor across edge k = (t[k], t[k+1]); kNone on the boundary.
    std::vector<std::array<std::uint32_t, 3>> across_edge;
    /// Incident triangles of each vertex in counter-clockwise order. Open fans
    /// start at the boundary triangle.
    std::vector<std::vector<std::uint32_t>> vertex_fans;
    std::vector<std::uint8_t> fan_closed;
    std::size_t interior_edges = 0;
    std::size_t boundary_edges = 0;

    std::vector<std::uint32_t> tri_neighbors(std::size_t t) const;
};

/// Throws MeshError(NonManifoldEdge) naming the edge as "i-j".
Adjacency build_adjacency(const TriangleMesh& mesh);

/// Graph of triangle centroids joined across shared edges.
struct DualMesh {
    std::vector<Vec3> dual_vertices;
    std::vector<std::array<std::uint32_t, 2>> dual_edges;
    /// Neighbors of each dual vertex in edge order (consecutive around it).
    std::vector<std::vector<std::uint32_t>> dual_fans;
    /// Dual face of each primal vertex: the ring of dual vertices around it.
    std::vector<std::vector<std::uint32_t>> dual_faces;
    std::vector<std::uint8_t> face_closed;
    /// Primal corners of each dual vertex, i.e. the dual faces it touches.
    std::vector<Triangle> incident_faces;
    /// Closed fan and every incident dual face closed.
    std::vector<std::uint8_t> interior;
};

DualMesh build_dual_mesh(const TriangleMesh& mesh, const Adjacency& adj);

/// 2*pi minus the angles between consecutive dual edges at dv. 0 on the boundary.
double angle_deficit(const DualMesh& dual, std::uint32_t dv);

/// Sum over the dual faces at dv of area / corner count. For triangular faces
/// this is the usual A/3 barycentric share. Throws on a zero-area face.
double barycentric_area(const DualMesh& dual, std::uint32_t dv);

/// Discrete Gaussian curvature (1/m^2) at a dual vertex: angle deficit over
/// barycentric area, integrated over dv and its interior dual neighbors.
/// Boundary dual vertices return 0.
double angle_deficit_curvature(const DualMesh& dual, std::uint32_t dv);

struct CurvatureField {
    std::vector<double> deficit;    // rad, per dual vertex
    std::vector<double> area;       // m^2, per dual vertex
    std::vector<double> curvature;  // 1/m^2, per dual vertex == per triangle
};

CurvatureField compute_curvature(const DualMesh& dual);

/// Curvature of a primal triangle, read from its dual vertex.
inline double triangle_curvature(const CurvatureField& field, std::size_t tri) { return field.curvature[tri]; }

}  // namespace spherecol
