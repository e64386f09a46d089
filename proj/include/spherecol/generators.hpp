#pragma once

#include "spherecol/mesh.hpp"

namespace spherecol {

/// Subdivided icosahedron projected onto a sphere: 10*4^n + 2 vertices,
/// 20*4^n triangles, outward-facing.
TriangleMesh make_icosphere(int subdivisions, double radius = 1.0, const Vec3& center = {},
                            std::string object_id = "icosphere");

/// n x n vertex grid in the xz plane centered on `center`, side `size`,
/// 2(n-1)^2 triangles. Normals face -y unless `facing_up`.
TriangleMesh make_cloth(int n, double size, const Vec3& center = {}, bool facing_up = false,
                        std::string object_id = "cloth");

}  // namespace spherecol
