#pragma once

#include <array>

#include "spherecol/vec3.hpp"

namespace spherecol {

/// Exact sign of (d - c) . ((a - c) x (b - c)): +1 when d lies on the side the
/// counter-clockwise normal of (a, b, c) points to, 0 when coplanar.
int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// Exact sign of (a - c) x (b - c) in the plane: +1 for a left turn c->a->b.
int orient2d(const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c);

/// True iff the closed triangles share at least one point. Decisions rest
/// entirely on orient3d/orient2d, so the answer is exact for the given doubles.
bool exact_tri_tri(const std::array<Vec3, 3>& a, const std::array<Vec3, 3>& b);

}  // namespace spherecol
