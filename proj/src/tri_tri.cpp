// Triangle-triangle overlap after Guigue and Devillers: reject by plane sides,
// rotate both triangles into a canonical vertex order, then decide with two
// orientation tests. Coplanar pairs fall back to a 2D edge/containment test.
#include <algorithm>
#include <cmath>

#include "spherecol/predicates.hpp"

namespace spherecol {

namespace {

using P2 = std::array<double, 2>;

bool check_min_max(const Vec3& p1, const Vec3& q1, const Vec3& r1, const Vec3& p2, const Vec3& q2, const Vec3& r2) {
    if (orient3d(p2, p1, q1, q2) > 0) return false;
    if (orient3d(p2, r1, p1, r2) > 0) return false;
    return true;
}

bool on_segment(const P2& a, const P2& b, const P2& p) {
    return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) && std::min(a[1], b[1]) <= p[1] &&
           p[1] <= std::max(a[1], b[1]);
}

bool segments_meet(const P2& a, const P2& b, const P2& c, const P2& d) {
    const int o1 = orient2d(a, b, c);
    const int o2 = orient2d(a, b, d);
    const int o3 = orient2d(c, d, a);
    const int o4 = orient2d(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

bool point_in_triangle(const std::array<P2, 3>& t, const P2& p) {
    const int o1 = orient2d(t[0], t[1], p);
    const int o2 = orient2d(t[1], t[2], p);
    const int o3 = orient2d(t[2], t[0], p);
    const bool has_pos = o1 > 0 || o2 > 0 || o3 > 0;
    const bool has_neg = o1 < 0 || o2 < 0 || o3 < 0;
    return !(has_pos && has_neg);
}

bool coplanar_overlap(const Vec3& p1, const Vec3& q1, const Vec3& r1, const Vec3& p2, const Vec3& q2, const Vec3& r2) {
    const Vec3 n = cross(q1 - p1, r1 - p1);
    const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
    // Drop the dominant normal axis; orientation signs survive the projection.
    int u = 0, v = 1;
    if (ax >= ay && ax >= az) {
        u = 1;
        v = 2;
    } else if (ay >= az) {
        u = 0;
        v = 2;
    }
    auto proj = [&](const Vec3& p) { return P2{p[u], p[v]}; };
    const std::array<P2, 3> a{proj(p1), proj(q1), proj(r1)};
    const std::array<P2, 3> b{proj(p2), proj(q2), proj(r2)};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (segments_meet(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3])) return true;
        }
    }
    return point_in_triangle(b, a[0]) || point_in_triangle(a, b[0]);
}

bool tri_tri_3d(const Vec3& p1, const Vec3& q1, const Vec3& r1, const Vec3& p2, const Vec3& q2, const Vec3& r2, int dp2,
                int dq2, int dr2) {
    if (dp2 > 0) {
        if (dq2 > 0) return check_min_max(p1, r1, q1, r2, p2, q2);
        if (dr2 > 0) return check_min_max(p1, r1, q1, q2, r2, p2);
        return check_min_max(p1, q1, r1, p2, q2, r2);
    }
    if (dp2 < 0) {
        if (dq2 < 0) return check_min_max(p1, q1, r1, r2, p2, q2);
        if (dr2 < 0) return check_min_max(p1, q1, r1, q2, r2, p2);
        return check_min_max(p1, r1, q1, p2, q2, r2);
    }
    if (dq2 < 0) {
        if (dr2 >= 0) return check_min_max(p1, r1, q1, q2, r2, p2);
        return check_min_max(p1, q1, r1, p2, q2, r2);
    }
    if (dq2 > 0) {
        if (dr2 > 0) return check_min_max(p1, r1, q1, p2, q2, r2);
        return check_min_max(p1, q1, r1, q2, r2, p2);
    }
    if (dr2 > 0) return check_min_max(p1, q1, r1, r2, p2, q2);
    if (dr2 < 0) return check_min_max(p1, r1, q1, r2, p2, q2);
    return coplanar_overlap(p1, q1, r1, p2, q2, r2);
}

}  // namespace

bool exact_tri_tri(const std::array<Vec3, 3>& a, const std::array<Vec3, 3>& b) {
    const auto& [p1, q1, r1] = a;
    const auto& [p2, q2, r2] = b;

    const int dp1 = orient3d(p2, q2, r2, p1);
    const int dq1 = orient3d(p2, q2, r2, q1);
    const int dr1 = orient3d(p2, q2, r2, r1);
    if (dp1 * dq1 > 0 && dp1 * dr1 > 0) return false;

    const int dp2 = orient3d(p1, q1, r1, p2);
    const int dq2 = orient3d(p1, q1, r1, q2);
    const int dr2 = orient3d(p1, q1, r1, r2);
    if (dp2 * dq2 > 0 && dp2 * dr2 > 0) return false;

    if (dp1 > 0) {
        if (dq1 > 0) return tri_tri_3d(r1, p1, q1, p2, r2, q2, dp2, dr2, dq2);
        if (dr1 > 0) return tri_tri_3d(q1, r1, p1, p2, r2, q2, dp2, dr2, dq2);
        return tri_tri_3d(p1, q1, r1, p2, q2, r2, dp2, dq2, dr2);
    }
    if (dp1 < 0) {
        if (dq1 < 0) return tri_tri_3d(r1, p1, q1, p2, q2, r2, dp2, dq2, dr2);
        if (dr1 < 0) return tri_tri_3d(q1, r1, p1, p2, q2, r2, dp2, dq2, dr2);
        return tri_tri_3d(p1, q1, r1, p2, r2, q2, dp2, dr2, dq2);
    }
    if (dq1 < 0) {
        if (dr1 >= 0) return tri_tri_3d(q1, r1, p1, p2, r2, q2, dp2, dr2, dq2);
        return tri_tri_3d(p1, q1, r1, p2, q2, r2, dp2, dq2, dr2);
    }
    if (dq1 > 0) {
        if (dr1 > 0) return tri_tri_3d(p1, q1, r1, p2, r2, q2, dp2, dr2, dq2);
        return tri_tri_3d(q1, r1, p1, p2, q2, r2, dp2, dq2, dr2);
    }
    if (dr1 > 0) return tri_tri_3d(r1, p1, q1, p2, q2, r2, dp2, dq2, dr2);
    if (dr1 < 0) return tri_tri_3d(r1, p1, q1, p2, r2, q2, dp2, dr2, dq2);
    return coplanar_overlap(p1, q1, r1, p2, q2, r2);
}

}  // namespace spherecol
