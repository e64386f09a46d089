#include "spherecol/predicates.hpp"

#include <gmpxx.h>

#include <cmath>

namespace spherecol {

namespace {

// Forward error bounds for the plain double evaluation (Shewchuk's
// o3derrboundA / ccwerrboundA, rounded up).
constexpr double kOrient3dBound = 7.8e-16;
constexpr double kOrient2dBound = 3.4e-16;

int sign_of(const mpq_class& v) { return sgn(v); }

int orient3d_exact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const mpq_class cx(c.x), cy(c.y), cz(c.z);
    const mpq_class ux = mpq_class(a.x) - cx, uy = mpq_class(a.y) - cy, uz = mpq_class(a.z) - cz;
    const mpq_class vx = mpq_class(b.x) - cx, vy = mpq_class(b.y) - cy, vz = mpq_class(b.z) - cz;
    const mpq_class wx = mpq_class(d.x) - cx, wy = mpq_class(d.y) - cy, wz = mpq_class(d.z) - cz;
    const mpq_class det = wx * (uy * vz - uz * vy) + wy * (uz * vx - ux * vz) + wz * (ux * vy - uy * vx);
    return sign_of(det);
}

int orient2d_exact(const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c) {
    const mpq_class cx(c[0]), cy(c[1]);
    const mpq_class det = (mpq_class(a[0]) - cx) * (mpq_class(b[1]) - cy) - (mpq_class(a[1]) - cy) * (mpq_class(b[0]) - cx);
    return sign_of(det);
}

}  // namespace

int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const double ux = a.x - c.x, uy = a.y - c.y, uz = a.z - c.z;
    const double vx = b.x - c.x, vy = b.y - c.y, vz = b.z - c.z;
    const double wx = d.x - c.x, wy = d.y - c.y, wz = d.z - c.z;

    const double m1 = uy * vz, m2 = uz * vy;
    const double m3 = uz * vx, m4 = ux * vz;
    const double m5 = ux * vy, m6 = uy * vx;
    const double det = wx * (m1 - m2) + wy * (m3 - m4) + wz * (m5 - m6);
    const double permanent = (std::abs(m1) + std::abs(m2)) * std::abs(wx) + (std::abs(m3) + std::abs(m4)) * std::abs(wy) +
                             (std::abs(m5) + std::abs(m6)) * std::abs(wz);
    const double bound = kOrient3dBound * permanent;
    if (det > bound) return 1;
    if (-det > bound) return -1;
    return orient3d_exact(a, b, c, d);
}

int orient2d(const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c) {
    const double left = (a[0] - c[0]) * (b[1] - c[1]);
    const double right = (a[1] - c[1]) * (b[0] - c[0]);
    const double det = left - right;
    const double bound = kOrient2dBound * (std::abs(left) + std::abs(right));
    if (det > bound) return 1;
    if (-det > bound) return -1;
    return orient2d_exact(a, b, c);
}

}  // namespace spherecol
