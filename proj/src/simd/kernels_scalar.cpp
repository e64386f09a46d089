#include "kernels_impl.hpp"

namespace spherecol::simd::detail {

std::size_t overlap_indices_scalar(const double* x, const double* y, const double* z, const double* r, std::size_t n,
                                   double qx, double qy, double qz, double qr, std::uint32_t* out) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - qx;
        const double dy = y[i] - qy;
        const double dz = z[i] - qz;
        const double d2 = dx * dx + dy * dy + dz * dz;
        const double s = r[i] + qr;
        if (d2 < s * s) out[count++] = static_cast<std::uint32_t>(i);
    }
    return count;
}

double max_dist_sq_scalar(const double* xyz, std::size_t n, double cx, double cy, double cz) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xyz[3 * i] - cx;
        const double dy = xyz[3 * i + 1] - cy;
        const double dz = xyz[3 * i + 2] - cz;
        const double d2 = dx * dx + dy * dy + dz * dz;
        if (d2 > best) best = d2;
    }
    return best;
}

void sum_points_scalar(const double* xyz, std::size_t n, double out[3]) {
    double sx = 0.0, sy = 0.0, sz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xyz[3 * i];
        sy += xyz[3 * i + 1];
        sz += xyz[3 * i + 2];
    }
    out[0] = sx;
    out[1] = sy;
    out[2] = sz;
}

}  // namespace spherecol::simd::detail
