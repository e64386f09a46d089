#pragma once

#include <cstddef>
#include <cstdint>

namespace spherecol::simd::detail {

std::size_t overlap_indices_scalar(const double* x, const double* y, const double* z, const double* r, std::size_t n,
                                   double qx, double qy, double qz, double qr, std::uint32_t* out);
double max_dist_sq_scalar(const double* xyz, std::size_t n, double cx, double cy, double cz);
void sum_points_scalar(const double* xyz, std::size_t n, double out[3]);

#if defined(SPHERECOL_HAVE_AVX2)
std::size_t overlap_indices_avx2(const double* x, const double* y, const double* z, const double* r, std::size_t n,
                                 double qx, double qy, double qz, double qr, std::uint32_t* out);
double max_dist_sq_avx2(const double* xyz, std::size_t n, double cx, double cy, double cz);
void sum_points_avx2(const double* xyz, std::size_t n, double out[3]);
#endif

}  // namespace spherecol::simd::detail
