// Compiled with -mavx2 only; never called unless the CPU reports AVX2.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace spherecol::simd::detail {

namespace {

inline double hmax(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

std::size_t overlap_indices_avx2(const double* x, const double* y, const double* z, const double* r, std::size_t n,
                                 double qx, double qy, double qz, double qr, std::uint32_t* out) {
    const __m256d vqx = _mm256_set1_pd(qx);
    const __m256d vqy = _mm256_set1_pd(qy);
    const __m256d vqz = _mm256_set1_pd(qz);
    const __m256d vqr = _mm256_set1_pd(qr);

    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x + i), vqx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y + i), vqy);
        const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(z + i), vqz);
        const __m256d d2 =
            _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)), _mm256_mul_pd(dz, dz));
        const __m256d s = _mm256_add_pd(_mm256_loadu_pd(r + i), vqr);
        unsigned bits = static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(d2, _mm256_mul_pd(s, s), _CMP_LT_OQ)));
        while (bits) {
            out[count++] = static_cast<std::uint32_t>(i + static_cast<unsigned>(__builtin_ctz(bits)));
            bits &= bits - 1;
        }
    }
    for (; i < n; ++i) {
        const double dx = x[i] - qx;
        const double dy = y[i] - qy;
        const double dz = z[i] - qz;
        const double d2 = dx * dx + dy * dy + dz * dz;
        const double s = r[i] + qr;
        if (d2 < s * s) out[count++] = static_cast<std::uint32_t>(i);
    }
    return count;
}

double max_dist_sq_avx2(const double* xyz, std::size_t n, double cx, double cy, double cz) {
    const __m256i stride = _mm256_set_epi64x(9, 6, 3, 0);
    const __m256d vcx = _mm256_set1_pd(cx);
    const __m256d vcy = _mm256_set1_pd(cy);
    const __m256d vcz = _mm256_set1_pd(cz);
    __m256d best = _mm256_setzero_pd();

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const double* base = xyz + 3 * i;
        const __m256d dx = _mm256_sub_pd(_mm256_i64gather_pd(base, stride, 8), vcx);
        const __m256d dy = _mm256_sub_pd(_mm256_i64gather_pd(base + 1, stride, 8), vcy);
        const __m256d dz = _mm256_sub_pd(_mm256_i64gather_pd(base + 2, stride, 8), vcz);
        const __m256d d2 =
            _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)), _mm256_mul_pd(dz, dz));
        best = _mm256_max_pd(best, d2);
    }
    double m = hmax(best);
    for (; i < n; ++i) {
        const double dx = xyz[3 * i] - cx;
        const double dy = xyz[3 * i + 1] - cy;
        const double dz = xyz[3 * i + 2] - cz;
        const double d2 = dx * dx + dy * dy + dz * dz;
        if (d2 > m) m = d2;
    }
    return m;
}

void sum_points_avx2(const double* xyz, std::size_t n, double out[3]) {
    const __m256i stride = _mm256_set_epi64x(9, 6, 3, 0);
    __m256d sx = _mm256_setzero_pd();
    __m256d sy = _mm256_setzero_pd();
    __m256d sz = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const double* base = xyz + 3 * i;
        sx = _mm256_add_pd(sx, _mm256_i64gather_pd(base, stride, 8));
        sy = _mm256_add_pd(sy, _mm256_i64gather_pd(base + 1, stride, 8));
        sz = _mm256_add_pd(sz, _mm256_i64gather_pd(base + 2, stride, 8));
    }
    double tx = hsum(sx), ty = hsum(sy), tz = hsum(sz);
    for (; i < n; ++i) {
        tx += xyz[3 * i];
        ty += xyz[3 * i + 1];
        tz += xyz[3 * i + 2];
    }
    out[0] = tx;
    out[1] = ty;
    out[2] = tz;
}

}  // namespace spherecol::simd::detail
