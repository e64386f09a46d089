#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "kernels_impl.hpp"
#include "spherecol/simd/kernels.hpp"

namespace spherecol::simd {

namespace {

const KernelTable kScalar{Isa::Scalar, "scalar", detail::overlap_indices_scalar, detail::max_dist_sq_scalar,
                          detail::sum_points_scalar};

#if defined(SPHERECOL_HAVE_AVX2)
const KernelTable kAvx2{Isa::Avx2, "avx2", detail::overlap_indices_avx2, detail::max_dist_sq_avx2,
                        detail::sum_points_avx2};
#endif

const KernelTable* initial_table() {
    const KernelTable* best = avx2_kernels();
    if (const char* env = std::getenv("SPHERECOL_SIMD")) {
        const std::string_view want(env);
        if (want == "scalar") return &kScalar;
        if (want == "avx2" && best) return best;
    }
    return best ? best : &kScalar;
}

std::atomic<const KernelTable*>& active() {
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

const KernelTable* avx2_kernels() {
#if defined(SPHERECOL_HAVE_AVX2)
    static const bool supported = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") != 0;
    }();
    return supported ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& kernels() { return *active().load(std::memory_order_relaxed); }

void select_kernels(Isa isa) {
    if (isa == Isa::Scalar) {
        active().store(&kScalar);
        return;
    }
    const auto* t = avx2_kernels();
    if (!t) throw std::runtime_error("AVX2 kernels are not available on this machine");
    active().store(t);
}

std::size_t overlap_indices(const SphereBatch& batch, std::size_t first, std::size_t last, const Vec3& q, double qr,
                            HitBuffer& out) {
    const auto n = last - first;
    auto* idx = out.prepare(n);
    const auto count = kernels().overlap_indices(batch.x.data() + first, batch.y.data() + first,
                                                 batch.z.data() + first, batch.r.data() + first, n, q.x, q.y, q.z, qr,
                                                 idx);
    if (first != 0) {
        for (std::size_t k = 0; k < count; ++k) idx[k] += static_cast<std::uint32_t>(first);
    }
    out.set_size(count);
    return count;
}

std::size_t overlap_indices(const SphereBatch& batch, const Vec3& q, double qr, HitBuffer& out) {
    return overlap_indices(batch, 0, batch.size(), q, qr, out);
}

}  // namespace spherecol::simd
