#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "spherecol/simd/kernels.hpp"

using namespace spherecol;
using namespace spherecol::simd;

namespace {

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 100, 257, 1000};

SphereBatch random_batch(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> pos(-2, 2), rad(0.01, 0.6);
    SphereBatch b;
    for (std::size_t i = 0; i < n; ++i) b.push_back({pos(rng), pos(rng), pos(rng)}, rad(rng));
    return b;
}

std::vector<double> random_points(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> pos(-5, 5);
    std::vector<double> xyz(3 * n);
    for (auto& v : xyz) v = pos(rng);
    return xyz;
}

std::vector<std::uint32_t> run_overlap(const KernelTable& k, const SphereBatch& b, const Vec3& q, double qr) {
    std::vector<std::uint32_t> out(b.size() + 1);
    const auto n = k.overlap_indices(b.x.data(), b.y.data(), b.z.data(), b.r.data(), b.size(), q.x, q.y, q.z, qr,
                                     out.data());
    out.resize(n);
    return out;
}

}  // namespace

TEST_CASE("scalar overlap_indices matches a direct loop") {
    std::mt19937_64 rng(1);
    const auto& k = scalar_kernels();
    for (std::size_t n : kSizes) {
        const auto b = random_batch(rng, n);
        const Vec3 q{0.3, -0.2, 0.5};
        std::vector<std::uint32_t> expect;
        for (std::size_t i = 0; i < n; ++i) {
            if (distance(b.center(i), q) < b.r[i] + 0.4) expect.push_back(static_cast<std::uint32_t>(i));
        }
        CHECK(run_overlap(k, b, q, 0.4) == expect);
    }
}

TEST_CASE("scalar max_dist_sq and sum_points on small inputs") {
    const auto& k = scalar_kernels();
    const std::vector<double> xyz{1, 0, 0, 0, 3, 0, 0, 0, -2};
    CHECK(k.max_dist_sq(xyz.data(), 3, 0, 0, 0) == 9.0);
    CHECK(k.max_dist_sq(xyz.data(), 0, 0, 0, 0) == 0.0);
    double s[3];
    k.sum_points(xyz.data(), 3, s);
    CHECK(s[0] == 1.0);
    CHECK(s[1] == 3.0);
    CHECK(s[2] == -2.0);
}

TEST_CASE("AVX2 kernels match the scalar reference") {
    const auto* avx = avx2_kernels();
    if (!avx) {
        MESSAGE("AVX2 not available; skipping");
        return;
    }
    const auto& ref = scalar_kernels();
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> pos(-2, 2), rad(0.0, 1.0);

    for (std::size_t n : kSizes) {
        CAPTURE(n);
        const auto b = random_batch(rng, n);
        for (int trial = 0; trial < 20; ++trial) {
            const Vec3 q{pos(rng), pos(rng), pos(rng)};
            const double qr = rad(rng);
            CHECK(run_overlap(*avx, b, q, qr) == run_overlap(ref, b, q, qr));
        }

        const auto xyz = random_points(rng, n);
        const double cx = pos(rng), cy = pos(rng), cz = pos(rng);
        CHECK(avx->max_dist_sq(xyz.data(), n, cx, cy, cz) == ref.max_dist_sq(xyz.data(), n, cx, cy, cz));

        double a[3], s[3];
        avx->sum_points(xyz.data(), n, a);
        ref.sum_points(xyz.data(), n, s);
        double mag = 0;
        for (double v : xyz) mag += std::abs(v);
        for (int c = 0; c < 3; ++c) CHECK(std::abs(a[c] - s[c]) <= 1e-14 * (mag + 1));
    }
}

TEST_CASE("AVX2 overlap handles touching spheres like the scalar kernel") {
    const auto* avx = avx2_kernels();
    if (!avx) return;
    // Exactly tangent spheres are not overlapping in either kernel.
    SphereBatch b;
    for (int i = 0; i < 9; ++i) b.push_back({static_cast<double>(i), 0, 0}, 0.5);
    const auto hits = run_overlap(*avx, b, {4, 1, 0}, 0.5);
    CHECK(hits == run_overlap(scalar_kernels(), b, {4, 1, 0}, 0.5));
    CHECK(hits.empty());
    CHECK(run_overlap(*avx, b, {4, 0.5, 0}, 0.5) == std::vector<std::uint32_t>{4});
    CHECK(run_overlap(*avx, b, {4.5, 0.1, 0}, 0.5) == std::vector<std::uint32_t>{4, 5});
}

TEST_CASE("range wrapper offsets indices and reuses its buffer") {
    std::mt19937_64 rng(3);
    const auto b = random_batch(rng, 200);
    const Vec3 q{0, 0, 0};
    HitBuffer all, part;
    overlap_indices(b, q, 0.5, all);
    overlap_indices(b, 50, 150, q, 0.5, part);
    std::vector<std::uint32_t> expect;
    for (auto i : all) {
        if (i >= 50 && i < 150) expect.push_back(i);
    }
    CHECK(std::vector<std::uint32_t>(part.begin(), part.end()) == expect);

    overlap_indices(b, 10, 10, q, 0.5, part);
    CHECK(part.empty());
}

TEST_CASE("kernel selection") {
    const Isa before = kernels().isa;
    select_kernels(Isa::Scalar);
    CHECK(kernels().isa == Isa::Scalar);
    CHECK(std::string(kernels().name) == "scalar");
    if (avx2_kernels()) {
        select_kernels(Isa::Avx2);
        CHECK(kernels().isa == Isa::Avx2);
    } else {
        CHECK_THROWS_AS(select_kernels(Isa::Avx2), std::runtime_error);
    }
    select_kernels(before);
}
