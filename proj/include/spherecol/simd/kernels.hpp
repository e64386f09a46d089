#pragma once

// Batched inner loops for detection. Every kernel has a scalar reference
// implementation; an AVX2 variant is picked at startup when the CPU has it.
// SPHERECOL_SIMD=scalar|avx2 in the environment overrides the choice.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "spherecol/vec3.hpp"

namespace spherecol::simd {

enum class Isa { Scalar, Avx2 };

/// Structure-of-arrays sphere storage consumed by overlap_indices.
struct SphereBatch {
    std::vector<double> x, y, z, r;

    std::size_t size() const { return x.size(); }
    void resize(std::size_t n) {
        x.resize(n);
        y.resize(n);
        z.resize(n);
        r.resize(n);
    }
    void clear() { resize(0); }
    void set(std::size_t i, const Vec3& c, double radius) {
        x[i] = c.x;
        y[i] = c.y;
        z[i] = c.z;
        r[i] = radius;
    }
    void push_back(const Vec3& c, double radius) {
        x.push_back(c.x);
        y.push_back(c.y);
        z.push_back(c.z);
        r.push_back(radius);
    }
    Vec3 center(std::size_t i) const { return {x[i], y[i], z[i]}; }
};

struct KernelTable {
    Isa isa;
    const char* name;

    /// Writes, in ascending order, every i with |c_i - q|^2 < (r_i + qr)^2.
    /// `out` must hold n entries. Returns the count.
    std::size_t (*overlap_indices)(const double* x, const double* y, const double* z, const double* r, std::size_t n,
                                   double qx, double qy, double qz, double qr, std::uint32_t* out);

    /// max_i |p_i - c|^2 over n interleaved xyz points.
    double (*max_dist_sq)(const double* xyz, std::size_t n, double cx, double cy, double cz);

    /// Component sums over n interleaved xyz points.
    void (*sum_points)(const double* xyz, std::size_t n, double out[3]);
};

const KernelTable& scalar_kernels();

/// nullptr unless built with AVX2 support and the running CPU reports it.
const KernelTable* avx2_kernels();

/// The table in use.
const KernelTable& kernels();

/// Forces a table; throws std::runtime_error if it is unavailable.
void select_kernels(Isa isa);

/// Reusable index list. Storage only grows, so repeated queries neither
/// allocate nor zero-fill.
class HitBuffer {
public:
    std::uint32_t* prepare(std::size_t n) {
        if (n > capacity_) {
            capacity_ = std::max(n, 2 * capacity_);
            data_ = std::make_unique_for_overwrite<std::uint32_t[]>(capacity_);
        }
        size_ = 0;
        return data_.get();
    }
    void set_size(std::size_t n) { size_ = n; }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    std::uint32_t operator[](std::size_t i) const { return data_[i]; }
    const std::uint32_t* begin() const { return data_.get(); }
    const std::uint32_t* end() const { return data_.get() + size_; }

private:
    std::unique_ptr<std::uint32_t[]> data_;
    std::size_t capacity_ = 0;
    std::size_t size_ = 0;
};

/// Indices into [first, last) of the batch whose spheres overlap (q, qr).
std::size_t overlap_indices(const SphereBatch& batch, std::size_t first, std::size_t last, const Vec3& q, double qr,
                            HitBuffer& out);

std::size_t overlap_indices(const SphereBatch& batch, const Vec3& q, double qr, HitBuffer& out);

}  // namespace spherecol::simd
