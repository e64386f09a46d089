#include "spherecol/generators.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace spherecol {

TriangleMesh make_icosphere(int subdivisions, double radius, const Vec3& center, std::string object_id) {
    if (subdivisions < 0 || subdivisions > 8) throw std::invalid_argument("icosphere subdivisions must be in [0, 8]");
    if (!(radius > 0.0)) throw std::invalid_argument("icosphere radius must be positive");

    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v{{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                        {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& p : v) p = normalized(p);
    std::vector<Triangle> f{{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                            {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                            {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
        auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
            const auto key = std::minmax(a, b);
            if (auto it = mid.find(key); it != mid.end()) return it->second;
            v.push_back(normalized(v[a] + v[b]));
            const auto idx = static_cast<std::uint32_t>(v.size() - 1);
            mid.emplace(key, idx);
            return idx;
        };
        std::vector<Triangle> next;
        next.reserve(f.size() * 4);
        for (const auto& tri : f) {
            const auto ab = midpoint(tri[0], tri[1]);
            const auto bc = midpoint(tri[1], tri[2]);
            const auto ca = midpoint(tri[2], tri[0]);
            next.push_back({tri[0], ab, ca});
            next.push_back({tri[1], bc, ab});
            next.push_back({tri[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        f = std::move(next);
    }
    for (auto& p : v) p = center + radius * p;
    return make_mesh(std::move(v), std::move(f), std::move(object_id));
}

TriangleMesh make_cloth(int n, double size, const Vec3& center, bool facing_up, std::string object_id) {
    if (n < 2) throw std::invalid_argument("cloth resolution must be >= 2");
    if (!(size > 0.0)) throw std::invalid_argument("cloth size must be positive");

    const auto un = static_cast<std::uint32_t>(n);
    const double step = size / static_cast<double>(n - 1);
    std::vector<Vec3> v;
    v.reserve(un * un);
    for (std::uint32_t j = 0; j < un; ++j) {
        for (std::uint32_t i = 0; i < un; ++i) {
            v.push_back(center + Vec3{-0.5 * size + i * step, 0.0, -0.5 * size + j * step});
        }
    }
    std::vector<Triangle> f;
    f.reserve(2 * (un - 1) * (un - 1));
    for (std::uint32_t j = 0; j + 1 < un; ++j) {
        for (std::uint32_t i = 0; i + 1 < un; ++i) {
            const std::uint32_t v00 = j * un + i, v10 = v00 + 1, v01 = v00 + un, v11 = v01 + 1;
            if (facing_up) {
                f.push_back({v00, v11, v10});
                f.push_back({v00, v01, v11});
            } else {
                f.push_back({v00, v10, v11});
                f.push_back({v00, v11, v01});
            }
        }
    }
    return make_mesh(std::move(v), std::move(f), std::move(object_id));
}

}  // namespace spherecol
