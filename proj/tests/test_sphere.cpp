#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "spherecol/generators.hpp"
#include "spherecol/sphere.hpp"
#include "test_util.hpp"

using namespace spherecol;

namespace {

const double kSqrt3 = std::sqrt(3.0);

TriangleMesh single(const Vec3& a, const Vec3& b, const Vec3& c) { return make_mesh({a, b, c}, {{0, 1, 2}}); }

TriangleMesh equilateral() { return single({0, 0, 0}, {1, 0, 0}, {0.5, kSqrt3 / 2, 0}); }

SphereParams flat_params(double scale) {
    SphereParams p;
    p.flat_scale = scale;
    return p;
}

CurvatureField flat_field(const TriangleMesh& m) {
    CurvatureField f;
    f.curvature.assign(m.triangle_count(), 0.0);
    f.deficit.assign(m.triangle_count(), 0.0);
    f.area.assign(m.triangle_count(), 0.0);
    return f;
}

}  // namespace

TEST_CASE("circumcenter examples") {
    const auto eq = circumcenter({0, 0, 0}, {1, 0, 0}, {0.5, kSqrt3 / 2, 0});
    CHECK(eq.center.x == doctest::Approx(0.5));
    CHECK(eq.center.y == doctest::Approx(kSqrt3 / 6));
    CHECK(eq.center.z == doctest::Approx(0.0));
    CHECK(eq.radius == doctest::Approx(1.0 / kSqrt3));

    const auto right = circumcenter({0, 0, 0}, {2, 0, 0}, {0, 2, 0});
    CHECK(distance(right.center, {1, 1, 0}) < 1e-15);
    CHECK(right.radius == doctest::Approx(std::sqrt(2.0)));

    CHECK_THROWS_AS(circumcenter({0, 0, 0}, {1, 1, 1}, {2, 2, 2}), GeometryError);
}

TEST_CASE("circumcenter equidistance and coplanarity on random triangles") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 2000; ++i) {
        const auto t = testutil::random_triangle(rng, -10, 10);
        const auto c = circumcenter(t[0], t[1], t[2]);
        for (const auto& v : t) CHECK(distance(v, c.center) == doctest::Approx(c.radius).epsilon(1e-9));
        const Vec3 n = triangle_normal(t[0], t[1], t[2]);
        CHECK(std::abs(dot(n, c.center - t[0])) <= 1e-9 * c.radius);
    }
}

TEST_CASE("hermite factor endpoints, midpoint and monotonicity") {
    CHECK(hermite_factor(0.0, 4.0) == 1.0);
    CHECK(hermite_factor(4.0, 4.0) == 0.0);
    CHECK(hermite_factor(40.0, 4.0) == 0.0);
    CHECK(hermite_factor(2.0, 4.0) == doctest::Approx(0.5));
    CHECK(hermite_factor(-2.0, 4.0) == hermite_factor(2.0, 4.0));
    double prev = 2.0;
    for (int i = 0; i <= 10000; ++i) {
        const double h = hermite_factor(1.2 * i / 10000.0, 1.0);
        CHECK(h <= prev);
        CHECK(h >= 0.0);
        CHECK(h <= 1.0);
        prev = h;
    }
}

TEST_CASE("sphere radius blend") {
    SphereParams p;
    p.k_threshold = 2.0;
    SUBCASE("flat branch") { CHECK(sphere_radius(0.5, 0.0, p) == doctest::Approx(0.6)); }
    SUBCASE("sharp, clamped to the floor") {
        // K above threshold: f = 0 and 1/K = 0.1 < R_c, clamped to R_c.
        CHECK(sphere_radius(0.5, 10.0, p) == doctest::Approx(0.5));
    }
    SUBCASE("half threshold, clamped to the ceiling") {
        p.k_threshold = 0.5;
        // f = 0.5; 1/K = 4 clamps to 1.5 R_c.
        CHECK(sphere_radius(1.0, 0.25, p) == doctest::Approx(0.5 * 1.2 + 0.5 * 1.5));
    }
    SUBCASE("never below the floor") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 50.0);
        for (int i = 0; i < 1000; ++i) CHECK(sphere_radius(0.3, u(rng), p) >= 0.3);
    }
}

TEST_CASE("build_circumsphere on the equilateral triangle") {
    const auto m = equilateral();
    SUBCASE("r = R_c") {
        const auto s = build_circumsphere(m, 0, 0.0, flat_params(1.0), 0);
        CHECK(s.offset == 0.0);
        CHECK(distance(s.center, {0.5, kSqrt3 / 6, 0}) < 1e-15);
        CHECK(s.safety_angle == doctest::Approx(std::numbers::pi / 2));
    }
    SUBCASE("r = 2 R_c") {
        const auto s = build_circumsphere(m, 0, 0.0, flat_params(2.0), 7);
        CHECK(s.offset == doctest::Approx(1.0));
        CHECK(s.center.x == doctest::Approx(0.5));
        CHECK(s.center.y == doctest::Approx(kSqrt3 / 6));
        CHECK(s.center.z == doctest::Approx(-1.0));
        CHECK(s.safety_angle == doctest::Approx(std::numbers::pi / 6));
        CHECK(s.build_frame == 7);
        CHECK(s.ref_radius == s.radius);
        for (const auto& v : m.vertices) CHECK(std::abs(distance(v, s.center) - s.radius) <= 1e-6 * s.radius);
    }
}

TEST_CASE("min_frac below one clamps the radius to the circumradius") {
    SphereParams p;
    p.curv_radius_min_frac = 0.5;
    p.k_threshold = 1.0;
    const auto m = equilateral();
    const auto s = build_circumsphere(m, 0, 100.0, p, 0);
    CHECK(s.radius == doctest::Approx(1.0 / kSqrt3));
    CHECK(s.offset == 0.0);
}

TEST_CASE("circumsphere invariants on random triangles") {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> scale(1.0, 2.0);
    for (int i = 0; i < 2000; ++i) {
        const auto t = testutil::random_triangle(rng, -5, 5);
        const auto m = single(t[0], t[1], t[2]);
        const auto s = build_circumsphere(m, 0, 0.0, flat_params(scale(rng)), 0);
        for (const auto& v : t) CHECK(std::abs(distance(v, s.center) - s.radius) <= 1e-6 * s.radius);
        // Center on the inward normal line through the circumcenter.
        const auto cc = circumcenter(t[0], t[1], t[2]);
        const Vec3 n = triangle_normal(t[0], t[1], t[2]);
        const Vec3 d = s.center - cc.center;
        CHECK(norm(cross(d, n)) <= 1e-9 * s.radius);
        CHECK(dot(d, n) <= 1e-12);
        CHECK(s.safety_angle > 0.0);
        CHECK(s.safety_angle <= std::numbers::pi / 2);
        CHECK(s.safety_angle == doctest::Approx(std::atan2(cc.radius, s.offset)).epsilon(1e-12));
    }
}

TEST_CASE("cap coverage: the outward cap boundary is the circumcircle") {
    std::mt19937_64 rng(303);
    for (int i = 0; i < 500; ++i) {
        const auto t = testutil::random_triangle(rng);
        const auto s = build_circumsphere(single(t[0], t[1], t[2]), 0, 0.0, flat_params(1.7), 0);
        // Plane cut radius sqrt(r^2 - phi^2) equals R_c.
        CHECK(std::sqrt(s.radius * s.radius - s.offset * s.offset) == doctest::Approx(s.circumradius).epsilon(1e-9));
        // Points of the triangle are inside the sphere.
        for (double a : {0.1, 0.3, 0.6}) {
            for (double b : {0.1, 0.3}) {
                if (a + b > 1.0) continue;
                const Vec3 p = t[0] + a * (t[1] - t[0]) + b * (t[2] - t[0]);
                CHECK(distance(p, s.center) <= s.radius * (1 + 1e-12));
            }
        }
    }
}

TEST_CASE("monotone cone: safety angle decreases with radius") {
    const auto m = equilateral();
    double prev = 10.0;
    for (int i = 0; i <= 100; ++i) {
        const auto s = build_circumsphere(m, 0, 0.0, flat_params(1.0 + i * 0.05), 0);
        if (i > 0) {
            CHECK(s.safety_angle < prev);
        }
        prev = s.safety_angle;
    }
}

TEST_CASE("shape change examples") {
    auto m = equilateral();
    const auto s = build_circumsphere(m, 0, 0.0, flat_params(1.2), 0);
    CHECK(shape_change(s, m) == 0.0);
    m.vertices[1].z += s.ref_radius;
    CHECK(shape_change(s, m) == doctest::Approx(1.0));
    m.vertices[1].z -= 0.65 * s.ref_radius;
    CHECK(shape_change(s, m) == doctest::Approx(0.35));
}

TEST_CASE("update_spheres rebuild policy") {
    auto m = make_cloth(6, 1.0);
    const auto field = flat_field(m);
    auto params = flat_params(1.2);
    auto set = build_sphere_set(m, field, params, 0);
    CHECK(set.size() == m.triangle_count());
    CHECK(set.batch.size() == m.triangle_count());

    SUBCASE("static mesh: no rebuilds for any d") {
        for (double d : {0.0, 0.7, 2.0}) {
            params.update_threshold_d = d;
            CHECK(update_spheres(set, m, params, field, 1) == 0);
            CHECK(set.rebuild_count_this_frame == 0);
        }
    }
    SUBCASE("uniform shift of half a radius") {
        // Every vertex moves by half of the smallest ref radius.
        double rmin = 1e9;
        for (const auto& s : set.spheres) rmin = std::min(rmin, s.ref_radius);
        for (auto& v : m.vertices) v.y += 0.5 * rmin;
        params.update_threshold_d = 0.7;
        CHECK(update_spheres(set, m, params, field, 1) == 0);
        params.update_threshold_d = 0.0;
        CHECK(update_spheres(set, m, params, field, 2) == m.triangle_count());
        for (const auto& s : set.spheres) CHECK(s.build_frame == 2);
        // Idempotence: nothing moved since the rebuild.
        CHECK(update_spheres(set, m, params, field, 3) == 0);
    }
    SUBCASE("only moved triangles rebuild; untouched spheres keep their snapshots") {
        params.update_threshold_d = 0.0;
        m.vertices[0].y += 1e-3;
        const auto before = set.spheres;
        const auto rebuilt = update_spheres(set, m, params, field, 5);
        std::size_t touching = 0;
        for (std::size_t t = 0; t < m.triangle_count(); ++t) {
            const auto& tri = m.triangles[t];
            const bool touches = tri[0] == 0 || tri[1] == 0 || tri[2] == 0;
            touching += touches;
            if (!touches) {
                CHECK(set.spheres[t].build_frame == 0);
                CHECK(set.spheres[t].center == before[t].center);
            } else {
                CHECK(set.spheres[t].build_frame == 5);
            }
        }
        CHECK(rebuilt == touching);
    }
}

TEST_CASE("collapsed triangles keep their previous sphere") {
    CHECK(collapsed_triangle({0, 0, 0}, {1, 0, 0}, {2, 0, 0}));
    CHECK(collapsed_triangle({0, 0, 0}, {1, 0.01, 0}, {2, 0, 0}));
    CHECK_FALSE(collapsed_triangle({0, 0, 0}, {1, 0, 0}, {0, 1, 0}));

    auto m = single({0, 0, 0}, {2, 0, 0}, {1, 1, 0});
    const auto field = flat_field(m);
    auto params = flat_params(1.2);
    params.update_threshold_d = 0.0;
    auto set = build_sphere_set(m, field, params, 0);
    const auto before = set.spheres[0];
    m.vertices[2] = {1, 1e-9, 0};  // flattened into a sliver
    CHECK(update_spheres(set, m, params, field, 1) == 0);
    CHECK(set.spheres[0].center == before.center);
    CHECK(set.spheres[0].build_frame == 0);
}

TEST_CASE("sphere set batch mirrors the spheres") {
    const auto m = make_icosphere(2);
    const auto dual = build_dual_mesh(m, build_adjacency(m));
    const auto set = build_sphere_set(m, compute_curvature(dual), default_sphere_params(m), 0);
    for (std::size_t t = 0; t < set.size(); ++t) {
        CHECK(set.batch.center(t) == set.spheres[t].center);
        CHECK(set.batch.r[t] == set.spheres[t].radius);
    }
}

TEST_CASE("default parameters and validation") {
    const auto m = make_icosphere(1, 1.0);
    const auto p = default_sphere_params(m);
    const double diag = bounding_box(m.vertices).diagonal();
    CHECK(p.k_threshold == doctest::Approx(25.0 / (diag * diag)));
    CHECK(p.flat_scale == 1.2);
    CHECK(p.curv_radius_min_frac == 1.0);
    CHECK(p.curv_radius_max_frac == 1.5);
    CHECK(p.cone_tolerance == doctest::Approx(5.0 * std::numbers::pi / 180.0));
    CHECK_NOTHROW(p.validate());

    SphereParams bad;
    bad.flat_scale = 0.9;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.k_threshold = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.curv_radius_max_frac = 0.8;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.update_threshold_d = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("minimal triangle sphere") {
    // Acute: circumcircle.
    const auto eq = minimal_triangle_sphere({0, 0, 0}, {1, 0, 0}, {0.5, kSqrt3 / 2, 0});
    CHECK(eq.radius == doctest::Approx(1.0 / kSqrt3));
    // Obtuse: longest edge as diameter.
    const auto ob = minimal_triangle_sphere({0, 0, 0}, {4, 0, 0}, {2, 0.5, 0});
    CHECK(ob.radius == doctest::Approx(2.0));
    CHECK(distance(ob.center, {2, 0, 0}) < 1e-15);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 500; ++i) {
        const auto t = testutil::random_triangle(rng);
        const auto c = minimal_triangle_sphere(t[0], t[1], t[2]);
        const auto cc = circumcenter(t[0], t[1], t[2]);
        CHECK(c.radius <= cc.radius * (1 + 1e-12));
        for (const auto& v : t) CHECK(distance(v, c.center) <= c.radius * (1 + 1e-12));
    }
}
