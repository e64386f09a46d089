// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>

#include "spherecol/generators.hpp"
#include "spherecol/harness.hpp"
#include "spherecol/predicates.hpp"
#include "test_util.hpp"

using namespace spherecol;

namespace {

struct Verdict {
    bool ok = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

TriangleMesh single(const testutil::Tri& t) { return make_mesh({t[0], t[1], t[2]}, {{0, 1, 2}}); }

Verdict curvature_oracle() {
    const auto mesh = make_icosphere(3);
    const auto t0 = std::chrono::steady_clock::now();
    const auto field = compute_curvature(build_dual_mesh(mesh, build_adjacency(mesh)));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::size_t good = 0;
    for (double k : field.curvature) good += std::abs(k - 1.0) <= 0.15;
    const double frac = static_cast<double>(good) / static_cast<double>(field.curvature.size());
    return {frac >= 0.9 && secs < 1.0, fmt("%.1f%% within 0.15 of K=1, %.3f s", 100 * frac, secs)};
}

Verdict flatness() {
    const auto mesh = make_cloth(10, 1.0);
    const auto dual = build_dual_mesh(mesh, build_adjacency(mesh));
    const auto field = compute_curvature(dual);
    const auto params = default_sphere_params(mesh);
    const auto set = build_sphere_set(mesh, field, params, 0);
    double worst = 0.0;
    bool hermite_ok = true;
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        if (dual.interior[t]) hermite_ok &= hermite_factor(field.curvature[t], params.k_threshold) == 1.0;
        const auto c = mesh.corners(t);
        const double rc = circumcenter(c[0], c[1], c[2]).radius;
        worst = std::max(worst, std::abs(set.spheres[t].radius - params.flat_scale * rc) / (params.flat_scale * rc));
    }
    return {hermite_ok && worst <= 1e-9, fmt("hermite %s, worst radius error %.2e", hermite_ok ? "1" : "!=1", worst)};
}

Verdict incidence() {
    std::mt19937_64 rng(2025);
    std::uniform_real_distribution<double> scale(1.0, 2.0);
    double worst_inc = 0.0, worst_angle = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto t = testutil::random_triangle(rng, -5, 5);
        SphereParams p;
        p.flat_scale = scale(rng);
        const auto s = build_circumsphere(single(t), 0, 0.0, p, 0);
        for (const auto& v : t) worst_inc = std::max(worst_inc, std::abs(distance(v, s.center) - s.radius) / s.radius);
        const auto cc = circumcenter(t[0], t[1], t[2]);
        const double phi = std::sqrt(std::max(0.0, s.radius * s.radius - cc.radius * cc.radius));
        worst_angle = std::max(worst_angle, std::abs(s.safety_angle - std::atan2(cc.radius, phi)));
    }
    return {worst_inc <= 1e-6 && worst_angle <= 1e-9,
            fmt("worst incidence %.2e r, worst safety angle error %.2e", worst_inc, worst_angle)};
}

Verdict recall() {
    std::mt19937_64 rng(4);
    const SphereParams defaults;
    int found = 0, missed = 0, disagreements = 0, validated = 0;
    while (found < 1000) {
        const auto a = testutil::random_triangle(rng);
        const auto b = testutil::random_triangle(rng, -0.6, 0.6);
        const bool exact = exact_tri_tri(a, b);
        const auto oracle = testutil::oracle_tri_tri(a, b);
        if (oracle.margin >= 1e-9) {
            ++validated;
            disagreements += exact != oracle.intersect;
        }
        if (!exact) continue;
        ++found;
        const auto sa = build_circumsphere(single(a), 0, 0.0, defaults, 0);
        const auto sb = build_circumsphere(single(b), 0, 0.0, defaults, 0);
        missed += !sphere_overlap(sa, sb);
    }
    return {missed == 0 && disagreements == 0,
            fmt("%d/1000 flagged; exact predicate vs oracle: %d disagreements in %d pairs", 1000 - missed,
                disagreements, validated)};
}

Verdict cone_rejection() {
    const double h = std::sqrt(3.0) / 2;
    const testutil::Tri ta{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0.5, h, 0}};
    const testutil::Tri tb{Vec3{1, 0, 0}, Vec3{0, 0, 0}, Vec3{0.5, -h, 0}};
    SphereParams p;
    p.flat_scale = 2.0;
    const auto sa = build_circumsphere(single(ta), 0, 0.0, p, 0);
    const auto sb = build_circumsphere(single(tb), 0, 0.0, p, 0);
    const auto raw = sphere_overlap(sa, sb);
    const bool rejected =
        raw && !cone_validate(*raw, sa, sb, sa.normal, sb.normal, 5.0 * std::numbers::pi / 180.0, ConeMode::TwoSided);
    const auto ma = single(ta), mb = single(tb);
    const auto ba = minimal_sphere_batch(ma), bb = minimal_sphere_batch(mb);
    const auto baseline = baseline_bounding_ball(make_view(0, ma, ba), make_view(1, mb, bb));
    return {raw && rejected && baseline.contacts.size() == 1,
            fmt("spheres overlap: %s, cone rejects: %s, bounding ball contacts: %zu", raw ? "yes" : "no",
                rejected ? "yes" : "no", baseline.contacts.size())};
}

Verdict timing_order() {
    const auto scene = builtin_scene("two-sphere-impact");
    const Method methods[] = {Method::BoundingBall, Method::Circumsphere, Method::PolygonExact};
    std::size_t tris = 0;
    for (const auto& b : generate_scene(scene).bodies) tris += b.mesh.triangle_count();
    int held = 0;
    std::string times;
    for (int run = 0; run < 5; ++run) {
        const auto rows = compare_methods(scene, methods);
        const double bb = rows[0].summary.mean_detect_time_s;
        const double cs = rows[1].summary.mean_detect_time_s;
        const double pe = rows[2].summary.mean_detect_time_s;
        held += bb < cs && cs < pe;
        times += fmt(" [%.2f<%.2f<%.2f]", bb * 1e3, cs * 1e3, pe * 1e3);
    }
    return {held == 5, fmt("%zu triangles, ordering held %d/5, ms:", tris, held) + times};
}

Verdict d_trends() {
    const auto scene = builtin_scene("cloth-over-sphere");
    const auto rows = sweep_d(scene, kDefaultSweep);
    bool monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        monotone &= rows[i].summary.mean_rebuild_count <= rows[i - 1].summary.mean_rebuild_count;
    }
    const SweepRow* at07 = nullptr;
    const SweepRow* at20 = nullptr;
    for (const auto& r : rows) {
        if (r.d == 0.7) at07 = &r;
        if (r.d == 2.0) at20 = &r;
    }
    const bool stable = at07 && at20 && at07->summary.mean_stability_m <= at20->summary.mean_stability_m;
    std::size_t mismatched = 0;
    for (const auto& m : rows.front().frames) mismatched += m.rebuild_count != m.moved_triangles;
    std::string rebuilds;
    for (const auto& r : rows) rebuilds += fmt(" %.4g", r.summary.mean_rebuild_count);
    return {monotone && stable && mismatched == 0,
            fmt("rebuilds by d:%s; stability(0.7)=%.3g stability(2.0)=%.3g; d=0 mismatched frames %zu",
                rebuilds.c_str(), at07 ? at07->summary.mean_stability_m : -1.0,
                at20 ? at20->summary.mean_stability_m : -1.0, mismatched)};
}

Verdict tunneling() {
    auto scene = builtin_scene("cloth-over-sphere");
    scene.method = Method::Circumsphere;
    const bool setup = scene.bodies[0].resolution == 20 && scene.dt == 1.0 / 60.0 && scene.iterations == 10 &&
                       scene.frames == 300;
    const auto frames = run_scene(scene);
    std::size_t peak = 0;
    for (const auto& m : frames) peak = std::max(peak, m.tunneled_vertices);
    const auto final_count = frames.back().tunneled_vertices;
    return {setup && final_count == 0, fmt("final tunneled %zu (peak %zu) after %zu frames", final_count, peak,
                                           frames.size())};
}

Verdict pbd_invariants() {
    // Free flight: internal constraints only, equal masses, no gravity, no damping.
    auto flight = parse_scene("gravity = 0, 0, 0\ndamping = 1\n[body]\ngenerator = cloth\nresolution = 8\n");
    auto world = generate_scene(flight);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto& v : world.particles.velocities) v = {u(rng), u(rng), u(rng)};
    double worst = 0.0;
    for (int step = 0; step < 1000; ++step) {
        const Vec3 before = world.particles.momentum();
        predict(world.particles, world.solver);
        solve_step(world.particles, world.distances, {}, world.solver, static_cast<std::uint64_t>(step));
        worst = std::max(worst, norm(world.particles.momentum() - before) / std::max(norm(before), 1e-300));
    }

    auto pinned_scene = builtin_scene("cloth-over-sphere");
    pinned_scene.frames = 200;
    auto pw = generate_scene(pinned_scene);
    std::vector<std::pair<std::size_t, Vec3>> pins;
    for (std::size_t i = 0; i < pw.particles.size(); ++i) {
        if (pw.particles.inv_mass[i] == 0.0) pins.emplace_back(i, pw.particles.positions[i]);
    }
    bool still = !pins.empty();
    for (int f = 0; f < pinned_scene.frames; ++f) {
        step_world(pw);
        for (const auto& [i, p] : pins) {
            const auto& q = pw.particles.positions[i];
            still &= q.x == p.x && q.y == p.y && q.z == p.z;
        }
    }

    const auto dir = testutil::temp_dir("acceptance");
    auto det_scene = builtin_scene("cloth-over-sphere");
    det_scene.bodies[0].jitter = 0.001;
    det_scene.seed = 12345;
    run_scene(det_scene, dir / "a.csv");
    run_scene(det_scene, dir / "b.csv");
    const bool identical = testutil::slurp(dir / "a.det.csv") == testutil::slurp(dir / "b.det.csv");
    std::filesystem::remove_all(dir);

    return {worst < 1e-6 && still && identical,
            fmt("worst relative momentum change %.2e per step; %zu pins %s; det CSVs %s", worst, pins.size(),
                still ? "bit-stationary" : "moved", identical ? "identical" : "differ")};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"curvature oracle", curvature_oracle},
        {"flatness boundary condition", flatness},
        {"circumsphere incidence", incidence},
        {"detection recall", recall},
        {"cone false-positive rejection", cone_rejection},
        {"detection timing ordering", timing_order},
        {"d-threshold trends", d_trends},
        {"tunneling prevention", tunneling},
        {"PBD invariants", pbd_invariants},
    };
    int failures = 0;
    int n = 0;
    for (const auto& [name, check] : criteria) {
        ++n;
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += !v.ok;
        std::printf("%s %d %s: %s\n", v.ok ? "PASS" : "FAIL", n, name, v.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
