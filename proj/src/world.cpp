#include "spherecol/world.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "spherecol/generators.hpp"

namespace spherecol {

namespace {

std::vector<std::uint32_t> pinned_vertices(const BodySpec& spec, const TriangleMesh& mesh) {
    std::vector<std::uint32_t> out;
    const auto n = static_cast<std::uint32_t>(mesh.vertex_count());
    if (spec.pinned == "none" || spec.pinned.empty()) return out;
    if (spec.pinned == "all") {
        for (std::uint32_t i = 0; i < n; ++i) out.push_back(i);
        return out;
    }
    if (spec.pinned == "corners") {
        if (spec.generator != "cloth") throw ConfigError("pinned = corners needs a cloth body");
        const auto r = static_cast<std::uint32_t>(spec.resolution);
        return {0, r - 1, r * (r - 1), r * r - 1};
    }
    std::string text = spec.pinned;
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || v >= n) throw ConfigError("bad pinned vertex '" + tok + "' in body " + spec.name);
        out.push_back(static_cast<std::uint32_t>(v));
    }
    return out;
}

TriangleMesh body_mesh(const BodySpec& spec) {
    if (spec.generator == "cloth") return make_cloth(spec.resolution, spec.size, {}, spec.facing_up, spec.name);
    if (spec.generator == "icosphere") return make_icosphere(spec.subdivisions, spec.radius, {}, spec.name);
    if (spec.generator == "mesh") {
        auto m = load_mesh(spec.path);
        m.object_id = spec.name;
        return m;
    }
    throw ConfigError("unknown generator '" + spec.generator + "'");
}

void add_edge_constraints(World& world, const Body& body, double stiffness) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, bool> seen;
    for (const auto& t : body.mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            const auto key = std::minmax(t[k], t[(k + 1) % 3]);
            if (!seen.emplace(key, true).second) continue;
            const double rest = distance(body.mesh.vertices[key.first], body.mesh.vertices[key.second]);
            world.distances.push_back(
                {body.first_particle + key.first, body.first_particle + key.second, rest, stiffness});
        }
    }
}

// Shells without bending resistance crumple on impact. A strut from every
// vertex to its farthest vertex keeps a closed body from folding flat.
void add_brace_constraints(World& world, const Body& body, double stiffness) {
    const auto& v = body.mesh.vertices;
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (std::uint32_t i = 0; i < v.size(); ++i) {
        std::uint32_t far = i;
        double best = -1.0;
        for (std::uint32_t j = 0; j < v.size(); ++j) {
            const double d = norm_sq(v[i] - v[j]);
            if (d > best) {
                best = d;
                far = j;
            }
        }
        const auto key = std::minmax(i, far);
        if (key.first == key.second || !seen.insert(key).second) continue;
        world.distances.push_back(
            {body.first_particle + key.first, body.first_particle + key.second, std::sqrt(best), stiffness});
    }
}

bool near_obstacle(const BoundingSphere& cover, const Obstacle& obstacle) {
    if (const auto* s = std::get_if<SphereObstacle>(&obstacle)) {
        return distance(cover.center, s->center) <= cover.radius + s->radius;
    }
    const auto& p = std::get<PlaneObstacle>(obstacle);
    return dot(p.normal, cover.center) - p.offset <= cover.radius;
}

}  // namespace

World generate_scene(const SceneConfig& config) {
    config.validate();
    World w;
    w.config = config;
    w.obstacles = config.obstacles;
    w.solver.dt = config.dt;
    w.solver.iterations = config.iterations;
    w.solver.gravity = config.gravity;
    w.solver.damping = config.damping;
    w.solver.validate();
    w.detect.cone_tolerance = config.cone_tolerance_deg * std::numbers::pi / 180.0;
    w.detect.cone_mode = config.cone_mode;

    for (std::size_t bi = 0; bi < config.bodies.size(); ++bi) {
        const auto& spec = config.bodies[bi];
        Body body;
        body.name = spec.name;
        body.mesh = body_mesh(spec);
        for (auto& v : body.mesh.vertices) v += spec.translate;
        if (spec.jitter > 0.0) {
            std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                              static_cast<std::uint32_t>(bi)};
            std::mt19937_64 rng(seq);
            std::uniform_real_distribution<double> u(-spec.jitter, spec.jitter);
            for (auto& v : body.mesh.vertices) {
                const double dx = u(rng), dy = u(rng), dz = u(rng);
                v += Vec3{dx, dy, dz};
            }
        }
        validate_mesh(body.mesh);

        body.adjacency = build_adjacency(body.mesh);
        body.curvature = compute_curvature(build_dual_mesh(body.mesh, body.adjacency));
        body.closed = body.adjacency.boundary_edges == 0;
        body.self_collision = spec.self_collision.value_or(config.self_collision);

        body.params = default_sphere_params(body.mesh);
        if (config.k_threshold) body.params.k_threshold = *config.k_threshold;
        body.params.flat_scale = config.flat_scale;
        body.params.curv_radius_min_frac = config.curv_radius_min_frac;
        body.params.curv_radius_max_frac = config.curv_radius_max_frac;
        body.params.update_threshold_d = config.update_threshold_d;
        body.params.cone_tolerance = w.detect.cone_tolerance;
        try {
            body.params.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }

        body.first_particle = static_cast<std::uint32_t>(w.particles.size());
        const double w_free = static_cast<double>(body.mesh.vertex_count()) / spec.mass;
        std::vector<std::uint8_t> pinned(body.mesh.vertex_count(), 0);
        for (auto i : pinned_vertices(spec, body.mesh)) pinned[i] = 1;
        for (std::size_t i = 0; i < body.mesh.vertex_count(); ++i) {
            w.particles.add(body.mesh.vertices[i], pinned[i] ? 0.0 : w_free, spec.velocity);
        }
        add_edge_constraints(w, body, spec.stiffness);
        if (spec.braced) add_brace_constraints(w, body, spec.stiffness);

        body.spheres = build_sphere_set(body.mesh, body.curvature, body.params, 0);
        body.minimal = minimal_sphere_batch(body.mesh);
        body.last_synced = body.mesh.vertices;
        w.bodies.push_back(std::move(body));
    }
    w.particles.validate();
    return w;
}

FrameReport step_world(World& world) {
    using Clock = std::chrono::steady_clock;
    FrameReport report;
    auto& m = report.metrics;
    auto& ps = world.particles;
    const auto method = world.config.method;
    const std::vector<Vec3> prev = ps.positions;

    m.frame = ++world.frame;
    predict(ps, world.solver);
    for (auto& body : world.bodies) {
        const auto nv = body.mesh.vertex_count();
        std::copy_n(ps.predicted.begin() + body.first_particle, nv, body.mesh.vertices.begin());
        for (const auto& t : body.mesh.triangles) {
            for (auto v : t) {
                if (body.mesh.vertices[v] != body.last_synced[v]) {
                    ++m.moved_triangles;
                    break;
                }
            }
        }
        body.last_synced = body.mesh.vertices;
    }

    const auto t0 = Clock::now();
    std::vector<BodyView> views;
    views.reserve(world.bodies.size());
    for (std::uint32_t bi = 0; bi < world.bodies.size(); ++bi) {
        auto& body = world.bodies[bi];
        if (method == Method::Circumsphere) {
            m.rebuild_count += update_spheres(body.spheres, body.mesh, body.params, body.curvature, world.frame);
            views.push_back(make_view(bi, body.mesh, body.spheres));
        } else {
            body.minimal = minimal_sphere_batch(body.mesh);
            m.rebuild_count += body.mesh.triangle_count();
            views.push_back(make_view(bi, body.mesh, body.minimal));
        }
    }
    std::vector<BoundingSphere> covers;
    covers.reserve(views.size());
    for (const auto& v : views) covers.push_back(v.cover);

    auto& contacts = report.contacts;
    auto absorb = [&](NarrowResult&& r) {
        m.raw_contacts += r.raw;
        contacts.insert(contacts.end(), r.contacts.begin(), r.contacts.end());
    };
    for (const auto& pair : broad_phase(covers)) {
        absorb(detect_pair(method, views[pair.object_a], views[pair.object_b], world.detect));
    }
    for (std::uint32_t bi = 0; bi < views.size(); ++bi) {
        if (world.bodies[bi].self_collision) absorb(detect_pair(method, views[bi], views[bi], world.detect));
    }
    for (std::uint32_t bi = 0; bi < views.size(); ++bi) {
        for (std::uint32_t oi = 0; oi < world.obstacles.size(); ++oi) {
            if (!near_obstacle(views[bi].cover, world.obstacles[oi])) continue;
            absorb(obstacle_contacts(views[bi], world.obstacles[oi], oi, method, world.detect));
        }
    }
    const auto t1 = Clock::now();

    std::vector<CollisionConstraint> collisions;
    collisions.reserve(contacts.size());
    for (const auto& c : contacts) {
        const auto pa = world.bodies[c.tri_a.object].particles(c.tri_a.triangle);
        if (c.tri_b.triangle != kNone) {
            collisions.push_back(make_collision(c, pa, world.bodies[c.tri_b.object].particles(c.tri_b.triangle)));
        } else {
            std::visit([&](const auto& o) { collisions.push_back(make_collision(c, pa, o)); },
                       world.obstacles[c.tri_b.object]);
        }
    }
    report.trace = solve_step(ps, world.distances, collisions, world.solver, world.frame);
    const auto t2 = Clock::now();

    m.detect_time_s = std::chrono::duration<double>(t1 - t0).count();
    m.solve_time_s = std::chrono::duration<double>(t2 - t1).count();
    m.validated_contacts = contacts.size();

    for (auto& body : world.bodies) {
        std::copy_n(ps.positions.begin() + body.first_particle, body.mesh.vertex_count(), body.mesh.vertices.begin());
    }

    std::vector<std::uint32_t> touched;
    for (const auto& c : collisions) {
        touched.insert(touched.end(), c.particles_a.begin(), c.particles_a.end());
        if (c.target == CollisionTarget::Triangle) {
            touched.insert(touched.end(), c.particles_b.begin(), c.particles_b.end());
        }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    m.stability_m = stability_metric(prev, ps.positions, touched);
    m.tunneled_vertices = tunneling_check(world);
    return report;
}

double stability_metric(std::span<const Vec3> prev, std::span<const Vec3> now, std::span<const std::uint32_t> vertices) {
    if (vertices.empty()) return 0.0;
    double sum = 0.0;
    for (auto v : vertices) sum += distance(now[v], prev[v]);
    return sum / static_cast<double>(vertices.size());
}

namespace {

// Rays leave along (1, kShearY, kShearZ); points sharing a ray share the
// projection (y - kShearY x, z - kShearZ x).
constexpr double kShearY = 0.1234567891;
constexpr double kShearZ = 0.0765432109;
const Vec3 kRayDir{1.0, kShearY, kShearZ};

std::array<double, 2> project(const Vec3& p) { return {p.y - kShearY * p.x, p.z - kShearZ * p.x}; }

double cross2(const std::array<double, 2>& o, const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

}  // namespace

ClosedMeshTest::ClosedMeshTest(const TriangleMesh& mesh, bool verify) : mesh_(&mesh) {
    if (verify) {
        const auto adj = build_adjacency(mesh);
        if (adj.boundary_edges != 0) {
            throw std::invalid_argument("mesh '" + mesh.object_id + "' is open (" +
                                        std::to_string(adj.boundary_edges) + " boundary edges)");
        }
    }
    if (mesh.vertices.empty()) return;
    lo_ = hi_ = project(mesh.vertices.front());
    for (const auto& v : mesh.vertices) {
        const auto q = project(v);
        for (int k = 0; k < 2; ++k) {
            lo_[k] = std::min(lo_[k], q[k]);
            hi_[k] = std::max(hi_[k], q[k]);
        }
    }
    cells_ = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(mesh.triangle_count()))), 1, 128);
    grid_.assign(static_cast<std::size_t>(cells_ * cells_), {});
    auto cell = [&](double v, int k) {
        const double span = hi_[k] - lo_[k];
        if (!(span > 0.0)) return 0;
        return std::clamp(static_cast<int>((v - lo_[k]) / span * cells_), 0, cells_ - 1);
    };
    for (std::uint32_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto c = mesh.corners(t);
        std::array<double, 2> tlo = project(c[0]), thi = tlo;
        for (int i = 1; i < 3; ++i) {
            const auto q = project(c[i]);
            for (int k = 0; k < 2; ++k) {
                tlo[k] = std::min(tlo[k], q[k]);
                thi[k] = std::max(thi[k], q[k]);
            }
        }
        for (int gy = cell(tlo[1], 1); gy <= cell(thi[1], 1); ++gy) {
            for (int gx = cell(tlo[0], 0); gx <= cell(thi[0], 0); ++gx) {
                grid_[static_cast<std::size_t>(gy * cells_ + gx)].push_back(t);
            }
        }
    }
}

bool ClosedMeshTest::inside(const Vec3& p) const {
    const auto q = project(p);
    for (int k = 0; k < 2; ++k) {
        if (q[k] < lo_[k] || q[k] > hi_[k]) return false;
    }
    auto cell = [&](double v, int k) {
        const double span = hi_[k] - lo_[k];
        if (!(span > 0.0)) return 0;
        return std::clamp(static_cast<int>((v - lo_[k]) / span * cells_), 0, cells_ - 1);
    };
    const auto& bucket = grid_[static_cast<std::size_t>(cell(q[1], 1) * cells_ + cell(q[0], 0))];
    int crossings = 0;
    for (auto t : bucket) {
        const auto c = mesh_->corners(t);
        const auto a = project(c[0]), b = project(c[1]), d = project(c[2]);
        const double s0 = cross2(a, b, q), s1 = cross2(b, d, q), s2 = cross2(d, a, q);
        const bool in = (s0 > 0 && s1 > 0 && s2 > 0) || (s0 < 0 && s1 < 0 && s2 < 0);
        if (!in) continue;
        const Vec3 n = cross(c[1] - c[0], c[2] - c[0]);
        const double denom = dot(n, kRayDir);
        if (denom == 0.0) continue;
        if (dot(n, c[0] - p) / denom > 0.0) ++crossings;
    }
    return (crossings & 1) != 0;
}

std::size_t tunneling_check(std::span<const Vec3> points, std::span<const Obstacle> obstacles,
                            std::span<const TriangleMesh> closed_meshes) {
    std::vector<ClosedMeshTest> tests;
    std::vector<BoundingSphere> bounds;
    for (const auto& m : closed_meshes) {
        tests.emplace_back(m, true);
        bounds.push_back(object_bounding_sphere(m));
    }
    std::size_t count = 0;
    for (const auto& p : points) {
        bool hit = std::any_of(obstacles.begin(), obstacles.end(), [&](const auto& o) { return inside_obstacle(o, p); });
        for (std::size_t k = 0; !hit && k < tests.size(); ++k) {
            hit = distance(p, bounds[k].center) < bounds[k].radius && tests[k].inside(p);
        }
        if (hit) ++count;
    }
    return count;
}

std::size_t tunneling_check(const World& world) {
    std::vector<ClosedMeshTest> tests;
    std::vector<BoundingSphere> bounds;
    std::vector<std::uint32_t> owner;
    for (std::uint32_t bi = 0; bi < world.bodies.size(); ++bi) {
        const auto& body = world.bodies[bi];
        if (!body.closed) continue;
        tests.emplace_back(body.mesh, false);
        bounds.push_back(object_bounding_sphere(body.mesh));
        owner.push_back(bi);
    }
    std::size_t count = 0;
    for (std::uint32_t bi = 0; bi < world.bodies.size(); ++bi) {
        const auto& body = world.bodies[bi];
        for (const auto& p : body.mesh.vertices) {
            bool hit = std::any_of(world.obstacles.begin(), world.obstacles.end(),
                                   [&](const auto& o) { return inside_obstacle(o, p); });
            for (std::size_t k = 0; !hit && k < tests.size(); ++k) {
                if (owner[k] == bi) continue;
                hit = distance(p, bounds[k].center) < bounds[k].radius && tests[k].inside(p);
            }
            if (hit) ++count;
        }
    }
    return count;
}

}  // namespace spherecol
