#include "spherecol/detect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spherecol/predicates.hpp"

namespace spherecol {

static_assert(sizeof(Vec3) == 3 * sizeof(double), "vertex arrays are read as packed xyz");

Method parse_method(std::string_view name) {
    if (name == "circumsphere") return Method::Circumsphere;
    if (name == "bounding-ball") return Method::BoundingBall;
    if (name == "polygon-exact") return Method::PolygonExact;
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Circumsphere: return "circumsphere";
        case Method::BoundingBall: return "bounding-ball";
        case Method::PolygonExact: return "polygon-exact";
    }
    return "?";
}

ConeMode parse_cone_mode(std::string_view name) {
    if (name == "one-sided") return ConeMode::OneSided;
    if (name == "two-sided") return ConeMode::TwoSided;
    throw std::invalid_argument("unknown cone mode '" + std::string(name) + "'");
}

std::string_view to_string(ConeMode m) { return m == ConeMode::OneSided ? "one-sided" : "two-sided"; }

BoundingSphere object_bounding_sphere(const TriangleMesh& mesh) {
    if (mesh.vertices.empty()) throw std::invalid_argument("bounding sphere of an empty mesh");
    const auto& k = simd::kernels();
    const auto* xyz = &mesh.vertices.front().x;
    const auto n = mesh.vertices.size();
    double sum[3];
    k.sum_points(xyz, n, sum);
    const Vec3 c{sum[0] / static_cast<double>(n), sum[1] / static_cast<double>(n), sum[2] / static_cast<double>(n)};
    return {c, std::sqrt(k.max_dist_sq(xyz, n, c.x, c.y, c.z)), mesh.object_id};
}

BoundingSphere cover_sphere(const simd::SphereBatch& batch, const Vec3& center) {
    double r = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) r = std::max(r, distance(batch.center(i), center) + batch.r[i]);
    return {center, r, {}};
}

std::vector<CandidatePair> broad_phase(std::span<const BoundingSphere> spheres) {
    std::vector<CandidatePair> out;
    for (std::uint32_t a = 0; a < spheres.size(); ++a) {
        for (std::uint32_t b = a + 1; b < spheres.size(); ++b) {
            if (distance(spheres[a].center, spheres[b].center) <= spheres[a].radius + spheres[b].radius) {
                out.push_back({a, b});
            }
        }
    }
    return out;
}

std::optional<Contact> sphere_overlap(const Vec3& ca, double ra, const Vec3& cb, double rb, const Vec3& fallback_normal) {
    const Vec3 d = cb - ca;
    const double dist = norm(d);
    if (!(dist < ra + rb)) return std::nullopt;
    Contact c;
    c.normal = dist < 1e-12 ? normalized(fallback_normal) : d / dist;
    c.depth = ra + rb - dist;
    c.point = (ca + cb) * 0.5;
    c.center_a = ca;
    c.radius_a = ra;
    c.center_b = cb;
    c.radius_b = rb;
    return c;
}

namespace {

Vec3 build_centroid(const Circumsphere& s) {
    return triangle_centroid(s.ref_vertices[0], s.ref_vertices[1], s.ref_vertices[2]);
}

Vec3 current_centroid(const TriangleMesh& mesh, std::uint32_t t) {
    const auto v = mesh.corners(t);
    return triangle_centroid(v[0], v[1], v[2]);
}

}  // namespace

std::optional<Contact> sphere_overlap(const Circumsphere& a, const Circumsphere& b) {
    auto c = sphere_overlap(a.center, a.radius, b.center, b.radius, a.normal);
    if (c) {
        c->tri_a.triangle = a.triangle;
        c->tri_b.triangle = b.triangle;
        c->offset_a = a.center - build_centroid(a);
        c->offset_b = b.center - build_centroid(b);
    }
    return c;
}

std::optional<Contact> cone_validate(const Contact& contact, const Circumsphere& a, const Circumsphere& b,
                                     const Vec3& normal_a, const Vec3& normal_b, double tol, ConeMode mode) {
    if (angle_between(normal_a, contact.normal) > a.safety_angle + tol) return std::nullopt;
    if (mode == ConeMode::TwoSided && angle_between(normal_b, -contact.normal) > b.safety_angle + tol) {
        return std::nullopt;
    }
    Contact out = contact;
    out.validated = true;
    return out;
}

BodyView make_view(std::uint32_t object, const TriangleMesh& mesh, const SphereSet& set) {
    BodyView v;
    v.object = object;
    v.mesh = &mesh;
    v.batch = &set.batch;
    v.spheres = &set.spheres;
    v.cover = cover_sphere(set.batch, object_bounding_sphere(mesh).center);
    return v;
}

BodyView make_view(std::uint32_t object, const TriangleMesh& mesh, const simd::SphereBatch& minimal) {
    BodyView v;
    v.object = object;
    v.mesh = &mesh;
    v.batch = &minimal;
    v.cover = cover_sphere(minimal, object_bounding_sphere(mesh).center);
    return v;
}

namespace {

bool shares_vertex(const Triangle& s, const Triangle& t) {
    for (auto i : s) {
        if (i == t[0] || i == t[1] || i == t[2]) return true;
    }
    return false;
}

bool same_body(const BodyView& a, const BodyView& b) { return a.object == b.object && a.mesh == b.mesh; }

// Calls f(i, j) for every overlapping sphere pair, ascending in (i, j).
template <class F>
void for_each_overlap(const BodyView& a, const BodyView& b, F&& f) {
    const auto& ba = *a.batch;
    const auto& bb = *b.batch;
    thread_local simd::HitBuffer hits;

    if (same_body(a, b)) {
        const auto& tris = a.mesh->triangles;
        for (std::uint32_t i = 0; i < ba.size(); ++i) {
            simd::overlap_indices(ba, i + 1, ba.size(), ba.center(i), ba.r[i], hits);
            for (auto j : hits) {
                if (!shares_vertex(tris[i], tris[j])) f(i, j);
            }
        }
        return;
    }

    thread_local simd::HitBuffer sa, sb;
    simd::overlap_indices(ba, b.cover.center, b.cover.radius, sa);
    if (sa.empty()) return;
    simd::overlap_indices(bb, a.cover.center, a.cover.radius, sb);
    if (sb.empty()) return;

    thread_local simd::SphereBatch compact;
    compact.clear();
    for (auto j : sb) compact.push_back(bb.center(j), bb.r[j]);
    for (auto i : sa) {
        simd::overlap_indices(compact, ba.center(i), ba.r[i], hits);
        for (auto k : hits) f(i, sb[k]);
    }
}

Vec3 tri_normal(const TriangleMesh& mesh, std::uint32_t t) {
    const auto v = mesh.corners(t);
    return triangle_normal(v[0], v[1], v[2]);
}

std::optional<Contact> minimal_contact(const BodyView& a, std::uint32_t i, const BodyView& b, std::uint32_t j) {
    auto c = sphere_overlap(a.batch->center(i), a.batch->r[i], b.batch->center(j), b.batch->r[j], tri_normal(*a.mesh, i));
    if (c) {
        c->tri_a = {a.object, i};
        c->tri_b = {b.object, j};
        c->offset_a = c->center_a - current_centroid(*a.mesh, i);
        c->offset_b = c->center_b - current_centroid(*b.mesh, j);
    }
    return c;
}

struct Box {
    Vec3 lo, hi;
};

Box triangle_box(const std::array<Vec3, 3>& t) {
    Box b{t[0], t[0]};
    for (int v = 1; v < 3; ++v) {
        for (int k = 0; k < 3; ++k) {
            b.lo[k] = std::min(b.lo[k], t[v][k]);
            b.hi[k] = std::max(b.hi[k], t[v][k]);
        }
    }
    return b;
}

bool boxes_overlap(const Box& s, const Box& t) {
    return !(s.hi.x < t.lo.x || t.hi.x < s.lo.x || s.hi.y < t.lo.y || t.hi.y < s.lo.y || s.hi.z < t.lo.z ||
             t.hi.z < s.lo.z);
}

// The polygon baseline has no per-triangle spheres: after culling against the
// other body's cover sphere it tests every remaining triangle box pair.
template <class F>
void for_each_box_overlap(const BodyView& a, const BodyView& b, F&& f) {
    thread_local std::vector<Box> boxes_b;
    thread_local std::vector<std::uint32_t> ids_b;
    const auto& ma = *a.mesh;
    const auto& mb = *b.mesh;

    if (same_body(a, b)) {
        boxes_b.resize(ma.triangle_count());
        for (std::uint32_t t = 0; t < ma.triangle_count(); ++t) boxes_b[t] = triangle_box(ma.corners(t));
        for (std::uint32_t i = 0; i < ma.triangle_count(); ++i) {
            for (std::uint32_t j = i + 1; j < ma.triangle_count(); ++j) {
                if (boxes_overlap(boxes_b[i], boxes_b[j]) && !shares_vertex(ma.triangles[i], ma.triangles[j])) f(i, j);
            }
        }
        return;
    }

    thread_local simd::HitBuffer sa, sb;
    simd::overlap_indices(*a.batch, b.cover.center, b.cover.radius, sa);
    if (sa.empty()) return;
    simd::overlap_indices(*b.batch, a.cover.center, a.cover.radius, sb);
    if (sb.empty()) return;

    boxes_b.clear();
    ids_b.assign(sb.begin(), sb.end());
    for (auto j : ids_b) boxes_b.push_back(triangle_box(mb.corners(j)));
    for (auto i : sa) {
        const Box bi = triangle_box(ma.corners(i));
        for (std::size_t k = 0; k < boxes_b.size(); ++k) {
            if (boxes_overlap(bi, boxes_b[k])) f(i, ids_b[k]);
        }
    }
}

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection 5.1.5).
Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;
    const Vec3 bp = p - b;
    const double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return b;
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
    const Vec3 cp = p - c;
    const double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return c;
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

}  // namespace

NarrowResult narrow_phase(const BodyView& a, const BodyView& b, const DetectParams& params) {
    NarrowResult out;
    const auto& sa = *a.spheres;
    const auto& sb = *b.spheres;
    for_each_overlap(a, b, [&](std::uint32_t i, std::uint32_t j) {
        auto raw = sphere_overlap(sa[i], sb[j]);
        if (!raw) return;
        ++out.raw;
        raw->tri_a.object = a.object;
        raw->tri_b.object = b.object;
        if (auto ok = cone_validate(*raw, sa[i], sb[j], sa[i].normal, sb[j].normal, params.cone_tolerance,
                                    params.cone_mode)) {
            out.contacts.push_back(*ok);
        }
    });
    return out;
}

NarrowResult narrow_phase(const CandidatePair& pair, std::span<const BodyView> bodies, const DetectParams& params) {
    return narrow_phase(bodies[pair.object_a], bodies[pair.object_b], params);
}

simd::SphereBatch minimal_sphere_batch(const TriangleMesh& mesh) {
    simd::SphereBatch batch;
    batch.resize(mesh.triangle_count());
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto v = mesh.corners(t);
        const Circle c = minimal_triangle_sphere(v[0], v[1], v[2]);
        batch.set(t, c.center, c.radius);
    }
    return batch;
}

NarrowResult baseline_bounding_ball(const BodyView& a, const BodyView& b) {
    NarrowResult out;
    for_each_overlap(a, b, [&](std::uint32_t i, std::uint32_t j) {
        auto c = minimal_contact(a, i, b, j);
        if (!c) return;
        ++out.raw;
        c->validated = true;
        out.contacts.push_back(*c);
    });
    return out;
}

NarrowResult baseline_polygon_exact(const BodyView& a, const BodyView& b) {
    NarrowResult out;
    for_each_box_overlap(a, b, [&](std::uint32_t i, std::uint32_t j) {
        const auto ta = a.mesh->corners(i);
        const auto tb = b.mesh->corners(j);
        ++out.raw;
        if (!exact_tri_tri(ta, tb)) return;
        auto c = minimal_contact(a, i, b, j);
        if (!c) return;
        c->validated = true;
        out.contacts.push_back(*c);
    });
    return out;
}

NarrowResult detect_pair(Method method, const BodyView& a, const BodyView& b, const DetectParams& params) {
    switch (method) {
        case Method::Circumsphere: return narrow_phase(a, b, params);
        case Method::BoundingBall: return baseline_bounding_ball(a, b);
        case Method::PolygonExact: return baseline_polygon_exact(a, b);
    }
    return {};
}

bool inside_obstacle(const Obstacle& obstacle, const Vec3& p) {
    if (const auto* s = std::get_if<SphereObstacle>(&obstacle)) return distance(p, s->center) < s->radius;
    const auto& h = std::get<PlaneObstacle>(obstacle);
    return dot(h.normal, p) < h.offset;
}

NarrowResult obstacle_contacts(const BodyView& a, const Obstacle& obstacle, std::uint32_t obstacle_index, Method method,
                               const DetectParams& params) {
    NarrowResult out;
    const auto& batch = *a.batch;
    const bool circum = method == Method::Circumsphere;

    auto emit = [&](std::uint32_t i, Contact c) {
        c.tri_a = {a.object, i};
        c.tri_b = {obstacle_index, kNone};
        c.offset_a = c.center_a - (circum ? build_centroid((*a.spheres)[i]) : current_centroid(*a.mesh, i));
        ++out.raw;
        if (circum) {
            const auto& s = (*a.spheres)[i];
            // The obstacle side has no cone; only a's is checked.
            if (angle_between(s.normal, c.normal) > s.safety_angle + params.cone_tolerance) return;
        } else if (method == Method::PolygonExact) {
            const auto v = a.mesh->corners(i);
            bool hit = false;
            if (const auto* so = std::get_if<SphereObstacle>(&obstacle)) {
                hit = norm_sq(closest_on_triangle(so->center, v[0], v[1], v[2]) - so->center) <= so->radius * so->radius;
            } else {
                const auto& h = std::get<PlaneObstacle>(obstacle);
                for (const auto& p : v) hit = hit || dot(h.normal, p) <= h.offset;
            }
            if (!hit) return;
        }
        c.validated = true;
        out.contacts.push_back(c);
    };

    auto fallback = [&](std::uint32_t i) { return circum ? (*a.spheres)[i].normal : tri_normal(*a.mesh, i); };

    if (const auto* so = std::get_if<SphereObstacle>(&obstacle)) {
        thread_local simd::HitBuffer hits;
        simd::overlap_indices(batch, so->center, so->radius, hits);
        for (auto i : hits) {
            if (auto c = sphere_overlap(batch.center(i), batch.r[i], so->center, so->radius, fallback(i))) emit(i, *c);
        }
        return out;
    }

    const auto& h = std::get<PlaneObstacle>(obstacle);
    for (std::uint32_t i = 0; i < batch.size(); ++i) {
        const Vec3 c = batch.center(i);
        const double s = dot(h.normal, c) - h.offset;
        if (!(s < batch.r[i])) continue;
        Contact k;
        k.normal = -h.normal;
        k.depth = batch.r[i] - s;
        k.center_a = c;
        k.radius_a = batch.r[i];
        k.center_b = c - s * h.normal;
        k.radius_b = 0.0;
        k.point = k.center_b;
        emit(i, k);
    }
    return out;
}

}  // namespace spherecol
