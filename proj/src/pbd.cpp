#include "spherecol/pbd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spherecol {

std::uint32_t ParticleState::add(const Vec3& p, double w, const Vec3& v) {
    positions.push_back(p);
    predicted.push_back(p);
    velocities.push_back(w > 0.0 ? v : Vec3{});
    inv_mass.push_back(w);
    return static_cast<std::uint32_t>(positions.size() - 1);
}

void ParticleState::validate() const {
    const auto n = positions.size();
    if (predicted.size() != n || velocities.size() != n || inv_mass.size() != n) {
        throw std::invalid_argument("particle arrays differ in length");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(inv_mass[i] >= 0.0) || !std::isfinite(inv_mass[i])) {
            throw std::invalid_argument("bad inverse mass at particle " + std::to_string(i));
        }
        if (!is_finite(positions[i]) || !is_finite(velocities[i])) {
            throw std::invalid_argument("non-finite state at particle " + std::to_string(i));
        }
    }
}

Vec3 ParticleState::momentum() const {
    Vec3 p;
    for (std::size_t i = 0; i < size(); ++i) {
        if (inv_mass[i] > 0.0) p += velocities[i] / inv_mass[i];
    }
    return p;
}

void SolverConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (!(stiffness >= 0.0 && stiffness <= 1.0)) throw std::invalid_argument("stiffness must lie in [0, 1]");
    if (!(damping >= 0.0 && damping <= 1.0)) throw std::invalid_argument("damping must lie in [0, 1]");
    if (!is_finite(gravity)) throw std::invalid_argument("gravity must be finite");
}

namespace {

Vec3 centroid(const std::array<std::uint32_t, 3>& idx, const std::vector<Vec3>& p) {
    return (p[idx[0]] + p[idx[1]] + p[idx[2]]) / 3.0;
}

double weight_sum(const std::array<std::uint32_t, 3>& idx, const std::vector<double>& w) {
    return w[idx[0]] + w[idx[1]] + w[idx[2]];
}

CollisionConstraint base_collision(const Contact& contact, const Triangle& pa) {
    CollisionConstraint c;
    c.contact = contact;
    c.particles_a = pa;
    c.offset_a = contact.offset_a;
    return c;
}

}  // namespace

CollisionConstraint make_collision(const Contact& contact, const Triangle& pa, const Triangle& pb) {
    auto c = base_collision(contact, pa);
    c.particles_b = pb;
    c.offset_b = contact.offset_b;
    c.target = CollisionTarget::Triangle;
    return c;
}

CollisionConstraint make_collision(const Contact& contact, const Triangle& pa, const SphereObstacle& obstacle) {
    auto c = base_collision(contact, pa);
    c.offset_b = obstacle.center;
    c.contact.center_b = obstacle.center;
    c.contact.radius_b = obstacle.radius;
    c.target = CollisionTarget::Sphere;
    return c;
}

CollisionConstraint make_collision(const Contact& contact, const Triangle& pa, const PlaneObstacle& obstacle) {
    auto c = base_collision(contact, pa);
    c.target = CollisionTarget::Plane;
    c.plane_normal = obstacle.normal;
    c.plane_offset = obstacle.offset;
    return c;
}

void predict(ParticleState& state, const SolverConfig& config) {
    const double dt = config.dt;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state.inv_mass[i] > 0.0) {
            state.predicted[i] = state.positions[i] + state.velocities[i] * dt + config.gravity * (dt * dt);
        } else {
            state.predicted[i] = state.positions[i];
        }
    }
}

double constraint_value(const DistanceConstraint& c, const ParticleState& state) {
    return distance(state.predicted[c.i], state.predicted[c.j]) - c.rest_length;
}

namespace {

struct CollisionGeometry {
    double value = 0.0;
    Vec3 normal;  // direction in which side b separates from side a
};

CollisionGeometry collision_geometry(const CollisionConstraint& c, const ParticleState& state) {
    const Vec3 ca = centroid(c.particles_a, state.predicted) + c.offset_a;
    const double ra = c.contact.radius_a;
    if (c.target == CollisionTarget::Plane) {
        return {dot(c.plane_normal, ca) - c.plane_offset - ra, -c.plane_normal};
    }
    const Vec3 cb =
        c.target == CollisionTarget::Sphere ? c.offset_b : centroid(c.particles_b, state.predicted) + c.offset_b;
    const Vec3 d = cb - ca;
    const double dist = norm(d);
    const Vec3 n = dist < 1e-12 ? c.contact.normal : d / dist;
    return {dist - (ra + c.contact.radius_b), n};
}

}  // namespace

double constraint_value(const CollisionConstraint& c, const ParticleState& state) {
    return collision_geometry(c, state).value;
}

void project_distance(const DistanceConstraint& c, ParticleState& state) {
    auto& p = state.predicted;
    const double wi = state.inv_mass[c.i];
    const double wj = state.inv_mass[c.j];
    const double wsum = wi + wj;
    if (wsum == 0.0) return;
    const Vec3 diff = p[c.i] - p[c.j];
    const double len = norm(diff);
    if (len < 1e-12) return;
    const double value = len - c.rest_length;
    const Vec3 d = diff / len;
    p[c.i] -= (c.stiffness * (wi / wsum) * value) * d;
    p[c.j] += (c.stiffness * (wj / wsum) * value) * d;
}

void project_collision(const CollisionConstraint& c, ParticleState& state) {
    const auto g = collision_geometry(c, state);
    if (g.value >= 0.0) return;
    const double wa = weight_sum(c.particles_a, state.inv_mass);
    const double wb = c.target == CollisionTarget::Triangle ? weight_sum(c.particles_b, state.inv_mass) : 0.0;
    const double wsum = wa + wb;
    if (wsum == 0.0) return;
    // Gradient of the gap is n/3 per particle, so each particle gets 3 w_i / W.
    const double scale = -g.value * 3.0 / wsum;
    for (auto i : c.particles_a) state.predicted[i] -= (scale * state.inv_mass[i]) * g.normal;
    if (c.target == CollisionTarget::Triangle) {
        for (auto i : c.particles_b) state.predicted[i] += (scale * state.inv_mass[i]) * g.normal;
    }
}

namespace {

double max_violation(std::span<const DistanceConstraint> distances, std::span<const CollisionConstraint> collisions,
                     const ParticleState& state) {
    double worst = 0.0;
    for (const auto& c : distances) worst = std::max(worst, std::abs(constraint_value(c, state)));
    for (const auto& c : collisions) worst = std::max(worst, -constraint_value(c, state));
    return worst;
}

}  // namespace

SolveTrace solve_step(ParticleState& state, std::span<const DistanceConstraint> distances,
                      std::span<const CollisionConstraint> collisions, const SolverConfig& config,
                      std::uint64_t frame) {
    SolveTrace trace;
    trace.max_violation.reserve(static_cast<std::size_t>(config.iterations) + 1);
    trace.max_violation.push_back(max_violation(distances, collisions, state));
    for (int it = 0; it < config.iterations; ++it) {
        for (const auto& c : distances) project_distance(c, state);
        for (const auto& c : collisions) project_collision(c, state);
        trace.max_violation.push_back(max_violation(distances, collisions, state));
    }

    for (std::size_t i = 0; i < state.size(); ++i) {
        if (!is_finite(state.predicted[i])) {
            throw SolverInstability("non-finite position at particle " + std::to_string(i) + " in frame " +
                                        std::to_string(frame),
                                    frame);
        }
    }
    const double inv_dt = 1.0 / config.dt;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state.inv_mass[i] == 0.0) continue;
        state.velocities[i] = (state.predicted[i] - state.positions[i]) * (inv_dt * config.damping);
        state.positions[i] = state.predicted[i];
    }
    return trace;
}

}  // namespace spherecol
