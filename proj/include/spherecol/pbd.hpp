#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "spherecol/detect.hpp"

namespace spherecol {

struct ParticleState {
    std::vector<Vec3> positions;
    std::vector<Vec3> predicted;
    std::vector<Vec3> velocities;
    std::vector<double> inv_mass;  // 0 pins the particle

    std::size_t size() const { return positions.size(); }
    std::uint32_t add(const Vec3& p, double w, const Vec3& v = {});
    /// Throws std::invalid_argument on length mismatch, negative inverse mass or non-finite data.
    void validate() const;
    /// Sum of m_i * v_i over particles with positive inverse mass.
    Vec3 momentum() const;
};

struct DistanceConstraint {
    std::uint32_t i = 0;
    std::uint32_t j = 0;
    double rest_length = 0.0;
    double stiffness = 1.0;
};

enum class CollisionTarget { Triangle, Sphere, Plane };

/// Sphere non-penetration between a triangle (side a) and a triangle or an
/// analytic obstacle (side b). Sphere centers follow the current triangle
/// centroids, shifted by the contact's build-time offsets.
struct CollisionConstraint {
    Contact contact;
    std::array<std::uint32_t, 3> particles_a{};
    std::array<std::uint32_t, 3> particles_b{kNone, kNone, kNone};
    Vec3 offset_a;
    Vec3 offset_b;
    CollisionTarget target = CollisionTarget::Triangle;
    Vec3 plane_normal;
    double plane_offset = 0.0;
};

CollisionConstraint make_collision(const Contact& contact, const Triangle& particles_a, const Triangle& particles_b);
CollisionConstraint make_collision(const Contact& contact, const Triangle& particles_a, const SphereObstacle& obstacle);
CollisionConstraint make_collision(const Contact& contact, const Triangle& particles_a, const PlaneObstacle& obstacle);

struct SolverConfig {
    double dt = 1.0 / 60.0;
    int iterations = 10;
    Vec3 gravity{0.0, -9.81, 0.0};
    double stiffness = 1.0;
    double damping = 0.99;

    /// Throws std::invalid_argument.
    void validate() const;
};

class SolverInstability : public std::runtime_error {
public:
    SolverInstability(const std::string& what, std::uint64_t frame) : std::runtime_error(what), frame_(frame) {}
    std::uint64_t frame() const noexcept { return frame_; }

private:
    std::uint64_t frame_;
};

/// predicted = x + v dt + g dt^2 for free particles, x for pinned ones.
void predict(ParticleState& state, const SolverConfig& config);

/// Signed constraint values: |p_i - p_j| - rest for distances, gap between
/// the two spheres for collisions (negative when penetrating).
double constraint_value(const DistanceConstraint& c, const ParticleState& state);
double constraint_value(const CollisionConstraint& c, const ParticleState& state);

/// Project onto the predicted positions in place.
void project_distance(const DistanceConstraint& c, ParticleState& state);
void project_collision(const CollisionConstraint& c, ParticleState& state);

struct SolveTrace {
    /// Largest violation before the first sweep, then after each sweep.
    std::vector<double> max_violation;
};

/// Gauss-Seidel sweeps over distance then collision constraints, followed by
/// the velocity update. Throws SolverInstability on non-finite positions.
SolveTrace solve_step(ParticleState& state, std::span<const DistanceConstraint> distances,
                      std::span<const CollisionConstraint> collisions, const SolverConfig& config,
                      std::uint64_t frame = 0);

}  // namespace spherecol
