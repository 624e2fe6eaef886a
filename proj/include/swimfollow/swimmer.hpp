#pragma once

#include <cstddef>
#include <vector>

#include "swimfollow/geometry.hpp"

namespace swimfollow {

/// Planar articulated body: n_links rigid capsules pinned end to end.
/// Units are mm, s, kg throughout.
struct BodySpec {
    std::size_t n_links = 6;
    double body_length = 200.0;   // mm, nose to tail tip including end caps
    double link_width = 16.0;     // mm, capsule diameter
    double link_mass = 0.006;     // kg per link
    double drag_tangential = 0.00075;  // kg/(mm*s) per mm of link length
    double drag_normal = 0.003;        // kg/(mm*s) per mm of link length
    double joint_stiffness = 1.0e5;    // kg*mm^2/s^2 per rad, servo elasticity about each joint
    double joint_damping = 0.5;        // kg*mm^2/s per rad/s of relative rate

    double link_length() const { return body_length / static_cast<double>(n_links); }
    double link_inertia() const {
        const double l = link_length();
        return link_mass * l * l / 12.0;
    }
};

struct LinkState {
    Point2 pos;      // link center
    double heading = 0.0;
    Point2 vel;
    double omega = 0.0;
};

struct BodyState {
    std::vector<LinkState> links;

    std::size_t n() const { return links.size(); }

    /// Straight body, at rest, centered on the given pose.
    static BodyState straight(const BodySpec& spec, const Pose2& center);
};

/// Geometric front tip of the head link (the nose).
Point2 nose_position(const BodyState& state, const BodySpec& spec);
/// Geometric rear tip of the last link.
Point2 tail_tip(const BodyState& state, const BodySpec& spec);
/// Center pose of the last link.
Pose2 tail_pose(const BodyState& state);
/// Circular mean of link headings.
double body_heading(const BodyState& state);
Point2 body_center(const BodyState& state);
/// Joint angle j: heading of link j+1 minus heading of link j, wrapped.
std::vector<double> joint_angles(const BodyState& state);

/// Largest joint gap in mm after constraint projection.
double chain_residual(const BodyState& state, const BodySpec& spec);

/// Re-run the positional constraint projection without advancing time.
/// Used after any external position adjustment (wall clamping).
void project_chain(BodyState& state, const BodySpec& spec);

/// One physics substep: semi-implicit force integration (anisotropic drag,
/// joint torques, joint damping), then position-based joint projection, then
/// velocity reconciliation from the positional change. torques has n-1
/// entries; positive torque rotates the rear link of the pair CCW.
/// dt must be in (0, 0.02]; throws NumericError on non-finite state.
void body_step(BodyState& state, const BodySpec& spec, const std::vector<double>& torques,
               double dt);

/// Clamp every link inside the tank walls and zero the outward normal
/// velocity of clamped links. Tangential velocity is untouched. Returns true
/// if anything moved; callers should re-project the chain when it did.
bool wall_interaction(BodyState& state, const BodySpec& spec, const TankSpec& tank);

struct ContactResult {
    bool contact = false;
    double min_separation = 0.0;  // mm between capsule surfaces, negative when overlapping
};

/// Capsule-capsule proximity between two bodies. Capsule axis segments are
/// inset from the geometric link ends by the cap radius so the swept shape
/// spans exactly the link length.
ContactResult detect_contact(const BodyState& a, const BodyState& b, const BodySpec& spec);

double capsule_segment_half_length(const BodySpec& spec);
double segment_distance(const Point2& a0, const Point2& a1, const Point2& b0, const Point2& b1);

} // namespace swimfollow
