#include "swimfollow/swimmer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "swimfollow/errors.hpp"

namespace swimfollow {

namespace {

constexpr double kProjectionTol = 1e-9;  // mm
constexpr int kProjectionMaxIters = 200;

Point2 link_front(const LinkState& link, double half) {
    return link.pos + heading_vector(link.heading) * half;
}

Point2 link_rear(const LinkState& link, double half) {
    return link.pos - heading_vector(link.heading) * half;
}

} // namespace

BodyState BodyState::straight(const BodySpec& spec, const Pose2& center) {
    if (spec.n_links < 2) throw std::invalid_argument("BodyState::straight: need at least 2 links");
    BodyState s;
    s.links.resize(spec.n_links);
    const double l = spec.link_length();
    const Point2 dir = heading_vector(center.heading);
    Point2 pos = center.position + dir * (spec.body_length / 2.0 - l / 2.0);
    for (std::size_t i = 0; i < spec.n_links; ++i) {
        s.links[i].pos = pos;
        s.links[i].heading = center.heading;
        s.links[i].vel = Point2{};
        s.links[i].omega = 0.0;
        pos = pos - dir * l;
    }
    return s;
}

Point2 nose_position(const BodyState& state, const BodySpec& spec) {
    return link_front(state.links.front(), spec.link_length() / 2.0);
}

Point2 tail_tip(const BodyState& state, const BodySpec& spec) {
    return link_rear(state.links.back(), spec.link_length() / 2.0);
}

Pose2 tail_pose(const BodyState& state) {
    const LinkState& last = state.links.back();
    return Pose2{last.pos, wrap_angle(last.heading)};
}

double body_heading(const BodyState& state) {
    double sx = 0.0, sy = 0.0;
    for (const LinkState& link : state.links) {
        sx += std::cos(link.heading);
        sy += std::sin(link.heading);
    }
    return std::atan2(sy, sx);
}

Point2 body_center(const BodyState& state) {
    Point2 c{};
    for (const LinkState& link : state.links) c = c + link.pos;
    return c * (1.0 / static_cast<double>(state.n()));
}

std::vector<double> joint_angles(const BodyState& state) {
    std::vector<double> angles(state.n() - 1);
    for (std::size_t j = 0; j + 1 < state.n(); ++j) {
        angles[j] = wrap_angle(state.links[j].heading - state.links[j + 1].heading);
    }
    return angles;
}

double chain_residual(const BodyState& state, const BodySpec& spec) {
    const double half = spec.link_length() / 2.0;
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < state.n(); ++j) {
        const Point2 gap = link_front(state.links[j + 1], half) - link_rear(state.links[j], half);
        worst = std::max(worst, gap.norm());
    }
    return worst;
}

namespace {

/// Gauss-Seidel projection of the joint position constraints, optionally
/// interleaved with a compliant angular drive per joint (the servo). The
/// drive is a position-level spring toward angle_target with accumulated
/// multipliers, so any stiffness stays stable.
void solve_constraints(BodyState& state, const BodySpec& spec, const double* angle_target,
                       double dt) {
    const double half = spec.link_length() / 2.0;
    const double inv_m = 1.0 / spec.link_mass;
    const double inv_i = 1.0 / spec.link_inertia();
    const std::size_t n = state.n();

    const bool drive = angle_target != nullptr && spec.joint_stiffness > 0.0;
    const double compliance = drive ? 1.0 / (spec.joint_stiffness * dt * dt) : 0.0;
    std::vector<double> lambda(drive ? n - 1 : 0, 0.0);

    for (int iter = 0; iter < kProjectionMaxIters; ++iter) {
        double worst_angular = 0.0;
        if (drive) {
            for (std::size_t j = 0; j + 1 < n; ++j) {
                // joint angle is front heading minus rear heading, so positive
                // torque curls the tail leftward
                const double c = wrap_angle(state.links[j].heading - state.links[j + 1].heading -
                                            angle_target[j]);
                const double dl = -(c + compliance * lambda[j]) / (2.0 * inv_i + compliance);
                lambda[j] += dl;
                state.links[j].heading += dl * inv_i;
                state.links[j + 1].heading -= dl * inv_i;
                worst_angular = std::max(worst_angular, std::fabs(dl * inv_i));
            }
        }
        for (std::size_t j = 0; j + 1 < n; ++j) {
            LinkState& front = state.links[j];      // joint sits at its rear end
            LinkState& rear = state.links[j + 1];   // joint sits at its front end
            const Point2 pa = link_rear(front, half);
            const Point2 pb = link_front(rear, half);
            const Point2 gap = pa - pb;
            const double dist = gap.norm();
            if (dist < kProjectionTol) continue;
            const Point2 nrm = gap * (1.0 / dist);
            const Point2 ra = pa - front.pos;
            const Point2 rb = pb - rear.pos;
            const double wa = inv_m + ra.cross(nrm) * ra.cross(nrm) * inv_i;
            const double wb = inv_m + rb.cross(nrm) * rb.cross(nrm) * inv_i;
            const double mag = dist / (wa + wb);
            front.pos = front.pos - nrm * (mag * inv_m);
            front.heading -= mag * ra.cross(nrm) * inv_i;
            rear.pos = rear.pos + nrm * (mag * inv_m);
            rear.heading += mag * rb.cross(nrm) * inv_i;
        }
        if (chain_residual(state, spec) < kProjectionTol && worst_angular < kProjectionTol) return;
    }
    const double resid = chain_residual(state, spec);
    if (resid >= 1e-6) {
        throw NumericError("solve_constraints: residual " + std::to_string(resid) +
                           " mm after " + std::to_string(kProjectionMaxIters) + " iterations");
    }
}

} // namespace

void project_chain(BodyState& state, const BodySpec& spec) {
    solve_constraints(state, spec, nullptr, 0.0);
}

void body_step(BodyState& state, const BodySpec& spec, const std::vector<double>& torques,
               double dt) {
    const std::size_t n = state.n();
    if (n < 2) throw std::invalid_argument("body_step: need at least 2 links");
    if (torques.size() != n - 1) throw std::invalid_argument("body_step: torque count mismatch");
    if (!(dt > 0.0) || dt > 0.02) throw std::invalid_argument("body_step: dt out of range");

    const double l = spec.link_length();
    const double inv_i = 1.0 / spec.link_inertia();
    const double drag_t = 1.0 / (1.0 + dt * spec.drag_tangential * l / spec.link_mass);
    const double drag_n = 1.0 / (1.0 + dt * spec.drag_normal * l / spec.link_mass);
    const double drag_w = 1.0 / (1.0 + dt * spec.drag_normal * (l * l * l / 12.0) * inv_i);

    std::vector<Point2> pos0(n);
    std::vector<double> heading0(n);
    for (std::size_t i = 0; i < n; ++i) {
        pos0[i] = state.links[i].pos;
        heading0[i] = state.links[i].heading;
    }

    // implicit anisotropic drag in the link frame
    for (LinkState& link : state.links) {
        const Point2 t = heading_vector(link.heading);
        const Point2 nrm = t.perp();
        const double vt = link.vel.dot(t) * drag_t;
        const double vn = link.vel.dot(nrm) * drag_n;
        link.vel = t * vt + nrm * vn;
        link.omega *= drag_w;
    }

    // joint-rate damping, implicit in the relative coordinate, equal and
    // opposite impulses so pair angular momentum is untouched
    const double pair_gain = 2.0 * dt * inv_i;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double rel = state.links[j + 1].omega - state.links[j].omega;
        const double rel_next = rel / (1.0 + pair_gain * spec.joint_damping);
        const double half_delta = (rel_next - rel) / 2.0;
        state.links[j].omega -= half_delta;
        state.links[j + 1].omega += half_delta;
    }

    for (LinkState& link : state.links) {
        link.pos = link.pos + link.vel * dt;
        link.heading += dt * link.omega;
    }

    // the servo tracks the commanded torque as a compliant angle drive
    std::vector<double> target(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) target[j] = torques[j] / spec.joint_stiffness;
    solve_constraints(state, spec, target.data(), dt);

    for (std::size_t i = 0; i < n; ++i) {
        LinkState& link = state.links[i];
        link.vel = (link.pos - pos0[i]) * (1.0 / dt);
        link.omega = (link.heading - heading0[i]) / dt;
        if (!std::isfinite(link.pos.x) || !std::isfinite(link.pos.y) ||
            !std::isfinite(link.heading)) {
            throw NumericError("body_step: non-finite state at link " + std::to_string(i));
        }
    }
}

bool wall_interaction(BodyState& state, const BodySpec& spec, const TankSpec& tank) {
    const double half = spec.link_length() / 2.0;
    bool moved = false;
    for (LinkState& link : state.links) {
        const Point2 e0 = link_front(link, half);
        const Point2 e1 = link_rear(link, half);
        const double min_x = std::min(e0.x, e1.x);
        const double max_x = std::max(e0.x, e1.x);
        const double min_y = std::min(e0.y, e1.y);
        const double max_y = std::max(e0.y, e1.y);
        Point2 shift{};
        if (min_x < 0.0) shift.x = -min_x;
        if (max_x > tank.length) shift.x = tank.length - max_x;
        if (min_y < 0.0) shift.y = -min_y;
        if (max_y > tank.width) shift.y = tank.width - max_y;
        if (shift.x != 0.0 || shift.y != 0.0) {
            link.pos = link.pos + shift;
            moved = true;
            if (shift.x > 0.0 && link.vel.x < 0.0) link.vel.x = 0.0;
            if (shift.x < 0.0 && link.vel.x > 0.0) link.vel.x = 0.0;
            if (shift.y > 0.0 && link.vel.y < 0.0) link.vel.y = 0.0;
            if (shift.y < 0.0 && link.vel.y > 0.0) link.vel.y = 0.0;
        }
    }
    return moved;
}

double capsule_segment_half_length(const BodySpec& spec) {
    return std::max(0.0, spec.link_length() / 2.0 - spec.link_width / 2.0);
}

double segment_distance(const Point2& a0, const Point2& a1, const Point2& b0, const Point2& b1) {
    const Point2 d1 = a1 - a0;
    const Point2 d2 = b1 - b0;
    const Point2 r = a0 - b0;
    const double a = d1.dot(d1);
    const double e = d2.dot(d2);
    const double f = d2.dot(r);
    double s = 0.0, t = 0.0;
    if (a <= 1e-18 && e <= 1e-18) {
        return r.norm();
    }
    if (a <= 1e-18) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1.dot(r);
        if (e <= 1e-18) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1.dot(d2);
            const double denom = a * e - b * b;
            if (denom > 1e-18) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    const Point2 pa = a0 + d1 * s;
    const Point2 pb = b0 + d2 * t;
    return (pa - pb).norm();
}

ContactResult detect_contact(const BodyState& a, const BodyState& b, const BodySpec& spec) {
    const double half = capsule_segment_half_length(spec);
    double min_dist = std::numeric_limits<double>::infinity();
    for (const LinkState& la : a.links) {
        const Point2 ta = heading_vector(la.heading) * half;
        for (const LinkState& lb : b.links) {
            const Point2 tb = heading_vector(lb.heading) * half;
            const double d = segment_distance(la.pos - ta, la.pos + ta, lb.pos - tb, lb.pos + tb);
            min_dist = std::min(min_dist, d);
        }
    }
    ContactResult res;
    res.min_separation = min_dist - spec.link_width;
    res.contact = res.min_separation <= 0.0;
    return res;
}

} // namespace swimfollow
