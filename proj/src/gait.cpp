#include "quadleg/gait.hpp"

#include <algorithm>
#include <cmath>

#include "quadleg/kinematics.hpp"

namespace quadleg {

namespace {

constexpr double kMarginSampleDt = 0.01;  // stability report grid [s]
constexpr int kSwingSegments = 8;
constexpr double kDedupTol = 1e-9;

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

std::vector<Eigen::Vector2d> support_polygon(const std::vector<Eigen::Vector2d>& stance_points) {
  std::vector<Eigen::Vector2d> pts;
  for (const auto& q : stance_points) {
    bool dup = false;
    for (const auto& r : pts) {
      if ((q - r).norm() < kDedupTol) {
        dup = true;
        break;
      }
    }
    if (!dup) pts.push_back(q);
  }
  if (pts.size() < 3) {
    throw DegenerateSupport("support polygon needs >= 3 distinct ground points, got " +
                            std::to_string(pts.size()));
  }

  // Andrew's monotone chain with strict turns: collinear mid-edge points are
  // not hull vertices.
  std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  std::vector<Eigen::Vector2d> hull(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw DegenerateSupport("support points are collinear");

  // Near-collinear sets survive the strict chain with tiny area; reject them
  // by polygon thickness (min over edges of the farthest vertex distance).
  double thickness = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < hull.size(); ++i) {
    const Eigen::Vector2d& a = hull[i];
    const Eigen::Vector2d& b = hull[(i + 1) % hull.size()];
    const double len = (b - a).norm();
    double farthest = 0.0;
    for (const auto& p : hull) farthest = std::max(farthest, cross2(a, b, p) / len);
    thickness = std::min(thickness, farthest);
  }
  if (thickness < kDedupTol) throw DegenerateSupport("support points are collinear");
  return hull;
}

double stability_margin(const std::vector<Eigen::Vector2d>& polygon, const Eigen::Vector2d& com) {
  if (polygon.size() < 3) throw DegenerateSupport("stability margin needs a valid polygon");
  double min_abs = std::numeric_limits<double>::infinity();
  bool inside = true;
  for (size_t i = 0; i < polygon.size(); ++i) {
    const Eigen::Vector2d& a = polygon[i];
    const Eigen::Vector2d& b = polygon[(i + 1) % polygon.size()];
    const double len = (b - a).norm();
    const double signed_dist = cross2(a, b, com) / len;  // > 0 left of edge = inside for CCW
    if (signed_dist < 0.0) inside = false;
    min_abs = std::min(min_abs, std::abs(signed_dist));
  }
  return inside ? min_abs : -min_abs;
}

namespace {

double home_radius(const LegGeometry& g) { return g.a1 + 0.5 * (g.a2 + g.a3); }

Eigen::Vector3d home_foothold(const RobotConfig& cfg, const LegMount& m) {
  const double r0 = home_radius(cfg.geometry);
  return {m.mount_x + r0 * std::cos(m.mount_yaw), m.mount_y + r0 * std::sin(m.mount_yaw), 0.0};
}

JointAngles solve_leg(const RobotConfig& cfg, LegId leg, const Eigen::Vector3d& world_point,
                      const Eigen::Vector2d& body_xy) {
  const FootPosition body_point{world_point.x() - body_xy.x(), world_point.y() - body_xy.y(),
                                world_point.z() - cfg.layout.body_height};
  const FootPosition leg_point = body_to_leg_frame(cfg.layout, leg, body_point);
  const auto sols =
      inverse_kinematics(cfg.geometry, leg_point, ElbowBranch::Down, cfg.limits);
  return sols.front().angles;
}

SwingPlan hold_plan(const JointAngles& q, double duration) {
  return spline_through_knots({0.0, duration}, {q, q}, 0.0);
}

MarginSample sample_margin(const GaitPlan& plan, double t) {
  MarginSample s;
  s.t = t;
  std::vector<Eigen::Vector2d> support;
  for (int leg = 0; leg < 4; ++leg) {
    const LegSwing* swing = plan.active_swing(leg, t);
    if (swing && !swing->grounded) continue;
    const Eigen::Vector3d& p = plan.contact_at(leg, t).point;
    support.push_back({p.x(), p.y()});
  }
  s.polygon = support_polygon(support);
  s.com_projection = plan.body_position(t);
  s.margin = stability_margin(s.polygon, s.com_projection);
  return s;
}

}  // namespace

Eigen::Vector2d GaitPlan::body_position(double t) const {
  double y = 0.0;
  if (!sway.empty()) {
    size_t i = 0;
    while (i + 1 < sway.size() && t > sway[i].t1) ++i;
    y = sway[i].y.position(std::clamp(t - sway[i].t0, 0.0, sway[i].t1 - sway[i].t0));
  }
  return {body_speed * t, y};
}

const LegSwing* GaitPlan::active_swing(int leg_index, double t) const {
  const LegId id = leg_order[static_cast<size_t>(leg_index)];
  for (const auto& s : swings) {
    if (s.leg == id && t >= s.start && t < s.start + s.duration) return &s;
  }
  return nullptr;
}

const FootContact& GaitPlan::contact_at(int leg_index, double t) const {
  const auto& list = contacts[static_cast<size_t>(leg_index)];
  size_t best = 0;
  for (size_t i = 0; i < list.size(); ++i) {
    if (list[i].touchdown <= t) best = i;
  }
  return list[best];
}

double standing_margin(const RobotConfig& cfg) {
  std::vector<Eigen::Vector2d> pts;
  for (const auto& m : cfg.layout.legs) {
    const Eigen::Vector3d h = home_foothold(cfg, m);
    pts.push_back({h.x(), h.y()});
  }
  return stability_margin(support_polygon(pts), Eigen::Vector2d::Zero());
}

GaitPlan generate_crawl(const RobotConfig& cfg, int cycles, double stride, double cycle_period,
                        bool force) {
  if (cycles < 1) throw Error("cycles must be >= 1");
  if (!(cycle_period > 0.0)) throw Error("cycle period must be positive");
  if (!(stride >= 0.0)) throw Error("stride must be non-negative");
  const double beta = cfg.gait.duty_factor;
  if (!(beta > 0.75 && beta < 1.0)) {
    throw Error("crawl gait needs duty factor in (0.75, 1.0); one swing at a time does not tile "
                "the cycle at " + std::to_string(beta));
  }

  const double T = cycle_period;
  const double quarter = T / 4.0;
  const double swing_dur = (1.0 - beta) * T;
  const double pause_dur = quarter - swing_dur;
  const bool in_place = stride <= 1e-12;

  GaitPlan plan;
  plan.cycle_period = T;
  plan.cycles = cycles;
  plan.stride = stride;
  plan.duty_factor = beta;
  plan.body_height = cfg.layout.body_height;
  plan.body_speed = in_place ? 0.0 : stride / T;

  for (size_t i = 0; i < 4; ++i) {
    plan.leg_order[i] = cfg.layout.legs[i].id;
    plan.home_world[i] = home_foothold(cfg, cfg.layout.legs[i]);
  }

  // Lateral sway sized from the required margin: the support diagonal of a
  // symmetric crawl passes next to the COM, so the body leans away from the
  // swinging side by a couple of margins.
  double lateral = std::numeric_limits<double>::infinity();
  for (const auto& h : plan.home_world) lateral = std::min(lateral, std::abs(h.y()));
  plan.sway_amplitude =
      in_place ? 0.0 : std::min(2.0 * (cfg.gait.margin_min_m + 0.005), 0.25 * lateral);

  // Quarter assignment from the configured swing order.
  std::array<int, 4> quarter_leg{};  // quarter k -> layout leg index
  for (int k = 0; k < 4; ++k) quarter_leg[k] = cfg.layout.leg_index(cfg.gait.swing_order[k]);
  std::array<double, 4> sway_target{};
  for (int k = 0; k < 4; ++k) {
    const double my = cfg.layout.legs[quarter_leg[k]].mount_y;
    sway_target[k] = (my > 0.0) ? -plan.sway_amplitude : (my < 0.0 ? plan.sway_amplitude : 0.0);
  }

  // Touchdown schedule: leg of quarter k touches down at n*T + k*T/4 + swing_dur
  // for n = -1 .. cycles-1; the contact sits half a stance sweep ahead of home.
  for (int k = 0; k < 4; ++k) {
    const int leg = quarter_leg[k];
    auto& list = plan.contacts[leg];
    for (int n = -1; n < cycles; ++n) {
      const double td = n * T + k * quarter + swing_dur;
      FootContact c;
      c.touchdown = td;
      c.point = plan.home_world[leg] +
                Eigen::Vector3d(plan.body_speed * td + beta * stride / 2.0, 0.0, 0.0);
      list.push_back(c);
    }
  }

  // Phases and sway profile: per quarter one swing phase (sway held) and one
  // all-stance pause (sway eases to the next target).
  for (int n = 0; n < cycles; ++n) {
    for (int k = 0; k < 4; ++k) {
      const double s0 = n * T + k * quarter;
      const int leg = quarter_leg[k];

      GaitPhase swing_phase;
      swing_phase.start = s0;
      swing_phase.duration = swing_dur;
      swing_phase.swing_leg = plan.leg_order[leg];
      swing_phase.roles[leg] = PhaseRole::Swing;
      swing_phase.dx = plan.body_speed * swing_dur;
      swing_phase.dy = 0.0;
      plan.phases.push_back(swing_phase);
      plan.sway.push_back({s0, s0 + swing_dur, {sway_target[k], 0.0, 0.0, 0.0}});

      GaitPhase pause;
      pause.start = s0 + swing_dur;
      pause.duration = pause_dur;
      pause.dx = plan.body_speed * pause_dur;
      const double next_target = sway_target[(k + 1) % 4];
      pause.dy = next_target - sway_target[k];
      plan.phases.push_back(pause);
      plan.sway.push_back({s0 + swing_dur, s0 + quarter,
                           fit_cubic(sway_target[k], next_target, 0.0, 0.0, pause_dur)});
    }
  }

  // Swing trajectories: sample the world-frame arc at the knot times, pull
  // each sample into the (moving) leg frame and solve it elbow-down.
  for (int n = 0; n < cycles; ++n) {
    for (int k = 0; k < 4; ++k) {
      const int leg = quarter_leg[k];
      const LegId id = plan.leg_order[leg];
      LegSwing sw;
      sw.leg = id;
      sw.start = n * T + k * quarter;
      sw.duration = swing_dur;
      sw.lift_point = plan.contact_at(leg, sw.start).point;
      sw.land_point = plan.contacts[leg][static_cast<size_t>(n) + 1].point;
      const std::string phase_name = "swing (cycle " + std::to_string(n) + ")";
      if (in_place) {
        sw.grounded = true;
        try {
          const JointAngles q = solve_leg(cfg, id, sw.lift_point, plan.body_position(sw.start));
          sw.plan = hold_plan(q, swing_dur);
        } catch (const Error& e) {
          throw StrideUnreachable(to_string(id), phase_name, e.what());
        }
      } else {
        std::vector<double> times(kSwingSegments + 1);
        std::vector<JointAngles> knots(kSwingSegments + 1);
        for (int j = 0; j <= kSwingSegments; ++j) {
          const double frac = static_cast<double>(j) / kSwingSegments;
          const double t = sw.start + swing_dur * frac;
          const Eigen::Vector3d w =
              swing_arc_point(sw.lift_point, sw.land_point, cfg.gait.clearance_m, frac);
          times[j] = swing_dur * frac;
          try {
            knots[j] = solve_leg(cfg, id, w, plan.body_position(t));
          } catch (const Error& e) {
            throw StrideUnreachable(to_string(id), phase_name, e.what());
          }
        }
        sw.plan = spline_through_knots(times, knots, cfg.gait.clearance_m);
      }
      plan.swings.push_back(sw);
    }
  }

  // Stability report on the fixed 10 ms grid; the same sweep verifies that
  // every stance target stays IK-solvable.
  const double total = plan.total_duration();
  const int n_samples = static_cast<int>(std::floor(total / kMarginSampleDt + 1e-9)) + 1;
  plan.stability.min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const double t = std::min(i * kMarginSampleDt, total);
    for (int leg = 0; leg < 4; ++leg) {
      const LegSwing* swing = plan.active_swing(leg, t);
      if (swing) continue;  // knots already solved above
      try {
        solve_leg(cfg, plan.leg_order[leg], plan.contact_at(leg, t).point, plan.body_position(t));
      } catch (const Error& e) {
        throw StrideUnreachable(to_string(plan.leg_order[leg]),
                                "stance sweep at t = " + std::to_string(t), e.what());
      }
    }
    MarginSample s = sample_margin(plan, t);
    plan.stability.min_margin = std::min(plan.stability.min_margin, s.margin);
    plan.stability.samples.push_back(std::move(s));
  }

  if (plan.stability.min_margin < cfg.gait.margin_min_m && !force) {
    throw StabilityViolation(plan.stability.min_margin, cfg.gait.margin_min_m);
  }
  return plan;
}

JointTimeline stance_joint_timeline(const RobotConfig& cfg, const GaitPlan& plan, double dt) {
  if (!(dt > 0.0)) throw Error("timeline dt must be positive");
  const double total = plan.total_duration();
  const int n_samples = static_cast<int>(std::floor(total / dt + 1e-9)) + 1;

  JointTimeline tl;
  tl.dt = dt;
  tl.legs = plan.leg_order;
  tl.times.reserve(n_samples);
  for (int leg = 0; leg < 4; ++leg) {
    tl.angles[leg].reserve(n_samples);
    tl.roles[leg].reserve(n_samples);
    tl.foot_world[leg].reserve(n_samples);
  }

  for (int i = 0; i < n_samples; ++i) {
    const double t = std::min(i * dt, total);
    tl.times.push_back(t);
    const Eigen::Vector2d body = plan.body_position(t);
    for (int leg = 0; leg < 4; ++leg) {
      const LegId id = plan.leg_order[leg];
      JointAngles q;
      PhaseRole role = PhaseRole::Stance;
      const LegSwing* swing = plan.active_swing(leg, t);
      if (swing) {
        role = PhaseRole::Swing;
        const double local = std::clamp(t - swing->start, 0.0, swing->plan.duration());
        q = swing->plan.sample(local).first;
      } else {
        const Eigen::Vector3d& contact = plan.contact_at(leg, t).point;
        try {
          q = solve_leg(cfg, id, contact, body);
        } catch (const Error& e) {
          throw UnreachableSample(i, contact.x(), contact.y(), contact.z(),
                                  std::string("leg ") + to_string(id) + " at t = " +
                                      std::to_string(t) + ": " + e.what());
        }
      }
      const FootPosition foot_leg = forward_kinematics(cfg.geometry, q);
      const FootPosition foot_body = leg_to_body_frame(cfg.layout, id, foot_leg);
      tl.angles[leg].push_back(q);
      tl.roles[leg].push_back(role);
      tl.foot_world[leg].push_back(Eigen::Vector3d(foot_body.x + body.x(), foot_body.y + body.y(),
                                                   foot_body.z + cfg.layout.body_height));
    }
    tl.margins.push_back(sample_margin(plan, t).margin);
  }
  return tl;
}

}  // namespace quadleg
