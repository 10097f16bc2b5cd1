#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "quadleg/model.hpp"
#include "quadleg/trajectory.hpp"

namespace quadleg {

enum class PhaseRole { Stance, Swing };

/// One slice of the gait timeline. Crawl: at most one swing leg.
struct GaitPhase {
  double start = 0.0;
  double duration = 0.0;
  std::optional<LegId> swing_leg;
  std::array<PhaseRole, 4> roles = {PhaseRole::Stance, PhaseRole::Stance, PhaseRole::Stance,
                                    PhaseRole::Stance};  // indexed by layout leg order
  double dx = 0.0;  // body translation over the phase, world frame [m]
  double dy = 0.0;
};

struct MarginSample {
  double t = 0.0;
  std::vector<Eigen::Vector2d> polygon;  // CCW support polygon, world ground frame
  Eigen::Vector2d com_projection = Eigen::Vector2d::Zero();
  double margin = 0.0;  // signed [m], positive strictly inside
};

struct StabilityReport {
  std::vector<MarginSample> samples;  // fixed 10 ms grid
  double min_margin = 0.0;
};

/// One leg's swing: world lift/land contacts and the joint-space plan.
/// `grounded` marks the degenerate zero-displacement step that never lifts
/// (the foot keeps supporting the body).
struct LegSwing {
  LegId leg = LegId::LF;
  double start = 0.0;
  double duration = 0.0;
  Eigen::Vector3d lift_point = Eigen::Vector3d::Zero();
  Eigen::Vector3d land_point = Eigen::Vector3d::Zero();
  SwingPlan plan;
  bool grounded = false;
};

struct FootContact {
  double touchdown = 0.0;
  Eigen::Vector3d point = Eigen::Vector3d::Zero();  // world, z = 0
};

/// A generated crawl: phases tile [0, cycles*cycle_period] with no gaps and
/// each leg swings exactly once per cycle.
struct GaitPlan {
  double cycle_period = 0.0;
  int cycles = 0;
  double stride = 0.0;
  double duty_factor = 0.0;
  double body_speed = 0.0;      // [m/s] along +x (heading)
  double sway_amplitude = 0.0;  // lateral COM shift [m]
  double body_height = 0.0;

  std::array<LegId, 4> leg_order;                   // layout order, index space for roles
  std::array<Eigen::Vector3d, 4> home_world;        // home footholds for a body at the origin
  std::vector<GaitPhase> phases;
  std::vector<LegSwing> swings;
  std::array<std::vector<FootContact>, 4> contacts;  // per leg, touchdown-ordered

  // Lateral sway profile as hold/transition cubics tiling the timeline.
  struct SwaySegment {
    double t0 = 0.0, t1 = 0.0;
    CubicCoefficients y;  // evaluated at (t - t0)
  };
  std::vector<SwaySegment> sway;

  StabilityReport stability;

  double total_duration() const { return cycle_period * cycles; }
  Eigen::Vector2d body_position(double t) const;
  /// The swing the leg is in at time t, if any.
  const LegSwing* active_swing(int leg_index, double t) const;
  /// Most recent touchdown at or before t.
  const FootContact& contact_at(int leg_index, double t) const;
};

/// Convex hull (CCW, minimal vertex set) of ground contact points.
/// Throws DegenerateSupport for < 3 distinct points (1e-9 dedup) or an
/// all-collinear set.
std::vector<Eigen::Vector2d> support_polygon(const std::vector<Eigen::Vector2d>& stance_points);

/// Static stability margin: the smallest perpendicular distance from the COM
/// ground projection to any support-polygon edge line, signed positive
/// inside the hull and negative outside.
double stability_margin(const std::vector<Eigen::Vector2d>& polygon, const Eigen::Vector2d& com);

/// Margin of the neutral four-leg stance (all feet at their home footholds,
/// COM at the body origin).
double standing_margin(const RobotConfig& cfg);

/// Generates a quasi-statically stable crawl: swings in the configured order
/// at the configured duty factor, stance feet pinned to world-fixed ground
/// contacts while the body advances stride per cycle, stability sampled
/// every 10 ms. Throws StrideUnreachable or, unless `force`,
/// StabilityViolation when a sampled margin drops below the configured
/// minimum.
GaitPlan generate_crawl(const RobotConfig& cfg, int cycles, double stride, double cycle_period,
                        bool force = false);

/// Uniformly sampled joint timeline for every leg of a plan.
struct JointTimeline {
  double dt = 0.0;
  std::vector<double> times;
  std::array<LegId, 4> legs;
  std::array<std::vector<JointAngles>, 4> angles;      // [leg][sample]
  std::array<std::vector<PhaseRole>, 4> roles;         // [leg][sample]
  std::array<std::vector<Eigen::Vector3d>, 4> foot_world;
  std::vector<double> margins;
};

/// Samples the plan every dt over [0, total]: stance legs track their pinned
/// world contact through IK, swing legs follow their SwingPlan.
JointTimeline stance_joint_timeline(const RobotConfig& cfg, const GaitPlan& plan, double dt);

}  // namespace quadleg
