#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>
#include <vector>

#include "quadleg/kinematics.hpp"

namespace quadleg {

/// theta(t) = c0 + c1*t + c2*t^2 + c3*t^3, evaluated in Horner order.
struct CubicCoefficients {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  double position(double t) const { return c0 + t * (c1 + t * (c2 + t * c3)); }
  double velocity(double t) const { return c1 + t * (2.0 * c2 + t * 3.0 * c3); }
};

/// Solves the four boundary conditions theta(0), theta(T), thetadot(0),
/// thetadot(T) for one joint. Throws NonpositiveDuration.
CubicCoefficients fit_cubic(double theta_start, double theta_end, double vel_start,
                            double vel_end, double duration);

/// One cubic per joint over a shared duration.
struct CubicJointTrajectory {
  std::array<CubicCoefficients, 3> joints;
  double duration = 0.0;
};

CubicJointTrajectory fit_cubic_joints(const JointAngles& from, const JointAngles& to,
                                      const JointVelocities& vel_from,
                                      const JointVelocities& vel_to, double duration);

/// Evaluates position and velocity at t in [0, duration].
/// Throws TimeOutOfRange outside that interval.
std::pair<JointAngles, JointVelocities> sample_trajectory(const CubicJointTrajectory& traj,
                                                          double t);

struct SwingKnot {
  double time = 0.0;
  JointAngles angles;
  JointVelocities velocities;
};

/// Piecewise-cubic joint trajectory through an ordered knot sequence.
/// Adjacent segments share knot angles and velocities exactly.
struct SwingPlan {
  std::vector<SwingKnot> knots;
  std::vector<CubicJointTrajectory> segments;  // knots.size() - 1
  double clearance = 0.0;

  double duration() const { return knots.empty() ? 0.0 : knots.back().time; }
  std::pair<JointAngles, JointVelocities> sample(double t) const;
};

/// Point on the half-ellipse arc from start to end whose apex sits
/// `clearance` above the chord, at arc parameter s in [0, 1]. "Above" is the
/// +z direction orthogonalized against the chord; a degenerate (zero-length)
/// chord lifts straight up.
Eigen::Vector3d swing_arc_point(const Eigen::Vector3d& start, const Eigen::Vector3d& end,
                                double clearance, double s);

/// Fits zero-end-velocity piecewise cubics through the given angle knots;
/// interior knot velocities come from centered differences.
SwingPlan spline_through_knots(const std::vector<double>& times,
                               const std::vector<JointAngles>& angles, double clearance);

/// Plans a leg-frame swing: samples the half-ellipse at `segments`+1 evenly
/// spaced times, solves each sample by IK on a consistent elbow branch and
/// fits the knot spline. Throws UnreachableSample or BranchFlip.
SwingPlan plan_swing(const LegGeometry& geom, const FootPosition& start, const FootPosition& end,
                     double clearance, double duration, int segments = 8,
                     ElbowBranch branch = ElbowBranch::Down,
                     const JointLimits& limits = JointLimits{});

}  // namespace quadleg
