#include "quadleg/trajectory.hpp"

#include <cmath>

#include "quadleg/error.hpp"

namespace quadleg {

CubicCoefficients fit_cubic(double theta_start, double theta_end, double vel_start,
                            double vel_end, double duration) {
  if (!(duration > 0.0)) {
    throw NonpositiveDuration("trajectory duration must be positive, got " +
                              std::to_string(duration));
  }
  const double T = duration;
  const double dq = theta_end - theta_start;
  CubicCoefficients c;
  c.c0 = theta_start;
  c.c1 = vel_start;
  c.c2 = (3.0 * dq - (2.0 * vel_start + vel_end) * T) / (T * T);
  c.c3 = (-2.0 * dq + (vel_start + vel_end) * T) / (T * T * T);
  return c;
}

CubicJointTrajectory fit_cubic_joints(const JointAngles& from, const JointAngles& to,
                                      const JointVelocities& vel_from,
                                      const JointVelocities& vel_to, double duration) {
  CubicJointTrajectory traj;
  traj.duration = duration;
  traj.joints[0] = fit_cubic(from.theta1, to.theta1, vel_from.dtheta1, vel_to.dtheta1, duration);
  traj.joints[1] = fit_cubic(from.theta2, to.theta2, vel_from.dtheta2, vel_to.dtheta2, duration);
  traj.joints[2] = fit_cubic(from.theta3, to.theta3, vel_from.dtheta3, vel_to.dtheta3, duration);
  return traj;
}

std::pair<JointAngles, JointVelocities> sample_trajectory(const CubicJointTrajectory& traj,
                                                          double t) {
  if (t < 0.0 || t > traj.duration) {
    throw TimeOutOfRange("t = " + std::to_string(t) + " outside [0, " +
                         std::to_string(traj.duration) + "]");
  }
  JointAngles q{traj.joints[0].position(t), traj.joints[1].position(t),
                traj.joints[2].position(t)};
  JointVelocities v{traj.joints[0].velocity(t), traj.joints[1].velocity(t),
                    traj.joints[2].velocity(t)};
  return {q, v};
}

std::pair<JointAngles, JointVelocities> SwingPlan::sample(double t) const {
  if (knots.empty()) throw TimeOutOfRange("empty swing plan");
  if (t < 0.0 || t > duration()) {
    throw TimeOutOfRange("t = " + std::to_string(t) + " outside [0, " +
                         std::to_string(duration()) + "]");
  }
  size_t seg = 0;
  while (seg + 1 < segments.size() && t > knots[seg + 1].time) ++seg;
  return sample_trajectory(segments[seg], t - knots[seg].time);
}

Eigen::Vector3d swing_arc_point(const Eigen::Vector3d& start, const Eigen::Vector3d& end,
                                double clearance, double s) {
  const Eigen::Vector3d chord = end - start;
  const double len = chord.norm();
  Eigen::Vector3d up = Eigen::Vector3d::UnitZ();
  if (len > 1e-12) {
    const Eigen::Vector3d dir = chord / len;
    up -= dir * dir.z();
    const double un = up.norm();
    if (un > 1e-9) {
      up /= un;
    } else {
      // Vertical chord: lift sideways along x orthogonalized to the chord.
      up = Eigen::Vector3d::UnitX() - dir * dir.x();
      up.normalize();
    }
  }
  const double phi = s * kPi;
  return start + chord * (0.5 * (1.0 - std::cos(phi))) + up * (clearance * std::sin(phi));
}

SwingPlan spline_through_knots(const std::vector<double>& times,
                               const std::vector<JointAngles>& angles, double clearance) {
  if (times.size() != angles.size() || times.size() < 2) {
    throw Error("knot spline needs matching time/angle sequences with >= 2 knots");
  }
  const size_t n = times.size();
  SwingPlan plan;
  plan.clearance = clearance;
  plan.knots.resize(n);
  for (size_t i = 0; i < n; ++i) {
    plan.knots[i].time = times[i];
    plan.knots[i].angles = angles[i];
    if (i == 0 || i + 1 == n) {
      plan.knots[i].velocities = {0.0, 0.0, 0.0};  // rest at both ends
    } else {
      const double dt = times[i + 1] - times[i - 1];
      plan.knots[i].velocities = {(angles[i + 1].theta1 - angles[i - 1].theta1) / dt,
                                  (angles[i + 1].theta2 - angles[i - 1].theta2) / dt,
                                  (angles[i + 1].theta3 - angles[i - 1].theta3) / dt};
    }
  }
  plan.segments.reserve(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    plan.segments.push_back(fit_cubic_joints(plan.knots[i].angles, plan.knots[i + 1].angles,
                                             plan.knots[i].velocities, plan.knots[i + 1].velocities,
                                             times[i + 1] - times[i]));
  }
  return plan;
}

SwingPlan plan_swing(const LegGeometry& geom, const FootPosition& start, const FootPosition& end,
                     double clearance, double duration, int segments, ElbowBranch branch,
                     const JointLimits& limits) {
  if (segments < 3) throw Error("swing needs at least 3 segments");
  if (!(clearance > 0.0)) throw Error("swing clearance must be positive");
  if (!(duration > 0.0)) throw NonpositiveDuration("swing duration must be positive");

  const Eigen::Vector3d p0(start.x, start.y, start.z);
  const Eigen::Vector3d p1(end.x, end.y, end.z);

  std::vector<double> times(static_cast<size_t>(segments) + 1);
  std::vector<JointAngles> knots(times.size());
  for (size_t k = 0; k < times.size(); ++k) {
    times[k] = duration * static_cast<double>(k) / segments;
    const Eigen::Vector3d p = swing_arc_point(p0, p1, clearance, static_cast<double>(k) / segments);
    std::vector<IkSolution> sols;
    try {
      sols = inverse_kinematics(geom, {p.x(), p.y(), p.z()}, branch, limits);
    } catch (const Error& e) {
      throw UnreachableSample(static_cast<int>(k), p.x(), p.y(), p.z(), e.what());
    }
    if (sols.empty()) {
      throw UnreachableSample(static_cast<int>(k), p.x(), p.y(), p.z(),
                              "no solution on the requested branch");
    }
    if (!sols.front().within_limits) {
      const auto other = inverse_kinematics(
          geom, {p.x(), p.y(), p.z()},
          branch == ElbowBranch::Down ? ElbowBranch::Up : ElbowBranch::Down, limits);
      if (!other.empty() && other.front().within_limits) {
        throw BranchFlip("sample " + std::to_string(k) + ": " + to_string(branch) +
                         " violates joint limits while the opposite branch is legal");
      }
    }
    knots[k] = sols.front().angles;
  }
  return spline_through_knots(times, knots, clearance);
}

}  // namespace quadleg
