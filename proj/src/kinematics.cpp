#include "quadleg/kinematics.hpp"

#include <cmath>

namespace quadleg {

std::string to_string(ElbowBranch b) {
  return b == ElbowBranch::Down ? "elbow-down" : "elbow-up";
}

double normalize_angle(double rad) {
  double r = std::remainder(rad, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

JointAngles JointAngles::normalized() const {
  return {normalize_angle(theta1), normalize_angle(theta2), normalize_angle(theta3)};
}

HomogeneousTransform dh_transform(double theta, double alpha, double a, double d) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  HomogeneousTransform t;
  t << ct, -st * ca,  st * sa, a * ct,
       st,  ct * ca, -ct * sa, a * st,
      0.0,       sa,       ca,      d,
      0.0,      0.0,      0.0,    1.0;
  return t;
}

HomogeneousTransform leg_transform(const LegGeometry& geom, const JointAngles& q) {
  const HomogeneousTransform t01 = dh_transform(q.theta1, geom.alpha[0], geom.a1, geom.d[0]);
  const HomogeneousTransform t12 = dh_transform(q.theta2, geom.alpha[1], geom.a2, geom.d[1]);
  const HomogeneousTransform t23 = dh_transform(q.theta3, geom.alpha[2], geom.a3, geom.d[2]);
  return t01 * t12 * t23;
}

FootPosition forward_kinematics(const LegGeometry& geom, const JointAngles& q) {
  const double c1 = std::cos(q.theta1), s1 = std::sin(q.theta1);
  const double c2 = std::cos(q.theta2), s2 = std::sin(q.theta2);
  const double c23 = std::cos(q.theta2 + q.theta3), s23 = std::sin(q.theta2 + q.theta3);
  const double radial = geom.a1 + geom.a2 * c2 + geom.a3 * c23;
  return {radial * c1, radial * s1, geom.a2 * s2 + geom.a3 * s23};
}

namespace {

// Planar 2R solve for the femur/tibia pair reaching (r, z) from joint 2,
// through half-angle factors: with reach D = hypot(r, z),
//   sin^2(t3/2) = (a2+a3-D)(a2+a3+D) / (4 a2 a3)
//   cos^2(t3/2) = (D-|a2-a3|)(D+|a2-a3|) / (4 a2 a3)
// This stays well conditioned where the direct arccos of
// (D^2-a2^2-a3^2)/(2 a2 a3) loses digits (near the straight knee).
struct PlanarSolve {
  bool coincident;  // straight-knee boundary: both branches identical
  double theta3_mag;
  double theta2_for(double theta3, double a2, double a3, double r, double z) const {
    return std::atan2(z, r) - std::atan2(a3 * std::sin(theta3), a2 + a3 * std::cos(theta3));
  }
};

PlanarSolve planar_ik(double a2, double a3, double r, double z) {
  const double reach = std::hypot(r, z);
  const double outer = a2 + a3 - reach;           // >= 0 inside the outer boundary
  const double inner = reach - std::abs(a2 - a3); // >= 0 outside the inner boundary
  // cos(theta3) for the reachability test, with a 1e-9 clamping band so
  // round-tripped boundary targets stay admissible.
  const double cos3 = (reach * reach - a2 * a2 - a3 * a3) / (2.0 * a2 * a3);
  if (std::abs(cos3) > 1.0 + 1e-9) {
    throw Unreachable("target outside workspace: |cos(theta3)| = " + std::to_string(std::abs(cos3)));
  }
  const double sin_half = std::sqrt(std::max(0.0, outer * (a2 + a3 + reach))) /
                          (2.0 * std::sqrt(a2 * a3));
  const double cos_half = std::sqrt(std::max(0.0, inner * (reach + std::abs(a2 - a3)))) /
                          (2.0 * std::sqrt(a2 * a3));
  PlanarSolve s{};
  s.theta3_mag = 2.0 * std::atan2(sin_half, cos_half);
  // Branches coincide when sin(theta3) vanishes: fully stretched (theta3 = 0)
  // or fully folded (theta3 = pi). The band keeps boundary targets (round
  // trips or typed-in decimals of straight-knee poses) from splitting into
  // two solutions a few 1e-7 rad apart; branch completeness only demands two
  // solutions from sin(theta3/2) ~ 2e-5 upward.
  s.coincident = sin_half <= 1e-7 || cos_half <= 1e-7;
  return s;
}

bool angles_within(const JointLimits& limits, const JointAngles& q) {
  return limits.contains(0, q.theta1) && limits.contains(1, q.theta2) &&
         limits.contains(2, q.theta3);
}

}  // namespace

std::vector<IkSolution> inverse_kinematics(const LegGeometry& geom, const FootPosition& target,
                                           std::optional<ElbowBranch> branch,
                                           const JointLimits& limits) {
  const double rho = std::hypot(target.x, target.y);
  double theta1;
  if (rho == 0.0) {
    if (geom.a1 > 0.0) {
      throw DegenerateTarget("target on the hip axis with a1 > 0: theta1 undefined");
    }
    theta1 = 0.0;  // convention for a1 = 0
  } else {
    theta1 = std::atan2(target.y, target.x);
  }

  const double r = rho - geom.a1;
  const PlanarSolve planar = planar_ik(geom.a2, geom.a3, r, target.z);

  std::vector<IkSolution> out;
  auto push = [&](double theta3, ElbowBranch label) {
    const double theta2 = planar.theta2_for(theta3, geom.a2, geom.a3, r, target.z);
    JointAngles q = JointAngles{theta1, theta2, theta3}.normalized();
    out.push_back({q, label, angles_within(limits, q)});
  };

  if (planar.coincident) {
    // sin(theta3) ~ 0: the non-positive sign keeps the elbow-down label
    // (sin(theta3) <= 0) honest; the solution satisfies either preference.
    push(planar.theta3_mag == 0.0 ? 0.0 : -planar.theta3_mag, ElbowBranch::Down);
    return out;
  }

  if (!branch || *branch == ElbowBranch::Down) push(-planar.theta3_mag, ElbowBranch::Down);
  if (!branch || *branch == ElbowBranch::Up) push(planar.theta3_mag, ElbowBranch::Up);
  return out;
}

JacobianMatrix jacobian(const LegGeometry& geom, const JointAngles& q) {
  const double c1 = std::cos(q.theta1), s1 = std::sin(q.theta1);
  const double c2 = std::cos(q.theta2), s2 = std::sin(q.theta2);
  const double c23 = std::cos(q.theta2 + q.theta3), s23 = std::sin(q.theta2 + q.theta3);
  const double radial = geom.a1 + geom.a2 * c2 + geom.a3 * c23;
  const double dslope = geom.a2 * s2 + geom.a3 * s23;

  JacobianMatrix j;
  j << -radial * s1, -dslope * c1,            -geom.a3 * s23 * c1,
        radial * c1, -dslope * s1,            -geom.a3 * s23 * s1,
                0.0,  geom.a2 * c2 + geom.a3 * c23,  geom.a3 * c23;
  return j;
}

double jacobian_determinant_threshold(const LegGeometry& geom) {
  const double reach = geom.total_reach();
  return 1e-8 * reach * reach * reach;
}

JointVelocities joint_velocities(const LegGeometry& geom, const JointAngles& q,
                                 const FootVelocity& foot_velocity) {
  const JacobianMatrix j = jacobian(geom, q);
  if (std::abs(j.determinant()) < jacobian_determinant_threshold(geom)) {
    throw SingularConfiguration("Jacobian singular at the commanded configuration");
  }
  const Eigen::Vector3d qdot =
      j.partialPivLu().solve(Eigen::Vector3d(foot_velocity.vx, foot_velocity.vy, foot_velocity.vz));
  return {qdot.x(), qdot.y(), qdot.z()};
}

FootPosition body_to_leg_frame(const BodyLayout& layout, LegId leg, const FootPosition& body_point) {
  const LegMount& m = layout.leg(leg);
  const double dx = body_point.x - m.mount_x;
  const double dy = body_point.y - m.mount_y;
  const double c = std::cos(m.mount_yaw), s = std::sin(m.mount_yaw);
  // Rotate by -yaw.
  return {c * dx + s * dy, -s * dx + c * dy, body_point.z};
}

FootPosition leg_to_body_frame(const BodyLayout& layout, LegId leg, const FootPosition& leg_point) {
  const LegMount& m = layout.leg(leg);
  const double c = std::cos(m.mount_yaw), s = std::sin(m.mount_yaw);
  return {c * leg_point.x - s * leg_point.y + m.mount_x,
          s * leg_point.x + c * leg_point.y + m.mount_y, leg_point.z};
}

}  // namespace quadleg
