#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "quadleg/model.hpp"

namespace quadleg {

/// 4x4 frame transform. Invariants: bottom row (0,0,0,1), rotation block
/// orthonormal with det +1.
using HomogeneousTransform = Eigen::Matrix4d;

/// 3x3 matrix of foot-position partials w.r.t. the joint angles [m/rad].
using JacobianMatrix = Eigen::Matrix3d;

struct JointAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;

  JointAngles normalized() const;
};

struct JointVelocities {
  double dtheta1 = 0.0;
  double dtheta2 = 0.0;
  double dtheta3 = 0.0;
};

/// Foot-tip position in the leg frame: origin at the hip yaw joint,
/// x outward along the mount direction at theta1 = 0, z up.
struct FootPosition {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct FootVelocity {
  double vx = 0.0;
  double vy = 0.0;
  double vz = 0.0;
};

/// Elbow-down: sin(theta3) <= 0 (tibia folds downward).
enum class ElbowBranch { Down, Up };

std::string to_string(ElbowBranch b);

struct IkSolution {
  JointAngles angles;
  ElbowBranch branch = ElbowBranch::Down;
  bool within_limits = true;
};

/// Wraps an angle to (-pi, pi].
double normalize_angle(double rad);

/// Single-joint transform in the standard DH form
///   [ c_t  -s_t*c_a   s_t*s_a   a*c_t ]
///   [ s_t   c_t*c_a  -c_t*s_a   a*s_t ]
///   [ 0     s_a        c_a       d    ]
///   [ 0     0          0         1    ]
HomogeneousTransform dh_transform(double theta, double alpha, double a, double d);

/// Hip-to-foot transform: the product of the three per-joint DH transforms.
HomogeneousTransform leg_transform(const LegGeometry& geom, const JointAngles& q);

/// Closed-form foot position
///   X = (a1 + a2*cos(t2) + a3*cos(t2+t3)) * cos(t1)
///   Y = (a1 + a2*cos(t2) + a3*cos(t2+t3)) * sin(t1)
///   Z =  a2*sin(t2) + a3*sin(t2+t3)
/// Agrees with the translation column of leg_transform; the two are kept as
/// independent code paths so each validates the other.
FootPosition forward_kinematics(const LegGeometry& geom, const JointAngles& q);

/// Closed-form position IK. Returns one solution per reachable elbow branch
/// (a single solution when the branches coincide at the straight-knee
/// boundary), elbow-down first when no preference is given; with a branch
/// preference only matching solutions are returned. Solutions are
/// normalized to (-pi, pi] and flagged against `limits`.
/// Throws Unreachable when the target is outside the workspace and
/// DegenerateTarget when X = Y = 0 with a1 > 0 (theta1 undefined there;
/// with a1 = 0 the convention theta1 = 0 applies).
std::vector<IkSolution> inverse_kinematics(const LegGeometry& geom, const FootPosition& target,
                                           std::optional<ElbowBranch> branch = std::nullopt,
                                           const JointLimits& limits = JointLimits{});

/// Analytic partials of the closed-form foot position w.r.t. the joint
/// angles. Singular exactly where sin(theta3) = 0 (straight knee) or the
/// foot sits on the hip axis.
JacobianMatrix jacobian(const LegGeometry& geom, const JointAngles& q);

/// Solves J * qdot = pdot. Throws SingularConfiguration when
/// |det J| < 1e-8 * (a1+a2+a3)^3.
JointVelocities joint_velocities(const LegGeometry& geom, const JointAngles& q,
                                 const FootVelocity& foot_velocity);

double jacobian_determinant_threshold(const LegGeometry& geom);

/// Body-frame point -> leg frame (translate by the mount, rotate by -yaw).
FootPosition body_to_leg_frame(const BodyLayout& layout, LegId leg, const FootPosition& body_point);

/// Inverse of body_to_leg_frame.
FootPosition leg_to_body_frame(const BodyLayout& layout, LegId leg, const FootPosition& leg_point);

}  // namespace quadleg
