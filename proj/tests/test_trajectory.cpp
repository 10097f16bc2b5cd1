#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "quadleg/trajectory.hpp"
#include "support.hpp"

using namespace quadleg;
using qltest::Rng;

namespace {

// Independent route: solve the 4x4 boundary-condition system numerically.
CubicCoefficients fit_by_linear_system(double q0, double q1, double v0, double v1, double T) {
  Eigen::Matrix4d m;
  m << 1, 0, 0, 0,
       1, T, T * T, T * T * T,
       0, 1, 0, 0,
       0, 1, 2 * T, 3 * T * T;
  const Eigen::Vector4d c = m.fullPivLu().solve(Eigen::Vector4d(q0, q1, v0, v1));
  return {c(0), c(1), c(2), c(3)};
}

}  // namespace

TEST_CASE("fit_cubic: rest at the same pose is constant") {
  const CubicCoefficients c = fit_cubic(0.7, 0.7, 0.0, 0.0, 2.3);
  CHECK(c.c0 == 0.7);
  CHECK(c.c1 == 0.0);
  CHECK(c.c2 == 0.0);
  CHECK(c.c3 == 0.0);
}

TEST_CASE("fit_cubic: unit rest-to-rest step is 3t^2 - 2t^3") {
  const CubicCoefficients c = fit_cubic(0.0, 1.0, 0.0, 0.0, 1.0);
  CHECK(std::abs(c.c0 - 0.0) < 1e-12);
  CHECK(std::abs(c.c1 - 0.0) < 1e-12);
  CHECK(std::abs(c.c2 - 3.0) < 1e-12);
  CHECK(std::abs(c.c3 + 2.0) < 1e-12);
}

TEST_CASE("fit_cubic: uniform-velocity motion is exactly representable") {
  const double v = 0.5, T = 2.0;  // dyadic so the algebra cancels exactly
  const CubicCoefficients c = fit_cubic(0.0, v * T, v, v, T);
  CHECK(c.c0 == 0.0);
  CHECK(c.c1 == v);
  CHECK(c.c2 == 0.0);
  CHECK(c.c3 == 0.0);
}

TEST_CASE("fit_cubic rejects non-positive durations") {
  CHECK_THROWS_AS(fit_cubic(0, 1, 0, 0, 0.0), NonpositiveDuration);
  CHECK_THROWS_AS(fit_cubic(0, 1, 0, 0, -0.5), NonpositiveDuration);
}

TEST_CASE("fit_cubic: boundary conditions hold over random draws") {
  Rng rng(0x2718281828ull);
  for (int i = 0; i < 10000; ++i) {
    const double q0 = rng.uniform(-kPi, kPi), q1 = rng.uniform(-kPi, kPi);
    const double v0 = rng.uniform(-10, 10), v1 = rng.uniform(-10, 10);
    const double T = rng.uniform(0.05, 5.0);
    const CubicCoefficients c = fit_cubic(q0, q1, v0, v1, T);
    REQUIRE(std::abs(c.position(0.0) - q0) < 1e-12);
    REQUIRE(std::abs(c.velocity(0.0) - v0) < 1e-12);
    REQUIRE(std::abs(c.position(T) - q1) < 1e-12);
    REQUIRE(std::abs(c.velocity(T) - v1) < 1e-12);
  }
}

TEST_CASE("fit_cubic agrees with a direct linear-system solve") {
  Rng rng(0x31415926ull);
  for (int i = 0; i < 200; ++i) {
    const double q0 = rng.uniform(-2, 2), q1 = rng.uniform(-2, 2);
    const double v0 = rng.uniform(-5, 5), v1 = rng.uniform(-5, 5);
    const double T = rng.uniform(0.1, 4.0);
    const CubicCoefficients a = fit_cubic(q0, q1, v0, v1, T);
    const CubicCoefficients b = fit_by_linear_system(q0, q1, v0, v1, T);
    REQUIRE(std::abs(a.c0 - b.c0) < 1e-9);
    REQUIRE(std::abs(a.c1 - b.c1) < 1e-9);
    REQUIRE(std::abs(a.c2 - b.c2) < 1e-9 * std::max(1.0, std::abs(b.c2)));
    REQUIRE(std::abs(a.c3 - b.c3) < 1e-9 * std::max(1.0, std::abs(b.c3)));
  }
}

TEST_CASE("fit_cubic is deterministic") {
  const CubicCoefficients a = fit_cubic(0.1, -0.9, 0.3, -0.2, 1.7);
  const CubicCoefficients b = fit_cubic(0.1, -0.9, 0.3, -0.2, 1.7);
  CHECK(a.c0 == b.c0);
  CHECK(a.c1 == b.c1);
  CHECK(a.c2 == b.c2);
  CHECK(a.c3 == b.c3);
}

TEST_CASE("sample_trajectory: endpoints and the worked cubic") {
  CubicJointTrajectory traj;
  traj.duration = 1.0;
  traj.joints[0] = {0.0, 0.0, 3.0, -2.0};
  traj.joints[1] = fit_cubic(0.2, -0.4, 0.0, 0.0, 1.0);
  traj.joints[2] = fit_cubic(-1.0, 1.0, 0.5, -0.5, 1.0);

  const auto [q0, v0] = sample_trajectory(traj, 0.0);
  CHECK(q0.theta1 == traj.joints[0].c0);
  CHECK(v0.dtheta1 == traj.joints[0].c1);
  CHECK(q0.theta2 == traj.joints[1].c0);
  CHECK(v0.dtheta2 == traj.joints[1].c1);

  const auto [qh, vh] = sample_trajectory(traj, 0.5);
  CHECK(qh.theta1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(vh.dtheta1 == doctest::Approx(1.5).epsilon(1e-12));

  const auto [qT, vT] = sample_trajectory(traj, 1.0);
  CHECK(std::abs(qT.theta1 - 1.0) < 1e-12);
  CHECK(std::abs(vT.dtheta1) < 1e-12);
  CHECK(std::abs(qT.theta3 - 1.0) < 1e-12);
  CHECK(std::abs(vT.dtheta3 + 0.5) < 1e-12);

  CHECK_THROWS_AS(sample_trajectory(traj, -0.01), TimeOutOfRange);
  CHECK_THROWS_AS(sample_trajectory(traj, 1.01), TimeOutOfRange);
}

TEST_CASE("plan_swing: zero-stride step lifts to the apex and returns") {
  const LegGeometry g;
  const FootPosition start{0.14, 0.0, -0.08};
  const SwingPlan plan = plan_swing(g, start, start, 0.02, 0.8, 8);

  const auto [q0, v0] = plan.sample(0.0);
  const FootPosition p0 = forward_kinematics(g, q0);
  CHECK(std::hypot(std::hypot(p0.x - start.x, p0.y - start.y), p0.z - start.z) < 1e-9);
  const auto [qT, vT] = plan.sample(plan.duration());
  const FootPosition pT = forward_kinematics(g, qT);
  CHECK(std::hypot(std::hypot(pT.x - start.x, pT.y - start.y), pT.z - start.z) < 1e-9);

  // Mid-knot foot at the apex, clearance above the (degenerate) chord.
  const FootPosition apex = forward_kinematics(g, plan.knots[4].angles);
  CHECK(apex.z == doctest::Approx(start.z + 0.02).epsilon(1e-7));

  CHECK(std::abs(v0.dtheta1) < 1e-12);
  CHECK(std::abs(v0.dtheta2) < 1e-12);
  CHECK(std::abs(v0.dtheta3) < 1e-12);
  CHECK(std::abs(vT.dtheta1) < 1e-12);
  CHECK(std::abs(vT.dtheta2) < 1e-12);
  CHECK(std::abs(vT.dtheta3) < 1e-12);
}

TEST_CASE("plan_swing: every knot reproduces its arc sample through FK") {
  const LegGeometry g;
  const FootPosition start{0.12, -0.03, -0.08};
  const FootPosition end{0.15, 0.04, -0.08};
  const int n = 8;
  const SwingPlan plan = plan_swing(g, start, end, 0.025, 1.0, n);
  REQUIRE(plan.knots.size() == n + 1);
  for (int k = 0; k <= n; ++k) {
    const Eigen::Vector3d arc = swing_arc_point({start.x, start.y, start.z},
                                                {end.x, end.y, end.z}, 0.025,
                                                static_cast<double>(k) / n);
    const FootPosition p = forward_kinematics(g, plan.knots[k].angles);
    REQUIRE((Eigen::Vector3d(p.x, p.y, p.z) - arc).norm() < 1e-9);
  }
}

TEST_CASE("plan_swing: continuity and apex clearance over random plans") {
  Rng rng(0x5ca1ab1eull);
  const LegGeometry g;
  int built = 0;
  for (int i = 0; i < 1000; ++i) {
    const double clearance = rng.uniform(0.005, 0.03);
    const int n = 2 * rng.uniform_int(2, 8);  // even so a knot sits at the apex
    const double T = rng.uniform(0.2, 2.0);
    const FootPosition start{rng.uniform(0.10, 0.15), rng.uniform(-0.04, 0.04),
                             rng.uniform(-0.10, -0.06)};
    const FootPosition end{rng.uniform(0.10, 0.15), rng.uniform(-0.04, 0.04),
                           rng.uniform(-0.10, -0.06)};
    SwingPlan plan;
    try {
      plan = plan_swing(g, start, end, clearance, T, n);
    } catch (const Error&) {
      continue;  // rare unreachable draw
    }
    ++built;

    for (size_t s = 0; s + 1 < plan.segments.size(); ++s) {
      const auto [qa, va] = sample_trajectory(plan.segments[s], plan.segments[s].duration);
      const auto [qb, vb] = sample_trajectory(plan.segments[s + 1], 0.0);
      REQUIRE(std::abs(qa.theta1 - qb.theta1) < 1e-9);
      REQUIRE(std::abs(qa.theta2 - qb.theta2) < 1e-9);
      REQUIRE(std::abs(qa.theta3 - qb.theta3) < 1e-9);
      REQUIRE(std::abs(va.dtheta1 - vb.dtheta1) < 1e-9);
      REQUIRE(std::abs(va.dtheta2 - vb.dtheta2) < 1e-9);
      REQUIRE(std::abs(va.dtheta3 - vb.dtheta3) < 1e-9);
    }

    const auto [q0, v0] = plan.sample(0.0);
    const auto [qT, vT] = plan.sample(plan.duration());
    REQUIRE(std::abs(v0.dtheta1) < 1e-12);
    REQUIRE(std::abs(vT.dtheta1) < 1e-12);

    // Apex height above the start-end chord through FK at the middle knot.
    const FootPosition mid = forward_kinematics(g, plan.knots[plan.knots.size() / 2].angles);
    const Eigen::Vector3d a(start.x, start.y, start.z), b(end.x, end.y, end.z);
    const Eigen::Vector3d p(mid.x, mid.y, mid.z);
    const Eigen::Vector3d chord = b - a;
    double height;
    if (chord.norm() < 1e-12) {
      height = (p - a).norm();
    } else {
      height = ((p - a) - chord * (p - a).dot(chord) / chord.squaredNorm()).norm();
    }
    REQUIRE(height >= 0.99 * clearance);
    (void)q0;
    (void)qT;
  }
  CHECK(built > 900);
}

TEST_CASE("plan_swing: unreachable samples and forced branch flips are reported") {
  const LegGeometry g;
  // Start is reachable; the apex of a 0.12 m lift is not.
  CHECK_THROWS_AS(plan_swing(g, {0.23, 0, -0.01}, {0.23, 0, -0.01}, 0.12, 1.0, 8),
                  UnreachableSample);

  JointLimits up_only;
  up_only.joint[2] = {deg_to_rad(5.0), kPi};  // knee may only bend upward
  CHECK_THROWS_AS(plan_swing(g, {0.12, 0, -0.08}, {0.15, 0, -0.08}, 0.02, 1.0, 8,
                             ElbowBranch::Down, up_only),
                  BranchFlip);
}

TEST_CASE("swing_arc_point: endpoints, apex and degenerate chord") {
  const Eigen::Vector3d a(0.1, 0.0, -0.08), b(0.14, 0.02, -0.08);
  CHECK((swing_arc_point(a, b, 0.02, 0.0) - a).norm() == 0.0);
  CHECK((swing_arc_point(a, b, 0.02, 1.0) - b).norm() < 1e-15);
  const Eigen::Vector3d apex = swing_arc_point(a, b, 0.02, 0.5);
  CHECK(apex.z() == doctest::Approx(-0.06).epsilon(1e-12));

  const Eigen::Vector3d lift = swing_arc_point(a, a, 0.02, 0.5);
  CHECK((lift - (a + Eigen::Vector3d(0, 0, 0.02))).norm() < 1e-15);
}
