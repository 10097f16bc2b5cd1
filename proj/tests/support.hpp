// Shared test helpers: a platform-pinned RNG and the independent oracles the
// test suites check against. Everything here is deliberately written from
// first principles (finite differences, O(n^3) hull, ray casting) and must
// not call into the implementation paths it validates.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "quadleg/kinematics.hpp"
#include "quadleg/model.hpp"

namespace qltest {

// mt19937_64 with an explicit 53-bit uniform so streams are identical on
// every platform (uniform_real_distribution is implementation-defined).
struct Rng {
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  std::mt19937_64 gen;

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

inline double get_joint(const quadleg::JointAngles& q, int i) {
  return i == 0 ? q.theta1 : (i == 1 ? q.theta2 : q.theta3);
}

inline void add_joint(quadleg::JointAngles& q, int i, double d) {
  if (i == 0) q.theta1 += d;
  else if (i == 1) q.theta2 += d;
  else q.theta3 += d;
}

inline quadleg::LegGeometry random_geometry(Rng& rng) {
  quadleg::LegGeometry g;
  g.a1 = rng.uniform(0.0, 0.1);
  g.a2 = rng.uniform(0.02, 0.2);
  g.a3 = rng.uniform(0.02, 0.2);
  return g;
}

inline quadleg::JointAngles random_angles(Rng& rng, const quadleg::JointLimits& lim = {}) {
  return {rng.uniform(lim.joint[0].min_rad, lim.joint[0].max_rad),
          rng.uniform(lim.joint[1].min_rad, lim.joint[1].max_rad),
          rng.uniform(lim.joint[2].min_rad, lim.joint[2].max_rad)};
}

// The closed-form foot-position equations written out long-hand; the FK and
// chain implementations are both compared against this.
inline Eigen::Vector3d position_equations(const quadleg::LegGeometry& g,
                                          const quadleg::JointAngles& q) {
  const double radial =
      g.a1 + g.a2 * std::cos(q.theta2) + g.a3 * std::cos(q.theta2 + q.theta3);
  return {radial * std::cos(q.theta1), radial * std::sin(q.theta1),
          g.a2 * std::sin(q.theta2) + g.a3 * std::sin(q.theta2 + q.theta3)};
}

// Central-difference Jacobian oracle.
inline Eigen::Matrix3d fd_jacobian(const quadleg::LegGeometry& g, const quadleg::JointAngles& q,
                                   double h = 1e-6) {
  Eigen::Matrix3d j;
  for (int col = 0; col < 3; ++col) {
    quadleg::JointAngles qp = q, qm = q;
    add_joint(qp, col, h);
    add_joint(qm, col, -h);
    const quadleg::FootPosition pp = quadleg::forward_kinematics(g, qp);
    const quadleg::FootPosition pm = quadleg::forward_kinematics(g, qm);
    j(0, col) = (pp.x - pm.x) / (2.0 * h);
    j(1, col) = (pp.y - pm.y) / (2.0 * h);
    j(2, col) = (pp.z - pm.z) / (2.0 * h);
  }
  return j;
}

// O(n^3) convex hull oracle: (i, j) is a hull edge iff every other point is
// strictly to its left; edges are then chained into CCW order starting at
// the lexicographically smallest vertex.
inline std::vector<Eigen::Vector2d> brute_hull(const std::vector<Eigen::Vector2d>& pts) {
  const size_t n = pts.size();
  auto cross = [&](size_t i, size_t j, size_t k) {
    return (pts[j].x() - pts[i].x()) * (pts[k].y() - pts[i].y()) -
           (pts[j].y() - pts[i].y()) * (pts[k].x() - pts[i].x());
  };
  std::vector<std::pair<size_t, size_t>> edges;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      bool all_left = true;
      for (size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (cross(i, j, k) <= 0.0) {
          all_left = false;
          break;
        }
      }
      if (all_left) edges.emplace_back(i, j);
    }
  }
  size_t start = edges.front().first;
  for (const auto& e : edges) {
    const auto& p = pts[e.first];
    const auto& s = pts[start];
    if (p.x() < s.x() || (p.x() == s.x() && p.y() < s.y())) start = e.first;
  }
  std::vector<Eigen::Vector2d> hull;
  size_t cur = start;
  do {
    hull.push_back(pts[cur]);
    size_t next = cur;
    for (const auto& e : edges) {
      if (e.first == cur) {
        next = e.second;
        break;
      }
    }
    cur = next;
  } while (cur != start && hull.size() <= n);
  return hull;
}

// Margin oracle: magnitude from per-edge point-to-line distances, sign from
// even-odd ray casting.
inline double oracle_margin(const std::vector<Eigen::Vector2d>& poly, const Eigen::Vector2d& p) {
  bool inside = false;
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& a = poly[j];
    const auto& b = poly[i];
    if ((b.y() > p.y()) != (a.y() > p.y())) {
      const double x_int = b.x() + (p.y() - b.y()) * (a.x() - b.x()) / (a.y() - b.y());
      if (p.x() < x_int) inside = !inside;
    }
  }
  double min_dist = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % n];
    const Eigen::Vector2d e = b - a;
    const double d = std::abs(e.x() * (p.y() - a.y()) - e.y() * (p.x() - a.x())) / e.norm();
    min_dist = std::min(min_dist, d);
  }
  return inside ? min_dist : -min_dist;
}

// Canonical rotation of a closed polygon so vertex sequences can be compared
// independently of the starting vertex.
inline std::vector<Eigen::Vector2d> canonical(const std::vector<Eigen::Vector2d>& poly) {
  size_t best = 0;
  for (size_t i = 1; i < poly.size(); ++i) {
    if (poly[i].x() < poly[best].x() ||
        (poly[i].x() == poly[best].x() && poly[i].y() < poly[best].y())) {
      best = i;
    }
  }
  std::vector<Eigen::Vector2d> out;
  for (size_t i = 0; i < poly.size(); ++i) out.push_back(poly[(best + i) % poly.size()]);
  return out;
}

}  // namespace qltest
