#pragma once

#include <array>
#include <string>
#include <vector>

#include "quadleg/error.hpp"

namespace quadleg {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

enum class LegId { LF, RF, LR, RR };

std::string to_string(LegId id);
LegId leg_id_from_string(const std::string& s);

/// Link lengths and the fixed DH constants of one RRR leg. All four legs
/// share the same geometry. The twist/offset values are pinned: the leg has
/// no prismatic offsets and only alpha = (pi/2, 0, 0) reproduces the foot
/// position equations with Z measured positive-up.
struct LegGeometry {
  double a1 = 0.040;  // hip yaw link [m]
  double a2 = 0.080;  // femur [m]
  double a3 = 0.120;  // tibia [m]
  std::array<double, 3> alpha = {kPi / 2.0, 0.0, 0.0};  // link twists [rad]
  std::array<double, 3> d = {0.0, 0.0, 0.0};            // joint offsets [m]

  double total_reach() const { return a1 + a2 + a3; }
};

struct JointLimits {
  struct Range {
    double min_rad;
    double max_rad;
  };
  std::array<Range, 3> joint = {{{-kPi / 2.0, kPi / 2.0}, {-kPi, kPi}, {-kPi, kPi}}};

  bool contains(int joint_index, double angle_rad) const {
    const Range& r = joint[static_cast<size_t>(joint_index)];
    return angle_rad >= r.min_rad && angle_rad <= r.max_rad;
  }
};

/// Where a leg attaches to the base plate: mount point and outward yaw in
/// the body frame, plus the servo channel of each of its three joints.
struct LegMount {
  LegId id = LegId::LF;
  double mount_x = 0.0;   // [m], body frame
  double mount_y = 0.0;   // [m], body frame
  double mount_yaw = 0.0; // [rad], leg-frame +x direction in the body frame
  std::array<int, 3> channels = {0, 1, 2};
};

struct BodyLayout {
  std::array<LegMount, 4> legs;
  double body_height = 0.080;  // body plane above ground [m]

  const LegMount& leg(LegId id) const;
  int leg_index(LegId id) const;
};

/// Pulse calibration of one servo channel. angle_min_deg maps to
/// pulse_min_us and angle_max_deg to pulse_max_us; direction -1 mirrors the
/// commanded angle about the range midpoint; trim is added after mirroring.
struct ServoChannelCal {
  int channel = 0;
  double pulse_min_us = 500.0;
  double pulse_max_us = 2500.0;
  double angle_min_deg = -90.0;
  double angle_max_deg = 90.0;
  int direction = 1;  // +1 or -1
  double trim_deg = 0.0;
};

struct ServoCalibration {
  std::vector<ServoChannelCal> channels;

  const ServoChannelCal* find(int channel) const;
  const ServoChannelCal& channel(int channel) const;
};

struct GaitDefaults {
  double duty_factor = 0.8;
  double stride_m = 0.04;
  double clearance_m = 0.02;
  double cycle_s = 4.0;
  double margin_min_m = 0.005;
  std::array<LegId, 4> swing_order = {LegId::LF, LegId::RR, LegId::RF, LegId::LR};
};

/// Immutable after load; safe to share across threads.
struct RobotConfig {
  LegGeometry geometry;
  BodyLayout layout;
  JointLimits limits;
  ServoCalibration calibration;
  GaitDefaults gait;
};

/// Returns one line per violated invariant; empty means the config is valid.
std::vector<std::string> validate_config(const RobotConfig& cfg);

/// Parses and fully validates a config file.
/// Throws ParseError (malformed file / bad key, with context) or
/// ValidationError (names each violated invariant).
RobotConfig load_config(const std::string& path);

/// Writes cfg so that load_config(save_config(cfg)) is identity on all
/// fields to full precision.
void save_config(const RobotConfig& cfg, const std::string& path);

/// The shipped default robot (same values as configs/quadruped.json).
RobotConfig default_config();

}  // namespace quadleg
