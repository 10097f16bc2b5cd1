#include "quadleg/servo.hpp"

#include <algorithm>
#include <cmath>

namespace quadleg {

namespace {

// Commanded servo angle after direction mirroring (about the range midpoint,
// so the midpoint is a fixed point of inversion) and trim.
double commanded_deg(const ServoChannelCal& cal, double angle_rad) {
  const double deg = rad_to_deg(angle_rad);
  const double mirrored =
      cal.direction >= 0 ? deg : (cal.angle_min_deg + cal.angle_max_deg) - deg;
  return mirrored + cal.trim_deg;
}

}  // namespace

int angle_to_pulse(const ServoChannelCal& cal, double angle_rad) {
  const double c = commanded_deg(cal, angle_rad);
  if (c < cal.angle_min_deg || c > cal.angle_max_deg) {
    throw AngleOutOfRange(cal.channel, c, cal.angle_min_deg, cal.angle_max_deg);
  }
  const double span_deg = cal.angle_max_deg - cal.angle_min_deg;
  const double pulse = cal.pulse_min_us +
                       (c - cal.angle_min_deg) / span_deg * (cal.pulse_max_us - cal.pulse_min_us);
  return static_cast<int>(std::lround(pulse));
}

double pulse_to_angle(const ServoChannelCal& cal, int pulse_us) {
  const double span_us = cal.pulse_max_us - cal.pulse_min_us;
  const double c = cal.angle_min_deg +
                   (pulse_us - cal.pulse_min_us) / span_us * (cal.angle_max_deg - cal.angle_min_deg);
  const double mirrored = c - cal.trim_deg;
  const double deg =
      cal.direction >= 0 ? mirrored : (cal.angle_min_deg + cal.angle_max_deg) - mirrored;
  return deg_to_rad(deg);
}

double quantization_bound(const ServoChannelCal& cal) {
  const double deg_per_us =
      (cal.angle_max_deg - cal.angle_min_deg) / (cal.pulse_max_us - cal.pulse_min_us);
  return deg_to_rad(0.5 * deg_per_us);
}

std::vector<ServoCommand> emit_timeline(const RobotConfig& cfg, const JointTimeline& timeline) {
  std::vector<ServoCommand> out;
  out.reserve(timeline.times.size() * 12);
  for (size_t i = 0; i < timeline.times.size(); ++i) {
    const auto t_ms = static_cast<std::int64_t>(std::llround(timeline.times[i] * 1000.0));
    std::vector<ServoCommand> frame;
    frame.reserve(12);
    for (size_t leg = 0; leg < 4; ++leg) {
      const LegMount& mount = cfg.layout.leg(timeline.legs[leg]);
      const JointAngles& q = timeline.angles[leg][i];
      const double angles[3] = {q.theta1, q.theta2, q.theta3};
      for (size_t j = 0; j < 3; ++j) {
        const ServoChannelCal& cal = cfg.calibration.channel(mount.channels[j]);
        try {
          frame.push_back({t_ms, cal.channel, angle_to_pulse(cal, angles[j])});
        } catch (const AngleOutOfRange& e) {
          throw AngleOutOfRange(e.channel, e.angle_deg, e.range_min_deg, e.range_max_deg,
                                "sample " + std::to_string(i) + " (t = " +
                                    std::to_string(timeline.times[i]) + " s): ");
        }
      }
    }
    std::sort(frame.begin(), frame.end(),
              [](const ServoCommand& a, const ServoCommand& b) { return a.channel < b.channel; });
    out.insert(out.end(), frame.begin(), frame.end());
  }
  return out;
}

}  // namespace quadleg
