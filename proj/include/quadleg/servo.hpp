#pragma once

#include <cstdint>
#include <vector>

#include "quadleg/gait.hpp"
#include "quadleg/model.hpp"

namespace quadleg {

struct ServoCommand {
  std::int64_t t_ms = 0;  // non-negative
  int channel = 0;
  int pulse_us = 0;
};

/// Linear map from a joint angle to a pulse width, rounded to the nearest
/// microsecond. Throws AngleOutOfRange when the commanded angle (after
/// direction mirroring and trim) leaves the calibrated range.
int angle_to_pulse(const ServoChannelCal& cal, double angle_rad);

/// Inverse of angle_to_pulse up to the 1 us quantization.
double pulse_to_angle(const ServoChannelCal& cal, int pulse_us);

/// Worst-case |angle - pulse_to_angle(angle_to_pulse(angle))| [rad].
double quantization_bound(const ServoChannelCal& cal);

/// One command per (sample, channel), ordered by time then channel.
std::vector<ServoCommand> emit_timeline(const RobotConfig& cfg, const JointTimeline& timeline);

}  // namespace quadleg
