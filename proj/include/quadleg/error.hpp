#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace quadleg {

/// Base class for all quadleg domain errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Config file could not be read or parsed (carries line/key context).
struct ParseError : Error {
  using Error::Error;
};

/// Config parsed but violates one or more invariants.
struct ValidationError : Error {
  explicit ValidationError(std::vector<std::string> violations_)
      : Error(join(violations_)), violations(std::move(violations_)) {}
  std::vector<std::string> violations;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid config:";
    for (const auto& item : v) s += "\n  " + item;
    return s;
  }
};

/// IK target outside the leg workspace.
struct Unreachable : Error {
  using Error::Error;
};

/// IK target on the hip axis with a1 > 0: no hip yaw satisfies the
/// position equations there.
struct DegenerateTarget : Error {
  using Error::Error;
};

/// Jacobian is (numerically) rank deficient; velocity inverse undefined.
struct SingularConfiguration : Error {
  using Error::Error;
};

struct NonpositiveDuration : Error {
  using Error::Error;
};

struct TimeOutOfRange : Error {
  using Error::Error;
};

/// A swing-arc sample could not be solved by IK.
struct UnreachableSample : Error {
  UnreachableSample(int index, double x, double y, double z, const std::string& why)
      : Error("swing sample " + std::to_string(index) + " at (" + std::to_string(x) + ", " +
              std::to_string(y) + ", " + std::to_string(z) + ") unreachable: " + why),
        sample_index(index), target_x(x), target_y(y), target_z(z) {}
  int sample_index;
  double target_x, target_y, target_z;
};

/// Staying on the requested elbow branch would violate joint limits
/// mid-swing while the opposite branch is legal.
struct BranchFlip : Error {
  using Error::Error;
};

struct StrideUnreachable : Error {
  StrideUnreachable(const std::string& leg, const std::string& phase, const std::string& why)
      : Error("stride unreachable for leg " + leg + " during " + phase + ": " + why),
        leg_id(leg), phase(phase) {}
  std::string leg_id;
  std::string phase;
};

struct StabilityViolation : Error {
  StabilityViolation(double min_margin_, double required)
      : Error("stability margin " + std::to_string(min_margin_) + " m below required minimum " +
              std::to_string(required) + " m"),
        min_margin(min_margin_), required_margin(required) {}
  double min_margin;
  double required_margin;
};

/// Fewer than 3 distinct support points, or all collinear.
struct DegenerateSupport : Error {
  using Error::Error;
};

struct AngleOutOfRange : Error {
  AngleOutOfRange(int channel_, double angle_deg_, double min_deg, double max_deg,
                  const std::string& context = "")
      : Error(context + "channel " + std::to_string(channel_) + ": commanded angle " +
              std::to_string(angle_deg_) + " deg outside calibrated range [" +
              std::to_string(min_deg) + ", " + std::to_string(max_deg) + "] deg"),
        channel(channel_), angle_deg(angle_deg_), range_min_deg(min_deg), range_max_deg(max_deg) {}
  int channel;
  double angle_deg;
  double range_min_deg, range_max_deg;
};

}  // namespace quadleg
