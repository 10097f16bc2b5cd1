#include "quadleg/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "json.hpp"

namespace quadleg {

using nlohmann::json;

std::string to_string(LegId id) {
  switch (id) {
    case LegId::LF: return "LF";
    case LegId::RF: return "RF";
    case LegId::LR: return "LR";
    case LegId::RR: return "RR";
  }
  return "??";
}

LegId leg_id_from_string(const std::string& s) {
  if (s == "LF") return LegId::LF;
  if (s == "RF") return LegId::RF;
  if (s == "LR") return LegId::LR;
  if (s == "RR") return LegId::RR;
  throw ParseError("unknown leg id \"" + s + "\" (expected LF, RF, LR or RR)");
}

const LegMount& BodyLayout::leg(LegId id) const {
  for (const auto& m : legs) {
    if (m.id == id) return m;
  }
  throw Error("leg " + to_string(id) + " not present in layout");
}

int BodyLayout::leg_index(LegId id) const {
  for (size_t i = 0; i < legs.size(); ++i) {
    if (legs[i].id == id) return static_cast<int>(i);
  }
  throw Error("leg " + to_string(id) + " not present in layout");
}

const ServoChannelCal* ServoCalibration::find(int ch) const {
  for (const auto& c : channels) {
    if (c.channel == ch) return &c;
  }
  return nullptr;
}

const ServoChannelCal& ServoCalibration::channel(int ch) const {
  const ServoChannelCal* c = find(ch);
  if (!c) throw Error("no calibration for channel " + std::to_string(ch));
  return *c;
}

namespace {

const json& member(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + "." + key + ": missing key");
  return *it;
}

double number(const json& j, const char* key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_number()) throw ParseError(path + "." + key + ": expected a number");
  return v.get<double>();
}

std::string text(const json& j, const char* key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_string()) throw ParseError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

// Degree value whose deg_to_rad image is bit-exactly `rad`, so that a
// save/load round trip is identity. File-originated radians always have such
// a preimage within a couple of ulps of the naive conversion.
double exact_deg(double rad) {
  double deg = rad_to_deg(rad);
  if (deg_to_rad(deg) == rad) return deg;
  for (int step = 1; step <= 4; ++step) {
    const double up = std::nextafter(deg, std::numeric_limits<double>::infinity());
    const double dn = std::nextafter(deg, -std::numeric_limits<double>::infinity());
    if (deg_to_rad(up) == rad) return up;
    if (deg_to_rad(dn) == rad) return dn;
    deg = (step % 2) ? up : dn;
  }
  return rad_to_deg(rad);
}

bool mounts_collinear(const BodyLayout& layout) {
  // Max perpendicular distance of any mount from the line through the two
  // most distant mounts.
  double best = -1.0;
  int ia = 0, ib = 1;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double dx = layout.legs[j].mount_x - layout.legs[i].mount_x;
      const double dy = layout.legs[j].mount_y - layout.legs[i].mount_y;
      const double d2 = dx * dx + dy * dy;
      if (d2 > best) {
        best = d2;
        ia = i;
        ib = j;
      }
    }
  }
  const double len = std::sqrt(best);
  if (len < 1e-9) return true;  // all mounts coincide
  const double ax = layout.legs[ia].mount_x, ay = layout.legs[ia].mount_y;
  const double ux = (layout.legs[ib].mount_x - ax) / len;
  const double uy = (layout.legs[ib].mount_y - ay) / len;
  double max_dist = 0.0;
  for (const auto& m : layout.legs) {
    const double cross = std::abs(ux * (m.mount_y - ay) - uy * (m.mount_x - ax));
    max_dist = std::max(max_dist, cross);
  }
  return max_dist < 1e-9;
}

}  // namespace

std::vector<std::string> validate_config(const RobotConfig& cfg) {
  std::vector<std::string> v;
  const auto& g = cfg.geometry;
  if (!(g.a1 >= 0.0)) v.push_back("a1 >= 0");
  if (!(g.a2 > 0.0)) v.push_back("a2 > 0");
  if (!(g.a3 > 0.0)) v.push_back("a3 > 0");
  if (g.d != std::array<double, 3>{0.0, 0.0, 0.0}) v.push_back("d = (0, 0, 0)");
  if (g.alpha != std::array<double, 3>{kPi / 2.0, 0.0, 0.0}) v.push_back("alpha = (pi/2, 0, 0)");

  for (int i = 0; i < 3; ++i) {
    if (!(cfg.limits.joint[i].min_rad < cfg.limits.joint[i].max_rad)) {
      v.push_back("joint" + std::to_string(i + 1) + " limits: min < max");
    }
  }

  std::set<LegId> ids;
  for (const auto& m : cfg.layout.legs) ids.insert(m.id);
  if (ids.size() != 4) v.push_back("exactly 4 legs with distinct ids");
  if (mounts_collinear(cfg.layout)) v.push_back("support polygon must have area (mounts collinear)");
  if (!(cfg.layout.body_height > 0.0)) v.push_back("body height > 0");

  std::set<int> used_channels;
  for (const auto& m : cfg.layout.legs) {
    for (int ch : m.channels) {
      if (ch < 0 || ch > 15) v.push_back("channel indices in [0, 15]");
      if (!used_channels.insert(ch).second) {
        v.push_back("channel " + std::to_string(ch) + " assigned to more than one joint");
      }
      if (!cfg.calibration.find(ch)) {
        v.push_back("channel " + std::to_string(ch) + " has no servo calibration");
      }
    }
  }
  for (const auto& c : cfg.calibration.channels) {
    if (c.pulse_min_us < 400.0 || c.pulse_min_us > 2600.0 || c.pulse_max_us < 400.0 ||
        c.pulse_max_us > 2600.0) {
      v.push_back("channel " + std::to_string(c.channel) + ": pulse widths within [400, 2600] us");
    }
    if (!(c.pulse_min_us < c.pulse_max_us)) {
      v.push_back("channel " + std::to_string(c.channel) + ": pulse_min < pulse_max");
    }
    if (!(c.angle_min_deg < c.angle_max_deg)) {
      v.push_back("channel " + std::to_string(c.channel) + ": angle_min < angle_max");
    }
    if (c.direction != 1 && c.direction != -1) {
      v.push_back("channel " + std::to_string(c.channel) + ": direction is +1 or -1");
    }
  }

  const auto& gd = cfg.gait;
  if (!(gd.duty_factor > 0.5 && gd.duty_factor < 1.0)) v.push_back("duty factor in (0.5, 1.0)");
  if (!(gd.stride_m > 0.0)) v.push_back("stride > 0");
  if (!(gd.clearance_m > 0.0)) v.push_back("step clearance > 0");
  if (!(gd.cycle_s > 0.0)) v.push_back("cycle period > 0");
  if (!(gd.margin_min_m >= 0.0)) v.push_back("minimum stability margin >= 0");
  {
    std::set<LegId> order(gd.swing_order.begin(), gd.swing_order.end());
    if (order.size() != 4) v.push_back("swing order must list each leg exactly once");
  }
  return v;
}

namespace {

RobotConfig config_from_json(const json& root) {
  RobotConfig cfg;

  const json& geo = member(root, "geometry", "config");
  cfg.geometry.a1 = number(geo, "a1", "geometry");
  cfg.geometry.a2 = number(geo, "a2", "geometry");
  cfg.geometry.a3 = number(geo, "a3", "geometry");

  const json& lim = member(root, "limits", "config");
  const char* joint_keys[3] = {"joint1", "joint2", "joint3"};
  for (int i = 0; i < 3; ++i) {
    const json& jj = member(lim, joint_keys[i], "limits");
    const std::string path = std::string("limits.") + joint_keys[i];
    cfg.limits.joint[i].min_rad = deg_to_rad(number(jj, "min_deg", path));
    cfg.limits.joint[i].max_rad = deg_to_rad(number(jj, "max_deg", path));
  }

  const json& legs = member(root, "legs", "config");
  if (!legs.is_array()) throw ParseError("legs: expected an array");
  if (legs.size() != 4) throw ValidationError({"exactly 4 legs"});
  for (size_t i = 0; i < 4; ++i) {
    const std::string path = "legs[" + std::to_string(i) + "]";
    const json& l = legs[i];
    LegMount& m = cfg.layout.legs[i];
    m.id = leg_id_from_string(text(l, "id", path));
    m.mount_x = number(l, "mount_x", path);
    m.mount_y = number(l, "mount_y", path);
    m.mount_yaw = deg_to_rad(number(l, "mount_yaw_deg", path));
    const json& ch = member(l, "channels", path);
    if (!ch.is_array() || ch.size() != 3) throw ParseError(path + ".channels: expected 3 entries");
    for (size_t k = 0; k < 3; ++k) {
      if (!ch[k].is_number_integer()) throw ParseError(path + ".channels: expected integers");
      m.channels[k] = ch[k].get<int>();
    }
  }

  const json& servo = member(root, "servo", "config");
  ServoChannelCal base;
  base.pulse_min_us = number(servo, "pulse_min_us", "servo");
  base.pulse_max_us = number(servo, "pulse_max_us", "servo");
  base.angle_min_deg = number(servo, "angle_min_deg", "servo");
  base.angle_max_deg = number(servo, "angle_max_deg", "servo");
  for (const auto& m : cfg.layout.legs) {
    for (int ch : m.channels) {
      ServoChannelCal c = base;
      c.channel = ch;
      cfg.calibration.channels.push_back(c);
    }
  }
  if (auto it = servo.find("channels"); it != servo.end()) {
    if (!it->is_object()) throw ParseError("servo.channels: expected an object");
    for (auto& [key, ov] : it->items()) {
      int ch;
      try {
        ch = std::stoi(key);
      } catch (const std::exception&) {
        throw ParseError("servo.channels: key \"" + key + "\" is not a channel index");
      }
      bool found = false;
      for (auto& c : cfg.calibration.channels) {
        if (c.channel != ch) continue;
        found = true;
        if (auto inv = ov.find("invert"); inv != ov.end()) {
          if (!inv->is_boolean()) throw ParseError("servo.channels." + key + ".invert: expected a boolean");
          c.direction = inv->get<bool>() ? -1 : 1;
        }
        if (auto tr = ov.find("trim_deg"); tr != ov.end()) {
          if (!tr->is_number()) throw ParseError("servo.channels." + key + ".trim_deg: expected a number");
          c.trim_deg = tr->get<double>();
        }
      }
      if (!found) throw ParseError("servo.channels." + key + ": channel not used by any leg");
    }
  }

  const json& gait = member(root, "gait", "config");
  cfg.gait.duty_factor = number(gait, "duty_factor", "gait");
  cfg.gait.stride_m = number(gait, "stride_m", "gait");
  cfg.gait.clearance_m = number(gait, "clearance_m", "gait");
  cfg.layout.body_height = number(gait, "body_height_m", "gait");
  cfg.gait.cycle_s = number(gait, "cycle_s", "gait");
  cfg.gait.margin_min_m = number(gait, "margin_min_m", "gait");
  const json& order = member(gait, "swing_order", "gait");
  if (!order.is_array() || order.size() != 4) {
    throw ParseError("gait.swing_order: expected 4 leg ids");
  }
  for (size_t i = 0; i < 4; ++i) {
    if (!order[i].is_string()) throw ParseError("gait.swing_order: expected leg id strings");
    cfg.gait.swing_order[i] = leg_id_from_string(order[i].get<std::string>());
  }
  return cfg;
}

}  // namespace

RobotConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  RobotConfig cfg = config_from_json(root);
  std::vector<std::string> violations = validate_config(cfg);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return cfg;
}

void save_config(const RobotConfig& cfg, const std::string& path) {
  json root;
  root["geometry"] = {{"a1", cfg.geometry.a1}, {"a2", cfg.geometry.a2}, {"a3", cfg.geometry.a3}};

  const char* joint_keys[3] = {"joint1", "joint2", "joint3"};
  for (int i = 0; i < 3; ++i) {
    root["limits"][joint_keys[i]] = {{"min_deg", exact_deg(cfg.limits.joint[i].min_rad)},
                                     {"max_deg", exact_deg(cfg.limits.joint[i].max_rad)}};
  }

  root["legs"] = json::array();
  for (const auto& m : cfg.layout.legs) {
    root["legs"].push_back({{"id", to_string(m.id)},
                            {"mount_x", m.mount_x},
                            {"mount_y", m.mount_y},
                            {"mount_yaw_deg", exact_deg(m.mount_yaw)},
                            {"channels", m.channels}});
  }

  // The per-channel base calibration is shared; emit the first entry's base
  // values and per-channel overrides only where they differ from defaults.
  const ServoChannelCal base =
      cfg.calibration.channels.empty() ? ServoChannelCal{} : cfg.calibration.channels.front();
  root["servo"] = {{"pulse_min_us", base.pulse_min_us},
                   {"pulse_max_us", base.pulse_max_us},
                   {"angle_min_deg", base.angle_min_deg},
                   {"angle_max_deg", base.angle_max_deg}};
  json overrides = json::object();
  for (const auto& c : cfg.calibration.channels) {
    json ov = json::object();
    if (c.direction == -1) ov["invert"] = true;
    if (c.trim_deg != 0.0) ov["trim_deg"] = c.trim_deg;
    if (!ov.empty()) overrides[std::to_string(c.channel)] = ov;
  }
  if (!overrides.empty()) root["servo"]["channels"] = overrides;

  json order = json::array();
  for (LegId id : cfg.gait.swing_order) order.push_back(to_string(id));
  root["gait"] = {{"duty_factor", cfg.gait.duty_factor},
                  {"stride_m", cfg.gait.stride_m},
                  {"clearance_m", cfg.gait.clearance_m},
                  {"body_height_m", cfg.layout.body_height},
                  {"cycle_s", cfg.gait.cycle_s},
                  {"margin_min_m", cfg.gait.margin_min_m},
                  {"swing_order", order}};

  std::ofstream out(path);
  if (!out) throw ParseError("cannot write config file: " + path);
  out << root.dump(2) << "\n";
}

RobotConfig default_config() {
  RobotConfig cfg;
  cfg.geometry = LegGeometry{};
  cfg.limits = JointLimits{};
  cfg.layout.body_height = 0.080;
  cfg.layout.legs[0] = {LegId::LF, 0.060, 0.050, deg_to_rad(45.0), {0, 1, 2}};
  cfg.layout.legs[1] = {LegId::RF, 0.060, -0.050, deg_to_rad(-45.0), {4, 5, 6}};
  cfg.layout.legs[2] = {LegId::LR, -0.060, 0.050, deg_to_rad(135.0), {8, 9, 10}};
  cfg.layout.legs[3] = {LegId::RR, -0.060, -0.050, deg_to_rad(-135.0), {12, 13, 14}};
  for (const auto& m : cfg.layout.legs) {
    for (size_t j = 0; j < 3; ++j) {
      ServoChannelCal c;
      c.channel = m.channels[j];
      // Knee servo horns are mounted a quarter turn ahead so the elbow-down
      // knee range (around -98 deg at the home posture) sits inside the
      // calibrated travel.
      c.trim_deg = (j == 2) ? 90.0 : 0.0;
      cfg.calibration.channels.push_back(c);
    }
  }
  cfg.gait = GaitDefaults{};
  return cfg;
}

}  // namespace quadleg
