// quadleg CLI: config checking, FK/IK queries, crawl gait generation and
// CSV / servo timeline export.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quadleg/gait.hpp"
#include "quadleg/kinematics.hpp"
#include "quadleg/model.hpp"
#include "quadleg/servo.hpp"
#include "quadleg/trajectory.hpp"

namespace {

using namespace quadleg;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

// All-or-nothing file write: stage to a temp path, then rename.
void write_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp);
    out << contents;
  }
  std::filesystem::rename(tmp, path);
}

int cmd_check(const std::string& config_path) {
  RobotConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations) std::cout << v << "\n";
    return kExitDomain;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  std::cout << "OK\n";
  return kExitOk;
}

int cmd_fk(const std::string& config_path, const std::string& leg,
           const std::vector<double>& angles_deg) {
  const RobotConfig cfg = load_config(config_path);
  cfg.layout.leg(leg_id_from_string(leg));  // reject unknown leg ids
  const JointAngles q{deg_to_rad(angles_deg[0]), deg_to_rad(angles_deg[1]),
                      deg_to_rad(angles_deg[2])};
  const FootPosition p = forward_kinematics(cfg.geometry, q);
  std::cout << fixed(p.x, 6) << " " << fixed(p.y, 6) << " " << fixed(p.z, 6) << "\n";
  return kExitOk;
}

int cmd_ik(const std::string& config_path, const std::string& leg,
           const std::vector<double>& target, const std::string& branch_flag) {
  const RobotConfig cfg = load_config(config_path);
  cfg.layout.leg(leg_id_from_string(leg));
  std::optional<ElbowBranch> branch;
  if (branch_flag == "down") branch = ElbowBranch::Down;
  else if (branch_flag == "up") branch = ElbowBranch::Up;
  std::vector<IkSolution> sols;
  try {
    sols = inverse_kinematics(cfg.geometry, {target[0], target[1], target[2]}, branch, cfg.limits);
  } catch (const Unreachable&) {
    std::cout << "unreachable\n";
    return kExitDomain;
  } catch (const DegenerateTarget& e) {
    std::cout << e.what() << "\n";
    return kExitDomain;
  }
  if (sols.empty()) {
    std::cout << "unreachable\n";
    return kExitDomain;
  }
  for (const auto& s : sols) {
    std::cout << fixed(rad_to_deg(s.angles.theta1), 4) << " "
              << fixed(rad_to_deg(s.angles.theta2), 4) << " "
              << fixed(rad_to_deg(s.angles.theta3), 4) << " " << to_string(s.branch) << "\n";
  }
  return kExitOk;
}

std::string gait_csv(const JointTimeline& tl) {
  std::string csv = "t_s,leg,theta1_deg,theta2_deg,theta3_deg,foot_x_m,foot_y_m,foot_z_m,phase,margin_m\n";
  for (size_t i = 0; i < tl.times.size(); ++i) {
    for (size_t leg = 0; leg < 4; ++leg) {
      const JointAngles& q = tl.angles[leg][i];
      const Eigen::Vector3d& f = tl.foot_world[leg][i];
      csv += fixed(tl.times[i], 6) + "," + to_string(tl.legs[leg]) + "," +
             fixed(rad_to_deg(q.theta1), 4) + "," + fixed(rad_to_deg(q.theta2), 4) + "," +
             fixed(rad_to_deg(q.theta3), 4) + "," + fixed(f.x(), 6) + "," + fixed(f.y(), 6) +
             "," + fixed(f.z(), 6) + "," +
             (tl.roles[leg][i] == PhaseRole::Swing ? "swing" : "stance") + "," +
             fixed(tl.margins[i], 6) + "\n";
    }
  }
  return csv;
}

std::string servo_csv(const std::vector<ServoCommand>& commands) {
  std::string csv = "t_ms,channel,pulse_us\n";
  for (const auto& c : commands) {
    csv += std::to_string(c.t_ms) + "," + std::to_string(c.channel) + "," +
           std::to_string(c.pulse_us) + "\n";
  }
  return csv;
}

int cmd_gait(const std::string& config_path, int cycles, std::optional<double> stride,
             std::optional<double> period, double dt, const std::string& out_path,
             const std::string& servo_out_path, bool force) {
  const RobotConfig cfg = load_config(config_path);
  const double stride_m = stride.value_or(cfg.gait.stride_m);
  const double period_s = period.value_or(cfg.gait.cycle_s);

  GaitPlan plan;
  bool violated = false;
  try {
    plan = generate_crawl(cfg, cycles, stride_m, period_s, force);
  } catch (const StabilityViolation& e) {
    std::cout << "min_margin_m " << fixed(e.min_margin, 6) << "\n";
    std::cerr << e.what() << "\n";
    return kExitDomain;
  }
  violated = plan.stability.min_margin < cfg.gait.margin_min_m;

  const JointTimeline tl = stance_joint_timeline(cfg, plan, dt);
  if (!out_path.empty()) write_atomic(out_path, gait_csv(tl));
  if (!servo_out_path.empty()) write_atomic(servo_out_path, servo_csv(emit_timeline(cfg, tl)));
  std::cout << "min_margin_m " << fixed(plan.stability.min_margin, 6) << "\n";
  if (violated) {
    std::cerr << "stability margin below configured minimum (forced)\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadruped leg kinematics and crawl gait planner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string leg;
  std::vector<double> values;
  std::string branch_flag;
  int cycles = 1;
  std::optional<double> stride;
  std::optional<double> period;
  double dt = 0.02;
  std::string out_path;
  std::string servo_out_path;
  bool force = false;

  CLI::App* check = app.add_subcommand("check", "validate a config file");
  check->add_option("--config", config_path, "config file")->required();

  CLI::App* fk = app.add_subcommand("fk", "foot position from joint angles (degrees)");
  fk->add_option("--config", config_path, "config file")->required();
  fk->add_option("leg", leg, "leg id (LF, RF, LR, RR)")->required();
  fk->add_option("angles", values, "theta1 theta2 theta3 [deg]")->expected(3);

  CLI::App* ik = app.add_subcommand("ik", "joint angles from a leg-frame target (meters)");
  ik->add_option("--config", config_path, "config file")->required();
  ik->add_option("leg", leg, "leg id (LF, RF, LR, RR)")->required();
  ik->add_option("target", values, "X Y Z [m]")->expected(3);
  ik->add_option("--branch", branch_flag, "elbow branch (up|down)")
      ->check(CLI::IsMember({"up", "down"}));

  CLI::App* gait = app.add_subcommand("gait", "generate a crawl gait and export CSV timelines");
  gait->add_option("--config", config_path, "config file")->required();
  gait->add_option("--cycles", cycles, "number of gait cycles")->check(CLI::PositiveNumber);
  gait->add_option("--stride", stride, "stride per cycle [m]");
  gait->add_option("--period", period, "cycle period [s]");
  gait->add_option("--dt", dt, "timeline sample step [s]")->check(CLI::PositiveNumber);
  gait->add_option("--out", out_path, "gait CSV output path");
  gait->add_option("--servo-out", servo_out_path, "servo CSV output path");
  gait->add_flag("--force", force, "emit the plan even if the stability margin is violated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(config_path);
    if (fk->parsed()) return cmd_fk(config_path, leg, values);
    if (ik->parsed()) return cmd_ik(config_path, leg, values, branch_flag);
    if (gait->parsed()) return cmd_gait(config_path, cycles, stride, period, dt, out_path,
                                        servo_out_path, force);
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitDomain;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
