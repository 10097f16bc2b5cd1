#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quadleg/gait.hpp"
#include "quadleg/kinematics.hpp"
#include "quadleg/model.hpp"
#include "quadleg/servo.hpp"
#include "quadleg/trajectory.hpp"

namespace py = pybind11;
using namespace quadleg;

PYBIND11_MODULE(_core, m) {
  m.doc() = "quadruped leg kinematics, trajectories and crawl gait planning";

  // Exceptions: base first so the later (derived) translators win.
  auto err = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", err);
  py::register_exception<ValidationError>(m, "ValidationError", err);
  py::register_exception<Unreachable>(m, "Unreachable", err);
  py::register_exception<DegenerateTarget>(m, "DegenerateTarget", err);
  py::register_exception<SingularConfiguration>(m, "SingularConfiguration", err);
  py::register_exception<NonpositiveDuration>(m, "NonpositiveDuration", err);
  py::register_exception<TimeOutOfRange>(m, "TimeOutOfRange", err);
  py::register_exception<UnreachableSample>(m, "UnreachableSample", err);
  py::register_exception<BranchFlip>(m, "BranchFlip", err);
  py::register_exception<StrideUnreachable>(m, "StrideUnreachable", err);
  py::register_exception<StabilityViolation>(m, "StabilityViolation", err);
  py::register_exception<DegenerateSupport>(m, "DegenerateSupport", err);
  py::register_exception<AngleOutOfRange>(m, "AngleOutOfRange", err);

  py::enum_<LegId>(m, "LegId")
      .value("LF", LegId::LF)
      .value("RF", LegId::RF)
      .value("LR", LegId::LR)
      .value("RR", LegId::RR);
  py::enum_<ElbowBranch>(m, "ElbowBranch")
      .value("DOWN", ElbowBranch::Down)
      .value("UP", ElbowBranch::Up);
  py::enum_<PhaseRole>(m, "PhaseRole")
      .value("STANCE", PhaseRole::Stance)
      .value("SWING", PhaseRole::Swing);

  py::class_<LegGeometry>(m, "LegGeometry")
      .def(py::init<>())
      .def(py::init([](double a1, double a2, double a3) {
             LegGeometry g;
             g.a1 = a1;
             g.a2 = a2;
             g.a3 = a3;
             return g;
           }),
           py::arg("a1"), py::arg("a2"), py::arg("a3"))
      .def_readwrite("a1", &LegGeometry::a1)
      .def_readwrite("a2", &LegGeometry::a2)
      .def_readwrite("a3", &LegGeometry::a3)
      .def_readonly("alpha", &LegGeometry::alpha)
      .def_readonly("d", &LegGeometry::d)
      .def("total_reach", &LegGeometry::total_reach);

  py::class_<JointLimits::Range>(m, "JointRange")
      .def_readwrite("min_rad", &JointLimits::Range::min_rad)
      .def_readwrite("max_rad", &JointLimits::Range::max_rad);
  py::class_<JointLimits>(m, "JointLimits")
      .def(py::init<>())
      .def_readwrite("joint", &JointLimits::joint)
      .def("contains", &JointLimits::contains, py::arg("joint_index"), py::arg("angle_rad"));

  py::class_<JointAngles>(m, "JointAngles")
      .def(py::init<>())
      .def(py::init([](double t1, double t2, double t3) { return JointAngles{t1, t2, t3}; }),
           py::arg("theta1"), py::arg("theta2"), py::arg("theta3"))
      .def_readwrite("theta1", &JointAngles::theta1)
      .def_readwrite("theta2", &JointAngles::theta2)
      .def_readwrite("theta3", &JointAngles::theta3)
      .def("normalized", &JointAngles::normalized)
      .def("__repr__", [](const JointAngles& q) {
        return "JointAngles(" + std::to_string(q.theta1) + ", " + std::to_string(q.theta2) +
               ", " + std::to_string(q.theta3) + ")";
      });

  py::class_<JointVelocities>(m, "JointVelocities")
      .def(py::init<>())
      .def(py::init([](double d1, double d2, double d3) { return JointVelocities{d1, d2, d3}; }),
           py::arg("dtheta1"), py::arg("dtheta2"), py::arg("dtheta3"))
      .def_readwrite("dtheta1", &JointVelocities::dtheta1)
      .def_readwrite("dtheta2", &JointVelocities::dtheta2)
      .def_readwrite("dtheta3", &JointVelocities::dtheta3);

  py::class_<FootPosition>(m, "FootPosition")
      .def(py::init<>())
      .def(py::init([](double x, double y, double z) { return FootPosition{x, y, z}; }),
           py::arg("x"), py::arg("y"), py::arg("z"))
      .def_readwrite("x", &FootPosition::x)
      .def_readwrite("y", &FootPosition::y)
      .def_readwrite("z", &FootPosition::z)
      .def("__repr__", [](const FootPosition& p) {
        return "FootPosition(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " +
               std::to_string(p.z) + ")";
      });

  py::class_<FootVelocity>(m, "FootVelocity")
      .def(py::init<>())
      .def(py::init([](double vx, double vy, double vz) { return FootVelocity{vx, vy, vz}; }),
           py::arg("vx"), py::arg("vy"), py::arg("vz"))
      .def_readwrite("vx", &FootVelocity::vx)
      .def_readwrite("vy", &FootVelocity::vy)
      .def_readwrite("vz", &FootVelocity::vz);

  py::class_<IkSolution>(m, "IkSolution")
      .def_readonly("angles", &IkSolution::angles)
      .def_readonly("branch", &IkSolution::branch)
      .def_readonly("within_limits", &IkSolution::within_limits);

  py::class_<LegMount>(m, "LegMount")
      .def_readonly("id", &LegMount::id)
      .def_readonly("mount_x", &LegMount::mount_x)
      .def_readonly("mount_y", &LegMount::mount_y)
      .def_readonly("mount_yaw", &LegMount::mount_yaw)
      .def_readonly("channels", &LegMount::channels);
  py::class_<BodyLayout>(m, "BodyLayout")
      .def_readonly("legs", &BodyLayout::legs)
      .def_readonly("body_height", &BodyLayout::body_height)
      .def("leg_index", &BodyLayout::leg_index);

  py::class_<ServoChannelCal>(m, "ServoChannelCal")
      .def(py::init<>())
      .def_readwrite("channel", &ServoChannelCal::channel)
      .def_readwrite("pulse_min_us", &ServoChannelCal::pulse_min_us)
      .def_readwrite("pulse_max_us", &ServoChannelCal::pulse_max_us)
      .def_readwrite("angle_min_deg", &ServoChannelCal::angle_min_deg)
      .def_readwrite("angle_max_deg", &ServoChannelCal::angle_max_deg)
      .def_readwrite("direction", &ServoChannelCal::direction)
      .def_readwrite("trim_deg", &ServoChannelCal::trim_deg);
  py::class_<ServoCalibration>(m, "ServoCalibration")
      .def_readonly("channels", &ServoCalibration::channels)
      .def("channel", &ServoCalibration::channel, py::return_value_policy::reference_internal);

  py::class_<GaitDefaults>(m, "GaitDefaults")
      .def_readwrite("duty_factor", &GaitDefaults::duty_factor)
      .def_readwrite("stride_m", &GaitDefaults::stride_m)
      .def_readwrite("clearance_m", &GaitDefaults::clearance_m)
      .def_readwrite("cycle_s", &GaitDefaults::cycle_s)
      .def_readwrite("margin_min_m", &GaitDefaults::margin_min_m)
      .def_readwrite("swing_order", &GaitDefaults::swing_order);

  py::class_<RobotConfig>(m, "RobotConfig")
      .def(py::init<>())
      .def_readwrite("geometry", &RobotConfig::geometry)
      .def_readwrite("limits", &RobotConfig::limits)
      .def_readonly("layout", &RobotConfig::layout)
      .def_readonly("calibration", &RobotConfig::calibration)
      .def_readwrite("gait", &RobotConfig::gait);

  py::class_<CubicCoefficients>(m, "CubicCoefficients")
      .def_readonly("c0", &CubicCoefficients::c0)
      .def_readonly("c1", &CubicCoefficients::c1)
      .def_readonly("c2", &CubicCoefficients::c2)
      .def_readonly("c3", &CubicCoefficients::c3)
      .def("position", &CubicCoefficients::position)
      .def("velocity", &CubicCoefficients::velocity);
  py::class_<CubicJointTrajectory>(m, "CubicJointTrajectory")
      .def_readonly("joints", &CubicJointTrajectory::joints)
      .def_readonly("duration", &CubicJointTrajectory::duration);
  py::class_<SwingKnot>(m, "SwingKnot")
      .def_readonly("time", &SwingKnot::time)
      .def_readonly("angles", &SwingKnot::angles)
      .def_readonly("velocities", &SwingKnot::velocities);
  py::class_<SwingPlan>(m, "SwingPlan")
      .def_readonly("knots", &SwingPlan::knots)
      .def_readonly("segments", &SwingPlan::segments)
      .def_readonly("clearance", &SwingPlan::clearance)
      .def("duration", &SwingPlan::duration)
      .def("sample", &SwingPlan::sample, py::arg("t"));

  py::class_<GaitPhase>(m, "GaitPhase")
      .def_readonly("start", &GaitPhase::start)
      .def_readonly("duration", &GaitPhase::duration)
      .def_readonly("swing_leg", &GaitPhase::swing_leg)
      .def_readonly("roles", &GaitPhase::roles)
      .def_readonly("dx", &GaitPhase::dx)
      .def_readonly("dy", &GaitPhase::dy);
  py::class_<MarginSample>(m, "MarginSample")
      .def_readonly("t", &MarginSample::t)
      .def_readonly("polygon", &MarginSample::polygon)
      .def_readonly("com_projection", &MarginSample::com_projection)
      .def_readonly("margin", &MarginSample::margin);
  py::class_<StabilityReport>(m, "StabilityReport")
      .def_readonly("samples", &StabilityReport::samples)
      .def_readonly("min_margin", &StabilityReport::min_margin);
  py::class_<LegSwing>(m, "LegSwing")
      .def_readonly("leg", &LegSwing::leg)
      .def_readonly("start", &LegSwing::start)
      .def_readonly("duration", &LegSwing::duration)
      .def_readonly("lift_point", &LegSwing::lift_point)
      .def_readonly("land_point", &LegSwing::land_point)
      .def_readonly("plan", &LegSwing::plan)
      .def_readonly("grounded", &LegSwing::grounded);
  py::class_<FootContact>(m, "FootContact")
      .def_readonly("touchdown", &FootContact::touchdown)
      .def_readonly("point", &FootContact::point);
  py::class_<GaitPlan>(m, "GaitPlan")
      .def_readonly("cycle_period", &GaitPlan::cycle_period)
      .def_readonly("cycles", &GaitPlan::cycles)
      .def_readonly("stride", &GaitPlan::stride)
      .def_readonly("duty_factor", &GaitPlan::duty_factor)
      .def_readonly("body_speed", &GaitPlan::body_speed)
      .def_readonly("sway_amplitude", &GaitPlan::sway_amplitude)
      .def_readonly("body_height", &GaitPlan::body_height)
      .def_readonly("leg_order", &GaitPlan::leg_order)
      .def_readonly("home_world", &GaitPlan::home_world)
      .def_readonly("phases", &GaitPlan::phases)
      .def_readonly("swings", &GaitPlan::swings)
      .def_readonly("contacts", &GaitPlan::contacts)
      .def_readonly("stability", &GaitPlan::stability)
      .def("total_duration", &GaitPlan::total_duration)
      .def("body_position", &GaitPlan::body_position, py::arg("t"));

  py::class_<JointTimeline>(m, "JointTimeline")
      .def_readonly("dt", &JointTimeline::dt)
      .def_readonly("times", &JointTimeline::times)
      .def_readonly("legs", &JointTimeline::legs)
      .def_readonly("angles", &JointTimeline::angles)
      .def_readonly("roles", &JointTimeline::roles)
      .def_readonly("foot_world", &JointTimeline::foot_world)
      .def_readonly("margins", &JointTimeline::margins);

  py::class_<ServoCommand>(m, "ServoCommand")
      .def_readonly("t_ms", &ServoCommand::t_ms)
      .def_readonly("channel", &ServoCommand::channel)
      .def_readonly("pulse_us", &ServoCommand::pulse_us);

  // model
  m.def("load_config", &load_config, py::arg("path"));
  m.def("save_config", &save_config, py::arg("config"), py::arg("path"));
  m.def("validate_config", &validate_config, py::arg("config"));
  m.def("default_config", &default_config);

  // kinematics
  m.def("dh_transform", &dh_transform, py::arg("theta"), py::arg("alpha"), py::arg("a"),
        py::arg("d"));
  m.def("leg_transform", &leg_transform, py::arg("geometry"), py::arg("angles"));
  m.def("forward_kinematics", &forward_kinematics, py::arg("geometry"), py::arg("angles"));
  m.def("inverse_kinematics", &inverse_kinematics, py::arg("geometry"), py::arg("target"),
        py::arg("branch") = std::nullopt, py::arg("limits") = JointLimits{});
  m.def("jacobian", &jacobian, py::arg("geometry"), py::arg("angles"));
  m.def("joint_velocities", &joint_velocities, py::arg("geometry"), py::arg("angles"),
        py::arg("foot_velocity"));
  m.def("body_to_leg_frame", &body_to_leg_frame, py::arg("layout"), py::arg("leg"),
        py::arg("body_point"));
  m.def("leg_to_body_frame", &leg_to_body_frame, py::arg("layout"), py::arg("leg"),
        py::arg("leg_point"));
  m.def("normalize_angle", &normalize_angle, py::arg("rad"));
  m.def("deg_to_rad", &deg_to_rad);
  m.def("rad_to_deg", &rad_to_deg);

  // trajectory
  m.def("fit_cubic", &fit_cubic, py::arg("theta_start"), py::arg("theta_end"),
        py::arg("vel_start"), py::arg("vel_end"), py::arg("duration"));
  m.def("sample_trajectory", &sample_trajectory, py::arg("trajectory"), py::arg("t"));
  m.def("swing_arc_point", &swing_arc_point, py::arg("start"), py::arg("end"),
        py::arg("clearance"), py::arg("s"));
  m.def("plan_swing", &plan_swing, py::arg("geometry"), py::arg("start"), py::arg("end"),
        py::arg("clearance"), py::arg("duration"), py::arg("segments") = 8,
        py::arg("branch") = ElbowBranch::Down, py::arg("limits") = JointLimits{});

  // gait
  m.def("support_polygon", &support_polygon, py::arg("stance_points"));
  m.def("stability_margin", &stability_margin, py::arg("polygon"), py::arg("com"));
  m.def("standing_margin", &standing_margin, py::arg("config"));
  m.def("generate_crawl", &generate_crawl, py::arg("config"), py::arg("cycles"),
        py::arg("stride"), py::arg("cycle_period"), py::arg("force") = false);
  m.def("stance_joint_timeline", &stance_joint_timeline, py::arg("config"), py::arg("plan"),
        py::arg("dt"));

  // servo export
  m.def("angle_to_pulse", &angle_to_pulse, py::arg("calibration"), py::arg("angle_rad"));
  m.def("pulse_to_angle", &pulse_to_angle, py::arg("calibration"), py::arg("pulse_us"));
  m.def("quantization_bound", &quantization_bound, py::arg("calibration"));
  m.def("emit_timeline", &emit_timeline, py::arg("config"), py::arg("timeline"));
}
