#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "ethrisk/collision.hpp"
#include "ethrisk/config.hpp"
#include "ethrisk/errors.hpp"
#include "ethrisk/ethics.hpp"
#include "ethrisk/frenet.hpp"
#include "ethrisk/lagrange.hpp"
#include "ethrisk/planner.hpp"
#include "ethrisk/replay_buffer.hpp"
#include "ethrisk/risk.hpp"
#include "ethrisk/runner.hpp"
#include "ethrisk/scenario.hpp"

namespace py = pybind11;
using namespace ethrisk;

namespace {

using Point = std::pair<double, double>;

std::vector<Vec2> to_points(const std::vector<Point>& pts) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const auto& [x, y] : pts) out.push_back({x, y});
  return out;
}

CostConfig weights(double w_bayes, double w_equality, double w_maximin, double gamma) {
  CostConfig c;
  c.w_bayes = w_bayes;
  c.w_equality = w_equality;
  c.w_maximin = w_maximin;
  c.gamma_maximin = gamma;
  return c;
}

py::dict plan_dict(const TrajectoryPlan& plan) {
  std::vector<double> tau, l, d, l_dot, d_dot, l_ddot, d_ddot, jerk;
  for (const PlanSample& s : plan.samples) {
    tau.push_back(s.tau);
    l.push_back(s.l);
    d.push_back(s.d);
    l_dot.push_back(s.l_dot);
    d_dot.push_back(s.d_dot);
    l_ddot.push_back(s.l_ddot);
    d_ddot.push_back(s.d_ddot);
    jerk.push_back(s.l_jerk);
  }
  py::dict out;
  out["longitudinal"] = std::vector<double>(plan.longitudinal.begin(), plan.longitudinal.end());
  out["lateral"] = std::vector<double>(plan.lateral.begin(), plan.lateral.end());
  out["horizon"] = plan.horizon;
  out["tau"] = tau;
  out["l"] = l;
  out["d"] = d;
  out["l_dot"] = l_dot;
  out["d_dot"] = d_dot;
  out["l_ddot"] = l_ddot;
  out["d_ddot"] = d_ddot;
  out["l_jerk"] = jerk;
  out["jerk_sum"] = longitudinal_jerk_sum(plan);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ethical-risk motion planning primitives and episode runner";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<DegenerateHorizon>(m, "DegenerateHorizon", base.ptr());
  py::register_exception<EmptyRiskSet>(m, "EmptyRiskSet", base.ptr());
  py::register_exception<SingularCovariance>(m, "SingularCovariance", base.ptr());
  py::register_exception<PoseOffCorridor>(m, "PoseOffCorridor", base.ptr());

  py::class_<ReferencePath>(m, "ReferencePath")
      .def(py::init([](const std::vector<Point>& pts, double spacing) {
             const auto v = to_points(pts);
             return ReferencePath(v, spacing);
           }),
           py::arg("points"), py::arg("spacing") = ReferencePath::kDefaultSpacing)
      .def_property_readonly("length", &ReferencePath::length)
      .def("__len__", &ReferencePath::size)
      .def(
          "to_frenet",
          [](const ReferencePath& path, double x, double y, double heading, double speed) {
            const FrenetState fs = project_to_frenet(path, {{x, y}, heading, speed, 0.0});
            return py::make_tuple(fs.l, fs.d, fs.l_dot, fs.d_dot);
          },
          py::arg("x"), py::arg("y"), py::arg("heading") = 0.0, py::arg("speed") = 0.0)
      .def(
          "to_cartesian",
          [](const ReferencePath& path, double l, double d) {
            const CartesianPose p = frenet_to_cartesian(path, {l, d, 0.0, 0.0, 0.0, 0.0});
            return py::make_tuple(p.position.x, p.position.y, p.heading);
          },
          py::arg("l"), py::arg("d"));

  m.def(
      "sat_overlap",
      [](Point ca, double ha, double la, double wa, Point cb, double hb, double lb, double wb) {
        return sat_overlap(OrientedBox({ca.first, ca.second}, ha, la, wa),
                           OrientedBox({cb.first, cb.second}, hb, lb, wb));
      },
      "Overlap of two boxes given (center, heading, half_length, half_width).");
  m.def(
      "mahalanobis_probability",
      [](double distance) { return mahalanobis_probability(distance); }, py::arg("distance"));
  m.def("effective_collision_speed", &effective_collision_speed, py::arg("speed_a"),
        py::arg("speed_b"), py::arg("mass_a"), py::arg("mass_b"), py::arg("collision_angle"));
  m.def(
      "harm",
      [](double delta_v, const std::string& zone) {
        return harm(delta_v, zone == "rear" ? ImpactZone::kRear : ImpactZone::kSide);
      },
      py::arg("delta_v"), py::arg("zone") = "side");

  m.def(
      "bayes_cost", [](std::vector<double> risks) { return bayes_cost({std::move(risks), {}}); },
      py::arg("risks"));
  m.def(
      "equality_cost",
      [](std::vector<double> risks) { return equality_cost({std::move(risks), {}}); },
      py::arg("risks"));
  m.def(
      "maximin_cost",
      [](std::vector<double> harms, double gamma) {
        return maximin_cost({{}, std::move(harms)}, gamma);
      },
      py::arg("harms"), py::arg("gamma") = 2.0);
  m.def(
      "ethical_cost",
      [](std::vector<double> risks, std::vector<double> harms, double w_bayes, double w_equality,
         double w_maximin, double gamma) {
        return ethical_cost({std::move(risks), std::move(harms)},
                            weights(w_bayes, w_equality, w_maximin, gamma));
      },
      py::arg("risks"), py::arg("harms"), py::arg("w_bayes") = 3.33, py::arg("w_equality") = 3.33,
      py::arg("w_maximin") = 3.33, py::arg("gamma") = 2.0);
  m.def(
      "selfish_cost",
      [](const std::vector<double>& ego_risks, double w_selfish) {
        CostConfig c;
        c.mode = CostMode::kSelfish;
        c.w_selfish = w_selfish;
        return selfish_cost(ego_risks, c);
      },
      py::arg("ego_risks"), py::arg("w_selfish") = 10.0);

  m.def(
      "solve_longitudinal",
      [](double l0, double v0, double a0, double target_speed, double horizon) {
        const auto c = solve_longitudinal(l0, v0, a0, target_speed, horizon);
        return std::vector<double>(c.begin(), c.end());
      },
      py::arg("l0"), py::arg("v0"), py::arg("a0"), py::arg("target_speed"), py::arg("horizon"));
  m.def(
      "solve_lateral",
      [](double d0, double d0_dot, double d0_ddot, double target, double horizon) {
        const auto c = solve_lateral(d0, d0_dot, d0_ddot, target, horizon);
        return std::vector<double>(c.begin(), c.end());
      },
      py::arg("d0"), py::arg("d0_dot"), py::arg("d0_ddot"), py::arg("target"), py::arg("horizon"));
  m.def(
      "make_plan",
      [](std::vector<double> state, double horizon, double lateral_target, double target_speed) {
        if (state.size() != 6) throw py::value_error("state is (l, d, l_dot, d_dot, l_ddot, d_ddot)");
        const FrenetState fs{state[0], state[1], state[2], state[3], state[4], state[5]};
        return plan_dict(make_plan(fs, {horizon, lateral_target, target_speed}));
      },
      py::arg("state"), py::arg("horizon"), py::arg("lateral_target"), py::arg("target_speed"));

  m.def(
      "dynamic_priority",
      [](double td_reward, double td_cost) {
        const DynamicPriority p = dynamic_priority(td_reward, td_cost);
        return py::make_tuple(p.priority, p.w_reward, p.w_cost);
      },
      py::arg("td_reward"), py::arg("td_cost"));
  m.def(
      "lagrange_update",
      [](double lambda, double learning_rate, double cost_limit, double episode_cost) {
        return lagrange_update({lambda, learning_rate, cost_limit}, episode_cost).lambda;
      },
      py::arg("lam"), py::arg("learning_rate"), py::arg("cost_limit"), py::arg("episode_cost"));

  m.def(
      "validate_scenario",
      [](const std::string& file) {
        const Scenario sc = load_scenario(file);
        py::dict out;
        out["name"] = sc.name;
        out["agents"] = sc.agents.size();
        out["path_length"] = sc.path->length();
        std::vector<std::string> policies;
        for (const auto& [name, actions] : sc.policies) policies.push_back(name);
        out["policies"] = policies;
        return out;
      },
      py::arg("scenario"));
  m.def(
      "run_episode",
      [](const std::string& scenario_file, const std::string& policy, const std::string& mode,
         std::uint64_t seed, double cost_limit) {
        const Scenario sc = load_scenario(scenario_file);
        RunConfig cfg;
        cfg.mode = run_mode_from_string(mode);
        cfg.lagrange.cost_limit = cost_limit;
        const auto p = make_policy(policy, sc, seed, cfg);
        std::string text;
        {
          py::gil_scoped_release release;
          text = log_to_json(run_episode(sc, *p, cfg, seed));
        }
        return py::module_::import("json").attr("loads")(text);
      },
      py::arg("scenario"), py::arg("policy") = "lane_keep", py::arg("mode") = "ethical",
      py::arg("seed") = 0, py::arg("cost_limit") = 0.6,
      "Runs one episode and returns its log as a dict.");
}
