#include "ethrisk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace ethrisk {

double effective_collision_speed(double speed_a, double speed_b, double mass_a, double mass_b,
                                 double collision_angle) {
  const double rel_sq = speed_a * speed_a + speed_b * speed_b -
                        2.0 * speed_a * speed_b * std::cos(collision_angle);
  return mass_b / (mass_a + mass_b) * std::sqrt(std::max(rel_sq, 0.0));
}

ImpactZone classify_impact(double collision_angle, double bearing) {
  constexpr double kQuarter = std::numbers::pi / 4.0;
  const double alpha = std::abs(wrap_angle(collision_angle));
  const double beta = std::abs(wrap_angle(bearing));
  const bool aligned_motion = alpha < kQuarter || alpha > 3.0 * kQuarter;
  const bool in_line = beta <= kQuarter || beta >= 3.0 * kQuarter;
  return aligned_motion && in_line ? ImpactZone::kRear : ImpactZone::kSide;
}

double harm(double delta_v, ImpactZone zone, const HarmModel& model) {
  const double ca = zone == ImpactZone::kSide ? model.side : model.rear;
  return 1.0 / (1.0 + std::exp(model.c0 - model.c1 * delta_v - ca));
}

namespace {

double angle_between(const Vec2& a, const Vec2& b) {
  if (a.norm() == 0.0 || b.norm() == 0.0) return 0.0;
  return std::atan2(cross(a, b), dot(a, b));
}

}  // namespace

RiskTuple trajectory_risk(const TrajectoryPlan& plan, const ReferencePath& path,
                          const EgoBody& ego, const AgentState& other,
                          const TrajectoryPredictor& predictor, const HarmModel& model,
                          CollisionStats* stats) {
  RiskTuple tuple;
  tuple.other_id = other.id;

  const auto steps = plan.planned_steps();
  if (steps.empty()) return tuple;
  std::vector<double> offsets;
  offsets.reserve(steps.size());
  for (const PlanSample& s : steps) offsets.push_back(s.tau);
  const std::vector<PredictedState> predictions = predictor.predict(other, offsets);

  for (std::size_t k = 0; k < steps.size(); ++k) {
    const PlanSample& s = steps[k];
    const CartesianPose pose =
        frenet_to_cartesian_extended(path, FrenetState{s.l, s.d, s.l_dot, s.d_dot, 0.0, 0.0});
    const PredictedState& pred = predictions[k];
    const Vec2 center = pose.position + unit_from_angle(pose.heading) * ego.center_offset;
    const OrientedBox ego_box(center, pose.heading, ego.half_length, ego.half_width);
    const OrientedBox other_box(pred.gaussian.mean, pred.heading, other.half_length,
                                other.half_width);

    CollisionStats local;
    const double probability =
        collision_probability(ego_box, pose.position, pred.gaussian, other_box, &local);
    if (stats != nullptr) {
      stats->sat_checks += local.sat_checks;
      stats->mahalanobis_evaluations += local.mahalanobis_evaluations;
    }
    if (local.mahalanobis_evaluations == 0) continue;
    tuple.interacting = true;

    const Vec2 ego_velocity = unit_from_angle(pose.heading) * pose.speed;
    const double other_speed = pred.velocity.norm();
    const double alpha = angle_between(ego_velocity, pred.velocity);
    const Vec2 offset = pred.gaussian.mean - center;
    const double bearing =
        offset.norm() > 0.0 ? std::atan2(offset.y, offset.x) - pose.heading : 0.0;
    const ImpactZone zone = classify_impact(alpha, bearing);

    const double h_ego =
        harm(effective_collision_speed(pose.speed, other_speed, ego.mass, other.mass, alpha), zone,
             model);
    const double h_obj =
        harm(effective_collision_speed(other_speed, pose.speed, other.mass, ego.mass, alpha), zone,
             model);
    tuple.r_ego = std::max(tuple.r_ego, timestep_risk(probability, h_ego));
    tuple.r_obj = std::max(tuple.r_obj, timestep_risk(probability, h_obj));
    tuple.h_worst = std::max({tuple.h_worst, h_ego, h_obj});
  }
  return tuple;
}

double time_to_collision(const AgentState& ego, const AgentState& other) {
  const Vec2 rel_pos = other.position - ego.position;
  const Vec2 rel_vel = other.velocity() - ego.velocity();
  const double distance = rel_pos.norm();
  const double gap = distance - ego.bounding_radius() - other.bounding_radius();
  if (distance == 0.0) return 0.0;
  const double closing = -dot(rel_pos, rel_vel) / distance;
  if (!(closing > 0.0)) return kInfiniteTtc;
  if (gap <= 0.0) return 0.0;
  const double ttc = gap / closing;
  return ttc > kTtcHorizon ? kInfiniteTtc : ttc;
}

}  // namespace ethrisk
