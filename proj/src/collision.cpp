#include "ethrisk/collision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ethrisk/errors.hpp"

namespace ethrisk {

OrientedBox::OrientedBox(Vec2 center, double heading, double half_length, double half_width)
    : center_(center), heading_(heading), half_length_(half_length), half_width_(half_width) {
  if (!(half_length > 0.0) || !(half_width > 0.0)) {
    throw std::invalid_argument("oriented box extents must be positive");
  }
}

std::array<Vec2, 4> OrientedBox::corners() const {
  const Vec2 u = axis_length() * half_length_;
  const Vec2 v = axis_width() * half_width_;
  return {center_ + u + v, center_ - u + v, center_ - u - v, center_ + u - v};
}

namespace {

// Half-extent of the box projected on a unit axis.
double projected_radius(const OrientedBox& box, const Vec2& axis) {
  return box.half_length() * std::abs(dot(box.axis_length(), axis)) +
         box.half_width() * std::abs(dot(box.axis_width(), axis));
}

}  // namespace

bool sat_overlap(const OrientedBox& a, const OrientedBox& b) {
  const Vec2 offset = b.center() - a.center();
  const std::array<Vec2, 4> axes = {a.axis_length(), a.axis_width(), b.axis_length(),
                                    b.axis_width()};
  for (const Vec2& axis : axes) {
    const double separation = std::abs(dot(offset, axis));
    if (separation > projected_radius(a, axis) + projected_radius(b, axis)) return false;
  }
  return true;
}

double mahalanobis_distance(Vec2 point, const GaussianPrediction& prediction) {
  const Covariance2& cov = prediction.covariance;
  const double det = cov.determinant();
  if (!(det >= kMinCovarianceDeterminant) || !(cov.xx > 0.0)) {
    throw SingularCovariance("prediction covariance is singular or not positive-definite");
  }
  const Vec2 r = point - prediction.mean;
  const double quad = (cov.yy * r.x * r.x - 2.0 * cov.xy * r.x * r.y + cov.xx * r.y * r.y) / det;
  return std::sqrt(std::max(quad, 0.0));
}

double mahalanobis_probability(double distance) {
  return std::exp(-0.5 * distance * distance);
}

double collision_probability(const OrientedBox& ego_box, Vec2 ego_position,
                             const GaussianPrediction& prediction, const OrientedBox& other_box,
                             CollisionStats* stats) {
  if (stats != nullptr) ++stats->sat_checks;
  if (!sat_overlap(ego_box, other_box)) return 0.0;
  if (stats != nullptr) ++stats->mahalanobis_evaluations;
  return mahalanobis_probability(mahalanobis_distance(ego_position, prediction));
}

}  // namespace ethrisk
