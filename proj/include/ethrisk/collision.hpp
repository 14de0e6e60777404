#pragma once

#include <array>
#include <cstdint>

#include "ethrisk/math.hpp"

namespace ethrisk {

// Rotated rectangle footprint. Construction rejects non-positive extents.
class OrientedBox {
 public:
  OrientedBox(Vec2 center, double heading, double half_length, double half_width);

  const Vec2& center() const { return center_; }
  double heading() const { return heading_; }
  double half_length() const { return half_length_; }
  double half_width() const { return half_width_; }

  Vec2 axis_length() const { return unit_from_angle(heading_); }
  Vec2 axis_width() const { return {-std::sin(heading_), std::cos(heading_)}; }

  // Counter-clockwise corners starting at front-left.
  std::array<Vec2, 4> corners() const;

  OrientedBox moved_to(Vec2 center, double heading) const {
    return OrientedBox(center, heading, half_length_, half_width_);
  }

 private:
  Vec2 center_;
  double heading_;
  double half_length_;
  double half_width_;
};

// Symmetric 2x2 covariance, m^2.
struct Covariance2 {
  double xx = 1.0;
  double xy = 0.0;
  double yy = 1.0;

  double determinant() const { return xx * yy - xy * xy; }
  bool positive_definite() const { return xx > 0.0 && determinant() > 0.0; }
  Covariance2 scaled(double c) const { return {xx * c, xy * c, yy * c}; }
};

enum class Frame : std::uint8_t { kWorld, kFrenet };

struct GaussianPrediction {
  Vec2 mean;
  Covariance2 covariance;
  int step = 0;  // timestep index on the planning grid
  Frame frame = Frame::kWorld;
};

// Separating-axis test over the four edge normals. Touching boxes overlap.
bool sat_overlap(const OrientedBox& a, const OrientedBox& b);

// Determinant below this (m^4) is treated as singular.
inline constexpr double kMinCovarianceDeterminant = 1e-12;

// sqrt((p - mu)^T Sigma^-1 (p - mu)); throws SingularCovariance.
double mahalanobis_distance(Vec2 point, const GaussianPrediction& prediction);

// Survival function of chi-squared with 2 dof at D^2, i.e. exp(-D^2 / 2).
double mahalanobis_probability(double distance);

// Counts how often the Mahalanobis stage actually ran.
struct CollisionStats {
  std::uint64_t sat_checks = 0;
  std::uint64_t mahalanobis_evaluations = 0;
};

// P = P_sat * P_m. The Mahalanobis stage is skipped when the boxes do not
// overlap. `other_box` must sit at the prediction mean.
double collision_probability(const OrientedBox& ego_box, Vec2 ego_position,
                             const GaussianPrediction& prediction, const OrientedBox& other_box,
                             CollisionStats* stats = nullptr);

}  // namespace ethrisk
