#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ethrisk/math.hpp"

namespace ethrisk {

// Cartesian pose of a vehicle reference point. Acceleration is tangential.
struct CartesianPose {
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
  double accel = 0.0;
};

// Path-relative state. d is the lateral offset, positive to the left of travel.
struct FrenetState {
  double l = 0.0;
  double d = 0.0;
  double l_dot = 0.0;
  double d_dot = 0.0;
  double l_ddot = 0.0;
  double d_ddot = 0.0;
};

struct PathSample {
  double heading = 0.0;
  double curvature = 0.0;
};

// Lane centerline defining the Frenet frame.
//
// The input polyline is resampled to uniform spacing (0.5 m by default; the
// final segment may be shorter). Heading uses central differences, curvature
// the central difference of heading over arclength; both fall back to
// one-sided differences at the end points. Immutable after construction.
class ReferencePath {
 public:
  static constexpr double kDefaultSpacing = 0.5;

  explicit ReferencePath(std::span<const Vec2> polyline, double spacing = kDefaultSpacing);

  std::size_t size() const { return points_.size(); }
  double length() const { return arclength_.back(); }
  std::span<const Vec2> points() const { return points_; }
  std::span<const double> arclength() const { return arclength_; }
  std::span<const double> headings() const { return heading_; }
  std::span<const double> curvatures() const { return curvature_; }

  // Segment index i such that s_i <= l <= s_{i+1}, plus the fraction along it.
  // Throws OutOfPathRange outside [0, length].
  std::pair<std::size_t, double> locate(double l) const;

  // Chord point and linearly interpolated heading for segment i at fraction t.
  Vec2 chord_point(std::size_t segment, double t) const;
  double interpolated_heading(std::size_t segment, double t) const;

 private:
  std::vector<Vec2> points_;
  std::vector<double> arclength_;
  std::vector<double> heading_;
  std::vector<double> curvature_;
};

// Optional warm-start for repeated projections of the same agent.
struct ProjectionCache {
  std::size_t segment = 0;
  bool valid = false;
};

struct ProjectionOptions {
  double corridor = 20.0;  // max |d| accepted, meters
};

// The foot point of `pose` on the path: the point whose interpolated normal
// passes through the pose. Throws PoseOffCorridor beyond the corridor.
FrenetState project_to_frenet(const ReferencePath& path, const CartesianPose& pose,
                              const ProjectionOptions& options = {},
                              ProjectionCache* cache = nullptr);

// Inverse of project_to_frenet. Throws OutOfPathRange if l is off the path.
CartesianPose frenet_to_cartesian(const ReferencePath& path, const FrenetState& fs);

// Like frenet_to_cartesian, but continues straight along the end headings
// for l outside [0, length] instead of throwing.
CartesianPose frenet_to_cartesian_extended(const ReferencePath& path, const FrenetState& fs);

// Heading and curvature at arclength l, linearly interpolated.
PathSample path_heading_curvature(const ReferencePath& path, double l);

}  // namespace ethrisk
