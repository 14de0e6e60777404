#include "ethrisk/frenet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ethrisk/errors.hpp"

namespace ethrisk {
namespace {

constexpr double kEndTolerance = 1e-6;

std::vector<Vec2> resample(std::span<const Vec2> polyline, double spacing) {
  if (polyline.size() < 2) throw DegeneratePath("reference path needs at least 2 waypoints");
  if (!(spacing > 0.0)) throw DegeneratePath("resampling spacing must be positive");

  // Drop repeated points so every input segment has positive length.
  std::vector<Vec2> pts;
  std::vector<double> s;
  for (const Vec2& p : polyline) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DegeneratePath("non-finite waypoint");
    if (!pts.empty()) {
      const double len = (p - pts.back()).norm();
      if (len <= 0.0) continue;
      s.push_back(s.back() + len);
    } else {
      s.push_back(0.0);
    }
    pts.push_back(p);
  }
  if (pts.size() < 2) throw DegeneratePath("reference path has zero length");

  const double total = s.back();
  std::vector<Vec2> out;
  std::size_t seg = 0;
  for (std::size_t k = 0;; ++k) {
    const double target = static_cast<double>(k) * spacing;
    if (target >= total - kEndTolerance) break;
    while (s[seg + 1] < target) ++seg;
    const double t = (target - s[seg]) / (s[seg + 1] - s[seg]);
    out.push_back(pts[seg] + (pts[seg + 1] - pts[seg]) * t);
  }
  out.push_back(pts.back());
  return out;
}

Vec2 normal_of(double heading) { return {-std::sin(heading), std::cos(heading)}; }

struct Foot {
  std::size_t segment = 0;
  double t = 0.0;
  double distance = std::numeric_limits<double>::infinity();
};

// Signed tangential residual of p against the interpolated frame at (i, t).
double residual(const ReferencePath& path, const Vec2& p, std::size_t i, double t) {
  return dot(p - path.chord_point(i, t), unit_from_angle(path.interpolated_heading(i, t)));
}

std::optional<Foot> foot_on_segment(const ReferencePath& path, const Vec2& p, std::size_t i) {
  double lo = 0.0;
  double hi = 1.0;
  double f_lo = residual(path, p, i, lo);
  const double f_hi = residual(path, p, i, hi);
  if (f_lo * f_hi > 0.0) return std::nullopt;
  double t = 0.0;
  if (f_lo == 0.0) {
    t = 0.0;
  } else if (f_hi == 0.0) {
    t = 1.0;
  } else {
    for (int iter = 0; iter < 64; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = residual(path, p, i, mid);
      if ((f_mid > 0.0) == (f_lo > 0.0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    t = 0.5 * (lo + hi);
  }
  return Foot{i, t, (p - path.chord_point(i, t)).norm()};
}

Foot scan(const ReferencePath& path, const Vec2& p, std::size_t first, std::size_t last) {
  Foot best;
  for (std::size_t i = first; i < last; ++i) {
    if (auto foot = foot_on_segment(path, p, i); foot && foot->distance < best.distance) {
      best = *foot;
    }
  }
  return best;
}

}  // namespace

ReferencePath::ReferencePath(std::span<const Vec2> polyline, double spacing)
    : points_(resample(polyline, spacing)) {
  const std::size_t n = points_.size();
  arclength_.resize(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    arclength_[i] = arclength_[i - 1] + (points_[i] - points_[i - 1]).norm();
  }

  heading_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == n ? n - 1 : i + 1;
    const Vec2 diff = points_[b] - points_[a];
    heading_[i] = std::atan2(diff.y, diff.x);
  }
  // End headings: the end chord mirrored about the neighbouring central heading.
  if (n >= 3) {
    heading_[0] = wrap_angle(heading_[0] - wrap_angle(heading_[1] - heading_[0]));
    heading_[n - 1] = wrap_angle(heading_[n - 1] + wrap_angle(heading_[n - 1] - heading_[n - 2]));
  }

  // Signed curvature of the circle through three consecutive points.
  curvature_.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec2 u = points_[i] - points_[i - 1];
    const Vec2 v = points_[i + 1] - points_[i];
    const Vec2 w = points_[i + 1] - points_[i - 1];
    const double denom = u.norm() * v.norm() * w.norm();
    if (denom > 0.0) curvature_[i] = 2.0 * (u.x * v.y - u.y * v.x) / denom;
  }
  if (n >= 3) {
    curvature_[0] = curvature_[1];
    curvature_[n - 1] = curvature_[n - 2];
  }
}

std::pair<std::size_t, double> ReferencePath::locate(double l) const {
  const double total = length();
  if (!(l >= 0.0 && l <= total)) throw OutOfPathRange("arclength outside [0, path length]");
  auto it = std::upper_bound(arclength_.begin(), arclength_.end(), l);
  std::size_t seg = it == arclength_.begin() ? 0 : static_cast<std::size_t>(it - arclength_.begin()) - 1;
  seg = std::min(seg, points_.size() - 2);
  const double t = (l - arclength_[seg]) / (arclength_[seg + 1] - arclength_[seg]);
  return {seg, std::clamp(t, 0.0, 1.0)};
}

Vec2 ReferencePath::chord_point(std::size_t segment, double t) const {
  return points_[segment] + (points_[segment + 1] - points_[segment]) * t;
}

double ReferencePath::interpolated_heading(std::size_t segment, double t) const {
  return heading_[segment] + wrap_angle(heading_[segment + 1] - heading_[segment]) * t;
}

FrenetState project_to_frenet(const ReferencePath& path, const CartesianPose& pose,
                              const ProjectionOptions& options, ProjectionCache* cache) {
  if (path.size() < 2) throw DegeneratePath("reference path needs at least 2 waypoints");
  const Vec2& p = pose.position;
  const std::size_t segments = path.size() - 1;

  Foot best;
  if (cache != nullptr && cache->valid) {
    constexpr std::size_t kWindow = 16;
    const std::size_t first = cache->segment > kWindow ? cache->segment - kWindow : 0;
    const std::size_t last = std::min(segments, cache->segment + kWindow + 1);
    best = scan(path, p, first, last);
    const bool interior = best.segment > first || first == 0;
    const bool interior_end = best.segment + 1 < last || last == segments;
    if (!(best.distance <= options.corridor && interior && interior_end)) {
      best = scan(path, p, 0, segments);
    }
  } else {
    best = scan(path, p, 0, segments);
  }

  // Before the start or past the end the closest point is the end point itself.
  const Vec2 start = path.points().front();
  const Vec2 end = path.points().back();
  if (residual(path, p, 0, 0.0) < 0.0 && (p - start).norm() < best.distance) {
    best = Foot{0, 0.0, (p - start).norm()};
  }
  if (residual(path, p, segments - 1, 1.0) > 0.0 && (p - end).norm() < best.distance) {
    best = Foot{segments - 1, 1.0, (p - end).norm()};
  }

  if (!(best.distance <= options.corridor)) {
    throw PoseOffCorridor("pose is farther than the corridor from the reference path");
  }
  if (cache != nullptr) {
    cache->segment = best.segment;
    cache->valid = true;
  }

  const auto arclength = path.arclength();
  const double seg_len = arclength[best.segment + 1] - arclength[best.segment];
  const double heading = path.interpolated_heading(best.segment, best.t);
  const double rel = pose.heading - heading;

  FrenetState fs;
  fs.l = best.t >= 1.0 ? arclength[best.segment + 1] : arclength[best.segment] + best.t * seg_len;
  fs.d = dot(p - path.chord_point(best.segment, best.t), normal_of(heading));
  fs.l_dot = pose.speed * std::cos(rel);
  fs.d_dot = pose.speed * std::sin(rel);
  fs.l_ddot = pose.accel * std::cos(rel);
  fs.d_ddot = pose.accel * std::sin(rel);
  return fs;
}

CartesianPose frenet_to_cartesian(const ReferencePath& path, const FrenetState& fs) {
  const auto [seg, t] = path.locate(fs.l);
  const double heading = path.interpolated_heading(seg, t);
  CartesianPose pose;
  pose.position = path.chord_point(seg, t) + normal_of(heading) * fs.d;
  pose.speed = std::hypot(fs.l_dot, fs.d_dot);
  const double rel = pose.speed > 0.0 ? std::atan2(fs.d_dot, fs.l_dot) : 0.0;
  pose.heading = wrap_angle(heading + rel);
  pose.accel = fs.l_ddot * std::cos(rel) + fs.d_ddot * std::sin(rel);
  return pose;
}

CartesianPose frenet_to_cartesian_extended(const ReferencePath& path, const FrenetState& fs) {
  const double total = path.length();
  if (fs.l >= 0.0 && fs.l <= total) return frenet_to_cartesian(path, fs);
  FrenetState clamped = fs;
  clamped.l = fs.l < 0.0 ? 0.0 : total;
  CartesianPose pose = frenet_to_cartesian(path, clamped);
  const double end_heading = fs.l < 0.0 ? path.headings().front() : path.headings().back();
  pose.position = pose.position + unit_from_angle(end_heading) * (fs.l - clamped.l);
  return pose;
}

PathSample path_heading_curvature(const ReferencePath& path, double l) {
  const auto [seg, t] = path.locate(l);
  const auto kappa = path.curvatures();
  return {wrap_angle(path.interpolated_heading(seg, t)),
          kappa[seg] + (kappa[seg + 1] - kappa[seg]) * t};
}

}  // namespace ethrisk
