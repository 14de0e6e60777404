#pragma once

// Independent reference implementations used by the unit tests and the
// acceptance binary. None of these call into the code they check, except
// where a helper is explicitly a driver (closed-loop simulations).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "ethrisk/collision.hpp"
#include "ethrisk/control.hpp"
#include "ethrisk/frenet.hpp"
#include "ethrisk/planner.hpp"

namespace ethrisk::oracle {

using Polygon = std::vector<Vec2>;

// Sutherland-Hodgman clip of `subject` by the convex CCW polygon `clip`.
// Points on a clip edge count as inside, so touching shapes intersect.
inline Polygon clip_polygon(const Polygon& subject, const Polygon& clip) {
  Polygon output = subject;
  for (std::size_t e = 0; e < clip.size() && !output.empty(); ++e) {
    const Vec2 a = clip[e];
    const Vec2 b = clip[(e + 1) % clip.size()];
    const auto side = [&](const Vec2& p) { return cross(b - a, p - a); };
    Polygon input = std::move(output);
    output.clear();
    for (std::size_t i = 0; i < input.size(); ++i) {
      const Vec2 cur = input[i];
      const Vec2 prev = input[(i + input.size() - 1) % input.size()];
      const double sc = side(cur);
      const double sp = side(prev);
      if (sc >= 0.0) {
        if (sp < 0.0) output.push_back(prev + (cur - prev) * (sp / (sp - sc)));
        output.push_back(cur);
      } else if (sp >= 0.0) {
        output.push_back(prev + (cur - prev) * (sp / (sp - sc)));
      }
    }
  }
  return output;
}

inline Polygon box_polygon(Vec2 center, double heading, double half_length, double half_width) {
  const Vec2 u{std::cos(heading), std::sin(heading)};
  const Vec2 v{-u.y, u.x};
  return {center + u * half_length + v * half_width, center - u * half_length + v * half_width,
          center - u * half_length - v * half_width, center + u * half_length - v * half_width};
}

inline bool polygons_intersect(const Polygon& a, const Polygon& b) {
  return !clip_polygon(a, b).empty();
}

struct RandomBox {
  Vec2 center;
  double heading;
  double half_length;
  double half_width;

  OrientedBox box() const { return OrientedBox(center, heading, half_length, half_width); }
  Polygon polygon() const { return box_polygon(center, heading, half_length, half_width); }
};

inline RandomBox random_box(std::mt19937_64& rng, double spread = 4.0) {
  std::uniform_real_distribution<double> pos(-spread, spread);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> ext(0.1, 3.0);
  return {{pos(rng), pos(rng)}, ang(rng), ext(rng), ext(rng)};
}

struct SatAgreement {
  int pairs = 0;
  int agree = 0;
  int overlapping = 0;
};

inline SatAgreement sat_vs_clipping(int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SatAgreement out;
  for (int i = 0; i < pairs; ++i) {
    const RandomBox a = random_box(rng);
    const RandomBox b = random_box(rng);
    const bool expected = polygons_intersect(a.polygon(), b.polygon());
    const bool got = sat_overlap(a.box(), b.box());
    ++out.pairs;
    out.agree += expected == got;
    out.overlapping += expected;
  }
  return out;
}

// Monte-Carlo check of the Mahalanobis probability. For each random Gaussian
// a query point is placed at a random distance; draws x ~ N(mu, Sigma) come
// from an independent Cholesky factor and count as "farther" when their
// Mahalanobis distance exceeds the query's.
struct McSurvival {
  int gaussians = 0;
  std::vector<double> z_scores;
  double max_abs_z = 0.0;
  int beyond_3se = 0;
  int beyond_5se = 0;
};

inline McSurvival mahalanobis_monte_carlo(int gaussians, int samples, std::uint64_t seed,
                                          unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  McSurvival out;
  out.gaussians = gaussians;
  out.z_scores.assign(static_cast<std::size_t>(gaussians), 0.0);

  const auto run_one = [&](int g) {
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(g + 1)));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double sx = 0.1 + 2.0 * uni(rng);
    const double sy = 0.1 + 2.0 * uni(rng);
    const double rho = -0.9 + 1.8 * uni(rng);
    GaussianPrediction pred;
    pred.mean = {20.0 * uni(rng) - 10.0, 20.0 * uni(rng) - 10.0};
    pred.covariance = {sx * sx, rho * sx * sy, sy * sy};
    // Cholesky: Sigma = L L^T.
    const double l11 = sx;
    const double l21 = rho * sy;
    const double l22 = sy * std::sqrt(1.0 - rho * rho);
    const double angle = 2.0 * std::numbers::pi * uni(rng);
    const double radius = 0.2 + 2.6 * uni(rng);
    const Vec2 zq{radius * std::cos(angle), radius * std::sin(angle)};
    const Vec2 query{pred.mean.x + l11 * zq.x, pred.mean.y + l21 * zq.x + l22 * zq.y};

    const double d = mahalanobis_distance(query, pred);
    const double p = mahalanobis_probability(d);
    std::normal_distribution<double> normal(0.0, 1.0);
    long long farther = 0;
    for (int s = 0; s < samples; ++s) {
      const double z1 = normal(rng);
      const double z2 = normal(rng);
      const Vec2 x{pred.mean.x + l11 * z1, pred.mean.y + l21 * z1 + l22 * z2};
      farther += mahalanobis_distance(x, pred) > d;
    }
    const double freq = static_cast<double>(farther) / samples;
    const double se = std::sqrt(p * (1.0 - p) / samples);
    out.z_scores[static_cast<std::size_t>(g)] = (freq - p) / se;
  };

  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int g = static_cast<int>(t); g < gaussians; g += static_cast<int>(threads)) run_one(g);
    });
  }
  for (auto& th : pool) th.join();

  for (const double z : out.z_scores) {
    out.max_abs_z = std::max(out.max_abs_z, std::abs(z));
    out.beyond_3se += std::abs(z) > 3.0;
    out.beyond_5se += std::abs(z) > 5.0;
  }
  return out;
}

// Upper tail of Binomial(n, p) at k, i.e. Pr[X >= k].
inline double binomial_upper_tail(int n, double p, int k) {
  double tail = 0.0;
  for (int i = k; i <= n; ++i) {
    const double log_term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                            i * std::log(p) + (n - i) * std::log1p(-p);
    tail += std::exp(log_term);
  }
  return tail;
}

// Four-point Gauss-Legendre rule on [0, T]; exact for polynomials of degree 7.
inline double gauss_legendre(const std::function<double(double)>& f, double T) {
  static constexpr std::array<double, 4> kNodes = {-0.8611363115940526, -0.3399810435848563,
                                                   0.3399810435848563, 0.8611363115940526};
  static constexpr std::array<double, 4> kWeights = {0.3478548451374538, 0.6521451548625461,
                                                     0.6521451548625461, 0.3478548451374538};
  double sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) sum += kWeights[i] * f(0.5 * T * (kNodes[i] + 1.0));
  return 0.5 * T * sum;
}

// Jerk of the lateral quintic perturbed by c * tau^3 (tau - T)^3. The
// perturbation keeps all six boundary conditions, so the free parameter
// spans a degree-6 family through the same endpoints.
inline double perturbation_jerk(double tau, double T) {
  // d^3/dtau^3 of tau^6 - 3T tau^5 + 3T^2 tau^4 - T^3 tau^3.
  return 120.0 * tau * tau * tau - 180.0 * T * tau * tau + 72.0 * T * T * tau - 6.0 * T * T * T;
}

inline double quintic_jerk(const QuinticCoefficients& b, double tau) {
  return 6.0 * b[3] + 24.0 * b[4] * tau + 60.0 * b[5] * tau * tau;
}

inline double family_jerk_cost(const QuinticCoefficients& b, double T, double c) {
  return gauss_legendre(
      [&](double tau) {
        const double j = quintic_jerk(b, tau) + c * perturbation_jerk(tau, T);
        return j * j;
      },
      T);
}

// Minimizer of the (quadratic) cost in c.
inline double family_jerk_argmin(const QuinticCoefficients& b, double T) {
  const double cross_term = gauss_legendre(
      [&](double tau) { return quintic_jerk(b, tau) * perturbation_jerk(tau, T); }, T);
  const double q_norm = gauss_legendre(
      [&](double tau) {
        const double q = perturbation_jerk(tau, T);
        return q * q;
      },
      T);
  return -cross_term / q_norm;
}

// Closed-loop lane keeping on the straight x-axis: the vehicle starts
// `offset` to the left of the lane at `speed`, tracked by a lane-hold plan.
struct StanleyRun {
  std::vector<double> cross_track;  // front axle, one per 0.1 s, before the step
  std::vector<double> rear_offset;  // rear axle y after each step
};

inline StanleyRun stanley_lane_keep(double offset, double speed, double seconds) {
  std::vector<Vec2> line;
  for (int i = 0; i <= 400; ++i) line.push_back({static_cast<double>(i), 0.0});
  const ReferencePath path(line);
  const TrajectoryPlan plan = make_plan({0.0, 0.0, speed, 0.0, 0.0, 0.0}, {2.0, 0.0, speed});
  VehicleModel model;
  model.position = {0.0, offset};
  model.speed = speed;
  TrackerConfig cfg;
  PidState pid;
  const int steps = static_cast<int>(std::lround(seconds / kSimulationStep));
  const auto trace = track_plan(model, plan, path, cfg, pid, steps);
  StanleyRun run;
  for (const ControlRecord& r : trace) {
    run.cross_track.push_back(r.cross_track);
    run.rear_offset.push_back(r.position.y);
  }
  return run;
}

// Constant speed and steering angle for one full revolution; returns the
// largest relative deviation of the distance to the analytic turning center.
inline double turning_radius_error(double steer, double speed, double dt) {
  VehicleModel model;
  model.speed = speed;
  model.max_speed = speed + 1.0;
  const double radius = model.wheelbase / std::tan(steer);
  const Vec2 center{0.0, radius};
  const double revolution = 2.0 * std::numbers::pi * radius / speed;
  const int steps = static_cast<int>(std::ceil(revolution / dt));
  double worst = 0.0;
  for (int i = 0; i < steps; ++i) {
    model = step_vehicle(model, 0.0, steer, dt);
    worst = std::max(worst, std::abs((model.position - center).norm() - radius) / radius);
  }
  return worst;
}

}  // namespace ethrisk::oracle
