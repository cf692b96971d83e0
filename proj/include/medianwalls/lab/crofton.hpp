#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "medianwalls/errors.hpp"
#include "medianwalls/lab/hyperbolic.hpp"
#include "medianwalls/lab/rng.hpp"

namespace medianwalls::lab {

struct MonteCarloConfig {
  std::uint64_t seed = 1;
  std::uint64_t samples = 1'000'000;
  /// Hyperbolic radius of the disk around the pair's midpoint that sampled
  /// geodesics must meet; defaults to dist/2 + kDefaultProposalMargin.
  std::optional<double> proposal_radius;
  std::uint64_t stream = 0;
  unsigned threads = 0;  ///< 0: hardware concurrency
};

inline constexpr double kDefaultProposalMargin = 0.5;
inline constexpr std::uint64_t kCalibrationSeed = 0x5eed'ca1bULL;
inline constexpr std::uint64_t kCalibrationStream = 0xca1b;

struct Estimate {
  double value = 0;
  double std_error = 0;
  std::uint64_t samples = 0;
  double proposal_radius = 0;
  bool radius_widened = false;
  std::uint64_t resampled = 0;  ///< walls redrawn because a point sat on them
  double calibration_rel_error = 0;

  /// Standard error including the calibration constant's uncertainty.
  [[nodiscard]] double combined_std_error() const {
    if (value == 0) return std_error;
    return std::abs(value) * std::hypot(std_error / value, calibration_rel_error);
  }
};

namespace detail {

inline constexpr std::uint64_t kChunk = 1 << 15;
inline constexpr std::uint64_t kDrawsPerSample = 16;

struct ChunkTally {
  std::uint64_t hits = 0;
  std::uint64_t resampled = 0;
};

}  // namespace detail

/// Monte Carlo estimate of the invariant measure of geodesics separating p
/// from q, in the measure cosh(r) dr dphi (r, phi polar coordinates of the
/// geodesic's nearest point to the pair's midpoint). Geodesics are drawn in
/// the frame centred at the midpoint and mapped back, so the side tests run in
/// the caller's coordinates.
[[nodiscard]] inline Estimate crofton_raw(const DiskPoint& p, const DiskPoint& q, const MonteCarloConfig& cfg) {
  if (cfg.samples == 0) throw DomainError("crofton_estimate: samples must be positive");
  const double d = hyperbolic_dist(p, q);
  Estimate out;
  out.samples = cfg.samples;
  if (p == q || d == 0.0) return out;

  double radius = cfg.proposal_radius.value_or(d / 2.0 + kDefaultProposalMargin);
  if (!(radius > d / 2.0)) {
    // geodesics separating p and q meet the segment, which lies within d/2 of the midpoint
    radius = d / 2.0 + kDefaultProposalMargin;
    out.radius_widened = true;
  }
  out.proposal_radius = radius;

  const Mobius back = Mobius::centering(midpoint(p, q)).inverse();
  const double sinh_r = std::sinh(radius);
  const std::uint64_t n = cfg.samples;
  const std::uint64_t chunks = (n + detail::kChunk - 1) / detail::kChunk;
  std::vector<detail::ChunkTally> tally(chunks);

  auto run_chunk = [&](std::uint64_t c) {
    detail::ChunkTally t;
    const std::uint64_t end = std::min(n, (c + 1) * detail::kChunk);
    for (std::uint64_t i = c * detail::kChunk; i < end; ++i) {
      CounterRng rng(cfg.seed, cfg.stream, i * detail::kDrawsPerSample);
      for (;;) {
        if (rng.index() + 2 > (i + 1) * detail::kDrawsPerSample)
          throw std::runtime_error("crofton_estimate: sample kept landing on its wall");
        const double r = std::asinh(rng.uniform() * sinh_r);
        const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const auto w = transform(back, geodesic_at(r, phi));
        const int sp = side(w, p);
        const int sq = side(w, q);
        if (sp == 0 || sq == 0) {
          ++t.resampled;
          continue;
        }
        t.hits += sp != sq ? 1 : 0;
        break;
      }
    }
    tally[c] = t;
  };

  unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  if (threads <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        try {
          for (auto c = next++; c < chunks; c = next++) run_chunk(c);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::uint64_t hits = 0;
  for (const auto& t : tally) {
    hits += t.hits;
    out.resampled += t.resampled;
  }
  const double mass = 2.0 * std::numbers::pi * sinh_r;
  const double frac = static_cast<double>(hits) / static_cast<double>(n);
  out.value = mass * frac;
  out.std_error = n > 1 ? mass * std::sqrt(frac * (1.0 - frac) / static_cast<double>(n - 1)) : 0.0;
  return out;
}

/// The reference pair at hyperbolic distance 1 that fixes the unit.
[[nodiscard]] inline std::pair<DiskPoint, DiskPoint> calibration_pair() { return {DiskPoint{}, polar_point(1.0, 0.0)}; }

struct Calibration {
  double c = 1;
  double rel_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = kCalibrationSeed;
};

[[nodiscard]] inline Calibration calibrate(std::uint64_t samples = 1'000'000, std::uint64_t seed = kCalibrationSeed) {
  const auto [a, b] = calibration_pair();
  MonteCarloConfig cfg;
  cfg.seed = seed;
  cfg.samples = samples;
  cfg.stream = kCalibrationStream;
  const auto e = crofton_raw(a, b, cfg);
  return {e.value, e.std_error / e.value, samples, seed};
}

/// Calibrated estimate: the measure of W(p|q) in units where the calibration
/// pair has measure 1.
[[nodiscard]] inline Estimate crofton_estimate(const DiskPoint& p, const DiskPoint& q, const MonteCarloConfig& cfg,
                                               const Calibration& cal) {
  auto e = crofton_raw(p, q, cfg);
  e.value /= cal.c;
  e.std_error /= cal.c;
  e.calibration_rel_error = cal.rel_error;
  return e;
}

namespace detail {

/// Angle of the far endpoint of the geodesic from e^{it} through x.
inline double far_endpoint(double t, const DiskPoint& x) {
  const auto to_origin = Mobius::centering(x);
  const Complex w = to_origin(std::polar(1.0, t));
  return std::arg(to_origin.inverse()(-w));
}

inline double ccw_gap(double from, double to) {
  double g = std::fmod(to - from, 2.0 * std::numbers::pi);
  if (g <= 0) g += 2.0 * std::numbers::pi;
  return g;
}

}  // namespace detail

/// Deterministic value of the same measure in the endpoint parametrization
/// dtheta1 dtheta2 / |e^{i theta1} - e^{i theta2}|^2: for fixed theta1 the
/// separating theta2 fill the arc between the far endpoints through p and q,
/// whose measure is |cot(gap_p / 2) - cot(gap_q / 2)| / 2. The outer integral
/// has kinks at the endpoints of the geodesic through p and q and is split there.
[[nodiscard]] inline double crofton_oracle_raw(const DiskPoint& p, const DiskPoint& q, double tolerance = 1e-13) {
  require_in_disk(p);
  require_in_disk(q);
  if (p == q) return 0.0;
  auto integrand = [&](double t) {
    const double gp = detail::ccw_gap(t, detail::far_endpoint(t, p));
    const double gq = detail::ccw_gap(t, detail::far_endpoint(t, q));
    return 0.5 * std::abs(1.0 / std::tan(gp / 2.0) - 1.0 / std::tan(gq / 2.0));
  };
  const auto to_origin = Mobius::centering(p);
  const Complex dir = to_origin(q.z()) / std::abs(to_origin(q.z()));
  double k1 = std::arg(to_origin.inverse()(dir));
  double k2 = std::arg(to_origin.inverse()(-dir));
  if (k1 > k2) std::swap(k1, k2);
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double total = 0;
  for (auto [lo, hi] : {std::pair{k1, k2}, std::pair{k2, k1 + 2.0 * std::numbers::pi}})
    total += GK::integrate(integrand, lo, hi, 20, tolerance);
  return total;
}

/// Oracle in the estimator's calibrated units.
[[nodiscard]] inline double crofton_oracle(const DiskPoint& p, const DiskPoint& q) {
  const auto [a, b] = calibration_pair();
  return crofton_oracle_raw(p, q) / crofton_oracle_raw(a, b);
}

}  // namespace medianwalls::lab
