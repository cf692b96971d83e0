#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace medianwalls::lab {

struct L1EmbeddingCheck {
  double integral = 0;
  double euclidean = 0;
  double error = 0;
  bool pass = true;
};

inline constexpr double kL1Tolerance = 1e-8;

/// Compares the integral over [0, 2pi] of |dx sin t + dy cos t| / 4 with the
/// Euclidean distance. The integrand is |R sin(t + phi)| / 4, whose kinks at
/// t = -phi mod pi split the range into smooth pieces.
[[nodiscard]] inline L1EmbeddingCheck r2_l1_embedding_check(const std::array<double, 2>& p,
                                                            const std::array<double, 2>& q) {
  const double dx = p[0] - q[0];
  const double dy = p[1] - q[1];
  L1EmbeddingCheck out;
  out.euclidean = std::hypot(dx, dy);
  auto f = [&](double t) { return 0.25 * std::abs(dx * std::sin(t) + dy * std::cos(t)); };
  constexpr double pi = std::numbers::pi;
  double k = std::fmod(-std::atan2(dy, dx), pi);
  if (k < 0) k += pi;
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  for (auto [lo, hi] : {std::pair{0.0, k}, std::pair{k, k + pi}, std::pair{k + pi, 2 * pi}})
    if (hi > lo) out.integral += GK::integrate(f, lo, hi, 10, 1e-14);
  out.error = std::abs(out.integral - out.euclidean);
  out.pass = out.error < kL1Tolerance;
  return out;
}

}  // namespace medianwalls::lab
