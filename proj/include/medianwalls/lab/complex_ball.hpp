#pragma once

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "medianwalls/errors.hpp"
#include "medianwalls/lab/hyperbolic.hpp"

namespace medianwalls::lab {

/// Point of the unit ball in C^n.
struct BallPoint {
  std::vector<Complex> z;

  [[nodiscard]] double norm2() const {
    return std::accumulate(z.begin(), z.end(), 0.0, [](double acc, const Complex& c) { return acc + std::norm(c); });
  }
  friend bool operator==(const BallPoint&, const BallPoint&) = default;
};

/// Normalization: cosh^2(d/2) = |1 - <p,q>|^2 / ((1-|p|^2)(1-|q|^2)). On a
/// complex line through the origin this is the Poincaré disk metric, so the
/// scale factor against hyperbolic_dist is 1 (holomorphic sectional curvature
/// -1, totally real planes -1/4).
inline constexpr double kComplexLineScale = 1.0;
inline constexpr const char* kComplexNormalization =
    "cosh^2(d/2) = |1 - <p,q>|^2 / ((1 - |p|^2)(1 - |q|^2)); complex lines are Poincare disks with scale 1";

inline void require_in_ball(const BallPoint& p) {
  if (!(p.norm2() < 1.0)) throw DomainError("point is not inside the unit ball");
}

/// Uses sinh^2(d/2) = (|p-q|^2 - sum_{i<j} |p_i q_j - p_j q_i|^2) / ((1-|p|^2)(1-|q|^2)),
/// which avoids the cancellation in the cosh form for nearby points.
[[nodiscard]] inline double complex_hyperbolic_dist(const BallPoint& p, const BallPoint& q) {
  require_in_ball(p);
  require_in_ball(q);
  if (p.z.size() != q.z.size()) throw DomainError("complex_hyperbolic_dist: dimension mismatch");
  double diff = 0;
  for (std::size_t i = 0; i < p.z.size(); ++i) diff += std::norm(p.z[i] - q.z[i]);
  double wedge = 0;
  for (std::size_t i = 0; i < p.z.size(); ++i)
    for (std::size_t j = i + 1; j < p.z.size(); ++j)
      wedge += std::norm(p.z[i] * q.z[j] - p.z[j] * q.z[i]);
  const double num = std::max(diff - wedge, 0.0);
  return 2.0 * std::asinh(std::sqrt(num / ((1.0 - p.norm2()) * (1.0 - q.norm2()))));
}

/// Direct evaluation of the cosh form; kept as an independent cross-check.
[[nodiscard]] inline double complex_hyperbolic_dist_cosh_form(const BallPoint& p, const BallPoint& q) {
  Complex inner{};
  for (std::size_t i = 0; i < p.z.size(); ++i) inner += p.z[i] * std::conj(q.z[i]);
  const double c2 = std::norm(1.0 - inner) / ((1.0 - p.norm2()) * (1.0 - q.norm2()));
  return 2.0 * std::acosh(std::sqrt(std::max(c2, 1.0)));
}

/// The disk point w placed on the first coordinate axis of C^n.
[[nodiscard]] inline BallPoint on_first_axis(const DiskPoint& w, std::size_t n = 2) {
  BallPoint p{std::vector<Complex>(n)};
  p.z[0] = w.z();
  return p;
}

}  // namespace medianwalls::lab
