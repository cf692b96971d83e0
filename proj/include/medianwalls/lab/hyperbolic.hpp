#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "medianwalls/errors.hpp"
#include "medianwalls/lab/rng.hpp"

namespace medianwalls::lab {

using Complex = std::complex<double>;

/// Point of the Poincaré disk.
struct DiskPoint {
  double u = 0;
  double v = 0;

  [[nodiscard]] Complex z() const noexcept { return {u, v}; }
  static DiskPoint from(Complex z) noexcept { return {z.real(), z.imag()}; }
  [[nodiscard]] double norm2() const noexcept { return u * u + v * v; }

  friend bool operator==(const DiskPoint&, const DiskPoint&) = default;
};

inline void require_in_disk(const DiskPoint& p) {
  if (!(p.norm2() < 1.0))
    throw DomainError("point (" + std::to_string(p.u) + ", " + std::to_string(p.v) + ") is not inside the unit disk");
}

/// Poincaré distance, written as 2 asinh(|p-q| / sqrt((1-|p|^2)(1-|q|^2)))
/// so that nearby points keep full relative precision.
[[nodiscard]] inline double hyperbolic_dist(const DiskPoint& p, const DiskPoint& q) {
  require_in_disk(p);
  require_in_disk(q);
  const double chord = std::abs(p.z() - q.z());
  return 2.0 * std::asinh(chord / std::sqrt((1.0 - p.norm2()) * (1.0 - q.norm2())));
}

/// Disk point at hyperbolic distance r from the origin in direction angle.
[[nodiscard]] inline DiskPoint polar_point(double r, double angle) {
  return DiskPoint::from(std::polar(std::tanh(r / 2.0), angle));
}

/// Orientation-preserving disk isometry z -> e^{i phi} (z - a) / (1 - conj(a) z).
class Mobius {
 public:
  Mobius() = default;
  Mobius(Complex a, double phi) : a_(a), rot_(std::polar(1.0, phi)) {
    if (!(std::norm(a) < 1.0)) throw DomainError("Mobius: translation point must lie inside the disk");
  }

  /// The map sending p to the origin (no rotation).
  static Mobius centering(const DiskPoint& p) { return {p.z(), 0.0}; }

  [[nodiscard]] Complex operator()(Complex z) const { return rot_ * (z - a_) / (1.0 - std::conj(a_) * z); }
  [[nodiscard]] DiskPoint operator()(const DiskPoint& p) const { return DiskPoint::from((*this)(p.z())); }

  /// r(z - a)/(1 - conj(a) z) inverts to conj(r)(w - b)/(1 - conj(b) w) with b = -a r.
  [[nodiscard]] Mobius inverse() const { return Mobius(-a_ * rot_, std::conj(rot_), Tag{}); }

  [[nodiscard]] Complex translation() const noexcept { return a_; }
  [[nodiscard]] Complex rotation() const noexcept { return rot_; }

 private:
  struct Tag {};
  Mobius(Complex a, Complex rot, Tag) : a_(a), rot_(rot) {}

  Complex a_{0.0, 0.0};
  Complex rot_{1.0, 0.0};
};

/// Random isometry: translation point uniform in the Euclidean disk of
/// radius max_radius, rotation uniform.
[[nodiscard]] inline Mobius random_mobius(CounterRng& rng, double max_radius = 0.9) {
  const double r = max_radius * std::sqrt(rng.uniform());
  const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return Mobius(std::polar(r, t), phi);
}

/// Hyperbolic midpoint of p and q.
[[nodiscard]] inline DiskPoint midpoint(const DiskPoint& p, const DiskPoint& q) {
  const auto to_origin = Mobius::centering(p);
  const Complex qp = to_origin(q.z());
  if (std::abs(qp) == 0.0) return p;
  const double d = hyperbolic_dist(p, q);
  const Complex m = std::polar(std::tanh(d / 4.0), std::arg(qp));
  return DiskPoint::from(to_origin.inverse()(m));
}

/// Geodesic with ideal endpoints e^{i theta1}, e^{i theta2}.
struct GeodesicWall {
  double theta1 = 0;
  double theta2 = std::numbers::pi;
};

inline constexpr double kOnGeodesicTolerance = 1e-12;

/// Signed side of p relative to the wall. The geodesic is the arc of the circle
/// orthogonal to the unit circle through both endpoints; with u the unit vector
/// at the middle of the shorter arc and Delta its angular width, p is inside that
/// circle iff cos(Delta/2)(|p|^2 + 1) - 2 p.u < 0. For Delta = pi this is the
/// diameter case.
[[nodiscard]] inline double side_value(const GeodesicWall& w, const DiskPoint& p) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double gap = std::fmod(w.theta2 - w.theta1, two_pi);
  if (gap < 0) gap += two_pi;
  if (gap < 1e-15 || two_pi - gap < 1e-15) throw DomainError("degenerate geodesic wall: endpoints coincide");
  double mid = w.theta1 + gap / 2.0;
  if (gap > std::numbers::pi) {
    gap = two_pi - gap;
    mid = w.theta2 + gap / 2.0;
  }
  const double c = std::cos(gap / 2.0);
  return c * (p.norm2() + 1.0) - 2.0 * (p.u * std::cos(mid) + p.v * std::sin(mid));
}

/// -1, 0 (numerically on the geodesic) or +1.
[[nodiscard]] inline int side(const GeodesicWall& w, const DiskPoint& p) {
  const double g = side_value(w, p);
  if (std::abs(g) < kOnGeodesicTolerance) return 0;
  return g < 0 ? -1 : 1;
}

/// Whether the wall separates p from q. Throws if either point lies on it.
[[nodiscard]] inline bool geodesic_separates(const GeodesicWall& w, const DiskPoint& p, const DiskPoint& q) {
  require_in_disk(p);
  require_in_disk(q);
  const int sp = side(w, p);
  const int sq = side(w, q);
  if (sp == 0 || sq == 0) throw DomainError("geodesic_separates: point lies on the wall");
  return sp != sq;
}

/// Geodesic at hyperbolic distance r from the origin whose nearest point has
/// direction phi: its endpoints are phi +- acos(tanh r).
[[nodiscard]] inline GeodesicWall geodesic_at(double r, double phi) {
  const double half = std::acos(std::tanh(r));
  return {phi - half, phi + half};
}

/// Image of a wall under an isometry (endpoints move along the boundary).
[[nodiscard]] inline GeodesicWall transform(const Mobius& g, const GeodesicWall& w) {
  return {std::arg(g(std::polar(1.0, w.theta1))), std::arg(g(std::polar(1.0, w.theta2)))};
}

}  // namespace medianwalls::lab
