#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "medianwalls/errors.hpp"
#include "medianwalls/metric_space.hpp"

namespace medianwalls::lab {

struct InequalityVerdict {
  bool holds = false;
  double slack = 0;  ///< lhs - rhs; nonnegative when the inequality holds
};

struct SnowflakeInequalities {
  InequalityVerdict beta;   ///< (a+b)^beta >= a^beta + b^beta
  InequalityVerdict alpha;  ///< a^alpha + b^alpha - (a+b)^alpha >= b^alpha (2 - 2^alpha) >= 0
};

/// Relative tolerance for the equality case a = b.
inline constexpr double kInequalityRelTolerance = 1e-12;

[[nodiscard]] inline SnowflakeInequalities snowflake_inequalities(double a, double b, double alpha, double beta) {
  if (!(a >= b && b >= 0)) throw DomainError("snowflake_inequalities: need a >= b >= 0");
  if (!(alpha > 0 && alpha < 1)) throw DomainError("snowflake_inequalities: alpha must lie in (0, 1)");
  if (!(beta > 1)) throw DomainError("snowflake_inequalities: beta must exceed 1");
  SnowflakeInequalities out;
  const double big = std::pow(a + b, beta);
  out.beta.slack = big - std::pow(a, beta) - std::pow(b, beta);
  out.beta.holds = out.beta.slack >= -kInequalityRelTolerance * big;

  const double lhs = std::pow(a, alpha) + std::pow(b, alpha) - std::pow(a + b, alpha);
  const double rhs = std::pow(b, alpha) * (2.0 - std::pow(2.0, alpha));
  const double scale = std::max(std::pow(a + b, alpha), 1e-300);
  out.alpha.slack = lhs - rhs;
  out.alpha.holds = out.alpha.slack >= -kInequalityRelTolerance * scale && rhs >= 0;
  return out;
}

/// Threshold on pairwise distance above which no delta-median can exist, as
/// the bound 2 delta / (2 - 2^alpha).
[[nodiscard]] inline double snowflake_threshold(double alpha, double delta) {
  return 2.0 * delta / (2.0 - std::pow(2.0, alpha));
}

/// The same bound derived in the base metric: any m delta-between x and y in
/// dist^alpha has (2 - 2^alpha) min(d(m,x), d(m,y))^alpha <= delta, so two of
/// the three points lie within (delta / (2 - 2^alpha))^{1/alpha} of m.
[[nodiscard]] inline double snowflake_base_threshold(double alpha, double delta) {
  return 2.0 * std::pow(delta / (2.0 - std::pow(2.0, alpha)), 1.0 / alpha);
}

/// The larger of the two, which is valid for every delta.
[[nodiscard]] inline double snowflake_effective_threshold(double alpha, double delta) {
  return std::max(snowflake_threshold(alpha, delta), snowflake_base_threshold(alpha, delta));
}

/// dist^alpha of a finite metric space.
[[nodiscard]] inline FiniteMetricSpace<double> snowflaked(const FiniteMetricSpace<double>& S, double alpha) {
  std::vector<double> flat(S.size() * S.size());
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = 0; j < S.size(); ++j) flat[i * S.size() + j] = std::pow(S.at(i, j), alpha);
  return FiniteMetricSpace<double>(S.names(), std::move(flat), Validation::trusted);
}

[[nodiscard]] inline FiniteMetricSpace<double> line_space(const std::vector<double>& xs) {
  std::vector<std::string> names;
  std::vector<double> flat;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    names.push_back("x" + std::to_string(i));
    for (double y : xs) flat.push_back(std::abs(xs[i] - y));
  }
  return FiniteMetricSpace<double>(std::move(names), std::move(flat), Validation::trusted);
}

struct IntervalCheck {
  bool pass = true;
  double min_defect = std::numeric_limits<double>::infinity();
  std::optional<Triple> witness;  ///< (x, z, y) realizing min_defect
  std::uint64_t triples = 0;
};

/// Over all x, z, y with d(x,z), d(z,y) > 0, the defect of z between x and y
/// in dist^alpha must be strictly positive.
[[nodiscard]] inline IntervalCheck snowflake_interval_check(const FiniteMetricSpace<double>& base, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("snowflake_interval_check: alpha must lie in (0, 1)");
  const auto S = snowflaked(base, alpha);
  IntervalCheck out;
  const auto n = S.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        if (!(base.at(x, z) > 0) || !(base.at(z, y) > 0)) continue;
        ++out.triples;
        const double d = betweenness_defect(S, PointId{x}, PointId{z}, PointId{y});
        if (d < out.min_defect) {
          out.min_defect = d;
          out.witness = Triple{PointId{x}, PointId{z}, PointId{y}};
        }
        if (!(d > 0)) out.pass = false;
      }
  return out;
}

struct MedianBoundCheck {
  double threshold = 0;            ///< 2 delta / (2 - 2^alpha)
  double base_threshold = 0;       ///< 2 (delta / (2 - 2^alpha))^{1/alpha}
  double effective_threshold = 0;  ///< max of the two
  double tolerance = 0;
  std::uint64_t triples = 0;
  std::uint64_t triples_with_median = 0;
  std::uint64_t far_triples = 0;  ///< min pairwise distance above effective_threshold + tolerance
  std::uint64_t far_with_median = 0;
  std::uint64_t between_checked = 0;
  std::uint64_t intermediate_failures = 0;  ///< (2 - 2^alpha) min(d)^alpha > delta
  std::uint64_t base_form_failures = 0;     ///< (2 - 2^alpha) min(d) > delta, tracked separately
  double max_median_min_distance = 0;  ///< largest min-pairwise distance of a triple that has a median
  bool pass = true;
};

/// Brute-force check of the delta-median bound for the snowflaked metric:
/// candidate medians range over every point of `base`.
[[nodiscard]] inline MedianBoundCheck snowflake_median_bound(const FiniteMetricSpace<double>& base, double alpha,
                                                              double delta, double tolerance,
                                                              const std::vector<Triple>& triples) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("snowflake_median_bound: alpha must lie in (0, 1)");
  if (!(delta >= 0)) throw DomainError("snowflake_median_bound: delta must be nonnegative");
  MedianBoundCheck out;
  out.threshold = snowflake_threshold(alpha, delta);
  out.base_threshold = snowflake_base_threshold(alpha, delta);
  out.effective_threshold = std::max(out.threshold, out.base_threshold);
  out.tolerance = tolerance;
  const double k = 2.0 - std::pow(2.0, alpha);
  const auto S = snowflaked(base, alpha);
  const double slack = 1e-12;
  for (const auto& t : triples) {
    ++out.triples;
    const double min_pair = std::min({base(t[0], t[1]), base(t[1], t[2]), base(t[0], t[2])});
    const bool far = min_pair > out.effective_threshold + tolerance;
    out.far_triples += far ? 1 : 0;
    bool has_median = false;
    for (std::size_t m = 0; m < S.size(); ++m) {
      bool all = true;
      for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{0, 2}}) {
        const PointId x = t[static_cast<std::size_t>(i)], y = t[static_cast<std::size_t>(j)];
        if (betweenness_defect(S, x, PointId{m}, y) <= delta + slack) {
          ++out.between_checked;
          const double near = std::min(base(x, PointId{m}), base(PointId{m}, y));
          if (k * std::pow(near, alpha) > delta + slack) ++out.intermediate_failures;
          if (k * near > delta + slack) ++out.base_form_failures;
        } else {
          all = false;
        }
      }
      has_median = has_median || all;
    }
    if (has_median) {
      ++out.triples_with_median;
      out.max_median_min_distance = std::max(out.max_median_min_distance, min_pair);
      if (far) ++out.far_with_median;
    }
  }
  out.pass = out.far_with_median == 0 && out.intermediate_failures == 0;
  return out;
}

/// All triples of a finite space.
[[nodiscard]] inline std::vector<Triple> all_triples(std::size_t n) {
  std::vector<Triple> out;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) out.push_back({PointId{a}, PointId{b}, PointId{c}});
  return out;
}

}  // namespace medianwalls::lab
