#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "medianwalls/errors.hpp"
#include "medianwalls/point_set.hpp"
#include "medianwalls/rational.hpp"
#include "medianwalls/wallspace.hpp"

namespace medianwalls {

enum class Validation { full, trusted };

/// Finite pseudo-metric space given by its distance matrix.
template <Scalar T>
class FiniteMetricSpace {
 public:
  using scalar_type = T;

  FiniteMetricSpace() = default;

  FiniteMetricSpace(std::vector<std::string> names, std::vector<T> flat, Validation v = Validation::full)
      : names_(std::move(names)), dist_(std::move(flat)) {
    if (dist_.size() != names_.size() * names_.size()) throw DomainError("distance matrix is not square");
    if (v == Validation::full) validate();
  }

  static FiniteMetricSpace from_rows(std::vector<std::string> names, const std::vector<std::vector<T>>& rows) {
    std::vector<T> flat;
    flat.reserve(rows.size() * rows.size());
    for (const auto& r : rows) {
      if (r.size() != rows.size()) throw DomainError("distance matrix is not square");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return FiniteMetricSpace(std::move(names), std::move(flat));
  }

  template <Scalar W>
    requires std::same_as<W, T>
  static FiniteMetricSpace from_wall_space(const BasicWallSpace<W>& X) {
    std::vector<T> flat;
    flat.reserve(X.size() * X.size());
    for (std::size_t i = 0; i < X.size(); ++i)
      for (std::size_t j = 0; j < X.size(); ++j) flat.push_back(X.pdist(PointId{i}, PointId{j}));
    return FiniteMetricSpace(X.names(), std::move(flat), Validation::trusted);
  }

  [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
  [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
  [[nodiscard]] const std::string& name(PointId p) const { return names_.at(p.value); }
  [[nodiscard]] const T& operator()(PointId a, PointId b) const { return dist_[a.value * size() + b.value]; }
  [[nodiscard]] const T& at(std::size_t a, std::size_t b) const { return dist_[a * size() + b]; }
  [[nodiscard]] PointSet all() const { return ~PointSet(size()); }

  void require(PointId p) const {
    if (p.value >= size()) throw DomainError("point index " + std::to_string(p.value) + " out of range");
  }

 private:
  void validate() const {
    const auto n = size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!approx_zero(at(i, i))) throw DomainError("nonzero diagonal at '" + names_[i] + "'");
      for (std::size_t j = 0; j < n; ++j) {
        if (at(i, j) < T{}) throw DomainError("negative distance");
        if (!approx_eq(at(i, j), at(j, i))) throw DomainError("asymmetric distance matrix");
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (!approx_le(at(i, j), at(i, k) + at(k, j)))
            throw DomainError("triangle inequality fails for (" + names_[i] + ", " + names_[k] + ", " + names_[j] +
                              ")");
  }

  std::vector<std::string> names_;
  std::vector<T> dist_;
};

using Triple = std::array<PointId, 3>;

/// d(x,m) + d(m,y) - d(x,y): m is delta-between x and y iff this is <= delta.
template <Scalar T>
[[nodiscard]] T betweenness_defect(const FiniteMetricSpace<T>& S, PointId x, PointId m, PointId y) {
  return S(x, m) + S(m, y) - S(x, y);
}

template <Scalar T>
[[nodiscard]] PointSet interval(const FiniteMetricSpace<T>& S, PointId a, PointId b) {
  S.require(a);
  S.require(b);
  PointSet out(S.size());
  for (std::size_t m = 0; m < S.size(); ++m)
    if (approx_zero(betweenness_defect(S, a, PointId{m}, b))) out.set(m);
  return out;
}

template <Scalar T>
[[nodiscard]] PointSet median_set(const FiniteMetricSpace<T>& S, PointId a, PointId b, PointId c) {
  return interval(S, a, b) & interval(S, b, c) & interval(S, a, c);
}

template <Scalar T>
[[nodiscard]] T diameter(const FiniteMetricSpace<T>& S, const PointSet& set) {
  T best{};
  const auto pts = members_of(set);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (S(pts[i], pts[j]) > best) best = S(pts[i], pts[j]);
  return best;
}

struct MedianVerdict {
  bool pass = true;
  std::optional<Triple> witness;
  explicit operator bool() const noexcept { return pass; }
};

namespace detail {

/// Diameter zero test: zero distance is an equivalence relation, so it
/// suffices to compare every member against the first one.
template <Scalar T>
bool zero_diameter(const FiniteMetricSpace<T>& S, const PointSet& set) {
  const auto first = set.find_first();
  for (auto i = set.find_next(first); i != PointSet::npos; i = set.find_next(i))
    if (!approx_zero(S.at(first, i))) return false;
  return true;
}

}  // namespace detail

/// Every triple has a nonempty median set of diameter zero.
template <Scalar T>
[[nodiscard]] MedianVerdict is_median_space(const FiniteMetricSpace<T>& S) {
  const auto n = S.size();
  constexpr std::size_t kCacheLimit = 640;
  std::vector<PointSet> cache;
  if (n <= kCacheLimit) {
    cache.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        cache[a * n + b] = interval(S, PointId{a}, PointId{b});
        cache[b * n + a] = cache[a * n + b];
      }
  }
  auto iv = [&](std::size_t a, std::size_t b) {
    return cache.empty() ? interval(S, PointId{a}, PointId{b}) : cache[a * n + b];
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto ab = iv(a, b);
      for (std::size_t c = b + 1; c < n; ++c) {
        auto m = ab;
        m &= iv(b, c);
        m &= iv(a, c);
        if (m.none() || !detail::zero_diameter(S, m)) {
          return MedianVerdict{false, Triple{PointId{a}, PointId{b}, PointId{c}}};
        }
      }
    }
  return {};
}

/// Largest of the three pairwise defects of m for the triple.
template <Scalar T>
[[nodiscard]] T tripod_defect_at(const FiniteMetricSpace<T>& S, const Triple& t, PointId m) {
  auto d = betweenness_defect(S, t[0], m, t[1]);
  if (auto e = betweenness_defect(S, t[1], m, t[2]); e > d) d = e;
  if (auto e = betweenness_defect(S, t[0], m, t[2]); e > d) d = e;
  return d;
}

/// min over candidate m of tripod_defect_at, with the minimizer.
template <Scalar T>
[[nodiscard]] std::pair<T, PointId> tripod_defect(const FiniteMetricSpace<T>& S, const Triple& t,
                                                  const PointSet& candidates) {
  if (candidates.none()) throw DomainError("tripod_defect: empty candidate set");
  std::optional<std::pair<T, PointId>> best;
  for (auto m = candidates.find_first(); m != PointSet::npos; m = candidates.find_next(m)) {
    auto d = tripod_defect_at(S, t, PointId{m});
    if (!best || d < best->first) best = std::pair{std::move(d), PointId{m}};
  }
  return *best;
}

template <Scalar T>
struct TripodReport {
  T delta{};
  Triple witness{};
  std::vector<std::pair<T, T>> median_spread;  ///< delta' -> diameter of delta'-median point sets
  std::size_t candidates = 0;
  T tolerance = ScalarTraits<T>::tolerance();
};

template <Scalar T>
[[nodiscard]] T delta_median_diameter(const FiniteMetricSpace<T>& S, const T& delta);

/// Least delta for which S is delta-tripodal with medians drawn from
/// `candidates`, over all triples of points in `triple_points`.
template <Scalar T>
[[nodiscard]] TripodReport<T> tripodal_constant(const FiniteMetricSpace<T>& S, const PointSet& triple_points,
                                                const PointSet& candidates, const std::vector<T>& spread_deltas = {}) {
  TripodReport<T> report;
  report.candidates = candidates.count();
  const auto pts = members_of(triple_points);
  if (!pts.empty()) report.witness = Triple{pts[0], pts[0], pts[0]};
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        const Triple t{pts[i], pts[j], pts[k]};
        auto d = tripod_defect(S, t, candidates).first;
        if (d > report.delta) {
          report.delta = std::move(d);
          report.witness = t;
        }
      }
  for (const auto& dp : spread_deltas) {
    if (dp < report.delta) continue;
    report.median_spread.emplace_back(dp, delta_median_diameter(S, dp));
  }
  return report;
}

template <Scalar T>
[[nodiscard]] TripodReport<T> tripodal_constant(const FiniteMetricSpace<T>& S, const std::vector<T>& spread_deltas = {}) {
  auto r = tripodal_constant(S, S.all(), S.all(), {});
  if (spread_deltas.empty()) {
    r.median_spread.emplace_back(r.delta, delta_median_diameter(S, r.delta));
  } else {
    for (const auto& dp : spread_deltas)
      if (dp >= r.delta) r.median_spread.emplace_back(dp, delta_median_diameter(S, dp));
  }
  return r;
}

/// Largest diameter, over all triples, of the set of points that are
/// delta-between all three pairs.
template <Scalar T>
[[nodiscard]] T delta_median_diameter(const FiniteMetricSpace<T>& S, const T& delta) {
  const auto n = S.size();
  T worst{};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        const Triple t{PointId{a}, PointId{b}, PointId{c}};
        PointSet q(n);
        for (std::size_t m = 0; m < n; ++m)
          if (approx_le(tripod_defect_at(S, t, PointId{m}), delta)) q.set(m);
        if (q.none()) {
          throw DomainError("space is not " + std::to_string(to_double(delta)) + "-tripodal: triple (" + S.names()[a] +
                            ", " + S.names()[b] + ", " + S.names()[c] + ") has no such point");
        }
        if (auto d = diameter(S, q); d > worst) worst = d;
      }
  return worst;
}

/// Points p of A with d(x, p) < d(x, A) + eps.
template <Scalar T>
[[nodiscard]] PointSet epsilon_projection(const FiniteMetricSpace<T>& S, PointId x, const PointSet& A, const T& eps) {
  if (A.none()) throw DomainError("epsilon_projection: empty target set");
  if (!(eps > T{})) throw DomainError("epsilon_projection: eps must be positive");
  std::optional<T> dmin;
  for (auto p = A.find_first(); p != PointSet::npos; p = A.find_next(p))
    if (!dmin || S(x, PointId{p}) < *dmin) dmin = S(x, PointId{p});
  const T bound = *dmin + eps;
  PointSet out(S.size());
  for (auto p = A.find_first(); p != PointSet::npos; p = A.find_next(p))
    if (S(x, PointId{p}) < bound) out.set(p);
  return out;
}

}  // namespace medianwalls
