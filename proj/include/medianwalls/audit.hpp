#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "medianwalls/errors.hpp"
#include "medianwalls/medianization.hpp"
#include "medianwalls/metric_space.hpp"
#include "medianwalls/wallspace.hpp"

namespace medianwalls {

/// One proved inequality, evaluated on a concrete instance.
template <Scalar W>
struct AuditCheck {
  std::string id;      ///< "a" .. "e"
  std::string name;
  std::string anchor;  ///< the implication the inequality comes from
  W observed{};
  W bound{};
  bool strict = false;  ///< observed < bound rather than <=
  std::size_t cases = 0;
  bool pass = true;
  std::string witness;
};

template <Scalar W>
struct AuditReport {
  W eta{};
  W delta{};
  W D{};
  W K{};
  W coarse_constant{};  ///< D' of the embedding into M(X)
  std::size_t rank = 0;
  std::size_t points = 0;
  std::size_t walls = 0;
  std::size_t sections = 0;
  bool closure_equals_enumeration = false;
  std::vector<ProfileEntry<W>> f_profile;
  std::vector<AuditCheck<W>> checks;

  [[nodiscard]] bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
  }
};

/// eta: the farthest any section lies from the canonical ones.
template <Scalar W>
[[nodiscard]] W hausdorff_to_medianization(const FiniteMedianSpace<W>& M) {
  W eta{};
  if (M.base().size() == 0) return eta;
  for (std::size_t s = 0; s < M.size(); ++s) {
    std::optional<W> best;
    for (auto e : M.embedded_points())
      if (!best || M.dist(s, e) < *best) best = M.dist(s, e);
    if (*best > eta) eta = *best;
  }
  return eta;
}

/// Least D such that every z that is delta-between two points of a
/// half-space h lies within D of h. z ranges over the points of X.
template <Scalar W>
[[nodiscard]] W condition3_constants(const BasicWallSpace<W>& X, const W& delta) {
  const auto S = FiniteMetricSpace<W>::from_wall_space(X);
  const auto tri = tripodal_constant(S, S.all(), S.all());
  if (!approx_le(tri.delta, delta)) {
    throw DomainError("space is not " + std::to_string(to_double(delta)) + "-tripodal (tripodal constant " +
                      std::to_string(to_double(tri.delta)) + ")");
  }
  W D{};
  for (std::size_t k = 0; k < X.half_space_count(); ++k) {
    const auto& h = X.half_space(k).members;
    if (h.none()) continue;
    const auto pts = members_of(h);
    for (std::size_t z = 0; z < X.size(); ++z) {
      if (h.test(z)) continue;
      const PointId pz{z};
      const auto dz = distance_to_set(X, pz, h);
      if (!(dz > D)) continue;
      bool between = false;
      for (std::size_t i = 0; i < pts.size() && !between; ++i)
        for (std::size_t j = i; j < pts.size() && !between; ++j)
          between = approx_le(betweenness_defect(S, pts[i], pz, pts[j]), delta);
      if (between) D = dz;
    }
  }
  return D;
}

namespace detail {

template <Scalar W>
W weight_separating_from_projection(const BasicWallSpace<W>& X, PointId x, PointId p, const PointSet& h) {
  // walls of W(x|p) that do not separate x from all of h
  W sum{};
  for (const auto& w : X.walls()) {
    if (!w.separates(x, p)) continue;
    const auto& xs = w.side(w.side_of(x)).members;
    if (xs.intersects(h)) sum += w.weight;
  }
  return sum;
}

}  // namespace detail

/// K: the heaviest set W(x|p) \ W(x|h), over half-spaces h, points x outside
/// h and 1-projections p of x on h.
template <Scalar W>
[[nodiscard]] W condition4_K(const BasicWallSpace<W>& X) {
  const auto S = FiniteMetricSpace<W>::from_wall_space(X);
  W K{};
  for (std::size_t k = 0; k < X.half_space_count(); ++k) {
    const auto& h = X.half_space(k).members;
    if (h.none() || h.all()) continue;
    for (std::size_t x = 0; x < X.size(); ++x) {
      if (h.test(x)) continue;
      const auto proj = epsilon_projection(S, PointId{x}, h, W{1});
      for (auto p = proj.find_first(); p != PointSet::npos; p = proj.find_next(p)) {
        const auto v = detail::weight_separating_from_projection(X, PointId{x}, PointId{p}, h);
        if (v > K) K = v;
      }
    }
  }
  return K;
}

namespace detail {

template <Scalar W>
AuditCheck<W> make_check(std::string id, std::string name, std::string anchor, W bound, bool strict) {
  AuditCheck<W> c;
  c.id = std::move(id);
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.bound = std::move(bound);
  c.strict = strict;
  return c;
}

template <Scalar W>
void observe(AuditCheck<W>& c, const W& value, const std::string& witness) {
  ++c.cases;
  const bool ok = c.strict ? approx_lt(value, c.bound) : approx_le(value, c.bound);
  if (c.cases == 1 || value > c.observed) c.observed = value;
  if (!ok && c.pass) {
    c.pass = false;
    c.witness = witness;
  }
}

/// Hausdorff distance between two sets of sections (0 when both are empty).
template <Scalar W>
std::optional<W> section_hausdorff(const FiniteMedianSpace<W>& M, const PointSet& A, const PointSet& B) {
  if (A.none() && B.none()) return W{};
  if (A.none() || B.none()) return std::nullopt;
  const auto one_side = [&](const PointSet& from, const PointSet& to) {
    W worst{};
    for (auto a = from.find_first(); a != PointSet::npos; a = from.find_next(a)) {
      std::optional<W> best;
      for (auto b = to.find_first(); b != PointSet::npos; b = to.find_next(b))
        if (!best || M.dist(a, b) < *best) best = M.dist(a, b);
      if (*best > worst) worst = *best;
    }
    return worst;
  };
  return std::max(one_side(A, B), one_side(B, A));
}

}  // namespace detail

/// Constants the quantitative checks depend on.
template <Scalar W>
struct AuditConstants {
  W eta{};
  W delta{};
  W D{};
  W K{};
  W coarse_constant{};
  std::vector<ProfileEntry<W>> f_profile;
};

/// Checks (a) to (e): the inequalities the equivalence proof relies on.
template <Scalar W>
[[nodiscard]] std::vector<AuditCheck<W>> quantitative_audit(const FiniteMedianSpace<W>& M, const AuditConstants<W>& c) {
  const auto& X = M.base();
  const auto S = FiniteMetricSpace<W>::from_wall_space(X);
  const W one{1};
  std::vector<AuditCheck<W>> out;

  // (a) K <= f(2D + 1 + delta)
  {
    const W radius = W{2} * c.D + one + c.delta;
    auto chk = detail::make_check<W>("a", "3=>4 bound", "condition 3 gives condition 4 with K = f(2D + 1 + delta)",
                                     local_finiteness(X, radius), false);
    detail::observe(chk, c.K, "K exceeds f at radius " + std::to_string(to_double(radius)));
    out.push_back(std::move(chk));
  }

  // (b) and (c): for each section tau and each x within +1 of the nearest
  // canonical section, every wall of W(x|tau) cuts B(x, 2K + 1), through a
  // 1-projection p of x on the far side.
  {
    const W radius = W{2} * c.K + one;
    auto ball = detail::make_check<W>("b", "4=>1 ball cut",
                                      "condition 4 gives condition 1: walls of W(x|tau) cut the open ball B(x, 2K + 1)",
                                      radius, true);
    auto dist = detail::make_check<W>("c", "4=>1 distance bound",
                                      "condition 4 gives condition 1: pdist(x, p) <= 2K + 1", radius, false);
    for (std::size_t t = 0; t < M.size() && X.size() > 0; ++t) {
      std::optional<W> nearest;
      for (auto e : M.embedded_points())
        if (!nearest || M.dist(t, e) < *nearest) nearest = M.dist(t, e);
      for (std::size_t x = 0; x < X.size(); ++x) {
        const auto e = M.embedded(PointId{x});
        if (!(M.dist(t, e) < *nearest + one)) continue;
        const auto& tau = M.sections()[t];
        const auto& sx = M.sections()[e];
        for (std::size_t w = 0; w < X.wall_count(); ++w) {
          if (tau.chooses_a.test(w) == sx.chooses_a.test(w)) continue;
          const auto& wall = X.walls()[w];
          const auto& far = wall.side(opposite(wall.side_of(PointId{x}))).members;
          const auto label = "section " + M.names()[t] + ", point " + X.names()[x] + ", wall " + wall.name;
          // the wall cuts the open ball iff its far side comes closer than the radius
          detail::observe(ball, distance_to_set(X, PointId{x}, far), label);
          const auto proj = epsilon_projection(S, PointId{x}, far, one);
          for (auto p = proj.find_first(); p != PointSet::npos; p = proj.find_next(p))
            detail::observe(dist, X.pdist(PointId{x}, PointId{p}), label + ", projection " + X.names()[p]);
        }
      }
    }
    out.push_back(std::move(ball));
    out.push_back(std::move(dist));
  }

  // (d) Hausdorff(iota(h), h_M) <= 3 eta
  {
    auto chk = detail::make_check<W>("d", "wall 3eta", "each induced wall h_M lies within Hausdorff distance 3 eta of h",
                                     W{3} * c.eta, false);
    for (std::size_t k = 0; k < X.half_space_count(); ++k) {
      const auto hd = detail::section_hausdorff(M, M.image(X.half_space(k).members), induced_wall(M, k));
      const auto label = std::string("half-space ") + (k % 2 == 0 ? "A" : "B") + " of wall " + X.walls()[k / 2].name;
      if (!hd) {
        ++chk.cases;
        chk.pass = false;
        chk.witness = label + " (one side empty)";
        continue;
      }
      detail::observe(chk, *hd, label);
    }
    out.push_back(std::move(chk));
  }

  // (e) dist(z, h) <= delta/2 + 3 D' for z delta-between two points of h,
  // at the measured delta and at 2 D' (the tripodal constant the proof derives).
  {
    auto chk = detail::make_check<W>("e", "2=>3 neighbourhood",
                                     "condition 2 gives condition 3 with D(delta) = delta/2 + 3D'", W{}, false);
    std::vector<W> deltas{c.delta};
    if (W{2} * c.coarse_constant > c.delta) deltas.push_back(W{2} * c.coarse_constant);
    W worst_gap{};
    for (const auto& d : deltas) {
      const W bound = d / W{2} + W{3} * c.coarse_constant;
      const W got = condition3_constants(X, d);
      ++chk.cases;
      const W gap = got - bound;
      if (chk.cases == 1 || gap > worst_gap) {
        worst_gap = gap;
        chk.observed = got;
        chk.bound = bound;
      }
      if (!approx_le(got, bound) && chk.pass) {
        chk.pass = false;
        chk.witness = "delta = " + std::to_string(to_double(d));
      }
    }
    out.push_back(std::move(chk));
  }
  return out;
}

/// Profile radii: a fixed ladder plus the radii the checks use.
template <Scalar W>
[[nodiscard]] std::vector<W> profile_radii(const W& D, const W& K, const W& delta) {
  std::vector<W> r{W{0}, W{1}, W{2}, W{4}, W{8}, W{2} * D + W{1} + delta, W{2} * K + W{1}};
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end(), [](const W& a, const W& b) { return approx_eq(a, b); }), r.end());
  return r;
}

template <Scalar W>
[[nodiscard]] AuditReport<W> full_audit(const BasicWallSpace<W>& X, std::size_t wall_budget = kDefaultWallBudget) {
  const auto M = enumerate_sections(X, wall_budget);
  AuditReport<W> r;
  r.points = X.size();
  r.walls = X.wall_count();
  r.sections = M.size();
  r.rank = rank(M);
  r.eta = hausdorff_to_medianization(M);
  const auto S = FiniteMetricSpace<W>::from_wall_space(X);
  r.delta = tripodal_constant(S, S.all(), S.all()).delta;
  r.D = condition3_constants(X, r.delta);
  r.K = condition4_K(X);
  std::vector<PointId> iota;
  for (auto e : M.embedded_points()) iota.push_back(PointId{e});
  const WallSpaceMap<W> embedding(X, M.induced(), iota);
  if (auto v = verify_monomorphism(embedding); !v) throw std::logic_error("embedding into M(X) failed: " + v.detail);
  r.coarse_constant = coarse_surjectivity_constant(embedding).value_or(W{});
  r.f_profile = local_finiteness_profile(X, profile_radii(r.D, r.K, r.delta));
  r.closure_equals_enumeration = same_sections(median_closure(X), M);
  r.checks = quantitative_audit(M, AuditConstants<W>{r.eta, r.delta, r.D, r.K, r.coarse_constant, r.f_profile});
  return r;
}

}  // namespace medianwalls
