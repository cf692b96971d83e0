#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "medianwalls/errors.hpp"
#include "medianwalls/point_set.hpp"
#include "medianwalls/rational.hpp"

namespace medianwalls {

enum class Side : std::uint8_t { A = 0, B = 1 };

constexpr Side opposite(Side s) noexcept { return s == Side::A ? Side::B : Side::A; }

struct HalfSpace {
  PointSet members;
  WallId wall;
  Side side = Side::A;
};

template <Scalar W>
struct Wall {
  HalfSpace side_a;
  HalfSpace side_b;
  W weight{};
  std::string name;

  [[nodiscard]] const HalfSpace& side(Side s) const noexcept { return s == Side::A ? side_a : side_b; }
  [[nodiscard]] bool separates(PointId x, PointId y) const {
    return side_a.members.test(x.value) != side_a.members.test(y.value);
  }
  [[nodiscard]] Side side_of(PointId x) const { return side_a.members.test(x.value) ? Side::A : Side::B; }
  [[nodiscard]] bool trivial() const { return side_a.members.none() || side_b.members.none(); }
};

/// Input description of one wall: side_b is derived as the complement.
template <Scalar W>
struct WallSpec {
  PointSet side_a;
  W weight{1};
  std::string name;
};

/// A finite set of points with a finite multiset of weighted walls.
///
/// Immutable after construction. The wall pseudo-metric is tabulated once,
/// so every query is a read of shared const state.
template <Scalar W>
class BasicWallSpace {
 public:
  using weight_type = W;

  BasicWallSpace() = default;

  BasicWallSpace(std::vector<std::string> point_names, std::vector<WallSpec<W>> specs)
      : names_(std::move(point_names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!index_.emplace(names_[i], i).second) throw DomainError("duplicate point id '" + names_[i] + "'");
    }
    walls_.reserve(specs.size());
    for (std::size_t w = 0; w < specs.size(); ++w) {
      auto& s = specs[w];
      if (s.side_a.size() != names_.size()) {
        throw DomainError("wall " + std::to_string(w) + " does not range over the point set");
      }
      if (s.weight < W{}) throw DomainError("wall " + std::to_string(w) + " has negative weight");
      Wall<W> wall;
      wall.side_b = HalfSpace{~s.side_a, WallId{w}, Side::B};
      wall.side_a = HalfSpace{std::move(s.side_a), WallId{w}, Side::A};
      wall.weight = s.weight;
      wall.name = s.name.empty() ? "w" + std::to_string(w) : std::move(s.name);
      walls_.push_back(std::move(wall));
    }
    tabulate();
  }

  [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
  [[nodiscard]] std::size_t wall_count() const noexcept { return walls_.size(); }
  [[nodiscard]] const std::vector<Wall<W>>& walls() const noexcept { return walls_; }
  [[nodiscard]] const Wall<W>& wall(WallId w) const { return walls_.at(w.value); }
  [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
  [[nodiscard]] const std::string& name(PointId p) const { return names_.at(p.value); }

  [[nodiscard]] std::optional<PointId> find(std::string_view name) const {
    const auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return PointId{it->second};
  }

  [[nodiscard]] PointId id(std::string_view name) const {
    if (auto p = find(name)) return *p;
    throw DomainError("unknown point id '" + std::string(name) + "'");
  }

  void require(PointId p) const {
    if (p.value >= size()) throw DomainError("point index " + std::to_string(p.value) + " out of range");
  }

  void require(const PointSet& s) const {
    if (s.size() != size()) throw DomainError("point set does not range over this space");
  }

  [[nodiscard]] PointSet empty_set() const { return PointSet(size()); }
  [[nodiscard]] PointSet all() const { return ~PointSet(size()); }
  [[nodiscard]] PointSet set_of(std::initializer_list<std::string_view> names) const {
    PointSet s(size());
    for (auto n : names) s.set(id(n).value);
    return s;
  }

  /// Half-spaces are indexed 2*wall + side.
  [[nodiscard]] std::size_t half_space_count() const noexcept { return 2 * walls_.size(); }
  [[nodiscard]] const HalfSpace& half_space(std::size_t index) const {
    return walls_.at(index / 2).side(static_cast<Side>(index % 2));
  }

  /// Wall pseudo-metric: total weight of walls separating x and y.
  [[nodiscard]] const W& pdist(PointId x, PointId y) const { return dist_[x.value * size() + y.value]; }

 private:
  void tabulate() {
    const auto n = size();
    dist_.assign(n * n, W{});
    for (const auto& w : walls_) {
      if (w.weight == W{}) continue;
      for (std::size_t i = 0; i < n; ++i) {
        const bool si = w.side_a.members.test(i);
        for (std::size_t j = i + 1; j < n; ++j) {
          if (si != w.side_a.members.test(j)) {
            dist_[i * n + j] += w.weight;
          }
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) dist_[i * n + j] = dist_[j * n + i];
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Wall<W>> walls_;
  std::vector<W> dist_;
};

using WallSpace = BasicWallSpace<Rational>;

/// Incremental construction by point names.
template <Scalar W>
class WallSpaceBuilder {
 public:
  explicit WallSpaceBuilder(std::vector<std::string> points) : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) index_.emplace(points_[i], i);
  }

  WallSpaceBuilder& wall(const std::vector<std::string>& side_a, W weight = W{1}, std::string name = {}) {
    PointSet s(points_.size());
    for (const auto& p : side_a) {
      const auto it = index_.find(p);
      if (it == index_.end()) throw DomainError("wall side references unknown point '" + p + "'");
      s.set(it->second);
    }
    specs_.push_back(WallSpec<W>{std::move(s), weight, std::move(name)});
    return *this;
  }

  WallSpaceBuilder& wall_on(PointSet side_a, W weight = W{1}, std::string name = {}) {
    specs_.push_back(WallSpec<W>{std::move(side_a), weight, std::move(name)});
    return *this;
  }

  [[nodiscard]] BasicWallSpace<W> build() const { return BasicWallSpace<W>(points_, specs_); }

 private:
  std::vector<std::string> points_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<WallSpec<W>> specs_;
};

template <Scalar W>
[[nodiscard]] W total_weight(const BasicWallSpace<W>& X, const std::vector<WallId>& walls) {
  W sum{};
  for (auto w : walls) sum += X.wall(w).weight;
  return sum;
}

/// W(A|B): walls with A in one half-space and B in the other.
/// With B empty this is the set of walls not cutting A.
template <Scalar W>
[[nodiscard]] std::vector<WallId> separating_walls(const BasicWallSpace<W>& X, const PointSet& A,
                                                   const PointSet& B) {
  X.require(A);
  X.require(B);
  if (A.intersects(B)) throw DomainError("separating_walls: the two point sets overlap");
  std::vector<WallId> out;
  for (std::size_t w = 0; w < X.wall_count(); ++w) {
    const auto& a = X.walls()[w].side_a.members;
    const auto& b = X.walls()[w].side_b.members;
    if ((A.is_subset_of(a) && B.is_subset_of(b)) || (A.is_subset_of(b) && B.is_subset_of(a))) {
      out.push_back(WallId{w});
    }
  }
  return out;
}

template <Scalar W>
[[nodiscard]] std::vector<WallId> separating_walls(const BasicWallSpace<W>& X, PointId x, PointId y) {
  X.require(x);
  X.require(y);
  return separating_walls(X, make_point_set(X.size(), {x}), make_point_set(X.size(), {y}));
}

template <Scalar W>
[[nodiscard]] W wall_pdist(const BasicWallSpace<W>& X, PointId x, PointId y) {
  X.require(x);
  X.require(y);
  return X.pdist(x, y);
}

/// W(Y): walls both of whose half-spaces meet Y.
template <Scalar W>
[[nodiscard]] std::vector<WallId> walls_cutting(const BasicWallSpace<W>& X, const PointSet& Y) {
  X.require(Y);
  std::vector<WallId> out;
  for (std::size_t w = 0; w < X.wall_count(); ++w) {
    const auto& wall = X.walls()[w];
    if (wall.side_a.members.intersects(Y) && wall.side_b.members.intersects(Y)) out.push_back(WallId{w});
  }
  return out;
}

/// Distance from x to a nonempty set A.
template <Scalar W>
[[nodiscard]] W distance_to_set(const BasicWallSpace<W>& X, PointId x, const PointSet& A) {
  X.require(A);
  if (A.none()) throw DomainError("distance to the empty set");
  std::optional<W> best;
  for (auto i = A.find_first(); i != PointSet::npos; i = A.find_next(i)) {
    const auto& d = X.pdist(x, PointId{i});
    if (!best || d < *best) best = d;
  }
  return *best;
}

/// Open ball {y : pdist(x, y) < radius}.
template <Scalar W>
[[nodiscard]] PointSet open_ball(const BasicWallSpace<W>& X, PointId x, const W& radius) {
  PointSet ball(X.size());
  for (std::size_t y = 0; y < X.size(); ++y) {
    if (approx_lt(X.pdist(x, PointId{y}), radius)) ball.set(y);
  }
  return ball;
}

template <Scalar W>
struct ProfileEntry {
  W radius{};
  W value{};        ///< f(R): heaviest wall set cutting an open R-ball
  PointId center;   ///< a center attaining it
};

/// f(R) = max over x of the weight of W(B(x, R)) for each requested radius.
template <Scalar W>
[[nodiscard]] std::vector<ProfileEntry<W>> local_finiteness_profile(const BasicWallSpace<W>& X,
                                                                    const std::vector<W>& radii) {
  if (radii.empty()) throw DomainError("local_finiteness_profile: no radii given");
  std::vector<ProfileEntry<W>> table;
  table.reserve(radii.size());
  for (const auto& R : radii) {
    if (R < W{}) throw DomainError("local_finiteness_profile: negative radius");
    ProfileEntry<W> e{R, W{}, PointId{0}};
    for (std::size_t x = 0; x < X.size(); ++x) {
      const auto v = total_weight(X, walls_cutting(X, open_ball(X, PointId{x}, R)));
      if (v > e.value) e = ProfileEntry<W>{R, v, PointId{x}};
    }
    table.push_back(e);
  }
  return table;
}

template <Scalar W>
[[nodiscard]] W local_finiteness(const BasicWallSpace<W>& X, const W& radius) {
  return local_finiteness_profile(X, std::vector<W>{radius}).front().value;
}

template <Scalar W>
struct ConvexityWitness {
  WallId wall;
  Side side = Side::A;
  PointId a, b, z;
  W distance{};
};

template <Scalar W>
struct ConvexityReport {
  bool pass = true;
  std::optional<ConvexityWitness<W>> witness;
  std::size_t checked_half_spaces = 0;
  std::size_t exempt_zero_weight = 0;  ///< half-spaces of weightless walls, not covered
};

/// Verifies that each half-space of a positively weighted wall is convex:
/// any z between two of its points is at distance 0 from it.
///
/// Half-spaces of zero-weight walls need not be convex (a weightless wall
/// can cut an interval without changing any distance), so they are counted
/// but not checked.
template <Scalar W>
[[nodiscard]] ConvexityReport<W> check_halfspace_convexity(const BasicWallSpace<W>& X) {
  ConvexityReport<W> report;
  const auto n = X.size();
  for (std::size_t w = 0; w < X.wall_count(); ++w) {
    const auto& wall = X.walls()[w];
    if (wall.weight == W{}) {
      report.exempt_zero_weight += 2;
      continue;
    }
    for (Side side : {Side::A, Side::B}) {
      const auto& h = wall.side(side).members;
      ++report.checked_half_spaces;
      if (h.none()) continue;
      const auto pts = members_of(h);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i; j < pts.size(); ++j) {
          const auto& dab = X.pdist(pts[i], pts[j]);
          for (std::size_t z = 0; z < n; ++z) {
            if (h.test(z)) continue;
            const PointId pz{z};
            if (!approx_eq(X.pdist(pts[i], pz) + X.pdist(pz, pts[j]), dab)) continue;
            const auto d = distance_to_set(X, pz, h);
            if (!approx_zero(d)) {
              report.pass = false;
              report.witness = ConvexityWitness<W>{WallId{w}, side, pts[i], pts[j], pz, d};
              return report;
            }
          }
        }
      }
    }
  }
  return report;
}

struct Verdict {
  bool pass = true;
  std::string detail;
  std::optional<WallId> wall;

  explicit operator bool() const noexcept { return pass; }

  static Verdict ok() { return {}; }
  static Verdict fail(std::string why, std::optional<WallId> w = std::nullopt) {
    return Verdict{false, std::move(why), w};
  }
};

/// A point map between two wall spaces. Non-owning: both spaces must outlive it.
template <Scalar W>
class WallSpaceMap {
 public:
  WallSpaceMap(const BasicWallSpace<W>& source, const BasicWallSpace<W>& target, std::vector<PointId> point_map,
               std::optional<W> coarse_constant = std::nullopt)
      : source_(&source), target_(&target), map_(std::move(point_map)), coarse_(std::move(coarse_constant)) {
    if (map_.size() != source.size()) throw DomainError("point map is not total on the source");
    for (auto p : map_) target.require(p);
  }

  [[nodiscard]] const BasicWallSpace<W>& source() const noexcept { return *source_; }
  [[nodiscard]] const BasicWallSpace<W>& target() const noexcept { return *target_; }
  [[nodiscard]] PointId operator()(PointId x) const { return map_.at(x.value); }
  [[nodiscard]] const std::vector<PointId>& point_map() const noexcept { return map_; }
  [[nodiscard]] const std::optional<W>& coarse_constant() const noexcept { return coarse_; }

  /// phi^{-1}(h') as a subset of the source.
  [[nodiscard]] PointSet preimage(const PointSet& target_set) const {
    PointSet out(source_->size());
    for (std::size_t x = 0; x < map_.size(); ++x) {
      if (target_set.test(map_[x].value)) out.set(x);
    }
    return out;
  }

  /// phi(A) as a subset of the target.
  [[nodiscard]] PointSet image(const PointSet& source_set) const {
    PointSet out(target_->size());
    for (auto i = source_set.find_first(); i != PointSet::npos; i = source_set.find_next(i)) {
      out.set(map_[i].value);
    }
    return out;
  }

 private:
  const BasicWallSpace<W>* source_;
  const BasicWallSpace<W>* target_;
  std::vector<PointId> map_;
  std::optional<W> coarse_;
};

namespace detail {

/// Walls with equal partitions form one element of the wall set; the key is
/// the half-space containing point 0 (or the empty set on an empty space).
inline PointSet partition_key(const PointSet& side) {
  if (side.empty() || side.test(0)) return side;
  return ~side;
}

template <Scalar W>
std::map<PointSet, W> wall_classes(const BasicWallSpace<W>& X) {
  std::map<PointSet, W> classes;
  for (const auto& w : X.walls()) classes[partition_key(w.side_a.members)] += w.weight;
  return classes;
}

}  // namespace detail

/// Each target wall pulls back to a wall of the source, and the pushed
/// forward measure equals the source measure. Walls with identical
/// partitions are one element of the wall set, so weights are compared per
/// partition class.
template <Scalar W>
[[nodiscard]] Verdict verify_homomorphism(const WallSpaceMap<W>& m) {
  const auto source_classes = detail::wall_classes(m.source());
  std::map<PointSet, W> pushed;
  for (std::size_t w = 0; w < m.target().wall_count(); ++w) {
    const auto& tw = m.target().walls()[w];
    const auto key = detail::partition_key(m.preimage(tw.side_a.members));
    if (!source_classes.contains(key)) {
      return Verdict::fail("target wall '" + tw.name + "' pulls back to a partition that is not a source wall",
                           WallId{w});
    }
    pushed[key] += tw.weight;
  }
  for (const auto& [key, weight] : source_classes) {
    const auto it = pushed.find(key);
    const W got = it == pushed.end() ? W{} : it->second;
    if (!approx_eq(got, weight)) {
      for (std::size_t w = 0; w < m.source().wall_count(); ++w) {
        if (detail::partition_key(m.source().walls()[w].side_a.members) == key) {
          return Verdict::fail("pushforward weight " + std::to_string(to_double(got)) + " differs from source weight " +
                                   std::to_string(to_double(weight)) + " on wall '" + m.source().walls()[w].name + "'",
                               WallId{w});
        }
      }
    }
  }
  return Verdict::ok();
}

/// Homomorphism whose wall pullback hits every source wall.
template <Scalar W>
[[nodiscard]] Verdict verify_monomorphism(const WallSpaceMap<W>& m) {
  if (auto v = verify_homomorphism(m); !v) return v;
  std::map<PointSet, bool> hit;
  for (const auto& tw : m.target().walls()) hit[detail::partition_key(m.preimage(tw.side_a.members))] = true;
  for (std::size_t w = 0; w < m.source().wall_count(); ++w) {
    const auto& sw = m.source().walls()[w];
    if (!hit.contains(detail::partition_key(sw.side_a.members))) {
      return Verdict::fail("source wall '" + sw.name + "' is not the pullback of any target wall", WallId{w});
    }
  }
  return Verdict::ok();
}

/// Isometric-embedding test for the wall pseudo-metrics.
template <Scalar W>
[[nodiscard]] bool is_isometric_embedding(const WallSpaceMap<W>& m) {
  for (std::size_t x = 0; x < m.source().size(); ++x)
    for (std::size_t y = x + 1; y < m.source().size(); ++y)
      if (!approx_eq(m.source().pdist(PointId{x}, PointId{y}), m.target().pdist(m(PointId{x}), m(PointId{y}))))
        return false;
  return true;
}

namespace detail {

/// sup over t in `set` of pdist(t, image), or nullopt when infinite.
template <Scalar W>
std::optional<W> one_sided_distance(const BasicWallSpace<W>& T, const PointSet& set, const PointSet& image) {
  if (set.none()) return W{};
  if (image.none()) return std::nullopt;
  W worst{};
  for (auto t = set.find_first(); t != PointSet::npos; t = set.find_next(t)) {
    const auto d = distance_to_set(T, PointId{t}, image);
    if (d > worst) worst = d;
  }
  return worst;
}

}  // namespace detail

/// Smallest D for which the map is coarsely surjective, or nullopt if none is.
template <Scalar W>
[[nodiscard]] std::optional<W> coarse_surjectivity_constant(const WallSpaceMap<W>& m) {
  const auto& S = m.source();
  const auto& T = m.target();
  const auto image = m.image(S.all());
  auto D = detail::one_sided_distance(T, T.all(), image);
  if (!D) return std::nullopt;
  for (std::size_t h = 0; h < S.half_space_count(); ++h) {
    const auto img = m.image(S.half_space(h).members);
    std::optional<W> best;
    for (std::size_t k = 0; k < T.half_space_count(); ++k) {
      const auto d = detail::one_sided_distance(T, T.half_space(k).members, img);
      if (d && (!best || *d < *best)) best = d;
    }
    if (!best) return std::nullopt;
    if (*best > *D) D = best;
  }
  return D;
}

template <Scalar W>
[[nodiscard]] Verdict verify_coarse_surjectivity(const WallSpaceMap<W>& m, const W& D) {
  if (D < W{}) throw DomainError("coarse constant must be nonnegative");
  if (auto v = verify_monomorphism(m); !v) return v;
  const auto& S = m.source();
  const auto& T = m.target();
  const auto image = m.image(S.all());
  for (std::size_t t = 0; t < T.size(); ++t) {
    if (image.none() || !approx_le(distance_to_set(T, PointId{t}, image), D)) {
      return Verdict::fail("target point '" + T.name(PointId{t}) + "' is farther than D from the image");
    }
  }
  for (std::size_t h = 0; h < S.half_space_count(); ++h) {
    const auto img = m.image(S.half_space(h).members);
    bool found = false;
    for (std::size_t k = 0; k < T.half_space_count() && !found; ++k) {
      const auto d = detail::one_sided_distance(T, T.half_space(k).members, img);
      found = d && approx_le(*d, D);
    }
    if (!found) {
      const auto wall = S.half_space(h).wall;
      return Verdict::fail("no target half-space lies in the D-neighbourhood of the image of a half-space of wall '" +
                               S.wall(wall).name + "'",
                           wall);
    }
  }
  return Verdict::ok();
}

/// X x Y with walls h x Y and X x k; the wall metric is the sum metric.
/// Point (x, y) has index x * |Y| + y.
template <Scalar W>
[[nodiscard]] BasicWallSpace<W> product(const BasicWallSpace<W>& X, const BasicWallSpace<W>& Y) {
  const auto nx = X.size();
  const auto ny = Y.size();
  std::vector<std::string> names;
  names.reserve(nx * ny);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) names.push_back("(" + X.names()[i] + "," + Y.names()[j] + ")");
  std::vector<WallSpec<W>> specs;
  for (const auto& w : X.walls()) {
    PointSet s(nx * ny);
    for (std::size_t i = 0; i < nx; ++i)
      if (w.side_a.members.test(i))
        for (std::size_t j = 0; j < ny; ++j) s.set(i * ny + j);
    specs.push_back({std::move(s), w.weight, "L." + w.name});
  }
  for (const auto& w : Y.walls()) {
    PointSet s(nx * ny);
    for (std::size_t j = 0; j < ny; ++j)
      if (w.side_a.members.test(j))
        for (std::size_t i = 0; i < nx; ++i) s.set(i * ny + j);
    specs.push_back({std::move(s), w.weight, "R." + w.name});
  }
  return BasicWallSpace<W>(std::move(names), std::move(specs));
}

}  // namespace medianwalls
