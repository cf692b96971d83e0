#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace medianwalls {

/// Dense index of a point inside one space.
struct PointId {
  std::size_t value = 0;
  friend auto operator<=>(const PointId&, const PointId&) = default;
};

/// Index of a wall inside one wall space.
struct WallId {
  std::size_t value = 0;
  friend auto operator<=>(const WallId&, const WallId&) = default;
};

/// Subset of a space's points, bit i set iff point i is a member.
using PointSet = boost::dynamic_bitset<>;

inline PointSet make_point_set(std::size_t n, std::initializer_list<PointId> members) {
  PointSet s(n);
  for (auto p : members) s.set(p.value);
  return s;
}

inline PointSet make_point_set(std::size_t n, const std::vector<PointId>& members) {
  PointSet s(n);
  for (auto p : members) s.set(p.value);
  return s;
}

inline std::vector<PointId> members_of(const PointSet& s) {
  std::vector<PointId> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != PointSet::npos; i = s.find_next(i)) out.push_back(PointId{i});
  return out;
}

}  // namespace medianwalls
