#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "medianwalls/io/corpus.hpp"

namespace medianwalls::testing {

inline const std::vector<fixtures::Instance>& corpus() {
  static const auto c = fixtures::standard_corpus();
  return c;
}

inline std::vector<std::pair<WallSpace, WallSpace>> product_pairs() { return fixtures::product_pairs(); }

/// Brute force over point bijections: equal wall multisets (partition and
/// weight) after relabeling. Only meant for a handful of points.
template <Scalar W>
bool isomorphic(const BasicWallSpace<W>& X, const BasicWallSpace<W>& Y) {
  if (X.size() != Y.size() || X.wall_count() != Y.wall_count()) return false;
  const auto n = X.size();
  auto signature = [n](const BasicWallSpace<W>& S, const std::vector<std::size_t>& perm) {
    std::multimap<PointSet, W> sig;
    for (const auto& w : S.walls()) {
      PointSet s(n);
      for (std::size_t i = 0; i < n; ++i)
        if (w.side_a.members.test(i)) s.set(perm[i]);
      sig.emplace(detail::partition_key(s), w.weight);
    }
    std::vector<std::pair<PointSet, W>> flat(sig.begin(), sig.end());
    std::sort(flat.begin(), flat.end());
    return flat;
  };
  std::vector<std::size_t> ident(n);
  std::iota(ident.begin(), ident.end(), std::size_t{0});
  const auto target = signature(Y, ident);
  auto perm = ident;
  do {
    if (signature(X, perm) == target) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace medianwalls::testing
