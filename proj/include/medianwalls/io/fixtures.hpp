#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "medianwalls/errors.hpp"
#include "medianwalls/lab/rng.hpp"
#include "medianwalls/wallspace.hpp"

namespace medianwalls::fixtures {

/// Chain p0 - p1 - ... with wall w<i><i+1> = {p0..pi} | {p<i+1>..}.
inline WallSpace path(std::size_t n) {
  if (n < 1) throw DomainError("path: need at least one point");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  std::vector<WallSpec<Rational>> walls;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    PointSet s(n);
    for (std::size_t j = 0; j <= i; ++j) s.set(j);
    walls.push_back({std::move(s), Rational(1), "w" + std::to_string(i) + std::to_string(i + 1)});
  }
  return WallSpace(std::move(names), std::move(walls));
}

inline std::string cube_point_name(std::size_t v, std::size_t k) {
  std::string s = "(";
  for (std::size_t i = 0; i < k; ++i) {
    if (i) s += ",";
    s += ((v >> (k - 1 - i)) & 1U) ? "1" : "0";
  }
  return s + ")";
}

namespace detail {

inline WallSpace cube_subset(std::size_t k, const std::function<bool(std::size_t)>& keep) {
  if (k < 1 || k > 12) throw DomainError("hypercube dimension must lie in [1, 12]");
  std::vector<std::size_t> verts;
  for (std::size_t v = 0; v < (std::size_t{1} << k); ++v)
    if (keep(v)) verts.push_back(v);
  std::vector<std::string> names;
  for (auto v : verts) names.push_back(cube_point_name(v, k));
  std::vector<WallSpec<Rational>> walls;
  for (std::size_t i = 0; i < k; ++i) {
    PointSet s(verts.size());
    for (std::size_t j = 0; j < verts.size(); ++j)
      if (((verts[j] >> (k - 1 - i)) & 1U) == 0) s.set(j);
    walls.push_back({std::move(s), Rational(1), "x" + std::to_string(i + 1)});
  }
  return WallSpace(std::move(names), std::move(walls));
}

inline std::string leaf_name(std::size_t i, std::size_t k) {
  return k <= 26 ? std::string(1, static_cast<char>('a' + i)) : "l" + std::to_string(i);
}

}  // namespace detail

/// {0,1}^k with coordinate walls x<i>; side A is {coordinate i = 0}.
inline WallSpace hypercube(std::size_t k) {
  return detail::cube_subset(k, [](std::size_t) { return true; });
}

/// {0,1}^k without the all-ones corner. k = 2 is the three-point corner.
inline WallSpace punctured_cube(std::size_t k = 3) {
  return detail::cube_subset(k, [k](std::size_t v) { return v != (std::size_t{1} << k) - 1; });
}

/// k leaves, each cut off by its own unit wall (k = 3 gives points a, b, c
/// and walls wa, wb, wc).
inline WallSpace tripod_star(std::size_t k = 3) {
  if (k < 2) throw DomainError("tripod-star: need at least two leaves");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) names.push_back(detail::leaf_name(i, k));
  std::vector<WallSpec<Rational>> walls;
  for (std::size_t i = 0; i < k; ++i) walls.push_back({make_point_set(k, {PointId{i}}), Rational(1), "w" + names[i]});
  return WallSpace(std::move(names), std::move(walls));
}

/// Even cycle c0..c<n-1>; wall d<i> cuts the edges (i, i+1) and (i+n/2, i+n/2+1).
inline WallSpace cycle(std::size_t n) {
  if (n < 4 || n % 2 != 0) throw DomainError("cycle: need an even number of points, at least 4");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("c" + std::to_string(i));
  std::vector<WallSpec<Rational>> walls;
  for (std::size_t i = 0; i < n / 2; ++i) {
    PointSet s(n);
    for (std::size_t j = 1; j <= n / 2; ++j) s.set((i + j) % n);
    walls.push_back({std::move(s), Rational(1), "d" + std::to_string(i)});
  }
  return WallSpace(std::move(names), std::move(walls));
}

/// a x b grid with the l1 metric: column cuts c<i> and row cuts r<j>.
inline WallSpace grid(std::size_t a, std::size_t b) {
  if (a < 1 || b < 1) throw DomainError("grid: both sides must be positive");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < b; ++j) names.push_back("(" + std::to_string(i) + "," + std::to_string(j) + ")");
  std::vector<WallSpec<Rational>> walls;
  for (std::size_t c = 0; c + 1 < a; ++c) {
    PointSet s(a * b);
    for (std::size_t i = 0; i <= c; ++i)
      for (std::size_t j = 0; j < b; ++j) s.set(i * b + j);
    walls.push_back({std::move(s), Rational(1), "c" + std::to_string(c)});
  }
  for (std::size_t r = 0; r + 1 < b; ++r) {
    PointSet s(a * b);
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t j = 0; j <= r; ++j) s.set(i * b + j);
    walls.push_back({std::move(s), Rational(1), "r" + std::to_string(r)});
  }
  return WallSpace(std::move(names), std::move(walls));
}

/// Random tree on n vertices; each edge e<i> (i to its parent) is a unit wall.
inline WallSpace tree(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw DomainError("tree: need at least one vertex");
  lab::CounterRng rng(seed, 1);
  std::vector<std::size_t> parent(n, 0);
  for (std::size_t i = 1; i < n; ++i) parent[i] = rng.below(i);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  std::vector<WallSpec<Rational>> walls;
  for (std::size_t i = 1; i < n; ++i) {
    PointSet s(n);
    // parents precede children, so one forward pass collects the subtree
    s.set(i);
    for (std::size_t j = i + 1; j < n; ++j)
      if (s.test(parent[j])) s.set(j);
    walls.push_back({std::move(s), Rational(1), "e" + std::to_string(i)});
  }
  return WallSpace(std::move(names), std::move(walls));
}

inline Rational random_weight(lab::CounterRng& rng) {
  static const std::array<Rational, 5> choices{Rational(1, 2), Rational(1), Rational(3, 2), Rational(2), Rational(3)};
  return choices[rng.below(choices.size())];
}

/// Random hierarchical clustering of n points: every cluster below the root
/// becomes a wall (cluster | rest), with a random weight. n points give
/// 2n - 2 walls.
inline WallSpace random_nested(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw DomainError("random-nested: need at least two points");
  lab::CounterRng rng(seed, 2);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  std::vector<WallSpec<Rational>> walls;
  std::vector<std::vector<std::size_t>> pending{std::vector<std::size_t>(n)};
  for (std::size_t i = 0; i < n; ++i) pending[0][i] = i;
  while (!pending.empty()) {
    auto cluster = std::move(pending.back());
    pending.pop_back();
    if (cluster.size() < 2) continue;
    // shuffle, then cut at a random nonzero position
    for (std::size_t i = cluster.size() - 1; i > 0; --i) std::swap(cluster[i], cluster[rng.below(i + 1)]);
    const auto cut = 1 + rng.below(cluster.size() - 1);
    std::vector<std::size_t> left(cluster.begin(), cluster.begin() + static_cast<std::ptrdiff_t>(cut));
    std::vector<std::size_t> right(cluster.begin() + static_cast<std::ptrdiff_t>(cut), cluster.end());
    for (const auto* part : {&left, &right}) {
      PointSet s(n);
      for (auto p : *part) s.set(p);
      walls.push_back({std::move(s), random_weight(rng), "n" + std::to_string(walls.size())});
    }
    pending.push_back(std::move(left));
    pending.push_back(std::move(right));
  }
  return WallSpace(std::move(names), std::move(walls));
}

/// n points and m walls with independent random sides (each side nonempty
/// when n >= 2) and random weights.
inline WallSpace random_transverse(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 1) throw DomainError("random-transverse: need at least one point");
  lab::CounterRng rng(seed, 3);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  std::vector<WallSpec<Rational>> walls;
  for (std::size_t w = 0; w < m; ++w) {
    PointSet s(n);
    do {
      for (std::size_t i = 0; i < n; ++i)
        if (rng.below(2)) s.set(i);
        else s.reset(i);
    } while (n >= 2 && (s.none() || s.all()));
    walls.push_back({std::move(s), random_weight(rng), "t" + std::to_string(w)});
  }
  return WallSpace(std::move(names), std::move(walls));
}

/// Two points q0, q1 and one wall of the given weight.
inline WallSpace diag_source(Rational weight = Rational(2)) {
  return WallSpaceBuilder<Rational>({"q0", "q1"}).wall({"q0"}, weight, "wq").build();
}

/// A single point without walls.
inline WallSpace point() { return WallSpace({"o"}, {}); }

/// Fixture request as understood by the command line.
struct FixtureSpec {
  std::string family;
  std::vector<std::int64_t> parameters;
  std::uint64_t seed = 0;
};

inline const std::vector<std::string>& fixture_families() {
  static const std::vector<std::string> names{"path",  "cycle-with-diagonal-walls", "hypercube",
                                              "tree",  "grid",                      "tripod-star",
                                              "punctured-cube", "random-nested", "random-transverse"};
  return names;
}

/// Deterministic in (family, parameters, seed). Missing parameters take the
/// defaults shown in the CLI help; out-of-range ones raise DomainError.
inline WallSpace generate(const FixtureSpec& spec) {
  auto param = [&](std::size_t i, std::int64_t fallback, std::int64_t lo, std::int64_t hi) -> std::size_t {
    const auto v = i < spec.parameters.size() ? spec.parameters[i] : fallback;
    if (v < lo || v > hi) {
      throw DomainError(spec.family + ": parameter " + std::to_string(i + 1) + " must lie in [" + std::to_string(lo) +
                        ", " + std::to_string(hi) + "]");
    }
    return static_cast<std::size_t>(v);
  };
  const auto& f = spec.family;
  if (f == "path") return path(param(0, 3, 1, 4096));
  if (f == "cycle-with-diagonal-walls") return cycle(param(0, 6, 4, 4096));
  if (f == "hypercube") return hypercube(param(0, 3, 1, 12));
  if (f == "tree") return tree(param(0, 8, 1, 4096), spec.seed);
  if (f == "grid") return grid(param(0, 3, 1, 256), param(1, 3, 1, 256));
  if (f == "tripod-star") return tripod_star(param(0, 3, 2, 4096));
  if (f == "punctured-cube") return punctured_cube(param(0, 3, 2, 12));
  if (f == "random-nested") return random_nested(param(0, 10, 2, 4096), spec.seed);
  if (f == "random-transverse") return random_transverse(param(0, 8, 1, 4096), param(1, 8, 0, 4096), spec.seed);
  std::string valid;
  for (const auto& n : fixture_families()) valid += (valid.empty() ? "" : ", ") + n;
  throw DomainError("unknown fixture family '" + f + "' (valid: " + valid + ")");
}

}  // namespace medianwalls::fixtures
