#pragma once

#include <string>
#include <utility>
#include <vector>

#include "medianwalls/io/fixtures.hpp"
#include "medianwalls/wallspace.hpp"

namespace medianwalls::fixtures {

struct Instance {
  std::string label;
  WallSpace space;
};

/// Small random factor for product experiments (at most 5 points, 4 walls).
inline WallSpace random_factor(std::uint64_t seed) {
  switch (seed % 3) {
    case 0: return tree(2 + seed % 4, seed);
    case 1: return random_nested(2 + seed % 2, seed);
    default: return random_transverse(3 + seed % 2, 2 + seed % 3, seed);
  }
}

/// Factor pairs used for the product experiments.
inline std::vector<std::pair<WallSpace, WallSpace>> product_pairs(std::size_t count = 10, std::uint64_t seed = 1) {
  std::vector<std::pair<WallSpace, WallSpace>> out;
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(random_factor(seed + 2 * i), random_factor(seed + 2 * i + 1));
  return out;
}

/// The reference corpus: every named fixture, families at several sizes,
/// seeded random instances, and products.
inline std::vector<Instance> standard_corpus() {
  std::vector<Instance> c;
  auto add = [&](std::string label, WallSpace X) { c.push_back(Instance{std::move(label), std::move(X)}); };
  add("point", point());
  for (std::size_t n : {2, 3, 5}) add("path(" + std::to_string(n) + ")", path(n));
  for (std::size_t k = 1; k <= 4; ++k) add("hypercube(" + std::to_string(k) + ")", hypercube(k));
  add("punctured-cube(2)", punctured_cube(2));
  add("punctured-cube(3)", punctured_cube(3));
  add("punctured-cube(4)", punctured_cube(4));
  for (std::size_t k : {3, 4, 5}) add("tripod-star(" + std::to_string(k) + ")", tripod_star(k));
  add("diag(2)", diag_source(Rational(2)));
  add("diag(1)", diag_source(Rational(1)));
  for (std::size_t n : {4, 6, 8}) add("cycle(" + std::to_string(n) + ")", cycle(n));
  add("grid(2,3)", grid(2, 3));
  add("grid(3,3)", grid(3, 3));
  for (std::uint64_t s = 1; s <= 5; ++s) add("tree(9,seed=" + std::to_string(s) + ")", tree(9, s));
  for (std::uint64_t s = 1; s <= 12; ++s) add("random-nested(10,seed=" + std::to_string(s) + ")", random_nested(10, s));
  for (std::uint64_t s = 1; s <= 10; ++s)
    add("random-transverse(8,8,seed=" + std::to_string(s) + ")", random_transverse(8, 8, s));
  for (std::uint64_t s = 1; s <= 4; ++s)
    add("random-transverse(6,12,seed=" + std::to_string(s) + ")", random_transverse(6, 12, s));
  const auto pairs = product_pairs(4, 101);
  for (std::size_t i = 0; i < pairs.size(); ++i)
    add("product(" + std::to_string(i) + ")", product(pairs[i].first, pairs[i].second));
  add("path(3)xtripod-star(3)", product(path(3), tripod_star(3)));
  return c;
}

}  // namespace medianwalls::fixtures
