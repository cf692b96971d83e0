#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "medianwalls/errors.hpp"
#include "medianwalls/metric_space.hpp"
#include "medianwalls/wallspace.hpp"

namespace medianwalls {

inline constexpr std::size_t kDefaultWallBudget = 24;
inline constexpr std::size_t kDefaultSectionLimit = std::size_t{1} << 20;

/// One chosen half-space per wall; bit w set iff side A of wall w is chosen.
struct AdmissibleSection {
  boost::dynamic_bitset<> chooses_a;

  [[nodiscard]] Side side(WallId w) const { return chooses_a.test(w.value) ? Side::A : Side::B; }
  [[nodiscard]] bool chooses(std::size_t half_space_index) const {
    return chooses_a.test(half_space_index / 2) == (half_space_index % 2 == 0);
  }
  friend bool operator==(const AdmissibleSection&, const AdmissibleSection&) = default;
  friend bool operator<(const AdmissibleSection& a, const AdmissibleSection& b) { return a.chooses_a < b.chooses_a; }
};

/// sigma_x: for each wall the half-space containing x.
template <Scalar W>
[[nodiscard]] AdmissibleSection canonical_section(const BasicWallSpace<W>& X, PointId x) {
  X.require(x);
  AdmissibleSection s{boost::dynamic_bitset<>(X.wall_count())};
  for (std::size_t w = 0; w < X.wall_count(); ++w)
    if (X.walls()[w].side_a.members.test(x.value)) s.chooses_a.set(w);
  return s;
}

/// Inclusion order on the half-spaces, as adjacency lists over half-space
/// indices. Distinct half-space objects are compared, so walls with equal
/// partitions constrain each other in both directions.
class NestingOrder {
 public:
  template <Scalar W>
  explicit NestingOrder(const BasicWallSpace<W>& X) : supersets_(X.half_space_count()) {
    const auto H = X.half_space_count();
    for (std::size_t i = 0; i < H; ++i)
      for (std::size_t j = 0; j < H; ++j)
        if (i != j && X.half_space(i).members.is_subset_of(X.half_space(j).members)) supersets_[i].push_back(j);
  }

  [[nodiscard]] const std::vector<std::size_t>& supersets(std::size_t h) const { return supersets_[h]; }
  [[nodiscard]] std::size_t size() const noexcept { return supersets_.size(); }

 private:
  std::vector<std::vector<std::size_t>> supersets_;
};

struct AdmissibilityVerdict {
  bool pass = true;
  /// (h, h'): h chosen, h contained in h', h' not chosen (half-space indices).
  std::optional<std::pair<std::size_t, std::size_t>> violation;
  explicit operator bool() const noexcept { return pass; }
};

template <Scalar W>
[[nodiscard]] AdmissibilityVerdict is_admissible(const BasicWallSpace<W>& X, const AdmissibleSection& s) {
  if (s.chooses_a.size() != X.wall_count()) throw DomainError("orientation does not pick one side per wall");
  const NestingOrder order(X);
  for (std::size_t h = 0; h < order.size(); ++h) {
    if (!s.chooses(h)) continue;
    for (auto up : order.supersets(h))
      if (!s.chooses(up)) return AdmissibilityVerdict{false, std::pair{h, up}};
  }
  return {};
}

/// Symmetric-difference pseudo-distance of two sections.
template <Scalar W>
[[nodiscard]] W section_pdist(const BasicWallSpace<W>& X, const AdmissibleSection& s, const AdmissibleSection& t) {
  if (s.chooses_a.size() != X.wall_count() || t.chooses_a.size() != X.wall_count())
    throw DomainError("sections belong to a different wall space");
  auto diff = s.chooses_a ^ t.chooses_a;
  W sum{};
  for (auto w = diff.find_first(); w != boost::dynamic_bitset<>::npos; w = diff.find_next(w)) sum += X.walls()[w].weight;
  return sum;
}

/// Wall-wise majority vote.
template <Scalar W>
[[nodiscard]] AdmissibleSection median_of_sections(const BasicWallSpace<W>& X, const AdmissibleSection& a,
                                                   const AdmissibleSection& b, const AdmissibleSection& c) {
  if (a.chooses_a.size() != X.wall_count() || b.chooses_a.size() != X.wall_count() ||
      c.chooses_a.size() != X.wall_count())
    throw DomainError("sections belong to a different wall space");
  return AdmissibleSection{(a.chooses_a & b.chooses_a) | (b.chooses_a & c.chooses_a) | (a.chooses_a & c.chooses_a)};
}

/// M(X) for a finite wall space, with its metric, the embedding of X, and
/// the induced wall structure {h_M}.
template <Scalar W>
class FiniteMedianSpace {
 public:
  FiniteMedianSpace(const BasicWallSpace<W>& X, std::vector<AdmissibleSection> sections)
      : base_(X), sections_(std::move(sections)) {
    for (std::size_t i = 0; i < sections_.size(); ++i) index_.emplace(sections_[i].chooses_a, i);
    embedded_.reserve(X.size());
    for (std::size_t x = 0; x < X.size(); ++x) {
      const auto it = index_.find(canonical_section(X, PointId{x}).chooses_a);
      if (it == index_.end()) throw DomainError("section set does not contain the canonical section of a point");
      embedded_.push_back(it->second);
    }
    build_names();
    build_metric();
    build_induced();
  }

  [[nodiscard]] const BasicWallSpace<W>& base() const noexcept { return base_; }
  [[nodiscard]] const std::vector<AdmissibleSection>& sections() const noexcept { return sections_; }
  [[nodiscard]] std::size_t size() const noexcept { return sections_.size(); }
  [[nodiscard]] const FiniteMetricSpace<W>& metric() const noexcept { return metric_; }
  [[nodiscard]] const BasicWallSpace<W>& induced() const noexcept { return induced_; }
  [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
  [[nodiscard]] const W& dist(std::size_t s, std::size_t t) const { return metric_.at(s, t); }

  /// Index of iota(x).
  [[nodiscard]] std::size_t embedded(PointId x) const { return embedded_.at(x.value); }
  [[nodiscard]] const std::vector<std::size_t>& embedded_points() const noexcept { return embedded_; }

  [[nodiscard]] std::optional<std::size_t> index_of(const AdmissibleSection& s) const {
    const auto it = index_.find(s.chooses_a);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] bool is_canonical(std::size_t s) const {
    return std::find(embedded_.begin(), embedded_.end(), s) != embedded_.end();
  }

  /// iota(A) as a set of section indices.
  [[nodiscard]] PointSet image(const PointSet& A) const {
    PointSet out(size());
    for (auto x = A.find_first(); x != PointSet::npos; x = A.find_next(x)) out.set(embedded_[x]);
    return out;
  }

 private:
  void build_names() {
    names_.assign(size(), std::string{});
    for (std::size_t x = 0; x < base_.size(); ++x)
      if (names_[embedded_[x]].empty()) names_[embedded_[x]] = base_.names()[x];
    std::unordered_set<std::string> used(base_.names().begin(), base_.names().end());
    for (std::size_t i = 0; i < size(); ++i) {
      if (!names_[i].empty()) continue;
      std::string n = "s" + std::to_string(i);
      while (used.contains(n)) n = "#" + n;
      used.insert(n);
      names_[i] = std::move(n);
    }
  }

  void build_metric() {
    const auto n = size();
    std::vector<W> flat(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        flat[i * n + j] = section_pdist(base_, sections_[i], sections_[j]);
        flat[j * n + i] = flat[i * n + j];
      }
    metric_ = FiniteMetricSpace<W>(names_, std::move(flat), Validation::trusted);
  }

  void build_induced() {
    std::vector<WallSpec<W>> specs;
    specs.reserve(base_.wall_count());
    for (std::size_t w = 0; w < base_.wall_count(); ++w) {
      PointSet side(size());
      for (std::size_t s = 0; s < size(); ++s)
        if (sections_[s].chooses_a.test(w)) side.set(s);
      specs.push_back(WallSpec<W>{std::move(side), base_.walls()[w].weight, base_.walls()[w].name});
    }
    induced_ = BasicWallSpace<W>(names_, std::move(specs));
  }

  BasicWallSpace<W> base_;
  std::vector<AdmissibleSection> sections_;
  std::map<boost::dynamic_bitset<>, std::size_t> index_;
  std::vector<std::size_t> embedded_;
  std::vector<std::string> names_;
  FiniteMetricSpace<W> metric_;
  BasicWallSpace<W> induced_;
};

namespace detail {

/// Backtracking over walls with unit propagation along the inclusion order.
/// The constraints are binary implications closed under contraposition, so
/// a propagation that does not conflict never leads to a dead end.
class SectionEnumerator {
 public:
  template <Scalar W>
  SectionEnumerator(const BasicWallSpace<W>& X, std::size_t limit)
      : order_(X), assigned_(X.wall_count(), -1), limit_(limit) {
    walls_.resize(X.wall_count());
    std::iota(walls_.begin(), walls_.end(), std::size_t{0});
    std::stable_sort(walls_.begin(), walls_.end(), [&](std::size_t a, std::size_t b) {
      const auto& wa = X.walls()[a];
      const auto& wb = X.walls()[b];
      return std::min(wa.side_a.members.count(), wa.side_b.members.count()) <
             std::min(wb.side_a.members.count(), wb.side_b.members.count());
    });
  }

  std::vector<AdmissibleSection> run() {
    search(0);
    std::sort(out_.begin(), out_.end());
    return std::move(out_);
  }

 private:
  // value: 1 = side A, 0 = side B
  bool assign(std::size_t h) {
    std::vector<std::size_t> queue{h};
    while (!queue.empty()) {
      const auto cur = queue.back();
      queue.pop_back();
      const auto w = cur / 2;
      const std::int8_t value = cur % 2 == 0 ? 1 : 0;
      if (assigned_[w] == value) continue;
      if (assigned_[w] != -1) return false;
      assigned_[w] = value;
      trail_.push_back(w);
      for (auto up : order_.supersets(cur)) queue.push_back(up);
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      assigned_[trail_.back()] = -1;
      trail_.pop_back();
    }
  }

  void search(std::size_t k) {
    while (k < walls_.size() && assigned_[walls_[k]] != -1) ++k;
    if (k == walls_.size()) {
      if (out_.size() >= limit_) throw ResourceError("admissible section count exceeds " + std::to_string(limit_));
      AdmissibleSection s{boost::dynamic_bitset<>(assigned_.size())};
      for (std::size_t w = 0; w < assigned_.size(); ++w)
        if (assigned_[w] == 1) s.chooses_a.set(w);
      out_.push_back(std::move(s));
      return;
    }
    const auto w = walls_[k];
    for (std::size_t side = 0; side < 2; ++side) {
      const auto mark = trail_.size();
      if (assign(2 * w + side)) search(k + 1);
      undo(mark);
    }
  }

  NestingOrder order_;
  std::vector<std::size_t> walls_;
  std::vector<std::int8_t> assigned_;
  std::vector<std::size_t> trail_;
  std::vector<AdmissibleSection> out_;
  std::size_t limit_;
};

}  // namespace detail

/// All admissible sections (every one is at finite distance for finite X).
template <Scalar W>
[[nodiscard]] FiniteMedianSpace<W> enumerate_sections(const BasicWallSpace<W>& X,
                                                      std::size_t wall_budget = kDefaultWallBudget,
                                                      std::size_t section_limit = kDefaultSectionLimit) {
  if (X.wall_count() > wall_budget) {
    throw ResourceError(std::to_string(X.wall_count()) + " walls exceed the enumeration budget of " +
                        std::to_string(wall_budget) + "; use median_closure instead");
  }
  return FiniteMedianSpace<W>(X, detail::SectionEnumerator(X, section_limit).run());
}

/// Raised when median_closure outgrows its budget; carries what was built.
class ClosureBudgetExceeded : public ResourceError {
 public:
  ClosureBudgetExceeded(std::size_t budget, std::vector<AdmissibleSection> partial)
      : ResourceError("median closure exceeds " + std::to_string(budget) + " sections"), partial_(std::move(partial)) {}
  [[nodiscard]] const std::vector<AdmissibleSection>& partial() const noexcept { return partial_; }

 private:
  std::vector<AdmissibleSection> partial_;
};

/// Smallest median-closed set of sections containing every sigma_x.
template <Scalar W>
[[nodiscard]] FiniteMedianSpace<W> median_closure(const BasicWallSpace<W>& X, std::size_t budget = std::size_t{1} << 16) {
  std::vector<AdmissibleSection> S;
  std::map<boost::dynamic_bitset<>, std::size_t> seen;
  auto add = [&](AdmissibleSection s) {
    if (seen.contains(s.chooses_a)) return;
    if (S.size() >= budget) throw ClosureBudgetExceeded(budget, S);
    seen.emplace(s.chooses_a, S.size());
    S.push_back(std::move(s));
  };
  for (std::size_t x = 0; x < X.size(); ++x) add(canonical_section(X, PointId{x}));
  // Each triple is visited once, when its largest index is processed.
  for (std::size_t k = 0; k < S.size(); ++k)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < j; ++i) add(median_of_sections(X, S[i], S[j], S[k]));
  std::sort(S.begin(), S.end());
  return FiniteMedianSpace<W>(X, std::move(S));
}

/// True when both spaces hold the same set of sections.
template <Scalar W>
[[nodiscard]] bool same_sections(const FiniteMedianSpace<W>& a, const FiniteMedianSpace<W>& b) {
  return a.sections() == b.sections();
}

/// h_M = {sigma : h in sigma}, for half-space index 2*wall + side.
template <Scalar W>
[[nodiscard]] PointSet induced_wall(const FiniteMedianSpace<W>& M, std::size_t half_space_index) {
  if (half_space_index >= M.base().half_space_count()) throw DomainError("half-space index out of range");
  return M.induced().half_space(half_space_index).members;
}

/// chi(sigma) = weight-scaled indicator of the walls where sigma differs from sigma_base.
template <Scalar W>
[[nodiscard]] std::vector<std::vector<W>> l1_embedding(const FiniteMedianSpace<W>& M, PointId base) {
  M.base().require(base);
  const auto& origin = M.sections()[M.embedded(base)];
  std::vector<std::vector<W>> out;
  out.reserve(M.size());
  for (const auto& s : M.sections()) {
    std::vector<W> v(M.base().wall_count());
    for (std::size_t w = 0; w < v.size(); ++w)
      if (s.chooses_a.test(w) != origin.chooses_a.test(w)) v[w] = M.base().walls()[w].weight;
    out.push_back(std::move(v));
  }
  return out;
}

template <Scalar W>
[[nodiscard]] W l1_distance(const std::vector<W>& a, const std::vector<W>& b) {
  W sum{};
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  return sum;
}

namespace detail {

inline void bron_kerbosch(const std::vector<boost::dynamic_bitset<>>& adj, boost::dynamic_bitset<> R,
                          boost::dynamic_bitset<> P, boost::dynamic_bitset<> Xs, std::size_t& best) {
  if (P.none() && Xs.none()) {
    best = std::max(best, R.count());
    return;
  }
  if (R.count() + P.count() <= best) return;
  const auto px = P | Xs;
  const auto pivot = px.find_first();
  auto candidates = P - adj[pivot];
  for (auto v = candidates.find_first(); v != boost::dynamic_bitset<>::npos; v = candidates.find_next(v)) {
    auto R2 = R;
    R2.set(v);
    bron_kerbosch(adj, R2, P & adj[v], Xs & adj[v], best);
    P.reset(v);
    Xs.set(v);
  }
}

}  // namespace detail

/// Two walls cross when all four quadrants meet the space.
template <Scalar W>
[[nodiscard]] bool walls_cross(const BasicWallSpace<W>& X, WallId u, WallId v) {
  const auto& a = X.wall(u);
  const auto& b = X.wall(v);
  return a.side_a.members.intersects(b.side_a.members) && a.side_a.members.intersects(b.side_b.members) &&
         a.side_b.members.intersects(b.side_a.members) && a.side_b.members.intersects(b.side_b.members);
}

/// Largest family of pairwise crossing walls of the induced structure
/// (walls with an empty side never count).
template <Scalar W>
[[nodiscard]] std::size_t rank(const FiniteMedianSpace<W>& M) {
  const auto& I = M.induced();
  const auto n = I.wall_count();
  boost::dynamic_bitset<> live(n);
  for (std::size_t w = 0; w < n; ++w)
    if (!I.walls()[w].trivial()) live.set(w);
  if (live.none()) return 0;
  std::vector<boost::dynamic_bitset<>> adj(n, boost::dynamic_bitset<>(n));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (live.test(u) && live.test(v) && walls_cross(I, WallId{u}, WallId{v})) {
        adj[u].set(v);
        adj[v].set(u);
      }
  std::size_t best = 1;
  detail::bron_kerbosch(adj, boost::dynamic_bitset<>(n), live, boost::dynamic_bitset<>(n), best);
  return best;
}

/// Checks that M(X x Y) is the l1 product of M(X) and M(Y): splitting each
/// section of the product (walls of X first, as `product` orders them) must
/// be a bijection onto pairs of sections with additive distances.
template <Scalar W>
[[nodiscard]] bool is_l1_product(const FiniteMedianSpace<W>& MP, const FiniteMedianSpace<W>& MA,
                                 const FiniteMedianSpace<W>& MB) {
  const auto wa = MA.base().wall_count();
  const auto wb = MB.base().wall_count();
  if (MP.base().wall_count() != wa + wb || MP.size() != MA.size() * MB.size()) return false;
  std::vector<std::pair<std::size_t, std::size_t>> split;
  std::vector<bool> hit(MA.size() * MB.size(), false);
  for (const auto& s : MP.sections()) {
    AdmissibleSection a{boost::dynamic_bitset<>(wa)}, b{boost::dynamic_bitset<>(wb)};
    for (std::size_t w = 0; w < wa; ++w) a.chooses_a[w] = s.chooses_a[w];
    for (std::size_t w = 0; w < wb; ++w) b.chooses_a[w] = s.chooses_a[wa + w];
    const auto ia = MA.index_of(a);
    const auto ib = MB.index_of(b);
    if (!ia || !ib || hit[*ia * MB.size() + *ib]) return false;
    hit[*ia * MB.size() + *ib] = true;
    split.emplace_back(*ia, *ib);
  }
  for (std::size_t s = 0; s < MP.size(); ++s)
    for (std::size_t t = s + 1; t < MP.size(); ++t)
      if (MP.dist(s, t) != MA.dist(split[s].first, split[t].first) + MB.dist(split[s].second, split[t].second))
        return false;
  return true;
}

}  // namespace medianwalls
