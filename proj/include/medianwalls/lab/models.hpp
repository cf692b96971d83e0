#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include <boost/random/sobol.hpp>

#include "medianwalls/lab/complex_ball.hpp"
#include "medianwalls/lab/hyperbolic.hpp"
#include "medianwalls/lab/snowflake.hpp"

namespace medianwalls::lab {

/// A metric model with a real chart used for candidate searches.
template <class M>
concept ModelMetric = requires(const M& m, const typename M::point_type& p, const std::vector<double>& c, double s) {
  { m.dist(p, p) } -> std::convertible_to<double>;
  { m.chart(p) } -> std::same_as<std::vector<double>>;
  { m.from_chart(c) } -> std::same_as<std::optional<typename M::point_type>>;
  { m.equilateral(s) } -> std::same_as<std::array<typename M::point_type, 3>>;
  { m.chart_dim() } -> std::convertible_to<std::size_t>;
};

struct EuclideanPlane {
  using point_type = std::array<double, 2>;
  [[nodiscard]] double dist(const point_type& p, const point_type& q) const {
    return std::hypot(p[0] - q[0], p[1] - q[1]);
  }
  [[nodiscard]] std::size_t chart_dim() const { return 2; }
  [[nodiscard]] std::vector<double> chart(const point_type& p) const { return {p[0], p[1]}; }
  [[nodiscard]] std::optional<point_type> from_chart(const std::vector<double>& c) const {
    return point_type{c[0], c[1]};
  }
  [[nodiscard]] std::array<point_type, 3> equilateral(double s) const {
    return {point_type{0, 0}, point_type{s, 0}, point_type{s / 2, s * std::sqrt(3.0) / 2}};
  }
  [[nodiscard]] static const char* name() { return "euclidean"; }
};

/// Circumradius of a hyperbolic equilateral triangle of side s:
/// cosh s = 1 + (3/2) sinh^2 rho, i.e. sinh rho = (2/sqrt 3) sinh(s/2).
[[nodiscard]] inline double hyperbolic_circumradius(double s) {
  return std::asinh(2.0 / std::sqrt(3.0) * std::sinh(s / 2.0));
}

struct HyperbolicPlane {
  using point_type = DiskPoint;
  [[nodiscard]] double dist(const point_type& p, const point_type& q) const { return hyperbolic_dist(p, q); }
  [[nodiscard]] std::size_t chart_dim() const { return 2; }
  [[nodiscard]] std::vector<double> chart(const point_type& p) const { return {p.u, p.v}; }
  [[nodiscard]] std::optional<point_type> from_chart(const std::vector<double>& c) const {
    const DiskPoint p{c[0], c[1]};
    if (!(p.norm2() < 1.0)) return std::nullopt;
    return p;
  }
  [[nodiscard]] std::array<point_type, 3> equilateral(double s) const {
    const double rho = hyperbolic_circumradius(s);
    std::array<point_type, 3> out;
    for (int k = 0; k < 3; ++k) out[static_cast<std::size_t>(k)] = polar_point(rho, std::numbers::pi / 2 + 2 * std::numbers::pi * k / 3);
    return out;
  }
  [[nodiscard]] static const char* name() { return "hyperbolic"; }
};

/// Complex hyperbolic plane (ball in C^2); the equilateral triple sits on a
/// complex line, but searches run over the full four-dimensional chart.
struct ComplexHyperbolicPlane {
  using point_type = BallPoint;
  [[nodiscard]] double dist(const point_type& p, const point_type& q) const { return complex_hyperbolic_dist(p, q); }
  [[nodiscard]] std::size_t chart_dim() const { return 4; }
  [[nodiscard]] std::vector<double> chart(const point_type& p) const {
    return {p.z[0].real(), p.z[0].imag(), p.z[1].real(), p.z[1].imag()};
  }
  [[nodiscard]] std::optional<point_type> from_chart(const std::vector<double>& c) const {
    BallPoint p{{Complex(c[0], c[1]), Complex(c[2], c[3])}};
    if (!(p.norm2() < 1.0)) return std::nullopt;
    return p;
  }
  [[nodiscard]] std::array<point_type, 3> equilateral(double s) const {
    const auto t = HyperbolicPlane{}.equilateral(s / kComplexLineScale);
    return {on_first_axis(t[0]), on_first_axis(t[1]), on_first_axis(t[2])};
  }
  [[nodiscard]] static const char* name() { return "complex-hyperbolic"; }
};

/// Sum metric on A x B; the equilateral triple pairs factor triples of side s/2.
template <ModelMetric A, ModelMetric B>
struct ProductModel {
  using point_type = std::pair<typename A::point_type, typename B::point_type>;
  A a;
  B b;
  [[nodiscard]] double dist(const point_type& p, const point_type& q) const {
    return a.dist(p.first, q.first) + b.dist(p.second, q.second);
  }
  [[nodiscard]] std::size_t chart_dim() const { return a.chart_dim() + b.chart_dim(); }
  [[nodiscard]] std::vector<double> chart(const point_type& p) const {
    auto c = a.chart(p.first);
    const auto d = b.chart(p.second);
    c.insert(c.end(), d.begin(), d.end());
    return c;
  }
  [[nodiscard]] std::optional<point_type> from_chart(const std::vector<double>& c) const {
    const auto split = c.begin() + static_cast<std::ptrdiff_t>(a.chart_dim());
    auto pa = a.from_chart(std::vector<double>(c.begin(), split));
    auto pb = b.from_chart(std::vector<double>(split, c.end()));
    if (!pa || !pb) return std::nullopt;
    return point_type{*pa, *pb};
  }
  [[nodiscard]] std::array<point_type, 3> equilateral(double s) const {
    const auto ta = a.equilateral(s / 2);
    const auto tb = b.equilateral(s / 2);
    return {point_type{ta[0], tb[0]}, point_type{ta[1], tb[1]}, point_type{ta[2], tb[2]}};
  }
  [[nodiscard]] static const char* name() { return "product"; }
};

/// dist^alpha over a base model. `equilateral(s)` takes s in base units.
template <ModelMetric Base>
struct SnowflakeModel {
  using point_type = typename Base::point_type;
  Base base;
  double alpha = 0.5;
  [[nodiscard]] double dist(const point_type& p, const point_type& q) const {
    return std::pow(base.dist(p, q), alpha);
  }
  [[nodiscard]] std::size_t chart_dim() const { return base.chart_dim(); }
  [[nodiscard]] std::vector<double> chart(const point_type& p) const { return base.chart(p); }
  [[nodiscard]] std::optional<point_type> from_chart(const std::vector<double>& c) const { return base.from_chart(c); }
  [[nodiscard]] std::array<point_type, 3> equilateral(double s) const { return base.equilateral(s); }
  [[nodiscard]] static const char* name() { return "snowflake"; }
};

/// Max over the three pairs of the betweenness defect of m.
template <ModelMetric M>
[[nodiscard]] double tripod_defect_at(const M& model, const std::array<typename M::point_type, 3>& t,
                                      const typename M::point_type& m) {
  double worst = 0;
  for (auto [i, j] : {std::pair{0U, 1U}, std::pair{1U, 2U}, std::pair{0U, 2U}})
    worst = std::max(worst, model.dist(t[i], m) + model.dist(m, t[j]) - model.dist(t[i], t[j]));
  return worst;
}

struct SearchConfig {
  std::size_t candidates = 24'000;  ///< total over all rounds
  std::size_t rounds = 8;
  double shrink = 0.3;  ///< box side factor per refinement round
  double margin = 0.25;  ///< box padding relative to the triple's chart extent
  std::size_t keep = 200;  ///< best candidates retained (used for product searches)
};

template <class P>
struct TripodSearch {
  double defect = 0;
  P best{};
  double resolution = 0;  ///< final box side / points-per-round^(1/dim)
  std::size_t evaluated = 0;
  std::vector<std::pair<double, P>> kept;  ///< best `keep` candidates, ascending
};

namespace detail {

struct Box {
  std::vector<double> lo, hi;
};

/// Low-discrepancy points in a box.
class SobolBox {
 public:
  explicit SobolBox(Box box) : box_(std::move(box)), gen_(box_.lo.size()) {}
  std::vector<double> next() {
    const double scale = 1.0 / (static_cast<double>(gen_.max()) + 1.0);
    std::vector<double> pt(box_.lo.size());
    for (std::size_t k = 0; k < pt.size(); ++k)
      pt[k] = box_.lo[k] + (box_.hi[k] - box_.lo[k]) * (static_cast<double>(gen_()) * scale);
    return pt;
  }

 private:
  Box box_;
  boost::random::sobol gen_;
};

inline std::vector<std::vector<double>> sobol_points(const Box& box, std::size_t count) {
  SobolBox gen(box);
  std::vector<std::vector<double>> out(count);
  for (auto& pt : out) pt = gen.next();
  return out;
}

template <ModelMetric M>
Box hull_box(const M& model, const std::array<typename M::point_type, 3>& t, double margin) {
  Box box{model.chart(t[0]), model.chart(t[0])};
  for (const auto& p : t) {
    const auto c = model.chart(p);
    for (std::size_t k = 0; k < c.size(); ++k) {
      box.lo[k] = std::min(box.lo[k], c[k]);
      box.hi[k] = std::max(box.hi[k], c[k]);
    }
  }
  double extent = 0;
  for (std::size_t k = 0; k < box.lo.size(); ++k) extent = std::max(extent, box.hi[k] - box.lo[k]);
  for (std::size_t k = 0; k < box.lo.size(); ++k) {
    box.lo[k] -= margin * extent;
    box.hi[k] += margin * extent;
  }
  return box;
}

template <class P>
void keep_best(std::vector<std::pair<double, P>>& kept, double d, const P& p, std::size_t limit) {
  if (limit == 0) return;
  if (kept.size() == limit && !(d < kept.back().first)) return;
  auto pos = std::upper_bound(kept.begin(), kept.end(), d, [](double v, const auto& e) { return v < e.first; });
  kept.insert(pos, {d, p});
  if (kept.size() > limit) kept.pop_back();
}

}  // namespace detail

/// Least defect over a refined low-discrepancy candidate set: round 0 covers
/// the padded chart box of the triple, each later round a box shrunk around
/// the best point so far. The three vertices are always candidates.
template <ModelMetric M>
[[nodiscard]] TripodSearch<typename M::point_type> search_tripod(const M& model,
                                                                 const std::array<typename M::point_type, 3>& t,
                                                                 const SearchConfig& cfg = {}) {
  using P = typename M::point_type;
  TripodSearch<P> out;
  auto consider = [&](const P& m) {
    const double d = tripod_defect_at(model, t, m);
    ++out.evaluated;
    if (out.evaluated == 1 || d < out.defect) {
      out.defect = d;
      out.best = m;
    }
    detail::keep_best(out.kept, d, m, cfg.keep);
  };
  for (const auto& v : t) consider(v);

  auto box = detail::hull_box(model, t, cfg.margin);
  const std::size_t rounds = std::max<std::size_t>(cfg.rounds, 1);
  const std::size_t per_round = std::max<std::size_t>(cfg.candidates / rounds, 1);
  for (std::size_t r = 0; r < rounds; ++r) {
    if (r > 0) {
      const auto c = model.chart(out.best);
      for (std::size_t k = 0; k < c.size(); ++k) {
        const double half = (box.hi[k] - box.lo[k]) * cfg.shrink / 2;
        box.lo[k] = c[k] - half;
        box.hi[k] = c[k] + half;
      }
    }
    for (const auto& c : detail::sobol_points(box, per_round))
      if (auto m = model.from_chart(c)) consider(*m);
  }
  double side = 0;
  for (std::size_t k = 0; k < box.lo.size(); ++k) side = std::max(side, box.hi[k] - box.lo[k]);
  out.resolution = side / std::pow(static_cast<double>(per_round), 1.0 / static_cast<double>(model.chart_dim()));
  return out;
}

/// Products search the Cartesian product of the factors' best candidates, so
/// the pair of factor optima is always among them.
template <ModelMetric A, ModelMetric B>
[[nodiscard]] TripodSearch<typename ProductModel<A, B>::point_type> search_tripod(
    const ProductModel<A, B>& model, const std::array<typename ProductModel<A, B>::point_type, 3>& t,
    const SearchConfig& cfg = {}) {
  using P = typename ProductModel<A, B>::point_type;
  const auto sa = search_tripod(model.a, {t[0].first, t[1].first, t[2].first}, cfg);
  const auto sb = search_tripod(model.b, {t[0].second, t[1].second, t[2].second}, cfg);
  TripodSearch<P> out;
  out.resolution = std::max(sa.resolution, sb.resolution);
  bool first = true;
  for (const auto& [da, pa] : sa.kept)
    for (const auto& [db, pb] : sb.kept) {
      const P m{pa, pb};
      const double d = tripod_defect_at(model, t, m);
      ++out.evaluated;
      if (first || d < out.defect) {
        out.defect = d;
        out.best = m;
        first = false;
      }
    }
  return out;
}

struct DefectEstimate {
  std::string model;
  double scale = 0;
  double defect = 0;
  double resolution = 0;
  std::size_t candidates = 0;
};

template <ModelMetric M>
[[nodiscard]] DefectEstimate tripod_defect_experiment(const M& model, double scale, const SearchConfig& cfg = {}) {
  const auto t = model.equilateral(scale);
  const auto s = search_tripod(model, t, cfg);
  return {M::name(), scale, s.defect, s.resolution, s.evaluated};
}

/// Closed forms at the symmetric center, used as oracles: the Euclidean
/// barycenter gives (2/sqrt 3 - 1) s, the hyperbolic center 2 rho(s) - s.
[[nodiscard]] inline double euclidean_equilateral_defect(double s) { return (2.0 / std::sqrt(3.0) - 1.0) * s; }
[[nodiscard]] inline double hyperbolic_equilateral_center_defect(double s) {
  return 2.0 * hyperbolic_circumradius(s) - s;
}

/// Least-squares slope through the origin-free fit y = a + b x.
[[nodiscard]] inline double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct ModelMedianSearch {
  std::size_t sampled = 0;
  std::size_t medians_found = 0;
  std::size_t between_checked = 0;
  std::size_t intermediate_failures = 0;
  double min_defect = 0;  ///< least max-pair defect in dist^alpha over the samples
};

/// Draws `samples` points m of the model from the padded chart box of t and looks for points delta-between
/// all three pairs in dist^alpha of `base`; also checks the intermediate
/// inequality (2 - 2^alpha) min(d(m,x), d(m,y))^alpha <= delta on every pair
/// for which m is delta-between.
template <ModelMetric M>
[[nodiscard]] ModelMedianSearch snowflake_model_median_search(const M& base, double alpha, double delta,
                                                              const std::array<typename M::point_type, 3>& t,
                                                              std::size_t samples, double margin = 0.25) {
  const SnowflakeModel<M> snow{base, alpha};
  const double k = 2.0 - std::pow(2.0, alpha);
  ModelMedianSearch out;
  bool first = true;
  detail::SobolBox gen(detail::hull_box(base, t, margin));
  // points of the box outside the model's domain are skipped, not counted
  for (std::size_t attempts = 0; out.sampled < samples && attempts < 100 * samples; ++attempts) {
    const auto m = base.from_chart(gen.next());
    if (!m) continue;
    ++out.sampled;
    bool all = true;
    double worst = 0;
    for (auto [i, j] : {std::pair{0U, 1U}, std::pair{1U, 2U}, std::pair{0U, 2U}}) {
      const double d = snow.dist(t[i], *m) + snow.dist(*m, t[j]) - snow.dist(t[i], t[j]);
      worst = std::max(worst, d);
      if (d <= delta) {
        ++out.between_checked;
        const double near = std::min(base.dist(t[i], *m), base.dist(*m, t[j]));
        if (k * std::pow(near, alpha) > delta + 1e-12) ++out.intermediate_failures;
      } else {
        all = false;
      }
    }
    out.medians_found += all ? 1 : 0;
    if (first || worst < out.min_defect) out.min_defect = worst;
    first = false;
  }
  return out;
}

}  // namespace medianwalls::lab
