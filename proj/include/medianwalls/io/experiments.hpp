#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "medianwalls/errors.hpp"
#include "medianwalls/io/json.hpp"
#include "medianwalls/lab/complex_ball.hpp"
#include "medianwalls/lab/crofton.hpp"
#include "medianwalls/lab/l1.hpp"
#include "medianwalls/lab/models.hpp"
#include "medianwalls/lab/snowflake.hpp"

namespace medianwalls::io {

using Params = std::map<std::string, std::string>;

struct ExperimentResult {
  Json report;
  std::vector<std::string> csv_columns;
  std::vector<std::vector<Json>> csv_rows;
  bool pass = true;

  [[nodiscard]] std::string csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < csv_columns.size(); ++i) out << (i ? "," : "") << csv_columns[i];
    out << "\n";
    for (const auto& row : csv_rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << (row[i].is_string() ? row[i].get<std::string>() : row[i].dump());
      out << "\n";
    }
    return out.str();
  }
};

struct ExperimentOptions {
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> samples;
  Params params;
  unsigned threads = 0;
};

namespace detail {

class ParamReader {
 public:
  explicit ParamReader(const Params& p) : p_(p) {}

  double number(const std::string& key, double fallback) {
    used_.push_back(key);
    const auto it = p_.find(key);
    if (it == p_.end()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(it->second);
      return v;
    } catch (const std::exception&) {
      throw DomainError("parameter " + key + ": expected a number, got '" + it->second + "'");
    }
  }

  std::vector<double> list(const std::string& key, std::vector<double> fallback) {
    used_.push_back(key);
    const auto it = p_.find(key);
    if (it == p_.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw DomainError("parameter " + key + ": '" + item + "' is not a number");
      }
    }
    if (out.empty()) throw DomainError("parameter " + key + ": empty list");
    return out;
  }

  /// Rejects parameters the experiment does not know.
  void finish() const {
    for (const auto& [k, v] : p_)
      if (std::find(used_.begin(), used_.end(), k) == used_.end())
        throw DomainError("unknown parameter '" + k + "'");
  }

 private:
  const Params& p_;
  std::vector<std::string> used_;
};

inline Json numbers(const std::vector<double>& v) {
  Json j = Json::array();
  for (double x : v) j.push_back(x);
  return j;
}

inline std::uint64_t positive_count(double v, const std::string& what) {
  if (!(v >= 1) || v != std::floor(v)) throw DomainError(what + " must be a positive integer");
  return static_cast<std::uint64_t>(v);
}

}  // namespace detail

/// Pair at hyperbolic distance d, placed off-centre so that the estimator's
/// change of frame is exercised.
[[nodiscard]] inline std::pair<lab::DiskPoint, lab::DiskPoint> linearity_pair(double d) {
  const auto p = lab::polar_point(0.7, 2.0);
  return {p, lab::Mobius::centering(p).inverse()(lab::polar_point(d, 0.4))};
}

[[nodiscard]] inline ExperimentResult crofton_linearity(const ExperimentOptions& o) {
  detail::ParamReader in(o.params);
  const auto distances = in.list("distances", {0.5, 1, 2, 4, 8});
  const double tolerance = in.number("relative_tolerance", 0.02);
  in.finish();
  const auto samples = o.samples.value_or(1'000'000);
  const auto cal = lab::calibrate(samples);
  ExperimentResult r;
  r.csv_columns = {"distance", "estimate", "stderr", "samples", "oracle_value", "relative_error", "z"};
  Json records = Json::array();
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double d = distances[i];
    if (!(d > 0)) throw DomainError("distances must be positive");
    const auto [p, q] = linearity_pair(d);
    lab::MonteCarloConfig cfg;
    cfg.seed = o.seed;
    cfg.stream = i;
    cfg.samples = samples;
    cfg.threads = o.threads;
    const auto e = lab::crofton_estimate(p, q, cfg, cal);
    const double oracle = lab::crofton_oracle(p, q);
    const double se = e.combined_std_error();
    const double rel = std::abs(e.value - d) / d;
    const double z = (e.value - oracle) / se;
    const bool ok = rel < tolerance && std::abs(z) <= 3.0;
    r.pass = r.pass && ok;
    records.push_back(Json{{"distance", d},
                           {"estimate", e.value},
                           {"stderr", se},
                           {"samples", e.samples},
                           {"oracle_value", oracle},
                           {"relative_error", rel},
                           {"z", z},
                           {"proposal_radius", e.proposal_radius},
                           {"resampled", e.resampled},
                           {"pass", ok}});
    r.csv_rows.push_back({d, e.value, se, e.samples, oracle, rel, z});
  }
  r.report = Json{{"experiment", "crofton-linearity"},
                  {"parameters", {{"distances", detail::numbers(distances)}, {"relative_tolerance", tolerance}}},
                  {"seed", o.seed},
                  {"samples", samples},
                  {"calibration", {{"c", cal.c}, {"relative_stderr", cal.rel_error}, {"seed", cal.seed}, {"samples", cal.samples}}},
                  {"records", records},
                  {"pass", r.pass}};
  return r;
}

[[nodiscard]] inline ExperimentResult crofton_invariance(const ExperimentOptions& o) {
  detail::ParamReader in(o.params);
  const auto maps = detail::positive_count(in.number("maps", 20), "maps");
  const double max_r = in.number("max_radius", 1.5);
  in.finish();
  const auto samples = o.samples.value_or(200'000);
  lab::CounterRng rng(o.seed, 0x1a0);
  ExperimentResult r;
  r.csv_columns = {"map", "distance", "estimate", "transformed_estimate", "combined_stderr", "z"};
  Json records = Json::array();
  for (std::uint64_t i = 0; i < maps; ++i) {
    const auto p = lab::polar_point(rng.uniform(0, max_r), rng.uniform(0, 2 * std::numbers::pi));
    const auto q = lab::polar_point(rng.uniform(0, max_r), rng.uniform(0, 2 * std::numbers::pi));
    const auto g = lab::random_mobius(rng);
    lab::MonteCarloConfig cfg;
    cfg.seed = o.seed;
    cfg.samples = samples;
    cfg.threads = o.threads;
    cfg.stream = 2 * i;
    const auto a = lab::crofton_raw(p, q, cfg);
    cfg.stream = 2 * i + 1;
    const auto b = lab::crofton_raw(g(p), g(q), cfg);
    const double se = std::hypot(a.std_error, b.std_error);
    const double z = se > 0 ? (a.value - b.value) / se : 0.0;
    const bool ok = std::abs(z) <= 3.0;
    r.pass = r.pass && ok;
    const double d = lab::hyperbolic_dist(p, q);
    records.push_back(Json{{"map", i},
                           {"distance", d},
                           {"estimate", a.value},
                           {"transformed_estimate", b.value},
                           {"stderr", se},
                           {"samples", samples},
                           {"z", z},
                           {"pass", ok}});
    r.csv_rows.push_back({i, d, a.value, b.value, se, z});
  }
  r.report = Json{{"experiment", "crofton-invariance"},
                  {"parameters", {{"maps", maps}, {"max_radius", max_r}}},
                  {"seed", o.seed},
                  {"samples", samples},
                  {"units", "raw (cosh r dr dphi measure)"},
                  {"records", records},
                  {"pass", r.pass}};
  return r;
}

[[nodiscard]] inline ExperimentResult snowflake_bound(const ExperimentOptions& o) {
  detail::ParamReader in(o.params);
  const double alpha = in.number("alpha", 0.5);
  const double delta = in.number("delta", 0.1);
  const double step = in.number("step", 0.01);
  const double length = in.number("length", 1.0);
  const double bin = in.number("bin", 0.05);
  in.finish();
  if (!(step > 0 && length > 0 && bin > 0)) throw DomainError("step, length and bin must be positive");
  std::vector<double> xs;
  for (std::size_t i = 0; i * step <= length + 1e-12; ++i) xs.push_back(static_cast<double>(i) * step);
  const auto base = lab::line_space(xs);
  const auto triples = lab::all_triples(xs.size());
  const auto check = lab::snowflake_median_bound(base, alpha, delta, step, triples);

  // confirmation table by min pairwise distance
  std::map<std::int64_t, std::pair<std::uint64_t, std::uint64_t>> table;
  const auto S = lab::snowflaked(base, alpha);
  for (const auto& t : triples) {
    const double min_pair = std::min({base(t[0], t[1]), base(t[1], t[2]), base(t[0], t[2])});
    auto& row = table[static_cast<std::int64_t>(std::floor(min_pair / bin + 1e-9))];
    ++row.first;
    for (std::size_t m = 0; m < S.size(); ++m)
      if (tripod_defect_at(S, t, PointId{m}) <= delta + 1e-12) {
        ++row.second;
        break;
      }
  }
  ExperimentResult r;
  r.pass = check.pass;
  r.csv_columns = {"min_distance_from", "min_distance_to", "triples", "with_median"};
  Json rows = Json::array();
  for (const auto& [k, v] : table) {
    const double lo = static_cast<double>(k) * bin, hi = lo + bin;
    rows.push_back(Json{{"min_distance_from", lo}, {"min_distance_to", hi}, {"triples", v.first}, {"with_median", v.second}});
    r.csv_rows.push_back({lo, hi, v.first, v.second});
  }
  r.report = Json{{"experiment", "snowflake-bound"},
                  {"parameters", {{"alpha", alpha}, {"delta", delta}, {"step", step}, {"length", length}, {"bin", bin}}},
                  {"seed", o.seed},
                  {"threshold", check.threshold},
                  {"base_threshold", check.base_threshold},
                  {"effective_threshold", check.effective_threshold},
                  {"tolerance", check.tolerance},
                  {"triples", check.triples},
                  {"triples_with_median", check.triples_with_median},
                  {"far_triples", check.far_triples},
                  {"far_with_median", check.far_with_median},
                  {"max_median_min_distance", check.max_median_min_distance},
                  {"intermediate_checked", check.between_checked},
                  {"intermediate_failures", check.intermediate_failures},
                  {"base_form_failures", check.base_form_failures},
                  {"records", rows},
                  {"pass", r.pass}};
  return r;
}

[[nodiscard]] inline ExperimentResult snowflake_interval(const ExperimentOptions& o) {
  detail::ParamReader in(o.params);
  const auto alphas = in.list("alphas", {0.3, 0.5, 0.8});
  const auto count = detail::positive_count(in.number("triples", 1000), "triples");
  const double span = in.number("span", 100.0);
  in.finish();
  ExperimentResult r;
  r.csv_columns = {"alpha", "triples", "min_defect"};
  Json records = Json::array();
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    lab::CounterRng rng(o.seed, 0x5f0 + a);
    double min_defect = std::numeric_limits<double>::infinity();
    bool ok = true;
    std::uint64_t used = 0;
    while (used < count) {
      const double x = rng.uniform(-span, span), z = rng.uniform(-span, span), y = rng.uniform(-span, span);
      if (x == z || z == y) continue;
      ++used;
      const auto v = lab::snowflake_interval_check(lab::line_space({x, z, y}), alphas[a]);
      ok = ok && v.pass;
      min_defect = std::min(min_defect, v.min_defect);
    }
    r.pass = r.pass && ok;
    records.push_back(Json{{"alpha", alphas[a]}, {"triples", used}, {"min_defect", min_defect}, {"pass", ok}});
    r.csv_rows.push_back({alphas[a], used, min_defect});
  }
  const auto example = lab::snowflake_interval_check(lab::line_space({0, 0.25, 1}), 0.5);
  r.report = Json{{"experiment", "snowflake-interval"},
                  {"parameters", {{"alphas", detail::numbers(alphas)}, {"triples", count}, {"span", span}}},
                  {"seed", o.seed},
                  {"example", {{"points", {0, 0.25, 1}}, {"alpha", 0.5}, {"min_defect", example.min_defect}}},
                  {"records", records},
                  {"pass", r.pass}};
  return r;
}

struct TripodSweep {
  std::vector<lab::DefectEstimate> euclidean, hyperbolic, snow_hyperbolic, snow_complex, product, product_factor;
  double euclidean_slope = 0;
  double target_slope = (4 - 2 * std::sqrt(3.0)) / (2 * std::sqrt(3.0));
  bool euclidean_ok = false, hyperbolic_ok = false, snowflake_ok = false, product_ok = false;
};

inline constexpr double kNoGrowthTolerance = 0.01;

[[nodiscard]] inline TripodSweep tripod_sweep(double alpha, const lab::SearchConfig& cfg = {}) {
  TripodSweep s;
  const double unit = 2 * std::sqrt(3.0);
  std::vector<double> sides, defects;
  for (double k : {1.0, 2.0, 3.0, 4.0}) {
    s.euclidean.push_back(lab::tripod_defect_experiment(lab::EuclideanPlane{}, k * unit, cfg));
    sides.push_back(k * unit);
    defects.push_back(s.euclidean.back().defect);
  }
  s.euclidean_slope = lab::fitted_slope(sides, defects);
  s.euclidean_ok = std::abs(s.euclidean_slope - s.target_slope) <= 0.05 * s.target_slope;

  for (double sc : {5.0, 10.0, 20.0}) s.hyperbolic.push_back(lab::tripod_defect_experiment(lab::HyperbolicPlane{}, sc, cfg));
  const auto& h = s.hyperbolic;
  const double tol = kNoGrowthTolerance;
  s.hyperbolic_ok = !(h[1].defect > h[0].defect + tol && h[2].defect > h[1].defect + tol) &&
                    h[2].defect - h[0].defect <= tol;

  for (double sc : {5.0, 10.0, 20.0, 40.0})
    s.snow_hyperbolic.push_back(lab::tripod_defect_experiment(lab::SnowflakeModel<lab::HyperbolicPlane>{{}, alpha}, sc, cfg));
  s.snowflake_ok = true;
  for (std::size_t i = 1; i < s.snow_hyperbolic.size(); ++i)
    s.snowflake_ok = s.snowflake_ok && s.snow_hyperbolic[i].defect > s.snow_hyperbolic[i - 1].defect;
  for (double sc : {5.0, 10.0, 20.0})
    s.snow_complex.push_back(
        lab::tripod_defect_experiment(lab::SnowflakeModel<lab::ComplexHyperbolicPlane>{{}, alpha}, sc, cfg));

  s.product_ok = true;
  for (double sc : {4.0, 10.0, 20.0}) {
    s.product.push_back(lab::tripod_defect_experiment(lab::ProductModel<lab::HyperbolicPlane, lab::HyperbolicPlane>{}, sc, cfg));
    s.product_factor.push_back(lab::tripod_defect_experiment(lab::HyperbolicPlane{}, sc / 2, cfg));
    s.product_ok = s.product_ok && s.product.back().defect <= 2 * s.product_factor.back().defect + s.product.back().resolution;
  }
  return s;
}

[[nodiscard]] inline ExperimentResult tripod_sweep_experiment(const ExperimentOptions& o) {
  detail::ParamReader in(o.params);
  const double alpha = in.number("alpha", 0.5);
  lab::SearchConfig cfg;
  cfg.candidates = detail::positive_count(in.number("candidates", static_cast<double>(cfg.candidates)), "candidates");
  in.finish();
  if (!(alpha > 0 && alpha < 1)) throw DomainError("alpha must lie in (0, 1)");
  const auto s = tripod_sweep(alpha, cfg);
  ExperimentResult r;
  r.pass = s.euclidean_ok && s.hyperbolic_ok && s.snowflake_ok && s.product_ok;
  r.csv_columns = {"model", "scale", "defect", "resolution", "candidates"};
  Json records = Json::array();
  auto add = [&](const std::string& label, const std::vector<lab::DefectEstimate>& v) {
    for (const auto& e : v) {
      records.push_back(Json{{"model", label}, {"scale", e.scale}, {"defect", e.defect}, {"resolution", e.resolution}, {"candidates", e.candidates}});
      r.csv_rows.push_back({label, e.scale, e.defect, e.resolution, e.candidates});
    }
  };
  add("euclidean", s.euclidean);
  add("hyperbolic", s.hyperbolic);
  add("snowflake-hyperbolic", s.snow_hyperbolic);
  add("snowflake-complex-hyperbolic", s.snow_complex);
  add("product-hyperbolic", s.product);
  add("product-factor", s.product_factor);
  r.report = Json{{"experiment", "tripod-sweep"},
                  {"parameters", {{"alpha", alpha}, {"candidates", cfg.candidates}}},
                  {"seed", o.seed},
                  {"complex_normalization", lab::kComplexNormalization},
                  {"euclidean_slope", s.euclidean_slope},
                  {"euclidean_target_slope", s.target_slope},
                  {"hyperbolic_growth", s.hyperbolic.back().defect - s.hyperbolic.front().defect},
                  {"no_growth_tolerance", kNoGrowthTolerance},
                  {"checks",
                   {{"euclidean_linear", s.euclidean_ok},
                    {"hyperbolic_bounded", s.hyperbolic_ok},
                    {"snowflake_increasing", s.snowflake_ok},
                    {"product_subadditive", s.product_ok}}},
                  {"records", records},
                  {"pass", r.pass}};
  return r;
}

[[nodiscard]] inline ExperimentResult l1_embedding(const ExperimentOptions& o) {
  detail::ParamReader in(o.params);
  const auto pairs = detail::positive_count(in.number("pairs", 1000), "pairs");
  const double span = in.number("span", 100.0);
  in.finish();
  lab::CounterRng rng(o.seed, 0x11);
  double worst = 0, total = 0;
  for (std::uint64_t i = 0; i < pairs; ++i) {
    const auto c = lab::r2_l1_embedding_check({rng.uniform(-span, span), rng.uniform(-span, span)},
                                              {rng.uniform(-span, span), rng.uniform(-span, span)});
    worst = std::max(worst, c.error);
    total += c.error;
  }
  ExperimentResult r;
  r.pass = worst < lab::kL1Tolerance;
  r.csv_columns = {"pairs", "max_error", "mean_error"};
  r.csv_rows.push_back({pairs, worst, total / static_cast<double>(pairs)});
  r.report = Json{{"experiment", "l1-embedding"},
                  {"parameters", {{"pairs", pairs}, {"span", span}}},
                  {"seed", o.seed},
                  {"max_error", worst},
                  {"mean_error", total / static_cast<double>(pairs)},
                  {"tolerance", lab::kL1Tolerance},
                  {"pass", r.pass}};
  return r;
}

[[nodiscard]] inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"crofton-linearity", "crofton-invariance", "snowflake-bound",
                                              "snowflake-interval", "tripod-sweep",       "l1-embedding"};
  return names;
}

[[nodiscard]] inline ExperimentResult run_experiment(const std::string& name, const ExperimentOptions& o) {
  if (name == "crofton-linearity") return crofton_linearity(o);
  if (name == "crofton-invariance") return crofton_invariance(o);
  if (name == "snowflake-bound") return snowflake_bound(o);
  if (name == "snowflake-interval") return snowflake_interval(o);
  if (name == "tripod-sweep") return tripod_sweep_experiment(o);
  if (name == "l1-embedding") return l1_embedding(o);
  std::string valid;
  for (const auto& n : experiment_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw DomainError("unknown experiment '" + name + "' (valid: " + valid + ")");
}

}  // namespace medianwalls::io
