#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "medianwalls/audit.hpp"
#include "medianwalls/errors.hpp"
#include "medianwalls/medianization.hpp"
#include "medianwalls/metric_space.hpp"
#include "medianwalls/wallspace.hpp"

namespace medianwalls::io {

using Json = nlohmann::ordered_json;

/// Canonical text form: two-space indent and a trailing newline.
[[nodiscard]] inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Parses JSON text; syntax errors become ParseError with line and column.
[[nodiscard]] inline Json parse_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col), "invalid JSON");
  }
}

[[nodiscard]] inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path.string(), "cannot write file");
  out << text;
}

// ---- rationals ----

[[nodiscard]] inline Json rational_json(const Rational& r) { return Json{{"num", r.num()}, {"den", r.den()}}; }

/// Accepts {"num", "den"}, an integer, or a string "n/d".
[[nodiscard]] inline Rational rational_from_json(const Json& j, const std::string& ctx) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_object()) {
      if (!j.contains("num")) throw ParseError(ctx, "missing field 'num'");
      const auto den = j.contains("den") ? j.at("den") : Json(1);
      if (!j.at("num").is_number_integer() || !den.is_number_integer())
        throw ParseError(ctx, "num and den must be integers");
      return Rational(j.at("num").get<std::int64_t>(), den.get<std::int64_t>());
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(ctx, e.what());
  }
  throw ParseError(ctx, "expected a rational ({\"num\", \"den\"}, integer or \"n/d\")");
}

/// Report form of an exact value: "n" or "n/d".
[[nodiscard]] inline Json exact(const Rational& r) { return r.str(); }
[[nodiscard]] inline Json exact(double v) { return v; }

// ---- wall spaces ----

[[nodiscard]] inline Json to_json(const WallSpace& X) {
  Json walls = Json::array();
  for (const auto& w : X.walls()) {
    Json side = Json::array();
    for (auto p : members_of(w.side_a.members)) side.push_back(X.name(p));
    walls.push_back(Json{{"name", w.name}, {"side_a", side}, {"weight", rational_json(w.weight)}});
  }
  return Json{{"points", X.names()}, {"walls", walls}};
}

[[nodiscard]] inline WallSpace wallspace_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("$", "expected an object with 'points' and 'walls'");
  if (!j.contains("points") || !j.at("points").is_array()) throw ParseError("points", "missing or not an array");
  if (!j.contains("walls") || !j.at("walls").is_array()) throw ParseError("walls", "missing or not an array");
  std::vector<std::string> names;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < j.at("points").size(); ++i) {
    const auto& p = j.at("points")[i];
    const auto ctx = "points[" + std::to_string(i) + "]";
    if (!p.is_string()) throw ParseError(ctx, "point ids must be strings");
    if (!index.emplace(p.get<std::string>(), i).second)
      throw ParseError(ctx, "duplicate point id '" + p.get<std::string>() + "'");
    names.push_back(p.get<std::string>());
  }
  std::vector<WallSpec<Rational>> specs;
  for (std::size_t w = 0; w < j.at("walls").size(); ++w) {
    const auto& wj = j.at("walls")[w];
    const auto ctx = "walls[" + std::to_string(w) + "]";
    if (!wj.is_object()) throw ParseError(ctx, "expected an object");
    if (!wj.contains("side_a") || !wj.at("side_a").is_array()) throw ParseError(ctx + ".side_a", "missing or not an array");
    PointSet side(names.size());
    for (std::size_t k = 0; k < wj.at("side_a").size(); ++k) {
      const auto& pj = wj.at("side_a")[k];
      const auto pctx = ctx + ".side_a[" + std::to_string(k) + "]";
      if (!pj.is_string()) throw ParseError(pctx, "point ids must be strings");
      const auto it = index.find(pj.get<std::string>());
      if (it == index.end()) throw ParseError(pctx, "unknown point '" + pj.get<std::string>() + "'");
      side.set(it->second);
    }
    const Rational weight = wj.contains("weight") ? rational_from_json(wj.at("weight"), ctx + ".weight") : Rational(1);
    if (weight < Rational(0)) throw ParseError(ctx + ".weight", "negative weight");
    std::string name;
    if (wj.contains("name")) {
      if (!wj.at("name").is_string()) throw ParseError(ctx + ".name", "expected a string");
      name = wj.at("name").get<std::string>();
    }
    specs.push_back({std::move(side), weight, std::move(name)});
  }
  try {
    return WallSpace(std::move(names), std::move(specs));
  } catch (const DomainError& e) {
    throw ParseError("walls", e.what());
  }
}

[[nodiscard]] inline WallSpace load_wallspace(const std::filesystem::path& path) {
  const auto j = parse_text(read_file(path), path.string());
  try {
    return wallspace_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.context(), std::string(e.what()).substr(e.context().size() + 2));
  }
}

inline void save_wallspace(const std::filesystem::path& path, const WallSpace& X) { write_file(path, dump(to_json(X))); }

/// Same points in the same order and the same walls (sides, weights, names).
[[nodiscard]] inline bool structurally_identical(const WallSpace& X, const WallSpace& Y) {
  if (X.names() != Y.names() || X.wall_count() != Y.wall_count()) return false;
  for (std::size_t w = 0; w < X.wall_count(); ++w) {
    const auto &a = X.walls()[w], &b = Y.walls()[w];
    if (a.side_a.members != b.side_a.members || a.weight != b.weight || a.name != b.name) return false;
  }
  return true;
}

// ---- distance matrices ----

template <Scalar T>
[[nodiscard]] Json to_json(const FiniteMetricSpace<T>& S) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < S.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < S.size(); ++k) {
      if constexpr (std::is_same_v<T, Rational>) {
        row.push_back(rational_json(S.at(i, k)));
      } else {
        row.push_back(S.at(i, k));
      }
    }
    rows.push_back(std::move(row));
  }
  return Json{{"points", S.names()}, {"dist", rows}};
}

/// Reads {"points": [...], "dist": [[...]]}; entries are rationals for
/// T = Rational and plain numbers for T = double.
template <Scalar T>
[[nodiscard]] FiniteMetricSpace<T> metric_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("points") || !j.contains("dist"))
    throw ParseError("$", "expected an object with 'points' and 'dist'");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < j.at("points").size(); ++i) {
    if (!j.at("points")[i].is_string()) throw ParseError("points[" + std::to_string(i) + "]", "expected a string");
    names.push_back(j.at("points")[i].get<std::string>());
  }
  const auto& rows = j.at("dist");
  if (!rows.is_array() || rows.size() != names.size()) throw ParseError("dist", "expected one row per point");
  std::vector<T> flat;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != names.size())
      throw ParseError("dist[" + std::to_string(i) + "]", "expected one entry per point");
    for (std::size_t k = 0; k < names.size(); ++k) {
      const auto ctx = "dist[" + std::to_string(i) + "][" + std::to_string(k) + "]";
      if constexpr (std::is_same_v<T, Rational>) {
        flat.push_back(rational_from_json(rows[i][k], ctx));
      } else {
        if (!rows[i][k].is_number()) throw ParseError(ctx, "expected a number");
        flat.push_back(rows[i][k].get<double>());
      }
    }
  }
  try {
    return FiniteMetricSpace<T>(std::move(names), std::move(flat));
  } catch (const DomainError& e) {
    throw ParseError("dist", e.what());
  }
}

template <Scalar T>
[[nodiscard]] Json to_json(const TripodReport<T>& r, const FiniteMetricSpace<T>& S) {
  Json spread = Json::array();
  for (const auto& [d, diam] : r.median_spread) spread.push_back(Json{{"delta", exact(d)}, {"diameter", exact(diam)}});
  return Json{{"delta", exact(r.delta)},
              {"witness", {S.name(r.witness[0]), S.name(r.witness[1]), S.name(r.witness[2])}},
              {"median_spread", spread},
              {"candidates", r.candidates},
              {"tolerance", exact(r.tolerance)}};
}

// ---- median spaces ----

/// Section choices as a string with one letter (A or B) per wall.
[[nodiscard]] inline std::string section_code(const AdmissibleSection& s) {
  std::string code(s.chooses_a.size(), 'B');
  for (std::size_t w = 0; w < code.size(); ++w)
    if (s.chooses_a.test(w)) code[w] = 'A';
  return code;
}

struct EmbeddingCheck {
  bool isometric = true;
  bool median = true;
  std::string detail;
};

template <Scalar W>
[[nodiscard]] EmbeddingCheck verify_embedding(const FiniteMedianSpace<W>& M) {
  EmbeddingCheck out;
  const auto& X = M.base();
  for (std::size_t x = 0; x < X.size() && out.isometric; ++x)
    for (std::size_t y = 0; y < X.size(); ++y)
      if (!approx_eq(M.dist(M.embedded(PointId{x}), M.embedded(PointId{y})), X.pdist(PointId{x}, PointId{y}))) {
        out.isometric = false;
        out.detail = "distance between " + X.name(PointId{x}) + " and " + X.name(PointId{y}) + " changes";
        break;
      }
  const auto v = is_median_space(M.metric());
  out.median = v.pass;
  if (!v.pass && v.witness && out.detail.empty()) {
    const auto& t = *v.witness;
    out.detail = "no unique median for (" + M.names()[t[0].value] + ", " + M.names()[t[1].value] + ", " +
                 M.names()[t[2].value] + ")";
  }
  return out;
}

template <Scalar W>
[[nodiscard]] Json to_json(const FiniteMedianSpace<W>& M, const EmbeddingCheck& check) {
  const auto& X = M.base();
  Json walls = Json::array();
  for (const auto& w : X.walls()) walls.push_back(w.name);
  Json sections = Json::array();
  std::vector<std::string> point_of(M.size());
  for (std::size_t x = 0; x < X.size(); ++x) point_of[M.embedded(PointId{x})] = X.name(PointId{x});
  for (std::size_t s = 0; s < M.size(); ++s) {
    Json e{{"name", M.names()[s]}, {"choices", section_code(M.sections()[s])}};
    e["point"] = M.is_canonical(s) ? Json(point_of[s]) : Json(nullptr);
    sections.push_back(std::move(e));
  }
  Json rows = Json::array();
  for (std::size_t s = 0; s < M.size(); ++s) {
    Json row = Json::array();
    for (std::size_t t = 0; t < M.size(); ++t) row.push_back(exact(M.dist(s, t)));
    rows.push_back(std::move(row));
  }
  return Json{{"points", X.names()},
              {"walls", walls},
              {"sections", sections},
              {"dist", rows},
              {"embedding", {{"isometric", check.isometric}, {"median", check.median}, {"detail", check.detail}}}};
}

/// 1-skeleton of the median space: sections differing on exactly one wall
/// partition are joined by an edge labelled with the walls that flip.
template <Scalar W>
[[nodiscard]] std::string to_dot(const FiniteMedianSpace<W>& M) {
  const auto& X = M.base();
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  std::ostringstream out;
  out << "graph median {\n";
  for (std::size_t s = 0; s < M.size(); ++s) {
    out << "  " << quote(M.names()[s]);
    if (!M.is_canonical(s)) out << " [shape=box]";
    out << ";\n";
  }
  std::vector<PointSet> keys;
  for (const auto& w : X.walls()) keys.push_back(detail::partition_key(w.side_a.members));
  for (std::size_t s = 0; s < M.size(); ++s)
    for (std::size_t t = s + 1; t < M.size(); ++t) {
      const auto diff = M.sections()[s].chooses_a ^ M.sections()[t].chooses_a;
      const auto first = diff.find_first();
      if (first == boost::dynamic_bitset<>::npos) continue;
      bool single = true;
      std::string label;
      for (auto w = first; w != boost::dynamic_bitset<>::npos; w = diff.find_next(w)) {
        if (keys[w] != keys[first]) {
          single = false;
          break;
        }
        label += (label.empty() ? "" : ",") + X.walls()[w].name;
      }
      if (single) out << "  " << quote(M.names()[s]) << " -- " << quote(M.names()[t]) << " [label=" << quote(label) << "];\n";
    }
  out << "}\n";
  return out.str();
}

// ---- audit reports ----

template <Scalar W>
[[nodiscard]] Json to_json(const AuditReport<W>& r) {
  Json profile = Json::array();
  for (const auto& e : r.f_profile) profile.push_back(Json{{"radius", exact(e.radius)}, {"value", exact(e.value)}});
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back(Json{{"id", c.id},
                          {"name", c.name},
                          {"anchor", c.anchor},
                          {"observed", exact(c.observed)},
                          {"bound", exact(c.bound)},
                          {"strict", c.strict},
                          {"cases", c.cases},
                          {"pass", c.pass},
                          {"witness", c.witness}});
  return Json{{"eta", exact(r.eta)},
              {"delta", exact(r.delta)},
              {"D", exact(r.D)},
              {"K", exact(r.K)},
              {"coarse_constant", exact(r.coarse_constant)},
              {"rank", r.rank},
              {"points", r.points},
              {"walls", r.walls},
              {"sections", r.sections},
              {"closure_equals_enumeration", r.closure_equals_enumeration},
              {"f_profile", profile},
              {"quantitative_checks", checks},
              {"pass", r.pass()}};
}

/// Fixed-width text rendering for terminals.
template <Scalar W>
[[nodiscard]] std::string audit_table(const AuditReport<W>& r) {
  auto str = [](const W& v) {
    if constexpr (std::is_same_v<W, Rational>) {
      return v.str();
    } else {
      return std::to_string(v);
    }
  };
  std::ostringstream out;
  out << "points " << r.points << "  walls " << r.walls << "  sections " << r.sections << "  rank " << r.rank << "\n";
  out << "eta " << str(r.eta) << "  delta " << str(r.delta) << "  D " << str(r.D) << "  K " << str(r.K) << "  D' "
      << str(r.coarse_constant) << "\n";
  out << "f:";
  for (const auto& e : r.f_profile) out << "  f(" << str(e.radius) << ")=" << str(e.value);
  out << "\n";
  for (const auto& c : r.checks) {
    std::string name = c.name;
    name.resize(std::max<std::size_t>(name.size(), 22), ' ');
    out << "(" << c.id << ") " << name << " " << str(c.observed) << (c.strict ? " < " : " <= ") << str(c.bound)
        << "  " << (c.pass ? "ok" : "VIOLATED") << "  [" << c.cases << " cases]";
    if (!c.pass) out << "  " << c.witness;
    out << "\n";
  }
  return out.str();
}

}  // namespace medianwalls::io
