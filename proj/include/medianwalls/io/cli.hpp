#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/version.hpp>

#include <CLI11.hpp>
#include "medianwalls/audit.hpp"
#include "medianwalls/errors.hpp"
#include "medianwalls/io/experiments.hpp"
#include "medianwalls/io/fixtures.hpp"
#include "medianwalls/io/json.hpp"
#include "medianwalls/medianization.hpp"

namespace medianwalls::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kBudgetEnv = "MEDIANWALLS_BUDGET";

enum ExitCode : int { kOk = 0, kViolation = 1, kInputError = 2, kBudgetExceeded = 3 };

/// A check on the computed result failed; the output is still written.
class Violation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using io::Json;

/// Wall budget: the flag wins over the environment, which wins over the default.
inline std::size_t resolve_budget(const std::optional<std::size_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kBudgetEnv); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw UsageError(std::string(kBudgetEnv) + " must be a non-negative integer, got '" + env + "'");
    }
  }
  return kDefaultWallBudget;
}

inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

inline std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

inline std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline Json versions() {
  return Json{{"medianwalls", kVersion},
              {"compiler", __VERSION__},
              {"boost", BOOST_LIB_VERSION},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                                    "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
              {"cli11", CLI11_VERSION}};
}

/// Provenance for one report. Kept out of the report itself so that reports
/// stay byte-identical across runs.
class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& args)
      : started_(std::chrono::steady_clock::now()), started_utc_(utc_now()) {
    j_["command"] = std::move(command);
    j_["arguments"] = args;
    j_["inputs"] = Json::array();
    j_["seed"] = nullptr;
  }

  void input(const std::filesystem::path& p, const std::string& bytes) {
    j_["inputs"].push_back(Json{{"path", p.string()}, {"bytes", bytes.size()}, {"fnv1a64", hex(fnv1a(bytes))}});
  }
  void seed(std::uint64_t s) { j_["seed"] = s; }
  void set(const std::string& key, Json v) { j_[key] = std::move(v); }

  [[nodiscard]] Json finish() const {
    Json out = j_;
    out["versions"] = versions();
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - started_;
    out["timing"] = Json{{"started_utc", started_utc_}, {"wall_seconds", wall.count()}};
    return out;
  }

 private:
  Json j_ = Json::object();
  std::chrono::steady_clock::time_point started_;
  std::string started_utc_;
};

/// Where reports go: files under --out, or stdout with the manifest as a
/// single JSON line on stderr.
class Sink {
 public:
  Sink(std::optional<std::filesystem::path> dir, std::ostream& out, std::ostream& err, std::mutex* lock = nullptr)
      : dir_(std::move(dir)), out_(out), err_(err), lock_(lock) {}

  void report(const std::string& filename, const std::string& text) {
    if (dir_) {
      io::write_file(*dir_ / filename, text);
      written_.push_back((*dir_ / filename).string());
    } else {
      guard([&] { out_ << text; });
    }
  }

  void manifest(const std::string& stem, Manifest& m) {
    if (dir_) {
      m.set("outputs", written_);
      io::write_file(*dir_ / (stem + ".manifest.json"), io::dump(m.finish()));
    } else {
      const auto line = Json{{"manifest", m.finish()}}.dump();
      guard([&] { err_ << line << "\n"; });
    }
  }

 private:
  template <class F>
  void guard(F&& f) {
    if (lock_) {
      std::lock_guard g(*lock_);
      f();
    } else {
      f();
    }
  }

  std::optional<std::filesystem::path> dir_;
  std::ostream& out_;
  std::ostream& err_;
  std::mutex* lock_;
  std::vector<std::string> written_;
};

inline std::string stem_of(const std::filesystem::path& p) { return p.stem().string(); }

inline std::string csv_row(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
  return s + "\n";
}

struct Common {
  std::optional<std::filesystem::path> out_dir;
  std::string format = "json";
  std::optional<std::size_t> budget;
};

inline void require_format(const std::string& cmd, const std::string& format, std::initializer_list<const char*> ok) {
  for (const char* f : ok)
    if (format == f) return;
  std::string list;
  for (const char* f : ok) list += (list.empty() ? "" : ", ") + std::string(f);
  throw UsageError(cmd + " supports --format " + list + ", not '" + format + "'");
}

inline WallSpace load_input(const std::filesystem::path& input, Manifest& m) {
  const auto text = io::read_file(input);
  m.input(input, text);
  try {
    return io::wallspace_from_json(io::parse_text(text, input.string()));
  } catch (const ParseError& e) {
    if (e.context().rfind(input.string(), 0) == 0) throw;
    throw ParseError(input.string() + ": " + e.context(), std::string(e.what()).substr(e.context().size() + 2));
  }
}

inline int medianize(const std::filesystem::path& input, const Common& c, Sink& sink, Manifest& m) {
  require_format("medianize", c.format, {"json", "dot", "csv"});
  const auto X = load_input(input, m);
  const auto budget = resolve_budget(c.budget);
  m.set("wall_budget", budget);
  const auto M = enumerate_sections(X, budget);
  const auto check = io::verify_embedding(M);
  const auto stem = stem_of(input);
  auto csv = [&] {
    std::string s = csv_row([&] {
      std::vector<std::string> h{"section"};
      for (const auto& n : M.names()) h.push_back(n);
      return h;
    }());
    for (std::size_t i = 0; i < M.size(); ++i) {
      std::vector<std::string> row{M.names()[i]};
      for (std::size_t j = 0; j < M.size(); ++j) row.push_back(M.dist(i, j).str());
      s += csv_row(row);
    }
    return s;
  };
  if (c.out_dir) {
    sink.report(stem + ".median.json", io::dump(io::to_json(M, check)));
    sink.report(stem + ".dot", io::to_dot(M));
    if (c.format == "csv") sink.report(stem + ".dist.csv", csv());
  } else if (c.format == "dot") {
    sink.report("", io::to_dot(M));
  } else if (c.format == "csv") {
    sink.report("", csv());
  } else {
    sink.report("", io::dump(io::to_json(M, check)));
  }
  sink.manifest(stem, m);
  if (!check.isometric || !check.median) throw Violation(input.string() + ": embedding check failed: " + check.detail);
  return kOk;
}

inline int audit(const std::filesystem::path& input, const Common& c, Sink& sink, Manifest& m) {
  require_format("audit", c.format, {"json", "csv"});
  const auto X = load_input(input, m);
  const auto budget = resolve_budget(c.budget);
  m.set("wall_budget", budget);
  const auto r = full_audit(X, budget);
  const auto stem = stem_of(input);
  if (c.format == "csv") {
    std::string s = csv_row({"quantity", "value"});
    for (auto [k, v] : {std::pair{"eta", r.eta}, {"delta", r.delta}, {"D", r.D}, {"K", r.K}, {"coarse_constant", r.coarse_constant}})
      s += csv_row({k, v.str()});
    s += csv_row({"rank", std::to_string(r.rank)});
    s += csv_row({"pass", r.pass() ? "true" : "false"});
    sink.report(stem + ".audit.csv", s);
  } else {
    sink.report(stem + ".audit.json", io::dump(io::to_json(r)));
  }
  sink.manifest(stem, m);
  if (!r.pass()) {
    std::string failed;
    for (const auto& chk : r.checks)
      if (!chk.pass) failed += (failed.empty() ? "" : ", ") + chk.name;
    throw Violation(input.string() + ": quantitative checks failed: " + failed);
  }
  return kOk;
}

inline io::Params parse_params(const std::vector<std::string>& kv) {
  io::Params p;
  for (const auto& s : kv) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + s + "'");
    p[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return p;
}

inline Json error_record(int code, const std::string& kind, const std::string& message,
                         const std::optional<std::string>& context = std::nullopt) {
  Json e{{"exit_code", code}, {"kind", kind}, {"message", message}};
  if (context) e["context"] = *context;
  if (code == kBudgetExceeded) {
    e["advisory"] = "raise the wall budget with --budget N or " + std::string(kBudgetEnv) +
                    ", or reduce the instance; enumeration cost grows exponentially in the number of walls";
  }
  return Json{{"error", e}};
}

/// Runs `body` and converts exceptions into exit codes and error records.
template <class F>
int guarded(std::ostream& err, std::mutex* lock, F&& body) {
  auto report = [&](int code, const std::string& kind, const std::string& msg, std::optional<std::string> ctx = {}) {
    const auto line = error_record(code, kind, msg, ctx).dump();
    if (lock) {
      std::lock_guard g(*lock);
      err << line << "\n";
    } else {
      err << line << "\n";
    }
    return code;
  };
  try {
    return body();
  } catch (const Violation& e) {
    return report(kViolation, "violation", e.what());
  } catch (const UsageError& e) {
    return report(kInputError, "usage", e.what());
  } catch (const ParseError& e) {
    return report(kInputError, "parse", e.what(), e.context());
  } catch (const DomainError& e) {
    return report(kInputError, "input", e.what());
  } catch (const std::domain_error& e) {
    return report(kInputError, "input", e.what());
  } catch (const ResourceError& e) {
    return report(kBudgetExceeded, "budget", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report(kInputError, "io", e.what());
  } catch (const std::exception& e) {
    return report(kViolation, "internal", e.what());
  }
}

}  // namespace detail

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wall spaces, their medianizations, and quantitative checks", "medianwalls"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  detail::Common common;
  std::string out_dir;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> samples;
  std::optional<std::size_t> budget;
  std::vector<std::string> params;
  auto add_common = [&](CLI::App* sub, bool with_budget) {
    sub->add_option("--out", out_dir, "Write results into this directory");
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv", "dot"}));
    if (with_budget) sub->add_option("--budget", budget, "Maximum wall count for section enumeration");
  };

  auto* gen = app.add_subcommand("generate", "Write a fixture wall space as JSON");
  std::string family;
  std::vector<std::int64_t> gen_params;
  gen->add_option("family", family, "Fixture family")->required();
  gen->add_option("parameters", gen_params, "Family parameters (integers)");
  gen->add_option("--seed", seed, "Seed for random families");
  add_common(gen, false);

  auto* med = app.add_subcommand("medianize", "Enumerate the median space of a wall space");
  std::string input;
  med->add_option("input", input, "Wall-space JSON file")->required();
  add_common(med, true);

  auto* aud = app.add_subcommand("audit", "Compute constants and run the quantitative checks");
  aud->add_option("input", input, "Wall-space JSON file")->required();
  add_common(aud, true);

  auto* exp = app.add_subcommand("experiment", "Run a continuous-model experiment");
  std::string name;
  unsigned threads = 0;
  std::string exp_list;
  for (const auto& n : io::experiment_names()) exp_list += (exp_list.empty() ? "" : ", ") + n;
  exp->add_option("name", name, "One of: " + exp_list)->required();
  exp->add_option("--seed", seed, "Random seed");
  exp->add_option("--samples", samples, "Monte Carlo sample count");
  exp->add_option("--param", params, "Experiment parameter key=value (repeatable)");
  exp->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
  add_common(exp, false);

  auto* bat = app.add_subcommand("batch", "Medianize or audit many files in parallel");
  std::string batch_cmd = "audit";
  std::vector<std::string> inputs;
  unsigned jobs = 0;
  bat->add_option("--command", batch_cmd, "Per-file command")->check(CLI::IsMember({"medianize", "audit"}));
  bat->add_option("inputs", inputs, "Wall-space JSON files")->required();
  bat->add_option("--jobs", jobs, "Parallel jobs (0 = hardware concurrency)");
  add_common(bat, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << detail::error_record(kInputError, "usage", e.what()).dump() << "\n";
    return kInputError;
  }

  if (!out_dir.empty()) common.out_dir = out_dir;
  common.budget = budget;
  std::string command_line = "medianwalls";
  for (const auto& a : args) command_line += " " + a;

  if (*gen) {
    return detail::guarded(err, nullptr, [&] {
      detail::require_format("generate", common.format, {"json"});
      detail::Manifest m(command_line, args);
      m.seed(seed);
      const auto X = fixtures::generate(fixtures::FixtureSpec{family, gen_params, seed});
      detail::Sink sink(common.out_dir, out, err);
      sink.report(family + ".json", io::dump(io::to_json(X)));
      sink.manifest(family, m);
      return kOk;
    });
  }
  if (*med || *aud) {
    return detail::guarded(err, nullptr, [&] {
      detail::Manifest m(command_line, args);
      detail::Sink sink(common.out_dir, out, err);
      return *med ? detail::medianize(input, common, sink, m) : detail::audit(input, common, sink, m);
    });
  }
  if (*exp) {
    return detail::guarded(err, nullptr, [&] {
      detail::require_format("experiment", common.format, {"json", "csv"});
      io::ExperimentOptions o;
      o.seed = seed;
      o.samples = samples;
      o.params = detail::parse_params(params);
      o.threads = threads;
      detail::Manifest m(command_line, args);
      m.seed(seed);
      const auto r = io::run_experiment(name, o);
      detail::Sink sink(common.out_dir, out, err);
      if (common.out_dir) {
        sink.report(name + ".json", io::dump(r.report));
        sink.report(name + ".csv", r.csv());
      } else {
        sink.report("", common.format == "csv" ? r.csv() : io::dump(r.report));
      }
      sink.manifest(name, m);
      if (!r.pass) throw Violation(name + ": experiment checks failed");
      return kOk;
    });
  }
  // batch
  if (!common.out_dir && inputs.size() > 1) {
    err << detail::error_record(kInputError, "usage", "batch with several inputs requires --out").dump() << "\n";
    return kInputError;
  }
  std::mutex lock;
  std::atomic<std::size_t> next{0};
  std::vector<int> codes(inputs.size(), kOk);
  auto worker = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      codes[i] = detail::guarded(err, &lock, [&] {
        detail::Manifest m(command_line, args);
        detail::Sink sink(common.out_dir, out, err, &lock);
        return batch_cmd == "medianize" ? detail::medianize(inputs[i], common, sink, m)
                                        : detail::audit(inputs[i], common, sink, m);
      });
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs ? jobs : std::thread::hardware_concurrency(),
                                                     static_cast<unsigned>(inputs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  // Report the most severe outcome: budget > input > violation.
  int code = kOk;
  for (int c : codes)
    if (c == kBudgetExceeded || (c == kInputError && code != kBudgetExceeded) || (c == kViolation && code == kOk)) code = c;
  return code;
}

}  // namespace medianwalls::cli
