#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamcompat/conflict.hpp"
#include "hamcompat/graph.hpp"
#include "hamcompat/posa.hpp"
#include "hamcompat/reduction.hpp"
#include "hamcompat/rng.hpp"
#include "hamcompat/verify.hpp"

namespace hamcompat {

enum class Method { sparse, dense, rainbow };
enum class SystemKind { none, random_bounded, star_killer, global_random };
enum class HostKind { gnp, complete };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::sparse: return "sparse";
    case Method::dense: return "dense";
    case Method::rainbow: return "rainbow";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "sparse") return Method::sparse;
  if (s == "dense") return Method::dense;
  if (s == "rainbow") return Method::rainbow;
  throw std::invalid_argument("unknown method: " + s);
}

inline SystemKind parse_system_kind(const std::string& s) {
  if (s == "none") return SystemKind::none;
  if (s == "random_bounded") return SystemKind::random_bounded;
  if (s == "star_killer") return SystemKind::star_killer;
  if (s == "global_random") return SystemKind::global_random;
  throw std::invalid_argument("unknown system kind: " + s);
}

inline const char* to_string(SystemKind k) {
  switch (k) {
    case SystemKind::none: return "none";
    case SystemKind::random_bounded: return "random_bounded";
    case SystemKind::star_killer: return "star_killer";
    case SystemKind::global_random: return "global_random";
  }
  return "?";
}

struct ExperimentConfig {
  std::vector<Vertex> n_values;
  HostKind host = HostKind::gnp;
  std::optional<double> p;    // explicit edge probability
  std::optional<double> p_c;  // p = c ln n / n
  std::vector<double> mu_ratios{0.0};
  std::optional<SystemKind> system;  // default follows the method
  Method method = Method::sparse;
  int trials = 1;
  std::uint64_t master_seed = 0;
  int threads = 1;
  std::string output;          // empty or "-" for stdout
  std::string format = "csv";  // csv or json
  bool timing = false;         // when off, elapsed_ms is written as 0

  DOutParams dout;
  SolveLimits sparse_limits;
  NibbleParams nibble;
  DenseLimits dense_limits;

  SystemKind system_kind() const {
    if (system) return *system;
    return method == Method::rainbow ? SystemKind::global_random : SystemKind::random_bounded;
  }

  double p_for(Vertex n) const {
    if (host == HostKind::complete) return 1.0;
    if (p) return *p;
    return *p_c * std::log(static_cast<double>(n)) / static_cast<double>(n);
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  T value{};
  is >> value;
  if (!is || !(is >> std::ws).eof()) throw std::invalid_argument("bad value for " + key + ": '" + text + "'");
  return value;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(parse_number<T>(key, trim(item)));
  if (out.empty()) throw std::invalid_argument("empty list for " + key);
  return out;
}

inline bool parse_switch(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw std::invalid_argument("bad value for " + key + ": '" + v + "'");
}

}  // namespace detail

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.n_values.empty()) throw std::invalid_argument("config needs n");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (cfg.threads < 1) throw std::invalid_argument("threads must be at least 1");
  if (cfg.format != "csv" && cfg.format != "json") throw std::invalid_argument("format must be csv or json");
  for (double mu : cfg.mu_ratios)
    if (!(mu >= 0)) throw std::invalid_argument("mu_ratio must be non-negative");
  if (cfg.host == HostKind::gnp) {
    if (cfg.p.has_value() == cfg.p_c.has_value()) throw std::invalid_argument("give exactly one of p and p_c");
    for (Vertex n : cfg.n_values) {
      const double p = cfg.p_for(n);
      if (!(p >= 0 && p <= 1)) throw std::invalid_argument("edge probability outside [0, 1] for n = " + std::to_string(n));
    }
  }
  const Vertex min_n = cfg.method == Method::dense ? 4 : 3;
  for (Vertex n : cfg.n_values)
    if (n < min_n) throw std::invalid_argument("n = " + std::to_string(n) + " is too small for this method");
  const auto kind = cfg.system_kind();
  if (cfg.method == Method::rainbow && kind != SystemKind::global_random && kind != SystemKind::none)
    throw std::invalid_argument("rainbow method needs a global colouring");
  if (cfg.method != Method::rainbow && kind == SystemKind::global_random)
    throw std::invalid_argument("global colourings are only used by the rainbow method");
}

/// Flat "key = value" text; '#' starts a comment.
inline ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string v = detail::trim(line.substr(eq + 1));
    try {
      if (key == "n") cfg.n_values = detail::parse_list<Vertex>(key, v);
      else if (key == "graph") {
        if (v == "gnp") cfg.host = HostKind::gnp;
        else if (v == "complete") cfg.host = HostKind::complete;
        else throw std::invalid_argument("graph must be gnp or complete");
      }
      else if (key == "p") cfg.p = detail::parse_number<double>(key, v);
      else if (key == "p_c") cfg.p_c = detail::parse_number<double>(key, v);
      else if (key == "mu_ratio") cfg.mu_ratios = detail::parse_list<double>(key, v);
      else if (key == "system") cfg.system = parse_system_kind(v);
      else if (key == "method") cfg.method = parse_method(v);
      else if (key == "trials") cfg.trials = detail::parse_number<int>(key, v);
      else if (key == "master_seed") cfg.master_seed = detail::parse_number<std::uint64_t>(key, v);
      else if (key == "threads") cfg.threads = detail::parse_number<int>(key, v);
      else if (key == "output") cfg.output = v;
      else if (key == "format") cfg.format = v;
      else if (key == "timing") cfg.timing = detail::parse_switch(key, v);
      else if (key == "d") cfg.dout.d = detail::parse_number<int>(key, v);
      else if (key == "expander_retries") cfg.dout.max_retries = detail::parse_number<int>(key, v);
      else if (key == "max_restarts") cfg.sparse_limits.max_restarts = detail::parse_number<int>(key, v);
      else if (key == "max_iterations") cfg.sparse_limits.max_iterations = detail::parse_number<std::int64_t>(key, v);
      else if (key == "time_limit_ms") cfg.sparse_limits.time_limit_ms = detail::parse_number<double>(key, v);
      else if (key == "expander_budget") cfg.sparse_limits.expander_budget = detail::parse_number<std::int64_t>(key, v);
      else if (key == "nibble_delta") cfg.nibble.delta = detail::parse_number<double>(key, v);
      else if (key == "nibble_epsilon") cfg.nibble.epsilon = detail::parse_number<double>(key, v);
      else if (key == "nibble_rounds") cfg.nibble.rounds = detail::parse_number<std::int64_t>(key, v);
      else if (key == "nibble_restarts") cfg.nibble.restart_cap = detail::parse_number<int>(key, v);
      else if (key == "typicality_epsilon") cfg.dense_limits.typicality_epsilon = detail::parse_number<double>(key, v);
      else throw std::invalid_argument("unknown key");
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + " (" + key + "): " + e.what());
    }
  }
  validate(cfg);
  return cfg;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

struct TrialRecord {
  int cell = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  Vertex n = 0;
  double p = 0.0;
  double mu_ratio = 0.0;
  Method method = Method::sparse;
  bool success = false;
  std::string stage;
  std::int64_t rotations = 0;
  std::int64_t boosters = 0;
  int restarts = 0;
  double elapsed_ms = 0.0;
  bool verified = false;  // verify_cycle passed on the reported cycle
};

struct CellSummary {
  Vertex n = 0;
  double p = 0.0;
  double mu_ratio = 0.0;
  int trials = 0;
  int successes = 0;
  double rate() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
};

struct ExperimentResult {
  std::vector<TrialRecord> records;  // cell-major, then trial index
  std::vector<CellSummary> cells;
};

/// Per-trial seed: the master seed mixed with the cell and trial indices.
inline std::uint64_t trial_seed(std::uint64_t master, int cell, int trial) {
  return mix_seed(mix_seed(master, static_cast<std::uint64_t>(cell)), static_cast<std::uint64_t>(trial));
}

inline ConflictSystem make_system(const Graph& g, SystemKind kind, Method method, int bound, std::uint64_t seed) {
  switch (kind) {
    case SystemKind::none:
      return method == Method::rainbow ? gen_global_random(g, 1, seed) : ConflictSystem::empty_local(g);
    case SystemKind::random_bounded: return gen_random_bounded(g, bound, seed);
    case SystemKind::star_killer: return gen_star_killer(g, 0);
    case SystemKind::global_random: return gen_global_random(g, std::max(1, bound), seed);
  }
  throw std::logic_error("unhandled system kind");
}

inline TrialRecord run_trial(const ExperimentConfig& cfg, int cell, int trial) {
  const auto cell_count = static_cast<int>(cfg.mu_ratios.size());
  TrialRecord rec;
  rec.cell = cell;
  rec.trial = trial;
  rec.seed = trial_seed(cfg.master_seed, cell, trial);
  rec.n = cfg.n_values[static_cast<std::size_t>(cell / cell_count)];
  rec.mu_ratio = cfg.mu_ratios[static_cast<std::size_t>(cell % cell_count)];
  rec.p = cfg.p_for(rec.n);
  rec.method = cfg.method;

  const Graph g = cfg.host == HostKind::complete ? Graph::complete(rec.n) : gen_gnp(rec.n, rec.p, mix_seed(rec.seed, 1));
  const int bound = static_cast<int>(std::floor(rec.mu_ratio * rec.n * rec.p));
  const ConflictSystem s = make_system(g, cfg.system_kind(), cfg.method, bound, mix_seed(rec.seed, 2));
  const CycleMode mode = s.mode() == ConflictMode::global ? CycleMode::rainbow : CycleMode::compatible;

  try {
    std::optional<Cycle> cycle;
    if (cfg.method == Method::dense) {
      NibbleParams np = cfg.nibble;
      np.seed = mix_seed(rec.seed, 3);
      auto rep = solve_dense(g, s, np, cfg.dense_limits);
      rec.stage = rep.stage;
      rec.restarts = rep.restarts;
      rec.elapsed_ms = rep.elapsed_ms;
      cycle = rep.cycle;
    } else {
      DOutParams dp = cfg.dout;
      dp.seed = mix_seed(rec.seed, 3);
      auto rep = solve_constrained(g, s, dp, cfg.sparse_limits);
      rec.stage = rep.stage;
      rec.rotations = rep.rotations;
      rec.boosters = rep.boosters_enumerated;
      rec.restarts = rep.restarts;
      rec.elapsed_ms = rep.elapsed_ms;
      cycle = rep.cycle;
    }
    if (cycle) {
      rec.verified = verify_cycle(g, s, *cycle, mode).pass();
      rec.success = rec.verified;
      if (!rec.verified) rec.stage = "verify";
    }
  } catch (const std::exception&) {
    rec.success = false;
    rec.stage = "error";
  }
  if (!cfg.timing) rec.elapsed_ms = 0.0;
  return rec;
}

/// Runs every (n, mu_ratio) cell for cfg.trials trials on cfg.threads
/// workers. Records come back in index order whatever the worker count.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const int cells = static_cast<int>(cfg.n_values.size() * cfg.mu_ratios.size());
  const int total = cells * cfg.trials;
  ExperimentResult res;
  res.records.resize(static_cast<std::size_t>(total));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < total; i = next++)
      res.records[static_cast<std::size_t>(i)] = run_trial(cfg, i / cfg.trials, i % cfg.trials);
  };
  const int workers = std::min(cfg.threads, total);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (int c = 0; c < cells; ++c) {
    CellSummary s;
    const auto& first = res.records[static_cast<std::size_t>(c * cfg.trials)];
    s.n = first.n;
    s.p = first.p;
    s.mu_ratio = first.mu_ratio;
    for (int t = 0; t < cfg.trials; ++t) {
      ++s.trials;
      s.successes += res.records[static_cast<std::size_t>(c * cfg.trials + t)].success;
    }
    res.cells.push_back(s);
  }
  return res;
}

namespace detail {

inline std::string format_double(double x, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const ExperimentResult& res) {
  os << "seed,n,p,mu_ratio,method,success,stage,rotations,boosters,restarts,elapsed_ms\n";
  for (const auto& r : res.records)
    os << r.seed << ',' << r.n << ',' << detail::format_double(r.p, "%.10g") << ','
       << detail::format_double(r.mu_ratio, "%.10g") << ',' << to_string(r.method) << ',' << (r.success ? 1 : 0) << ','
       << r.stage << ',' << r.rotations << ',' << r.boosters << ',' << r.restarts << ','
       << detail::format_double(r.elapsed_ms, "%.3f") << '\n';
}

inline nlohmann::ordered_json experiment_to_json(const ExperimentResult& res) {
  nlohmann::ordered_json j;
  j["trials"] = nlohmann::ordered_json::array();
  for (const auto& r : res.records) {
    nlohmann::ordered_json t;
    t["seed"] = r.seed;
    t["n"] = r.n;
    t["p"] = r.p;
    t["mu_ratio"] = r.mu_ratio;
    t["method"] = to_string(r.method);
    t["success"] = r.success;
    t["stage"] = r.stage;
    t["rotations"] = r.rotations;
    t["boosters"] = r.boosters;
    t["restarts"] = r.restarts;
    t["elapsed_ms"] = r.elapsed_ms;
    t["trial"] = r.trial;
    t["cell"] = r.cell;
    t["verified"] = r.verified;
    j["trials"].push_back(std::move(t));
  }
  j["summary"] = nlohmann::ordered_json::array();
  for (const auto& c : res.cells)
    j["summary"].push_back({{"n", c.n}, {"p", c.p}, {"mu_ratio", c.mu_ratio}, {"trials", c.trials},
                            {"successes", c.successes}, {"rate", c.rate()}});
  return j;
}

inline void write_experiment(std::ostream& os, const ExperimentResult& res, const std::string& format) {
  if (format == "json") os << experiment_to_json(res).dump(2) << '\n';
  else write_csv(os, res);
}

}  // namespace hamcompat
