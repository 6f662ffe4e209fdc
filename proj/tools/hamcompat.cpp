// Command-line front end: gen, solve, verify, experiment, nibble-trace.
// Exit codes: 0 success, 1 solver failure or rejected cycle, 2 invalid input.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hamcompat/hamcompat.hpp"

namespace {

using namespace hamcompat;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kInvalid = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

void write_to(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

Graph load_graph(const std::string& path) {
  auto in = open_in(path);
  return read_graph(in);
}

ConflictSystem load_system(const std::string& path, const Graph& g, bool rainbow) {
  if (path.empty()) return rainbow ? gen_global_random(g, 1, 0) : ConflictSystem::empty_local(g);
  auto in = open_in(path);
  return read_system(in, g);
}

Cycle load_cycle(const std::string& path) {
  auto in = open_in(path);
  Cycle c;
  long long v;
  while (in >> v) c.vertices.push_back(static_cast<Vertex>(v));
  if (!in.eof()) throw InputError("cycle file must hold whitespace-separated vertex ids");
  return c;
}

std::string cycle_text(const Cycle& c) {
  std::ostringstream os;
  for (std::size_t i = 0; i < c.vertices.size(); ++i) os << (i ? " " : "") << c.vertices[i];
  os << '\n';
  return os.str();
}

// "key=value,key=value" solver limits.
void apply_limits(const std::string& text, SolveLimits& sparse, DenseLimits& dense, NibbleParams& nibble) {
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("limit '" + item + "' is not key=value");
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    try {
      if (key == "max_restarts") sparse.max_restarts = std::stoi(value);
      else if (key == "max_iterations") sparse.max_iterations = std::stoll(value);
      else if (key == "time_limit_ms") sparse.time_limit_ms = std::stod(value);
      else if (key == "expander_budget") sparse.expander_budget = std::stoll(value);
      else if (key == "exact_cap") dense.directed.exact_cap = std::stoi(value);
      else if (key == "directed_restarts") dense.directed.restarts = std::stoi(value);
      else if (key == "nibble_restarts") nibble.restart_cap = std::stoi(value);
      else throw InputError("unknown limit '" + key + "'");
    } catch (const std::logic_error&) {
      throw InputError("bad value in limit '" + item + "'");
    }
  }
}

nlohmann::ordered_json verdict_json(const Verdict& v) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& x : v.violations)
    out.push_back({{"kind", static_cast<int>(x.kind)}, {"vertex", x.vertex}, {"other", x.other},
                   {"edge_a", x.edge_a}, {"edge_b", x.edge_b}, {"color", x.color}});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamilton cycles under edge-pair conflict constraints"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate G(n,p) and a conflict system");
  Vertex gen_n = 0;
  double gen_p = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_graph_out, gen_system_out, gen_kind = "none", gen_format = "text";
  int gen_bound = 0;
  Vertex gen_vertex = 0;
  gen->add_option("--n", gen_n, "vertex count")->required();
  gen->add_option("--p", gen_p, "edge probability")->required();
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--graph-out", gen_graph_out, "graph file (default stdout)");
  gen->add_option("--format", gen_format, "graph format: text or json");
  gen->add_option("--system", gen_kind, "none, random_bounded, star_killer or global_random");
  gen->add_option("--bound", gen_bound, "conflict bound for random_bounded / colour multiplicity for global_random");
  gen->add_option("--vertex", gen_vertex, "vertex for star_killer");
  gen->add_option("--system-out", gen_system_out, "system file");

  // solve
  auto* solve = app.add_subcommand("solve", "search for a constrained Hamilton cycle");
  std::string solve_method = "sparse", solve_graph, solve_system, solve_limits, solve_out, solve_report;
  std::uint64_t solve_seed = 0;
  int solve_d = 8;
  solve->add_option("--method", solve_method, "sparse, dense or rainbow");
  solve->add_option("--graph", solve_graph, "graph file")->required();
  solve->add_option("--system", solve_system, "conflict system file (default: no conflicts)");
  solve->add_option("--seed", solve_seed, "random seed");
  solve->add_option("--d", solve_d, "edges drawn per vertex for the sparse methods");
  solve->add_option("--limits", solve_limits, "comma-separated key=value limits");
  solve->add_option("--out", solve_out, "cycle output file (default stdout)");
  solve->add_option("--report", solve_report, "JSON report file");

  // verify
  auto* verify = app.add_subcommand("verify", "check a cycle");
  std::string verify_graph, verify_system, verify_cycle_path, verify_mode = "compatible";
  verify->add_option("--graph", verify_graph, "graph file")->required();
  verify->add_option("--system", verify_system, "conflict system file");
  verify->add_option("--cycle", verify_cycle_path, "cycle file")->required();
  verify->add_option("--mode", verify_mode, "hamiltonian_only, compatible or rainbow");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run a seeded sweep");
  std::string exp_config, exp_output;
  experiment->add_option("--config", exp_config, "config file")->required();
  experiment->add_option("--output", exp_output, "override the configured output path");

  // nibble-trace
  auto* trace = app.add_subcommand("nibble-trace", "run the nibble matching and print its trace");
  Vertex tr_n = 0;
  double tr_p = 0.0, tr_delta = 0.05, tr_eps = 0.4;
  std::int64_t tr_rounds = 0;
  std::uint64_t tr_seed = 0;
  std::string tr_out;
  trace->add_option("--n", tr_n, "vertex count")->required();
  trace->add_option("--p", tr_p, "edge probability")->required();
  trace->add_option("--delta", tr_delta, "nibble delta");
  trace->add_option("--epsilon", tr_eps, "nibble epsilon");
  trace->add_option("--rounds", tr_rounds, "round count (0 derives it)");
  trace->add_option("--seed", tr_seed, "random seed");
  trace->add_option("--out", tr_out, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*gen) {
      const Graph g = gen_gnp(gen_n, gen_p, gen_seed);
      if (gen_format == "json") write_to(gen_graph_out, graph_to_json(g).dump() + "\n");
      else if (gen_format == "text") write_to(gen_graph_out, graph_to_text(g));
      else throw InputError("format must be text or json");
      if (gen_kind != "none") {
        if (gen_system_out.empty()) throw InputError("--system-out is required with --system");
        const auto kind = parse_system_kind(gen_kind);
        ConflictSystem s = make_system(g, kind, kind == SystemKind::global_random ? Method::rainbow : Method::sparse,
                                       gen_bound, mix_seed(gen_seed, 2));
        if (kind == SystemKind::star_killer) s = gen_star_killer(g, gen_vertex);
        std::ostringstream os;
        write_system(os, g, s);
        write_to(gen_system_out, os.str());
      }
      return kOk;
    }

    if (*solve) {
      const Method method = parse_method(solve_method);
      const Graph g = load_graph(solve_graph);
      const ConflictSystem s = load_system(solve_system, g, method == Method::rainbow);
      if (method == Method::rainbow && s.mode() != ConflictMode::global)
        throw InputError("rainbow method needs a global colouring");
      SolveLimits sparse;
      DenseLimits dense;
      NibbleParams nibble;
      apply_limits(solve_limits, sparse, dense, nibble);
      SolveReport rep;
      if (method == Method::dense) {
        nibble.seed = solve_seed;
        rep = solve_dense(g, s, nibble, dense);
      } else {
        DOutParams dp;
        dp.d = solve_d;
        dp.seed = solve_seed;
        rep = solve_constrained(g, s, dp, sparse);
      }
      if (!solve_report.empty()) {
        nlohmann::ordered_json j{{"success", rep.success},
                                 {"stage", rep.stage},
                                 {"message", rep.message},
                                 {"rotations", rep.rotations},
                                 {"boosters_enumerated", rep.boosters_enumerated},
                                 {"boosters_rejected", rep.boosters_rejected},
                                 {"restarts", rep.restarts},
                                 {"elapsed_ms", rep.elapsed_ms},
                                 {"violations", verdict_json(rep.verdict)}};
        if (rep.cycle) j["cycle"] = rep.cycle->vertices;
        write_to(solve_report, j.dump(2) + "\n");
      }
      if (!rep.success) {
        std::cerr << "no cycle found (stage " << rep.stage << "): " << rep.message << '\n';
        return kFailure;
      }
      write_to(solve_out, cycle_text(*rep.cycle));
      return kOk;
    }

    if (*verify) {
      const CycleMode mode = parse_cycle_mode(verify_mode);
      const Graph g = load_graph(verify_graph);
      const ConflictSystem s = load_system(verify_system, g, false);
      const Verdict v = verify_cycle(g, s, load_cycle(verify_cycle_path), mode);
      std::cout << (v.pass() ? "pass" : "fail") << '\n';
      if (!v.pass()) std::cout << verdict_json(v).dump(2) << '\n';
      return v.pass() ? kOk : kFailure;
    }

    if (*experiment) {
      auto in = open_in(exp_config);
      ExperimentConfig cfg = parse_config(in);
      if (!exp_output.empty()) cfg.output = exp_output;
      if (!cfg.output.empty() && cfg.output != "-") {
        std::ofstream probe(cfg.output);
        if (!probe) throw InputError("cannot write " + cfg.output);
      }
      const auto res = run_experiment(cfg);
      std::ostringstream os;
      write_experiment(os, res, cfg.format);
      write_to(cfg.output, os.str());
      for (const auto& c : res.cells)
        std::cerr << "n=" << c.n << " p=" << c.p << " mu_ratio=" << c.mu_ratio << ": " << c.successes << "/" << c.trials
                  << '\n';
      return kOk;
    }

    if (*trace) {
      const Graph g = gen_gnp(tr_n, tr_p, tr_seed);
      NibbleParams params;
      params.delta = tr_delta;
      params.epsilon = tr_eps;
      params.rounds = tr_rounds;
      params.seed = mix_seed(tr_seed, 3);
      const auto res = nibble_matching(g, ConflictSystem::empty_local(g), params);
      std::ostringstream os;
      write_trace_csv(os, res.trace);
      write_to(tr_out, os.str());
      if (!res.matching) {
        std::cerr << "nibble failed: " << res.failure << '\n';
        return kFailure;
      }
      return kOk;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}
