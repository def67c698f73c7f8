// pmkit: build, inspect, classify, and simulate finite partial-monitoring
// games from the command line. See README.md for the exit-code contract.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pm/game_io.hpp"
#include "pm/report_io.hpp"

namespace {

constexpr int kExitInputError = 1;
constexpr int kExitFlagError = 2;

struct GameSpec {
  std::string kind;  // dueling | mab | pricing | file
  int arms = 0;
  std::string file;
  std::string prices;
  std::string valuations;
};

void add_game_flags(CLI::App* cmd, GameSpec& spec) {
  cmd->add_option("--game", spec.kind, "game family: dueling, mab, pricing, or file")
      ->required()
      ->check(CLI::IsMember({"dueling", "mab", "pricing", "file"}));
  cmd->add_option("--arms", spec.arms, "arm count for dueling/mab")->check(CLI::Range(2, 16));
  cmd->add_option("--file", spec.file, "path of a game file (--game file)");
  cmd->add_option("--prices", spec.prices, "comma-separated prices in (0,1] (--game pricing)");
  cmd->add_option("--valuations", spec.valuations,
                  "comma-separated valuations in [0,1] (--game pricing)");
}

std::vector<pm::Rational> parse_rational_list(const std::string& text) {
  std::vector<pm::Rational> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(pm::parse_rational(tok));
  return out;
}

pm::Game make_game(const GameSpec& spec) {
  if (spec.kind == "dueling" || spec.kind == "mab") {
    if (spec.arms == 0) throw CLI::ValidationError("--arms is required for " + spec.kind);
    return spec.kind == "dueling" ? pm::build_dueling_game(spec.arms)
                                  : pm::build_mab_game(spec.arms);
  }
  if (spec.kind == "pricing") {
    if (spec.prices.empty() || spec.valuations.empty())
      throw CLI::ValidationError("--prices and --valuations are required for pricing");
    return pm::build_pricing_game(parse_rational_list(spec.prices),
                                  parse_rational_list(spec.valuations));
  }
  if (spec.file.empty()) throw CLI::ValidationError("--file is required for --game file");
  return pm::load_game_file(spec.file);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_classify(const GameSpec& spec, const std::string& out_path) {
  const pm::Game g = make_game(spec);
  const pm::GameAnalysis analysis = pm::analyze(g);
  const pm::Classification& c = analysis.classification;
  std::cout << "game: " << g.name << " (" << g.num_actions() << " actions, " << g.num_outcomes()
            << " outcomes)\n";
  std::cout << "verdict: " << pm::to_string(c.verdict) << "\n";
  if (c.trivial_action)
    std::cout << "evidence: action " << g.actions[static_cast<std::size_t>(*c.trivial_action)]
              << " is optimal under every outcome distribution\n";
  if (c.hopeless_pair)
    std::cout << "evidence: pair (" << g.actions[static_cast<std::size_t>(c.hopeless_pair->first)]
              << "," << g.actions[static_cast<std::size_t>(c.hopeless_pair->second)]
              << ") is not globally observable\n";
  if (c.hard_pair)
    std::cout << "evidence: neighbor pair (" << g.actions[static_cast<std::size_t>(c.hard_pair->first)]
              << "," << g.actions[static_cast<std::size_t>(c.hard_pair->second)]
              << ") is not locally observable\n";
  if (c.verdict == pm::Verdict::Easy)
    std::cout << "evidence: " << c.easy_pairs.size()
              << " locally observable neighbor pair(s)\n";
  if (!out_path.empty()) write_text_file(out_path, pm::analysis_json(g, analysis).dump(2) + "\n");
  return pm::verdict_exit_code(c.verdict);
}

std::optional<int> parse_action_flag(const pm::Game& g, const std::string& action_flag) {
  if (auto idx = pm::find_action(g, action_flag)) return idx;
  auto comma = action_flag.find(',');
  if (comma != std::string::npos) {
    const int first = std::stoi(action_flag.substr(0, comma));
    const int second = std::stoi(action_flag.substr(comma + 1));
    if (auto arms = pm::dueling_arm_count(g)) {
      pm::ActionPair p{std::min(first, second), std::max(first, second)};
      if (p.first >= 1 && p.second <= *arms) return pm::dueling_pair_index(p, *arms);
    }
  }
  return std::nullopt;
}

int run_inspect(const GameSpec& spec, const std::string& what, const std::string& format,
                const std::string& action_flag, const std::string& encoding_flag,
                const std::string& out_path) {
  const pm::Game g = make_game(spec);
  std::string text;
  nlohmann::ordered_json json;

  if (what == "matrices") {
    text = pm::matrices_text(g);
    json = nlohmann::ordered_json::parse(pm::save_game(g));
  } else if (what == "signals") {
    std::vector<int> targets;
    if (!action_flag.empty()) {
      auto idx = parse_action_flag(g, action_flag);
      if (!idx) throw CLI::ValidationError("unknown action '" + action_flag + "'");
      targets.push_back(*idx);
    } else {
      for (int i = 0; i < g.num_actions(); ++i) targets.push_back(i);
    }
    json = nlohmann::ordered_json::array();
    for (int i : targets) {
      const pm::SignalMatrix s = pm::signal_matrix(g, i);
      text += pm::signal_text(g, s);
      nlohmann::ordered_json e;
      e["action"] = g.actions[static_cast<std::size_t>(i)];
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (Eigen::Index r = 0; r < s.entries.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < s.entries.cols(); ++c) row.push_back(s.entries(r, c));
        rows.push_back(std::move(row));
      }
      e["symbols"] = nlohmann::ordered_json::array();
      for (int sym : s.symbols) e["symbols"].push_back(g.alphabet[static_cast<std::size_t>(sym)]);
      e["entries"] = std::move(rows);
      json.push_back(std::move(e));
    }
  } else if (what == "cells") {
    const pm::CellReport cells = pm::cell_decomposition(g);
    text = pm::cells_text(g, cells);
    json = pm::cell_report_json(g, cells);
  } else if (what == "neighbors") {
    const pm::CellReport cells = pm::cell_decomposition(g);
    const pm::NeighborReport neighbors = pm::neighbor_pairs(g, cells);
    if (format == "dot")
      text = pm::neighbor_dot(g, cells, neighbors);
    else
      text = pm::neighbors_text(g, neighbors);
    json = pm::neighbor_report_json(g, neighbors);
  } else if (what == "feedexp") {
    std::vector<pm::Rational> encoding;
    if (encoding_flag.empty()) {
      encoding = pm::default_symbol_encoding(g);
    } else {
      // "symbol=value,symbol=value"
      encoding.assign(g.alphabet.size(), pm::Rational(0));
      std::vector<bool> seen(g.alphabet.size(), false);
      std::stringstream ss(encoding_flag);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
          throw CLI::ValidationError("--encoding expects symbol=value pairs");
        const std::string sym = tok.substr(0, eq);
        bool found = false;
        for (std::size_t s = 0; s < g.alphabet.size(); ++s)
          if (g.alphabet[s] == sym) {
            encoding[s] = pm::parse_rational(tok.substr(eq + 1));
            seen[s] = true;
            found = true;
          }
        if (!found) throw CLI::ValidationError("--encoding names unknown symbol '" + sym + "'");
      }
      for (std::size_t s = 0; s < seen.size(); ++s)
        if (!seen[s])
          throw CLI::ValidationError("--encoding is missing symbol '" + g.alphabet[s] + "'");
    }
    const pm::FeedexpResult res = pm::feedexp_precondition(g, encoding);
    text = res.feasible ? "feasible\n" : "infeasible\n";
    if (res.conflict)
      text += "conflict: outcome columns " +
              g.outcomes[static_cast<std::size_t>(res.conflict->first)] + " and " +
              g.outcomes[static_cast<std::size_t>(res.conflict->second)] +
              " share identical feedback but different gains\n";
    json = pm::feedexp_json(g, res);
  } else if (what == "pointlocal") {
    const pm::PointLocalWitness w = pm::point_local_witness(g);
    text = "point: outcome " + g.outcomes[static_cast<std::size_t>(g.num_outcomes() - 1)] +
           " with probability 1\noptimal actions (" + std::to_string(w.optimal_actions.size()) +
           "):";
    for (int i : w.optimal_actions) text += " " + g.actions[static_cast<std::size_t>(i)];
    text += "\n";
    json = pm::point_local_json(g, w);
  }

  const std::string payload = (format == "json") ? json.dump(2) + "\n" : text;
  if (!out_path.empty())
    write_text_file(out_path, payload);
  else
    std::cout << payload;
  return 0;
}

int run_simulate(const GameSpec& spec, const std::string& env_flag, const std::string& policy,
                 double gamma, int horizon, int runs, std::uint64_t seed, int jobs,
                 const std::string& out_base, int precision) {
  const pm::Game g = make_game(spec);

  pm::Environment env = pm::ScriptedEnv{};
  if (env_flag.rfind("means=", 0) == 0) {
    env = pm::DuelingBernoulliEnv{parse_rational_list(env_flag.substr(6))};
  } else if (env_flag.rfind("dist=", 0) == 0) {
    const auto j = nlohmann::json::parse(read_text_file(env_flag.substr(5)));
    if (!j.is_array()) throw std::runtime_error("distribution file must hold a JSON array");
    pm::RatVector q(j.size());
    for (std::size_t k = 0; k < j.size(); ++k)
      q(static_cast<Eigen::Index>(k)) =
          j[k].is_string() ? pm::parse_rational(j[k].get<std::string>())
                           : pm::parse_rational(std::to_string(j[k].get<long long>()));
    env = pm::StochasticEnv{std::move(q)};
  } else if (env_flag.rfind("script=", 0) == 0) {
    const auto j = nlohmann::json::parse(read_text_file(env_flag.substr(7)));
    if (!j.is_array()) throw std::runtime_error("script file must hold a JSON array");
    pm::ScriptedEnv script;
    for (const auto& e : j) {
      if (e.is_number_integer()) {
        script.outcomes.push_back(e.get<int>());
      } else {
        const std::string label = e.get<std::string>();
        int idx = -1;
        for (int o = 0; o < g.num_outcomes(); ++o)
          if (g.outcomes[static_cast<std::size_t>(o)] == label) {
            idx = o;
            break;
          }
        if (idx < 0) throw std::runtime_error("script names unknown outcome '" + label + "'");
        script.outcomes.push_back(idx);
      }
    }
    env = std::move(script);
  } else {
    throw CLI::ValidationError("--env must be means=..., dist=file, or script=file");
  }

  pm::PolicyFactory factory;
  if (policy == "uniform")
    factory = [] { return std::make_unique<pm::UniformPolicy>(); };
  else
    factory = [gamma] { return std::make_unique<pm::DuelingExp3Policy>(gamma); };

  pm::BatchSummary summary;
  try {
    summary = pm::batch(g, env, factory, horizon, runs, seed, jobs);
  } catch (const std::invalid_argument& e) {
    // environment/game mismatch is an input error, not a flag error
    throw std::runtime_error(e.what());
  }
  std::cout << "mean_regret=" << pm::to_decimal(summary.mean_regret, precision)
            << " stderr=" << summary.std_error << " runs=" << runs << " horizon=" << horizon
            << "\n";
  if (!out_base.empty()) {
    std::ofstream trace(out_base + ".trace.csv", std::ios::binary);
    if (!trace) throw std::runtime_error("cannot write trace CSV");
    pm::write_trace_csv(trace, g, summary.traces, precision);
    std::ofstream sum(out_base + ".summary.csv", std::ios::binary);
    if (!sum) throw std::runtime_error("cannot write summary CSV");
    pm::write_summary_csv(sum, summary, precision);
  }
  return 0;
}

int run_convert(const GameSpec& spec, bool has_in, const std::string& in_path,
                const std::string& out_path) {
  const pm::Game g = has_in ? pm::load_game_file(in_path) : make_game(spec);
  const std::string text = pm::save_game(g);
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partial-monitoring game toolkit"};
  app.require_subcommand(1);

  GameSpec classify_spec;
  std::string classify_out;
  CLI::App* classify = app.add_subcommand("classify", "compute the regret-class verdict");
  add_game_flags(classify, classify_spec);
  classify->add_option("--out", classify_out, "write the full analysis report (JSON)");

  GameSpec inspect_spec;
  std::string inspect_what, inspect_format = "text", inspect_action, inspect_encoding, inspect_out;
  CLI::App* inspect = app.add_subcommand("inspect", "print game artifacts");
  add_game_flags(inspect, inspect_spec);
  inspect->add_option("--what", inspect_what, "matrices|signals|cells|neighbors|feedexp|pointlocal")
      ->required()
      ->check(CLI::IsMember({"matrices", "signals", "cells", "neighbors", "feedexp", "pointlocal"}));
  inspect->add_option("--format", inspect_format, "text, dot (neighbors only), or json")
      ->check(CLI::IsMember({"text", "dot", "json", "file"}));
  inspect->add_option("--action", inspect_action, "action filter for --what signals (label or i,j)");
  inspect->add_option("--encoding", inspect_encoding,
                      "symbol=value,... numeric encoding for --what feedexp");
  inspect->add_option("--out", inspect_out, "write output to a file instead of stdout");

  GameSpec sim_spec;
  std::string sim_env, sim_policy = "uniform", sim_out;
  double sim_gamma = 0.1;
  int sim_horizon = 0, sim_runs = 1, sim_jobs = 0, sim_precision = 10;
  std::uint64_t sim_seed = 0;
  CLI::App* simulate = app.add_subcommand("simulate", "run seeded regret experiments");
  add_game_flags(simulate, sim_spec);
  simulate->add_option("--env", sim_env, "means=p1,p2,... | dist=file | script=file")->required();
  simulate->add_option("--policy", sim_policy, "uniform or dexp3")
      ->check(CLI::IsMember({"uniform", "dexp3"}));
  simulate->add_option("--gamma", sim_gamma, "exploration rate for dexp3, in (0,1]")
      ->check(CLI::Range(std::nextafter(0.0, 1.0), 1.0));
  simulate->add_option("--horizon", sim_horizon, "rounds per run")->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--runs", sim_runs, "replications")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "master seed (per-run streams derive from it)");
  simulate->add_option("--jobs", sim_jobs, "worker threads (default: hardware parallelism)");
  simulate->add_option("--out", sim_out, "CSV base path; writes <base>.trace.csv and <base>.summary.csv");
  simulate->add_option("--precision", sim_precision, "decimal digits in CSV output")
      ->check(CLI::Range(0, 50));

  GameSpec convert_spec;
  std::string convert_in, convert_out;
  CLI::App* convert = app.add_subcommand("convert", "canonicalize or export a game file");
  convert->add_option("--game", convert_spec.kind, "game family to export")
      ->check(CLI::IsMember({"dueling", "mab", "pricing"}));
  convert->add_option("--arms", convert_spec.arms, "arm count")->check(CLI::Range(2, 16));
  convert->add_option("--prices", convert_spec.prices, "prices for pricing export");
  convert->add_option("--valuations", convert_spec.valuations, "valuations for pricing export");
  convert->add_option("--in", convert_in, "game file to canonicalize");
  convert->add_option("--out", convert_out, "destination path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitFlagError;
  }

  try {
    if (app.got_subcommand(classify)) return run_classify(classify_spec, classify_out);
    if (app.got_subcommand(inspect))
      return run_inspect(inspect_spec, inspect_what, inspect_format, inspect_action,
                         inspect_encoding, inspect_out);
    if (app.got_subcommand(simulate)) {
      const int jobs = sim_jobs > 0 ? sim_jobs
                                    : std::max(1u, std::thread::hardware_concurrency());
      return run_simulate(sim_spec, sim_env, sim_policy, sim_gamma, sim_horizon, sim_runs,
                          sim_seed, jobs, sim_out, sim_precision);
    }
    if (app.got_subcommand(convert)) {
      if (convert_in.empty() && convert_spec.kind.empty())
        throw CLI::ValidationError("convert needs --in or --game");
      return run_convert(convert_spec, !convert_in.empty(), convert_in, convert_out);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFlagError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFlagError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return 0;
}
