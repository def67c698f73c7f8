#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pm/observability.hpp"
#include "pm/simulate.hpp"

namespace pm {

namespace detail {

inline nlohmann::ordered_json rational_vector_json(const RatVector& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(to_string(v(i)));
  return arr;
}

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

/// Fig-style aligned table: first row = column headers, first column = row
/// labels. Column widths account for multi-byte glyphs crudely by ignoring
/// UTF-8 continuation bytes.
inline std::string table_text(const std::vector<std::string>& col_labels,
                              const std::vector<std::string>& row_labels,
                              const std::vector<std::vector<std::string>>& cells) {
  auto glyphs = [](const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s)
      if ((c & 0xC0) != 0x80) ++n;
    return n;
  };
  std::vector<std::size_t> width(col_labels.size() + 1, 0);
  width[0] = 0;
  for (const auto& r : row_labels) width[0] = std::max(width[0], glyphs(r));
  for (std::size_t c = 0; c < col_labels.size(); ++c) {
    width[c + 1] = glyphs(col_labels[c]);
    for (const auto& row : cells) width[c + 1] = std::max(width[c + 1], glyphs(row[c]));
  }
  std::string out;
  auto emit = [&](const std::string& s, std::size_t w) {
    out += s;
    const std::size_t g = glyphs(s);
    if (g < w) out += std::string(w - g, ' ');
    out += "  ";
  };
  emit("", width[0]);
  for (std::size_t c = 0; c < col_labels.size(); ++c) emit(col_labels[c], width[c + 1]);
  out += "\n";
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    emit(row_labels[r], width[0]);
    for (std::size_t c = 0; c < col_labels.size(); ++c) emit(cells[r][c], width[c + 1]);
    out += "\n";
  }
  return out;
}

}  // namespace detail

inline nlohmann::ordered_json cell_report_json(const Game& g, const CellReport& report) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json actions = nlohmann::ordered_json::array();
  for (int i = 0; i < g.num_actions(); ++i) {
    const auto& c = report.cells[static_cast<std::size_t>(i)];
    nlohmann::ordered_json e;
    e["action"] = g.actions[static_cast<std::size_t>(i)];
    e["status"] = to_string(c.status);
    e["dim"] = c.dim;
    e["representative"] = g.actions[static_cast<std::size_t>(report.representative[static_cast<std::size_t>(i)])];
    e["witness"] = c.witness ? detail::rational_vector_json(*c.witness) : nlohmann::ordered_json();
    actions.push_back(std::move(e));
  }
  j["cells"] = std::move(actions);
  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  for (const auto& grp : report.duplicate_groups) {
    nlohmann::ordered_json names = nlohmann::ordered_json::array();
    for (int i : grp) names.push_back(g.actions[static_cast<std::size_t>(i)]);
    groups.push_back(std::move(names));
  }
  j["duplicate_groups"] = std::move(groups);
  return j;
}

inline nlohmann::ordered_json neighbor_report_json(const Game& g, const NeighborReport& report) {
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& p : report.pairs) {
    nlohmann::ordered_json e;
    e["i"] = g.actions[static_cast<std::size_t>(p.i)];
    e["j"] = g.actions[static_cast<std::size_t>(p.j)];
    nlohmann::ordered_json hood = nlohmann::ordered_json::array();
    for (int k : p.neighborhood) hood.push_back(g.actions[static_cast<std::size_t>(k)]);
    e["neighborhood"] = std::move(hood);
    e["witness"] = detail::rational_vector_json(p.witness);
    pairs.push_back(std::move(e));
  }
  nlohmann::ordered_json j;
  j["pairs"] = std::move(pairs);
  return j;
}

inline nlohmann::ordered_json observability_report_json(const Game& g,
                                                        const ObservabilityReport& report) {
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& p : report.pairs) {
    nlohmann::ordered_json e;
    e["i"] = g.actions[static_cast<std::size_t>(p.i)];
    e["j"] = g.actions[static_cast<std::size_t>(p.j)];
    e["globally_observable"] = p.globally;
    e["global_certificate"] =
        p.global_certificate ? detail::rational_vector_json(*p.global_certificate)
                             : nlohmann::ordered_json();
    if (p.locally.has_value()) {
      e["locally_observable"] = *p.locally;
      e["local_certificate"] = p.local_certificate
                                   ? detail::rational_vector_json(*p.local_certificate)
                                   : nlohmann::ordered_json();
    }
    pairs.push_back(std::move(e));
  }
  nlohmann::ordered_json j;
  j["pairs"] = std::move(pairs);
  return j;
}

inline nlohmann::ordered_json classification_json(const Game& g, const Classification& c) {
  nlohmann::ordered_json j;
  j["verdict"] = to_string(c.verdict);
  j["exit_code"] = verdict_exit_code(c.verdict);
  nlohmann::ordered_json evidence;
  if (c.trivial_action)
    evidence["dominant_action"] = g.actions[static_cast<std::size_t>(*c.trivial_action)];
  if (c.hopeless_pair)
    evidence["not_globally_observable"] = {g.actions[static_cast<std::size_t>(c.hopeless_pair->first)],
                                           g.actions[static_cast<std::size_t>(c.hopeless_pair->second)]};
  if (c.hard_pair)
    evidence["not_locally_observable"] = {g.actions[static_cast<std::size_t>(c.hard_pair->first)],
                                          g.actions[static_cast<std::size_t>(c.hard_pair->second)]};
  if (c.verdict == Verdict::Easy) {
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const auto& [i, jdx] : c.easy_pairs)
      pairs.push_back({g.actions[static_cast<std::size_t>(i)], g.actions[static_cast<std::size_t>(jdx)]});
    evidence["locally_observable_neighbor_pairs"] = std::move(pairs);
  }
  j["evidence"] = std::move(evidence);
  return j;
}

inline nlohmann::ordered_json analysis_json(const Game& g, const GameAnalysis& a) {
  nlohmann::ordered_json j;
  j["game"] = g.name;
  j["classification"] = classification_json(g, a.classification);
  j["cell_report"] = cell_report_json(g, a.cells);
  j["neighbor_report"] = neighbor_report_json(g, a.neighbors);
  j["observability_report"] = observability_report_json(g, a.observability);
  return j;
}

inline nlohmann::ordered_json feedexp_json(const Game& g, const FeedexpResult& r) {
  nlohmann::ordered_json j;
  j["feasible"] = r.feasible;
  if (r.conflict) {
    j["conflict"] = {g.outcomes[static_cast<std::size_t>(r.conflict->first)],
                     g.outcomes[static_cast<std::size_t>(r.conflict->second)]};
  } else {
    j["conflict"] = nlohmann::ordered_json();
  }
  if (r.coefficient_matrix) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < r.coefficient_matrix->rows(); ++i)
      rows.push_back(detail::rational_vector_json(r.coefficient_matrix->row(i).transpose()));
    j["coefficient_matrix"] = std::move(rows);
  }
  return j;
}

inline nlohmann::ordered_json point_local_json(const Game& g, const PointLocalWitness& w) {
  nlohmann::ordered_json j;
  j["point"] = detail::rational_vector_json(w.point);
  nlohmann::ordered_json acts = nlohmann::ordered_json::array();
  for (int i : w.optimal_actions) acts.push_back(g.actions[static_cast<std::size_t>(i)]);
  j["optimal_actions"] = std::move(acts);
  return j;
}

/// Neighbor relation as a DOT graph: one node per Pareto-optimal action
/// (degenerate ones dashed), one edge per neighbor pair labeled with the
/// neighborhood size.
inline std::string neighbor_dot(const Game& g, const CellReport& cells,
                                const NeighborReport& neighbors) {
  std::string out = "graph neighbors {\n";
  for (int i = 0; i < g.num_actions(); ++i) {
    const CellStatus status = cells.cells[static_cast<std::size_t>(i)].status;
    if (status == CellStatus::NonPareto) continue;
    out += "  \"" + g.actions[static_cast<std::size_t>(i)] + "\"";
    if (status == CellStatus::Degenerate) out += " [style=dashed]";
    out += ";\n";
  }
  for (const auto& p : neighbors.pairs)
    out += "  \"" + g.actions[static_cast<std::size_t>(p.i)] + "\" -- \"" +
           g.actions[static_cast<std::size_t>(p.j)] + "\" [label=\"" +
           std::to_string(p.neighborhood.size()) + "\"];\n";
  out += "}\n";
  return out;
}

/// Gain and feedback matrices with row/column labels, eyeball-diffable.
inline std::string matrices_text(const Game& g) {
  std::vector<std::vector<std::string>> gain_cells, fb_cells;
  for (int i = 0; i < g.num_actions(); ++i) {
    std::vector<std::string> grow, frow;
    for (int o = 0; o < g.num_outcomes(); ++o) {
      grow.push_back(to_string(g.gain(i, o)));
      frow.push_back(g.symbol_at(i, o));
    }
    gain_cells.push_back(std::move(grow));
    fb_cells.push_back(std::move(frow));
  }
  return "gain:\n" + detail::table_text(g.outcomes, g.actions, gain_cells) + "\nfeedback:\n" +
         detail::table_text(g.outcomes, g.actions, fb_cells);
}

inline std::string signal_text(const Game& g, const SignalMatrix& s) {
  std::vector<std::string> row_labels;
  std::vector<std::vector<std::string>> cells;
  for (std::size_t r = 0; r < s.symbols.size(); ++r) {
    row_labels.push_back(g.alphabet[static_cast<std::size_t>(s.symbols[r])]);
    std::vector<std::string> row;
    for (Eigen::Index c = 0; c < s.entries.cols(); ++c)
      row.push_back(std::to_string(s.entries(static_cast<Eigen::Index>(r), c)));
    cells.push_back(std::move(row));
  }
  return "signal matrix for action " + g.actions[static_cast<std::size_t>(s.action)] + ":\n" +
         detail::table_text(g.outcomes, row_labels, cells);
}

inline std::string cells_text(const Game& g, const CellReport& report) {
  std::vector<std::string> row_labels;
  std::vector<std::vector<std::string>> cells;
  for (int i = 0; i < g.num_actions(); ++i) {
    const auto& c = report.cells[static_cast<std::size_t>(i)];
    row_labels.push_back(g.actions[static_cast<std::size_t>(i)]);
    cells.push_back({to_string(c.status), std::to_string(c.dim)});
  }
  std::string out = detail::table_text({"status", "dim"}, row_labels, cells);
  for (const auto& grp : report.duplicate_groups) {
    out += "duplicate gain rows:";
    for (int i : grp) out += " " + g.actions[static_cast<std::size_t>(i)];
    out += "\n";
  }
  return out;
}

inline std::string neighbors_text(const Game& g, const NeighborReport& report) {
  std::string out;
  for (const auto& p : report.pairs) {
    out += g.actions[static_cast<std::size_t>(p.i)] + " -- " +
           g.actions[static_cast<std::size_t>(p.j)] + "  N = {";
    for (std::size_t k = 0; k < p.neighborhood.size(); ++k) {
      if (k) out += ", ";
      out += g.actions[static_cast<std::size_t>(p.neighborhood[k])];
    }
    out += "}\n";
  }
  if (report.pairs.empty()) out = "no neighbor pairs\n";
  return out;
}

/// Trace CSV: `run,t,action,outcome,symbol,cum_gain,cum_regret`, one row per
/// round, cumulative columns rendered as fixed-precision decimals.
inline void write_trace_csv(std::ostream& os, const Game& g,
                            const std::vector<RegretTrace>& traces, int precision) {
  os << "run,t,action,outcome,symbol,cum_gain,cum_regret\n";
  for (std::size_t r = 0; r < traces.size(); ++r) {
    const auto& trace = traces[r];
    Rational cum(0);
    std::vector<Rational> action_totals(static_cast<std::size_t>(g.num_actions()), Rational(0));
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
      const auto& step = trace.steps[t];
      cum += g.gain(step.action, step.outcome);
      Rational best(0);
      for (int i = 0; i < g.num_actions(); ++i) {
        action_totals[static_cast<std::size_t>(i)] += g.gain(i, step.outcome);
        if (i == 0 || action_totals[static_cast<std::size_t>(i)] > best)
          best = action_totals[static_cast<std::size_t>(i)];
      }
      os << (r + 1) << ',' << (t + 1) << ',' << g.actions[static_cast<std::size_t>(step.action)]
         << ',' << g.outcomes[static_cast<std::size_t>(step.outcome)] << ','
         << g.alphabet[static_cast<std::size_t>(step.symbol)] << ','
         << to_decimal(cum, precision) << ',' << to_decimal(best - cum, precision) << '\n';
    }
  }
}

/// Summary CSV: `run,regret`.
inline void write_summary_csv(std::ostream& os, const BatchSummary& summary, int precision) {
  os << "run,regret\n";
  for (std::size_t r = 0; r < summary.per_run_regret.size(); ++r)
    os << (r + 1) << ',' << to_decimal(summary.per_run_regret[r], precision) << '\n';
}

}  // namespace pm
