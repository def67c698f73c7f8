#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pm/report_io.hpp"

using namespace pm;

namespace {

Game two_row_game(std::vector<std::vector<const char*>> gains) {
  Game g;
  g.name = "synthetic";
  const int n = static_cast<int>(gains.size());
  const int m = static_cast<int>(gains.front().size());
  for (int i = 0; i < n; ++i) g.actions.push_back("a" + std::to_string(i + 1));
  for (int o = 0; o < m; ++o) g.outcomes.push_back("o" + std::to_string(o + 1));
  g.alphabet = {"*"};
  g.gain.resize(n, m);
  g.feedback.setZero(n, m);
  for (int i = 0; i < n; ++i)
    for (int o = 0; o < m; ++o)
      g.gain(i, o) = parse_rational(gains[static_cast<std::size_t>(i)][static_cast<std::size_t>(o)]);
  validate_game(g);
  return g;
}

std::vector<Game> property_games() {
  std::vector<Game> games;
  for (int k = 2; k <= 4; ++k) games.push_back(build_dueling_game(k));
  for (int k = 2; k <= 3; ++k) games.push_back(build_mab_game(k));
  games.push_back(build_pricing_game(
      {make_rational(1, 4), make_rational(1, 2), make_rational(3, 4)},
      {make_rational(1, 4), make_rational(1, 2), make_rational(3, 4)}));
  return games;
}

}  // namespace

TEST_CASE("cell_constraints shapes") {
  {
    const Game g = build_mab_game(2);
    const auto cs = cell_constraints(g, 0);
    CHECK(cs.equalities.size() == 1);               // sum to one
    CHECK(cs.inequalities.size() == 4 + 1);         // nonnegativity + one comparison
    const auto& cmp = cs.inequalities.back();
    const RatVector expected = (g.gain.row(0) - g.gain.row(1)).transpose();
    for (int o = 0; o < 4; ++o) CHECK(cmp.coeffs(o) == expected(o));
  }
  {
    const Game solo = two_row_game({{"1", "0"}});
    const auto cs = cell_constraints(solo, 0);
    CHECK(cs.inequalities.size() == 2);  // just the simplex
  }
  {
    const Game g = build_dueling_game(2);
    const auto cs = cell_constraints(g, *find_action(g, "12"));
    CHECK(cs.inequalities.size() == 4 + 2);  // vs (1,1) and (2,2)
  }
}

TEST_CASE("cell decomposition of dueling K=4") {
  const Game g = build_dueling_game(4);
  const CellReport report = cell_decomposition(g);
  for (int i = 0; i < g.num_actions(); ++i) {
    CAPTURE(g.actions[static_cast<std::size_t>(i)]);
    CHECK(report.cells[static_cast<std::size_t>(i)].status != CellStatus::NonPareto);
  }
  // delta at outcome "1000": arm 1 dominates, so (1,1) is the unique argmax
  RatVector delta = RatVector::Zero(16);
  delta(8) = 1;
  const auto best = oracles::argmax_actions(g, delta);
  REQUIRE(best == std::vector<int>{*find_action(g, "11")});
  CHECK(oracles::satisfies(cell_constraints(g, best.front()), delta));
  CHECK(report.cells[static_cast<std::size_t>(best.front())].status == CellStatus::StronglyPareto);
}

TEST_CASE("dominated and duplicate rows") {
  {
    const Game g = two_row_game({{"1", "1"}, {"0", "0"}});
    const CellReport report = cell_decomposition(g);
    CHECK(report.cells[0].status == CellStatus::StronglyPareto);
    CHECK(report.cells[0].dim == 1);  // |M|-1
    CHECK(report.cells[1].status == CellStatus::NonPareto);
    CHECK(report.cells[1].dim == -1);
  }
  {
    const Game g = two_row_game({{"1", "0"}, {"1", "0"}});
    const CellReport report = cell_decomposition(g);
    CHECK(report.cells[0].status == CellStatus::StronglyPareto);
    CHECK(report.cells[1].status == CellStatus::StronglyPareto);
    CHECK(report.cells[0].dim == 1);
    CHECK(report.cells[1].dim == 1);
    REQUIRE(report.duplicate_groups.size() == 1);
    CHECK(report.duplicate_groups[0] == std::vector<int>{0, 1});
    CHECK(report.representative[1] == 0);
    // duplicates never pair up in neighbor enumeration
    const NeighborReport nr = neighbor_pairs(g, report);
    CHECK(nr.find(0, 1) == nullptr);
    // and the literal dimension test agrees: their intersection is |M|-1
    // dimensional, not |M|-2
    CHECK(polytope_dimension(oracles::raw_intersection(g, 0, 1)).dim == 1);
  }
}

TEST_CASE("mab K=2: arms are neighbors, certified by frozen affine points") {
  const Game g = build_mab_game(2);
  const CellReport cells = cell_decomposition(g);
  const NeighborReport nr = neighbor_pairs(g, cells);
  REQUIRE(nr.pairs.size() == 1);
  const NeighborPair* p = nr.find(0, 1);
  REQUIRE(p != nullptr);
  CHECK(nr.find(1, 0) == p);  // unordered

  // three affinely independent points of C_1 cap C_2, checked by hand:
  // outcomes order 00,01,10,11 and the intersection satisfies q_01 = q_10
  std::vector<RatVector> pts;
  for (auto spec : {std::vector<const char*>{"1", "0", "0", "0"},
                    std::vector<const char*>{"0", "0", "0", "1"},
                    std::vector<const char*>{"0", "1/2", "1/2", "0"}}) {
    RatVector q(4);
    for (int i = 0; i < 4; ++i) q(i) = parse_rational(spec[static_cast<std::size_t>(i)]);
    CHECK(oracles::satisfies(oracles::raw_intersection(g, 0, 1), q));
    pts.push_back(q);
  }
  CHECK(oracles::affinely_independent(pts));  // spans a 2-flat = |M|-2
}

TEST_CASE("dueling K=3: neighborhood of ((1,1),(2,2)) contains (1,2)") {
  const Game g = build_dueling_game(3);
  const CellReport cells = cell_decomposition(g);
  const NeighborReport nr = neighbor_pairs(g, cells);
  const int a11 = *find_action(g, "11");
  const int a22 = *find_action(g, "22");
  const int a12 = *find_action(g, "12");
  const NeighborPair* p = nr.find(a11, a22);
  REQUIRE(p != nullptr);
  CHECK(std::find(p->neighborhood.begin(), p->neighborhood.end(), a12) != p->neighborhood.end());
  // independent check through the literal all-competitors LP definition
  CHECK(oracles::literal_containment(g, a11, a22, a12));
}

TEST_CASE("neighborhood sets match the literal containment definition") {
  std::vector<Game> games = {build_dueling_game(2), build_dueling_game(3), build_mab_game(2),
                             build_mab_game(3)};
  for (const Game& g : games) {
    const CellReport cells = cell_decomposition(g);
    const NeighborReport nr = neighbor_pairs(g, cells);
    for (const auto& p : nr.pairs) {
      for (int k = 0; k < g.num_actions(); ++k) {
        const bool reported =
            std::find(p.neighborhood.begin(), p.neighborhood.end(), k) != p.neighborhood.end();
        CAPTURE(g.name);
        CAPTURE(p.i);
        CAPTURE(p.j);
        CAPTURE(k);
        CHECK(reported == oracles::literal_containment(g, p.i, p.j, k));
      }
      // i and j always belong to their own neighborhood
      CHECK(std::find(p.neighborhood.begin(), p.neighborhood.end(), p.i) != p.neighborhood.end());
      CHECK(std::find(p.neighborhood.begin(), p.neighborhood.end(), p.j) != p.neighborhood.end());
    }
  }
}

TEST_CASE("witnesses re-validate exactly") {
  for (const Game& g : property_games()) {
    const CellReport cells = cell_decomposition(g);
    for (int i = 0; i < g.num_actions(); ++i) {
      const auto& c = cells.cells[static_cast<std::size_t>(i)];
      if (!c.witness) continue;
      CHECK(oracles::satisfies(cell_constraints(g, i), *c.witness));
    }
    const NeighborReport nr = neighbor_pairs(g, cells);
    for (const auto& p : nr.pairs) {
      CHECK(oracles::satisfies(intersection_constraints(g, p.i, p.j), p.witness));
      CHECK(dot<Rational>(g.gain_row(p.i), p.witness) == dot<Rational>(g.gain_row(p.j), p.witness));
    }
  }
}

TEST_CASE("cover property on 200 seeded rational points per game") {
  for (const Game& g : property_games()) {
    const CellReport cells = cell_decomposition(g);
    SplitMix64 rng(0xC0FFEE ^ static_cast<std::uint64_t>(g.num_actions() * 131 + g.num_outcomes()));
    for (int trial = 0; trial < 200; ++trial) {
      const RatVector q = oracles::random_simplex_point(rng, g.num_outcomes());
      const auto best = oracles::argmax_actions(g, q);
      CAPTURE(g.name);
      CAPTURE(trial);
      // the argmax action's cell contains the point
      CHECK(oracles::satisfies(cell_constraints(g, best.front()), q));
      if (best.size() == 1)
        CHECK(cells.cells[static_cast<std::size_t>(best.front())].status ==
              CellStatus::StronglyPareto);
    }
  }
}

TEST_CASE("geometry reports are deterministic") {
  const Game g = build_dueling_game(3);
  const CellReport c1 = cell_decomposition(g);
  const CellReport c2 = cell_decomposition(g);
  CHECK(cell_report_json(g, c1) == cell_report_json(g, c2));
  const NeighborReport n1 = neighbor_pairs(g, c1);
  const NeighborReport n2 = neighbor_pairs(g, c2);
  CHECK(neighbor_report_json(g, n1) == neighbor_report_json(g, n2));
}

TEST_CASE("dueling K=2 snapshot: self-duels strongly pareto, duel degenerate") {
  const Game g = build_dueling_game(2);
  const CellReport cells = cell_decomposition(g);
  CHECK(cells.cells[static_cast<std::size_t>(*find_action(g, "11"))].status ==
        CellStatus::StronglyPareto);
  CHECK(cells.cells[static_cast<std::size_t>(*find_action(g, "22"))].status ==
        CellStatus::StronglyPareto);
  const auto& duel = cells.cells[static_cast<std::size_t>(*find_action(g, "12"))];
  CHECK(duel.status == CellStatus::Degenerate);
  CHECK(duel.dim == 2);  // the tie plane, one short of full dimension
}
