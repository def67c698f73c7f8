#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pm/simulate.hpp"

using namespace pm;

namespace {

/// Plays one fixed action forever.
class FixedPolicy final : public Policy {
 public:
  explicit FixedPolicy(int action) : action_(action) {}
  void init(const Game&, std::uint64_t) override {}
  int choose(int) override { return action_; }
  void observe(int, int) override {}

 private:
  int action_;
};

/// Tries to reconstruct the hidden outcome from the feedback symbol; the
/// per-round guesses are compared with the realized outcomes afterwards.
class GuessingPolicy final : public Policy {
 public:
  void init(const Game& g, std::uint64_t) override {
    num_outcomes_ = g.num_outcomes();
    guesses.clear();
  }
  int choose(int) override { return 0; }
  void observe(int, int symbol) override {
    // the rule can only key on the symbol: tie -> all-zeros outcome, else
    // the last outcome column
    guesses.push_back(symbol == 1 ? 0 : num_outcomes_ - 1);
  }
  std::vector<int> guesses;

 private:
  int num_outcomes_ = 1;
};

Rational recompute_regret(const Game& g, const RegretTrace& trace) {
  Rational mine(0);
  RatVector totals = RatVector::Zero(g.num_actions());
  for (const auto& step : trace.steps) {
    mine += g.gain(step.action, step.outcome);
    for (int i = 0; i < g.num_actions(); ++i) totals(i) += g.gain(i, step.outcome);
  }
  Rational best = totals(0);
  for (int i = 1; i < g.num_actions(); ++i) best = std::max(best, totals(i));
  return best - mine;
}

Environment three_arm_env() {
  return DuelingBernoulliEnv{{parse_rational("0.9"), parse_rational("0.5"), parse_rational("0.5")}};
}

}  // namespace

TEST_CASE("scripted environment and the best fixed action give zero regret") {
  const Game g = build_mab_game(2);
  const ScriptedEnv script{{2, 3, 2, 2, 1}};  // arm 1 gains on 10,11; best fixed = arm 1
  FixedPolicy best(0);
  const RegretTrace trace = run(g, script, best, 5, 1);
  CHECK(trace.regret == 0);
  CHECK(trace.best_action == 0);
  CHECK(trace.cumulative_gain == 4);
  // the script repeats beyond its length
  FixedPolicy again(0);
  const RegretTrace longer = run(g, script, again, 10, 1);
  CHECK(longer.steps[5].outcome == 2);
}

TEST_CASE("single-round regret is the gap to the best action at J_1") {
  const Game g = build_dueling_game(2);
  const ScriptedEnv script{{2}};  // outcome "10": arm 1 gains
  FixedPolicy pol(*find_action(g, "22"));
  const RegretTrace trace = run(g, script, pol, 1, 9);
  // best is (1,1) with gain 1; (2,2) earns 0
  CHECK(trace.regret == 1);
  FixedPolicy pol12(*find_action(g, "12"));
  const RegretTrace t2 = run(g, script, pol12, 1, 9);
  CHECK(t2.regret == make_rational(1, 2));
}

TEST_CASE("replay determinism and seed sensitivity") {
  const Game g = build_dueling_game(3);
  const Environment env = three_arm_env();
  UniformPolicy p1, p2, p3;
  const RegretTrace a = run(g, env, p1, 500, 42);
  const RegretTrace b = run(g, env, p2, 500, 42);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t t = 0; t < a.steps.size(); ++t) {
    CHECK(a.steps[t].action == b.steps[t].action);
    CHECK(a.steps[t].outcome == b.steps[t].outcome);
    CHECK(a.steps[t].symbol == b.steps[t].symbol);
  }
  CHECK(a.regret == b.regret);
  const RegretTrace c = run(g, env, p3, 500, 43);
  bool differs = c.regret != a.regret;
  for (std::size_t t = 0; t < a.steps.size() && !differs; ++t)
    differs = c.steps[t].action != a.steps[t].action || c.steps[t].outcome != a.steps[t].outcome;
  CHECK(differs);
}

TEST_CASE("uniform policy: near-uniform frequencies, blind to feedback") {
  const Game g = build_dueling_game(2);
  UniformPolicy pol;
  const RegretTrace trace = run(g, StochasticEnv{RatVector::Ones(4) / Rational(4)}, pol, 9000, 5);
  std::vector<int> counts(3, 0);
  for (const auto& s : trace.steps) ++counts[static_cast<std::size_t>(s.action)];
  for (int c : counts) CHECK(std::abs(c - 3000) < 300);

  // identical action sequence under a completely different environment
  UniformPolicy pol2;
  const RegretTrace other = run(g, ScriptedEnv{{0}}, pol2, 9000, 5);
  for (std::size_t t = 0; t < trace.steps.size(); ++t)
    CHECK(trace.steps[t].action == other.steps[t].action);
}

TEST_CASE("exact accounting: recomputation from the log matches the accumulators") {
  const Game g = build_dueling_game(3);
  const Environment env = three_arm_env();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    UniformPolicy uni;
    const RegretTrace t1 = run(g, env, uni, 2000, seed);
    CHECK(recompute_regret(g, t1) == t1.regret);
    DuelingExp3Policy dexp(0.2);
    const RegretTrace t2 = run(g, env, dexp, 2000, seed);
    CHECK(recompute_regret(g, t2) == t2.regret);
  }
}

TEST_CASE("information hiding: outcome guesses from symbols stay at chance") {
  // uniform mix of all-zeros and all-ones outcomes: every action's feedback
  // is the tie symbol, so rounds are indistinguishable
  const Game g = build_dueling_game(2);
  RatVector q = RatVector::Zero(4);
  q(0) = make_rational(1, 2);
  q(3) = make_rational(1, 2);
  GuessingPolicy guesser;
  const RegretTrace trace = run(g, StochasticEnv{q}, guesser, 2000, 11);
  REQUIRE(guesser.guesses.size() == trace.steps.size());
  int hits = 0;
  for (std::size_t t = 0; t < trace.steps.size(); ++t)
    if (guesser.guesses[t] == trace.steps[t].outcome) ++hits;
  const double rate = static_cast<double>(hits) / 2000.0;
  CHECK(rate > 0.4);
  CHECK(rate < 0.6);
}

TEST_CASE("environment validation") {
  const Game g = build_dueling_game(2);
  UniformPolicy pol;
  CHECK_THROWS_AS(run(g, StochasticEnv{RatVector::Ones(3)}, pol, 10, 0), std::invalid_argument);
  RatVector not_normalized = RatVector::Ones(4);
  CHECK_THROWS_AS(run(g, StochasticEnv{not_normalized}, pol, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(run(g, ScriptedEnv{{4}}, pol, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(run(g, ScriptedEnv{{}}, pol, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(run(g, DuelingBernoulliEnv{{Rational(1)}}, pol, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(run(build_mab_game(2), DuelingBernoulliEnv{{Rational(1), Rational(0)}}, pol, 10, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(run(g, ScriptedEnv{{0}}, pol, 0, 0), std::invalid_argument);
}

TEST_CASE("bernoulli arms drive the outcome bits") {
  const Game g = build_dueling_game(2);
  UniformPolicy pol;
  const RegretTrace det = run(g, DuelingBernoulliEnv{{Rational(1), Rational(0)}}, pol, 50, 3);
  for (const auto& s : det.steps) CHECK(s.outcome == 2);  // always "10"
}

TEST_CASE("uniform mean regret matches the analytic value") {
  // expected gains per action: (1,1) 9/10; (1,2),(1,3) 7/10; rest 1/2.
  // uniform average 19/30 versus best 27/30 leaves 4/15 per round.
  const Game g = build_dueling_game(3);
  const BatchSummary summary = batch(
      g, three_arm_env(), [] { return std::make_unique<UniformPolicy>(); }, 10000, 100, 7, 4);
  const double expected = 10000.0 * 4.0 / 15.0;
  const double mean = static_cast<double>(summary.mean_regret);
  CAPTURE(mean);
  CAPTURE(summary.std_error);
  CHECK(std::abs(mean - expected) < 3.0 * summary.std_error);
  for (std::size_t r = 0; r < summary.traces.size(); ++r)
    CHECK(recompute_regret(g, summary.traces[r]) == summary.per_run_regret[r]);
}

TEST_CASE("batch basics: single run, determinism, worker independence") {
  const Game g = build_dueling_game(2);
  const Environment env = DuelingBernoulliEnv{{parse_rational("0.8"), parse_rational("0.4")}};
  auto factory = [] { return std::make_unique<UniformPolicy>(); };
  const BatchSummary one = batch(g, env, factory, 200, 1, 77);
  UniformPolicy pol;
  const RegretTrace direct = run(g, env, pol, 200, split_stream(77, 0));
  CHECK(one.mean_regret == direct.regret);
  CHECK(one.std_error == 0.0);

  const BatchSummary serial = batch(g, env, factory, 300, 8, 123, 1);
  const BatchSummary threaded = batch(g, env, factory, 300, 8, 123, 4);
  CHECK(serial.mean_regret == threaded.mean_regret);
  for (int r = 0; r < 8; ++r)
    CHECK(serial.per_run_regret[static_cast<std::size_t>(r)] ==
          threaded.per_run_regret[static_cast<std::size_t>(r)]);
}

TEST_CASE("dueling exp3: full smoothing samples arms exactly uniformly") {
  DuelingExp3Policy pol(1.0);
  pol.init(build_dueling_game(3), 99);
  pol.choose(1);
  for (double p : pol.arm_probabilities()) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(DuelingExp3Policy(0.0), std::invalid_argument);
  CHECK_THROWS_AS(DuelingExp3Policy(1.5), std::invalid_argument);
  DuelingExp3Policy wrong(0.5);
  CHECK_THROWS_AS(wrong.init(build_mab_game(2), 0), std::invalid_argument);
}

TEST_CASE("dueling exp3 concentrates on a dominant arm") {
  // arm 1 always wins every duel it joins, so only its weight ever grows and
  // p_1 climbs monotonically toward 1 - gamma*(K-1)/K
  const Game g = build_dueling_game(3);
  const double gamma = 0.3;
  DuelingExp3Policy pol(gamma);
  pol.init(g, 17);
  const int all_on_arm1 = 4;  // outcome "100"
  std::vector<double> checkpoints;
  for (int t = 1; t <= 10000; ++t) {
    const int action = pol.choose(t);
    pol.observe(action, g.feedback(action, all_on_arm1));
    if (t == 10 || t == 100 || t == 10000) checkpoints.push_back(pol.arm_probabilities()[0]);
  }
  REQUIRE(checkpoints.size() == 3);
  CHECK(checkpoints[0] > 1.0 / 3.0);  // already pulling ahead
  CHECK(checkpoints[1] > checkpoints[0] - 1e-9);
  CHECK(checkpoints[2] > checkpoints[1] - 1e-9);
  const double limit = 1.0 - gamma * 2.0 / 3.0;
  CHECK(std::abs(checkpoints[2] - limit) < 0.05);
}

TEST_CASE("dueling exp3 stays balanced in a symmetric environment") {
  const Game g = build_dueling_game(3);
  const Environment env = DuelingBernoulliEnv{
      {make_rational(1, 2), make_rational(1, 2), make_rational(1, 2)}};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    DuelingExp3Policy pol(0.2);
    run(g, env, pol, 4000, seed);
    const auto& w = pol.arm_weights();
    const double hi = *std::max_element(w.begin(), w.end());
    const double lo = *std::min_element(w.begin(), w.end());
    CAPTURE(seed);
    CHECK(hi / lo < 25.0);
  }
}

TEST_CASE("dueling exp3 beats uniform on a separated instance") {
  const Game g = build_dueling_game(3);
  const Environment env = three_arm_env();
  auto uniform = [] { return std::make_unique<UniformPolicy>(); };
  auto dexp3 = [] { return std::make_unique<DuelingExp3Policy>(0.1); };
  const BatchSummary u = batch(g, env, uniform, 4000, 10, 2024, 4);
  const BatchSummary d = batch(g, env, dexp3, 4000, 10, 2024, 4);
  CHECK(static_cast<double>(d.mean_regret) < static_cast<double>(u.mean_regret));
}
