#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <thread>
#include <variant>
#include <vector>

#include "pm/game.hpp"

namespace pm {

/// SplitMix64: the counter-based 64-bit generator used everywhere in the
/// simulator. State advances by a fixed odd constant, so the i-th output is a
/// pure function of (seed, i) and substreams can be split without iterating.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0,1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Exactly uniform integer in [0, n) via rejection sampling.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t bound = n * (~std::uint64_t{0} / n);
    std::uint64_t u;
    do {
      u = next();
    } while (u >= bound);
    return u % n;
  }

 private:
  std::uint64_t state_;
};

/// Substream derivation: stream k of `seed` starts at the k-th SplitMix64
/// output of `seed` itself. run() uses streams 0 (environment) and 1
/// (policy); batch() seeds run r with stream r of the master seed.
inline std::uint64_t split_stream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Outcomes drawn i.i.d. from a fixed distribution over the outcome columns.
struct StochasticEnv {
  RatVector distribution;
};

/// Outcomes replayed from a fixed script; the script repeats if the horizon
/// exceeds its length.
struct ScriptedEnv {
  std::vector<int> outcomes;
};

/// Dueling games only: each arm's binary gain is an independent Bernoulli
/// draw per round, which together select one of the 2^K outcome columns.
struct DuelingBernoulliEnv {
  std::vector<Rational> means;
};

using Environment = std::variant<StochasticEnv, ScriptedEnv, DuelingBernoulliEnv>;

/// A learner. It sees the game up front and, per round, only its own action
/// and the resulting feedback symbol; outcomes and gains stay hidden.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual void init(const Game& game, std::uint64_t seed) = 0;
  virtual int choose(int round) = 0;
  virtual void observe(int action, int symbol) = 0;
};

/// Baseline: a fresh uniformly random action each round, feedback ignored.
class UniformPolicy final : public Policy {
 public:
  void init(const Game& game, std::uint64_t seed) override {
    num_actions_ = game.num_actions();
    rng_ = std::make_unique<SplitMix64>(seed);
  }
  int choose(int) override { return static_cast<int>(rng_->next_below(num_actions_)); }
  void observe(int, int) override {}

 private:
  std::uint64_t num_actions_ = 1;
  std::unique_ptr<SplitMix64> rng_;
};

/// Exponential-weights learner over the K arms of a dueling game. Each round
/// two arms are sampled independently from the gamma-smoothed weight
/// distribution and played as an unordered pair. A win (■) credits the pair's
/// first arm with estimated gain 1/(2 p_first), a loss (□) credits the second
/// with 1/(2 p_second), a tie credits neither; weights update multiplicatively
/// with learning rate gamma/K. Internals are floating-point; the simulator's
/// regret accounting stays exact regardless.
class DuelingExp3Policy final : public Policy {
 public:
  explicit DuelingExp3Policy(double gamma) : gamma_(gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0))
      throw std::invalid_argument("gamma must lie in (0,1]");
  }

  void init(const Game& game, std::uint64_t seed) override {
    auto arms = dueling_arm_count(game);
    if (!arms) throw std::invalid_argument("dueling-exp3 needs a dueling game");
    arms_ = *arms;
    weights_.assign(static_cast<std::size_t>(arms_), 1.0);
    probs_.assign(static_cast<std::size_t>(arms_), 1.0 / arms_);
    rng_ = std::make_unique<SplitMix64>(seed);
    win_symbol_ = 2;   // alphabet order □, ◇, ■
    loss_symbol_ = 0;
  }

  int choose(int) override {
    refresh_probs();
    const int a = sample_arm();
    const int b = sample_arm();
    last_ = a <= b ? ActionPair{a + 1, b + 1} : ActionPair{b + 1, a + 1};
    return dueling_pair_index(last_, arms_);
  }

  void observe(int, int symbol) override {
    int credited = -1;
    if (symbol == win_symbol_)
      credited = last_.first - 1;
    else if (symbol == loss_symbol_)
      credited = last_.second - 1;
    if (credited < 0) return;
    const double p = probs_[static_cast<std::size_t>(credited)];
    const double estimate = 1.0 / (2.0 * p);
    weights_[static_cast<std::size_t>(credited)] *= std::exp(gamma_ / arms_ * estimate);
    if (weights_[static_cast<std::size_t>(credited)] > 1e100) {
      const double top = weights_[static_cast<std::size_t>(credited)];
      for (double& w : weights_) w /= top;
    }
  }

  /// Current smoothed sampling distribution over arms (diagnostics).
  const std::vector<double>& arm_probabilities() const { return probs_; }
  const std::vector<double>& arm_weights() const { return weights_; }

 private:
  void refresh_probs() {
    double total = 0.0;
    for (double w : weights_) total += w;
    for (std::size_t k = 0; k < weights_.size(); ++k)
      probs_[k] = (1.0 - gamma_) * weights_[k] / total + gamma_ / arms_;
  }

  int sample_arm() {
    const double u = rng_->next_unit();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < probs_.size(); ++k) {
      acc += probs_[k];
      if (u < acc) return static_cast<int>(k);
    }
    return arms_ - 1;
  }

  double gamma_;
  int arms_ = 0;
  int win_symbol_ = 2;
  int loss_symbol_ = 0;
  std::vector<double> weights_;
  std::vector<double> probs_;
  ActionPair last_{1, 1};
  std::unique_ptr<SplitMix64> rng_;
};

struct TraceStep {
  int action = 0;
  int outcome = 0;
  int symbol = 0;
};

/// Full record of one run. Regret is computed against the best fixed action
/// on the realized outcome sequence, in exact arithmetic.
struct RegretTrace {
  int horizon = 0;
  std::vector<TraceStep> steps;
  Rational cumulative_gain;
  Rational best_fixed_gain;
  Rational regret;     // best_fixed_gain - cumulative_gain
  int best_action = 0; // lowest-index argmax
};

namespace detail {

/// Compares u/2^64 < threshold exactly.
inline bool unit_below(std::uint64_t u, const Rational& threshold) {
  static const Integer two64 = Integer(1) << 64;
  return Integer(u) * denominator(threshold) < numerator(threshold) * two64;
}

class OutcomeSampler {
 public:
  OutcomeSampler(const Game& g, const Environment& env, std::uint64_t seed) : rng_(seed) {
    if (const auto* st = std::get_if<StochasticEnv>(&env)) {
      if (st->distribution.size() != g.num_outcomes())
        throw std::invalid_argument("distribution length must match the outcome count");
      Rational total(0);
      for (Eigen::Index i = 0; i < st->distribution.size(); ++i) {
        if (st->distribution(i) < 0)
          throw std::invalid_argument("distribution entries must be nonnegative");
        total += st->distribution(i);
        cumulative_.push_back(total);
      }
      if (total != 1) throw std::invalid_argument("distribution must sum to 1");
      mode_ = Mode::Stochastic;
    } else if (const auto* sc = std::get_if<ScriptedEnv>(&env)) {
      if (sc->outcomes.empty()) throw std::invalid_argument("script must not be empty");
      for (int o : sc->outcomes)
        if (o < 0 || o >= g.num_outcomes())
          throw std::invalid_argument("script outcome index out of range");
      script_ = sc->outcomes;
      mode_ = Mode::Scripted;
    } else {
      const auto& db = std::get<DuelingBernoulliEnv>(env);
      auto arms = dueling_arm_count(g);
      if (!arms || static_cast<std::size_t>(*arms) != db.means.size())
        throw std::invalid_argument("bernoulli means need a dueling game with matching arm count");
      for (const auto& p : db.means)
        if (p < 0 || p > 1) throw std::invalid_argument("bernoulli means must lie in [0,1]");
      means_ = db.means;
      arms_ = *arms;
      mode_ = Mode::Dueling;
    }
  }

  int draw(int round) {
    switch (mode_) {
      case Mode::Stochastic: {
        const std::uint64_t u = rng_.next();
        for (std::size_t j = 0; j < cumulative_.size(); ++j)
          if (unit_below(u, cumulative_[j])) return static_cast<int>(j);
        return static_cast<int>(cumulative_.size()) - 1;
      }
      case Mode::Scripted:
        return script_[static_cast<std::size_t>((round - 1) % static_cast<int>(script_.size()))];
      case Mode::Dueling: {
        int outcome = 0;
        for (int k = 0; k < arms_; ++k) {
          const std::uint64_t u = rng_.next();
          outcome <<= 1;
          if (unit_below(u, means_[static_cast<std::size_t>(k)])) outcome |= 1;
        }
        return outcome;
      }
    }
    return 0;
  }

 private:
  enum class Mode { Stochastic, Scripted, Dueling } mode_ = Mode::Scripted;
  SplitMix64 rng_;
  std::vector<Rational> cumulative_;
  std::vector<int> script_;
  std::vector<Rational> means_;
  int arms_ = 0;
};

}  // namespace detail

/// Plays `horizon` rounds. Each round the environment draws an outcome and
/// the policy an action, simultaneously; the policy then sees only the
/// feedback symbol. Deterministic for a fixed (game, env, policy, horizon,
/// seed) tuple.
inline RegretTrace run(const Game& g, const Environment& env, Policy& policy, int horizon,
                       std::uint64_t seed) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  detail::OutcomeSampler sampler(g, env, split_stream(seed, 0));
  policy.init(g, split_stream(seed, 1));

  RegretTrace trace;
  trace.horizon = horizon;
  trace.steps.reserve(static_cast<std::size_t>(horizon));
  std::vector<long> outcome_counts(static_cast<std::size_t>(g.num_outcomes()), 0);
  Rational cumulative(0);
  for (int t = 1; t <= horizon; ++t) {
    const int action = policy.choose(t);
    if (action < 0 || action >= g.num_actions())
      throw std::logic_error("policy chose an action outside the game");
    const int outcome = sampler.draw(t);
    const int symbol = g.feedback(action, outcome);
    policy.observe(action, symbol);
    trace.steps.push_back({action, outcome, symbol});
    cumulative += g.gain(action, outcome);
    ++outcome_counts[static_cast<std::size_t>(outcome)];
  }
  trace.cumulative_gain = cumulative;
  trace.best_fixed_gain = Rational(0);
  trace.best_action = 0;
  for (int i = 0; i < g.num_actions(); ++i) {
    Rational total(0);
    for (int o = 0; o < g.num_outcomes(); ++o)
      if (outcome_counts[static_cast<std::size_t>(o)] != 0)
        total += g.gain(i, o) * Rational(outcome_counts[static_cast<std::size_t>(o)]);
    if (i == 0 || total > trace.best_fixed_gain) {
      trace.best_fixed_gain = total;
      trace.best_action = i;
    }
  }
  trace.regret = trace.best_fixed_gain - trace.cumulative_gain;
  return trace;
}

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

/// Batch statistics over independent replications. Per-run regrets and their
/// mean are exact; the standard error is reported as a double.
struct BatchSummary {
  std::vector<RegretTrace> traces;
  std::vector<Rational> per_run_regret;
  Rational mean_regret;
  double std_error = 0.0;
};

/// Runs `runs` independent replications; run r uses seed stream r of the
/// master seed, so the result set does not depend on the worker count.
inline BatchSummary batch(const Game& g, const Environment& env, const PolicyFactory& make_policy,
                          int horizon, int runs, std::uint64_t seed, int jobs = 1) {
  if (runs < 1) throw std::invalid_argument("runs must be at least 1");
  BatchSummary summary;
  summary.traces.resize(static_cast<std::size_t>(runs));

  const int workers = std::max(1, std::min(jobs, runs));
  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= runs) return;
      auto policy = make_policy();
      summary.traces[static_cast<std::size_t>(r)] =
          run(g, env, *policy, horizon, split_stream(seed, static_cast<std::uint64_t>(r)));
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  summary.per_run_regret.reserve(static_cast<std::size_t>(runs));
  Rational total(0);
  for (const auto& t : summary.traces) {
    summary.per_run_regret.push_back(t.regret);
    total += t.regret;
  }
  summary.mean_regret = total / Rational(runs);
  if (runs > 1) {
    Rational var(0);
    for (const auto& x : summary.per_run_regret) {
      const Rational d = x - summary.mean_regret;
      var += d * d;
    }
    var /= Rational(runs - 1);
    summary.std_error = std::sqrt(static_cast<double>(var) / runs);
  }
  return summary;
}

}  // namespace pm
