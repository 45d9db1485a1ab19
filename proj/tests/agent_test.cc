#include "perimeter/agent.h"

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "perimeter/errors.h"
#include "perimeter/oracle.h"
#include "test_support.h"

namespace perimeter {
namespace {

EnvConfig TriangleConfig() {
  EnvConfig config;
  config.heatmap = HeatMap(4, 4, 1);
  config.vertices = VertexSet({{0, 0, 0}, {1, 4, 0}, {2, 0, 4}});
  config.lambda = 0;
  config.beta = 16;
  return config;
}

AgentConfig TriangleAgent(std::uint64_t seed) {
  AgentConfig agent;
  agent.alpha = 0.5;
  agent.epsilon = 0.2;
  agent.horizon = 6;
  agent.episodes = 500;
  agent.seed = seed;
  agent.initial_state = GameState();
  return agent;
}

TEST(QUpdateTest, HandComputedValues) {
  const GameState s, next({0});
  const std::vector<Action> legal_next = {Action::Add(1), Action::Remove(0)};
  QTable table = QTable::Stationary(2);
  EXPECT_EQ(QUpdate(table, s, Action::Add(0), 1.0, next, legal_next, 0.5), 0.5);

  QTable alpha_one = QTable::Stationary(2);
  alpha_one.Set(s, Action::Add(0), 123.0);
  alpha_one.Set(next, Action::Add(1), 3.0);
  EXPECT_EQ(QUpdate(alpha_one, s, Action::Add(0), 2.0, next, legal_next, 1.0), 5.0);

  QTable quarter = QTable::Stationary(2);
  quarter.Set(s, Action::Add(0), 2.0);
  quarter.Set(next, Action::Remove(0), 4.0);
  EXPECT_EQ(QUpdate(quarter, s, Action::Add(0), 0.0, next, legal_next, 0.25), 2.5);
  EXPECT_EQ(quarter.Get(s, Action::Add(0)), 2.5);
  EXPECT_EQ(quarter.Get(next, Action::Remove(0)), 4.0);
}

TEST(QUpdateTest, ConvexCombinationOnRandomInputs) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> value(-100.0, 100.0), alpha(1e-6, 1.0);
  const GameState s({1}), next({0, 1});
  const std::vector<Action> legal_next = {Action::Add(2), Action::Remove(0), Action::Remove(1)};
  for (int i = 0; i < 2000; ++i) {
    QTable table = QTable::Stationary(3);
    const double q = value(rng), r = value(rng), a = alpha(rng);
    double max_next = -1e300;
    for (const Action& act : legal_next) {
      const double v = value(rng);
      table.Set(next, act, v);
      max_next = std::max(max_next, v);
    }
    table.Set(s, Action::Add(0), q);
    const double got = QUpdate(table, s, Action::Add(0), r, next, legal_next, a);
    const double expected = (1 - a) * q + a * (r + max_next);
    EXPECT_LE(std::abs(got - expected), 1e-12 * std::max(1.0, std::abs(expected)));
    EXPECT_LE(std::abs(got - q), a * std::abs(r + max_next - q) * (1 + 1e-12) + 1e-300);
  }
}

TEST(QTableTest, DefaultsAndLegality) {
  QTable table = QTable::Stationary(3);
  EXPECT_EQ(table.Get(GameState({1}), Action::Add(0)), 0.0);
  EXPECT_EQ(table.size(), 0u);
  EXPECT_THROW(table.Set(GameState({1}), Action::Add(1), 1.0), InvariantError);
  EXPECT_THROW(table.Set(GameState({1}), Action::Remove(0), 1.0), InvariantError);
  table.Set(GameState({1}), Action::Remove(1), 1.0);
  table.Set(GameState({1}), Action::Remove(1), 2.0);
  EXPECT_EQ(table.size(), 1u);
  EXPECT_EQ(table.MaxValue(GameState(), {}), 0.0);

  QTable staged = QTable::StepIndexed(3, 4);
  EXPECT_EQ(staged.num_stages(), 4);
  EXPECT_THROW(staged.Set(GameState(), Action::Add(0), 1.0, 4), InvariantError);
  staged.Set(GameState(), Action::Add(0), 1.0, 3);
  EXPECT_EQ(staged.Get(GameState(), Action::Add(0), 3), 1.0);
  EXPECT_EQ(staged.Get(GameState(), Action::Add(0), 2), 0.0);
  // The stage past the horizon reads as zero.
  EXPECT_EQ(staged.MaxValue(GameState(), std::vector<Action>{Action::Add(0)}, 4), 0.0);
}

TEST(QTableTest, StepIndexedUpdateBootstrapsFromNextStage) {
  QTable table = QTable::StepIndexed(2, 3);
  const GameState s, next({0});
  const std::vector<Action> legal_next = {Action::Add(1), Action::Remove(0)};
  table.Set(next, Action::Add(1), 10.0, 1);
  table.Set(next, Action::Add(1), 99.0, 0);
  EXPECT_EQ(QUpdate(table, s, Action::Add(0), 0.0, next, legal_next, 1.0, 0), 10.0);
  // Last stage: nothing left to bootstrap from.
  EXPECT_EQ(QUpdate(table, s, Action::Add(0), 1.5, next, legal_next, 1.0, 2), 1.5);
}

TEST(SelectActionTest, GreedyAndTies) {
  Rng rng(1);
  QTable table = QTable::Stationary(2);
  const GameState s;
  const std::vector<Action> legal = {Action::Add(0), Action::Add(1)};
  table.Set(s, Action::Add(0), 1.0);
  table.Set(s, Action::Add(1), 2.0);
  EXPECT_EQ(SelectAction(table, s, legal, 0.0, rng), Action::Add(1));
  const QTable zero = QTable::Stationary(2);
  EXPECT_EQ(SelectAction(zero, s, legal, 0.0, rng), Action::Add(0));
  const std::vector<Action> mixed = {Action::Add(1), Action::Remove(0)};
  EXPECT_EQ(SelectAction(zero, GameState({0}), mixed, 0.0, rng), Action::Add(1));
  EXPECT_THROW(SelectAction(zero, s, {}, 0.0, rng), InvariantError);
}

TEST(SelectActionTest, FullExplorationIsUniform) {
  Rng rng(2024);
  const QTable table = QTable::Stationary(4);
  const std::vector<Action> legal = {Action::Add(0), Action::Add(1), Action::Add(2),
                                     Action::Add(3)};
  std::map<Action, int> counts;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[SelectAction(table, GameState(), legal, 1.0, rng)];
  const double sigma = std::sqrt(draws * 0.25 * 0.75);
  for (const Action& a : legal) EXPECT_LE(std::abs(counts[a] - draws * 0.25), 4 * sigma);
}

TEST(RngTest, HelpersStayInRange) {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = UnitInterval(rng);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(UniformIndex(rng, 7), 7u);
  }
  EXPECT_THROW(UniformIndex(rng, 0), InvariantError);
}

TEST(TrainTest, ZeroEpisodes) {
  const PerimeterEnv env(TriangleConfig());
  AgentConfig agent = TriangleAgent(1);
  agent.episodes = 0;
  const TrainResult result = Train(env, agent);
  EXPECT_EQ(result.table.size(), 0u);
  EXPECT_TRUE(result.log.empty());
}

TEST(TrainTest, TriangleReachesOracleOptimum) {
  const PerimeterEnv env(TriangleConfig());
  const OracleResult oracle = EnumerateOptimal(env);
  ASSERT_EQ(oracle.best_state, GameState({0, 1, 2}));
  ASSERT_EQ(oracle.evaluated, 8u);
  for (std::uint64_t seed : {1, 2, 3, 7}) {
    const AgentConfig agent = TriangleAgent(seed);
    const TrainResult result = Train(env, agent);
    const Rollout rollout = GreedyRollout(result.table, env, GameState(), agent.horizon);
    EXPECT_EQ(rollout.best_state, GameState({0, 1, 2})) << "seed " << seed;
    EXPECT_EQ(rollout.best_value, oracle.best_value);
  }
}

TEST(TrainTest, SameSeedSameOutputs) {
  const PerimeterEnv env(TriangleConfig());
  const TrainResult a = Train(env, TriangleAgent(7));
  const TrainResult b = Train(env, TriangleAgent(7));
  EXPECT_EQ(a.log, b.log);
  EXPECT_TRUE(a.table == b.table);
  std::ostringstream ca, cb;
  WriteTrainingLogCsv(ca, a.log);
  WriteTrainingLogCsv(cb, b.log);
  EXPECT_EQ(ca.str(), cb.str());
}

TEST(TrainTest, LogShape) {
  const PerimeterEnv env(TriangleConfig());
  const TrainResult result = Train(env, TriangleAgent(3));
  ASSERT_EQ(result.log.size(), 500u);
  for (std::size_t i = 0; i < result.log.size(); ++i) {
    EXPECT_EQ(result.log[i].episode, static_cast<int>(i));
    if (i > 0) EXPECT_GE(result.log[i].best_value, result.log[i - 1].best_value);
  }
  std::ostringstream csv;
  WriteTrainingLogCsv(csv, result.log);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "episode,return,best_value,greedy_value,table_size");
  for (const auto& e : result.table.Entries()) {
    EXPECT_TRUE(env.IsLegal(e.state, e.action));
  }
}

TEST(TrainTest, UnsetInitialStateIsSampledOnceAndPinned) {
  const PerimeterEnv env(TriangleConfig());
  AgentConfig agent = TriangleAgent(11);
  agent.initial_state.reset();
  agent.episodes = 3;
  const TrainResult result = Train(env, agent);
  Rng rng(11);
  EXPECT_EQ(result.start, SampleInitialState(3, rng));
}

TEST(TrainTest, ConfigValidation) {
  const PerimeterEnv env(TriangleConfig());
  AgentConfig agent = TriangleAgent(1);
  agent.alpha = 0.0;
  EXPECT_THROW(Train(env, agent), InputError);
  agent = TriangleAgent(1);
  agent.epsilon = 1.5;
  EXPECT_THROW(Train(env, agent), InputError);
  agent = TriangleAgent(1);
  agent.horizon = 0;
  EXPECT_THROW(Train(env, agent), InputError);
  agent = TriangleAgent(1);
  agent.initial_state = GameState({5});
  EXPECT_THROW(Train(env, agent), InputError);
  const AgentConfig defaults = AgentConfig::Defaults(9, 4);
  EXPECT_EQ(defaults.horizon, 18);
  EXPECT_EQ(defaults.episodes, 18000);
  EXPECT_EQ(defaults.alpha, 0.5);
  EXPECT_EQ(defaults.epsilon, 0.2);
}

TEST(RolloutTest, ZeroHorizonAndZeroTable) {
  const PerimeterEnv env(TriangleConfig());
  const QTable table = QTable::Stationary(3);
  const Rollout none = GreedyRollout(table, env, GameState({1}), 0);
  EXPECT_EQ(none.best_state, GameState({1}));
  EXPECT_EQ(none.states.size(), 1u);

  // All-zero Q: the tie rule picks the smallest action every step.
  const Rollout walk = GreedyRollout(table, env, GameState(), 4);
  EXPECT_EQ(walk.actions, (std::vector<Action>{Action::Add(0), Action::Add(1), Action::Add(2),
                                               Action::Remove(0)}));
  EXPECT_EQ(walk.best_state, GameState({0, 1, 2}));
}

// With no discount and rewards that telescope, Q(s, a) = C - V(s) satisfies
// the stationary update for every action, so a stationary table has no
// reason to prefer any action. The step-indexed table does not have this
// fixed point.
TEST(StationaryQTest, ConstantMinusValueIsAFixedPoint) {
  const PerimeterEnv env(TriangleConfig());
  QTable table = QTable::Stationary(3);
  const double c = 5.0;
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    const GameState s = GameState::FromMask(mask);
    for (const Action& a : env.LegalActions(s)) table.Set(s, a, c - ToDouble(env.Value(s)));
  }
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    const GameState s = GameState::FromMask(mask);
    for (const Action& a : env.LegalActions(s)) {
      const StepResult step = env.Step(s, a);
      const double before = table.Get(s, a);
      QUpdate(table, s, a, step.reward, step.next, env.LegalActions(step.next), 0.5);
      EXPECT_NEAR(table.Get(s, a), before, 1e-12);
    }
  }
  const Rollout rollout = GreedyRollout(table, env, GameState(), 6);
  EXPECT_EQ(rollout.actions.front(), Action::Add(0));
}

}  // namespace
}  // namespace perimeter
