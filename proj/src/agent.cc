#include "perimeter/agent.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>

#include "perimeter/errors.h"

namespace perimeter {
namespace {

// Membership test for the actions of one state, built once per call.
class Selected {
 public:
  explicit Selected(const GameState& state) : state_(state) {
    for (int id : state.ids()) {
      if (id >= 64) {
        small_ = false;
        return;
      }
      bits_ |= std::uint64_t{1} << id;
    }
  }
  bool operator()(int id) const {
    if (small_) return id >= 0 && id < 64 && ((bits_ >> id) & 1u) != 0;
    return state_.Contains(id);
  }

 private:
  const GameState& state_;
  std::uint64_t bits_ = 0;
  bool small_ = true;
};

}  // namespace

double UnitInterval(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t UniformIndex(Rng& rng, std::uint64_t n) {
  if (n == 0) throw InvariantError("UniformIndex over an empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % n;
}

QTable::QTable(int num_vertices, int stages, bool step_indexed)
    : num_vertices_(num_vertices), step_indexed_(step_indexed), stages_(stages) {
  if (stages < 1) throw InvariantError("Q table needs at least one stage");
}

bool QTable::Matches(const GameState& state, const Action& action) {
  return (action.kind == ActionKind::kAdd) != state.Contains(action.vertex);
}

void QTable::CheckStage(int stage) const {
  if (stage < 0 || stage >= num_stages()) {
    throw InvariantError("Q stage " + std::to_string(stage) + " outside [0, " +
                         std::to_string(num_stages()) + ")");
  }
}

double QTable::Get(const GameState& state, const Action& action, int stage) const {
  if (stage < 0 || stage >= num_stages()) return 0.0;
  if (action.vertex < 0 || action.vertex >= num_vertices_ || !Matches(state, action)) {
    return 0.0;
  }
  const auto it = stages_[stage].find(state);
  return it == stages_[stage].end() ? 0.0 : it->second.values[action.vertex];
}

void QTable::Set(const GameState& state, const Action& action, double value, int stage) {
  CheckStage(stage);
  if (action.vertex < 0 || action.vertex >= num_vertices_ || !Matches(state, action)) {
    throw InvariantError("Q entry for " + ToString(action) +
                         ", which is illegal in {" + state.Serialize() + "}");
  }
  auto [it, inserted] = stages_[stage].try_emplace(state);
  Row& row = it->second;
  if (inserted) {
    row.values.assign(num_vertices_, 0.0);
    row.written.assign(num_vertices_, false);
  }
  if (!row.written[action.vertex]) {
    row.written[action.vertex] = true;
    ++size_;
  }
  row.values[action.vertex] = value;
}

const double* QTable::RowValues(const GameState& state, int stage) const {
  if (stage < 0 || stage >= num_stages()) return nullptr;
  const auto it = stages_[stage].find(state);
  return it == stages_[stage].end() ? nullptr : it->second.values.data();
}

double QTable::MaxValue(const GameState& state, std::span<const Action> legal,
                        int stage) const {
  if (legal.empty()) return 0.0;
  const double* row = RowValues(state, stage);
  if (row == nullptr) return 0.0;
  const Selected selected(state);
  double best = -std::numeric_limits<double>::infinity();
  for (const Action& a : legal) {
    const bool matches = (a.kind == ActionKind::kAdd) != selected(a.vertex);
    const double q =
        matches && a.vertex >= 0 && a.vertex < num_vertices_ ? row[a.vertex] : 0.0;
    best = std::max(best, q);
  }
  return best;
}

std::vector<QTable::Entry> QTable::Entries() const {
  std::vector<Entry> entries;
  entries.reserve(size_);
  for (int stage = 0; stage < num_stages(); ++stage) {
    for (const auto& [state, row] : stages_[stage]) {
      for (int v = 0; v < num_vertices_; ++v) {
        if (!row.written[v]) continue;
        const Action a = state.Contains(v) ? Action::Remove(v) : Action::Add(v);
        entries.push_back({stage, state, a, row.values[v]});
      }
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    if (x.stage != y.stage) return x.stage < y.stage;
    if (x.state != y.state) return x.state < y.state;
    return x.action < y.action;
  });
  return entries;
}

AgentConfig AgentConfig::Defaults(int num_vertices, std::uint64_t seed) {
  AgentConfig config;
  config.horizon = std::max(1, 2 * num_vertices);
  config.episodes = 2000 * num_vertices;
  config.seed = seed;
  return config;
}

void AgentConfig::Validate(int num_vertices) const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InputError("alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw InputError("epsilon must lie in [0, 1], got " + std::to_string(epsilon));
  }
  if (episodes < 0) throw InputError("episodes must be nonnegative");
  if (horizon < 1) throw InputError("horizon must be positive");
  if (initial_state && !initial_state->empty() &&
      initial_state->ids().back() >= num_vertices) {
    throw InputError("initial state {" + initial_state->Serialize() +
                     "} names a vertex beyond the " +
                     std::to_string(num_vertices) + " candidates");
  }
}

double QUpdate(QTable& table, const GameState& state, const Action& action,
               double reward, const GameState& next,
               std::span<const Action> legal_next, double alpha, int stage) {
  const double target =
      reward + table.MaxValue(next, legal_next, table.NextStage(stage));
  const double updated =
      (1.0 - alpha) * table.Get(state, action, stage) + alpha * target;
  table.Set(state, action, updated, stage);
  return updated;
}

Action SelectAction(const QTable& table, const GameState& state,
                    std::span<const Action> legal, double epsilon, Rng& rng,
                    int stage) {
  if (legal.empty()) {
    throw InvariantError("no legal action in state {" + state.Serialize() + "}");
  }
  if (UnitInterval(rng) < epsilon) return legal[UniformIndex(rng, legal.size())];
  const double* row = table.RowValues(state, stage);
  const Selected selected(state);
  auto q_of = [&](const Action& a) {
    if (row == nullptr || a.vertex < 0 || a.vertex >= table.num_vertices()) return 0.0;
    return (a.kind == ActionKind::kAdd) != selected(a.vertex) ? row[a.vertex] : 0.0;
  };
  Action best = legal.front();
  double best_q = q_of(best);
  for (const Action& a : legal.subspan(1)) {
    const double q = q_of(a);
    if (q > best_q || (q == best_q && a < best)) {
      best = a;
      best_q = q;
    }
  }
  return best;
}

GameState SampleInitialState(int num_vertices, Rng& rng) {
  std::vector<int> ids;
  for (int i = 0; i < num_vertices; ++i) {
    if (rng() >> 63) ids.push_back(i);
  }
  return GameState(std::move(ids));
}

Rollout GreedyRollout(const QTable& table, const PerimeterEnv& env,
                      const GameState& start, int horizon, ValueCache* cache) {
  ValueCache local(env);
  ValueCache& values = cache != nullptr ? *cache : local;
  Rng unused(0);
  Rollout rollout;
  rollout.states.push_back(start);
  rollout.best_state = start;
  rollout.best_value = values.Value(start);
  GameState state = start;
  for (int t = 0; t < horizon; ++t) {
    const auto legal = env.LegalActions(state);
    const Action action =
        SelectAction(table, state, legal, 0.0, unused, table.StageOf(t));
    StepResult step = values.Step(state, action);
    if (const Score& value = values.Value(step.next); value > rollout.best_value) {
      rollout.best_value = value;
      rollout.best_state = step.next;
    }
    rollout.actions.push_back(action);
    rollout.rewards.push_back(step.reward);
    rollout.states.push_back(step.next);
    state = std::move(step.next);
  }
  return rollout;
}

TrainResult Train(const PerimeterEnv& env, const AgentConfig& config) {
  const int n = env.num_vertices();
  config.Validate(n);
  Rng rng(config.seed);
  GameState start =
      config.initial_state ? *config.initial_state : SampleInitialState(n, rng);
  env.CheckState(start);
  TrainResult result{config.step_indexed ? QTable::StepIndexed(n, config.horizon)
                                         : QTable::Stationary(n),
                     {},
                     start};
  QTable& table = result.table;
  ValueCache values(env);
  Score best_seen = values.Value(start);
  for (int episode = 0; episode < config.episodes; ++episode) {
    GameState state = start;
    double episode_return = 0.0;
    std::vector<Action> legal = env.LegalActions(state);
    for (int t = 0; t < config.horizon; ++t) {
      const int stage = table.StageOf(t);
      const Action action = SelectAction(table, state, legal, config.epsilon, rng, stage);
      StepResult step = values.Step(state, action);
      std::vector<Action> legal_next = env.LegalActions(step.next);
      QUpdate(table, state, action, step.reward, step.next, legal_next,
              config.alpha, stage);
      episode_return += step.reward;
      if (const Score& v = values.Value(step.next); v > best_seen) best_seen = v;
      state = std::move(step.next);
      legal = std::move(legal_next);
    }
    const Rollout greedy =
        GreedyRollout(table, env, start, config.horizon, &values);
    result.log.push_back({episode, episode_return, ToDouble(best_seen),
                          ToDouble(greedy.best_value), table.size()});
  }
  return result;
}

void WriteTrainingLogCsv(std::ostream& out, const TrainingLog& log) {
  out << "episode,return,best_value,greedy_value,table_size\n";
  char buffer[160];
  for (const EpisodeRecord& r : log) {
    std::snprintf(buffer, sizeof(buffer), "%d,%.17g,%.17g,%.17g,%zu\n", r.episode,
                  r.episode_return, r.best_value, r.greedy_value, r.table_size);
    out << buffer;
  }
}

}  // namespace perimeter
