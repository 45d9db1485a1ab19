#ifndef PERIMETER_AGENT_H_
#define PERIMETER_AGENT_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "perimeter/env.h"

namespace perimeter {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) from the top 53 bits of one draw.
double UnitInterval(Rng& rng);
// Uniform integer in [0, n), rejection-sampled so results do not depend on
// the standard library's distribution implementations.
std::uint64_t UniformIndex(Rng& rng, std::uint64_t n);

// Sparse tabular Q. Entries are keyed by (stage, state, action).
//
// A step-indexed table has one stage per decision step of the horizon:
// stage t is read at step t and bootstraps from stage t + 1, and the stage
// past the horizon reads as 0. A stationary table has a single stage that
// bootstraps from itself.
//
// Within a stage, the row of a visited state holds one slot per vertex: the
// slot for vertex i is the only legal action touching i (Add when i is
// unselected, Remove otherwise). Unwritten entries read as exactly 0.
class QTable {
 public:
  static QTable Stationary(int num_vertices) { return QTable(num_vertices, 1, false); }
  static QTable StepIndexed(int num_vertices, int horizon) {
    return QTable(num_vertices, horizon, true);
  }

  int num_vertices() const { return num_vertices_; }
  int num_stages() const { return static_cast<int>(stages_.size()); }
  bool step_indexed() const { return step_indexed_; }

  // Stage consulted at decision step `step`.
  int StageOf(int step) const { return step_indexed_ ? step : 0; }
  // Stage a stage bootstraps from; num_stages() means "past the horizon".
  int NextStage(int stage) const { return step_indexed_ ? stage + 1 : stage; }

  double Get(const GameState& state, const Action& action, int stage = 0) const;
  // Throws InvariantError for an action that is not legal in `state` or a
  // stage out of range.
  void Set(const GameState& state, const Action& action, double value, int stage = 0);

  // max over `legal` of Q(state, a) at `stage`; 0 for an empty list or a
  // stage past the horizon.
  double MaxValue(const GameState& state, std::span<const Action> legal,
                  int stage = 0) const;

  // Per-vertex slots of the state's row at `stage` (see above), or nullptr
  // when nothing has been written for the state there.
  const double* RowValues(const GameState& state, int stage = 0) const;

  // Number of written entries over all stages.
  std::size_t size() const { return size_; }

  struct Entry {
    int stage;
    GameState state;
    Action action;
    double value;
  };
  // Written entries ordered by (stage, state, action).
  std::vector<Entry> Entries() const;

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  QTable(int num_vertices, int stages, bool step_indexed);

  struct Row {
    std::vector<double> values;
    std::vector<bool> written;
    friend bool operator==(const Row&, const Row&) = default;
  };
  using Stage = std::unordered_map<GameState, Row, GameStateHash>;

  static bool Matches(const GameState& state, const Action& action);
  void CheckStage(int stage) const;

  int num_vertices_;
  bool step_indexed_;
  std::vector<Stage> stages_;
  std::size_t size_ = 0;
};

struct AgentConfig {
  double alpha = 0.5;
  double epsilon = 0.2;
  int episodes = 0;
  int horizon = 1;
  std::uint64_t seed = 0;
  // Unset: one random subset is drawn from the run's RNG before training
  // and pinned for every episode.
  std::optional<GameState> initial_state;
  // Step-indexed (finite-horizon) Q by default; false selects the single
  // stationary table.
  bool step_indexed = true;

  // alpha 0.5, epsilon 0.2, horizon 2N, 2000 N episodes.
  static AgentConfig Defaults(int num_vertices, std::uint64_t seed = 0);

  // Throws InputError on out-of-range fields.
  void Validate(int num_vertices) const;
};

struct EpisodeRecord {
  int episode = 0;
  double episode_return = 0.0;
  double best_value = 0.0;    // best state value seen in training so far
  double greedy_value = 0.0;  // best value on the greedy rollout after this episode
  std::size_t table_size = 0;

  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

using TrainingLog = std::vector<EpisodeRecord>;

// Q(s,a) <- (1 - alpha) Q(s,a) + alpha (r + max_{a' in legal_next} Q(s',a'))
// on `stage`, where the max reads the stage after it. Returns the new entry.
double QUpdate(QTable& table, const GameState& state, const Action& action,
               double reward, const GameState& next,
               std::span<const Action> legal_next, double alpha, int stage = 0);

// Epsilon-greedy. Exploitation breaks ties toward the smallest action in
// (kind, vertex) order. Throws InvariantError when `legal` is empty.
Action SelectAction(const QTable& table, const GameState& state,
                    std::span<const Action> legal, double epsilon, Rng& rng,
                    int stage = 0);

// Each vertex joins independently with probability 1/2.
GameState SampleInitialState(int num_vertices, Rng& rng);

struct Rollout {
  std::vector<GameState> states;  // H + 1 states, starting with s0
  std::vector<Action> actions;
  std::vector<double> rewards;
  GameState best_state;           // highest value visited, earliest on ties
  Score best_value;
};

// Follows the epsilon = 0 policy for `horizon` steps.
Rollout GreedyRollout(const QTable& table, const PerimeterEnv& env,
                      const GameState& start, int horizon,
                      ValueCache* cache = nullptr);

struct TrainResult {
  QTable table;
  TrainingLog log;
  GameState start;  // the state every episode (and the rollout) starts from
};

// Runs `episodes` episodes of exactly `horizon` steps. Fully determined by
// (env config, agent config).
TrainResult Train(const PerimeterEnv& env, const AgentConfig& config);

// CSV: episode,return,best_value,greedy_value,table_size
void WriteTrainingLogCsv(std::ostream& out, const TrainingLog& log);

}  // namespace perimeter

#endif  // PERIMETER_AGENT_H_
