#ifndef PERIMETER_ENV_H_
#define PERIMETER_ENV_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "perimeter/geometry.h"
#include "perimeter/rational.h"
#include "perimeter/raster.h"

namespace perimeter {

using Score = Rational;

// Candidate intersections with dense ids 0..N-1 (vertex i has id i).
class VertexSet {
 public:
  VertexSet() = default;
  // Throws InputError when ids are not exactly 0..N-1 (any order accepted;
  // stored sorted by id).
  explicit VertexSet(std::vector<Vertex> vertices);

  int size() const { return static_cast<int>(vertices_.size()); }
  bool empty() const { return vertices_.empty(); }
  const Vertex& operator[](int id) const { return vertices_[id]; }
  std::span<const Vertex> all() const { return vertices_; }

  // Throws InputError for a vertex outside [0, width] x [0, height].
  void CheckInsideFrame(int width, int height) const;

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> vertices_;
};

// The selected subset, held as a strictly ascending id list. Two equal sets
// always have identical representations.
class GameState {
 public:
  GameState() = default;
  // Sorts the ids; throws InputError on negative or repeated ids.
  explicit GameState(std::vector<int> ids);

  // Bit i of `mask` selects vertex i.
  static GameState FromMask(std::uint64_t mask);
  // Parses "", "3", "0,2,5" (commas or whitespace).
  static GameState Parse(std::string_view text);

  const std::vector<int>& ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  bool Contains(int id) const;

  GameState With(int id) const;
  GameState Without(int id) const;

  // Ascending ids joined by `separator`; the empty set serializes to "".
  std::string Serialize(char separator = ',') const;

  // Lexicographic over the ascending id lists.
  friend auto operator<=>(const GameState&, const GameState&) = default;

 private:
  std::vector<int> ids_;
};

struct GameStateHash {
  std::size_t operator()(const GameState& s) const;
};

enum class ActionKind : std::uint8_t { kAdd = 0, kRemove = 1 };

struct Action {
  ActionKind kind = ActionKind::kAdd;
  int vertex = 0;

  static Action Add(int v) { return {ActionKind::kAdd, v}; }
  static Action Remove(int v) { return {ActionKind::kRemove, v}; }

  // Orders by (kind, vertex), Add before Remove.
  friend auto operator<=>(const Action&, const Action&) = default;
};

std::string ToString(const Action& action);

struct EnvConfig {
  HeatMap heatmap{1, 1};
  VertexSet vertices;
  Rational lambda{1};
  Rational beta{1};
  // Experimental: after every transition keep only ids that are hull
  // corners (lowest id per corner). Off in every standard run.
  bool canonicalize_to_hull = false;

  // Builds a config with beta set to the frame area.
  static EnvConfig WithFrameBeta(HeatMap heatmap, VertexSet vertices,
                                 Rational lambda);
};

// Pixel statistics of a hull.
struct HullMass {
  std::int64_t weight_sum = 0;   // sum of w_p over enclosed pixels
  std::int64_t zero_pixels = 0;  // enclosed pixels with w_p == 0
  std::int64_t pixels = 0;

  friend bool operator==(const HullMass&, const HullMass&) = default;
};

struct StepResult {
  GameState next;
  Score exact_reward;
  double reward = 0.0;
};

// The perimeter search game. Immutable after construction, so one instance
// may be shared by concurrent readers.
class PerimeterEnv {
 public:
  // Throws InputError on lambda < 0, beta <= 0 or vertices off the frame.
  explicit PerimeterEnv(EnvConfig config);

  const EnvConfig& config() const { return config_; }
  int num_vertices() const { return config_.vertices.size(); }

  // Throws InvariantError when the state names unknown vertices.
  void CheckState(const GameState& state) const;

  Hull HullOf(const GameState& state) const;
  HullMass MassOf(const Hull& hull) const;
  Score ValueOfMass(const HullMass& mass) const;

  // (1/beta) * sum over enclosed pixels of (w_p - lambda * [w_p == 0]).
  Score Value(const GameState& state) const;

  // Add(i) for every unselected i, then Remove(i) for every selected i, each
  // ascending. Always exactly N actions.
  std::vector<Action> LegalActions(const GameState& state) const;
  bool IsLegal(const GameState& state, const Action& action) const;

  // Deterministic successor. Throws IllegalMoveError.
  GameState Transition(const GameState& state, const Action& action) const;

  // Transition plus reward value(next) - value(state).
  StepResult Step(const GameState& state, const Action& action) const;

 private:
  GameState CanonicalizeToHull(const GameState& state) const;

  EnvConfig config_;
  int stride_ = 0;
  // Per-row prefix sums with stride width + 1.
  std::vector<std::int64_t> weight_prefix_;
  std::vector<std::int64_t> zero_prefix_;
};

// Memoizes state values for one owner (e.g. one training run). Not
// thread-safe; give each worker its own cache.
class ValueCache {
 public:
  explicit ValueCache(const PerimeterEnv& env) : env_(&env) {}

  const Score& Value(const GameState& state);
  StepResult Step(const GameState& state, const Action& action);
  std::size_t size() const { return values_.size(); }

 private:
  const PerimeterEnv* env_;
  std::unordered_map<GameState, Score, GameStateHash> values_;
};

}  // namespace perimeter

#endif  // PERIMETER_ENV_H_
