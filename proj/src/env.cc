#include "perimeter/env.h"

#include <algorithm>
#include <charconv>
#include <map>

#include "perimeter/errors.h"

namespace perimeter {

VertexSet::VertexSet(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end(),
            [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i].id != static_cast<int>(i)) {
      throw InputError("vertex ids must be dense from 0: expected id " +
                       std::to_string(i) + ", found " +
                       std::to_string(vertices_[i].id));
    }
  }
}

void VertexSet::CheckInsideFrame(int width, int height) const {
  for (const Vertex& v : vertices_) {
    if (v.x < 0 || v.y < 0 || v.x > width || v.y > height) {
      throw InputError("vertex " + std::to_string(v.id) + " at (" +
                       std::to_string(v.x) + ", " + std::to_string(v.y) +
                       ") lies outside the " + std::to_string(width) + "x" +
                       std::to_string(height) + " frame");
    }
  }
}

GameState::GameState(std::vector<int> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  if (!ids_.empty() && ids_.front() < 0) {
    throw InputError("negative vertex id " + std::to_string(ids_.front()));
  }
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) {
    throw InputError("repeated vertex id in state");
  }
}

GameState GameState::FromMask(std::uint64_t mask) {
  GameState state;
  for (int i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1) state.ids_.push_back(i);
  }
  return state;
}

GameState GameState::Parse(std::string_view text) {
  std::vector<int> ids;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (c == ',' || c == ' ' || c == '\t') {
      ++pos;
      continue;
    }
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc()) {
      throw InputError("invalid vertex id list '" + std::string(text) + "'");
    }
    ids.push_back(value);
    pos = static_cast<std::size_t>(ptr - text.data());
  }
  return GameState(std::move(ids));
}

bool GameState::Contains(int id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

GameState GameState::With(int id) const {
  GameState next = *this;
  next.ids_.insert(std::lower_bound(next.ids_.begin(), next.ids_.end(), id), id);
  return next;
}

GameState GameState::Without(int id) const {
  GameState next = *this;
  next.ids_.erase(std::lower_bound(next.ids_.begin(), next.ids_.end(), id));
  return next;
}

std::string GameState::Serialize(char separator) const {
  std::string out;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (i > 0) out += separator;
    out += std::to_string(ids_[i]);
  }
  return out;
}

std::size_t GameStateHash::operator()(const GameState& s) const {
  // FNV-1a over the id list.
  std::uint64_t h = 1469598103934665603ull;
  for (int id : s.ids()) {
    h ^= static_cast<std::uint64_t>(id) + 1;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

std::string ToString(const Action& action) {
  return std::string(action.kind == ActionKind::kAdd ? "Add(" : "Remove(") +
         std::to_string(action.vertex) + ")";
}

EnvConfig EnvConfig::WithFrameBeta(HeatMap heatmap, VertexSet vertices,
                                   Rational lambda) {
  const Rational beta(static_cast<std::int64_t>(heatmap.width()) * heatmap.height());
  return EnvConfig{std::move(heatmap), std::move(vertices), lambda, beta, false};
}

PerimeterEnv::PerimeterEnv(EnvConfig config) : config_(std::move(config)) {
  if (config_.lambda < 0) {
    throw InputError("lambda must be nonnegative, got " + ToString(config_.lambda));
  }
  if (config_.beta <= 0) {
    throw InputError("beta must be positive, got " + ToString(config_.beta));
  }
  const HeatMap& map = config_.heatmap;
  config_.vertices.CheckInsideFrame(map.width(), map.height());
  stride_ = map.width() + 1;
  weight_prefix_.assign(static_cast<std::size_t>(stride_) * map.height(), 0);
  zero_prefix_.assign(weight_prefix_.size(), 0);
  for (int y = 0; y < map.height(); ++y) {
    std::int64_t* w = &weight_prefix_[static_cast<std::size_t>(y) * stride_];
    std::int64_t* z = &zero_prefix_[static_cast<std::size_t>(y) * stride_];
    for (int x = 0; x < map.width(); ++x) {
      w[x + 1] = w[x] + map(x, y);
      z[x + 1] = z[x] + (map(x, y) == 0 ? 1 : 0);
    }
  }
}

void PerimeterEnv::CheckState(const GameState& state) const {
  if (!state.empty() && state.ids().back() >= num_vertices()) {
    throw InvariantError("state {" + state.Serialize() + "} names vertex " +
                         std::to_string(state.ids().back()) + " but only " +
                         std::to_string(num_vertices()) + " exist");
  }
}

Hull PerimeterEnv::HullOf(const GameState& state) const {
  std::vector<Point> points;
  points.reserve(state.size());
  for (int id : state.ids()) points.push_back(config_.vertices[id].point());
  return ConvexHull(std::move(points));
}

HullMass PerimeterEnv::MassOf(const Hull& hull) const {
  HullMass mass;
  const HeatMap& map = config_.heatmap;
  for (const RowSpan& span : EnclosedSpans(hull, map.width(), map.height())) {
    const std::size_t row = static_cast<std::size_t>(span.y) * stride_;
    mass.weight_sum += weight_prefix_[row + span.x_end] - weight_prefix_[row + span.x_begin];
    mass.zero_pixels += zero_prefix_[row + span.x_end] - zero_prefix_[row + span.x_begin];
    mass.pixels += span.x_end - span.x_begin;
  }
  return mass;
}

Score PerimeterEnv::ValueOfMass(const HullMass& mass) const {
  return (Rational(mass.weight_sum) - config_.lambda * mass.zero_pixels) /
         config_.beta;
}

Score PerimeterEnv::Value(const GameState& state) const {
  CheckState(state);
  return ValueOfMass(MassOf(HullOf(state)));
}

std::vector<Action> PerimeterEnv::LegalActions(const GameState& state) const {
  std::vector<Action> actions;
  actions.reserve(num_vertices());
  auto selected = state.ids().begin();
  for (int i = 0; i < num_vertices(); ++i) {
    if (selected != state.ids().end() && *selected == i) {
      ++selected;
    } else {
      actions.push_back(Action::Add(i));
    }
  }
  for (int id : state.ids()) actions.push_back(Action::Remove(id));
  return actions;
}

bool PerimeterEnv::IsLegal(const GameState& state, const Action& action) const {
  if (action.vertex < 0 || action.vertex >= num_vertices()) return false;
  return (action.kind == ActionKind::kAdd) != state.Contains(action.vertex);
}

GameState PerimeterEnv::Transition(const GameState& state, const Action& action) const {
  if (!IsLegal(state, action)) {
    throw IllegalMoveError(ToString(action) + " is not legal in state {" +
                           state.Serialize() + "}");
  }
  GameState next = action.kind == ActionKind::kAdd ? state.With(action.vertex)
                                                   : state.Without(action.vertex);
  if (config_.canonicalize_to_hull) next = CanonicalizeToHull(next);
  return next;
}

StepResult PerimeterEnv::Step(const GameState& state, const Action& action) const {
  GameState next = Transition(state, action);
  const Score reward = Value(next) - Value(state);
  return {std::move(next), reward, ToDouble(reward)};
}

GameState PerimeterEnv::CanonicalizeToHull(const GameState& state) const {
  const Hull hull = HullOf(state);
  std::map<Point, int> corner_owner;
  for (const Point& p : hull.vertices) corner_owner.emplace(p, -1);
  std::vector<int> kept;
  for (int id : state.ids()) {
    auto it = corner_owner.find(config_.vertices[id].point());
    if (it != corner_owner.end() && it->second < 0) {
      it->second = id;
      kept.push_back(id);
    }
  }
  return GameState(std::move(kept));
}

const Score& ValueCache::Value(const GameState& state) {
  auto it = values_.find(state);
  if (it == values_.end()) it = values_.emplace(state, env_->Value(state)).first;
  return it->second;
}

StepResult ValueCache::Step(const GameState& state, const Action& action) {
  GameState next = env_->Transition(state, action);
  const Score reward = Value(next) - Value(state);
  return {std::move(next), reward, ToDouble(reward)};
}

}  // namespace perimeter
