#ifndef PERIMETER_CLI_H_
#define PERIMETER_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "perimeter/agent.h"
#include "perimeter/env.h"
#include "perimeter/oracle.h"
#include "perimeter/raster.h"

namespace perimeter::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kRefusal = 2,
  kInternalError = 3,
};

struct RunConfig {
  // Scenario source: either heatmap_path + vertices_path, or `scenario`
  // (a bundled name or a scenario spec file).
  std::string heatmap_path;
  std::string vertices_path;
  std::string scenario;
  std::vector<PaletteEntry> palette;  // empty selects DefaultPalette()

  Rational lambda{1};
  std::optional<Rational> beta;  // frame area when unset

  double alpha = 0.5;
  double epsilon = 0.2;
  std::optional<int> episodes;  // 2000 N when unset
  std::optional<int> horizon;   // 2 N when unset
  std::uint64_t seed = 0;
  std::optional<GameState> init_state;
  bool stationary = false;

  std::string out = "perimeter";
  int max_vertices = 24;
  int oracle_max_n = 20;
  int threads = 1;
  std::vector<Rational> lambdas = {Rational(10), Rational(1), Rational(1, 10)};
  GameState state;  // for eval

  // Throws InputError unless exactly one scenario source is set.
  void Validate() const;
};

struct LoadedScenario {
  std::string name;         // bundled name or file path, for messages
  std::string fingerprint;  // content digest of heat map + vertices
  HeatMap heatmap;
  VertexSet vertices;
};

LoadedScenario LoadScenario(const RunConfig& config);
// Content digest "fnv1a64:<16 hex digits>" over the PGM and vertex-file bytes.
std::string Fingerprint(const HeatMap& heatmap, const VertexSet& vertices);

EnvConfig MakeEnvConfig(const RunConfig& config, const LoadedScenario& scenario);
AgentConfig MakeAgentConfig(const RunConfig& config, int num_vertices);

// The hull-stage perimeter of one game. This is the convex hull over
// selected intersections, not a street-level boundary.
struct PerimeterDocument {
  std::string scenario;  // fingerprint
  Rational lambda;
  Rational beta;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  double epsilon = 0.0;
  int episodes = 0;
  int horizon = 0;
  bool step_indexed = true;
  GameState start;
  GameState selected;
  std::vector<Point> ring;  // closed: first point repeated last
  Score value;
  HullMass mass;

  std::string ToJson() const;
  // Throws InputError on malformed documents.
  static PerimeterDocument FromJson(const std::string& text);

  friend bool operator==(const PerimeterDocument&, const PerimeterDocument&) = default;
};

PerimeterDocument MakeDocument(const PerimeterEnv& env, const std::string& scenario,
                               const AgentConfig& agent, const GameState& start,
                               const GameState& selected);

struct GameArtifacts {
  PerimeterDocument document;
  TrainingLog log;
  RgbImage overlay;
};

// Trains, rolls out greedily and assembles artifacts without touching disk.
// Throws RefusalError when N exceeds config.max_vertices.
GameArtifacts PlayGame(const RunConfig& config);

// Writes <prefix>.perimeter.json, <prefix>.overlay.ppm and <prefix>.log.csv.
void WriteGameArtifacts(const GameArtifacts& artifacts, const std::string& prefix);

// Exact value of `state` as "n/d" plus a float rendering.
struct Evaluation {
  Score value;
  HullMass mass;
};
Evaluation EvaluateState(const RunConfig& config);

// Entry point behind the `perimeter` binary. Never throws; maps errors to
// exit codes and writes messages to `err`.
int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace perimeter::cli

#endif  // PERIMETER_CLI_H_
