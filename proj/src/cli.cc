#include "perimeter/cli.h"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "perimeter/errors.h"
#include "perimeter/io.h"
#include "perimeter/scenario.h"

namespace perimeter::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string FormatDouble(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

Json IdsToJson(const GameState& state) { return Json(state.ids()); }

GameState IdsFromJson(const Json& j) { return GameState(j.get<std::vector<int>>()); }

Json ValueToJson(const Score& value) {
  return Json{{"num", value.numerator()},
              {"den", value.denominator()},
              {"float", ToDouble(value)}};
}

std::vector<Rational> ParseRationalList(const std::string& text) {
  std::vector<Rational> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    values.push_back(ParseRational(item));
  }
  if (values.empty()) throw InputError("empty lambda list '" + text + "'");
  return values;
}

std::string OracleJson(const LoadedScenario& scenario, const EnvConfig& env,
                       const OracleResult& result) {
  Json j;
  j["scenario"] = scenario.fingerprint;
  j["lambda"] = ToString(env.lambda);
  j["beta"] = ToString(env.beta);
  j["best_state"] = IdsToJson(result.best_state);
  j["best_value"] = ValueToJson(result.best_value);
  j["zero_pixels"] = result.best_mass.zero_pixels;
  j["enclosed_pixels"] = result.best_mass.pixels;
  j["evaluated"] = result.evaluated;
  return j.dump(2) + "\n";
}

}  // namespace

void RunConfig::Validate() const {
  const bool files = !heatmap_path.empty() || !vertices_path.empty();
  if (files && !scenario.empty()) {
    throw InputError("give either --scenario or --heatmap/--vertices, not both");
  }
  if (!files && scenario.empty()) {
    throw InputError("no scenario: give --scenario NAME|PATH or --heatmap and --vertices");
  }
  if (files && (heatmap_path.empty() || vertices_path.empty())) {
    throw InputError("--heatmap and --vertices must be given together");
  }
}

std::string Fingerprint(const HeatMap& heatmap, const VertexSet& vertices) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::span<const std::uint8_t> bytes) {
    for (std::uint8_t b : bytes) h = (h ^ b) * 1099511628211ull;
  };
  mix(EncodePgm(heatmap));
  const std::string text = FormatVertexFile(vertices);
  mix(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

LoadedScenario LoadScenario(const RunConfig& config) {
  config.Validate();
  if (!config.scenario.empty()) {
    std::optional<ScenarioSpec> spec = FindBundledScenario(config.scenario);
    if (!spec) {
      if (!std::filesystem::is_regular_file(config.scenario)) {
        throw InputError("'" + config.scenario +
                         "' is neither a bundled scenario (core, fork, uniform) nor a file");
      }
      const auto bytes = ReadFileBytes(config.scenario);
      spec = ParseScenarioSpec(std::string(bytes.begin(), bytes.end()));
    }
    Scenario made = Synth(*spec);
    std::string fingerprint = Fingerprint(made.heatmap, made.vertices);
    return {config.scenario, std::move(fingerprint), std::move(made.heatmap),
            std::move(made.vertices)};
  }
  const std::vector<PaletteEntry> palette =
      config.palette.empty() ? DefaultPalette() : config.palette;
  ValidatePalette(palette);
  HeatMap heatmap = LoadHeatMap(ReadFileBytes(config.heatmap_path), palette);
  const auto vertex_bytes = ReadFileBytes(config.vertices_path);
  VertexSet vertices = ParseVertexFile(std::string(vertex_bytes.begin(), vertex_bytes.end()));
  std::string fingerprint = Fingerprint(heatmap, vertices);
  return {config.heatmap_path, std::move(fingerprint), std::move(heatmap),
          std::move(vertices)};
}

EnvConfig MakeEnvConfig(const RunConfig& config, const LoadedScenario& scenario) {
  EnvConfig env = EnvConfig::WithFrameBeta(scenario.heatmap, scenario.vertices, config.lambda);
  if (config.beta) env.beta = *config.beta;
  return env;
}

AgentConfig MakeAgentConfig(const RunConfig& config, int num_vertices) {
  AgentConfig agent = AgentConfig::Defaults(num_vertices, config.seed);
  agent.alpha = config.alpha;
  agent.epsilon = config.epsilon;
  if (config.episodes) agent.episodes = *config.episodes;
  if (config.horizon) agent.horizon = *config.horizon;
  agent.initial_state = config.init_state;
  agent.step_indexed = !config.stationary;
  agent.Validate(num_vertices);
  return agent;
}

std::string PerimeterDocument::ToJson() const {
  Json j;
  j["kind"] = "convex-hull perimeter";
  j["scenario"] = scenario;
  j["lambda"] = perimeter::ToString(lambda);
  j["beta"] = perimeter::ToString(beta);
  j["seed"] = seed;
  j["alpha"] = alpha;
  j["epsilon"] = epsilon;
  j["episodes"] = episodes;
  j["horizon"] = horizon;
  j["q_table"] = step_indexed ? "step-indexed" : "stationary";
  j["start_state"] = IdsToJson(start);
  j["selected"] = IdsToJson(selected);
  Json hull = Json::array();
  for (const Point& p : ring) hull.push_back({p.x, p.y});
  j["hull"] = std::move(hull);
  j["value"] = ValueToJson(value);
  j["enclosed_pixels"] = mass.pixels;
  j["zero_pixels"] = mass.zero_pixels;
  j["weight_sum"] = mass.weight_sum;
  return j.dump(2) + "\n";
}

PerimeterDocument PerimeterDocument::FromJson(const std::string& text) {
  try {
    const Json j = Json::parse(text);
    PerimeterDocument doc;
    doc.scenario = j.at("scenario").get<std::string>();
    doc.lambda = ParseRational(j.at("lambda").get<std::string>());
    doc.beta = ParseRational(j.at("beta").get<std::string>());
    doc.seed = j.at("seed").get<std::uint64_t>();
    doc.alpha = j.at("alpha").get<double>();
    doc.epsilon = j.at("epsilon").get<double>();
    doc.episodes = j.at("episodes").get<int>();
    doc.horizon = j.at("horizon").get<int>();
    doc.step_indexed = j.at("q_table").get<std::string>() == "step-indexed";
    doc.start = IdsFromJson(j.at("start_state"));
    doc.selected = IdsFromJson(j.at("selected"));
    for (const auto& p : j.at("hull")) {
      doc.ring.push_back({p.at(0).get<std::int64_t>(), p.at(1).get<std::int64_t>()});
    }
    const auto& value = j.at("value");
    doc.value = Score(value.at("num").get<std::int64_t>(), value.at("den").get<std::int64_t>());
    doc.mass.pixels = j.at("enclosed_pixels").get<std::int64_t>();
    doc.mass.zero_pixels = j.at("zero_pixels").get<std::int64_t>();
    doc.mass.weight_sum = j.at("weight_sum").get<std::int64_t>();
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed perimeter document: ") + e.what());
  }
}

PerimeterDocument MakeDocument(const PerimeterEnv& env, const std::string& scenario,
                               const AgentConfig& agent, const GameState& start,
                               const GameState& selected) {
  PerimeterDocument doc;
  doc.scenario = scenario;
  doc.lambda = env.config().lambda;
  doc.beta = env.config().beta;
  doc.seed = agent.seed;
  doc.alpha = agent.alpha;
  doc.epsilon = agent.epsilon;
  doc.episodes = agent.episodes;
  doc.horizon = agent.horizon;
  doc.step_indexed = agent.step_indexed;
  doc.start = start;
  doc.selected = selected;
  const Hull hull = env.HullOf(selected);
  doc.ring = hull.vertices;
  if (!doc.ring.empty()) doc.ring.push_back(doc.ring.front());
  doc.mass = env.MassOf(hull);
  doc.value = env.ValueOfMass(doc.mass);
  return doc;
}

GameArtifacts PlayGame(const RunConfig& config) {
  const LoadedScenario scenario = LoadScenario(config);
  const int n = scenario.vertices.size();
  if (n > config.max_vertices) {
    throw RefusalError("scenario has " + std::to_string(n) +
                       " candidate vertices; tabular play is limited to " +
                       std::to_string(config.max_vertices) +
                       ". Use a smaller vertex set (e.g. a coarser grid).");
  }
  const PerimeterEnv env(MakeEnvConfig(config, scenario));
  const AgentConfig agent = MakeAgentConfig(config, n);
  TrainResult trained = Train(env, agent);
  const Rollout rollout = GreedyRollout(trained.table, env, trained.start, agent.horizon);
  GameArtifacts artifacts{
      MakeDocument(env, scenario.fingerprint, agent, trained.start, rollout.best_state),
      std::move(trained.log),
      RenderOverlay(scenario.heatmap, scenario.vertices, rollout.best_state,
                    env.HullOf(rollout.best_state))};
  return artifacts;
}

void WriteGameArtifacts(const GameArtifacts& artifacts, const std::string& prefix) {
  WriteFileText(prefix + ".perimeter.json", artifacts.document.ToJson());
  WriteFileBytes(prefix + ".overlay.ppm", EncodePpm(artifacts.overlay));
  std::ostringstream log;
  WriteTrainingLogCsv(log, artifacts.log);
  WriteFileText(prefix + ".log.csv", log.str());
}

Evaluation EvaluateState(const RunConfig& config) {
  const LoadedScenario scenario = LoadScenario(config);
  const PerimeterEnv env(MakeEnvConfig(config, scenario));
  if (!config.state.empty() && config.state.ids().back() >= env.num_vertices()) {
    throw InputError("state {" + config.state.Serialize() + "} names vertex " +
                     std::to_string(config.state.ids().back()) + " but the scenario has " +
                     std::to_string(env.num_vertices()) + " vertices");
  }
  const HullMass mass = env.MassOf(env.HullOf(config.state));
  return {env.ValueOfMass(mass), mass};
}

int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perimeter search on congestion heat maps with tabular Q-learning"};
  app.set_config("--config", "", "Flat 'key = value' file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig config;
  std::string lambda_text = "1", beta_text, init_text, lambdas_text = "10,1,1/10", state_text;
  std::vector<std::string> palette_text;
  int episodes = -1, horizon = -1;

  app.add_option("--heatmap", config.heatmap_path, "Heat map image (PGM/PPM/PNG)");
  app.add_option("--vertices", config.vertices_path, "Vertex file: id,x,y per line");
  app.add_option("--scenario", config.scenario, "Bundled scenario name or scenario spec file");
  app.add_option("--palette", palette_text, "RGB palette entry 'r g b weight' (repeatable)");
  app.add_option("--lambda", lambda_text, "Regularization, rational such as 1/10")
      ->capture_default_str();
  app.add_option("--beta", beta_text, "Reward normalization (default: frame area)");
  app.add_option("--alpha", config.alpha, "Learning rate")->capture_default_str();
  app.add_option("--epsilon", config.epsilon, "Exploration probability")->capture_default_str();
  app.add_option("--episodes", episodes, "Training episodes (default 2000 N)");
  app.add_option("--horizon", horizon, "Steps per episode (default 2 N)");
  app.add_option("--seed", config.seed, "Run seed")->capture_default_str();
  app.add_option("--init-state", init_text, "Pinned initial state, e.g. 0,3,5");
  app.add_flag("--stationary", config.stationary, "Single stationary Q table instead of step-indexed");
  app.add_option("--out", config.out, "Output path prefix")->capture_default_str();
  app.add_option("--max-vertices", config.max_vertices, "Tabular size bound")->capture_default_str();
  app.add_option("--max-n", config.oracle_max_n, "Oracle size bound")->capture_default_str();
  app.add_option("--threads", config.threads, "Oracle worker threads")->capture_default_str();
  app.add_option("--lambdas", lambdas_text, "Sweep list, e.g. 10,1,1/10")->capture_default_str();
  app.add_option("--state", state_text, "State to evaluate, e.g. 0,1,2");

  auto* run = app.add_subcommand("run", "Train an agent and write perimeter, overlay and log");
  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum over all vertex subsets");
  auto* sweep = app.add_subcommand("sweep", "Oracle optimum per lambda, as CSV");
  auto* synth = app.add_subcommand("synth", "Write a scenario as PGM + vertex file");
  auto* eval = app.add_subcommand("eval", "Exact value of one state");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    config.lambda = ParseRational(lambda_text);
    if (!beta_text.empty()) config.beta = ParseRational(beta_text);
    if (episodes >= 0) config.episodes = episodes;
    if (horizon >= 0) config.horizon = horizon;
    if (!init_text.empty()) config.init_state = GameState::Parse(init_text);
    config.state = GameState::Parse(state_text);
    config.lambdas = ParseRationalList(lambdas_text);
    for (const auto& entry : palette_text) config.palette.push_back(ParsePaletteEntry(entry));

    if (run->parsed()) {
      const GameArtifacts artifacts = PlayGame(config);
      WriteGameArtifacts(artifacts, config.out);
      const auto& doc = artifacts.document;
      out << "selected {" << doc.selected.Serialize() << "} value "
          << perimeter::ToString(doc.value) << " (" << FormatDouble(ToDouble(doc.value))
          << ")\nwrote " << config.out << ".perimeter.json, " << config.out
          << ".overlay.ppm, " << config.out << ".log.csv\n";
    } else if (oracle->parsed()) {
      const LoadedScenario scenario = LoadScenario(config);
      const EnvConfig env_config = MakeEnvConfig(config, scenario);
      const PerimeterEnv env(env_config);
      const OracleResult result =
          EnumerateOptimal(env, {config.oracle_max_n, true, config.threads});
      const std::string text = OracleJson(scenario, env_config, result);
      WriteFileText(config.out + ".oracle.json", text);
      out << text;
    } else if (sweep->parsed()) {
      const LoadedScenario scenario = LoadScenario(config);
      const auto rows = LambdaSweep(MakeEnvConfig(config, scenario), config.lambdas,
                                    {config.oracle_max_n, true, config.threads});
      std::ostringstream csv;
      WriteSweepCsv(csv, rows);
      WriteFileText(config.out + ".sweep.csv", csv.str());
      out << csv.str();
    } else if (synth->parsed()) {
      if (config.scenario.empty()) {
        throw InputError("synth needs --scenario NAME|PATH");
      }
      const LoadedScenario scenario = LoadScenario(config);
      WriteFileBytes(config.out + ".pgm", EncodePgm(scenario.heatmap));
      WriteFileText(config.out + ".vertices.csv", FormatVertexFile(scenario.vertices));
      out << "wrote " << config.out << ".pgm and " << config.out << ".vertices.csv ("
          << scenario.heatmap.width() << "x" << scenario.heatmap.height() << ", "
          << scenario.vertices.size() << " vertices)\n";
    } else if (eval->parsed()) {
      const Evaluation evaluation = EvaluateState(config);
      out << "state {" << config.state.Serialize() << "}\nvalue "
          << perimeter::ToString(evaluation.value) << "\nfloat "
          << FormatDouble(ToDouble(evaluation.value)) << "\n";
    }
    return kSuccess;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const BoundsError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const RefusalError& e) {
    err << "refused: " << e.what() << "\n";
    return kRefusal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace perimeter::cli
