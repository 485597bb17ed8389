#include "topkit/cli.h"

#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "io_util.h"
#include "json_util.h"
#include "topkit/annotator.h"
#include "topkit/evaluator.h"
#include "topkit/solver.h"

namespace topkit {

namespace {

struct Options {
  std::optional<std::uint64_t> seed;
  std::string map_path;
  std::string questions_path;
  std::string benchmark_path;
  std::string answers_path;
  std::string query_path;
  std::string config_path;
  std::string output_path;
  std::string engine = "bnb";
  std::optional<int> easy;
  std::optional<int> medium;
  std::optional<int> hard;
};

void Emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    internal::WriteFile(path, text);
  }
}

std::uint64_t SeedOf(const Options& o) {
  return o.seed ? *o.seed : DefaultSeedFromEnv();
}

SearchEngine EngineOf(const Options& o) {
  return o.engine == "oracle" ? SearchEngine::kOracle
                              : SearchEngine::kBranchAndBound;
}

int GenMap(const Options& o, std::ostream& out) {
  GenerationConfig config;
  if (!o.config_path.empty()) config = LoadGenerationConfig(o.config_path);
  const WorldMap map = GenerateMap(SeedOf(o), config);
  Emit(SerializeMap(map), o.output_path, out);
  return kExitOk;
}

int GenQuestions(const Options& o, std::ostream& out) {
  const WorldMap map = LoadMap(o.map_path);
  GeneratorConfig config;
  if (!o.config_path.empty()) config = LoadGeneratorConfig(o.config_path);
  if (o.easy) config.easy = *o.easy;
  if (o.medium) config.medium = *o.medium;
  if (o.hard) config.hard = *o.hard;
  config.Validate();
  const auto questions = GenerateDataset(map, SeedOf(o), config);
  Emit(SerializeQuestions(map, questions), o.output_path, out);
  return kExitOk;
}

int AnnotateCmd(const Options& o, std::ostream& out) {
  const WorldMap map = LoadMap(o.map_path);
  const auto questions = LoadQuestions(map, o.questions_path);
  const auto records = AnnotateAll(map, questions, EngineOf(o));
  Emit(SerializeBenchmark(map, records), o.output_path, out);
  return kExitOk;
}

int Solve(const Options& o, std::ostream& out) {
  const WorldMap map = LoadMap(o.map_path);
  const Json j = internal::ParseJsonText(internal::ReadFile(o.query_path),
                                         o.query_path);
  const QuerySpec query = QueryFromJson(map, j, "query");
  const SolveResult r = EngineOf(o) == SearchEngine::kOracle
                            ? BruteForceOracle(map, query)
                            : SolveOptimal(map, query);
  Json plan = PlanToJson(map, r.plan);
  plan["considered_count"] = r.considered_count;
  Emit(plan.dump(2) + "\n", o.output_path, out);
  return kExitOk;
}

int Evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  const AnswerKey key = LoadAnswerKey(o.benchmark_path);
  const auto answers = LoadAnswers(o.answers_path);
  const EvaluationReport report = EvaluateRun(key, answers);
  if (report.duplicate_answers > 0) {
    err << "warning: " << report.duplicate_answers
        << " duplicate answer(s); the last occurrence was scored\n";
  }
  if (report.orphan_answers > 0) {
    err << "warning: " << report.orphan_answers
        << " answer(s) name unknown question ids\n";
  }
  const std::string text = ReportToJson(report).dump(2) + "\n";
  if (o.output_path.empty() || o.output_path == "-") {
    out << text;
  } else {
    internal::WriteFile(o.output_path, text);
    out << "overall " << report.overall.correct << "/" << report.overall.total;
    for (const auto& [level, acc] : report.per_level) {
      out << "  " << LevelSlug(level) << " " << acc.correct << "/" << acc.total;
    }
    out << "\n";
  }
  return kExitOk;
}

int ExtractAnswers(const Options& o, std::ostream& out) {
  const AnswerKey key = LoadAnswerKey(o.benchmark_path);
  Emit(SerializeAnswers(ProjectAnswers(key)), o.output_path, out);
  return kExitOk;
}

int Verify(const Options& o, std::ostream& out) {
  const WorldMap map = LoadMap(o.map_path);
  const auto records = LoadBenchmark(map, o.benchmark_path);
  const VerifyReport report = VerifyBenchmark(map, records);
  for (const VerifyMismatch& m : report.mismatches) {
    out << "mismatch " << m.question_id << ": " << m.reason << "\n";
  }
  out << "verified " << report.checked << " record(s), "
      << report.mismatches.size() << " mismatch(es)\n";
  return report.ok() ? kExitOk : kExitVerifyMismatch;
}

}  // namespace

std::uint64_t DefaultSeedFromEnv() {
  const char* env = std::getenv("TOPKIT_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  const std::string text(env);
  std::size_t used = 0;
  std::uint64_t seed = 0;
  try {
    seed = std::stoull(text, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.front() == '-') {
    throw ConfigError("TOPKIT_SEED is not an unsigned integer: '" + text + "'");
  }
  return seed;
}

GeneratorConfig LoadGeneratorConfig(const std::filesystem::path& path) {
  using internal::As;
  using internal::OptionalField;
  const auto j = internal::ParseJsonText(internal::ReadFile(path), "config");
  if (!j.is_object()) throw ParseError("config: expected an object");
  GeneratorConfig config;
  for (const auto& [key, field] :
       {std::pair{"easy", &config.easy}, std::pair{"medium", &config.medium},
        std::pair{"hard", &config.hard},
        std::pair{"all_intention_cap", &config.all_intention_cap}}) {
    if (const auto* v = OptionalField(j, key)) {
      *field = As<int>(*v, std::string("config.") + key);
    }
  }
  if (const auto* v = OptionalField(j, "dwell_override_minutes")) {
    config.dwell_override_minutes =
        As<std::vector<int>>(*v, "config.dwell_override_minutes");
  }
  config.Validate();
  return config;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  std::vector<const char*> argv = {"topkit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Synthetic trip-planning benchmark toolkit", "topkit"};
  app.set_version_flag("--version", TOPKIT_VERSION);
  app.require_subcommand(1, 1);
  Options o;

  auto seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed,
                    "Random seed (default: $TOPKIT_SEED, else 7)");
  };
  auto output = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("-o,--output", o.output_path,
                                "Output file ('-' for stdout)");
    if (required) opt->required();
  };
  auto engine = [&](CLI::App* cmd) {
    cmd->add_option("--engine", o.engine, "Exact search: bnb or oracle")
        ->check(CLI::IsMember({"bnb", "oracle"}));
  };

  auto* gen_map = app.add_subcommand("gen-map", "Generate a city map");
  seed(gen_map);
  output(gen_map, true);
  gen_map->add_option("--config", o.config_path, "Generation config JSON")
      ->check(CLI::ExistingFile);

  auto* gen_q = app.add_subcommand("gen-questions", "Sample benchmark questions");
  gen_q->add_option("--map", o.map_path, "Map file")->required();
  seed(gen_q);
  output(gen_q, true);
  gen_q->add_option("--config", o.config_path, "Question config JSON")
      ->check(CLI::ExistingFile);
  gen_q->add_option("--easy", o.easy, "Easy question count");
  gen_q->add_option("--medium", o.medium, "Medium question count");
  gen_q->add_option("--hard", o.hard, "Hard question count");

  auto* annotate = app.add_subcommand("annotate", "Compute ground truths");
  annotate->add_option("--map", o.map_path, "Map file")->required();
  annotate->add_option("--questions", o.questions_path, "Questions file")
      ->required();
  output(annotate, true);
  engine(annotate);

  auto* solve = app.add_subcommand("solve", "Solve one planning query");
  solve->add_option("--map", o.map_path, "Map file")->required();
  solve->add_option("--query", o.query_path, "Query JSON")->required();
  output(solve, false);
  engine(solve);

  auto* evaluate = app.add_subcommand("evaluate", "Score an answers file");
  evaluate->add_option("--benchmark", o.benchmark_path, "Benchmark file")
      ->required();
  evaluate->add_option("--answers", o.answers_path, "Answers file")->required();
  output(evaluate, false);

  auto* extract =
      app.add_subcommand("extract-answers", "Write ground truths as answers");
  extract->add_option("--benchmark", o.benchmark_path, "Benchmark file")
      ->required();
  output(extract, false);

  auto* verify = app.add_subcommand("verify", "Re-derive every ground truth");
  verify->add_option("--benchmark", o.benchmark_path, "Benchmark file")
      ->required();
  verify->add_option("--map", o.map_path, "Map file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_map) return GenMap(o, out);
    if (*gen_q) return GenQuestions(o, out);
    if (*annotate) return AnnotateCmd(o, out);
    if (*solve) return Solve(o, out);
    if (*evaluate) return Evaluate(o, out, err);
    if (*extract) return ExtractAnswers(o, out);
    if (*verify) return Verify(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const nlohmann::ordered_json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace topkit
