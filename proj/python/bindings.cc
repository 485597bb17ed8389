#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "topkit/annotator.h"
#include "topkit/evaluator.h"
#include "topkit/questgen.h"
#include "topkit/solver.h"
#include "topkit/timemodel.h"
#include "topkit/worldmodel.h"

namespace py = pybind11;

namespace topkit {
namespace {

Json ParseArg(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

SearchEngine EngineArg(const std::string& engine) {
  if (engine == "bnb") return SearchEngine::kBranchAndBound;
  if (engine == "oracle") return SearchEngine::kOracle;
  throw ConfigError("engine must be 'bnb' or 'oracle'");
}

std::string Solve(const WorldMap& map, const std::string& query_json,
                  const std::string& engine) {
  const QuerySpec query = QueryFromJson(map, ParseArg(query_json, "query"));
  const SolveResult r = EngineArg(engine) == SearchEngine::kOracle
                            ? BruteForceOracle(map, query)
                            : SolveOptimal(map, query);
  Json j = PlanToJson(map, r.plan);
  j["considered_count"] = r.considered_count;
  return j.dump();
}

std::string Evaluate(const WorldMap& map, const std::string& itinerary_json,
                     const std::string& query_json, bool absorb) {
  const QuerySpec query = QueryFromJson(map, ParseArg(query_json, "query"));
  const Itinerary it =
      ItineraryFromJson(map, ParseArg(itinerary_json, "itinerary"), "itinerary");
  const EvaluatedPlan plan = absorb ? EvaluateWithAbsorption(map, it, query)
                                    : EvaluatePlan(map, it, query);
  return PlanToJson(map, plan).dump();
}

std::string Questions(const WorldMap& map, std::uint64_t seed, int easy,
                      int medium, int hard) {
  GeneratorConfig config;
  config.easy = easy;
  config.medium = medium;
  config.hard = hard;
  config.Validate();
  return SerializeQuestions(map, GenerateDataset(map, seed, config));
}

std::string AnnotateText(const WorldMap& map, const std::string& questions,
                         const std::string& engine) {
  const auto instances = ParseQuestions(map, questions);
  return SerializeBenchmark(map,
                            AnnotateAll(map, instances, EngineArg(engine)));
}

std::string VerifyText(const WorldMap& map, const std::string& benchmark) {
  const VerifyReport report =
      VerifyBenchmark(map, ParseBenchmark(map, benchmark));
  Json mismatches = Json::array();
  for (const auto& m : report.mismatches) {
    mismatches.push_back({{"question_id", m.question_id}, {"reason", m.reason}});
  }
  Json j;
  j["checked"] = report.checked;
  j["mismatches"] = std::move(mismatches);
  return j.dump();
}

std::string ScoreText(const std::string& benchmark, const std::string& answers) {
  return ReportToJson(EvaluateRun(ParseAnswerKey(benchmark),
                                  ParseAnswers(answers)))
      .dump();
}

std::string ProjectText(const std::string& benchmark) {
  return SerializeAnswers(ProjectAnswers(ParseAnswerKey(benchmark)));
}

}  // namespace
}  // namespace topkit

PYBIND11_MODULE(_topkit, m) {
  using namespace topkit;
  m.doc() = "Synthetic trip-planning benchmark toolkit";
  m.attr("__version__") = TOPKIT_VERSION;

  static py::exception<Error> error(m, "TopkitError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<WorldMap>(m, "WorldMap")
      .def_static(
          "generate", [](std::uint64_t seed) { return GenerateMap(seed); },
          py::arg("seed"))
      .def_static(
          "from_json", [](const std::string& text) { return ParseMap(text); },
          py::arg("text"))
      .def("to_json", [](const WorldMap& map) { return SerializeMap(map); })
      .def("hash", [](const WorldMap& map) { return MapHash(map); })
      .def_property_readonly("seed", &WorldMap::seed)
      .def("__len__", &WorldMap::size)
      .def("names",
           [](const WorldMap& map) {
             std::vector<std::string> out;
             for (const Poi& p : map.pois()) out.push_back(p.name);
             return out;
           })
      .def(
          "find",
          [](const WorldMap& map, const std::string& name)
              -> std::optional<int> {
            auto id = map.FindByName(name);
            if (!id) return std::nullopt;
            return id->v;
          },
          py::arg("name"))
      .def(
          "drive_minutes",
          [](const WorldMap& map, int from, int to, const std::string& t) {
            return DriveMinutes(map, PoiId{from}, PoiId{to},
                                ClockTime::Parse(t));
          },
          py::arg("from_id"), py::arg("to_id"), py::arg("depart"))
      .def(
          "dwell_minutes",
          [](const WorldMap& map, int id, const std::string& t) {
            return DwellMinutes(map.poi(PoiId{id}), ClockTime::Parse(t)).value();
          },
          py::arg("poi_id"), py::arg("arrive"));

  m.def("solve", &Solve, py::arg("map"), py::arg("query_json"),
        py::arg("engine") = "bnb");
  m.def("evaluate_plan", &Evaluate, py::arg("map"), py::arg("itinerary_json"),
        py::arg("query_json"), py::arg("absorb") = true);
  m.def("generate_questions", &Questions, py::arg("map"), py::arg("seed"),
        py::arg("easy") = 100, py::arg("medium") = 200, py::arg("hard") = 200);
  m.def("annotate", &AnnotateText, py::arg("map"), py::arg("questions_json"),
        py::arg("engine") = "bnb");
  m.def("verify", &VerifyText, py::arg("map"), py::arg("benchmark_json"));
  m.def("score", &ScoreText, py::arg("benchmark_json"),
        py::arg("answers_json"));
  m.def("project_answers", &ProjectText, py::arg("benchmark_json"));
}
