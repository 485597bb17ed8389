#include "topkit/annotator.h"

#include <cmath>

#include "topkit/timemodel.h"

namespace topkit {

namespace {

double Tenth(double x) { return std::round(x * 10.0) / 10.0; }

Answer MinutesAnswer(Minutes m) {
  return {AnswerKind::kMinutes, m.RoundedToTenth()};
}

Answer PoiAnswer(const WorldMap& map, PoiId id) {
  Json v;
  v["id"] = id.v;
  v["name"] = map.poi(id).name;
  return {AnswerKind::kPoi, std::move(v)};
}

Answer PlanAnswer(const WorldMap& map, const Itinerary& it) {
  Json stops = Json::array();
  for (PoiId id : it.stops) stops.push_back(map.poi(id).name);
  Json v;
  v["stops"] = std::move(stops);
  v["departure"] = it.departure.ToString();
  return {AnswerKind::kPlan, std::move(v)};
}

Answer Infeasible() { return {AnswerKind::kInfeasible, "infeasible"}; }

void FillPlanAux(const EvaluatedPlan& plan, Auxiliary& aux) {
  aux.total_min = plan.total;
  aux.leg_breakdown = LegsToJson(plan.legs);
  aux.details["origin_dwell_min"] = MinutesToJson(plan.origin_dwell);
  if (!plan.feasible && !plan.violations.empty()) {
    aux.infeasible_reason = plan.violations.front().Tag();
  }
}

const QuerySpec& PlanOf(const QuestionInstance& inst) {
  if (!inst.query.plan) {
    throw ValidationError("question " + inst.question_id +
                          ": missing planning query");
  }
  return *inst.query.plan;
}

GroundTruth Optimize(const WorldMap& map, const QuerySpec& spec,
                     SearchEngine engine) {
  const SolveResult r = engine == SearchEngine::kOracle
                            ? BruteForceOracle(map, spec)
                            : SolveOptimal(map, spec);
  GroundTruth gt;
  gt.primary = r.feasible() ? PlanAnswer(map, r.plan.itinerary) : Infeasible();
  FillPlanAux(r.plan, gt.auxiliary);
  gt.auxiliary.considered_count = r.considered_count;
  gt.auxiliary.details["objective"] = ObjectiveSlug(spec.objective);
  gt.auxiliary.details["objective_value"] =
      static_cast<double>(ObjectiveValue(map, r.plan, spec.objective)) / 100.0;
  return gt;
}

bool Optimizing(QuestionCategory c) {
  return LevelOf(c) == Level::kHard ||
         c == QuestionCategory::kContextualRecommendation ||
         c == QuestionCategory::kTemporalOptimization ||
         c == QuestionCategory::kSingleFactorOptimization;
}

void CheckKind(const QuestionInstance& q, const GroundTruth& gt) {
  const AnswerKind want = DefaultTemplate(q.category).answer_kind;
  const AnswerKind got = gt.primary.kind;
  if (got == want) return;
  if (got == AnswerKind::kInfeasible && Optimizing(q.category)) return;
  throw ValidationError("question " + q.question_id + ": answer kind '" +
                        std::string(AnswerKindSlug(got)) +
                        "' does not fit category " +
                        std::string(QuestionCategorySlug(q.category)));
}

}  // namespace

GroundTruth Annotate(const WorldMap& map, const QuestionInstance& inst,
                     SearchEngine engine) {
  using QC = QuestionCategory;
  const QuestionQuery& q = inst.query;
  GroundTruth gt;
  Auxiliary& aux = gt.auxiliary;
  switch (inst.category) {
    case QC::kNameLookup: {
      Json names = Json::array();
      for (PoiId id : map.OfCategory(*q.category)) {
        names.push_back(map.poi(id).name);
      }
      gt.primary = {AnswerKind::kNameList, std::move(names)};
      break;
    }
    case QC::kTravelTimeDriving: {
      const int m = DriveMinutes(map, *q.poi_a, *q.poi_b, *q.time);
      gt.primary = MinutesAnswer(Minutes::Whole(m));
      aux.total_min = Minutes::Whole(m);
      aux.details["bucket"] = BucketLabel(BucketOf(*q.time));
      break;
    }
    case QC::kTravelTimeWalking: {
      const int m = map.matrix().walk(*q.poi_a, *q.poi_b);
      gt.primary = MinutesAnswer(Minutes::Whole(m));
      aux.total_min = Minutes::Whole(m);
      break;
    }
    case QC::kDistanceQuery:
      gt.primary = {AnswerKind::kKilometers,
                    Tenth(DistanceKm(map, *q.poi_a, *q.poi_b))};
      break;
    case QC::kDwellTimeLookup: {
      const Poi& poi = map.poi(*q.poi_a);
      const Minutes m = DwellMinutes(poi, *q.time);
      gt.primary = MinutesAnswer(m);
      aux.total_min = m;
      aux.details["popularity"] = PopularityAt(poi, *q.time);
      break;
    }
    case QC::kNearestNeighborSearch: {
      const PoiId id = NearestPoi(map, *q.poi_a, *q.category);
      gt.primary = PoiAnswer(map, id);
      aux.details["distance_km"] = DistanceKm(map, *q.poi_a, id);
      break;
    }
    case QC::kPlanEvaluation: {
      const EvaluatedPlan plan = EvaluatePlan(map, q.routes.at(0), PlanOf(inst));
      gt.primary = MinutesAnswer(plan.total);
      FillPlanAux(plan, aux);
      break;
    }
    case QC::kRouteComparison: {
      const RouteComparison cmp =
          CompareRoutes(map, q.routes.at(0), q.routes.at(1), PlanOf(inst));
      gt.primary = {AnswerKind::kLabel, std::string(1, cmp.label)};
      aux.details["total_a"] = MinutesToJson(cmp.total_a);
      aux.details["total_b"] = MinutesToJson(cmp.total_b);
      aux.details["tie"] = cmp.tie;
      break;
    }
    case QC::kContextualRecommendation: {
      const InsertionChoice best =
          BestInsertion(map, q.routes.at(0), *q.category, PlanOf(inst));
      gt.primary = best.feasible() ? PoiAnswer(map, best.poi) : Infeasible();
      FillPlanAux(best.plan, aux);
      aux.considered_count = best.considered_count;
      aux.details["position"] = best.position;
      break;
    }
    case QC::kTemporalOptimization: {
      const DepartureChoice best =
          BestDeparture(map, PlanOf(inst), q.candidates, engine);
      gt.primary = best.result.feasible()
                       ? Answer{AnswerKind::kClock, best.departure.ToString()}
                       : Infeasible();
      FillPlanAux(best.result.plan, aux);
      aux.considered_count = best.result.considered_count;
      aux.details["stops"] = ItineraryToJson(best.result.plan.itinerary)["stops"];
      break;
    }
    default:
      gt = Optimize(map, PlanOf(inst), engine);
      break;
  }
  CheckKind(inst, gt);
  return gt;
}

std::vector<BenchmarkRecord> AnnotateAll(
    const WorldMap& map, const std::vector<QuestionInstance>& instances,
    SearchEngine engine) {
  std::vector<BenchmarkRecord> out;
  out.reserve(instances.size());
  for (const QuestionInstance& inst : instances) {
    try {
      out.push_back({inst, Annotate(map, inst, engine)});
    } catch (const Error& e) {
      throw ValidationError("annotating " + inst.question_id + ": " + e.what());
    }
  }
  return out;
}

VerifyReport VerifyBenchmark(const WorldMap& map,
                             const std::vector<BenchmarkRecord>& records) {
  VerifyReport report;
  for (const BenchmarkRecord& rec : records) {
    ++report.checked;
    const std::string& id = rec.question.question_id;
    GroundTruth fresh;
    try {
      fresh = Annotate(map, rec.question, SearchEngine::kOracle);
    } catch (const Error& e) {
      report.mismatches.push_back({id, std::string("re-derivation failed: ") +
                                           e.what()});
      continue;
    }
    if (GroundTruthToJson(fresh) != GroundTruthToJson(rec.ground_truth)) {
      report.mismatches.push_back({id, "ground truth differs from oracle"});
      continue;
    }
    if (rec.ground_truth.primary.kind != AnswerKind::kPlan) continue;
    const Json& v = rec.ground_truth.primary.value;
    Itinerary it;
    for (const Json& name : v["stops"]) {
      auto poi = map.FindByName(name.get<std::string>());
      if (!poi) {
        report.mismatches.push_back({id, "plan names an unknown POI"});
        it.stops.clear();
        break;
      }
      it.stops.push_back(*poi);
    }
    if (it.stops.empty()) continue;
    it.departure = ClockTime::Parse(v["departure"].get<std::string>());
    const EvaluatedPlan replay =
        EvaluateWithAbsorption(map, it, *rec.question.query.plan);
    if (!rec.ground_truth.auxiliary.total_min ||
        replay.total != *rec.ground_truth.auxiliary.total_min) {
      report.mismatches.push_back(
          {id, "plan does not re-evaluate to the recorded total"});
    }
  }
  return report;
}

}  // namespace topkit
