#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fairpost/core.hpp"
#include "fairpost/postprocess.hpp"
#include "fairpost/roc.hpp"
#include "fairpost/runner.hpp"
#include "fairpost/spaces.hpp"
#include "fairpost/utility.hpp"

namespace py = pybind11;
using namespace fairpost;

namespace {

ScoreSet make_score_set(std::vector<double> scores, std::vector<int> labels,
                        std::vector<int> groups, int n_groups) {
    ScoreSet s;
    s.scores = std::move(scores);
    s.labels = std::move(labels);
    s.groups = std::move(groups);
    s.n_groups = n_groups;
    s.validate();
    return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Group-fairness post-processing core";

    py::register_exception<ValidationError>(m, "ValidationError",
                                            PyExc_ValueError);
    py::register_exception<UndefinedRateError>(m, "UndefinedRateError",
                                               PyExc_ArithmeticError);
    py::register_exception<InfeasiblePointError>(m, "InfeasiblePointError",
                                                 PyExc_ValueError);

    py::class_<GroupCounts>(m, "GroupCounts")
        .def_readonly("tp", &GroupCounts::tp)
        .def_readonly("fp", &GroupCounts::fp)
        .def_readonly("tn", &GroupCounts::tn)
        .def_readonly("fn", &GroupCounts::fn)
        .def("tpr", &GroupCounts::tpr)
        .def("fpr", &GroupCounts::fpr)
        .def("selection_rate", &GroupCounts::selection_rate);

    py::class_<ConfusionStats>(m, "ConfusionStats")
        .def_readonly("groups", &ConfusionStats::groups);

    py::class_<ScoreSet>(m, "ScoreSet")
        .def(py::init(&make_score_set), py::arg("scores"), py::arg("labels"),
             py::arg("groups"), py::arg("n_groups"))
        .def_readonly("scores", &ScoreSet::scores)
        .def_readonly("labels", &ScoreSet::labels)
        .def_readonly("groups", &ScoreSet::groups)
        .def_readonly("n_groups", &ScoreSet::n_groups);

    py::class_<LabeledPredictions>(m, "LabeledPredictions")
        .def_readonly("groups", &LabeledPredictions::groups)
        .def_readonly("labels", &LabeledPredictions::labels)
        .def_readonly("predictions", &LabeledPredictions::predictions)
        .def_readonly("n_groups", &LabeledPredictions::n_groups);

    m.def("confusion_stats",
          [](const LabeledPredictions& d) { return confusion_stats(d); });
    m.def("confusion_stats",
          [](std::vector<int> groups, std::vector<int> labels,
             std::vector<int> predictions, int n_groups) {
              LabeledPredictions d;
              d.groups = std::move(groups);
              d.labels = std::move(labels);
              d.predictions = std::move(predictions);
              d.n_groups = n_groups;
              return confusion_stats(d);
          },
          py::arg("groups"), py::arg("labels"), py::arg("predictions"),
          py::arg("n_groups"));
    m.def("demographic_parity_difference", &demographic_parity_difference);
    m.def("equalized_odds_difference", &equalized_odds_difference);
    m.def("base_rate", &base_rate, py::arg("labels"), py::arg("groups"),
          py::arg("n_groups"));

    py::class_<RocPoint>(m, "RocPoint")
        .def_readonly("fpr", &RocPoint::fpr)
        .def_readonly("tpr", &RocPoint::tpr)
        .def_readonly("threshold", &RocPoint::threshold);
    py::class_<RocCurve>(m, "RocCurve").def_readonly("points", &RocCurve::points);
    py::class_<RocHull>(m, "RocHull").def_readonly("vertices", &RocHull::vertices);
    py::class_<OperatingPoint>(m, "OperatingPoint")
        .def(py::init([](double fpr, double tpr) {
                 return OperatingPoint{fpr, tpr};
             }),
             py::arg("fpr"), py::arg("tpr"))
        .def_readonly("fpr", &OperatingPoint::fpr)
        .def_readonly("tpr", &OperatingPoint::tpr);
    py::class_<MixturePolicy>(m, "MixturePolicy")
        .def_readonly("t_low", &MixturePolicy::t_low)
        .def_readonly("t_high", &MixturePolicy::t_high)
        .def_readonly("p", &MixturePolicy::p)
        .def_readonly("frontier_weight", &MixturePolicy::frontier_weight)
        .def_readonly("fallback_rate", &MixturePolicy::fallback_rate)
        .def("three_way", &MixturePolicy::three_way)
        .def("deterministic", &MixturePolicy::deterministic);
    py::class_<ConvexPolygon>(m, "ConvexPolygon")
        .def_readonly("vertices", &ConvexPolygon::vertices)
        .def("area", &ConvexPolygon::area)
        .def("contains", &ConvexPolygon::contains, py::arg("point"),
             py::arg("tol") = kGeomTol);

    m.def("build_roc", &build_roc, py::arg("scores"), py::arg("group"));
    m.def("upper_hull", &upper_hull);
    m.def("hull_region", &hull_region);
    m.def("realize_point", &realize_point, py::arg("hull"), py::arg("target"));
    m.def("hull_intersection", &hull_intersection);

    py::enum_<Constraint>(m, "Constraint")
        .value("NONE", Constraint::None)
        .value("DEMOGRAPHIC_PARITY", Constraint::DemographicParity)
        .value("EQUALIZED_ODDS", Constraint::EqualizedOdds);

    py::class_<CostModel>(m, "CostModel")
        .def(py::init<>())
        .def_static("uniform", &CostModel::uniform)
        .def_readwrite("cost_fp", &CostModel::cost_fp)
        .def_readwrite("cost_fn", &CostModel::cost_fn)
        .def_readwrite("group_weights", &CostModel::group_weights);

    py::class_<GroupOperating>(m, "GroupOperating")
        .def_readonly("selection_rate", &GroupOperating::selection_rate)
        .def_readonly("fpr", &GroupOperating::fpr)
        .def_readonly("tpr", &GroupOperating::tpr);

    py::class_<FairPolicy>(m, "FairPolicy")
        .def_readonly("thresholds", &FairPolicy::thresholds)
        .def_readonly("constraint", &FairPolicy::constraint)
        .def_readonly("achieved", &FairPolicy::achieved)
        .def_readonly("objective_value", &FairPolicy::objective_value)
        .def_readonly("degenerate", &FairPolicy::degenerate)
        .def("n_groups", &FairPolicy::n_groups)
        .def("to_text", &FairPolicy::to_text)
        .def_static("from_text", &FairPolicy::from_text);

    m.def("fit_demographic_parity", &fit_demographic_parity, py::arg("scores"),
          py::arg("cost"), py::arg("budget") = std::nullopt);
    m.def("fit_equalized_odds", &fit_equalized_odds, py::arg("scores"),
          py::arg("cost"));
    m.def("fit_unconstrained", &fit_unconstrained, py::arg("scores"),
          py::arg("cost"));
    m.def("apply_policy", &apply_policy, py::arg("policy"), py::arg("scores"),
          py::arg("seed"));
    m.def("randomization_width", &randomization_width, py::arg("policy"),
          py::arg("scores"));

    py::class_<Individual>(m, "Individual")
        .def_readonly("group", &Individual::group)
        .def_readonly("potential", &Individual::potential)
        .def_readonly("construct", &Individual::construct)
        .def_readonly("observed", &Individual::observed)
        .def_readonly("score", &Individual::score)
        .def_readwrite("decision", &Individual::decision);

    py::class_<FlipRates>(m, "FlipRates")
        .def(py::init<>())
        .def_readwrite("pos_to_neg", &FlipRates::pos_to_neg)
        .def_readwrite("neg_to_pos", &FlipRates::neg_to_pos);

    py::class_<BiasSpec>(m, "BiasSpec")
        .def_static("none", &BiasSpec::none)
        .def_readwrite("lifes_bias", &BiasSpec::lifes_bias)
        .def_readwrite("measurement_label_bias", &BiasSpec::measurement_label_bias)
        .def_readwrite("measurement_score_shift", &BiasSpec::measurement_score_shift)
        .def_readwrite("score_informativeness", &BiasSpec::score_informativeness)
        .def_readwrite("technical_bias", &BiasSpec::technical_bias);

    py::class_<PopulationSpec>(m, "PopulationSpec")
        .def(py::init<>())
        .def_readwrite("group_sizes", &PopulationSpec::group_sizes)
        .def_readwrite("potential_base_rates", &PopulationSpec::potential_base_rates)
        .def_readwrite("bias", &PopulationSpec::bias)
        .def_readwrite("seed", &PopulationSpec::seed)
        .def_readwrite("construct_driven_scores",
                       &PopulationSpec::construct_driven_scores)
        .def("n_groups", &PopulationSpec::n_groups);

    m.def("sample_population", &sample_population);
    m.def("to_score_set", &to_score_set, py::arg("population"),
          py::arg("n_groups"));

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_readonly("replicates", &ScenarioConfig::replicates)
        .def_readonly("seed", &ScenarioConfig::seed);
    m.def("parse_config", &parse_config, py::arg("text"),
          py::arg("origin") = "<string>");
    m.def("preset_config", &preset_config, py::arg("name"));
    m.def("preset_names", &preset_names);

    py::class_<GroupDelta>(m, "GroupDelta")
        .def_readonly("baseline_utility", &GroupDelta::baseline_utility)
        .def_readonly("fair_utility", &GroupDelta::fair_utility)
        .def_readonly("delta", &GroupDelta::delta)
        .def_readonly("band", &GroupDelta::band);

    py::class_<ScenarioReport>(m, "ScenarioReport")
        .def_readonly("utility_deltas", &ScenarioReport::utility_deltas)
        .def_readonly("fair_policy", &ScenarioReport::fair_policy)
        .def_readonly("baseline_policy", &ScenarioReport::baseline_policy)
        .def_property_readonly(
            "verdict",
            [](const ScenarioReport& r) { return verdict_name(r.verdict); })
        .def_property_readonly("dp_fair_mean",
                               [](const ScenarioReport& r) {
                                   return r.dp_fair.mean;
                               })
        .def_property_readonly("eo_fair_mean", [](const ScenarioReport& r) {
            return r.eo_fair.mean;
        });
    m.def("run_scenario", &run_scenario);
}
