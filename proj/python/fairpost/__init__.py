"""Group-fairness post-processing: metrics, ROC-hull policies, simulator."""

from fairpost._core import (  # noqa: F401
    BiasSpec,
    Constraint,
    ConvexPolygon,
    CostModel,
    FairPolicy,
    FlipRates,
    GroupCounts,
    GroupDelta,
    Individual,
    InfeasiblePointError,
    LabeledPredictions,
    MixturePolicy,
    OperatingPoint,
    PopulationSpec,
    RocCurve,
    RocHull,
    RocPoint,
    ScenarioConfig,
    ScenarioReport,
    ScoreSet,
    UndefinedRateError,
    ValidationError,
    apply_policy,
    base_rate,
    build_roc,
    confusion_stats,
    demographic_parity_difference,
    equalized_odds_difference,
    fit_demographic_parity,
    fit_equalized_odds,
    fit_unconstrained,
    hull_intersection,
    hull_region,
    parse_config,
    preset_config,
    preset_names,
    randomization_width,
    realize_point,
    run_scenario,
    sample_population,
    to_score_set,
    upper_hull,
)

__all__ = [name for name in dir() if not name.startswith("_")]
