"""Dynamics and persistence pairing of minima on n-D scalar fields."""

from ._dynper import (
    DynamicsResult,
    EquivalenceReport,
    GeneratorKind,
    GeneratorSpec,
    GranulometricCurve,
    MergeEvent,
    MergeTree,
    ParseError,
    PersistencePair,
    SaliencyEdge,
    SaliencyMap,
    ScalarField,
    UsageError,
    build_merge_tree,
    dynamics_oracle,
    effort,
    exhaustive_dynamics,
    filter_dynamics,
    format_field,
    generate,
    granulometric_curve,
    local_minima,
    pair_1d_algorithm1,
    pair_by_dynamics,
    pair_by_persistence,
    pairs_to_json,
    parse_field,
    persistence_diagram,
    read_field,
    saliency,
    segment,
    sublevel_filtration,
    sweep,
    verify_equivalence,
    watershed,
)

__all__ = [name for name in dir() if not name.startswith("_")]
