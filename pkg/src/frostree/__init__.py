"""Uniform attachment trees with freezing: builders, exact laws, couplings.

A choice sequence of attach (+) and freeze (-) steps drives a random tree:
attach adds a child to a uniform active vertex, freeze retires one.  The
package builds these trees forwards, backwards (growth-coalescent forests),
and in coupled pairs; computes exact height distributions on small instances;
and runs reproducible Monte Carlo experiments over all of it.
"""

from .coupling import (
    CoupledSample,
    CouplingTraceEntry,
    FreezeCase,
    ReducedSequence,
    couple_prop_i,
    couple_prop_ii,
    couple_prop_iii,
    couple_reduce,
    reduce_once,
    reduce_to_prefix,
    samples_to_csv,
)
from .errors import (
    DomainError,
    FrostreeError,
    InvalidSequence,
    NotReducible,
    SelfGraft,
    SequenceSyntaxError,
    StateSpaceExceeded,
    TargetUnreachable,
)
from .exact import (
    DepthProfile,
    HeightDistribution,
    bernoulli_sum_distribution,
    dominance_with_floor,
    exact_height_distribution_forward,
    exact_height_distribution_reverse,
    floored,
    forward_law_by_enumeration,
    min_floor_search,
    reverse_law_by_enumeration,
    stochastic_dominates,
)
from .forward import (
    ForwardTrace,
    build_forward,
    forward_height,
    rrt_split,
    sample_rrt,
    uniform_active_depth_law,
)
from .montecarlo import (
    BennettQuery,
    DominanceVerdict,
    SimulationReport,
    ThresholdStats,
    bennett_bound,
    check_theorem_main,
    empirical_dominance,
    height_threshold,
    run_mc,
    walk_gap_growth,
)
from .reverse import Forest, RootedTreeHandle, build_reverse
from .rng import ExhaustiveDriver, MonteCarloDriver, RngStream, exhaust, law_of
from .sequences import (
    ChoiceSequence,
    SequenceClass,
    Step,
    WalkProfile,
    alternating,
    attach_run,
    classify,
    is_valid,
    iter_reducible_sequences,
    iter_valid_sequences,
    iter_xn_sequences,
    parse_sequence,
    render_sequence,
    walk_profile,
)
from .tree import Status, TreeArena, VertexRecord

__version__ = "0.1.0"

__all__ = [
    "BennettQuery",
    "ChoiceSequence",
    "CoupledSample",
    "CouplingTraceEntry",
    "DepthProfile",
    "DominanceVerdict",
    "DomainError",
    "ExhaustiveDriver",
    "Forest",
    "ForwardTrace",
    "FreezeCase",
    "FrostreeError",
    "HeightDistribution",
    "InvalidSequence",
    "MonteCarloDriver",
    "NotReducible",
    "ReducedSequence",
    "RngStream",
    "RootedTreeHandle",
    "SelfGraft",
    "SequenceClass",
    "SequenceSyntaxError",
    "SimulationReport",
    "StateSpaceExceeded",
    "Status",
    "Step",
    "TargetUnreachable",
    "ThresholdStats",
    "TreeArena",
    "VertexRecord",
    "WalkProfile",
    "alternating",
    "attach_run",
    "bennett_bound",
    "bernoulli_sum_distribution",
    "build_forward",
    "build_reverse",
    "check_theorem_main",
    "classify",
    "couple_prop_i",
    "couple_prop_ii",
    "couple_prop_iii",
    "couple_reduce",
    "dominance_with_floor",
    "empirical_dominance",
    "exact_height_distribution_forward",
    "exact_height_distribution_reverse",
    "exhaust",
    "floored",
    "forward_height",
    "forward_law_by_enumeration",
    "height_threshold",
    "is_valid",
    "iter_reducible_sequences",
    "iter_valid_sequences",
    "iter_xn_sequences",
    "law_of",
    "min_floor_search",
    "parse_sequence",
    "reduce_once",
    "reduce_to_prefix",
    "render_sequence",
    "reverse_law_by_enumeration",
    "rrt_split",
    "run_mc",
    "sample_rrt",
    "samples_to_csv",
    "stochastic_dominates",
    "uniform_active_depth_law",
    "walk_gap_growth",
    "walk_profile",
]
