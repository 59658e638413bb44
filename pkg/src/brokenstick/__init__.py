"""Stick-breaking and square-fracture geometric probability laboratory.

Exact evaluators for every closed-form quantity in this problem family,
paired with independent Monte Carlo oracles, quadrature, and brute-force
enumeration, behind a reproducible seeded CLI.
"""

from .kgons import (
    CountDistribution,
    KgonQuery,
    WitnessError,
    XOutcome,
    closed_form_P,
    ex_bounds,
    exact_count_distribution,
    find_witness,
    mc_P,
    mc_event_E,
    mc_X,
    simulate_X,
)
from .numerics import Estimate, StreamingStats, find_root, integrate
from .polygons import CyclicSolution, brahmagupta_area, heron_area, max_cyclic_area
from .sampling import (
    Partition,
    count_kgons,
    forms_kgon,
    kth_longest,
    sample_partition,
    stream_for_sample,
)
from .squares import (
    CenterLineReport,
    ChordReport,
    ConvexRegion,
    RegionSet,
    SquareLine,
    center_line_experiment,
    chord_experiment,
    cut_square,
    dump_regions,
    half_area_bounds,
    lambda_estimate,
    sample_center_line,
    sample_chord,
    split_regions,
    unit_square,
)
from .sticks import (
    ConditionalEstimate,
    ProcessOutcome,
    area_exceedance,
    exact_expected_quad_area,
    exact_expected_triangle_area,
    expected_kth_longest,
    mc_area_exceedance,
    mc_expected_quad_area,
    mc_expected_triangle_area,
    mc_kth_longest,
    mc_split_largest,
    simulate_split_largest,
    variance_kth_longest,
)
from .verification import run_verification

__version__ = "0.1.0"

__all__ = [
    "CenterLineReport",
    "ChordReport",
    "ConditionalEstimate",
    "ConvexRegion",
    "CountDistribution",
    "CyclicSolution",
    "Estimate",
    "KgonQuery",
    "Partition",
    "ProcessOutcome",
    "RegionSet",
    "SquareLine",
    "StreamingStats",
    "WitnessError",
    "XOutcome",
    "area_exceedance",
    "brahmagupta_area",
    "center_line_experiment",
    "chord_experiment",
    "closed_form_P",
    "count_kgons",
    "cut_square",
    "dump_regions",
    "ex_bounds",
    "exact_count_distribution",
    "exact_expected_quad_area",
    "exact_expected_triangle_area",
    "expected_kth_longest",
    "find_root",
    "find_witness",
    "forms_kgon",
    "half_area_bounds",
    "heron_area",
    "integrate",
    "kth_longest",
    "lambda_estimate",
    "max_cyclic_area",
    "mc_P",
    "mc_X",
    "mc_area_exceedance",
    "mc_event_E",
    "mc_expected_quad_area",
    "mc_expected_triangle_area",
    "mc_kth_longest",
    "mc_split_largest",
    "run_verification",
    "sample_center_line",
    "sample_chord",
    "sample_partition",
    "simulate_X",
    "simulate_split_largest",
    "split_regions",
    "stream_for_sample",
    "unit_square",
    "variance_kth_longest",
]
