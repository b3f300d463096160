"""Exact regularized Feynman graph integrals on elliptic curves.

Decorated multigraphs are integrated into the ring Q[pi][E2h, E4, E6]
of almost-holomorphic modular forms by iterated vertex elimination, the
graph-level holomorphic anomaly operator is provided alongside, and an
independent Laurent-series oracle cross-checks both.
"""

from .corpus import all_bananas, banana_graph, random_graph, random_graphs
from .graphs import (
    DecoratedGraph,
    GraphCombination,
    GraphError,
    GraphParseError,
    canonicalize,
    disjoint_union,
    graph_from_json_obj,
    graph_to_inline,
    graph_to_json_obj,
    graph_to_text,
    parse_graph_inline,
    parse_graph_json,
    parse_graph_text,
    union,
    weight,
)
from .integrate import (
    AnomalyReport,
    EliminationTrace,
    banana_closed_form,
    check_anomaly,
    check_simple_anomaly,
    evaluate,
    evaluate_traced,
    integrate_vertex,
)
from .oracle import (
    BiSeries,
    FormalSum,
    OracleTruncationError,
    combination_to_formal,
    oracle_evaluate_banana,
    oracle_residue_2vertex,
    series_phat_deriv,
    series_propagator,
    series_shift_expand,
    series_zhat,
)
from .residual import (
    Assignment,
    collapse_coefficient,
    compositions,
    delta,
    delta_bar,
    delta_bar_inverse,
    enumerate_assignments,
    residual_graph,
)
from .ring import (
    E2H,
    E4,
    E6,
    ONE,
    PI,
    ZERO,
    RingElement,
    bernoulli,
    eisenstein_G,
    is_homogeneous,
    loop_value,
    partial_Y,
    q_expansion,
    rational,
    reduce_Ek,
    zeta_even,
)
from .verify import run_suites

__version__ = "0.1.0"
