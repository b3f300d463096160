"""Randomized verification suites behind the ``verify`` command.

Each suite runs over a seeded corpus and returns (cases, failures);
all checks are exact equalities in the ring.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .corpus import all_bananas, banana_graph, random_graph, random_graphs
from .graphs import DecoratedGraph, GraphCombination, disjoint_union, graph_to_inline, weight
from .integrate import banana_closed_form, check_anomaly, evaluate, integrate_vertex
from .oracle import combination_to_formal, oracle_evaluate_banana, oracle_residue_2vertex
from .residual import delta_bar, delta_bar_inverse, residual_graph
from .ring import ZERO, is_homogeneous


def _all_ways_value(g: DecoratedGraph, memo: dict, failures: list[str]):
    """Evaluate through every elimination order and lift-neighbour
    choice; records a failure when two routes disagree."""
    if g in memo:
        return memo[g]
    core = g.without_loops()
    from .integrate import _loop_factor  # internal, but exactly the factor we need

    factor = _loop_factor(g)
    values = set()
    if not core.edges:
        value = factor
    else:
        edge_vertices = sorted({v for e in core.edges for v in (e[0], e[1])})
        for v in edge_vertices:
            for lift in core.neighbors(v):
                comb = integrate_vertex(core, v, lift_neighbor=lift)
                total = ZERO
                for t, c in comb:
                    total = total + c * _all_ways_value(t, memo, failures)
                values.add(total)
        if len(values) != 1:
            failures.append(f"order dependence on [{graph_to_inline(g)}]: {len(values)} values")
        value = factor * next(iter(values))
    memo[g] = value
    return value


def suite_order_independence(seed: int, count: int, max_weight: int) -> tuple[int, list[str]]:
    rng = random.Random(seed)
    failures: list[str] = []
    memo: dict = {}
    cases = 0
    for _ in range(count):
        g = random_graph(rng, max_vertices=4, max_weight=max_weight, min_vertices=3)
        cases += 1
        value = _all_ways_value(g, memo, failures)
        if value != evaluate(g):
            failures.append(f"all-ways value differs from evaluate on [{graph_to_inline(g)}]")
    return cases, failures


def suite_weight_homogeneity(graphs) -> tuple[int, list[str]]:
    failures = []
    for g in graphs:
        w = weight(g, list(g.edges) + list(g.loops))
        value = evaluate(g)
        if not is_homogeneous(value, w):
            failures.append(f"inhomogeneous value {value} for weight {w} on [{graph_to_inline(g)}]")
    return len(graphs), failures


def suite_anomaly(graphs) -> tuple[int, list[str]]:
    failures = []
    for g in graphs:
        report = check_anomaly(g)
        if not report.equal:
            failures.append(
                f"anomaly mismatch on [{graph_to_inline(g)}]: {report.lhs} vs {report.rhs}"
            )
    return len(graphs), failures


def suite_round_trip(graphs) -> tuple[int, list[str]]:
    failures = []
    cases = 0
    for g in graphs:
        for v in g.vertices:
            for w in g.vertices:
                if v == w:
                    continue
                cases += 1
                gamma = delta_bar_inverse(g, v, w)
                back = sum((c * delta_bar(t, v) for t, c in gamma), start=GraphCombination())
                if back != GraphCombination.from_graph(g):
                    failures.append(f"round trip failed at ({v},{w}) on [{graph_to_inline(g)}]")
    return cases, failures


def suite_parity(graphs) -> tuple[int, list[str]]:
    failures = []
    cases = 0
    for g in graphs:
        base = evaluate(g)
        for e in set(g.edges):
            cases += 1
            flipped = evaluate(g.reverse_edge(e))
            if flipped != Fraction((-1) ** abs(e[2])) * base:
                failures.append(f"parity failed on edge {e} of [{graph_to_inline(g)}]")
    return cases, failures


def suite_dangling(graphs) -> tuple[int, list[str]]:
    failures = []
    cases = 0
    for g in graphs:
        extended = DecoratedGraph(
            list(g.vertices) + ["zz_dangle"],
            list(g.edges) + [(g.vertices[0], "zz_dangle", 0)],
            g.loops,
        )
        cases += 1
        if not evaluate(extended).is_zero:
            failures.append(f"dangling vertex did not vanish on [{graph_to_inline(extended)}]")
    return cases, failures


def suite_multiplicativity(graphs) -> tuple[int, list[str]]:
    failures = []
    pairs = list(zip(graphs[::2], graphs[1::2]))
    for g1, g2 in pairs:
        u, _ = disjoint_union(g1, g2)
        if evaluate(u) != evaluate(g1) * evaluate(g2):
            failures.append(
                f"union value is not the product for [{graph_to_inline(g1)}] and [{graph_to_inline(g2)}]"
            )
    return len(pairs), failures


def suite_oracle_bananas(max_edges: int = 4, max_decoration: int = 4) -> tuple[int, list[str]]:
    failures = []
    cases = 0
    for decs in all_bananas(max_edges, max_decoration):
        cases += 1
        g = banana_graph(decs)
        by_elimination = evaluate(g)
        by_formula = banana_closed_form(list(decs))
        by_series = oracle_evaluate_banana(decs)
        if not (by_elimination == by_formula == by_series):
            failures.append(
                f"banana {decs}: elimination {by_elimination}, formula {by_formula}, series {by_series}"
            )
    return cases, failures


def suite_oracle_collapse(seed: int, count: int = 60) -> tuple[int, list[str]]:
    """Fuzz every sign path of the collapse coefficient against the
    series oracle on stars with mixed orientations."""
    rng = random.Random(seed)
    failures = []
    for _ in range(count):
        vw = [(rng.randint(-1, 3), rng.random() < 0.5) for _ in range(rng.randint(1, 3))]
        other = [
            (rng.randint(-1, 2), rng.random() < 0.5, rng.choice(["x1", "x2"]))
            for _ in range(rng.randint(0, 2))
        ]
        k = rng.choice([0, 1])
        edges = [("v", "w", d) if h else ("w", "v", d) for d, h in vw]
        edges += [("v", t, d) if h else (t, "v", d) for d, h, t in other]
        g = DecoratedGraph(vertices=["v", "w"], edges=edges)
        lhs = oracle_residue_2vertex(vw, other, k=k)
        rhs = combination_to_formal(residual_graph(g, "v", "w", k))
        if lhs != rhs:
            failures.append(f"collapse oracle mismatch: vw={vw} other={other} k={k}")
    return count, failures


def suite_residual_symmetry(graphs) -> tuple[int, list[str]]:
    """Evaluated symmetry of the k-shifted residual under swapping the
    collapse direction: W(Res_w^(v)[k]) = (-1)^(k+1) W(Res_v^(w)[k])."""
    failures = []
    cases = 0
    for g in graphs:
        for v in g.vertices:
            for w in g.vertices:
                if v >= w:
                    continue
                for k in (0, 1):
                    cases += 1
                    lhs = evaluate(residual_graph(g, v, w, k))
                    rhs = Fraction((-1) ** (k + 1)) * evaluate(residual_graph(g, w, v, k))
                    if lhs != rhs:
                        failures.append(
                            f"residual symmetry failed at ({v},{w},k={k}) on [{graph_to_inline(g)}]"
                        )
    return cases, failures


def run_suites(
    seed: int = 0,
    max_vertices: int = 3,
    max_weight: int = 8,
    anomaly_count: int = 40,
    order_count: int = 12,
) -> dict:
    """Run every suite on a deterministic corpus; returns a report dict."""
    graphs = random_graphs(seed, anomaly_count, max_vertices, max_weight)
    signed = random_graphs(seed + 1, anomaly_count, max_vertices, max_weight, allow_minus_one=True)
    suites = {
        "anomaly": suite_anomaly(graphs),
        "weight_homogeneity": suite_weight_homogeneity(graphs),
        "order_independence": suite_order_independence(seed + 2, order_count, min(max_weight, 8)),
        "round_trip": suite_round_trip(signed[: anomaly_count // 2]),
        "parity": suite_parity(signed[: anomaly_count // 2]),
        "dangling": suite_dangling(graphs[: anomaly_count // 2]),
        "multiplicativity": suite_multiplicativity(graphs[: anomaly_count // 2]),
        "residual_symmetry": suite_residual_symmetry(signed[: anomaly_count // 4]),
        "oracle_bananas": suite_oracle_bananas(3, 3),
        "oracle_collapse": suite_oracle_collapse(seed + 3),
    }
    report = {
        "seed": seed,
        "limits": {"max_vertices": max_vertices, "max_weight": max_weight},
        "suites": {
            name: {"cases": cases, "failures": failures} for name, (cases, failures) in suites.items()
        },
    }
    report["passed"] = all(not s["failures"] for s in report["suites"].values())
    return report
