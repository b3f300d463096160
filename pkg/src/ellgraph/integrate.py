"""Evaluation of decorated graphs into Q[pi][E2h, E4, E6].

A graph is integrated one vertex at a time: stack decoration-(-1)
edges onto a neighbour until the antiholomorphic differential inverts
exactly, then convert the integral over the eliminated vertex into a
residue, which the 0-shifted residual graphs express combinatorially.
The Stokes step contributes a global minus sign:

    W(g) = - sum over w in N(v) of W(Res_w^(v)[0](delta_bar_inverse(g, v)))

Terminal graphs carry only loops and evaluate to the product of their
loop values; a bare vertex contributes 1 (unit-mass volume form).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .graphs import DecoratedGraph, GraphCombination, GraphError, graph_to_json_obj
from .residual import AuditHook, compositions, delta, delta_bar_inverse, residual_graph
from .ring import ONE, ZERO, RingElement, loop_value, partial_Y


def integrate_vertex(
    g: DecoratedGraph, v: str, lift_neighbor: str | None = None
) -> GraphCombination:
    """Eliminate vertex v: a combination on one vertex fewer whose
    evaluation equals W(g).  ``lift_neighbor`` picks where the
    decoration-(-1) stack goes (default: lowest-labelled neighbour)."""
    g._check_vertex(v)
    if len(g.vertices) < 2:
        raise GraphError("need at least two vertices to eliminate one")
    if not g.neighbors(v):
        raise GraphError(f"vertex {v!r} is isolated; nothing to integrate against")
    lifted = delta_bar_inverse(g, v, lift_neighbor)
    out = GraphCombination()
    for graph, c in lifted:
        for w in graph.neighbors(v):
            out += c * residual_graph(graph, v, w, 0)
    return -out


def _loop_factor(g: DecoratedGraph) -> RingElement:
    factor = ONE
    for _, dec in g.loops:
        factor = factor * loop_value(dec)
        if factor.is_zero:
            return ZERO
    return factor


def _has_dangling_vertex(g: DecoratedGraph) -> bool:
    counts: dict[str, int] = {}
    for head, tail, _ in g.edges:
        counts[head] = counts.get(head, 0) + 1
        counts[tail] = counts.get(tail, 0) + 1
    return any(c == 1 for c in counts.values())


def _pick_vertex(g: DecoratedGraph) -> str:
    counts: dict[str, int] = {}
    for head, tail, _ in g.edges:
        counts[head] = counts.get(head, 0) + 1
        counts[tail] = counts.get(tail, 0) + 1
    return min(counts, key=lambda v: (counts[v], v))


@lru_cache(maxsize=None)
def _evaluate_core(core: DecoratedGraph) -> RingElement:
    """Evaluate a loop-free graph."""
    if not core.edges:
        return ONE
    if _has_dangling_vertex(core):
        # a single propagator in the eliminated variable integrates to zero
        return ZERO
    v = _pick_vertex(core)
    total = ZERO
    for term, c in integrate_vertex(core, v):
        total = total + c * _evaluate_graph(term)
    return total


def _evaluate_graph(g: DecoratedGraph) -> RingElement:
    factor = _loop_factor(g)
    if factor.is_zero:
        return ZERO
    return factor * _evaluate_core(g.without_loops())


def evaluate(x: DecoratedGraph | GraphCombination) -> RingElement:
    """W(x): the regularized integral, extended linearly to combinations."""
    if isinstance(x, DecoratedGraph):
        return _evaluate_graph(x)
    total = ZERO
    for g, c in x:
        total = total + c * _evaluate_graph(g)
    return total


# -- traced evaluation -----------------------------------------------------------


@dataclass
class TraceStep:
    graph: DecoratedGraph
    coeff: Fraction
    vertex: str
    neighbor: str
    lifted: GraphCombination
    residual: GraphCombination

    def to_json_obj(self) -> dict:
        return {
            "type": "step",
            "graph": graph_to_json_obj(self.graph),
            "coeff": str(self.coeff),
            "vertex": self.vertex,
            "neighbor": self.neighbor,
            "lifted": [
                {"coeff": str(c), "graph": graph_to_json_obj(g)} for g, c in self.lifted
            ],
            "residual": [
                {"coeff": str(c), "graph": graph_to_json_obj(g)} for g, c in self.residual
            ],
        }


@dataclass
class EliminationTrace:
    root: DecoratedGraph
    steps: list[TraceStep] = field(default_factory=list)
    terminals: list[tuple[DecoratedGraph, Fraction]] = field(default_factory=list)
    collapses: list[dict] = field(default_factory=list)
    value: RingElement = ZERO

    def terminal_value(self) -> RingElement:
        """Replay: the value carried by the terminal loop graphs alone."""
        total = ZERO
        for g, c in self.terminals:
            total = total + c * _loop_factor(g)
        return total

    def to_json_lines(self) -> list[str]:
        import json

        lines = [json.dumps(s.to_json_obj(), sort_keys=True) for s in self.steps]
        lines += [json.dumps(rec, sort_keys=True) for rec in self.collapses]
        lines += [
            json.dumps(
                {"type": "terminal", "coeff": str(c), "graph": graph_to_json_obj(g)},
                sort_keys=True,
            )
            for g, c in self.terminals
        ]
        lines.append(json.dumps({"type": "value", "value": self.value.to_json_obj()}, sort_keys=True))
        return lines


def evaluate_traced(g: DecoratedGraph) -> EliminationTrace:
    """Evaluate while recording every elimination step and collapse
    stratum.  No shortcuts are taken, so the trace replays exactly."""
    trace = EliminationTrace(root=g)
    audit: AuditHook = trace.collapses.append
    pending: list[tuple[DecoratedGraph, Fraction]] = [(g, Fraction(1))]
    while pending:
        graph, coeff = pending.pop(0)
        if not graph.edges:
            trace.terminals.append((graph, coeff))
            continue
        v = _pick_vertex(graph)
        neighbor = graph.neighbors(v)[0]
        lifted = delta_bar_inverse(graph, v, neighbor)
        residual = GraphCombination()
        for term, c in lifted:
            for w in term.neighbors(v):
                residual += c * residual_graph(term, v, w, 0, audit=audit)
        residual = -residual
        trace.steps.append(TraceStep(graph, coeff, v, neighbor, lifted, residual))
        pending.extend((t, coeff * c) for t, c in residual)
    trace.value = trace.terminal_value()
    return trace


# -- closed banana formula --------------------------------------------------------


def banana_closed_form(decorations: list[int]) -> RingElement:
    """Direct evaluation of a two-vertex banana graph.

    With E the lifted edge multiset (the given decorations plus one
    decoration-(-1) edge), the value is

        - sum over nonempty proper A of (-1)^w(A) *
          sum over assignments u of w(A)-1 to E minus A of
          prod_A (n+1)! / prod u! * prod W_{n+u}.
    """
    if not decorations:
        raise GraphError("a banana graph needs at least one edge")
    if any(d < 0 for d in decorations):
        raise GraphError("banana decorations must be naturals")
    decs = [-1] + sorted(decorations)
    n = len(decs)
    total = ZERO
    for mask in range(1, 2**n - 1):
        a_idx = [i for i in range(n) if mask >> i & 1]
        rest = [i for i in range(n) if not mask >> i & 1]
        wa = sum(decs[i] + 2 for i in a_idx)
        numerator = 1
        for i in a_idx:
            numerator *= math.factorial(decs[i] + 1)
        sign = Fraction((-1) ** wa) * numerator
        for values in compositions(wa - 1, len(rest)):
            term = sign * ONE
            dead = False
            for i, u in zip(rest, values):
                w_val = loop_value(decs[i] + u)
                if w_val.is_zero:
                    dead = True
                    break
                term = term * w_val / math.factorial(u)
            if not dead:
                total = total + term
    return -total


# -- anomaly equation checks -------------------------------------------------------


class AnomalyReport(NamedTuple):
    lhs: RingElement
    rhs: RingElement
    equal: bool


def check_anomaly(g: DecoratedGraph) -> AnomalyReport:
    """Compare the ring derivation of W(g) with W(delta(g))."""
    lhs = partial_Y(evaluate(g))
    rhs = evaluate(delta(g))
    return AnomalyReport(lhs, rhs, lhs == rhs)


def _contract_edge(g: DecoratedGraph, e) -> DecoratedGraph:
    """Quotient of a simple decoration-0 edge: its single 1-shifted
    residual stratum (A = {e}, all shifts zero, coefficient +1)."""
    head, tail, _ = e
    comb = residual_graph(g, head, tail, 1)
    terms = comb.items()
    if len(terms) != 1 or terms[0][1] != 1:
        raise GraphError("contraction expects a single unit-coefficient stratum")
    return terms[0][0]


def check_simple_anomaly(g: DecoratedGraph) -> bool:
    """Deletion/contraction form of the anomaly identity for simple
    graphs: no loops, at most one edge per vertex pair, all decorations
    zero.  Raises when the hypotheses fail."""
    if g.loops:
        raise GraphError("simple anomaly check requires a loop-free graph")
    if any(d != 0 for _, _, d in g.edges):
        raise GraphError("simple anomaly check requires all decorations zero")
    for i, (h1, t1, _) in enumerate(g.edges):
        for h2, t2, _ in g.edges[i + 1 :]:
            if {h1, t1} == {h2, t2}:
                raise GraphError("simple anomaly check requires at most one edge per pair")
    lhs = partial_Y(evaluate(g))
    rhs = ZERO
    for e in g.edges:
        rhs = rhs + evaluate(g.remove_edge(e)) - evaluate(_contract_edge(g, e))
    return lhs == rhs
