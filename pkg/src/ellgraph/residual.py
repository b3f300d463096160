"""Collapse combinatorics: assignments, residual graphs, and the graph
differentials.

Collapsing a vertex v into a neighbour w replaces a chosen nonempty set
A of v-w edges by their pole contribution and redistributes the freed
weight over the remaining edges at v as decoration shifts.  Each way of
doing so is weighted by a signed rational collapse coefficient; the
resulting linear combination of quotient graphs is the k-shifted
residual graph.  On top of that sit the holomorphic anomaly operator
``delta`` and the antiholomorphic operators ``delta_bar`` and
``delta_bar_inverse``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

from .graphs import (
    DecoratedGraph,
    Edge,
    GraphCombination,
    GraphError,
    graph_to_json_obj,
)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` naturals summing to ``total``, in
    colexicographic order.  Zero parts: one empty tuple iff total == 0."""
    if total < 0:
        return
    if parts == 0:
        if total == 0:
            yield ()
        return
    for last in range(total + 1):
        for rest in compositions(total - last, parts - 1):
            yield rest + (last,)


@dataclass(frozen=True)
class Assignment:
    """A function from an ordered edge list to naturals with a fixed sum."""

    edges: tuple
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.edges) != len(self.values):
            raise ValueError("assignment must cover every target edge exactly once")
        if any(v < 0 for v in self.values):
            raise ValueError("assignment values must be naturals")

    @property
    def total(self) -> int:
        return sum(self.values)


def enumerate_assignments(edges: Sequence, total: int) -> Iterator[Assignment]:
    """All assignments of ``total`` to ``edges``; exhaustive and
    duplicate-free, |P(A, m)| = C(m + |A| - 1, |A| - 1) for |A| >= 1."""
    edges = tuple(edges)
    for values in compositions(total, len(edges)):
        yield Assignment(edges, values)


# -- collapse coefficients and residual graphs ---------------------------------


def _edge_indices(g: DecoratedGraph, v: str, w: str):
    edges = g.edges
    at_v = [i for i, e in enumerate(edges) if v in (e[0], e[1])]
    between = [i for i in at_v if w in (edges[i][0], edges[i][1])]
    return edges, at_v, between


def _coefficient(
    edges: Sequence[Edge],
    v: str,
    w: str,
    between: Sequence[int],
    a_idx: Sequence[int],
    rest_idx: Sequence[int],
    values: Sequence[int],
) -> Fraction:
    """Signed collapse coefficient for the subset A (by edge index) and
    the shift assignment on the remaining edges at v."""
    # tail-at-v edges between v and w flip the propagator parity
    exponent = sum(edges[i][2] + 2 for i in between if edges[i][1] == v)
    exponent += sum(edges[i][2] + 2 for i in a_idx)
    numerator = 1
    for i in a_idx:
        numerator *= math.factorial(edges[i][2] + 1)
    denominator = 1
    for i, u in zip(rest_idx, values):
        denominator *= math.factorial(u)
        head, tail, _ = edges[i]
        # Taylor shifts of tail-at-v edges that do not touch w carry (-1)^u
        if tail == v and w not in (head, tail) and i not in between:
            exponent += u
    return Fraction((-1) ** exponent) * Fraction(numerator, denominator)


def collapse_coefficient(
    g: DecoratedGraph,
    v: str,
    w: str,
    a_edges: Sequence[Edge],
    u_values: Sequence[int],
) -> Fraction:
    """Public form of the collapse coefficient.

    ``a_edges`` is a nonempty sub-multiset of the v-w edges;
    ``u_values`` aligns with the sorted multiset of remaining edges at v.
    """
    g._check_vertex(v)
    g._check_vertex(w)
    edges, at_v, between = _edge_indices(g, v, w)
    if not a_edges:
        raise GraphError("the collapsed edge set A must be nonempty")
    remaining = list(between)
    a_idx = []
    for e in a_edges:
        e = tuple(e)
        match = next((i for i in remaining if edges[i] == e), None)
        if match is None:
            raise GraphError(f"{e!r} is not a v-w edge available for collapse")
        remaining.remove(match)
        a_idx.append(match)
    rest_idx = sorted((i for i in at_v if i not in a_idx), key=lambda i: edges[i])
    if len(u_values) != len(rest_idx):
        raise GraphError(
            f"assignment covers {len(u_values)} edges but E_v minus A has {len(rest_idx)}"
        )
    if any(u < 0 for u in u_values):
        raise GraphError("assignment values must be naturals")
    return _coefficient(edges, v, w, between, a_idx, rest_idx, u_values)


def _quotient(
    g: DecoratedGraph,
    v: str,
    w: str,
    a_set: frozenset[int],
    rest_idx: Sequence[int],
    values: Sequence[int],
) -> DecoratedGraph | None:
    """Quotient graph for one collapse stratum, or None when a surviving
    v-w edge of decoration -1 receives no shift (its loop value W_{-1}
    vanishes, so the whole term is zero)."""
    edges = g.edges
    shift = dict(zip(rest_idx, values))
    new_edges: list[Edge] = []
    new_loops: list = [(w, d) if vert == v else (vert, d) for vert, d in g.loops]
    for i, (head, tail, dec) in enumerate(edges):
        if i in a_set:
            continue
        if i in shift:
            d = dec + shift[i]
            if {head, tail} == {v, w}:
                if d < 0:
                    return None
                new_loops.append((w, d))
            elif head == v:
                new_edges.append((w, tail, d))
            else:
                new_edges.append((head, w, d))
        else:
            new_edges.append((head, tail, dec))
    vertices = [x for x in g.vertices if x != v]
    return DecoratedGraph(vertices, new_edges, new_loops)


AuditHook = Callable[[dict], None]


def residual_graph(
    g: DecoratedGraph,
    v: str,
    w: str,
    k: int,
    audit: AuditHook | None = None,
) -> GraphCombination:
    """The k-shifted residual graph of g with v collapsing into w.

    Sums over nonempty subsets A of the v-w edges and over all
    assignments of weight(A) - 1 - k to the other edges at v; zero when
    no v-w edge exists.  ``audit``, when given, receives one record per
    contributing (A, u) stratum.
    """
    if v == w:
        raise GraphError("collapse requires two distinct vertices")
    g._check_vertex(v)
    g._check_vertex(w)
    edges, at_v, between = _edge_indices(g, v, w)
    if not between:
        return GraphCombination()
    terms: list[tuple[DecoratedGraph, Fraction]] = []
    for size in range(1, len(between) + 1):
        for a_idx in combinations(between, size):
            a_set = frozenset(a_idx)
            m = sum(edges[i][2] + 2 for i in a_idx) - 1 - k
            if m < 0:
                continue
            rest_idx = [i for i in at_v if i not in a_set]
            for values in compositions(m, len(rest_idx)):
                coeff = _coefficient(edges, v, w, between, a_idx, rest_idx, values)
                quotient = _quotient(g, v, w, a_set, rest_idx, values)
                if quotient is None:
                    continue
                terms.append((quotient, coeff))
                if audit is not None:
                    audit(
                        {
                            "type": "collapse",
                            "v": v,
                            "w": w,
                            "k": k,
                            "A": [list(edges[i]) for i in a_idx],
                            "u": [
                                [list(edges[i]), val]
                                for i, val in zip(rest_idx, values)
                            ],
                            "coeff": str(coeff),
                            "quotient": graph_to_json_obj(quotient),
                        }
                    )
    return GraphCombination(terms)


# -- graph differentials --------------------------------------------------------


def delta(g: DecoratedGraph, audit: AuditHook | None = None) -> GraphCombination:
    """The holomorphic anomaly operator: deletion of every
    decoration-0 edge and loop, minus half the sum of 1-shifted residual
    graphs over ordered vertex pairs."""
    out = GraphCombination()
    for e in g.edges:
        if e[2] == 0:
            out += GraphCombination.from_graph(g.remove_edge(e))
    for l in g.loops:
        if l[1] == 0:
            out += GraphCombination.from_graph(g.remove_loop(l))
    half = Fraction(1, 2)
    for v in g.vertices:
        for w in g.vertices:
            if v != w:
                out -= half * residual_graph(g, v, w, 1, audit=audit)
    return out


def delta_bar(g: DecoratedGraph, v: str) -> GraphCombination:
    """Signed deletion of decoration-(-1) edges at v: head occurrences
    with +, tail occurrences with -."""
    g._check_vertex(v)
    out = GraphCombination()
    for e in g.edges:
        if e[2] != -1:
            continue
        if e[0] == v:
            out += GraphCombination.from_graph(g.remove_edge(e))
        elif e[1] == v:
            out -= GraphCombination.from_graph(g.remove_edge(e))
    return out


def _delta_bar_off_stack(comb: GraphCombination, v: str, w: str) -> GraphCombination:
    """delta_bar at v restricted to edges other than the (v, w, -1) stack."""
    out = GraphCombination()
    stack = (v, w, -1)
    for g, c in comb:
        for e in g.edges:
            if e[2] != -1 or e == stack:
                continue
            if e[0] == v:
                out += c * GraphCombination.from_graph(g.remove_edge(e))
            elif e[1] == v:
                out -= c * GraphCombination.from_graph(g.remove_edge(e))
    return out


def delta_bar_inverse(g: DecoratedGraph, v: str, w: str | None = None) -> GraphCombination:
    """A right inverse of delta_bar at v: delta_bar(result, v) == g exactly.

    New decoration-(-1) edges are stacked from v onto the chosen vertex
    w (default: the lowest-labelled neighbour of v).  With l existing
    (v, w, -1) edges, the k-th correction carries k extra stack edges
    and the coefficient (-1)^(k-1) / ((l+1)...(l+k)); the sum terminates
    because each correction removes one of the finitely many other
    decoration-(-1) edges at v.
    """
    g._check_vertex(v)
    if w is None:
        nbrs = g.neighbors(v)
        if not nbrs:
            raise GraphError(f"vertex {v!r} has no neighbour to stack onto; pass w explicitly")
        w = nbrs[0]
    else:
        g._check_vertex(w)
    if v == w:
        raise GraphError("stack vertex must differ from the eliminated vertex")
    stack = (v, w, -1)
    l = g.edges.count(stack)
    current = GraphCombination.from_graph(g)
    out = GraphCombination()
    denominator = 1
    k = 0
    while not current.is_zero:
        k += 1
        denominator *= l + k
        coeff = Fraction((-1) ** (k - 1), denominator)
        out += coeff * GraphCombination(
            [(graph.add_edges([stack] * k), c) for graph, c in current]
        )
        current = _delta_bar_off_stack(current, v, w)
    return out
