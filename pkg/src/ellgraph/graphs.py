"""Decorated multigraphs and formal rational linear combinations of them.

A decorated graph has labelled vertices, directed edges (head, tail,
decoration) with decoration >= -1 and head != tail, and loops
(vertex, decoration) with decoration >= 0.  Vertex labels are
significant: graphs are compared as canonical labelled objects, never
up to isomorphism.  Canonical form sorts vertices, edges and loops, so
equal multisets built in any insertion order compare equal.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Edge = tuple[str, str, int]  # (head, tail, decoration >= -1)
Loop = tuple[str, int]  # (vertex, decoration >= 0)


class GraphError(ValueError):
    """Structural violation in a decorated graph."""


class GraphParseError(GraphError):
    """Parse failure; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DecoratedGraph:
    """Immutable canonical decorated multigraph."""

    __slots__ = ("vertices", "edges", "loops")

    def __init__(
        self,
        vertices: Iterable[str] = (),
        edges: Iterable[Edge] = (),
        loops: Iterable[Loop] = (),
    ):
        vset = {str(v) for v in vertices}
        edge_list: list[Edge] = []
        for e in edges:
            head, tail, dec = str(e[0]), str(e[1]), int(e[2])
            if head == tail:
                raise GraphError(f"edge endpoints must differ, got {head!r} -> {tail!r}")
            if dec < -1:
                raise GraphError(f"edge decoration must be >= -1, got {dec}")
            vset.add(head)
            vset.add(tail)
            edge_list.append((head, tail, dec))
        loop_list: list[Loop] = []
        for l in loops:
            vertex, dec = str(l[0]), int(l[1])
            if dec < 0:
                raise GraphError(f"loop decoration must be >= 0, got {dec}")
            vset.add(vertex)
            loop_list.append((vertex, dec))
        object.__setattr__(self, "vertices", tuple(sorted(vset)))
        object.__setattr__(self, "edges", tuple(sorted(edge_list)))
        object.__setattr__(self, "loops", tuple(sorted(loop_list)))

    def __setattr__(self, name, value):
        raise AttributeError("DecoratedGraph is immutable")

    def _key(self):
        return (self.vertices, self.edges, self.loops)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DecoratedGraph):
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other: "DecoratedGraph"):
        return self._key() < other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"DecoratedGraph(vertices={self.vertices}, edges={self.edges}, loops={self.loops})"

    # -- incidence queries ----------------------------------------------------

    def _check_vertex(self, v: str):
        if v not in self.vertices:
            raise GraphError(f"unknown vertex {v!r}")

    def incidence(self, v: str) -> tuple[list[Edge], list[Edge], list[Loop]]:
        """Edges with head v, edges with tail v, and loops at v."""
        self._check_vertex(v)
        eplus = [e for e in self.edges if e[0] == v]
        eminus = [e for e in self.edges if e[1] == v]
        loops_at = [l for l in self.loops if l[0] == v]
        return eplus, eminus, loops_at

    def edges_at(self, v: str) -> list[Edge]:
        self._check_vertex(v)
        return [e for e in self.edges if v in (e[0], e[1])]

    def edges_between(self, v: str, w: str) -> list[Edge]:
        self._check_vertex(v)
        self._check_vertex(w)
        return [e for e in self.edges if {e[0], e[1]} == {v, w}]

    def neighbors(self, v: str) -> list[str]:
        self._check_vertex(v)
        out = {e[1] if e[0] == v else e[0] for e in self.edges if v in (e[0], e[1])}
        return sorted(out)

    # -- rewriting helpers ----------------------------------------------------

    def remove_edge(self, e: Edge) -> "DecoratedGraph":
        """Graph with one occurrence of e removed; all vertices kept."""
        edges = list(self.edges)
        try:
            edges.remove(tuple(e))
        except ValueError:
            raise GraphError(f"edge {e!r} not in graph") from None
        return DecoratedGraph(self.vertices, edges, self.loops)

    def remove_loop(self, l: Loop) -> "DecoratedGraph":
        loops = list(self.loops)
        try:
            loops.remove(tuple(l))
        except ValueError:
            raise GraphError(f"loop {l!r} not in graph") from None
        return DecoratedGraph(self.vertices, self.edges, loops)

    def add_edges(self, extra: Iterable[Edge]) -> "DecoratedGraph":
        return DecoratedGraph(self.vertices, list(self.edges) + list(extra), self.loops)

    def without_loops(self) -> "DecoratedGraph":
        return DecoratedGraph(self.vertices, self.edges, ())

    def reverse_edge(self, e: Edge) -> "DecoratedGraph":
        """Swap head and tail of one occurrence of e."""
        e = tuple(e)
        if len(e) != 3:
            raise GraphError(f"loops have no direction; cannot reverse {e!r}")
        return self.remove_edge(e).add_edges([(e[1], e[0], e[2])])


def canonicalize(g: DecoratedGraph) -> DecoratedGraph:
    """Rebuild the canonical representative (idempotent)."""
    return DecoratedGraph(g.vertices, g.edges, g.loops)


def weight(g: DecoratedGraph, items: Iterable[Edge | Loop]) -> int:
    """Sum of (decoration + 2) over a sub-multiset of edges and loops."""
    pool = list(g.edges) + list(g.loops)
    total = 0
    for item in items:
        item = tuple(item)
        try:
            pool.remove(item)
        except ValueError:
            raise GraphError(f"{item!r} is not in the graph (with multiplicity)") from None
        total += item[-1] + 2
    return total


def disjoint_union(g1: DecoratedGraph, g2: DecoratedGraph) -> tuple[DecoratedGraph, dict[str, str]]:
    """Disjoint union; colliding labels of g2 are suffixed.  Returns the
    union together with the relabelling applied to g2's vertices."""
    taken = set(g1.vertices)
    relabel: dict[str, str] = {}
    for v in g2.vertices:
        new = v
        counter = 1
        while new in taken:
            new = f"{v}_{counter}"
            counter += 1
        relabel[v] = new
        taken.add(new)
    edges = list(g1.edges) + [(relabel[h], relabel[t], d) for h, t, d in g2.edges]
    loops = list(g1.loops) + [(relabel[v], d) for v, d in g2.loops]
    return DecoratedGraph(taken, edges, loops), relabel


def union(g1: DecoratedGraph, g2: DecoratedGraph) -> DecoratedGraph:
    return disjoint_union(g1, g2)[0]


class GraphCombination:
    """A finite formal sum of decorated graphs with rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[DecoratedGraph, Fraction] | Iterable[tuple[DecoratedGraph, Fraction]] = ()):
        acc: dict[DecoratedGraph, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for g, c in items:
            c = Fraction(c)
            if not c:
                continue
            prev = acc.get(g)
            total = c if prev is None else prev + c
            if total:
                acc[g] = total
            elif prev is not None:
                del acc[g]
        self._terms = dict(sorted(acc.items(), key=lambda t: t[0]._key()))

    @classmethod
    def from_graph(cls, g: DecoratedGraph, coeff: Fraction | int = 1) -> "GraphCombination":
        return cls([(g, Fraction(coeff))])

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def items(self) -> list[tuple[DecoratedGraph, Fraction]]:
        return list(self._terms.items())

    def coefficient(self, g: DecoratedGraph) -> Fraction:
        return self._terms.get(g, Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[DecoratedGraph, Fraction]]:
        return iter(self._terms.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphCombination):
            return NotImplemented
        return self._terms == other._terms

    def __add__(self, other: "GraphCombination") -> "GraphCombination":
        if not isinstance(other, GraphCombination):
            return NotImplemented
        return GraphCombination(list(self._terms.items()) + list(other._terms.items()))

    def __radd__(self, other):
        if other == 0:
            return self
        return NotImplemented

    def __neg__(self) -> "GraphCombination":
        return GraphCombination([(g, -c) for g, c in self._terms.items()])

    def __sub__(self, other: "GraphCombination") -> "GraphCombination":
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            return GraphCombination([(g, c * scalar) for g, c in self._terms.items()])
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if not self._terms:
            return "GraphCombination(0)"
        bits = [f"({c}) * [{graph_to_inline(g)}]" for g, c in self._terms.items()]
        return "GraphCombination(" + " + ".join(bits) + ")"


ZERO_COMBINATION = GraphCombination()


# -- text and JSON formats -----------------------------------------------------


def parse_graph_text(text: str) -> DecoratedGraph:
    """Parse the line-oriented graph format.

    Statements: ``vertex <label>``, ``edge <head> <tail> <dec>``,
    ``loop <vertex> <dec>``.  ``#`` starts a comment.  Labels are
    auto-declared on first use.  Errors carry 1-based line numbers.
    """
    vertices: list[str] = []
    edges: list[Edge] = []
    loops: list[Loop] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "vertex":
            if len(parts) != 2:
                raise GraphParseError("vertex takes exactly one label", lineno)
            vertices.append(parts[1])
        elif kind == "edge":
            if len(parts) != 4:
                raise GraphParseError("edge takes <head> <tail> <dec>", lineno)
            head, tail = parts[1], parts[2]
            try:
                dec = int(parts[3])
            except ValueError:
                raise GraphParseError(f"bad decoration {parts[3]!r}", lineno) from None
            if head == tail:
                raise GraphParseError(f"edge endpoints must differ, got {head!r}", lineno)
            if dec < -1:
                raise GraphParseError(f"edge decoration must be >= -1, got {dec}", lineno)
            edges.append((head, tail, dec))
        elif kind == "loop":
            if len(parts) != 3:
                raise GraphParseError("loop takes <vertex> <dec>", lineno)
            try:
                dec = int(parts[2])
            except ValueError:
                raise GraphParseError(f"bad decoration {parts[2]!r}", lineno) from None
            if dec < 0:
                raise GraphParseError(f"loop decoration must be >= 0, got {dec}", lineno)
            loops.append((parts[1], dec))
        else:
            raise GraphParseError(f"unknown statement {kind!r}", lineno)
    return DecoratedGraph(vertices, edges, loops)


def graph_to_text(g: DecoratedGraph) -> str:
    lines = [f"vertex {v}" for v in g.vertices]
    lines += [f"edge {h} {t} {d}" for h, t, d in g.edges]
    lines += [f"loop {v} {d}" for v, d in g.loops]
    return "\n".join(lines)


def graph_to_inline(g: DecoratedGraph) -> str:
    """Single-line rendering of the text format (statements joined by '; ')."""
    return "; ".join(graph_to_text(g).splitlines())


def parse_graph_inline(text: str) -> DecoratedGraph:
    return parse_graph_text(text.replace("; ", "\n"))


def graph_to_json_obj(g: DecoratedGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [[h, t, d] for h, t, d in g.edges],
        "loops": [[v, d] for v, d in g.loops],
    }


def graph_from_json_obj(obj: Mapping) -> DecoratedGraph:
    try:
        vertices = obj.get("vertices", [])
        edges = [tuple(e) for e in obj.get("edges", [])]
        loops = [tuple(l) for l in obj.get("loops", [])]
    except TypeError as exc:
        raise GraphParseError(f"malformed graph object: {exc}") from None
    return DecoratedGraph(vertices, edges, loops)


def parse_graph_json(text: str) -> DecoratedGraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(obj, dict):
        raise GraphParseError("graph JSON must be an object")
    return graph_from_json_obj(obj)
