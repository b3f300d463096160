"""Seeded random graph corpora for the verification suites."""

from __future__ import annotations

import random
from itertools import combinations_with_replacement
from typing import Iterator

from .graphs import DecoratedGraph


def random_graph(
    rng: random.Random,
    max_vertices: int = 4,
    max_weight: int = 12,
    max_decoration: int = 4,
    allow_minus_one: bool = False,
    min_vertices: int = 1,
) -> DecoratedGraph:
    nv = rng.randint(min_vertices, max_vertices)
    labels = [f"v{i}" for i in range(1, nv + 1)]
    budget = max_weight
    edges = []
    loops = []
    for _ in range(rng.randint(0, 2 * nv + 2)):
        if budget < 1:
            break
        low = -1 if allow_minus_one else 0
        if nv >= 2 and rng.random() < 0.75:
            dec = rng.randint(low, max_decoration)
            if dec + 2 > budget:
                continue
            head, tail = rng.sample(labels, 2)
            edges.append((head, tail, dec))
            budget -= dec + 2
        else:
            dec = rng.randint(0, max_decoration)
            if dec + 2 > budget:
                continue
            loops.append((rng.choice(labels), dec))
            budget -= dec + 2
    return DecoratedGraph(labels, edges, loops)


def random_graphs(
    seed: int,
    count: int,
    max_vertices: int = 4,
    max_weight: int = 12,
    max_decoration: int = 4,
    allow_minus_one: bool = False,
    min_vertices: int = 1,
) -> list[DecoratedGraph]:
    rng = random.Random(seed)
    return [
        random_graph(rng, max_vertices, max_weight, max_decoration, allow_minus_one, min_vertices)
        for _ in range(count)
    ]


def all_bananas(max_edges: int, max_decoration: int) -> Iterator[tuple[int, ...]]:
    """Decoration multisets of every banana with 1..max_edges edges."""
    for n_edges in range(1, max_edges + 1):
        yield from combinations_with_replacement(range(max_decoration + 1), n_edges)


def banana_graph(decorations: tuple[int, ...]) -> DecoratedGraph:
    return DecoratedGraph(edges=[("v", "w", d) for d in decorations])
