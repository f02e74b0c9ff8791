"""Naive reference oracle: enumerate every assignment V -> {1..k}."""

import logging
from itertools import product
from typing import Optional, Set

from .graph_core import Graph
from .solver import ColoringMap, Partition, verify

logger = logging.getLogger(__name__)

MAX_VERTICES = 9


def _guard(g: Graph):
    if g.n > MAX_VERTICES:
        raise ValueError(f"brute force is limited to {MAX_VERTICES} vertices, got {g.n}")


def _satisfies(g: Graph, colors, r: int) -> bool:
    for v in range(g.n):
        nbrs = g.adjacency[v]
        if any(colors[w] == colors[v] for w in nbrs):
            return False
        if len({colors[w] for w in nbrs}) < min(len(nbrs), r):
            return False
    return True


def brute_force_feasible(g: Graph, k: int, r: int) -> Optional[ColoringMap]:
    """First assignment (lexicographic) satisfying (C1) and (C2) with at most k colors."""
    _guard(g)
    for colors in product(range(1, k + 1), repeat=g.n):
        if _satisfies(g, colors, r):
            witness = ColoringMap(colors=colors, k=k, r=r).normalized()
            assert verify(g, witness, r).ok
            return witness
    return None


def brute_force_chi_r(g: Graph, r: int) -> int:
    _guard(g)
    for k in range(1, g.n + 1):
        if brute_force_feasible(g, k, r) is not None:
            return k
    raise AssertionError("all-distinct coloring must be feasible")


def brute_force_partitions(g: Graph, k: int, r: int) -> Set[Partition]:
    """Partitions induced by all surjective conditional (k, r)-colorings."""
    _guard(g)
    found: Set[Partition] = set()
    for colors in product(range(1, k + 1), repeat=g.n):
        if len(set(colors)) == k and _satisfies(g, colors, r):
            found.add(Partition.from_colors(colors))
    return found
