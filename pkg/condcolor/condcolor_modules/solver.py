import logging
import time
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .graph_core import Graph

logger = logging.getLogger(__name__)

# deadline is polled every this many search nodes
_CLOCK_STRIDE = 1024


class SolverTimeout(RuntimeError):
    """Wall-clock budget exhausted before the search finished."""

    def __init__(self, nodes: int, elapsed_ms: float):
        self.nodes = nodes
        self.elapsed_ms = elapsed_ms
        super().__init__(f"search timed out after {elapsed_ms:.0f} ms ({nodes} nodes)")


class ChiMismatchError(ValueError):
    """Partition enumeration requested at a k that is not chi_r."""


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------
class Partition(BaseModel):
    """Canonical color-class partition: blocks ascending, ordered by smallest element."""

    model_config = ConfigDict(frozen=True)

    blocks: Tuple[Tuple[int, ...], ...]

    @model_validator(mode="after")
    def _canonical(self):
        seen = [v for block in self.blocks for v in block]
        if any(not block for block in self.blocks):
            raise ValueError("partition blocks must be nonempty")
        if sorted(seen) != list(range(len(seen))):
            raise ValueError("partition blocks must be disjoint and cover 0..n-1")
        if any(list(block) != sorted(block) for block in self.blocks):
            raise ValueError("partition blocks must be sorted")
        if [block[0] for block in self.blocks] != sorted(block[0] for block in self.blocks):
            raise ValueError("partition blocks must be ordered by smallest element")
        return self

    @classmethod
    def from_colors(cls, colors: Sequence[int]) -> "Partition":
        classes: Dict[int, List[int]] = {}
        for v, c in enumerate(colors):
            classes.setdefault(c, []).append(v)
        return cls(blocks=tuple(sorted(tuple(block) for block in classes.values())))

    def __len__(self) -> int:
        return len(self.blocks)


class ColoringMap(BaseModel):
    """Vertex colors in 1..k; ``r`` is recorded once the map is certified."""

    model_config = ConfigDict(frozen=True)

    colors: Tuple[int, ...]
    k: int = Field(ge=1)
    r: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _in_range(self):
        for v, c in enumerate(self.colors):
            if not 1 <= c <= self.k:
                raise ValueError(f"color {c} of vertex {v} outside 1..{self.k}")
        return self

    @property
    def certified(self) -> bool:
        return self.r is not None

    @property
    def used(self) -> int:
        return len(set(self.colors))

    def partition(self) -> Partition:
        return Partition.from_colors(self.colors)

    def normalized(self) -> "ColoringMap":
        """Relabel colors by first use in vertex-id order and shrink k to the colors used."""
        relabel: Dict[int, int] = {}
        for c in self.colors:
            relabel.setdefault(c, len(relabel) + 1)
        return ColoringMap(colors=tuple(relabel[c] for c in self.colors), k=len(relabel), r=self.r)


class ViolationKind(str, Enum):
    C1 = "C1"
    C2 = "C2"
    NOT_SURJECTIVE = "not-surjective"


class Verdict(BaseModel):
    ok: bool
    kind: Optional[ViolationKind] = None
    vertex: Optional[int] = None
    other: Optional[int] = None
    detail: str = ""

    def describe(self) -> str:
        if self.ok:
            return "ok"
        if self.kind is ViolationKind.C1:
            return f"violation C1 at edge (v{self.vertex},v{self.other}): {self.detail}"
        if self.kind is ViolationKind.C2:
            return f"violation C2 at v{self.vertex}: {self.detail}"
        return f"violation not-surjective: {self.detail}"


class SolveResult(BaseModel):
    chi_r: int
    witness: ColoringMap
    lower_bound_used: int
    nodes_explored: int
    elapsed_ms: float

    @model_validator(mode="after")
    def _certified_witness(self):
        if not self.witness.certified or self.witness.k != self.chi_r:
            raise ValueError(f"witness is not certified at k={self.chi_r}")
        if self.lower_bound_used > self.chi_r:
            raise ValueError(f"lower bound {self.lower_bound_used} exceeds chi_r={self.chi_r}")
        return self


class UniquenessResult(BaseModel):
    k: int
    r: int
    partitions: List[Partition]
    unique: bool
    exhausted: bool = True
    nodes_explored: int = 0


# ---------------------------------------------------------------------------
# Checks and bounds
# ---------------------------------------------------------------------------
def verify(g: Graph, c: ColoringMap, r: int) -> Verdict:
    """Check (C1), (C2) with threshold min(d(v), r), and use of all k colors."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if len(c.colors) != g.n:
        raise ValueError(f"coloring has {len(c.colors)} entries for {g.n} vertices")
    colors = c.colors
    for v in range(g.n):
        nbrs = g.adjacency[v]
        for w in nbrs:
            if colors[w] == colors[v]:
                return Verdict(
                    ok=False,
                    kind=ViolationKind.C1,
                    vertex=min(v, w),
                    other=max(v, w),
                    detail=f"both colored {colors[v]}",
                )
        seen = {colors[w] for w in nbrs}
        need = min(len(nbrs), r)
        if len(seen) < need:
            return Verdict(
                ok=False,
                kind=ViolationKind.C2,
                vertex=v,
                detail=f"neighbor colors {sorted(seen)} but min(d,r)={need}",
            )
    used = set(colors)
    if len(used) != c.k:
        missing = sorted(set(range(1, c.k + 1)) - used)
        return Verdict(ok=False, kind=ViolationKind.NOT_SURJECTIVE, detail=f"colors {missing} unused")
    return Verdict(ok=True)


def greedy_clique(g: Graph) -> List[int]:
    """Largest clique found by greedy growth from every seed vertex."""
    best: List[int] = []
    for seed in range(g.n):
        clique = [seed]
        candidates = set(g.adjacency[seed])
        while candidates:
            v = max(candidates, key=lambda u: (g.degree(u), -u))
            clique.append(v)
            candidates &= g.neighbor_sets[v]
        if len(clique) > len(best):
            best = sorted(clique)
    return best


def lower_bound(g: Graph, r: int) -> int:
    """max(min(r, Δ) + 1, greedy clique size)."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    return max(min(r, g.max_degree) + 1, len(greedy_clique(g)))


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------
class _ConditionalSearch:
    """Backtracking over vertices by descending degree with first-use color symmetry breaking.

    Each restricted-growth labeling along the search order is a distinct color-class
    partition, so complete assignments are visited once per partition.
    """

    def __init__(self, g: Graph, k: int, r: int, deadline: Optional[float], started: float):
        self.g = g
        self.k = k
        self.r = r
        self.deadline = deadline
        self.started = started
        self.nodes = 0

        n = g.n
        self.order = sorted(range(n), key=lambda v: (-g.degree(v), v))
        self.need = [min(g.degree(v), r) for v in range(n)]
        self.colors = [0] * n
        self.nbr_color_count = [[0] * (k + 1) for _ in range(n)]
        self.distinct = [0] * n
        self.uncolored = [g.degree(v) for v in range(n)]

    def _tick(self):
        self.nodes += 1
        if self.deadline is not None and self.nodes % _CLOCK_STRIDE == 0:
            now = time.perf_counter()
            if now > self.deadline:
                raise SolverTimeout(self.nodes, (now - self.started) * 1000)

    def _assign(self, v: int, c: int) -> bool:
        self.colors[v] = c
        ok = True
        for w in self.g.adjacency[v]:
            counts = self.nbr_color_count[w]
            counts[c] += 1
            if counts[c] == 1:
                self.distinct[w] += 1
            self.uncolored[w] -= 1
            if self.distinct[w] + self.uncolored[w] < self.need[w]:
                ok = False
        return ok

    def _unassign(self, v: int, c: int):
        self.colors[v] = 0
        for w in self.g.adjacency[v]:
            counts = self.nbr_color_count[w]
            counts[c] -= 1
            if counts[c] == 0:
                self.distinct[w] -= 1
            self.uncolored[w] += 1

    def solutions(self, surjective: bool = False) -> Iterator[Tuple[int, ...]]:
        if any(need > self.k - 1 for need in self.need):
            return iter(())
        return self._extend(0, 0, surjective)

    def _extend(self, pos: int, max_used: int, surjective: bool) -> Iterator[Tuple[int, ...]]:
        n = self.g.n
        if pos == n:
            if not surjective or max_used == self.k:
                yield tuple(self.colors)
            return
        if surjective and max_used + (n - pos) < self.k:
            return
        v = self.order[pos]
        counts = self.nbr_color_count[v]
        for c in range(1, min(self.k, max_used + 1) + 1):
            if counts[c]:
                continue
            self._tick()
            if self._assign(v, c):
                yield from self._extend(pos + 1, max(max_used, c), surjective)
            self._unassign(v, c)


def _deadline(timeout_ms: Optional[float], started: float) -> Optional[float]:
    return None if timeout_ms is None else started + timeout_ms / 1000


def remaining_ms(timeout_ms: Optional[float], started: float) -> Optional[float]:
    """What is left of a budget that began at ``started`` (perf_counter seconds), never negative."""
    if timeout_ms is None:
        return None
    return max(timeout_ms - (time.perf_counter() - started) * 1000, 0.0)


def _feasible(
    g: Graph, k: int, r: int, deadline: Optional[float], started: float
) -> Tuple[Optional[ColoringMap], int]:
    search = _ConditionalSearch(g, k, r, deadline, started)
    found = next(search.solutions(), None)
    if found is None:
        return None, search.nodes
    return ColoringMap(colors=found, k=k, r=r).normalized(), search.nodes


def feasible(g: Graph, k: int, r: int, timeout_ms: Optional[float] = None) -> Optional[ColoringMap]:
    """A certified conditional coloring using at most k colors, or None.

    Raises SolverTimeout when ``timeout_ms`` elapses first.
    """
    if k < 1 or r < 1:
        raise ValueError(f"k and r must be >= 1, got k={k}, r={r}")
    started = time.perf_counter()
    witness, _ = _feasible(g, k, r, _deadline(timeout_ms, started), started)
    return witness


def chi_r(g: Graph, r: int, timeout_ms: Optional[float] = None) -> SolveResult:
    """Smallest k with a conditional (k, r)-coloring, scanning upward from lower_bound."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    started = time.perf_counter()
    deadline = _deadline(timeout_ms, started)
    lb = lower_bound(g, r)
    nodes = 0
    for k in range(lb, g.n + 1):
        try:
            witness, explored = _feasible(g, k, r, deadline, started)
        except SolverTimeout as e:
            logger.warning(f"[Solver] chi_r timed out at k={k}, r={r}, n={g.n}")
            raise SolverTimeout(nodes + e.nodes, e.elapsed_ms)
        nodes += explored
        logger.debug(f"[Solver] n={g.n} r={r} k={k}: {'feasible' if witness else 'infeasible'} ({explored} nodes)")
        if witness is not None:
            return SolveResult(
                chi_r=witness.k,
                witness=witness,
                lower_bound_used=lb,
                nodes_explored=nodes,
                elapsed_ms=(time.perf_counter() - started) * 1000,
            )
    # k = n with all-distinct colors always satisfies (C1) and (C2)
    raise AssertionError(f"no conditional coloring with {g.n} colors")


def enumerate_partitions(
    g: Graph,
    k: int,
    r: int,
    cap: Optional[int] = None,
    check: bool = True,
    timeout_ms: Optional[float] = None,
) -> UniquenessResult:
    """Distinct color-class partitions induced by conditional (k, r)-colorings.

    ``cap`` stops the enumeration once that many partitions are known (2 suffices for
    a uniqueness decision); ``check`` confirms k = chi_r first.
    """
    if cap is not None and cap < 2:
        raise ValueError(f"cap must be >= 2, got {cap}")
    started = time.perf_counter()
    if check:
        actual = chi_r(g, r, timeout_ms=timeout_ms).chi_r
        if actual != k:
            raise ChiMismatchError(f"k={k} but chi_{r}={actual}")
    search = _ConditionalSearch(g, k, r, _deadline(timeout_ms, started), started)
    found: List[Partition] = []
    seen = set()
    exhausted = True
    for colors in search.solutions(surjective=True):
        partition = Partition.from_colors(colors)
        if partition in seen:
            continue
        seen.add(partition)
        found.append(partition)
        if cap is not None and len(found) >= cap:
            exhausted = False
            break
    found.sort(key=lambda p: p.blocks)
    return UniquenessResult(
        k=k,
        r=r,
        partitions=found,
        unique=len(found) == 1,
        exhausted=exhausted,
        nodes_explored=search.nodes,
    )


def is_uniquely_colorable(
    g: Graph, r: int, timeout_ms: Optional[float] = None, solved: Optional[SolveResult] = None
) -> Tuple[bool, UniquenessResult]:
    """Decide uniqueness at chi_r; a ``solved`` result for the same (g, r) skips the chi_r search."""
    started = time.perf_counter()
    if solved is None:
        solved = chi_r(g, r, timeout_ms=timeout_ms)
    result = enumerate_partitions(
        g, solved.chi_r, r, cap=2, check=False, timeout_ms=remaining_ms(timeout_ms, started)
    )
    return result.unique, result
