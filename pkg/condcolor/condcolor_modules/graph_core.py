import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import product
from typing import Dict, Iterable, List, Optional, Tuple, Union

import networkx as nx
from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


class GraphError(ValueError):
    """Invalid graph construction: bad parameters, non-simple or disconnected input."""


# ---------------------------------------------------------------------------
# Graph
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph on vertices 0..n-1.

    ``adjacency[v]`` is the ascending tuple of neighbors of ``v``. ``labels`` holds
    optional ``(vertex, tag)`` pairs, used to mark hubs such as the wheel center.
    """

    n: int
    adjacency: Tuple[Tuple[int, ...], ...]
    labels: Tuple[Tuple[int, str], ...] = ()
    connected: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("graph needs at least one vertex")
        if len(self.adjacency) != self.n:
            raise GraphError(f"adjacency has {len(self.adjacency)} rows for n={self.n}")
        for v, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise GraphError(f"neighbors of {v} are not a sorted set")
            for w in nbrs:
                if w == v:
                    raise GraphError(f"self-loop at {v}")
                if not 0 <= w < self.n:
                    raise GraphError(f"neighbor {w} of {v} out of range")
                if v not in self.neighbor_sets[w]:
                    raise GraphError(f"edge ({v},{w}) is not symmetric")
        for v, _ in self.labels:
            if not 0 <= v < self.n:
                raise GraphError(f"label on unknown vertex {v}")

    # -- construction -------------------------------------------------------
    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Edge],
        labels: Optional[Dict[int, str]] = None,
        allow_disconnected: bool = False,
    ) -> "Graph":
        if n < 1:
            raise GraphError("graph needs at least one vertex")
        nbrs: List[set] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if v in nbrs[u]:
                raise GraphError(f"parallel edge ({u},{v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        adjacency = tuple(tuple(sorted(s)) for s in nbrs)
        connected = _is_connected(adjacency)
        if not connected and not allow_disconnected:
            raise GraphError("graph is disconnected")
        return cls(
            n=n,
            adjacency=adjacency,
            labels=tuple(sorted((labels or {}).items())),
            connected=connected,
        )

    @classmethod
    def from_networkx(
        cls,
        nxg: nx.Graph,
        order: Optional[List] = None,
        labels: Optional[Dict[int, str]] = None,
    ) -> "Graph":
        """Freeze a networkx graph; ``order`` fixes which node becomes id 0, 1, ..."""
        nodes = list(order) if order is not None else sorted(nxg.nodes)
        index = {node: i for i, node in enumerate(nodes)}
        return cls.from_edges(
            len(nodes),
            ((index[a], index[b]) for a, b in nxg.edges),
            labels=labels,
        )

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    # -- derived quantities -------------------------------------------------
    @cached_property
    def neighbor_sets(self) -> Tuple[frozenset, ...]:
        return tuple(frozenset(nbrs) for nbrs in self.adjacency)

    @cached_property
    def edges(self) -> Tuple[Edge, ...]:
        """Edges (u, v) with u < v in ascending lexicographic order."""
        return tuple((u, v) for u in range(self.n) for v in self.adjacency[u] if u < v)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def degrees(self) -> List[int]:
        return [len(nbrs) for nbrs in self.adjacency]

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    @property
    def min_degree(self) -> int:
        return min(self.degrees)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u]

    def find_label(self, tag: str) -> Optional[int]:
        for v, t in self.labels:
            if t == tag:
                return v
        return None

    def is_tree(self) -> bool:
        return self.connected and self.m == self.n - 1

    def is_path(self) -> bool:
        return self.is_tree() and self.max_degree <= 2

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2


def _is_connected(adjacency: Tuple[Tuple[int, ...], ...]) -> bool:
    g = nx.Graph()
    g.add_nodes_from(range(len(adjacency)))
    g.add_edges_from((u, v) for u, nbrs in enumerate(adjacency) for v in nbrs)
    return nx.is_connected(g)


def _require(condition: bool, message: str):
    if not condition:
        raise GraphError(message)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------
def path(n: int) -> Graph:
    _require(n >= 1, f"path needs n >= 1, got {n}")
    return Graph.from_networkx(nx.path_graph(n))


def cycle(n: int) -> Graph:
    _require(n >= 3, f"cycle needs n >= 3, got {n}")
    return Graph.from_networkx(nx.cycle_graph(n))


def complete(n: int) -> Graph:
    _require(n >= 1, f"complete graph needs n >= 1, got {n}")
    return Graph.from_networkx(nx.complete_graph(n))


def complete_bipartite(m: int, n: int) -> Graph:
    """K_{m,n}; ids 0..m-1 form the first side."""
    _require(m >= 1 and n >= 1, f"complete bipartite needs m, n >= 1, got {m}, {n}")
    return Graph.from_networkx(nx.complete_bipartite_graph(m, n))


def wheel(n: int) -> Graph:
    """W_n: center ``s`` (id 0) joined to a rim cycle on ids 1..n-1."""
    _require(n >= 4, f"wheel needs n >= 4, got {n}")
    return Graph.from_networkx(nx.wheel_graph(n), labels={0: "s"})


def gear(n: int) -> Graph:
    """n-gear: hub v0 (id 0), rim cycle v1..v2n (ids 1..2n), hub adjacent to odd rim ids."""
    _require(n >= 3, f"gear needs n >= 3, got {n}")
    g = nx.Graph()
    g.add_node(0)
    nx.add_cycle(g, range(1, 2 * n + 1))
    g.add_edges_from((0, i) for i in range(1, 2 * n, 2))
    return Graph.from_networkx(g, labels={0: "v0"})


def complete_kary_tree(k: int, h: int) -> Graph:
    """Complete k-ary tree of height h, root id 0, levels in breadth-first order."""
    _require(k >= 2 and h >= 1, f"complete k-ary tree needs k >= 2, h >= 1, got {k}, {h}")
    return Graph.from_networkx(nx.balanced_tree(k, h), labels={0: "root"})


def kary_edge_count(k: int, h: int) -> int:
    """e(h) = (k^{h+1} - 1)/(k - 1) - 1."""
    return (k ** (h + 1) - 1) // (k - 1) - 1


def line_graph(g: Graph) -> Graph:
    """L(g); vertex i stands for ``g.edges[i]``."""
    _require(g.m >= 1, "line graph of an edgeless graph")
    index = {e: i for i, e in enumerate(g.edges)}
    lg = nx.line_graph(g.to_networkx())
    order = sorted(lg.nodes, key=lambda e: index[(min(e), max(e))])
    return Graph.from_networkx(lg, order=order)


def join(g1: Graph, g2: Graph) -> Graph:
    """G1 + G2; ids of g2 are shifted by g1.n."""
    union = nx.disjoint_union(g1.to_networkx(), g2.to_networkx())
    union.add_edges_from(product(range(g1.n), range(g1.n, g1.n + g2.n)))
    labels = dict(g1.labels)
    labels.update({v + g1.n: tag for v, tag in g2.labels})
    return Graph.from_networkx(union, labels=labels)


def cartesian_product(g1: Graph, g2: Graph) -> Graph:
    """G1 □ G2; pair (u1, u2) gets id u1 * g2.n + u2."""
    prod = nx.cartesian_product(g1.to_networkx(), g2.to_networkx())
    return Graph.from_networkx(prod)


class EdgeChoice(str, Enum):
    FIRST = "first"
    RANDOM = "random"


def prop2_chain(k: int, edge_choice: EdgeChoice = EdgeChoice.FIRST, seed: int = 0) -> Graph:
    """G_k: start from C_3 and k-1 times add a vertex joined to both ends of an existing edge.

    The random policy draws edges from ``random.Random(seed)``; the seed defaults to 0.
    """
    _require(k >= 1, f"prop2 chain needs k >= 1, got {k}")
    edge_choice = EdgeChoice(edge_choice)
    rng = random.Random(seed)
    edges: List[Edge] = [(0, 1), (1, 2), (0, 2)]
    for w in range(3, k + 2):
        u, v = edges[0] if edge_choice is EdgeChoice.FIRST else rng.choice(edges)
        edges.extend([(u, w), (v, w)])
    return Graph.from_edges(k + 2, edges)


def random_tree(n: int, seed: int) -> Graph:
    """Uniform labeled tree decoded from a seeded random Prüfer sequence."""
    _require(n >= 2, f"random tree needs n >= 2, got {n}")
    rng = random.Random(seed)
    sequence = [rng.randrange(n) for _ in range(n - 2)]
    if not sequence:
        return path(2)
    return Graph.from_networkx(nx.from_prufer_sequence(sequence))


# ---------------------------------------------------------------------------
# Family specs
# ---------------------------------------------------------------------------
class Family(str, Enum):
    PATH = "path"
    CYCLE = "cycle"
    COMPLETE = "complete"
    COMPLETE_BIPARTITE = "complete-bipartite"
    WHEEL = "wheel"
    GEAR = "gear"
    COMPLETE_KARY_TREE = "complete-kary-tree"
    LINE_OF_KARY_TREE = "line-of-kary-tree"
    PROP2_CHAIN = "prop2-chain"
    RANDOM_TREE = "random-tree"


REQUIRED_PARAMS: Dict[Family, Tuple[str, ...]] = {
    Family.PATH: ("n",),
    Family.CYCLE: ("n",),
    Family.COMPLETE: ("n",),
    Family.COMPLETE_BIPARTITE: ("m", "n"),
    Family.WHEEL: ("n",),
    Family.GEAR: ("n",),
    Family.COMPLETE_KARY_TREE: ("k", "h"),
    Family.LINE_OF_KARY_TREE: ("k", "h"),
    Family.PROP2_CHAIN: ("k",),
    Family.RANDOM_TREE: ("n", "seed"),
}


class FamilySpec(BaseModel):
    family: Family
    params: Dict[str, Union[int, str]] = Field(default_factory=dict)

    @classmethod
    def parse(cls, family: str, params: str = "") -> "FamilySpec":
        """Build from CLI text such as ``gear`` and ``n=3``."""
        parsed: Dict[str, Union[int, str]] = {}
        for item in filter(None, (p.strip() for p in params.split(","))):
            if "=" not in item:
                raise GraphError(f"malformed parameter '{item}', expected key=value")
            key, value = (s.strip() for s in item.split("=", 1))
            try:
                parsed[key] = int(value)
            except ValueError:
                parsed[key] = value
        return cls(family=Family(family), params=parsed)

    def int_param(self, name: str) -> int:
        if name not in self.params:
            raise GraphError(f"family {self.family.value} needs parameter '{name}'")
        value = self.params[name]
        if not isinstance(value, int):
            raise GraphError(f"parameter '{name}' must be an integer, got {value!r}")
        return value

    @property
    def key(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.family.value}({inner})"

    def build(self) -> Graph:
        for name in REQUIRED_PARAMS[self.family]:
            self.int_param(name)
        p = self.int_param
        f = self.family
        if f is Family.PATH:
            return path(p("n"))
        if f is Family.CYCLE:
            return cycle(p("n"))
        if f is Family.COMPLETE:
            return complete(p("n"))
        if f is Family.COMPLETE_BIPARTITE:
            return complete_bipartite(p("m"), p("n"))
        if f is Family.WHEEL:
            return wheel(p("n"))
        if f is Family.GEAR:
            return gear(p("n"))
        if f is Family.COMPLETE_KARY_TREE:
            return complete_kary_tree(p("k"), p("h"))
        if f is Family.LINE_OF_KARY_TREE:
            return line_graph(complete_kary_tree(p("k"), p("h")))
        if f is Family.PROP2_CHAIN:
            choice = str(self.params.get("edge_choice", EdgeChoice.FIRST.value))
            try:
                policy = EdgeChoice(choice)
            except ValueError:
                raise GraphError(f"unknown edge_choice '{choice}'")
            seed = p("seed") if "seed" in self.params else 0
            return prop2_chain(p("k"), policy, seed)
        return random_tree(p("n"), p("seed"))


def build_family(spec: FamilySpec) -> Graph:
    return spec.build()
