import logging
from enum import Enum
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
from pydantic import BaseModel, Field, computed_field

from .graph_core import (
    Family,
    FamilySpec,
    Graph,
    complete_kary_tree,
    cycle,
    gear,
    kary_edge_count,
    line_graph,
)
from .solver import ColoringMap, chi_r

logger = logging.getLogger(__name__)


class TheoremSource(str, Enum):
    PROP1 = "Prop1"
    PROP2 = "Prop2"
    PROP3 = "Prop3"
    PROP4 = "Prop4"
    THM1 = "Thm1"
    THM2 = "Thm2"
    THM3 = "Thm3"
    THM4 = "Thm4"
    THM5 = "Thm5"
    THM6 = "Thm6"
    THM7 = "Thm7"


class PredictionKind(str, Enum):
    EXACT_CHI = "exact-chi"
    UPPER_BOUND = "upper-bound"
    UNIQUENESS = "uniqueness"


class Precondition(BaseModel):
    name: str
    holds: bool


class Prediction(BaseModel):
    """A closed-form claim about one instance; ``value`` only counts when applicable."""

    source: TheoremSource
    kind: PredictionKind
    value: Union[bool, int, None] = None
    preconditions: List[Precondition] = Field(default_factory=list)
    inputs: Dict[str, int] = Field(default_factory=dict)
    note: Optional[str] = None

    @computed_field
    @property
    def applicable(self) -> bool:
        return all(p.holds for p in self.preconditions)


def _predict(
    source: TheoremSource,
    kind: PredictionKind,
    value: Union[bool, int, None],
    checks: Sequence[Tuple[str, bool]],
    inputs: Optional[Dict[str, int]] = None,
    note: Optional[str] = None,
) -> Prediction:
    prediction = Prediction(
        source=source,
        kind=kind,
        value=value,
        preconditions=[Precondition(name=name, holds=bool(holds)) for name, holds in checks],
        inputs=inputs or {},
        note=note,
    )
    logger.debug(f"[Oracle] {source.value}: value={value} applicable={prediction.applicable}")
    return prediction


def _chi(g: Graph, r: int, timeout_ms: Optional[float]) -> int:
    return chi_r(g, r, timeout_ms=timeout_ms).chi_r


# ---------------------------------------------------------------------------
# Propositions
# ---------------------------------------------------------------------------
def predict_complete(n: int, r: int) -> Prediction:
    """K_n is uniquely n-colorable, so chi_r(K_n) = n for r <= n-1."""
    return _predict(
        TheoremSource.PROP1,
        PredictionKind.EXACT_CHI,
        n,
        [("n >= 2", n >= 2), ("r <= n - 1", r <= n - 1)],
        {"n": n},
    )


def predict_path(n: int, r: int) -> Prediction:
    return _predict(
        TheoremSource.PROP3,
        PredictionKind.EXACT_CHI,
        3,
        [("n >= 3", n >= 3), ("r = 2", r == 2)],
        {"n": n},
    )


class FamilyHint(str, Enum):
    COMPLETE = "complete"
    PROP2_CHAIN = "prop2-chain"
    PATH = "path"
    TREE = "tree"
    OTHER = "other"


def hint_for(spec: FamilySpec, g: Graph) -> FamilyHint:
    if spec.family is Family.COMPLETE:
        return FamilyHint.COMPLETE
    if spec.family is Family.PROP2_CHAIN:
        return FamilyHint.PROP2_CHAIN
    if g.is_path():
        return FamilyHint.PATH
    if g.is_tree():
        return FamilyHint.TREE
    return FamilyHint.OTHER


def predict_uniqueness(
    g: Graph, r: int, hint: FamilyHint, timeout_ms: Optional[float] = None
) -> Prediction:
    kind = PredictionKind.UNIQUENESS
    if hint is FamilyHint.COMPLETE:
        return _predict(
            TheoremSource.PROP1,
            kind,
            True,
            [("graph is complete", g.is_complete()), ("n >= 2", g.n >= 2), ("r = n - 1", r == g.n - 1)],
            {"n": g.n},
            note="uniquely n-colorable graphs are uniquely (n, n-1)-colorable",
        )
    if hint is FamilyHint.PROP2_CHAIN:
        return _predict(TheoremSource.PROP2, kind, True, [("r = 2", r == 2)], {"n": g.n})
    if hint is FamilyHint.PATH:
        return _predict(
            TheoremSource.PROP3,
            kind,
            True,
            [("graph is a path", g.is_path()), ("n >= 3", g.n >= 3), ("r = 2", r == 2)],
            {"n": g.n},
        )
    if hint is FamilyHint.TREE:
        is_tree = g.is_tree()
        not_path = not g.is_path()
        checks = [("graph is a tree", is_tree), ("graph is not a path", not_path), ("r >= 2", r >= 2)]
        inputs = {"n": g.n}
        if is_tree and not_path and r >= 2:
            inputs["chi_r"] = _chi(g, r, timeout_ms)
            checks.append(("chi_r != n", inputs["chi_r"] != g.n))
        else:
            checks.append(("chi_r != n", False))
        return _predict(TheoremSource.PROP4, kind, False, checks, inputs)
    return _predict(
        TheoremSource.PROP1,
        kind,
        None,
        [("family covered by a uniqueness result", False)],
        {"n": g.n},
    )


# ---------------------------------------------------------------------------
# Theorems
# ---------------------------------------------------------------------------
def predict_join(g1: Graph, g2: Graph, r: int, timeout_ms: Optional[float] = None) -> Prediction:
    """chi_r(G1 + G2) = k1 + k2 for r <= k1 + 1, with k1 <= k2 the chromatic numbers."""
    k1, k2 = sorted((_chi(g1, 1, timeout_ms), _chi(g2, 1, timeout_ms)))
    return _predict(
        TheoremSource.THM1,
        PredictionKind.EXACT_CHI,
        k1 + k2,
        [("r <= k1 + 1", r <= k1 + 1)],
        {"k1": k1, "k2": k2},
    )


def bipartition(g: Graph) -> Optional[Tuple[List[int], List[int]]]:
    """Sides of a connected bipartite graph, the side holding vertex 0 first; None if odd cycle."""
    nxg = g.to_networkx()
    if not nx.is_bipartite(nxg):
        return None
    side = nx.bipartite.color(nxg)
    first = [v for v in range(g.n) if side[v] == side[0]]
    second = [v for v in range(g.n) if side[v] != side[0]]
    return first, second


def _common_neighborhood(g: Graph, vertices: List[int]) -> frozenset:
    if not vertices:
        return frozenset()
    return reduce(frozenset.intersection, (g.neighbor_sets[v] for v in vertices))


def predict_bipartite_common(g: Graph, r: int) -> Prediction:
    """chi_r(G) = 2r for bipartite G when 2 <= r <= |S1| (S_i = common neighborhood of side i)."""
    sides = bipartition(g)
    if sides is None:
        return _predict(
            TheoremSource.THM2,
            PredictionKind.EXACT_CHI,
            None,
            [("bipartite", False), ("r >= 2", r >= 2), ("r <= |S1|", False)],
        )
    s1, s2 = sorted((_common_neighborhood(g, sides[0]), _common_neighborhood(g, sides[1])), key=len)
    return _predict(
        TheoremSource.THM2,
        PredictionKind.EXACT_CHI,
        2 * r,
        [("bipartite", True), ("r >= 2", r >= 2), ("r <= |S1|", r <= len(s1))],
        {"S1": len(s1), "S2": len(s2)},
    )


def predict_tree_join(t1: Graph, t2: Graph, r: int) -> Prediction:
    """chi_r(T1 + T2) = 2(r - 1) for nontrivial trees and 4 <= r <= n1 + 1."""
    n1, n2 = sorted((t1.n, t2.n))
    return _predict(
        TheoremSource.THM3,
        PredictionKind.EXACT_CHI,
        2 * (r - 1),
        [
            ("T1 is a tree", t1.is_tree()),
            ("T2 is a tree", t2.is_tree()),
            ("n1 >= 2", n1 >= 2),
            ("r >= 4", r >= 4),
            ("r <= n1 + 1", r <= n1 + 1),
        ],
        {"n1": n1, "n2": n2},
    )


def predict_product_bound(
    g1: Graph, g2: Graph, r: int, timeout_ms: Optional[float] = None
) -> Prediction:
    """chi_r(G1 □ G2) <= chi_{r1}(G1) * chi_{r2}(G2) with r1 = δ(G1), r2 = δ(G2)."""
    delta1, delta2 = g1.min_degree, g2.min_degree
    r1, r2 = max(delta1, 1), max(delta2, 1)
    chi1, chi2 = _chi(g1, r1, timeout_ms), _chi(g2, r2, timeout_ms)
    return _predict(
        TheoremSource.THM4,
        PredictionKind.UPPER_BOUND,
        chi1 * chi2,
        [("r <= delta1 + delta2", r <= delta1 + delta2)],
        {"delta1": delta1, "delta2": delta2, "r1": r1, "r2": r2, "chi1": chi1, "chi2": chi2},
    )


SHALLOW_LINE_NOTE = (
    "h = 2: L(T) has maximum degree 2k-1, not 2k; the r = 2k branch is run for the record"
)


def predict_line_kary(k: int, h: int, r: int, allow_shallow: bool = False) -> Prediction:
    """L(T) for the complete k-ary tree of height h: k+1 if r <= k, 2k+1 if r = Δ = 2k."""
    if k < 2 or h < 2:
        raise ValueError(f"line-of-k-ary-tree prediction needs k >= 2, h >= 2, got k={k}, h={h}")
    lt = line_graph(complete_kary_tree(k, h))
    if r <= k:
        value: Optional[int] = k + 1
    elif r == 2 * k:
        value = 2 * k + 1
    else:
        value = None
    checks = [("r <= k or r = 2k", value is not None)]
    note = None
    if allow_shallow:
        checks.insert(0, ("h >= 2", True))
        note = SHALLOW_LINE_NOTE if h == 2 else None
    else:
        checks.insert(0, ("h >= 3", h >= 3))
    return _predict(
        TheoremSource.THM5,
        PredictionKind.EXACT_CHI,
        value,
        checks,
        {"k": k, "h": h, "e_h": kary_edge_count(k, h), "vertices": lt.n, "max_degree": lt.max_degree},
        note=note,
    )


def predict_wheel(n: int, r: int, timeout_ms: Optional[float] = None) -> Prediction:
    """chi_r(W_n) = q + 1 if r <= q else min(r, n-1) + 1, with q = chi_r(C_{n-1}), r >= 3."""
    if n < 4:
        raise ValueError(f"wheel prediction needs n >= 4, got {n}")
    q = _chi(cycle(n - 1), r, timeout_ms)
    value = q + 1 if r <= q else min(r, n - 1) + 1
    return _predict(
        TheoremSource.THM6,
        PredictionKind.EXACT_CHI,
        value,
        [("r >= 3", r >= 3)],
        {"chi_r_rim": q},
    )


def predict_gear(n: int, r: int, timeout_ms: Optional[float] = None) -> Prediction:
    """chi_r(G_n): 4 at r = 2, chi_2(C_2n) + 1 at r = 3, min(r, Δ) + 1 for r >= 4."""
    if n < 3:
        raise ValueError(f"gear prediction needs n >= 3, got {n}")
    g = gear(n)
    delta = g.degree(g.find_label("v0"))
    inputs = {"max_degree": delta}
    if r == 2:
        value: Optional[int] = 4
    elif r == 3:
        inputs["chi_2_rim"] = _chi(cycle(2 * n), 2, timeout_ms)
        value = inputs["chi_2_rim"] + 1
    elif r >= 4:
        value = min(r, delta) + 1
    else:
        value = None
    return _predict(TheoremSource.THM7, PredictionKind.EXACT_CHI, value, [("r >= 2", r >= 2)], inputs)


def gear_witness_coloring(n: int) -> ColoringMap:
    """Explicit conditional (4, 2)-coloring of the n-gear (hub id 0, rim v_i at id i)."""
    if n < 3:
        raise ValueError(f"gear needs n >= 3, got {n}")
    rim = {i: (3 if i % 3 == 0 else i % 3) for i in range(1, 2 * n + 1)}
    if n % 3 == 2:
        rim[2 * n] = 2
    elif n % 3 == 1:
        rim.update({2 * n - 4: 2, 2 * n - 3: 1, 2 * n - 2: 3, 2 * n - 1: 2, 2 * n: 3})
    colors = (4,) + tuple(rim[i] for i in range(1, 2 * n + 1))
    return ColoringMap(colors=colors, k=4, r=2)
