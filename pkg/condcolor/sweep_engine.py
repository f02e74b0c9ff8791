import json
import logging
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field, model_validator

from condcolor.condcolor_modules.graph_core import (
    Family,
    FamilySpec,
    Graph,
    build_family,
    cartesian_product,
    complete_bipartite,
    join,
)
from condcolor.condcolor_modules.oracles import (
    SHALLOW_LINE_NOTE,
    Prediction,
    PredictionKind,
    hint_for,
    predict_bipartite_common,
    predict_complete,
    predict_gear,
    predict_join,
    predict_line_kary,
    predict_path,
    predict_product_bound,
    predict_tree_join,
    predict_uniqueness,
    predict_wheel,
)
from condcolor.condcolor_modules.reports import (
    TIMEOUT,
    Match,
    Report,
    ReportFormat,
    Summary,
    compare,
    summarize,
)
from condcolor.condcolor_modules.solver import (
    SolverTimeout,
    chi_r,
    is_uniquely_colorable,
    lower_bound,
    remaining_ms,
)

logger = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Default grid (with fallbacks)
# ---------------------------------------------------------------------------
_HERE = Path(__file__).resolve()
_ROOT_DIR = _HERE.parents[1]
SWEEP_CANDIDATES = [
    _HERE.parent / "data" / "default_sweep.json",
    _ROOT_DIR / "data" / "default_sweep.json",
]


class CheckKind(str, Enum):
    COMPLETE = "complete"
    PATH = "path"
    GEAR = "gear"
    WHEEL = "wheel"
    LINE_KARY = "line_kary"
    JOIN = "join"
    BIPARTITE = "bipartite"
    TREE_JOIN = "tree_join"
    PRODUCT = "product"
    UNIQUENESS = "uniqueness"
    RANDOM_TREES = "random_trees"


class IntRange(BaseModel):
    """Inclusive range, written as ``[lo, hi]`` in config files."""

    lo: int
    hi: int

    @model_validator(mode="before")
    @classmethod
    def _from_pair(cls, data: Any) -> Any:
        if isinstance(data, int):
            return {"lo": data, "hi": data}
        if isinstance(data, (list, tuple)):
            if len(data) != 2:
                raise ValueError("range must be [lo, hi]")
            return {"lo": data[0], "hi": data[1]}
        return data

    @model_validator(mode="after")
    def _nonempty(self):
        if self.lo > self.hi:
            raise ValueError(f"empty range [{self.lo}, {self.hi}]")
        return self

    def values(self) -> range:
        return range(self.lo, self.hi + 1)


_PARAMS_BY_KIND = {
    CheckKind.COMPLETE: ("n", "r"),
    CheckKind.PATH: ("n", "r"),
    CheckKind.GEAR: ("n", "r"),
    CheckKind.WHEEL: ("n", "r"),
    CheckKind.LINE_KARY: ("k", "h", "r"),
    CheckKind.BIPARTITE: ("m", "n", "r"),
    CheckKind.JOIN: ("r",),
    CheckKind.TREE_JOIN: ("r",),
    CheckKind.PRODUCT: ("r",),
    CheckKind.UNIQUENESS: ("r",),
    CheckKind.RANDOM_TREES: ("n", "r"),
}


class SweepEntry(BaseModel):
    check: CheckKind
    n: Optional[IntRange] = None
    m: Optional[IntRange] = None
    k: Optional[IntRange] = None
    h: Optional[IntRange] = None
    r: Optional[IntRange] = None
    graphs: List[FamilySpec] = Field(default_factory=list)
    count: int = Field(default=0, ge=0)
    seed: int = 0
    allow_shallow: bool = False

    @model_validator(mode="after")
    def _has_ranges(self):
        missing = [name for name in _PARAMS_BY_KIND[self.check] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"check '{self.check.value}' needs ranges {missing}")
        if self.check in (CheckKind.JOIN, CheckKind.TREE_JOIN, CheckKind.PRODUCT, CheckKind.UNIQUENESS):
            if not self.graphs:
                raise ValueError(f"check '{self.check.value}' needs a nonempty 'graphs' list")
        if self.check is CheckKind.RANDOM_TREES and self.count < 1:
            raise ValueError("random_trees needs count >= 1")
        return self


class SweepConfig(BaseModel):
    entries: List[SweepEntry] = Field(min_length=1)
    timeout_ms: float = Field(default=10_000, gt=0)
    jobs: int = Field(default=1, ge=1)
    output: Optional[str] = None
    format: ReportFormat = ReportFormat.JSON


class SweepTask(BaseModel):
    """One (instance, r, theorem) grid point."""

    order: int
    check: CheckKind
    graphs: List[FamilySpec]
    r: int
    params: Dict[str, int] = Field(default_factory=dict)
    allow_shallow: bool = False
    seed: Optional[int] = None
    timeout_ms: float

    @property
    def instance(self) -> str:
        if self.check is CheckKind.LINE_KARY:
            return f"line-of-kary-tree(h={self.params['h']},k={self.params['k']})"
        if self.check is CheckKind.BIPARTITE:
            return f"complete-bipartite(m={self.params['m']},n={self.params['n']})"
        if len(self.graphs) == 2:
            op = "product" if self.check is CheckKind.PRODUCT else "join"
            return f"{op}({self.graphs[0].key},{self.graphs[1].key})"
        return self.graphs[0].key


class TaskOutcome(BaseModel):
    order: int
    report: Optional[Report] = None
    skipped: bool = False
    error: Optional[str] = None


class SweepResult(BaseModel):
    rows: List[Report]
    summary: Summary
    errors: List[str] = Field(default_factory=list)

    @property
    def exit_code(self) -> int:
        code = self.summary.exit_code
        if code == 0 and self.errors:
            return 1
        return code


def _safe_load_json(path: Path) -> Optional[Dict[str, Any]]:
    if not path.exists():
        return None
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except Exception as e:
        logger.warning(f"[Sweep] config load failed at {path}: {e}")
        return None


def _read_config(path: Union[str, Path]) -> SweepConfig:
    with open(path, "r", encoding="utf-8") as f:
        return SweepConfig.model_validate(json.load(f))


def load_sweep_config(path: Optional[Union[str, Path]] = None) -> SweepConfig:
    """Read a sweep config.

    An explicit path, then CONDCOLOR_SWEEP_CONFIG, must load or raise. Only the packaged
    default grid falls back through the candidate list.
    """
    if path is not None:
        return _read_config(path)
    env_path = os.getenv("CONDCOLOR_SWEEP_CONFIG")
    if env_path:
        logger.info(f"[Sweep] grid from CONDCOLOR_SWEEP_CONFIG={env_path}")
        return _read_config(env_path)
    for candidate in SWEEP_CANDIDATES:
        data = _safe_load_json(candidate)
        if data is not None:
            logger.info(f"[Sweep] default grid loaded from {candidate}")
            return SweepConfig.model_validate(data)
    raise FileNotFoundError("no sweep config found; pass --config")


# ---------------------------------------------------------------------------
# Task execution (module level so worker processes can import it)
# ---------------------------------------------------------------------------
def _task_graph(task: SweepTask) -> Graph:
    p = task.params
    if task.check is CheckKind.LINE_KARY:
        return build_family(FamilySpec(family=Family.LINE_OF_KARY_TREE, params={"k": p["k"], "h": p["h"]}))
    if task.check is CheckKind.BIPARTITE:
        return complete_bipartite(p["m"], p["n"])
    graphs = [build_family(spec) for spec in task.graphs]
    if task.check is CheckKind.PRODUCT:
        return cartesian_product(*graphs)
    if len(graphs) == 2:
        return join(*graphs)
    return graphs[0]


def _task_prediction(task: SweepTask, g: Graph) -> Prediction:
    r, p, t = task.r, task.params, task.timeout_ms
    check = task.check
    if check is CheckKind.COMPLETE:
        return predict_complete(p["n"], r)
    if check is CheckKind.PATH:
        return predict_path(p["n"], r)
    if check is CheckKind.GEAR:
        return predict_gear(p["n"], r, timeout_ms=t)
    if check is CheckKind.WHEEL:
        return predict_wheel(p["n"], r, timeout_ms=t)
    if check is CheckKind.LINE_KARY:
        return predict_line_kary(p["k"], p["h"], r, allow_shallow=task.allow_shallow)
    if check is CheckKind.BIPARTITE:
        return predict_bipartite_common(g, r)
    if check in (CheckKind.UNIQUENESS, CheckKind.RANDOM_TREES):
        return predict_uniqueness(g, r, hint_for(task.graphs[0], g), timeout_ms=t)
    g1, g2 = (build_family(spec) for spec in task.graphs)
    if check is CheckKind.JOIN:
        return predict_join(g1, g2, r, timeout_ms=t)
    if check is CheckKind.TREE_JOIN:
        return predict_tree_join(g1, g2, r)
    return predict_product_bound(g1, g2, r, timeout_ms=t)


def run_task(task: SweepTask) -> TaskOutcome:
    """Oracle, chi_r and (for uniqueness) partition search share one timeout_ms budget."""
    try:
        started = time.perf_counter()
        g = _task_graph(task)
        base = dict(instance=task.instance, n=g.n, m=g.m, r=task.r, seed=task.seed)
        try:
            prediction = _task_prediction(task, g)
        except SolverTimeout as e:
            logger.warning(f"[Sweep] oracle timed out on {task.instance} r={task.r}")
            return TaskOutcome(
                order=task.order,
                report=Report(
                    **base,
                    chi_r=TIMEOUT,
                    lower_bound=lower_bound(g, task.r),
                    nodes_explored=e.nodes,
                    elapsed_ms=e.elapsed_ms,
                    note="oracle input timed out",
                ),
            )
        if not prediction.applicable:
            logger.debug(f"[Sweep] skip {task.instance} r={task.r}: {prediction.source.value} not applicable")
            return TaskOutcome(order=task.order, skipped=True)

        unique = None
        partitions = None
        try:
            solved = chi_r(g, task.r, timeout_ms=remaining_ms(task.timeout_ms, started))
            chi, nodes, lb = solved.chi_r, solved.nodes_explored, solved.lower_bound_used
            if prediction.kind is PredictionKind.UNIQUENESS:
                unique, result = is_uniquely_colorable(
                    g, task.r, timeout_ms=remaining_ms(task.timeout_ms, started), solved=solved
                )
                partitions = len(result.partitions)
                nodes += result.nodes_explored
            elapsed = (time.perf_counter() - started) * 1000
        except SolverTimeout as e:
            chi, nodes, elapsed, lb = TIMEOUT, e.nodes, (time.perf_counter() - started) * 1000, lower_bound(g, task.r)

        match = compare(prediction, chi, unique)
        report = Report(
            **base,
            theorem=prediction.source.value,
            chi_r=chi,
            lower_bound=lb,
            unique=unique,
            partitions=partitions,
            prediction=prediction,
            match=match,
            nodes_explored=nodes,
            elapsed_ms=elapsed,
            note=prediction.note,
            in_paper_scope=prediction.note != SHALLOW_LINE_NOTE,
        )
        return TaskOutcome(order=task.order, report=report)
    except Exception as e:
        logger.error(f"[Sweep] task {task.instance} r={task.r} failed: {e}")
        return TaskOutcome(order=task.order, error=f"{task.instance} r={task.r}: {e}")


# ---------------------------------------------------------------------------
# Engine
# ---------------------------------------------------------------------------
class SweepEngine:
    """Expands a SweepConfig into grid points, runs oracle + solver on each, collects rows."""

    def __init__(self, config: SweepConfig, jobs: Optional[int] = None):
        self.config = config
        self.jobs = jobs or config.jobs

    def _pairs(self, entry: SweepEntry) -> List[Tuple[FamilySpec, FamilySpec]]:
        return list(combinations_with_replacement(entry.graphs, 2))

    def _entry_points(self, entry: SweepEntry) -> List[Dict[str, Any]]:
        """Grid points of one entry as SweepTask keyword arguments (without order/timeout)."""
        r_values = entry.r.values()
        check = entry.check
        points: List[Dict[str, Any]] = []

        if check in (CheckKind.COMPLETE, CheckKind.PATH, CheckKind.GEAR, CheckKind.WHEEL):
            family = {
                CheckKind.COMPLETE: Family.COMPLETE,
                CheckKind.PATH: Family.PATH,
                CheckKind.GEAR: Family.GEAR,
                CheckKind.WHEEL: Family.WHEEL,
            }[check]
            for n in entry.n.values():
                spec = FamilySpec(family=family, params={"n": n})
                points += [dict(graphs=[spec], r=r, params={"n": n}) for r in r_values]
        elif check is CheckKind.LINE_KARY:
            for k in entry.k.values():
                for h in entry.h.values():
                    points += [dict(graphs=[], r=r, params={"k": k, "h": h}) for r in r_values]
        elif check is CheckKind.BIPARTITE:
            for m in entry.m.values():
                for n in entry.n.values():
                    points += [dict(graphs=[], r=r, params={"m": m, "n": n}) for r in r_values]
        elif check in (CheckKind.JOIN, CheckKind.TREE_JOIN, CheckKind.PRODUCT):
            for a, b in self._pairs(entry):
                points += [dict(graphs=[a, b], r=r) for r in r_values]
        elif check is CheckKind.UNIQUENESS:
            for spec in entry.graphs:
                points += [dict(graphs=[spec], r=r) for r in r_values]
        else:
            rng = random.Random(entry.seed)
            for _ in range(entry.count):
                n = rng.randint(entry.n.lo, entry.n.hi)
                seed = rng.randrange(2**31)
                spec = FamilySpec(family=Family.RANDOM_TREE, params={"n": n, "seed": seed})
                points += [dict(graphs=[spec], r=r, params={"n": n}, seed=seed) for r in r_values]

        for point in points:
            point["check"] = check
            point["allow_shallow"] = entry.allow_shallow
        return points

    def expand(self) -> List[SweepTask]:
        tasks: List[SweepTask] = []
        for entry in self.config.entries:
            for point in self._entry_points(entry):
                tasks.append(SweepTask(order=len(tasks), timeout_ms=self.config.timeout_ms, **point))
        logger.info(f"[Sweep] expanded {len(self.config.entries)} entries into {len(tasks)} grid points")
        return tasks

    def run(self) -> SweepResult:
        tasks = self.expand()
        if self.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                outcomes = list(pool.map(run_task, tasks))
        else:
            outcomes = [run_task(task) for task in tasks]
        outcomes.sort(key=lambda o: o.order)

        rows = sorted(
            (o.report for o in outcomes if o.report is not None),
            key=lambda row: (row.instance, row.r, row.theorem or ""),
        )
        skipped = sum(1 for o in outcomes if o.skipped)
        errors = [o.error for o in outcomes if o.error]
        for row in rows:
            if row.match is Match.MISMATCH:
                logger.warning(f"[Sweep] mismatch: {row.instance} r={row.r} chi_r={row.chi_r} "
                               f"predicted={row.prediction.value} ({row.theorem})")
        summary = summarize(rows, skipped=skipped)
        logger.info(f"[Sweep] {summary.describe()}")
        return SweepResult(rows=rows, summary=summary, errors=errors)
