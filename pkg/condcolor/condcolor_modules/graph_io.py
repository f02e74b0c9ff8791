import logging
import re
from pathlib import Path
from typing import Dict, List, Optional, Union

from .graph_core import Edge, Graph, GraphError
from .solver import ColoringMap

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_WITNESS_LINE = re.compile(r"^v(\d+)\s+(-?\d+)$")


class GraphFormatError(GraphError):
    """Malformed graph or coloring text."""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}" if line_no else message)


# ---------------------------------------------------------------------------
# Graph text format
#   p edge <n> <m>
#   e <u> <v>      (1-based)
#   l <u> <tag>
#   c ...          (comment)
# ---------------------------------------------------------------------------
def format_graph(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.m}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges]
    lines += [f"l {v + 1} {tag}" for v, tag in g.labels]
    return "\n".join(lines) + "\n"


def _vertex(token: str, n: int, line_no: int) -> int:
    try:
        v = int(token)
    except ValueError:
        raise GraphFormatError(f"vertex '{token}' is not an integer", line_no)
    if not 1 <= v <= n:
        raise GraphFormatError(f"vertex {v} outside 1..{n}", line_no)
    return v - 1


def parse_graph(text: str, allow_disconnected: bool = False) -> Graph:
    n: Optional[int] = None
    declared_m = 0
    edges: List[Edge] = []
    labels: Dict[int, str] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split(maxsplit=2)
        kind = parts[0]
        if kind == "p":
            if n is not None:
                raise GraphFormatError("duplicate problem line", line_no)
            fields = line.split()
            if len(fields) != 4 or fields[1] != "edge":
                raise GraphFormatError("expected 'p edge <n> <m>'", line_no)
            try:
                n, declared_m = int(fields[2]), int(fields[3])
            except ValueError:
                raise GraphFormatError("non-integer size in problem line", line_no)
            if n < 1 or declared_m < 0:
                raise GraphFormatError("sizes must be n >= 1, m >= 0", line_no)
            continue
        if n is None:
            raise GraphFormatError(f"'{kind}' line before problem line", line_no)
        if kind == "e":
            fields = line.split()
            if len(fields) != 3:
                raise GraphFormatError("expected 'e <u> <v>'", line_no)
            edges.append((_vertex(fields[1], n, line_no), _vertex(fields[2], n, line_no)))
        elif kind == "l":
            if len(parts) != 3:
                raise GraphFormatError("expected 'l <u> <tag>'", line_no)
            labels[_vertex(parts[1], n, line_no)] = parts[2]
        else:
            raise GraphFormatError(f"unknown line type '{kind}'", line_no)

    if n is None:
        raise GraphFormatError("missing problem line")
    if len(edges) != declared_m:
        raise GraphFormatError(f"problem line declares {declared_m} edges, found {len(edges)}")
    try:
        g = Graph.from_edges(n, edges, labels=labels, allow_disconnected=allow_disconnected)
    except GraphFormatError:
        raise
    except GraphError as e:
        raise GraphFormatError(str(e))
    if not g.connected:
        logger.warning("[GraphIO] loaded a disconnected graph; results are outside the connected setting")
    return g


def read_graph(path: PathLike, allow_disconnected: bool = False) -> Graph:
    with open(path, "r", encoding="utf-8") as f:
        return parse_graph(f.read(), allow_disconnected=allow_disconnected)


def write_graph(g: Graph, path: PathLike):
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_graph(g))


# ---------------------------------------------------------------------------
# Witness colorings: "v<id> <color>" per line, ascending 0-based id
# ---------------------------------------------------------------------------
def format_coloring(c: ColoringMap) -> str:
    return "".join(f"v{v} {color}\n" for v, color in enumerate(c.colors))


def parse_coloring(text: str, k: Optional[int] = None) -> ColoringMap:
    assigned: Dict[int, int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        match = _WITNESS_LINE.match(line)
        if not match:
            raise GraphFormatError("expected 'v<id> <color>'", line_no)
        v, color = int(match.group(1)), int(match.group(2))
        if v in assigned:
            raise GraphFormatError(f"vertex v{v} colored twice", line_no)
        assigned[v] = color
    if not assigned:
        raise GraphFormatError("empty coloring")
    if sorted(assigned) != list(range(len(assigned))):
        raise GraphFormatError("coloring must cover ids 0..n-1 without gaps")
    colors = tuple(assigned[v] for v in range(len(assigned)))
    palette = k if k is not None else max(colors)
    try:
        return ColoringMap(colors=colors, k=palette)
    except ValueError as e:
        raise GraphFormatError(str(e))


def read_coloring(path: PathLike, k: Optional[int] = None) -> ColoringMap:
    with open(path, "r", encoding="utf-8") as f:
        return parse_coloring(f.read(), k=k)


def write_coloring(c: ColoringMap, path: PathLike):
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_coloring(c))
