import pytest

from condcolor.condcolor_modules.graph_core import gear, path
from condcolor.condcolor_modules.graph_io import (
    GraphFormatError,
    format_coloring,
    format_graph,
    parse_coloring,
    parse_graph,
    read_coloring,
    read_graph,
    write_coloring,
    write_graph,
)
from condcolor.condcolor_modules.solver import ColoringMap


def test_single_vertex_file():
    assert format_graph(path(1)) == "p edge 1 0\n"


def test_gear_file_layout():
    lines = format_graph(gear(3)).splitlines()
    assert lines[0] == "p edge 7 9"
    assert sum(1 for line in lines if line.startswith("e ")) == 9
    assert lines[1] == "e 1 2"
    assert lines[-1] == "l 1 v0"


def test_gear_file_reads_back_with_labels(tmp_path):
    target = tmp_path / "gear3.txt"
    write_graph(gear(3), target)
    g = read_graph(target)
    assert g == gear(3)
    assert g.find_label("v0") == 0


def test_comments_and_blank_lines_are_skipped():
    text = "c a path\n\np edge 3 2\nc edges follow\ne 1 2\n\ne 2 3\n"
    assert parse_graph(text) == path(3)


@pytest.mark.parametrize(
    "text, message",
    [
        ("", "missing problem line"),
        ("e 1 2\np edge 2 1\n", "before problem line"),
        ("p edge 2 1\np edge 2 1\ne 1 2\n", "duplicate problem line"),
        ("p edge 2 2\ne 1 2\n", "declares 2 edges, found 1"),
        ("p edge 2 1\ne 1 3\n", "outside 1..2"),
        ("p edge 2 1\ne 1 x\n", "not an integer"),
        ("p edge 2 1\ne 1 2\nx 1\n", "unknown line type"),
        ("p graph 2 1\ne 1 2\n", "expected 'p edge"),
        ("p edge 3 1\ne 1 2\n", "disconnected"),
        ("p edge 2 2\ne 1 2\ne 2 1\n", "parallel"),
    ],
)
def test_malformed_graph_files(text, message):
    with pytest.raises(GraphFormatError, match=message):
        parse_graph(text)


def test_parse_error_carries_line_number():
    with pytest.raises(GraphFormatError) as info:
        parse_graph("p edge 2 1\n\ne 1 5\n")
    assert info.value.line_no == 3
    assert str(info.value).startswith("line 3:")


def test_disconnected_file_with_override():
    g = parse_graph("p edge 3 1\ne 1 2\n", allow_disconnected=True)
    assert g.n == 3 and not g.connected


def test_witness_lines_are_zero_based():
    c = ColoringMap(colors=(1, 2, 1), k=2, r=2)
    assert format_coloring(c) == "v0 1\nv1 2\nv2 1\n"


def test_parse_coloring_infers_palette():
    c = parse_coloring("v0 1\nv1 3\nv2 2\n")
    assert c.colors == (1, 3, 2)
    assert c.k == 3
    assert not c.certified


@pytest.mark.parametrize(
    "text, message",
    [
        ("", "empty"),
        ("v0 1\nv2 1\n", "without gaps"),
        ("v0 1\nv0 2\n", "colored twice"),
        ("0 1\n", "expected 'v<id> <color>'"),
        ("v0 0\nv1 1\n", "outside"),
    ],
)
def test_malformed_colorings(text, message):
    with pytest.raises(GraphFormatError, match=message):
        parse_coloring(text)


def test_coloring_file_with_explicit_palette(tmp_path):
    target = tmp_path / "witness.txt"
    write_coloring(ColoringMap(colors=(2, 1), k=2), target)
    c = read_coloring(target, k=3)
    assert c.colors == (2, 1)
    assert c.k == 3
