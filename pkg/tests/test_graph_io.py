import pytest

from modules.errors import GraphFormatError, ResultsIOError, ValidationError
from modules.graph_core import edge_count, empty_graph, sample_gnp
from modules.graph_io import (
    detect_format,
    format_graph,
    get_supported_formats,
    parse_dimacs,
    parse_edgelist,
    parse_graph,
    read_graph,
    write_graph,
)


@pytest.mark.parametrize("fmt", ["edgelist", "dimacs"])
def test_round_trip(tmp_path, k3, fmt):
    path = tmp_path / f"k3.{fmt}"
    write_graph(k3, path, fmt)
    assert read_graph(path) == k3


@pytest.mark.parametrize("fmt", ["edgelist", "dimacs"])
def test_round_trip_random(tmp_path, fmt):
    G = sample_gnp(25, 0.3, 8)
    path = tmp_path / "g.txt"
    write_graph(G, path, fmt)
    assert read_graph(path, fmt) == G


def test_edgelist_text(k3):
    assert format_graph(k3, "edgelist") == "3 3\n0 1\n0 2\n1 2\n"


def test_dimacs_text(k3):
    assert format_graph(k3, "dimacs") == "p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n"


def test_dimacs_header_without_edges():
    assert parse_dimacs("c nothing here\np edge 4 0\n") == empty_graph(4)


def test_dimacs_col_header():
    G = parse_dimacs("p col 3 1\ne 1 3\n")
    assert G.has_edge(0, 2)


def test_edge_outside_range_reports_line():
    with pytest.raises(GraphFormatError) as info:
        parse_edgelist("3 2\n0 1\n1 3\n")
    assert info.value.line_number == 3
    assert "line 3" in str(info.value)


def test_dimacs_vertex_zero_is_out_of_range():
    with pytest.raises(GraphFormatError):
        parse_dimacs("p edge 3 1\ne 0 1\n")


@pytest.mark.parametrize(
    "text",
    [
        "",
        "3\n",
        "3 2\n0 1\n",
        "3 1\n0 x\n",
        "3 1\n0 1 2\n",
    ],
)
def test_malformed_edgelist(text):
    with pytest.raises(GraphFormatError):
        parse_edgelist(text)


@pytest.mark.parametrize(
    "text",
    [
        "e 1 2\n",
        "p edge 3 2\ne 1 2\n",
        "p edge 3 1\np edge 3 1\ne 1 2\n",
        "p edge 3 1\nx 1 2\n",
        "c only comments\n",
    ],
)
def test_malformed_dimacs(text):
    with pytest.raises(GraphFormatError):
        parse_dimacs(text)


def test_format_detection():
    assert detect_format("c hello\np edge 2 1\ne 1 2\n") == "dimacs"
    assert detect_format("2 1\n0 1\n") == "edgelist"
    assert edge_count(parse_graph("p edge 2 1\ne 1 2\n")) == 1


def test_unknown_format(k3):
    with pytest.raises(ValidationError):
        format_graph(k3, "graphml")
    assert set(get_supported_formats()) == {"edgelist", "dimacs"}


def test_missing_file(tmp_path):
    with pytest.raises(ResultsIOError):
        read_graph(tmp_path / "missing.txt")


def test_write_leaves_no_temporary_files(tmp_path, k3):
    write_graph(k3, tmp_path / "k3.txt")
    assert [p.name for p in tmp_path.iterdir()] == ["k3.txt"]


def test_write_into_missing_directory(tmp_path, k3):
    with pytest.raises(ResultsIOError):
        write_graph(k3, tmp_path / "nope" / "k3.txt")
