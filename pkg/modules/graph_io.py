"""
Graph File Module for t-Improper Colouring

Reading and writing graphs in two plain-text formats:

- edge list: first line "n m", then m lines "u v" with 0-based labels
- DIMACS-like: optional "c" comment lines, a "p edge n m" header, then
  "e u v" lines with 1-based labels

Files are UTF-8 and newline-delimited. Writes go through a temporary file that
is moved into place once complete.
"""

import logging
import os
import tempfile
from pathlib import Path

from modules.errors import GraphFormatError, ResultsIOError, ValidationError
from modules.graph_core import edge_count, edges, new_graph

logger = logging.getLogger(__name__)

FORMATS = ("edgelist", "dimacs")


def get_supported_formats():
    """
    Get list of supported graph file formats

    Returns:
    dict: format key -> description
    """
    return {
        "edgelist": "Edge list: 'n m' header then 0-based 'u v' lines",
        "dimacs": "DIMACS-like: 'p edge n m' header then 1-based 'e u v' lines",
    }


def _parse_int(token, line_number, what):
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"{what} {token!r} is not an integer", line_number) from None


def _content_lines(text):
    """Yield (line_number, tokens) for non-blank lines."""
    for number, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if tokens:
            yield number, tokens


def detect_format(text):
    """Guess the format from the first meaningful line."""
    for _, tokens in _content_lines(text):
        if tokens[0] in ("c", "p", "e"):
            return "dimacs"
        return "edgelist"
    return "edgelist"


def _build(n, pairs, line_numbers):
    try:
        return new_graph(n, pairs)
    except ValidationError as e:
        # locate the offending line for the message
        for (u, v), number in zip(pairs, line_numbers):
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise GraphFormatError(str(e), number) from None
        raise GraphFormatError(str(e)) from None


def parse_edgelist(text):
    lines = list(_content_lines(text))
    if not lines:
        raise GraphFormatError("missing 'n m' header")
    number, header = lines[0]
    if len(header) != 2:
        raise GraphFormatError("header must be 'n m'", number)
    n = _parse_int(header[0], number, "vertex count")
    m = _parse_int(header[1], number, "edge count")
    if n < 0 or m < 0:
        raise GraphFormatError("header counts must be non-negative", number)
    pairs, numbers = [], []
    for number, tokens in lines[1:]:
        if len(tokens) != 2:
            raise GraphFormatError("edge line must be 'u v'", number)
        pairs.append((_parse_int(tokens[0], number, "vertex"), _parse_int(tokens[1], number, "vertex")))
        numbers.append(number)
    if len(pairs) != m:
        raise GraphFormatError(f"header announces {m} edges but {len(pairs)} edge lines follow")
    return _build(n, pairs, numbers)


def parse_dimacs(text):
    n = m = None
    pairs, numbers = [], []
    for number, tokens in _content_lines(text):
        kind = tokens[0]
        if kind == "c":
            continue
        if kind == "p":
            if n is not None:
                raise GraphFormatError("duplicate 'p' header", number)
            if len(tokens) != 4 or tokens[1] not in ("edge", "col"):
                raise GraphFormatError("header must be 'p edge n m'", number)
            n = _parse_int(tokens[2], number, "vertex count")
            m = _parse_int(tokens[3], number, "edge count")
            if n < 0 or m < 0:
                raise GraphFormatError("header counts must be non-negative", number)
        elif kind == "e":
            if n is None:
                raise GraphFormatError("edge line before 'p' header", number)
            if len(tokens) != 3:
                raise GraphFormatError("edge line must be 'e u v'", number)
            u = _parse_int(tokens[1], number, "vertex")
            v = _parse_int(tokens[2], number, "vertex")
            pairs.append((u - 1, v - 1))
            numbers.append(number)
        else:
            raise GraphFormatError(f"unknown line type {kind!r}", number)
    if n is None:
        raise GraphFormatError("missing 'p edge n m' header")
    if len(pairs) != m:
        raise GraphFormatError(f"header announces {m} edges but {len(pairs)} edge lines follow")
    return _build(n, pairs, numbers)


def parse_graph(text, fmt=None):
    """
    Parse graph text

    Parameters:
    text: file content
    fmt: 'edgelist', 'dimacs' or None to detect

    Returns:
    Graph
    """
    fmt = fmt or detect_format(text)
    if fmt == "edgelist":
        return parse_edgelist(text)
    if fmt == "dimacs":
        return parse_dimacs(text)
    raise ValidationError(f"unknown graph format {fmt!r}; expected one of {FORMATS}")


def format_graph(G, fmt="edgelist"):
    """Render a graph as text in the given format."""
    pairs = edges(G)
    if fmt == "edgelist":
        lines = [f"{G.n} {edge_count(G)}"] + [f"{u} {v}" for u, v in pairs]
    elif fmt == "dimacs":
        lines = [f"p edge {G.n} {edge_count(G)}"] + [f"e {u + 1} {v + 1}" for u, v in pairs]
    else:
        raise ValidationError(f"unknown graph format {fmt!r}; expected one of {FORMATS}")
    return "\n".join(lines) + "\n"


def read_graph(path, fmt=None):
    """
    Load a graph file

    Parameters:
    path: file path
    fmt: format key or None to detect from content

    Returns:
    Graph
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ResultsIOError(f"unable to read graph file {path}: {e}") from e
    graph = parse_graph(text, fmt)
    logger.debug("read %r from %s", graph, path)
    return graph


def write_text_atomic(path, text):
    """
    Write text to path through a temporary sibling file

    Parameters:
    path: destination
    text: full file content
    """
    path = Path(path)
    try:
        fd, tmp_name = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
            os.replace(tmp_name, path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
    except OSError as e:
        raise ResultsIOError(f"unable to write {path}: {e}") from e


def write_graph(G, path, fmt="edgelist"):
    """
    Save a graph file

    Parameters:
    G: Graph
    path: destination file
    fmt: 'edgelist' or 'dimacs'
    """
    write_text_atomic(path, format_graph(G, fmt))
    logger.debug("wrote %r to %s", G, path)
