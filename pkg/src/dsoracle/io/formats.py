"""DIMACS ``.gr`` and plain edge-list graph files."""
from __future__ import annotations

from pathlib import Path

from dsoracle.errors import GraphFormatError
from dsoracle.graph import Graph

FORMATS = ("dimacs", "edgelist")


def _parse_weight(token: str, lineno: int) -> int | float:
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        raise GraphFormatError(f"line {lineno}: bad weight {token!r}") from None


def parse_dimacs(text: str) -> Graph:
    """Parse ``p sp n m`` / ``a u v w`` text (1-based ids).

    Undirected files normally list each edge once; an arc whose reverse was
    already read with the same weight is accepted and folded into one edge.
    """
    n = None
    weights: dict[tuple[int, int], int | float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "sp":
                raise GraphFormatError(f"line {lineno}: expected 'p sp <n> <m>'")
            n = int(parts[2])
        elif parts[0] == "a":
            if n is None:
                raise GraphFormatError(f"line {lineno}: arc before problem line")
            if len(parts) != 4:
                raise GraphFormatError(f"line {lineno}: expected 'a <u> <v> <w>'")
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            w = _parse_weight(parts[3], lineno)
            key = (u, v) if u < v else (v, u)
            if key in weights:
                if weights[key] != w:
                    raise GraphFormatError(f"line {lineno}: arc {u + 1}->{v + 1} disagrees with its reverse")
                continue
            weights[key] = w
        else:
            raise GraphFormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise GraphFormatError("missing problem line 'p sp <n> <m>'")
    return Graph(n, [(u, v, w) for (u, v), w in weights.items()])


def parse_edgelist(text: str, n: int | None = None) -> Graph:
    """Parse ``u v [w]`` lines (0-based ids, ``#`` comments).

    ``n`` defaults to a ``# vertices N`` header, else one more than the
    largest id seen.
    """
    edges = []
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        header = raw.split()
        if n is None and header[:2] == ["#", "vertices"] and len(header) == 3 and header[2].isdigit():
            n = int(header[2])
            continue
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphFormatError(f"line {lineno}: expected 'u v [w]'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: vertex ids must be integers") from None
        w = _parse_weight(parts[2], lineno) if len(parts) == 3 else 1
        edges.append((u, v, w))
        top = max(top, u, v)
    return Graph(top + 1 if n is None else n, edges)


def read_graph(path: str | Path, fmt: str | None = None) -> Graph:
    path = Path(path)
    if fmt is None:
        fmt = "dimacs" if path.suffix == ".gr" else "edgelist"
    if fmt not in FORMATS:
        raise GraphFormatError(f"unknown graph format {fmt!r}, expected one of {FORMATS}")
    text = path.read_text()
    return parse_dimacs(text) if fmt == "dimacs" else parse_edgelist(text)


def format_dimacs(g: Graph) -> str:
    lines = [f"p sp {g.n} {g.m}"]
    lines += [f"a {u + 1} {v + 1} {w}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"


def format_edgelist(g: Graph) -> str:
    return f"# vertices {g.n}\n" + "".join(f"{u} {v} {w}\n" for u, v, w in g.edges)


def write_graph(g: Graph, path: str | Path, fmt: str = "edgelist"):
    if fmt not in FORMATS:
        raise GraphFormatError(f"unknown graph format {fmt!r}, expected one of {FORMATS}")
    Path(path).write_text(format_dimacs(g) if fmt == "dimacs" else format_edgelist(g))
