"""
Edge-list and tableau text formats.

Edge list: one edge per line, "a b" with a < b, decimal ids, LF, no header.
Tableau dump: one hyperedge per line, members sorted ascending.
"""

import logging
from pathlib import Path

from graph.state import Graph

logger = logging.getLogger(__name__)


class EdgeListError(ValueError):
    """Raised when an edge-list file cannot be parsed into a simple graph."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.message = f"line {line}: {message}" if line is not None else message
        super().__init__(self.message)


def format_edge_list(g: Graph) -> str:
    return "".join(f"{a} {b}\n" for a, b in g.edges)


def write_edge_list(g: Graph, path: str | Path) -> None:
    # newline="" keeps LF terminators on every platform.
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(format_edge_list(g))
    logger.info("wrote %d edges to %s", g.num_edges, path)


def parse_edge_list(text: str) -> Graph:
    """
    Parse edge-list text into a checked Graph.

    Ids are relabelled densely in ascending order of the original ids, so a
    file written by write_edge_list reads back with the same ids.
    """
    pairs: list[tuple[int, int, int]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise EdgeListError(f"expected 2 fields, got {len(fields)}", number)
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise EdgeListError(f"non-integer vertex id in {line!r}", number) from None
        if a < 0 or b < 0:
            raise EdgeListError(f"negative vertex id in {line!r}", number)
        if a == b:
            raise EdgeListError(f"self-loop on vertex {a}", number)
        pairs.append((a, b, number))

    ids = sorted({v for a, b, _ in pairs for v in (a, b)})
    relabel = {old: new for new, old in enumerate(ids)}

    g = Graph(len(ids), checked=True)
    seen: set[tuple[int, int]] = set()
    for a, b, number in pairs:
        key = (min(a, b), max(a, b))
        if key in seen:
            raise EdgeListError(f"duplicate edge {key}", number)
        seen.add(key)
        g.add_edge(relabel[a], relabel[b])
    return g


def read_edge_list(path: str | Path) -> Graph:
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("ascii")
    except UnicodeDecodeError as exc:
        line = raw.count(b"\n", 0, exc.start) + 1
        raise EdgeListError(f"non-ASCII byte 0x{raw[exc.start]:02x}", line) from None
    return parse_edge_list(text)


def format_tableau(edges: list[list[int]]) -> str:
    return "".join(" ".join(str(v) for v in sorted(h)) + "\n" for h in edges)
