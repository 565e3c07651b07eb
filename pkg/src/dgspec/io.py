"""Edge-list text format and JSON serialization.

Format: one ``src dst weight`` triple per line, ``#`` starts a comment, and
an optional ``n <count>`` header fixes the vertex count so isolated vertices
survive.  Vertex ids are 0-based.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .graph import Graph, GraphError

SCHEMA_VERSION = 1


class EdgeListParseError(GraphError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_edge_list(text: str, allow_loops: bool = True) -> Graph:
    n = None
    edges: dict[tuple[int, int], float] = {}
    first_line: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if n is not None or edges:
                raise EdgeListParseError(lineno, "the 'n <count>' header must come first and only once")
            if len(parts) != 2:
                raise EdgeListParseError(lineno, "expected 'n <count>'")
            try:
                n = int(parts[1])
            except ValueError:
                raise EdgeListParseError(lineno, f"vertex count is not an integer: {parts[1]!r}") from None
            if n < 1:
                raise EdgeListParseError(lineno, "vertex count must be positive")
            continue
        if len(parts) != 3:
            raise EdgeListParseError(lineno, f"expected 'src dst weight', got {len(parts)} fields")
        try:
            src, dst = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(lineno, "vertex ids must be integers") from None
        try:
            weight = float(parts[2])
        except ValueError:
            raise EdgeListParseError(lineno, f"weight is not a number: {parts[2]!r}") from None
        if not math.isfinite(weight):
            raise EdgeListParseError(lineno, "weight must be finite")
        if src < 0 or dst < 0:
            raise EdgeListParseError(lineno, "vertex ids must be nonnegative")
        if n is not None and max(src, dst) >= n:
            raise EdgeListParseError(lineno, f"vertex id out of range for n={n}")
        if src == dst and not allow_loops:
            raise EdgeListParseError(lineno, "self-loops are not allowed here")
        if (src, dst) in edges:
            raise EdgeListParseError(lineno, f"duplicate edge {src}->{dst} (first on line {first_line[(src, dst)]})")
        edges[(src, dst)] = weight
        first_line[(src, dst)] = lineno
    if n is None:
        if not edges:
            raise EdgeListParseError(0, "no edges and no 'n <count>' header")
        n = 1 + max(max(e) for e in edges)
    w = np.zeros((n, n))
    for (src, dst), weight in edges.items():
        w[dst, src] = weight
    return Graph(w, allow_loops=allow_loops)


def read_edge_list(path, allow_loops: bool = True) -> Graph:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"), allow_loops)


def format_edge_list(g: Graph) -> str:
    """Header plus edges in (src, dst) order; weights keep 17 significant digits."""
    lines = [f"n {g.n}"]
    for src, dst, w in sorted(g.edges()):
        lines.append(f"{src} {dst} {format(float(w), '.17g')}")
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path) -> None:
    Path(path).write_text(format_edge_list(g), encoding="utf-8")


def to_jsonable(obj):
    """Plain Python values; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return 0.0 if x == 0 else x
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": to_jsonable(obj.real), "im": to_jsonable(obj.imag)}
    if hasattr(obj, "value") and isinstance(obj.value, str):
        return obj.value
    return obj


def dumps_report(payload: dict) -> str:
    """Versioned, deterministic JSON (floats use Python's shortest round-trip repr)."""
    body = {"schema": SCHEMA_VERSION}
    body.update(to_jsonable(payload))
    return json.dumps(body, indent=2, allow_nan=False) + "\n"
