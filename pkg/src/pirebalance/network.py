"""Graph model: edge lengths, all-pairs shortest paths and neighbor lists."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from pirebalance.errors import (
    AsymmetricInputError,
    DisconnectedGraphError,
    DuplicateVertexError,
    NegativeEntryError,
    NegativeLengthError,
    ParseError,
    UnknownEndpointError,
    UnknownVertexError,
)

REL_TOL = 1e-9


def _is_integral(value: float) -> bool:
    return math.isfinite(value) and float(value).is_integer()


def strictly_less(a: float, b: float) -> bool:
    """``a < b``, exact for integer values and with a 1e-9 relative margin otherwise."""
    if math.isinf(b):
        return not math.isinf(a)
    if _is_integral(a) and _is_integral(b):
        return a < b
    return a < b - REL_TOL * max(abs(a), abs(b), 1.0)


def format_length(value: float) -> int | float | None:
    """JSON-friendly length: ints stay ints, infinity becomes ``None``."""
    value = float(value)
    if math.isinf(value):
        return None
    return int(value) if value.is_integer() else value


@dataclass(frozen=True, eq=False)
class Network:
    """Undirected graph plus its metric closure.

    ``edge_lengths`` keeps the raw input (one key per unordered pair, stored
    in vertex order). ``dist`` is the closed matrix indexed like ``vertices``.
    """

    vertices: tuple[str, ...]
    edge_lengths: Mapping[tuple[str, str], float]
    dist: np.ndarray = field(repr=False)
    index: Mapping[str, int] = field(repr=False)
    neighbors: Mapping[str, tuple[tuple[str, float], ...]] = field(repr=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return self.vertices == other.vertices and dict(self.edge_lengths) == dict(other.edge_lengths)

    def __hash__(self) -> int:
        return hash((self.vertices, tuple(sorted(self.edge_lengths.items()))))

    def __contains__(self, v: object) -> bool:
        return v in self.index

    def __len__(self) -> int:
        return len(self.vertices)

    def d(self, u: str, v: str) -> float:
        """Shortest-path distance between two labels."""
        try:
            return float(self.dist[self.index[u], self.index[v]])
        except KeyError as exc:
            raise UnknownVertexError(f"unknown vertex {exc.args[0]!r}") from None

    def is_complete(self) -> bool:
        n = len(self.vertices)
        return len(self.edge_lengths) == n * (n - 1) // 2

    def raw_matrix(self) -> np.ndarray:
        """Edge lengths as a square matrix, +inf where there is no edge."""
        n = len(self.vertices)
        m = np.full((n, n), np.inf)
        np.fill_diagonal(m, 0.0)
        for (u, v), length in self.edge_lengths.items():
            i, j = self.index[u], self.index[v]
            m[i, j] = m[j, i] = length
        return m


def metric_closure(matrix) -> np.ndarray:
    """All-pairs shortest paths (Roy-Warshall / Floyd-Warshall).

    Missing edges are ``inf``. The input is not modified.
    """
    m = np.array(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    if np.isnan(m).any():
        raise ValueError("matrix contains NaN")
    if (m < 0).any():
        i, j = map(int, np.argwhere(m < 0)[0])
        raise NegativeEntryError(f"negative entry {m[i, j]} at ({i}, {j})")
    if np.any(np.diag(m) != 0):
        raise ValueError("matrix diagonal must be zero")
    finite = np.isfinite(m)
    asym = (finite != finite.T) | (finite & ~np.isclose(m, m.T, rtol=REL_TOL, atol=0.0, equal_nan=False))
    if asym.any():
        i, j = map(int, np.argwhere(asym)[0])
        raise AsymmetricInputError(f"entries ({i}, {j})={m[i, j]} and ({j}, {i})={m[j, i]} differ")
    for mid in range(m.shape[0]):
        np.minimum(m, m[:, mid, None] + m[None, mid, :], out=m)
    return m


def closure_changes(labels: Sequence[str], before, after) -> list[tuple[str, str, float, float]]:
    """Unordered pairs whose length strictly decreased under closure."""
    before = np.asarray(before, dtype=float)
    after = np.asarray(after, dtype=float)
    out = []
    n = len(labels)
    for i in range(n):
        for j in range(i + 1, n):
            if strictly_less(after[i, j], before[i, j]):
                out.append((labels[i], labels[j], float(before[i, j]), float(after[i, j])))
    return out


def _sort_neighbors(vertices: Sequence[str], dist: np.ndarray) -> dict[str, tuple[tuple[str, float], ...]]:
    out = {}
    for i, v in enumerate(vertices):
        row = [(float(dist[i, j]), u) for j, u in enumerate(vertices) if j != i]
        row.sort()
        out[v] = tuple((u, d) for d, u in row)
    return out


def _check_labels(vertices: Iterable[str]) -> tuple[str, ...]:
    labels = tuple(vertices)
    seen = set()
    for v in labels:
        if not isinstance(v, str) or not v:
            raise ValueError(f"vertex label must be a non-empty string, got {v!r}")
        if v in seen:
            raise DuplicateVertexError(f"duplicate vertex {v!r}")
        seen.add(v)
    return labels


def _finish(labels: tuple[str, ...], edges: dict[tuple[str, str], float]) -> Network:
    index = {v: i for i, v in enumerate(labels)}
    n = len(labels)
    raw = np.full((n, n), np.inf)
    np.fill_diagonal(raw, 0.0)
    for (u, v), length in edges.items():
        raw[index[u], index[v]] = raw[index[v], index[u]] = length
    dist = metric_closure(raw)
    if np.isinf(dist).any():
        i, j = map(int, np.argwhere(np.isinf(dist))[0])
        raise DisconnectedGraphError(f"no path between {labels[i]!r} and {labels[j]!r}")
    dist.setflags(write=False)
    return Network(
        vertices=labels,
        edge_lengths=edges,
        dist=dist,
        index=index,
        neighbors=_sort_neighbors(labels, dist),
    )


def build_network(vertices: Iterable[str], edges: Iterable[tuple[str, str, float]]) -> Network:
    """Build a network from an undirected edge list.

    Parallel edges keep the shorter length; self loops are ignored.
    """
    labels = _check_labels(vertices)
    index = {v: i for i, v in enumerate(labels)}
    lengths: dict[tuple[str, str], float] = {}
    for u, v, length in edges:
        for end in (u, v):
            if end not in index:
                raise UnknownEndpointError(f"edge ({u!r}, {v!r}) has unknown endpoint {end!r}")
        length = float(length)
        if math.isnan(length):
            raise ValueError(f"edge ({u!r}, {v!r}) has NaN length")
        if length < 0:
            raise NegativeLengthError(f"edge ({u!r}, {v!r}) has negative length {length}")
        if u == v or math.isinf(length):
            continue
        key = (u, v) if index[u] < index[v] else (v, u)
        lengths[key] = min(length, lengths.get(key, math.inf))
    return _finish(labels, lengths)


def network_from_matrix(order: Sequence[str], matrix) -> Network:
    """Build a network from a full (possibly unclosed) distance matrix.

    ``None`` or ``inf`` entries mean "no direct edge".
    """
    labels = _check_labels(order)
    rows = [[math.inf if x is None else float(x) for x in row] for row in matrix]
    n = len(labels)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"matrix must be {n}x{n} to match the vertex order")
    m = np.array(rows, dtype=float).reshape(n, n)
    # run the same checks the closure does before trusting the entries
    metric_closure(m)
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if math.isfinite(m[i, j]):
                edges[(labels[i], labels[j])] = float(m[i, j])
    return _finish(labels, edges)


def sorted_neighbors(network: Network, v: str) -> list[tuple[str, float]]:
    """Every other vertex with its distance, nearest first, ties by label."""
    try:
        return list(network.neighbors[v])
    except KeyError:
        raise UnknownVertexError(f"unknown vertex {v!r}") from None


def read_matrix_csv(path) -> tuple[list[str], np.ndarray]:
    """Read a labeled distance matrix.

    First row holds the vertex labels. Data rows may start with their own
    label; empty cells and ``inf`` mean no edge.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if any(cell.strip() for cell in r)]
    if not rows:
        raise ParseError("empty matrix file", path=path)
    header = [c.strip() for c in rows[0]]
    if header and header[0] == "":
        header = header[1:]
    n = len(header)
    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        cells = [c.strip() for c in row]
        if len(cells) == n + 1:
            if len(values) >= n or cells[0] != header[len(values)]:
                raise ParseError(f"row label {cells[0]!r} does not match header", f"line {lineno}", path)
            cells = cells[1:]
        if len(cells) != n:
            raise ParseError(f"expected {n} entries, got {len(cells)}", f"line {lineno}", path)
        try:
            values.append([math.inf if c == "" else float(c) for c in cells])
        except ValueError as exc:
            raise ParseError(str(exc), f"line {lineno}", path) from None
    if len(values) != n:
        raise ParseError(f"expected {n} data rows, got {len(values)}", path=path)
    return header, np.array(values, dtype=float).reshape(n, n)


def matrix_to_csv(labels: Sequence[str], matrix) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(labels)
    for row in np.asarray(matrix, dtype=float):
        writer.writerow(["inf" if math.isinf(x) else format_length(x) for x in row])
    return buf.getvalue()


def write_matrix_csv(path, labels: Sequence[str], matrix) -> None:
    Path(path).write_text(matrix_to_csv(labels, matrix), encoding="utf-8")
