"""Problem instances: stocks, targets, ship capacity and start vertex."""

from __future__ import annotations

import json
import math
import random
import string
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from pirebalance.errors import BadParametersError, InvalidInstanceError, ParseError
from pirebalance.network import Network, build_network, format_length, network_from_matrix


@dataclass(frozen=True)
class Instance:
    network: Network
    x: Mapping[str, int]
    y: Mapping[str, int]
    k: int
    start: str

    @property
    def total(self) -> int:
        """N, the number of containers in the system."""
        return sum(self.x.values())

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.network.vertices


def make_instance(network: Network, x: Mapping[str, int], y: Mapping[str, int], k: int, start: str) -> Instance:
    """Instance with ``x`` and ``y`` filled in as 0 for vertices not mentioned."""
    xs = {v: x.get(v, 0) for v in network.vertices}
    ys = {v: y.get(v, 0) for v in network.vertices}
    for extra in (set(x) | set(y)) - set(network.vertices):
        # keep unknown keys so validation can report them
        if extra in x:
            xs[extra] = x[extra]
        if extra in y:
            ys[extra] = y[extra]
    return Instance(network=network, x=xs, y=ys, k=k, start=start)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _is_count(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 0


def validate_instance(instance: Instance) -> ValidationReport:
    """Collect every broken instance invariant. Never raises."""
    problems = []
    vertices = set(instance.network.vertices)
    k = instance.k
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        problems.append(f"capacity must be a positive integer, got {k!r}")
    if instance.start not in vertices:
        problems.append(f"start {instance.start!r} is not a network vertex")
    for name, counts in (("x", instance.x), ("y", instance.y)):
        for v in sorted(set(counts) - vertices):
            problems.append(f"{name} has unknown vertex {v!r}")
        for v in instance.network.vertices:
            if v not in counts:
                problems.append(f"{name} missing for vertex {v!r}")
            elif not _is_count(counts[v]):
                problems.append(f"{name}[{v}] must be a nonnegative integer, got {counts[v]!r}")
    if not problems:
        sx, sy = sum(instance.x.values()), sum(instance.y.values())
        if sx != sy:
            problems.append(f"unbalanced totals: sum x = {sx}, sum y = {sy}")
    return ValidationReport(tuple(problems))


def require_valid(instance: Instance) -> None:
    report = validate_instance(instance)
    if not report.ok:
        raise InvalidInstanceError(report.violations)


@dataclass(frozen=True)
class Classification:
    excess: Mapping[str, int]
    deficit: Mapping[str, int]
    balanced: frozenset[str] = field(default_factory=frozenset)

    @property
    def total_surplus(self) -> int:
        return sum(self.excess.values())

    @property
    def total_shortfall(self) -> int:
        return sum(self.deficit.values())


def classify(instance: Instance) -> Classification:
    """Split vertices into excess, deficit and balanced ones."""
    require_valid(instance)
    excess, deficit, balanced = {}, {}, set()
    for v in instance.network.vertices:
        diff = instance.x[v] - instance.y[v]
        if diff > 0:
            excess[v] = diff
        elif diff < 0:
            deficit[v] = -diff
        else:
            balanced.add(v)
    return Classification(excess=excess, deficit=deficit, balanced=frozenset(balanced))


def vertex_labels(n: int) -> list[str]:
    """A, B, ..., Z, AA, AB, ... (spreadsheet column style)."""
    out = []
    for i in range(n):
        label = ""
        i += 1
        while i:
            i, rem = divmod(i - 1, 26)
            label = string.ascii_uppercase[rem] + label
        out.append(label)
    return out


def _scatter(rng: random.Random, labels: list[str], units: int) -> dict[str, int]:
    counts = dict.fromkeys(labels, 0)
    for _ in range(units):
        counts[rng.choice(labels)] += 1
    return counts


def generate_instance(
    n: int,
    k: int,
    seed: int,
    units_of_k: bool = True,
    max_units: int = 4,
    edge_prob: float = 0.3,
) -> Instance:
    """Random connected instance with integer edge lengths in [1, 30].

    With ``units_of_k`` every stock and target is a multiple of ``k`` and at
    most ``max_units`` shiploads exist in total; otherwise containers are
    scattered one at a time, at most ``max_units * k`` of them. Targets are
    redrawn until they differ from the stocks, so there is always work to do.
    """
    if not isinstance(n, int) or n < 2:
        raise BadParametersError(f"n must be an integer >= 2, got {n!r}")
    if not isinstance(k, int) or k < 1:
        raise BadParametersError(f"k must be an integer >= 1, got {k!r}")
    if not isinstance(max_units, int) or max_units < 1:
        raise BadParametersError(f"max_units must be an integer >= 1, got {max_units!r}")
    if not 0.0 <= edge_prob <= 1.0:
        raise BadParametersError(f"edge_prob must lie in [0, 1], got {edge_prob!r}")

    rng = random.Random(seed)
    labels = vertex_labels(n)

    order = labels[:]
    rng.shuffle(order)
    pairs = {}
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        pairs[tuple(sorted((u, v)))] = rng.randint(1, 30)
    for i, u in enumerate(labels):
        for v in labels[i + 1:]:
            if (u, v) not in pairs and rng.random() < edge_prob:
                pairs[(u, v)] = rng.randint(1, 30)
    edges = [(u, v, length) for (u, v), length in sorted(pairs.items())]
    network = build_network(labels, edges)

    if units_of_k:
        units, scale = rng.randint(1, max_units), k
    else:
        units, scale = rng.randint(1, max_units * k), 1
    x = _scatter(rng, labels, units)
    y = _scatter(rng, labels, units)
    while y == x:
        y = _scatter(rng, labels, units)
    start = rng.choice(labels)
    return Instance(
        network=network,
        x={v: c * scale for v, c in x.items()},
        y={v: c * scale for v, c in y.items()},
        k=k,
        start=start,
    )


# -- file format -------------------------------------------------------------


def instance_to_dict(instance: Instance) -> dict:
    net = instance.network
    out: dict = {
        "vertices": [{"id": v, "x": instance.x[v], "y": instance.y[v]} for v in net.vertices],
    }
    if net.is_complete() and len(net) > 1:
        raw = net.raw_matrix()
        out["order"] = list(net.vertices)
        out["matrix"] = [[format_length(d) for d in row] for row in raw]
    else:
        out["edges"] = [
            {"from": u, "to": v, "length": format_length(length)}
            for (u, v), length in sorted(net.edge_lengths.items(), key=lambda kv: (net.index[kv[0][0]], net.index[kv[0][1]]))
        ]
    out["capacity"] = instance.k
    out["start"] = instance.start
    return out


def _field(obj: dict, key: str, kind, where: str):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", where)
    if key not in obj:
        raise ParseError(f"missing field {key!r}", where)
    value = obj[key]
    ok = isinstance(value, kind) and not (kind is not bool and isinstance(value, bool))
    if not ok:
        raise ParseError(f"field {key!r} has wrong type {type(value).__name__}", f"{where}.{key}")
    return value


def _length(value, where: str) -> float:
    if value is None:
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"length must be a number, got {value!r}", where)
    return float(value)


def instance_from_dict(data: dict) -> Instance:
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", "$")
    vertices = _field(data, "vertices", list, "$")
    labels, x, y = [], {}, {}
    for i, item in enumerate(vertices):
        where = f"vertices[{i}]"
        vid = _field(item, "id", str, where)
        labels.append(vid)
        x[vid] = _field(item, "x", int, where)
        y[vid] = _field(item, "y", int, where)
    has_edges, has_matrix = "edges" in data, "matrix" in data
    if has_edges == has_matrix:
        raise ParseError("exactly one of 'edges' or 'matrix' is required", "$")
    if has_edges:
        edges = []
        for i, e in enumerate(_field(data, "edges", list, "$")):
            where = f"edges[{i}]"
            u = _field(e, "from", str, where)
            v = _field(e, "to", str, where)
            if "length" not in e:
                raise ParseError("missing field 'length'", where)
            edges.append((u, v, _length(e["length"], f"{where}.length")))
        network = build_network(labels, edges)
    else:
        order = _field(data, "order", list, "$")
        matrix = _field(data, "matrix", list, "$")
        if sorted(order) != sorted(labels):
            raise ParseError("'order' must list exactly the vertex ids", "$.order")
        rows = []
        for i, row in enumerate(matrix):
            if not isinstance(row, list):
                raise ParseError("matrix row must be a list", f"matrix[{i}]")
            rows.append([_length(d, f"matrix[{i}][{j}]") for j, d in enumerate(row)])
        try:
            by_order = network_from_matrix(order, rows)
        except ValueError as exc:
            raise ParseError(str(exc), "$.matrix") from None
        # rebuild in the vertex-list order so round trips are exact
        network = build_network(labels, [(u, v, d) for (u, v), d in by_order.edge_lengths.items()])
    k = _field(data, "capacity", int, "$")
    start = _field(data, "start", str, "$")
    return Instance(network=network, x=x, y=y, k=k, start=start)


def dumps_instance(instance: Instance) -> str:
    return json.dumps(instance_to_dict(instance), indent=2) + "\n"


def loads_instance(text: str, path=None) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}", path) from None
    try:
        return instance_from_dict(data)
    except ParseError as exc:
        if path is None:
            raise
        raise ParseError(exc.message, exc.where, path) from None


def read_instance(path) -> Instance:
    path = Path(path)
    return loads_instance(path.read_text(encoding="utf-8"), path=path)


def write_instance(instance: Instance, path) -> None:
    Path(path).write_text(dumps_instance(instance), encoding="utf-8")
