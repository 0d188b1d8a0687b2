import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pirebalance.errors import BadParametersError, InvalidInstanceError, ParseError
from pirebalance.fixtures import DEMO1_X, DEMO1_Y
from pirebalance.instance import (
    Instance,
    classify,
    dumps_instance,
    generate_instance,
    loads_instance,
    make_instance,
    read_instance,
    validate_instance,
    vertex_labels,
    write_instance,
)
from pirebalance.network import build_network


def two_vertex(k=5, x=(5, 0), y=(0, 5), start="u"):
    net = build_network(["u", "v"], [("u", "v", 7)])
    return Instance(net, {"u": x[0], "v": x[1]}, {"u": y[0], "v": y[1]}, k, start)


def test_demo1_is_valid(demo1):
    assert validate_instance(demo1).ok
    assert demo1.total == 30 == sum(demo1.y.values())


def test_x_equals_y_is_valid(table1):
    inst = make_instance(table1, DEMO1_X, DEMO1_X, 5, "A")
    assert validate_instance(inst).ok


def test_unbalanced_reported(table1):
    report = validate_instance(make_instance(table1, {"A": 10}, {"B": 5}, 5, "A"))
    assert not report.ok
    assert any("unbalanced totals" in v for v in report.violations)


def test_every_violation_reported(table1):
    inst = Instance(table1, {"A": -1, "Q": 2}, {}, 0, "Z")
    report = validate_instance(inst)
    text = "\n".join(report.violations)
    for needle in ("capacity", "start", "unknown vertex 'Q'", "x[A]", "y missing"):
        assert needle in text


def test_make_instance_fills_zeros(table1):
    inst = make_instance(table1, {"A": 5}, {"B": 5}, 5, "A")
    assert inst.x["G"] == 0 and inst.y["A"] == 0


def test_classify_demo1(demo1):
    c = classify(demo1)
    assert c.excess == {"A": 10, "E": 5, "F": 5}
    assert c.deficit == {"B": 5, "D": 10, "G": 5}
    assert c.balanced == {"C"}


def test_classify_balanced(table1):
    c = classify(make_instance(table1, DEMO1_Y, DEMO1_Y, 5, "A"))
    assert not c.excess and not c.deficit
    assert c.balanced == set(table1.vertices)


def test_classify_two_vertex():
    c = classify(two_vertex())
    assert c.excess == {"u": 5} and c.deficit == {"v": 5}


def test_classify_rejects_invalid(table1):
    with pytest.raises(InvalidInstanceError, match="unbalanced"):
        classify(make_instance(table1, {"A": 10}, {"B": 5}, 5, "A"))


def test_vertex_labels():
    assert vertex_labels(3) == ["A", "B", "C"]
    assert vertex_labels(28)[25:] == ["Z", "AA", "AB"]


def test_generate_two_vertex_one_unit():
    for seed in range(20):
        inst = generate_instance(2, 5, seed, units_of_k=True, max_units=1)
        assert sorted(inst.x.values()) == [0, 5]
        assert sorted(inst.y.values()) == [0, 5]
        assert inst.x != inst.y


def test_generate_deterministic():
    a = generate_instance(7, 5, 42, units_of_k=True, max_units=6)
    b = generate_instance(7, 5, 42, units_of_k=True, max_units=6)
    assert dumps_instance(a) == dumps_instance(b)
    assert validate_instance(a).ok


def test_generate_seed_changes_output():
    dumps = {dumps_instance(generate_instance(6, 5, s)) for s in range(10)}
    assert len(dumps) == 10


@pytest.mark.parametrize("kwargs", [dict(n=1, k=5), dict(n=3, k=0), dict(n=3, k=5, max_units=0)])
def test_generate_bad_parameters(kwargs):
    with pytest.raises(BadParametersError):
        generate_instance(seed=0, **kwargs)


@given(st.integers(0, 10**6), st.integers(2, 12), st.sampled_from([1, 5, 10]), st.integers(1, 8))
@settings(max_examples=150, deadline=None)
def test_generator_invariants(seed, n, k, max_units):
    inst = generate_instance(n, k, seed, units_of_k=True, max_units=max_units)
    assert validate_instance(inst).ok
    assert inst.total <= max_units * k
    lengths = set(inst.network.edge_lengths.values())
    assert all(1 <= d <= 30 and d == int(d) for d in lengths)
    c = classify(inst)
    assert all(q % k == 0 for q in [*c.excess.values(), *c.deficit.values()])
    assert c.total_surplus == c.total_shortfall == sum(abs(inst.x[v] - inst.y[v]) for v in inst.vertices) // 2
    assert set(c.excess) | set(c.deficit) | c.balanced == set(inst.vertices)


def test_demo1_fixture_file(demo1, fixtures_dir):
    assert read_instance(fixtures_dir / "demo1.json") == demo1
    data = json.loads((fixtures_dir / "demo1.json").read_text())
    assert "matrix" in data and data["matrix"][1][6] == 25


def test_round_trip_1000_seeds(tmp_path):
    path = tmp_path / "i.json"
    for seed in range(1000):
        inst = generate_instance(2 + seed % 11, (1, 5, 10)[seed % 3], seed, units_of_k=seed % 2 == 0, max_units=6)
        write_instance(inst, path)
        assert read_instance(path) == inst


def test_edges_format_round_trip():
    inst = two_vertex()
    text = dumps_instance(inst)
    assert '"edges"' not in text  # two vertices with an edge is complete
    net = build_network(["a", "b", "c"], [("a", "b", 1), ("b", "c", 2.5)])
    inst = Instance(net, {"a": 1, "b": 0, "c": 0}, {"a": 0, "b": 0, "c": 1}, 1, "a")
    text = dumps_instance(inst)
    assert '"edges"' in text
    assert loads_instance(text) == inst


def _demo_dict(demo1):
    return json.loads(dumps_instance(demo1))


def test_missing_capacity_named(demo1):
    data = _demo_dict(demo1)
    del data["capacity"]
    with pytest.raises(ParseError, match="capacity"):
        loads_instance(json.dumps(data))


@pytest.mark.parametrize(
    "mutate, needle",
    [
        (lambda d: d["vertices"][2].pop("y"), "vertices[2]"),
        (lambda d: d.update(start=3), "start"),
        (lambda d: d.update(edges=[]), "exactly one"),
        (lambda d: d.pop("matrix"), "exactly one"),
        (lambda d: d.update(order=["A"]), "order"),
        (lambda d: d["vertices"][0].update(x=True), "x"),
    ],
)
def test_parse_errors(demo1, mutate, needle):
    data = _demo_dict(demo1)
    mutate(data)
    with pytest.raises(ParseError, match=needle.replace("[", r"\[").replace("]", r"\]")):
        loads_instance(json.dumps(data))


def test_invalid_json_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "vertices": [\n')
    with pytest.raises(ParseError, match="line"):
        read_instance(path)


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        read_instance(tmp_path / "nope.json")
