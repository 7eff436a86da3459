import random

import pytest

from soscurves.configuration import (
    AttachmentOrder,
    ConfigComponent,
    ConfigPoint,
    ConfigurationError,
    CurveConfiguration,
    Cycle,
    Forest,
    attachment_order,
    configuration_from_json,
    configuration_to_json,
    connectivity_report,
    extract_C_prime,
    induced_subconfiguration,
    is_forest,
)
from soscurves.tribool import TriBool

Y, N, U = TriBool.YES, TriBool.NO, TriBool.UNKNOWN


def comp(cid, bounded=Y, **kw):
    return ConfigComponent(
        id=cid,
        label=kw.get("label", cid),
        is_real=kw.get("is_real", Y),
        has_real_points=kw.get("has_real_points", Y),
        bounded_ring_trivial=bounded,
        rational_open_A1=kw.get("rational_open_A1", Y),
        own_singularities=kw.get("own_singularities", ()),
    )


def point(pid, comps, realness=Y, ompit=Y):
    return ConfigPoint(pid, realness, tuple(comps), ompit)


def triangle():
    return CurveConfiguration(
        (comp("C1"), comp("C2"), comp("C3")),
        (
            point("P1", ["C1", "C2"]),
            point("P2", ["C1", "C3"]),
            point("P3", ["C2", "C3"]),
        ),
    )


def test_validation_rejects_bad_input():
    with pytest.raises(ConfigurationError):
        CurveConfiguration((comp("C1"),), (point("P1", ["C1", "C1"]),))
    with pytest.raises(ConfigurationError):
        CurveConfiguration((comp("C1"),), (point("P1", ["C1", "C9"]),))
    with pytest.raises(ConfigurationError):
        CurveConfiguration((comp("C1"), comp("C1")), ())


def test_triangle_is_a_six_cycle():
    got = is_forest(triangle(), ["C1", "C2", "C3"])
    assert isinstance(got, Cycle)
    assert len(got.nodes) == 6
    assert got.nodes[0] == "C1"  # canonical ordering starts at the least node


def test_two_components_two_points_is_a_four_cycle():
    config = CurveConfiguration(
        (comp("C1"), comp("C2")),
        (point("P1", ["C1", "C2"]), point("P2", ["C1", "C2"])),
    )
    got = is_forest(config, ["C1", "C2"])
    assert isinstance(got, Cycle)
    assert len(got.nodes) == 4


def test_concurrent_star_is_a_forest():
    config = CurveConfiguration(
        (comp("C1"), comp("C2"), comp("C3")),
        (point("P1", ["C1", "C2", "C3"]),),
    )
    assert isinstance(is_forest(config, ["C1", "C2", "C3"]), Forest)
    got = attachment_order(config, ["C1", "C2", "C3"])
    assert isinstance(got, AttachmentOrder)
    assert sorted(got.order) == ["C1", "C2", "C3"]


def test_forest_is_invariant_under_relabeling():
    relabeled = CurveConfiguration(
        (comp("Q3"), comp("Q1"), comp("Q2")),
        (
            point("P1", ["Q3", "Q1"]),
            point("P2", ["Q3", "Q2"]),
            point("P3", ["Q1", "Q2"]),
        ),
    )
    assert isinstance(is_forest(relabeled, ["Q1", "Q2", "Q3"]), Cycle)


def _order_is_valid(config, order):
    placed = []
    for cid in order:
        shared = set()
        for pt in config.points:
            if cid in pt.components and any(p in pt.components for p in placed):
                shared.add(pt.id)
        if len(shared) > 1:
            return False
        placed.append(cid)
    return True


def test_chain_attachment_order():
    config = CurveConfiguration(
        (comp("C1"), comp("C2"), comp("C3")),
        (point("P1", ["C1", "C2"]), point("P2", ["C2", "C3"])),
    )
    got = attachment_order(config, ["C1", "C2", "C3"])
    assert isinstance(got, AttachmentOrder)
    assert _order_is_valid(config, got.order)


def test_triangle_attachment_returns_the_cycle():
    got = attachment_order(triangle(), ["C1", "C2", "C3"])
    assert isinstance(got, Cycle)


def test_attachment_matches_forest_on_random_structures():
    rng = random.Random(20260816)
    for _ in range(300):
        n = rng.randint(1, 5)
        comps = tuple(comp(f"C{i+1}") for i in range(n))
        ids = [c.id for c in comps]
        pts = []
        for j in range(rng.randint(0, 6)):
            if n < 2:
                break
            k = rng.randint(2, n)
            pts.append(point(f"P{j+1}", rng.sample(ids, k)))
        config = CurveConfiguration(comps, tuple(pts))
        forest = isinstance(is_forest(config, ids), Forest)
        ordered = attachment_order(config, ids)
        assert isinstance(ordered, AttachmentOrder) == forest
        if forest:
            assert _order_is_valid(config, ordered.order)


def test_extract_C_prime_splits_by_bounded_flag():
    config = CurveConfiguration(
        (comp("C1", bounded=N), comp("C2", bounded=Y), comp("C3", bounded=U)),
        (),
    )
    split = extract_C_prime(config)
    assert split.members == ("C2",)
    assert split.unknown == ("C3",)
    ids = set(split.members) | set(split.unknown) | {"C1"}
    assert ids == set(config.component_ids())


def test_connectivity_report():
    config = CurveConfiguration(
        (comp("C1", bounded=N), comp("C2"), comp("C3"), comp("C4", bounded=N)),
        (point("P1", ["C2", "C3"]),),
    )
    pieces = connectivity_report(config)
    assert [p.components for p in pieces] == [("C1",), ("C2", "C3"), ("C4",)]
    assert [p.bounded_ring_trivial for p in pieces] == [N, Y, N]


def test_induced_subconfiguration_drops_orphan_points():
    sub = induced_subconfiguration(triangle(), ["C1", "C2"])
    assert [c.id for c in sub.components] == ["C1", "C2"]
    assert [p.id for p in sub.points] == ["P1"]
    assert isinstance(is_forest(sub, ["C1", "C2"]), Forest)


def test_points_with_unknown_realness_still_count_as_edges():
    config = CurveConfiguration(
        (comp("C1"), comp("C2")),
        (point("P1", ["C1", "C2"], realness=U), point("P2", ["C1", "C2"], realness=U)),
    )
    assert isinstance(is_forest(config, ["C1", "C2"]), Cycle)


def test_json_round_trip():
    config = triangle()
    raw = configuration_to_json(config)
    assert set(raw) == {"components", "intersection_points"}
    back = configuration_from_json(raw)
    assert back == config


def test_json_rejects_garbage():
    with pytest.raises(ConfigurationError):
        configuration_from_json({"components": "nope"})
    with pytest.raises(ConfigurationError):
        configuration_from_json({"components": [{"id": "C1", "is_real": "maybe"}]})
