from itertools import combinations

import pytest

from soscurves.configuration import (
    ConfigComponent,
    ConfigPoint,
    CurveConfiguration,
    OwnSingularity,
    induced_subconfiguration,
)
from soscurves.curve import analyze_curve, to_configuration
from soscurves.decide import (
    PreconditionViolated,
    decide_psd_eq_sos,
    decide_unbounded_case,
    decide_virtually_compact,
    explain,
)
from soscurves.polyparse import parse_bipoly as B
from soscurves.tribool import TriBool

Y, N, U = TriBool.YES, TriBool.NO, TriBool.UNKNOWN

VERDICT_TABLE = [
    (["x", "y", "1 - x - y"], N, ("MT4",)),
    (["y - x^2", "y + 1"], N, ("MT2",)),
    (["y - x^2", "y"], N, ("MT1",)),
    (["y - x^2", "y - 1"], N, ("MT4",)),
    (["(x^2 + y^2 - 1)", "y"], Y, ()),
    (["x", "y"], Y, ()),
    (["x^2 + y^2 - 1", "(x-1)^2 + y^2 - 1"], Y, ()),
    (["x^2 + y^2 - 1", "(x-3)^2 + y^2 - 1"], N, ("MT2",)),
    (["x*y - 1", "x - y"], N, ("MT4",)),
    (["y", "y^2 - x^3"], N, ("MT1",)),
    (["x^2 + y^2 + 1", "x^2 + y^2 - 1"], Y, ()),
]


def config_for(polys):
    return to_configuration(analyze_curve([B(s) for s in polys]))


@pytest.mark.parametrize("polys,answer,failed", VERDICT_TABLE)
def test_verdict_table(polys, answer, failed):
    v = decide_psd_eq_sos(config_for(polys))
    assert v.answer is answer
    assert v.failed_conditions == failed
    if answer is N:
        assert v.witness_hint is not None
    if answer is Y:
        assert v.failed_conditions == ()


def test_triangle_witness_is_the_cycle():
    v = decide_psd_eq_sos(config_for(["x", "y", "1 - x - y"]))
    assert v.witness_hint is not None
    assert v.witness_hint.count("C") == 3 and v.witness_hint.count("P") == 3


def test_unknown_cubic_gives_unknown_with_consulted_flags():
    v = decide_psd_eq_sos(config_for(["y - x^3"]))
    assert v.answer is U
    assert "MT3" in v.failed_conditions
    assert "NR-Points" in v.failed_conditions


def test_metadata_settles_the_cubic():
    an = analyze_curve(
        [B("y - x^3")],
        {0: {"is_real": True, "bounded_ring_trivial": True, "rational_open_A1": True}},
    )
    v = decide_psd_eq_sos(to_configuration(an))
    assert v.answer is Y


def test_definite_failure_beats_unknown_flags():
    # the cusp classification is definite even though the cubic's global
    # attributes stay undetermined
    v = decide_psd_eq_sos(config_for(["y", "y^2 - x^3"]))
    assert v.answer is N
    assert v.failed_conditions == ("MT1",)


def abstract_star(ompit=Y):
    comps = tuple(
        ConfigComponent(f"C{i}", f"C{i}", Y, Y, Y, Y) for i in (1, 2, 3)
    )
    pts = (ConfigPoint("P1", Y, ("C1", "C2", "C3"), ompit),)
    return CurveConfiguration(comps, pts)


def test_abstract_star_with_ompit_flag_passes():
    v = decide_unbounded_case(abstract_star())
    assert v.answer is Y


def test_abstract_star_without_ompit_fails_mt1():
    v = decide_unbounded_case(abstract_star(ompit=N))
    assert v.answer is N
    assert v.failed_conditions == ("MT1",)


def test_virtually_compact_wrapper():
    two_circles = config_for(["x^2 + y^2 - 1", "(x-1)^2 + y^2 - 1"])
    assert decide_virtually_compact(two_circles).answer is Y
    far = config_for(["x^2 + y^2 - 1", "(x-3)^2 + y^2 - 1"])
    got = decide_virtually_compact(far)
    assert got.answer is N and got.failed_conditions == ("MT2",)
    single = config_for(["x^2 + y^2 - 1"])
    assert decide_virtually_compact(single).answer is Y
    with pytest.raises(PreconditionViolated):
        decide_virtually_compact(config_for(["x^2 + y^2 - 1", "y"]))


def test_unbounded_wrapper():
    assert decide_unbounded_case(config_for(["x", "y"])).answer is Y
    got = decide_unbounded_case(config_for(["x*y - 1", "x - y"]))
    assert got.answer is N and got.failed_conditions == ("MT4",)
    with pytest.raises(PreconditionViolated):
        decide_unbounded_case(config_for(["x^2 + y^2 - 1", "y"]))


def test_wrappers_agree_with_general_engine():
    for polys in (["x", "y"], ["x*y - 1", "x - y"], ["x", "y", "1 - x - y"]):
        c = config_for(polys)
        assert decide_unbounded_case(c) == decide_psd_eq_sos(c)
    for polys in (
        ["x^2 + y^2 - 1", "(x-1)^2 + y^2 - 1"],
        ["x^2 + y^2 - 1", "(x-3)^2 + y^2 - 1"],
    ):
        c = config_for(polys)
        assert decide_virtually_compact(c) == decide_psd_eq_sos(c)


def test_nonreal_component_with_real_point_is_refused():
    v = decide_psd_eq_sos(config_for(["x^2 + y^2", "x - 5"]))
    assert v.answer is N
    assert "NR-Points" in v.failed_conditions
    assert "NR-Touch" in v.failed_conditions  # the conjugate pair over x = 5


def test_yes_verdicts_are_monotone_under_subcurves():
    for polys, answer, _ in VERDICT_TABLE:
        if answer is not Y:
            continue
        config = config_for(polys)
        ids = config.component_ids()
        for r in range(1, len(ids) + 1):
            for keep in combinations(ids, r):
                sub = induced_subconfiguration(config, keep)
                assert decide_psd_eq_sos(sub).answer is Y


def test_verdict_invariant_under_point_relabeling():
    config = config_for(["x", "y", "1 - x - y"])
    renamed = CurveConfiguration(
        config.components,
        tuple(
            ConfigPoint(f"Q{9 - i}", p.realness, p.components, p.ompit)
            for i, p in enumerate(config.points)
        ),
    )
    assert decide_psd_eq_sos(renamed).answer is N
    assert decide_psd_eq_sos(renamed).failed_conditions == ("MT4",)


def test_explain_mentions_the_clauses():
    triangle = explain(decide_psd_eq_sos(config_for(["x", "y", "1 - x - y"])))
    assert "forest" in triangle
    circle_line = explain(decide_psd_eq_sos(config_for(["x^2 + y^2 - 1", "y"])))
    assert "C' = {C2}" in circle_line
    cusp = explain(decide_psd_eq_sos(config_for(["y", "y^2 - x^3"])))
    assert "ordinary multiple point" in cusp


def test_own_singularity_with_unknown_ompit_is_consulted():
    c = ConfigComponent(
        "C1", "C1", Y, Y, N, N, own_singularities=(OwnSingularity("P9", U),)
    )
    v = decide_psd_eq_sos(CurveConfiguration((c,), ()))
    assert v.answer is U
    assert v.failed_conditions == ("MT1",)
