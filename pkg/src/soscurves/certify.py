"""End-to-end sum-of-squares certification.

The decision engine says when a certificate must exist; this module builds
one.  Components with trivial bounded-function ring are assembled by exact
two-square gluing; the remaining compact-type components are completed by
the Gram solver, with attachment values prescribed so the two parts agree,
then rotated into exact agreement summand by summand.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bipoly import BiPoly
from .components import CircleChart, PolyChart
from .configuration import extract_C_prime
from .curve import CurveAnalysis, to_configuration
from .decide import PreconditionViolated, decide_psd_eq_sos, explain
from .glue import SosCertificate, forest_assemble
from .gram import (
    NoConvergence,
    PrescribedValue,
    alternating_projections,
    build_gram_problem,
    extract_summands,
)
from .points import RationalPoint
from .ringfn import (
    CircleFn,
    IrrationalAttachment,
    LineFn,
    RingFn,
    restrict_to_chart,
    value_at_point,
)


class ValueNormMismatch(ValueError):
    """Prescribed attachment values whose square sum differs from the target
    value at the point; no completion can exist."""

    def __init__(self, point_id: str, expected: Fraction, got: Fraction):
        self.point_id = point_id
        super().__init__(
            f"at {point_id} the target value is {expected} but the prescribed "
            f"summand values have square sum {got}"
        )


class Inconclusive(RuntimeError):
    """The Gram search exhausted its degree budget without a certificate.

    Never evidence of non-existence; the caller reports it as such.
    """

    def __init__(self, degree_cap: int, best_residual: float):
        self.degree_cap = degree_cap
        self.best_residual = best_residual
        super().__init__(
            f"no certificate up to gram degree {degree_cap}; "
            f"best residual {best_residual:.3g}"
        )


@dataclass
class CompactResult:
    summands: list[dict[str, RingFn]]
    exact: bool
    residual: float
    degree: int
    note: str = ""


def _chart_of(analysis: CurveAnalysis, cid: str):
    return analysis.components[int(cid[1:]) - 1].chart


def _zero_fn(analysis: CurveAnalysis, cid: str) -> RingFn:
    chart = _chart_of(analysis, cid)
    if isinstance(chart, CircleChart):
        return CircleFn.zero(chart.q)
    return LineFn.zero()


def _min_gram_degree(targets: dict[str, RingFn]) -> int:
    need = 0
    for fn in targets.values():
        if isinstance(fn, LineFn):
            need = max(need, (max(fn.num.degree, 0) + 1) // 2)
        else:
            da = max(fn.a.degree, 0)
            db = fn.b.degree
            need = max(need, (da + 1) // 2, (db + 2) // 2 if db >= 0 else 0)
    return need


def _orthogonal_match(
    current: list[list[Fraction]], goal: list[list[Fraction]]
) -> list[list[Fraction]]:
    """Orthogonal matrix sending each current vector to its goal, built as a
    product of reflections; exists whenever all pairwise inner products agree."""
    k = len(current[0]) if current else 0
    b = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    for v0, a in zip(current, goal):
        v = [sum(b[i][j] * v0[j] for j in range(k)) for i in range(k)]
        u = [vi - ai for vi, ai in zip(v, a)]
        nn = sum(ui * ui for ui in u)
        if nn == 0:
            continue
        # replace b by (I - 2 u u^T / nn) b
        ub = [sum(u[l] * b[l][j] for l in range(k)) for j in range(k)]
        for i in range(k):
            ci = 2 * u[i] / nn
            if not ci:
                continue
            bi = b[i]
            for j in range(k):
                bi[j] -= ci * ub[j]
    return b


def compact_complete(
    analysis: CurveAnalysis,
    targets,
    subset: tuple[str, ...],
    prescribed: list[PrescribedValue] | tuple[PrescribedValue, ...] = (),
    degree_cap: int | None = None,
    tol: float = 1e-9,
    seed: int = 0,
) -> CompactResult:
    """Sum-of-squares completion on compact-type components.

    Prescribed attachment data pins the summand value vectors at points the
    rest of the curve has already fixed; the result is rotated so those
    vectors are reproduced entry by entry, not just in norm.  Escalates the
    gram degree until the cap, then raises Inconclusive.
    """
    subset = tuple(subset)
    target_map: dict[str, RingFn] = {}
    for cid in subset:
        chart = _chart_of(analysis, cid)
        if isinstance(targets, dict):
            target_map[cid] = targets[cid]
        else:
            target_map[cid] = restrict_to_chart(targets, chart)

    prescribed = list(prescribed)
    for pv in prescribed:
        expected = value_at_point(
            target_map[pv.component], _chart_of(analysis, pv.component), pv.point
        )
        if expected != pv.norm_sq:
            raise ValueNormMismatch(pv.point_id, expected, pv.norm_sq)

    d_min = max(_min_gram_degree(target_map), 1)
    cap = degree_cap if degree_cap is not None else d_min + 5
    if cap < d_min:
        raise Inconclusive(cap, float("inf"))

    best_residual = float("inf")
    best: tuple[list[dict[str, RingFn]], float, int] | None = None
    for degree in range(d_min, cap + 1):
        problem = build_gram_problem(analysis, target_map, subset, degree, prescribed)
        try:
            sol = alternating_projections(
                problem, tol=min(tol, 1e-9), seed=seed, extract_every=25
            )
        except NoConvergence as stall:
            best_residual = min(best_residual, min(stall.residual_tail, default=float("inf")))
            continue
        ext = extract_summands(sol)
        if ext.exact:
            summands = _align(analysis, ext.summands, prescribed, subset)
            return CompactResult(summands, True, 0.0, degree, ext.note)
        if ext.residual < best_residual:
            best_residual = ext.residual
            best = (ext.summands, ext.residual, degree)
        if ext.residual <= tol:
            summands, res, deg = best
            summands = _align(analysis, summands, prescribed, subset)
            return CompactResult(summands, False, res, deg, "numeric gram summands")
    if best is not None and best[1] <= max(tol, 1e-7):
        summands, res, deg = best
        summands = _align(analysis, summands, prescribed, subset)
        return CompactResult(summands, False, res, deg, "numeric gram summands")
    raise Inconclusive(cap, best_residual)


def _align(
    analysis: CurveAnalysis,
    summands: list[dict[str, RingFn]],
    prescribed: list[PrescribedValue],
    subset: tuple[str, ...],
) -> list[dict[str, RingFn]]:
    if not prescribed:
        return summands
    k = max(
        [len(summands)] + [len(pv.vector) for pv in prescribed]
    )
    while len(summands) < k:
        summands = summands + [{cid: _zero_fn(analysis, cid) for cid in subset}]
    goals = [list(pv.vector) + [Fraction(0)] * (k - len(pv.vector)) for pv in prescribed]
    currents = []
    for pv in prescribed:
        chart = _chart_of(analysis, pv.component)
        currents.append(
            [value_at_point(s[pv.component], chart, pv.point) for s in summands]
        )
    b = _orthogonal_match(currents, goals)
    rotated: list[dict[str, RingFn]] = []
    for i in range(k):
        entry: dict[str, RingFn] = {}
        for cid in subset:
            acc = _zero_fn(analysis, cid)
            for j in range(k):
                c = b[i][j]
                if c:
                    acc = acc + summands[j][cid].scale(c)
            entry[cid] = acc
        rotated.append(entry)
    return rotated


def full_certify(
    analysis: CurveAnalysis,
    F: BiPoly,
    mode: str = "exact",
    tol: float = 1e-9,
    degree_cap: int | None = None,
    seed: int = 0,
) -> SosCertificate:
    """Certificate for a target the decision engine promises is a sum of squares.

    The components with trivial bounded-function ring are glued exactly; the
    rest is completed through the Gram solver with the attachment values the
    glued part dictates.
    """
    config = to_configuration(analysis)
    verdict = decide_psd_eq_sos(config)
    if verdict.answer.name != "YES":
        raise PreconditionViolated(
            "certification requires a Yes verdict; got: " + explain(verdict)
        )
    split = extract_C_prime(config)
    cprime = [cid for cid in config.component_ids() if cid in split.members]
    rest = [cid for cid in config.component_ids() if cid not in split.members]

    if not rest:
        return forest_assemble(analysis, F, mode=mode, tol=tol)

    if degree_cap is None:
        degree_cap = 2 * max(F.total_degree, 1) + 6

    if not cprime:
        res = compact_complete(
            analysis, F, tuple(rest), (), degree_cap, tol, seed
        )
        return SosCertificate(
            summands=res.summands,
            exact=res.exact,
            residual=res.residual,
            provenance=[
                f"{'+'.join(rest)}: gram completion at degree {res.degree}"
            ],
        )

    line_cert = forest_assemble(analysis, F, mode=mode, tol=tol, subset=tuple(cprime))

    cprime_idx = {int(cid[1:]) - 1 for cid in cprime}
    rest_idx = {int(cid[1:]) - 1 for cid in rest}
    prescribed: list[PrescribedValue] = []
    for rec in analysis.points:
        if not rec.is_real:
            continue
        touches_line = [i for i in rec.components if i in cprime_idx]
        touches_rest = [i for i in rec.components if i in rest_idx]
        if not touches_line or not touches_rest:
            continue
        if not isinstance(rec.point, RationalPoint):
            raise IrrationalAttachment(
                f"attachment point {rec.id} joining the two parts is not rational"
            )
        donor = f"C{touches_line[0] + 1}"
        chart = _chart_of(analysis, donor)
        vector = tuple(
            value_at_point(s[donor], chart, rec.point) for s in line_cert.summands
        )
        receiver = f"C{touches_rest[0] + 1}"
        prescribed.append(PrescribedValue(rec.id, receiver, rec.point, vector))

    res = compact_complete(
        analysis, F, tuple(rest), prescribed, degree_cap, tol, seed
    )

    k = max(len(line_cert.summands), len(res.summands))
    merged: list[dict[str, RingFn]] = []
    for j in range(k):
        entry: dict[str, RingFn] = {}
        for cid in cprime:
            if j < len(line_cert.summands):
                entry[cid] = line_cert.summands[j][cid]
            else:
                entry[cid] = _zero_fn(analysis, cid)
        for cid in rest:
            if j < len(res.summands):
                entry[cid] = res.summands[j][cid]
            else:
                entry[cid] = _zero_fn(analysis, cid)
        merged.append(entry)

    return SosCertificate(
        summands=merged,
        exact=line_cert.exact and res.exact,
        residual=max(line_cert.residual, res.residual),
        provenance=line_cert.provenance
        + [f"{'+'.join(rest)}: gram completion at degree {res.degree}, "
           f"aligned at {len(prescribed)} attachment point(s)"],
    )
