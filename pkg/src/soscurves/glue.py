"""Assembling sums of squares across components glued at single points.

Component-wise decompositions give summand vectors whose values at a shared
point generally disagree; since both value vectors have the same Euclidean
norm (the value of the target there), a single Householder reflection turns
one into the other exactly.  Processing the components of a forest in
attachment order therefore stitches all the local decompositions into one
certificate over the whole curve.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bipoly import BiPoly
from .components import PolyChart, PuncturedChart
from .configuration import (
    AttachmentOrder,
    Cycle,
    attachment_order,
    induced_subconfiguration,
)
from .curve import CurveAnalysis, to_configuration
from .decide import PreconditionViolated, decide_unbounded_case
from .points import RationalPoint
from .ringfn import (
    ChartlessComponent,
    IrrationalAttachment,
    LineFn,
    RingFn,
    param_of_point,
    restrict_to_chart,
)
from .squares import NotPsd, line_fn_sos
from .tribool import TriBool


class ValueMismatch(ArithmeticError):
    """Summand value vectors at a shared point have different norms."""


class NotPsdOnComponent(ValueError):
    """The target is negative somewhere on a component; exact witness inside."""

    def __init__(self, component: str, point: Fraction, value: Fraction):
        self.component = component
        self.point = point
        self.value = value
        super().__init__(
            f"target is negative on {component}: value {value} at parameter {point}"
        )


@dataclass
class SosCertificate:
    """A sum-of-squares certificate as per-component summand vectors.

    summands[j] maps component id -> the j-th summand's restriction there;
    every summand covers every component (zero entries included), so each
    one is a genuine function on the glued curve.
    """

    summands: list[dict[str, RingFn]]
    exact: bool = True
    residual: float = 0.0
    provenance: list[str] = field(default_factory=list)

    @property
    def component_ids(self) -> tuple[str, ...]:
        if not self.summands:
            return ()
        return tuple(sorted(self.summands[0], key=lambda cid: int(cid[1:])))


Matrix = tuple[tuple[Fraction, ...], ...]


def _identity(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(1) if i == k else Fraction(0) for k in range(n))
        for i in range(n)
    )


def _householder(v: list[Fraction], w: list[Fraction]) -> Matrix:
    """The reflection sending v to w; requires equal norms."""
    if v == w:
        return _identity(len(v))
    u = [a - b for a, b in zip(v, w)]
    den = sum(x * x for x in u)
    return tuple(
        tuple(
            (Fraction(1) if j == k else Fraction(0)) - 2 * u[j] * u[k] / den
            for k in range(len(v))
        )
        for j in range(len(v))
    )


def _pad(fs: list[LineFn], n: int) -> list[LineFn]:
    return list(fs) + [LineFn.zero()] * (n - len(fs))


def householder_glue(
    fs: list[LineFn],
    gs: list[LineFn],
    p1: Fraction,
    p2: Fraction,
    strict: bool = True,
) -> tuple[list[LineFn], list[LineFn], Matrix]:
    """Rotate the first summand list so its values at the shared point match
    the second list's values.

    The point enters through its parameter on each side (p1 on the first
    component, p2 on the second).  Lists are zero-padded to a common length;
    the returned matrix B satisfies B^T B = I exactly.
    """
    n = max(len(fs), len(gs))
    fs, gs = _pad(fs, n), _pad(gs, n)
    v = [f(p1) for f in fs]
    w = [g(p2) for g in gs]
    if strict and sum(a * a for a in v) != sum(b * b for b in w):
        raise ValueMismatch(
            "value vectors at the shared point have different square sums"
        )
    b = _householder(v, w)
    rotated = [_combine(b[j], fs) for j in range(n)]
    return rotated, gs, b


def _combine(row: tuple[Fraction, ...], fs: list[LineFn]) -> LineFn:
    out = LineFn.zero()
    for c, f in zip(row, fs):
        if c and not f.is_zero:
            out = out + f.scale(c)
    return out


def forest_assemble(
    analysis: CurveAnalysis,
    F: BiPoly,
    order: AttachmentOrder | None = None,
    mode: str = "exact",
    tol: float = 1e-9,
    subset: tuple[str, ...] | None = None,
) -> SosCertificate:
    """Certify F on a curve whose components are all open pieces of a line.

    Components are processed in attachment order; each one contributes the
    two-square decomposition of the restriction, reflected into agreement
    with the already-built part at the single shared point.  With `subset`
    the assembly runs on the induced sub-curve, which must satisfy the
    unbounded-case conditions on its own.
    """
    config = to_configuration(analysis)
    if subset is not None:
        config = induced_subconfiguration(config, subset)
    verdict = decide_unbounded_case(config)
    if verdict.answer is not TriBool.YES:
        raise PreconditionViolated(
            f"decision engine answers {verdict.answer.value} "
            f"(failed: {', '.join(verdict.failed_conditions) or 'none'})"
        )
    if order is None:
        order = attachment_order(config, config.component_ids())
        if isinstance(order, Cycle):
            raise PreconditionViolated(f"incidence graph has a cycle: {order}")

    funcs: dict[str, list[LineFn]] = {}
    indexes: dict[str, int] = {}
    provenance: list[str] = []
    exact = True
    residual = 0.0

    for cid in order.order:
        ci = int(cid[1:]) - 1
        comp = analysis.components[ci]
        if not isinstance(comp.chart, (PolyChart, PuncturedChart)):
            raise ChartlessComponent(f"{cid} has no line-type parametrization")
        fn = restrict_to_chart(F, comp.chart)
        try:
            dec = line_fn_sos(fn, mode, tol)
        except NotPsd as bad:
            raise NotPsdOnComponent(cid, bad.point, bad.value) from bad
        parts = list(dec.parts)
        exact = exact and dec.exact
        residual = max(residual, dec.residual)

        shared = [
            rec
            for rec in analysis.points
            if rec.is_real
            and ci in rec.components
            and any(j in rec.components for j in indexes.values())
        ]
        if not funcs:
            funcs[cid] = parts
            provenance.append(f"{cid}: {len(parts)} squares from the restriction")
        elif not shared:
            n_old = len(next(iter(funcs.values())))
            for other in funcs:
                funcs[other] = funcs[other] + [LineFn.zero()] * len(parts)
            funcs[cid] = [LineFn.zero()] * n_old + parts
            provenance.append(f"{cid}: disjoint block of {len(parts)} squares")
        elif len(shared) == 1:
            rec = shared[0]
            if not isinstance(rec.point, RationalPoint):
                raise IrrationalAttachment(
                    f"attachment point {rec.id} has irrational coordinates"
                )
            donor = next(
                d for d, j in indexes.items() if j in rec.components
            )
            p_old = param_of_point(analysis.components[indexes[donor]].chart, rec.point)
            p_new = param_of_point(comp.chart, rec.point)
            old = funcs[donor]
            n = max(len(old), len(parts))
            v = [f(p_old) for f in _pad(old, n)]
            w = [g(p_new) for g in _pad(parts, n)]
            if exact and sum(a * a for a in v) != sum(b * b for b in w):
                raise ValueMismatch(
                    f"square sums disagree at {rec.id}; the target does not "
                    "restrict consistently"
                )
            b = _householder(v, w)
            for other in funcs:
                padded = _pad(funcs[other], n)
                funcs[other] = [_combine(b[j], padded) for j in range(n)]
            funcs[cid] = _pad(parts, n)
            provenance.append(
                f"{cid}: {len(parts)} squares, reflected into agreement at {rec.id}"
            )
        else:
            raise AssertionError(
                f"{cid} meets the assembled part at {len(shared)} points; "
                "the attachment order should prevent this"
            )
        indexes[cid] = ci

    count = len(next(iter(funcs.values()))) if funcs else 0
    summands = [{cid: funcs[cid][j] for cid in funcs} for j in range(count)]
    return SosCertificate(
        summands=summands, exact=exact, residual=residual, provenance=provenance
    )
