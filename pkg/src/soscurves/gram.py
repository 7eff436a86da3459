"""Numeric Gram-matrix certification for targets on compact-type components.

A sum of squares with summand vectors stacked over per-component monomial
bases is exactly a psd Gram matrix G subject to affine constraints:
coefficient matching on each diagonal block, kernel conditions
G (e_i(P) - e_j(P)) = 0 making every summand agree at shared points, and
optional value conditions e(P)^T G e(P) = c tying attachment values to a
part of the curve certified elsewhere.  The solver is Dykstra's alternating
projection between the psd cone (via a self-contained cyclic Jacobi
eigensolver) and the affine subspace (least squares, factorized once);
extraction rationalizes the eigenvector summands and re-verifies exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .components import CircleChart, PolyChart
from .curve import CurveAnalysis
from .numbers import rational_square_list
from .points import AlgebraicPoint, RationalPoint
from .ringfn import (
    CircleFn,
    LineFn,
    RingFn,
    restrict_to_chart,
    value_at_point,
    values_agree_at_algebraic,
)
from .unipoly import UniPoly


class NoConvergence(RuntimeError):
    """Alternating projections stalled; carries the residual trajectory tail.

    Both terminal residuals are recomputed from the last iterate pair:
    psd_residual is the most negative eigenvalue (in magnitude) of the
    affine-feasible matrix, affine_residual the worst constraint violation
    of the psd-feasible one.  A stall with a psd_residual plateau bounded
    away from zero is evidence (not proof) that the problem is infeasible.
    """

    def __init__(
        self,
        iterations: int,
        tail: tuple[float, ...],
        psd_residual: float = float("nan"),
        affine_residual: float = float("nan"),
    ):
        self.iterations = iterations
        self.residual_tail = tail
        self.psd_residual = psd_residual
        self.affine_residual = affine_residual
        best = min(tail) if tail else float("nan")
        super().__init__(
            f"no convergence after {iterations} iterations; "
            f"best recent residual {best:.3g}, "
            f"terminal psd violation {psd_residual:.3g}"
        )


@dataclass(frozen=True)
class GramBlock:
    component: str
    kind: str  # "line" or "circle"
    offset: int
    basis: tuple[RingFn, ...]

    @property
    def size(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class PrescribedValue:
    """Attachment data: the summand value vector a target must reproduce."""

    point_id: str
    component: str
    point: RationalPoint
    vector: tuple[Fraction, ...]

    @property
    def norm_sq(self) -> Fraction:
        return sum((c * c for c in self.vector), Fraction(0))


@dataclass(frozen=True)
class KernelPoint:
    point_id: str
    components: tuple[str, ...]
    point: RationalPoint | AlgebraicPoint | None
    approx: tuple[float, float] | None = None


ExactRow = tuple[dict[tuple[int, int], Fraction], Fraction]


@dataclass
class GramProblem:
    blocks: list[GramBlock]
    matrices: np.ndarray  # (k, n, n) stacked symmetric constraint matrices
    rhs: np.ndarray  # (k,)
    tags: list[str]
    degree: int
    targets: dict[str, RingFn]
    charts: dict[str, object]
    kernel_points: list[KernelPoint] = field(default_factory=list)
    values: list[PrescribedValue] = field(default_factory=list)
    # rational coefficient rows over the upper triangle, None where only
    # float data exists (attachments at algebraic points)
    exact_rows: list[ExactRow | None] = field(default_factory=list)
    _snap_cache: "_ExactAffineSnap | None | bool" = field(
        default=False, repr=False, compare=False
    )

    @property
    def dim(self) -> int:
        return self.blocks[-1].offset + self.blocks[-1].size if self.blocks else 0

    def block(self, component: str) -> GramBlock:
        return next(b for b in self.blocks if b.component == component)

    def exact_snap(self) -> "_ExactAffineSnap | None":
        if self._snap_cache is False:
            rows = [r for r in self.exact_rows if r is not None]
            self._snap_cache = _ExactAffineSnap(self.dim, rows) if rows else None
        return self._snap_cache


@dataclass
class GramSolution:
    problem: GramProblem
    matrix: np.ndarray
    iterations: int
    residual: float
    trajectory: tuple[float, ...]
    affine_residual: float = 0.0
    psd_residual: float = 0.0
    extraction: "Extraction | None" = None


def jacobi_eigh(
    S: np.ndarray, max_sweeps: int = 30, tol: float = 1e-14
) -> tuple[np.ndarray, np.ndarray]:
    """Eigen decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (w, V) with S = V diag(w) V^T up to the sweep tolerance.
    """
    n = S.shape[0]
    a = np.array(S, dtype=float)
    v = np.eye(n)
    if n <= 1:
        return np.diag(a).copy(), v
    scale = max(1.0, float(np.max(np.abs(np.diag(a)))))
    for _ in range(max_sweeps):
        off = np.max(np.abs(a - np.diag(np.diag(a)))) if n > 1 else 0.0
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= tol * scale:
                    continue
                beta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(beta) if beta != 0 else 1.0
                t = t / (abs(beta) + np.sqrt(beta * beta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q
    return np.diag(a).copy(), v


def project_psd(S: np.ndarray) -> np.ndarray:
    w, v = jacobi_eigh(S)
    w = np.maximum(w, 0.0)
    out = (v * w) @ v.T
    return (out + out.T) / 2.0


class _WarmPsdProjector:
    """Psd projection that diagonalizes in the previous call's eigenbasis.

    Successive Dykstra iterates barely move, so after the change of basis
    the matrix is nearly diagonal and a sweep or two of Jacobi suffices.
    The basis is rebuilt from scratch periodically to stop orthogonality
    drift from accumulating.
    """

    def __init__(self, n: int, rebuild_every: int = 500):
        self.basis = np.eye(n)
        self.rebuild_every = rebuild_every
        self.calls = 0

    def __call__(self, S: np.ndarray) -> np.ndarray:
        self.calls += 1
        if self.calls % self.rebuild_every == 0:
            self.basis = np.eye(S.shape[0])
        rotated = self.basis.T @ S @ self.basis
        w, q = jacobi_eigh(rotated, max_sweeps=30, tol=1e-14)
        v = self.basis @ q
        self.basis = v
        w = np.maximum(w, 0.0)
        out = (v * w) @ v.T
        return (out + out.T) / 2.0


def _line_basis(degree: int) -> tuple[LineFn, ...]:
    return tuple(LineFn(UniPoly([Fraction(0)] * k + [Fraction(1)])) for k in range(degree + 1))


def _circle_basis(degree: int, q: UniPoly) -> tuple[CircleFn, ...]:
    xs = [
        CircleFn(UniPoly([Fraction(0)] * k + [Fraction(1)]), UniPoly.zero(), q)
        for k in range(degree + 1)
    ]
    ws = [
        CircleFn(UniPoly.zero(), UniPoly([Fraction(0)] * k + [Fraction(1)]), q)
        for k in range(max(degree, 0))
    ]
    return tuple(xs + ws)


def _coeff_slots(fn: RingFn) -> dict[tuple[str, int], Fraction]:
    """Sparse {(part, power): coefficient} view of a ring function."""
    out: dict[tuple[str, int], Fraction] = {}
    if isinstance(fn, LineFn):
        if fn.order:
            raise ValueError("gram problems support polynomial line functions only")
        for m, c in enumerate(fn.num.coeffs):
            if c:
                out[("a", m)] = c
    else:
        for m, c in enumerate(fn.a.coeffs):
            if c:
                out[("a", m)] = c
        for m, c in enumerate(fn.b.coeffs):
            if c:
                out[("b", m)] = c
    return out


def _basis_values(block: GramBlock, chart, point: RationalPoint) -> list[Fraction]:
    return [value_at_point(b, chart, point) for b in block.basis]


def build_gram_problem(
    analysis: CurveAnalysis,
    targets,
    subset: list[str] | tuple[str, ...],
    degree: int,
    values: list[PrescribedValue] | tuple[PrescribedValue, ...] = (),
) -> GramProblem:
    """Set up the constrained Gram problem for the subset of components.

    `targets` is either a plane polynomial (restricted per component here) or
    a ready-made mapping component id -> restriction.  `degree` bounds the
    basis: powers 1..t^d on lines, 1..x^d plus w, xw, ..., x^(d-1) w on
    circle-form conics.
    """
    subset = tuple(subset)
    blocks: list[GramBlock] = []
    charts: dict[str, object] = {}
    target_map: dict[str, RingFn] = {}
    offset = 0
    for cid in subset:
        comp = analysis.components[int(cid[1:]) - 1]
        chart = comp.chart
        charts[cid] = chart
        if isinstance(targets, dict):
            target_map[cid] = targets[cid]
        else:
            target_map[cid] = restrict_to_chart(targets, chart)
        if isinstance(chart, PolyChart):
            # squares of polynomials cannot cancel leading terms, so a line
            # summand has degree exactly half the target degree; powers above
            # that bound never occur in an exact representation and would
            # only loosen the numeric relaxation
            fn = target_map[cid]
            if isinstance(fn, LineFn) and fn.order == 0:
                rule = max(0, -(-fn.num.degree // 2))
            else:
                rule = degree
            basis: tuple[RingFn, ...] = _line_basis(min(degree, rule))
            kind = "line"
        elif isinstance(chart, CircleChart):
            basis = _circle_basis(degree, chart.q)
            kind = "circle"
        else:
            raise ValueError(f"{cid}: no gram basis for this component type")
        blocks.append(GramBlock(cid, kind, offset, basis))
        offset += len(basis)
    n = offset

    mats: list[np.ndarray] = []
    rhs: list[float] = []
    tags: list[str] = []
    exact_rows: list[ExactRow | None] = []

    for block in blocks:
        slots: dict[tuple[str, int], np.ndarray] = {}
        slots_exact: dict[tuple[str, int], dict[tuple[int, int], Fraction]] = {}
        for k in range(block.size):
            for l in range(k, block.size):
                prod = block.basis[k] * block.basis[l]
                for slot, c in _coeff_slots(prod).items():
                    mat = slots.get(slot)
                    if mat is None:
                        mat = slots[slot] = np.zeros((n, n))
                        slots_exact[slot] = {}
                    i, j = block.offset + k, block.offset + l
                    mat[i, j] += float(c)
                    if i != j:
                        mat[j, i] += float(c)
                        slots_exact[slot][(i, j)] = 2 * c
                    else:
                        slots_exact[slot][(i, j)] = c
        wanted = _coeff_slots(target_map[block.component])
        for slot in wanted:
            if slot not in slots:
                raise ValueError(
                    f"{block.component}: target degree exceeds the basis "
                    f"(missing {slot} at gram degree {degree})"
                )
        for slot, mat in sorted(slots.items()):
            beta = wanted.get(slot, Fraction(0))
            mats.append(mat)
            rhs.append(float(beta))
            tags.append(f"coeff:{block.component}:{slot[0]}^{slot[1]}")
            exact_rows.append((slots_exact[slot], beta))

    kernel_points: list[KernelPoint] = []
    index_of = {cid: int(cid[1:]) - 1 for cid in subset}
    for rec in analysis.points:
        if not rec.is_real:
            continue
        incident = [cid for cid in subset if index_of[cid] in rec.components]
        if len(incident) < 2:
            continue
        if isinstance(rec.point, RationalPoint):
            evals = {
                cid: _basis_values(next(b for b in blocks if b.component == cid),
                                   charts[cid], rec.point)
                for cid in incident
            }
            exact_pt: RationalPoint | None = rec.point
            approx = None
        else:
            xf, yf = rec.point.as_floats(60)
            evals = {}
            for cid in incident:
                block = next(b for b in blocks if b.component == cid)
                evals[cid] = _float_basis_values(block, charts[cid], xf, yf)
            exact_pt = rec.point
            approx = (xf, yf)
        kernel_points.append(KernelPoint(rec.id, tuple(incident), exact_pt, approx))
        base = incident[0]
        rational = isinstance(rec.point, RationalPoint)
        for other in incident[1:]:
            u = np.zeros(n)
            b0 = next(b for b in blocks if b.component == base)
            b1 = next(b for b in blocks if b.component == other)
            u[b0.offset : b0.offset + b0.size] = [float(v) for v in evals[base]]
            u[b1.offset : b1.offset + b1.size] = [-float(v) for v in evals[other]]
            u_exact: dict[int, Fraction] = {}
            if rational:
                for off, vals in (
                    (b0.offset, evals[base]),
                    (b1.offset, [-v for v in evals[other]]),
                ):
                    for s, val in enumerate(vals):
                        if val:
                            u_exact[off + s] = val
            for r in range(n):
                mat = np.zeros((n, n))
                mat[r, :] += u / 2.0
                mat[:, r] += u / 2.0
                mats.append(mat)
                rhs.append(0.0)
                tags.append(f"kernel:{rec.id}:{base}~{other}:{r}")
                if rational:
                    row = {
                        (min(r, s), max(r, s)): c for s, c in u_exact.items()
                    }
                    exact_rows.append((row, Fraction(0)))
                else:
                    exact_rows.append(None)

    values = list(values)
    evecs: list[np.ndarray] = []
    evecs_exact: list[dict[int, Fraction]] = []
    for pv in values:
        block = next(b for b in blocks if b.component == pv.component)
        vals = _basis_values(block, charts[pv.component], pv.point)
        e = np.zeros(n)
        e[block.offset : block.offset + block.size] = [float(v) for v in vals]
        evecs.append(e)
        evecs_exact.append(
            {block.offset + s: v for s, v in enumerate(vals) if v}
        )
    zero_ids = {i for i, pv in enumerate(values) if not any(pv.vector)}
    for i in sorted(zero_ids):
        # a zero prescription means every summand vanishes at the point,
        # which for a psd matrix is the linear condition G e(P) = 0; the
        # quadratic form alone would leave the kernel membership implicit
        # and exact factorization could not recover it from rounded data
        pv = values[i]
        e = evecs[i]
        for r in range(n):
            mat = np.zeros((n, n))
            mat[r, :] += e / 2.0
            mat[:, r] += e / 2.0
            mats.append(mat)
            rhs.append(0.0)
            tags.append(f"value-kernel:{pv.point_id}:{r}")
            row = {(min(r, s), max(r, s)): c for s, c in evecs_exact[i].items()}
            exact_rows.append((row, Fraction(0)))
    for i, pv in enumerate(values):
        for j in range(i, len(values)):
            if i in zero_ids or j in zero_ids:
                continue
            other = values[j]
            inner = sum(
                (a * b for a, b in zip(pv.vector, other.vector)), Fraction(0)
            )
            mat = np.outer(evecs[i], evecs[j])
            mat = (mat + mat.T) / 2.0
            mats.append(mat)
            rhs.append(float(inner))
            label = "value" if i == j else "cross-value"
            tags.append(f"{label}:{pv.point_id}" + ("" if i == j else f"~{other.point_id}"))
            row: dict[tuple[int, int], Fraction] = {}
            for a, ca in evecs_exact[i].items():
                for b, cb in evecs_exact[j].items():
                    key = (min(a, b), max(a, b))
                    row[key] = row.get(key, Fraction(0)) + ca * cb
            exact_rows.append((row, inner))

    return GramProblem(
        blocks=blocks,
        matrices=np.array(mats) if mats else np.zeros((0, n, n)),
        rhs=np.array(rhs),
        tags=tags,
        degree=degree,
        targets=target_map,
        charts=charts,
        kernel_points=kernel_points,
        values=values,
        exact_rows=exact_rows,
    )


def _float_basis_values(block: GramBlock, chart, xf: float, yf: float) -> list[float]:
    out = []
    for b in block.basis:
        if isinstance(b, LineFn):
            raise ValueError("line components need rational attachment points")
        wf = yf + float(chart.s1) * xf + float(chart.s0)
        out.append(b.a.eval_float(xf) + b.b.eval_float(xf) * wf)
    return out


def _affine_projector(problem: GramProblem):
    n = problem.dim
    k = problem.matrices.shape[0]
    if k == 0:
        return lambda x: x, lambda x: 0.0
    m = problem.matrices.reshape(k, n * n)
    gram = m @ m.T
    pinv = np.linalg.pinv(gram, rcond=1e-12)
    lift = m.T @ pinv
    rhs = problem.rhs
    scale = max(1.0, float(np.max(np.abs(rhs))))

    def project(x: np.ndarray) -> np.ndarray:
        vec = x.reshape(n * n)
        corr = lift @ (m @ vec - rhs)
        out = (vec - corr).reshape(n, n)
        return (out + out.T) / 2.0

    def residual(x: np.ndarray) -> float:
        return float(np.max(np.abs(m @ x.reshape(n * n) - rhs))) / scale

    return project, residual


def alternating_projections(
    problem: GramProblem,
    tol: float = 1e-9,
    max_iter: int = 20000,
    seed: int = 0,
    initial: np.ndarray | None = None,
    extract_every: int | None = None,
    rationalize: bool = True,
) -> GramSolution:
    """Projection splitting between the psd cone and the affine constraint set.

    The iteration is Douglas-Rachford (averaged alternating reflections),
    which keeps its speed when every solution sits on the cone boundary, as
    happens whenever an attachment value pins part of the kernel.  The run is
    deterministic for a given seed and raises NoConvergence with the tail of
    the residual trajectory when it stalls.  With `extract_every` the solver
    periodically attempts an exact extraction from the current psd iterate
    and returns early when rounding already hits a true certificate; that is
    a common exit, since targets built from rational data have Gram matrices
    with small denominators long before tight convergence.
    """
    n = problem.dim
    project_affine, affine_residual = _affine_projector(problem)

    def psd_violation(x: np.ndarray) -> float:
        w, _ = jacobi_eigh(x)
        return max(0.0, -float(np.min(w))) if w.size else 0.0

    def psd_residual(x: np.ndarray) -> float:
        w, _ = jacobi_eigh(x)
        scale = max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
        return max(0.0, -float(np.min(w))) / scale if w.size else 0.0

    if initial is not None:
        z = (np.array(initial, dtype=float) + np.array(initial, dtype=float).T) / 2.0
        if affine_residual(z) <= tol and psd_residual(z) <= tol:
            return GramSolution(
                problem,
                z,
                0,
                max(affine_residual(z), psd_residual(z)),
                (),
                affine_residual=affine_residual(z),
                psd_residual=psd_violation(z),
            )
    else:
        rng = np.random.default_rng(seed)
        z = rng.standard_normal((n, n)) * 0.1
        z = (z + z.T) / 2.0 + np.eye(n)

    def stalled(it: int, y: np.ndarray, tail: list[float]) -> NoConvergence:
        # recompute both terminal residuals from the final iterate pair
        # rather than reporting loop-internal estimates
        return NoConvergence(
            it,
            tuple(tail),
            psd_residual=psd_violation(project_affine(y)),
            affine_residual=affine_residual(y),
        )

    project_cone = _WarmPsdProjector(n)
    trajectory: list[float] = []
    y = None
    for it in range(1, max_iter + 1):
        y = project_cone(z)
        x = project_affine(2.0 * y - z)
        z = z + x - y
        gap = float(np.linalg.norm(x - y)) / (1.0 + float(np.linalg.norm(y)))
        res = max(gap, affine_residual(y))
        trajectory.append(res)
        if res <= tol:
            return GramSolution(
                problem,
                y,
                it,
                res,
                tuple(trajectory[-10:]),
                affine_residual=affine_residual(y),
                psd_residual=psd_violation(y),
            )
        if extract_every and it % extract_every == 0:
            ext = _extract(problem, y, rationalize, ladder=_PROBE_LADDER)
            if ext.exact:
                return GramSolution(
                    problem,
                    y,
                    it,
                    res,
                    tuple(trajectory[-10:]),
                    affine_residual=affine_residual(y),
                    psd_residual=psd_violation(y),
                    extraction=ext,
                )
        # patience rule: infeasible problems level off at a positive gap,
        # slow feasible ones keep shaving the residual
        if it >= 500 and it % 100 == 0 and res > 1000 * tol:
            if res >= 0.98 * trajectory[-401]:
                raise stalled(it, y, trajectory[-10:])
    if y is None:
        y = project_cone(z)
    raise stalled(max_iter, y, trajectory[-10:])


_ROUND_LADDER = (1, 2, 4, 8, 16, 64, 1024, 10**6, 10**9)
_PROBE_LADDER = (1, 2, 4, 8, 16, 64, 1024)


class _ExactAffineSnap:
    """Exact projection onto the rational affine constraint slice.

    Rounding a near-solution entrywise almost never lands on the slice when
    it is positive-dimensional but tilted; projecting the rounded matrix
    back in exact arithmetic does.  Inner products use the symmetric-matrix
    metric (off-diagonal entries weigh twice), the normal matrix is LU
    factored once, and each snap is two substitutions.
    """

    def __init__(self, dim: int, rows: list[ExactRow]):
        self.dim = dim
        self.rows = rows
        k = len(rows)
        normal = [[Fraction(0)] * k for _ in range(k)]
        for a in range(k):
            ra = rows[a][0]
            for b in range(a, k):
                rb = rows[b][0]
                small, large = (ra, rb) if len(ra) <= len(rb) else (rb, ra)
                acc = Fraction(0)
                for key, c in small.items():
                    d = large.get(key)
                    if d is not None:
                        w = 2 if key[0] != key[1] else 1
                        acc += c * d / w
                normal[a][b] = acc
                normal[b][a] = acc
        # in-place LU with first-nonzero pivoting; exact arithmetic needs no
        # stability pivot, and first-nonzero keeps runs deterministic
        self.perm: list[int] = list(range(k))
        self.pivot_cols: list[tuple[int, int]] = []  # (elimination step, column)
        m = normal
        row_of = self.perm
        step = 0
        for col in range(k):
            pr = None
            for r in range(step, k):
                if m[row_of[r]][col]:
                    pr = r
                    break
            if pr is None:
                continue
            row_of[step], row_of[pr] = row_of[pr], row_of[step]
            prow = m[row_of[step]]
            inv = 1 / prow[col]
            for r in range(step + 1, k):
                cur = m[row_of[r]]
                factor = cur[col] * inv
                if factor:
                    cur[col] = factor  # store the multiplier in place
                    for c in range(col + 1, k):
                        if prow[c]:
                            cur[c] -= factor * prow[c]
            self.pivot_cols.append((step, col))
            step += 1
        self.lu = m
        self.rank = step

    def _solve_normal(self, v: list[Fraction]) -> list[Fraction] | None:
        k = len(self.rows)
        y = [v[i] for i in self.perm]
        for step, col in self.pivot_cols:
            pivot_y = y[step]
            if not pivot_y:
                continue
            for r in range(step + 1, k):
                factor = self.lu[self.perm[r]][col]
                if factor:
                    y[r] -= factor * pivot_y
        for r in range(self.rank, k):
            if y[r]:
                return None  # inconsistent with the dependent rows
        lam = [Fraction(0)] * k
        for idx in range(self.rank - 1, -1, -1):
            step, col = self.pivot_cols[idx]
            acc = y[step]
            row = self.lu[self.perm[step]]
            for later in range(idx + 1, self.rank):
                _, col2 = self.pivot_cols[later]
                if row[col2]:
                    acc -= row[col2] * lam[col2]
            lam[col] = acc / row[col]
        return lam

    def snap(self, ghat: list[list[Fraction]]) -> list[list[Fraction]] | None:
        """Nearest matrix to ghat satisfying every exact row; None only when
        the correction system is inconsistent, which rounding noise cannot
        cause (the rows come from a feasible problem)."""
        v = []
        for row, beta in self.rows:
            acc = beta
            for (i, j), c in row.items():
                acc -= c * ghat[i][j]
            v.append(acc)
        lam = self._solve_normal(v)
        if lam is None:
            return None
        out = [r[:] for r in ghat]
        for l, (row, _) in zip(lam, self.rows):
            if not l:
                continue
            for (i, j), c in row.items():
                w = 2 if i != j else 1
                out[i][j] += l * c / w
                if i != j:
                    out[j][i] = out[i][j]
        for row, beta in self.rows:
            acc = Fraction(0)
            for (i, j), c in row.items():
                acc += c * out[i][j]
            if acc != beta:
                return None
        return out


@dataclass
class Extraction:
    summands: list[dict[str, RingFn]]
    exact: bool
    residual: float
    note: str = ""


def extract_summands(sol: GramSolution, rationalize: bool = True) -> Extraction:
    if sol.extraction is not None:
        return sol.extraction
    return _extract(sol.problem, sol.matrix, rationalize)


def _extract(
    problem: GramProblem,
    matrix: np.ndarray,
    rationalize: bool = True,
    ladder: tuple[int, ...] = _ROUND_LADDER,
) -> Extraction:
    """Summand functions from the Gram matrix.

    The exact route rounds the matrix entries to small rationals, factors
    the result as L D L^T over the rationals, and turns each positive pivot
    into a square list, so irrational eigen directions are never an
    obstruction; the result is promoted to exact only after re-verification
    against the stored targets, kernel points and value data.  Failing that,
    the eigenvector summands are returned with a coefficient residual.
    """
    n = problem.dim

    if rationalize:
        snap = problem.exact_snap()
        for denom in ladder:
            g = [
                [Fraction(float(matrix[i, j])).limit_denominator(denom) for j in range(n)]
                for i in range(n)
            ]
            for i in range(n):
                for j in range(i + 1, n):
                    g[j][i] = g[i][j]
            candidates = [g]
            if snap is not None:
                snapped = snap.snap(g)
                if snapped is not None:
                    candidates.insert(0, snapped)
            for cand in candidates:
                found = _promote(problem, cand)
                if found is not None:
                    return Extraction(found, True, 0.0, f"rationalized at {denom}")

    w, v = jacobi_eigh(matrix)
    order = np.argsort(w)[::-1]
    cutoff = max(1.0, float(np.max(np.abs(w)))) * 1e-10 if w.size else 0.0
    vectors = [np.sqrt(max(w[i], 0.0)) * v[:, i] for i in order if w[i] > cutoff]
    float_vectors = [[Fraction(float(c)) for c in vec] for vec in vectors]
    summands = _vectors_to_summands(problem, float_vectors)
    residual = _float_residual(problem, summands)
    return Extraction(summands, False, residual, "rationalization failed")


def _promote(
    problem: GramProblem, g: list[list[Fraction]]
) -> list[dict[str, RingFn]] | None:
    """Exact summands from a rational Gram candidate, or None.

    Verifies in weighted form before splitting pivots into square lists:
    the split can be expensive, and a bad candidate would send huge
    integers into the four-square search.
    """
    pivots = _rational_ldl(g)
    if pivots is None:
        return None
    weighted = [(d, _vectors_to_summands(problem, [col])[0]) for d, col in pivots]
    if not _weighted_exact_check(problem, weighted):
        return None
    exact_vectors: list[list[Fraction]] = []
    for d, col in pivots:
        for r in rational_square_list(d):
            if r:
                exact_vectors.append([r * c for c in col])
    return _vectors_to_summands(problem, exact_vectors)


def _rational_ldl(g: list[list[Fraction]]) -> list[tuple[Fraction, list[Fraction]]] | None:
    """Pivoted L D L^T factorization of a symmetric rational matrix.

    Returns (pivot, column) pairs with the matrix equal to the sum of
    pivot * column * column^T, or None if the matrix is not psd over the
    rationals (negative pivot, or a zero diagonal with a nonzero row).
    """
    n = len(g)
    m = [row[:] for row in g]
    active = list(range(n))
    out: list[tuple[Fraction, list[Fraction]]] = []
    while active:
        p = max(active, key=lambda i: m[i][i])
        d = m[p][p]
        if d < 0:
            return None
        if d == 0:
            if any(m[i][j] for i in active for j in active):
                return None
            break
        col = [Fraction(0)] * n
        for i in active:
            col[i] = m[i][p] / d
        for i in active:
            for j in active:
                m[i][j] -= d * col[i] * col[j]
        active.remove(p)
        out.append((d, col))
    return out


def _vectors_to_summands(
    problem: GramProblem, vectors: list[list[Fraction]]
) -> list[dict[str, RingFn]]:
    out = []
    for vec in vectors:
        entry: dict[str, RingFn] = {}
        for block in problem.blocks:
            coords = vec[block.offset : block.offset + block.size]
            if block.kind == "line":
                f: RingFn = LineFn.zero()
            else:
                f = CircleFn.zero(block.basis[0].q)
            for c, b in zip(coords, block.basis):
                if c:
                    f = f + b.scale(c)
            entry[block.component] = f
        out.append(entry)
    return out


def _weighted_exact_check(
    problem: GramProblem, weighted: list[tuple[Fraction, dict[str, RingFn]]]
) -> bool:
    """Exactness of sum(d_i * f_i^2) against targets, kernel and value data.

    Positive weights let the check run before pivots are expanded into
    square lists; agreement conditions quantify over summands, so they hold
    for the weighted family iff they hold after expansion.
    """
    for block in problem.blocks:
        cid = block.component
        target = problem.targets[cid]
        total = None
        for d, fns in weighted:
            term = (fns[cid] * fns[cid]).scale(d)
            total = term if total is None else total + term
        if total is None:
            if not target.is_zero:
                return False
        elif total != target:
            return False
    for kp in problem.kernel_points:
        if isinstance(kp.point, RationalPoint):
            for d, fns in weighted:
                if not d:
                    continue
                vals = {
                    value_at_point(fns[cid], problem.charts[cid], kp.point)
                    for cid in kp.components
                }
                if len(vals) != 1:
                    return False
        elif kp.point is not None:
            base = kp.components[0]
            for d, fns in weighted:
                if not d:
                    continue
                for other in kp.components[1:]:
                    if not values_agree_at_algebraic(
                        fns[base],
                        problem.charts[base],
                        fns[other],
                        problem.charts[other],
                        kp.point,
                    ):
                        return False
    value_vecs = {}
    for pv in problem.values:
        value_vecs[pv.point_id] = [
            value_at_point(fns[pv.component], problem.charts[pv.component], pv.point)
            for _, fns in weighted
        ]
    for i, pv in enumerate(problem.values):
        for j in range(i, len(problem.values)):
            other = problem.values[j]
            total = Fraction(0)
            for (d, _), va, vb in zip(
                weighted, value_vecs[pv.point_id], value_vecs[other.point_id]
            ):
                total += d * va * vb
            goal = sum(
                (a * b for a, b in zip(pv.vector, other.vector)), Fraction(0)
            )
            if total != goal:
                return False
    return True


def _float_residual(problem: GramProblem, summands: list[dict[str, RingFn]]) -> float:
    worst = 0.0
    for block in problem.blocks:
        cid = block.component
        target = problem.targets[cid]
        if not summands:
            gap_slots = _coeff_slots(target)
            worst = max(
                [worst] + [abs(float(c)) for c in gap_slots.values()], default=worst
            )
            continue
        total = summands[0][cid].scale(0)
        for s in summands:
            total = total + s[cid] * s[cid]
        gap = total - target
        for c in _coeff_slots(gap).values():
            worst = max(worst, abs(float(c)))
    return worst
