"""Eigenvalue curves along one-parameter families of problems.

``trace`` samples the spectrum on a grid, locates the parameters where the
eigenvalue count drops (candidate singular parameters), and returns the
per-index curves; within any interval of constant count the sorted-order
indexing is continuous, so curves are meaningful there.  ``classify_jump``
decides, for each side of a singular parameter and each index, whether the
branch diverges (with sign) or converges to an eigenvalue of the limit
problem (with an integer index shift), and checks the bookkeeping: the
branches diverging to -infinity occupy the bottom indices, those to
+infinity the top ones, and every surviving branch shifts down by the
number lost below it.  ``check_monotonicity`` verifies the directional
monotonicity of the curves along single-coordinate sweeps, and
``verify_asymptotic_theorem`` runs named crossing fixtures against their
expected divergence/shift patterns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .charts import chart_matrix, coupled_matrix, separated_matrix
from .discontinuity import _chart_tests
from .errors import (
    DegreeMismatch,
    FamilyNotAxisAligned,
    OutOfRange,
    PatternMismatch,
    UnresolvableFamily,
    ValidationError,
)
from .model import BoundaryCondition, Equation, Problem, validate_bc, validate_equation
from .spectra import Spectrum, char_poly, eigenvalues, rank_r, _aberth_roots
from .tolerances import TOL

_EPS = float(np.finfo(float).eps)


@dataclass
class Family:
    """A one-parameter family nu -> Problem over a real interval.

    ``axis`` identifies single-coordinate sweeps (e.g. ``("q", 2)``,
    ``("alpha",)``, ``("chart", "O14", 0)``); it drives the monotonicity
    rules.  Open interval ends are excluded from grids.  ``flagged``
    lists finitely many parameters where the resolver is allowed to fail.
    """

    kind: str
    domain: tuple
    resolve_fn: Callable
    right_open: bool = False
    left_open: bool = False
    axis: tuple | None = None
    label: str = ""
    flagged: tuple = ()

    def resolve(self, nu: float) -> Problem:
        try:
            return self.resolve_fn(float(nu))
        except ValidationError as exc:
            raise UnresolvableFamily(float(nu), str(exc)) from exc

    @property
    def span(self) -> float:
        return self.domain[1] - self.domain[0]


def constant_family(problem: Problem, domain=(0.0, 1.0)) -> Family:
    return Family("constant", tuple(domain), lambda nu: problem, label="constant")


def equation_affine_family(eq_from: Equation, eq_to: Equation, bc: BoundaryCondition) -> Family:
    """Straight line between two equations in the (1/f, q, w) coordinates,
    boundary condition fixed; parameter runs over [0, 1]."""
    inv_a, inv_b = np.array(eq_from.inv_f), np.array(eq_to.inv_f)
    q_a, q_b = np.array(eq_from.q), np.array(eq_to.q)
    w_a, w_b = np.array(eq_from.w), np.array(eq_to.w)

    def resolve(t):
        inv = (1.0 - t) * inv_a + t * inv_b
        q = (1.0 - t) * q_a + t * q_b
        w = (1.0 - t) * w_a + t * w_b
        with np.errstate(divide="ignore"):
            f = 1.0 / inv  # validation rejects the non-finite entries
        return Problem(validate_equation(f, q, w), bc)

    return Family("equation-affine", (0.0, 1.0), resolve, label="equation-affine")


def equation_axis_family(eq: Equation, bc: BoundaryCondition, axis: tuple, lo: float, hi: float) -> Family:
    """Sweep one equation coordinate; the parameter is the coordinate value.

    ``axis`` is ``("inv_f", j)`` with 0 <= j <= N (parameter is 1/f_j),
    ``("f", j)``, ``("q", j)`` or ``("w", j)`` with 1-based lattice j.
    """
    kind, j = axis

    def resolve(nu):
        f, q, w = list(eq.f), list(eq.q), list(eq.w)
        if kind == "inv_f":
            if nu == 0.0:
                raise OutOfRange("1/f = 0 lies on the boundary of the equation space")
            f[j] = 1.0 / nu
        elif kind == "f":
            f[j] = nu
        elif kind == "q":
            q[j - 1] = nu
        elif kind == "w":
            w[j - 1] = nu
        else:
            raise KeyError(f"unknown equation axis {kind!r}")
        return Problem(validate_equation(f, q, w), bc)

    flagged = (0.0,) if kind in ("inv_f", "f") and lo < 0.0 < hi else ()
    return Family(
        "equation-affine", (float(lo), float(hi)), resolve, axis=(kind, j),
        label=f"{kind}[{j}] sweep", flagged=flagged,
    )


def chart_axis_family(eq: Equation, chart: str, base_coords, index: int, lo: float, hi: float) -> Family:
    """Sweep one chart coordinate with the equation fixed."""

    def resolve(nu):
        coords = list(base_coords)
        coords[index] = nu
        return Problem(eq, validate_bc(chart_matrix(chart, coords)))

    return Family(
        "chart-affine", (float(lo), float(hi)), resolve,
        axis=("chart", chart, index), label=f"{chart}[{index}] sweep",
    )


def chart_affine_family(eq: Equation, chart: str, coords_from, coords_to) -> Family:
    """Straight line between two coordinate vectors of one chart."""
    a = np.asarray(coords_from, dtype=float)
    b = np.asarray(coords_to, dtype=float)

    def resolve(t):
        return Problem(eq, validate_bc(chart_matrix(chart, (1.0 - t) * a + t * b)))

    moving = np.nonzero(a != b)[0]
    axis = ("chart", chart, int(moving[0])) if len(moving) == 1 else None
    return Family("chart-affine", (0.0, 1.0), resolve, axis=axis, label=f"{chart} line")


def separated_angle_family(eq: Equation, axis: str, fixed: float, lo: float, hi: float) -> Family:
    """Sweep alpha (fixed beta) or beta (fixed alpha) of the separated
    canonical form."""
    if axis == "alpha":
        def resolve(nu):
            return Problem(eq, separated_matrix(nu, fixed))
        dom_kwargs = dict(right_open=math.isclose(hi, math.pi))
    elif axis == "beta":
        def resolve(nu):
            return Problem(eq, separated_matrix(fixed, nu))
        dom_kwargs = dict(left_open=lo == 0.0)
    else:
        raise KeyError(f"unknown separated axis {axis!r}")
    return Family(
        "separated-angle", (float(lo), float(hi)), resolve,
        axis=(axis,), label=f"{axis} sweep", **dom_kwargs,
    )


def coupled_axis_family(eq: Equation, gamma: float, K, axis: str, lo: float, hi: float) -> Family:
    """Sweep gamma or the k11 entry (k22 compensating to keep det K = 1)."""
    k = np.asarray(K, dtype=float)

    def resolve(nu):
        if axis == "gamma":
            return Problem(eq, coupled_matrix(nu, k))
        if axis == "k11":
            knew = k.copy()
            knew[0, 0] = nu
            knew[1, 1] = (1.0 + k[0, 1] * k[1, 0]) / nu
            return Problem(eq, coupled_matrix(gamma, knew))
        raise KeyError(f"unknown coupled axis {axis!r}")

    return Family(
        "coupled-sweep", (float(lo), float(hi)), resolve,
        axis=(axis,), label=f"coupled {axis} sweep",
    )


@dataclass(frozen=True)
class SingularEvent:
    """A located candidate singular parameter."""

    nu: float
    bracket: tuple
    kind: str  # "grid", "crossing", "dip", "cone", "degenerate"
    count_at: int | None
    count_left: int | None
    count_right: int | None


@dataclass
class BranchTrace:
    family: Family
    grid: np.ndarray
    values: np.ndarray  # (k_max, n) with NaN above the local count
    counts: np.ndarray  # -1 where the spectrum could not be computed
    near_singular: np.ndarray
    events: list


def _grid_points(family: Family, n: int) -> np.ndarray:
    a, b = family.domain
    if family.left_open and family.right_open:
        return a + (b - a) * np.arange(1, n + 1) / (n + 1)
    if family.right_open:
        return a + (b - a) * np.arange(n) / n
    if family.left_open:
        return a + (b - a) * np.arange(1, n + 1) / n
    return np.linspace(a, b, n)


def _spectrum_or_none(problem: Problem) -> Spectrum | None:
    try:
        return eigenvalues(problem)
    except DegreeMismatch:
        return None


def _residual_data(family: Family, nu: float):
    """(residuals, tols, cones) per covering chart at one parameter;
    no spectrum is computed."""
    prob = family.resolve(nu)
    tests = _chart_tests(prob.bc, prob.equation.f[0])
    residuals = {c: t.residual for c, t in tests.items()}
    tols = {c: t.tol for c, t in tests.items()}
    cones = {
        c: (t.p, t.r2, t.p_tol, t.r2_tol)
        for c, t in tests.items()
        if t.p is not None
    }
    return residuals, tols, cones


def _point_data(family: Family, nu: float):
    """(spectrum-or-None, (residuals, tols), cones) at one parameter;
    (None, ({}, {}), {}) when the family is unresolvable at a flagged point."""
    try:
        residuals, tols, cones = _residual_data(family, nu)
        prob = family.resolve(nu)
    except UnresolvableFamily:
        if any(abs(nu - fl) <= 1e-9 * max(1.0, abs(nu)) for fl in family.flagged):
            return None, ({}, {}), {}
        raise
    return _spectrum_or_none(prob), (residuals, tols), cones


def _bisect_zero(fn, lo, hi, f_lo, f_hi):
    """Refine a sign change of fn to near machine width; exact zeros stop
    immediately."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = fn(mid)
        if f_mid is None:
            break
        if f_mid == 0.0:
            return mid, mid
        if (f_mid > 0) == (f_hi > 0):
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
        if hi - lo <= 4.0 * _EPS * max(1.0, abs(lo), abs(hi)):
            break
    return lo, hi


def _golden_min(fn, lo, hi):
    """Golden-section minimizer of fn on [lo, hi] down to machine width."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = fn(x1), fn(x2)
    for _ in range(200):
        if hi - lo <= 4.0 * _EPS * max(1.0, abs(lo), abs(hi)):
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = fn(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = fn(x2)
    return 0.5 * (lo + hi)


def trace(family: Family, grid_size: int) -> BranchTrace:
    """Evaluate the family on a grid and locate candidate singular
    parameters.

    Detection combines: exact count drops at grid points; sign changes of
    the signed chart residuals (transversal crossings of the discontinuity
    sets); sign changes of the cone coordinates along stretches lying
    inside a rank-one set (interior double-degeneracy points); and local
    dips of |residual| refined and then verified, which catches tangential
    touches that never change sign.  Every candidate found by refinement
    is verified against an actual count drop or near-singular flag before
    being reported.
    """
    if grid_size < 16:
        raise ValueError("grid_size must be at least 16")
    grid = _grid_points(family, grid_size)
    span = family.span
    points = [_point_data(family, nu) for nu in grid]
    counts = np.array(
        [p[0].predicted_count if p[0] is not None else -1 for p in points]
    )
    near = np.array(
        [bool(p[0].near_singular) if p[0] is not None else True for p in points]
    )

    k_max = max(int(counts.max(initial=0)), 0)
    values = np.full((k_max, grid_size), np.nan)
    for i, (spec, _, _) in enumerate(points):
        if spec is None:
            continue
        vals = spec.values()
        values[: len(vals), i] = vals

    candidates: list[SingularEvent] = []

    def neighbor_counts(i):
        left = counts[i - 1] if i > 0 else None
        right = counts[i + 1] if i + 1 < grid_size else None
        return left, right

    # count drops sitting exactly on a grid point
    for i in range(grid_size):
        if counts[i] < 0:
            lo = grid[i - 1] if i > 0 else grid[i]
            hi = grid[i + 1] if i + 1 < grid_size else grid[i]
            cl, cr = neighbor_counts(i)
            candidates.append(
                SingularEvent(float(grid[i]), (float(lo), float(hi)), "degenerate", None, cl, cr)
            )
            continue
        cl, cr = neighbor_counts(i)
        defined = [c for c in (cl, cr) if c is not None and c >= 0]
        if defined and counts[i] < max(defined):
            candidates.append(
                SingularEvent(float(grid[i]), (float(grid[i]), float(grid[i])), "grid", int(counts[i]), cl, cr)
            )

    def residual_at(chart):
        def fn(nu):
            try:
                res, _, _ = _residual_data(family, nu)
            except UnresolvableFamily:
                return None
            return res.get(chart)
        return fn

    def cone_at(chart, which):
        def fn(nu):
            try:
                _, _, cones = _residual_data(family, nu)
            except UnresolvableFamily:
                return None
            got = cones.get(chart)
            return got[which] if got is not None else None
        return fn

    def verified_event(nu, bracket, kind, count_left=None, count_right=None,
                       residual_collapsed=False):
        """Accept a refined candidate only if the problem there actually
        degenerates.  A candidate whose spectrum cannot be evaluated at all
        additionally needs its residual to have collapsed: a sign flip
        through a pole (chart boundary, or f_0 passing through infinity)
        leaves the residual huge and is discarded."""
        try:
            spec, _, _ = _point_data(family, nu)
        except UnresolvableFamily:
            return None
        i_near = int(np.argmin(np.abs(grid - nu)))
        ref = counts[i_near] if counts[i_near] >= 0 else None
        cl = count_left if count_left is not None else ref
        cr = count_right if count_right is not None else ref
        if spec is None:
            if residual_collapsed:
                return SingularEvent(nu, bracket, kind, None, cl, cr)
            return None
        if (ref is not None and spec.predicted_count < ref) or spec.near_singular:
            return SingularEvent(nu, bracket, kind, int(spec.predicted_count), cl, cr)
        return None

    charts_seen = sorted({c for _, (res, _), _ in points for c in res})
    for chart in charts_seen:
        res = np.array(
            [p[1][0].get(chart, np.nan) for p in points]
        )
        tols = np.array(
            [p[1][1].get(chart, np.nan) for p in points]
        )
        live = ~np.isnan(res)
        on_set = live & (np.abs(res) <= tols)
        # transversal crossings: a genuine sign change between two points
        # solidly off the set
        for i in range(grid_size - 1):
            if not (live[i] and live[i + 1]):
                continue
            if on_set[i] or on_set[i + 1]:
                continue
            if (res[i] > 0) != (res[i + 1] > 0):
                fn = residual_at(chart)
                lo, hi = _bisect_zero(fn, grid[i], grid[i + 1], res[i], res[i + 1])
                nu0 = float(0.5 * (lo + hi))
                r_mid = fn(nu0)
                if r_mid is not None and abs(r_mid) > min(abs(res[i]), abs(res[i + 1])):
                    continue  # the sign flipped through a pole, not a zero
                ev = verified_event(
                    nu0, (float(lo), float(hi)), "crossing",
                    int(counts[i]), int(counts[i + 1]),
                    residual_collapsed=r_mid is not None
                    and abs(r_mid) <= 1e-6 * max(abs(res[i]), abs(res[i + 1])),
                )
                if ev is not None:
                    candidates.append(ev)
        # tangential touches: refine interior dips of |residual| and verify
        for i in range(1, grid_size - 1):
            if not (live[i - 1] and live[i] and live[i + 1]):
                continue
            if on_set[i - 1] or on_set[i + 1]:
                continue
            trio = np.abs(res[i - 1 : i + 2])
            # a symmetric touch can split its dip over two equal grid
            # values; break the tie toward the left point
            if trio[1] < trio[0] and trio[1] <= trio[2]:
                fn = residual_at(chart)

                def absfn(nu, fn=fn):
                    value = fn(nu)
                    return abs(value) if value is not None else float("inf")

                nu0 = _golden_min(absfn, grid[i - 1], grid[i + 1])
                # the minimizer is located to machine width and verified
                ev = verified_event(
                    float(nu0), (float(nu0), float(nu0)), "dip",
                    residual_collapsed=absfn(float(nu0))
                    <= 1e-6 * max(trio[0], trio[2]),
                )
                if ev is not None:
                    candidates.append(ev)
        # stretches inside a rank-one set: a double degeneracy announces
        # itself by a sign change of a cone coordinate
        if chart not in ("O13", "O23"):
            continue
        cone_vals = [p[2].get(chart) for p in points]
        for which in (0, 1):
            for i in range(grid_size - 1):
                ci, cj = cone_vals[i], cone_vals[i + 1]
                if ci is None or cj is None:
                    continue
                if not (on_set[i] and on_set[i + 1]):
                    continue
                vi, vj = ci[which], cj[which]
                ti, tj = ci[which + 2], cj[which + 2]
                if abs(vi) <= ti or abs(vj) <= tj:
                    continue
                if (vi > 0) != (vj > 0):
                    fn = cone_at(chart, which)
                    lo, hi = _bisect_zero(fn, grid[i], grid[i + 1], vi, vj)
                    nu0 = float(0.5 * (lo + hi))
                    v_mid = fn(nu0)
                    if v_mid is not None and abs(v_mid) > min(abs(vi), abs(vj)):
                        continue
                    ev = verified_event(
                        nu0, (float(lo), float(hi)), "cone",
                        residual_collapsed=v_mid is not None
                        and abs(v_mid) <= 1e-6 * max(abs(vi), abs(vj)),
                    )
                    if ev is not None:
                        candidates.append(ev)

    # dedupe: keep the sharpest observation of each parameter
    rank = {"grid": 0, "crossing": 1, "cone": 2, "dip": 3, "degenerate": 4}
    candidates.sort(key=lambda e: (e.nu, rank[e.kind]))
    events: list[SingularEvent] = []
    min_sep = max(1e-7 * span, 64.0 * _EPS)
    for ev in candidates:
        if events and abs(ev.nu - events[-1].nu) <= min_sep:
            continue
        events.append(ev)

    return BranchTrace(family, grid, values, counts, near, events)


def _limit_values(problem: Problem) -> tuple:
    """Multiplicity-expanded eigenvalues of a (possibly near-degenerate)
    limit problem, with any about-to-escape root beyond the divergence
    threshold removed."""
    spec = _spectrum_or_none(problem)
    if spec is None:
        trimmed = char_poly(problem).trimmed()
        roots = np.sort(_aberth_roots(trimmed.coeffs).real)
    else:
        roots = np.array(spec.values())
    return tuple(float(v) for v in roots if abs(v) <= TOL.divergence)


@dataclass(frozen=True)
class BranchLimit:
    """One-sided behavior of a single indexed branch at a singular point."""

    index: int
    kind: str  # "diverges" | "converges" | "unclassified"
    sign: int | None = None
    shift: int | None = None
    value: float | None = None
    target: float | None = None
    detail: str = ""


@dataclass(frozen=True)
class SideClassification:
    side: str
    count: int
    limit_count: int
    limits: tuple
    n_div_minus: int
    n_div_plus: int
    consistent: bool

    @property
    def n_unclassified(self) -> int:
        return sum(1 for b in self.limits if b.kind == "unclassified")


@dataclass(frozen=True)
class JumpClassification:
    nu: float
    limit_values: tuple
    left: SideClassification | None
    right: SideClassification | None


def _sample_values(problem: Problem) -> tuple | None:
    """Multiplicity-expanded eigenvalues for classification sampling.

    Near a double-degeneracy point the leading coefficients vanish
    quadratically, opening a band where trimming removes them while the
    rank still demands the full count.  The engine refuses such problems
    (DegreeMismatch); here the escaped roots are recovered to first order
    from the surviving top coefficients, which is ample for divergence
    bookkeeping."""
    try:
        return eigenvalues(problem).values()
    except DegreeMismatch:
        pass
    gamma = char_poly(problem)
    expected = problem.equation.N - 2 + rank_r(problem)
    deg = gamma.degree()
    if deg >= expected or abs(gamma.coeffs[expected]) == 0.0:
        return None
    moderate = np.sort(_aberth_roots(gamma.coeffs[: deg + 1]).real)
    top = gamma.coeffs[deg : expected + 1]
    escaped = np.sort(_aberth_roots(top).real)
    return tuple(np.sort(np.concatenate([moderate, escaped])))


def _classify_side(
    family: Family,
    nu0: float,
    side: str,
    limit_values: tuple,
    bracket_width: float,
    gap: float,
) -> SideClassification | None:
    """Classify every branch index on one side of nu0 from dyadically
    refined samples nu0 +- delta * 2^-j.

    The innermost offset is floored so the sampled problems stay solidly
    off the singular set: limits converge linearly in the offset, so a
    two-point Richardson step reaches far beyond the matching tolerance,
    while the escaping branches grow like 1/offset and clear the
    divergence threshold comfortably.
    """
    sign_dir = -1.0 if side == "left" else 1.0
    delta = 0.45 * gap
    h_floor = max(
        1e-9 * (1.0 + abs(nu0)), 1e4 * bracket_width, 256.0 * _EPS * (1.0 + abs(nu0))
    )
    if delta <= 4.0 * h_floor:
        h_floor = max(delta / 16.0, 256.0 * _EPS * (1.0 + abs(nu0)))
    n_steps = min(48, max(10, int(math.floor(math.log2(delta / h_floor)))))
    offsets = delta * 0.5 ** np.arange(n_steps)
    samples = []
    for h in offsets:
        try:
            vals = _sample_values(family.resolve(nu0 + sign_dir * h))
        except UnresolvableFamily:
            vals = None
        if vals is not None:
            samples.append((h, vals))
    if len(samples) < 4:
        return None
    k = len(samples[-1][1])
    run = [s for s in samples if len(s[1]) == k]
    tail = run[-min(8, len(run)) :]
    m = len(limit_values)
    limits: list[BranchLimit] = []
    n_minus = 0
    for n in range(k):
        seq = np.array([s[1][n] for s in run])
        tail_seq = np.array([s[1][n] for s in tail])
        mags = np.abs(tail_seq)
        grows = bool(np.all(np.diff(mags) > 0.0))
        same_sign = bool(np.all(np.sign(tail_seq) == np.sign(tail_seq[-1])))
        if abs(seq[-1]) > TOL.divergence and grows and same_sign:
            limits.append(
                BranchLimit(n, "diverges", sign=int(np.sign(seq[-1])))
            )
            if seq[-1] < 0:
                n_minus += 1
            continue
        extrapolated = float(2.0 * seq[-1] - seq[-2])
        matches = [
            idx
            for idx, target in enumerate(limit_values)
            if abs(extrapolated - target) <= TOL.limit_match * (1.0 + abs(target))
        ]
        if matches:
            idx = min(matches, key=lambda j: (abs(j - (n - n_minus)), j))
            limits.append(
                BranchLimit(
                    n,
                    "converges",
                    shift=n - idx,
                    value=extrapolated,
                    target=limit_values[idx],
                )
            )
        else:
            limits.append(
                BranchLimit(
                    n,
                    "unclassified",
                    value=extrapolated,
                    detail=f"no divergence and no limit matches {extrapolated!r}",
                )
            )
    div_minus = [b.index for b in limits if b.kind == "diverges" and b.sign < 0]
    div_plus = [b.index for b in limits if b.kind == "diverges" and b.sign > 0]
    conv = [b for b in limits if b.kind == "converges"]
    consistent = (
        not any(b.kind == "unclassified" for b in limits)
        and div_minus == list(range(len(div_minus)))
        and div_plus == list(range(k - len(div_plus), k))
        and len(div_minus) + len(div_plus) == k - m
        and all(b.shift == len(div_minus) for b in conv)
    )
    return SideClassification(
        side, k, m, tuple(limits), len(div_minus), len(div_plus), consistent
    )


def classify_jump(trace_obj: BranchTrace, nu_star: float) -> JumpClassification:
    """Classify the branch behavior on both sides of a detected singular
    parameter of a trace."""
    family = trace_obj.family
    span = family.span
    if not trace_obj.events:
        raise ValueError("trace has no detected singular parameters")
    event = min(trace_obj.events, key=lambda e: abs(e.nu - nu_star))
    if abs(event.nu - nu_star) > 1e-2 * span:
        raise ValueError(
            f"no detected singular parameter near {nu_star} (closest: {event.nu})"
        )
    nu0 = event.nu
    limit_values = _limit_values(family.resolve(nu0))
    bracket_width = event.bracket[1] - event.bracket[0]
    lo, hi = family.domain
    boundaries = sorted(
        [lo, hi] + [e.nu for e in trace_obj.events if abs(e.nu - nu0) > 1e-7 * span]
    )
    below = max((b for b in boundaries if b < nu0 - 1e-12 * span), default=None)
    above = min((b for b in boundaries if b > nu0 + 1e-12 * span), default=None)
    left = None
    if below is not None:
        left = _classify_side(
            family, nu0, "left", limit_values, bracket_width, nu0 - below
        )
    right = None
    if above is not None:
        right = _classify_side(
            family, nu0, "right", limit_values, bracket_width, above - nu0
        )
    return JumpClassification(nu0, limit_values, left, right)


# -- monotonicity ------------------------------------------------------------


@dataclass(frozen=True)
class MonotonicityViolation:
    index: int
    nu_left: float
    nu_right: float
    value_left: float
    value_right: float
    excess: float


@dataclass(frozen=True)
class MonotonicityReport:
    rule: str
    grid_size: int
    runs: tuple
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def _rule_for_axis(family: Family) -> str:
    axis = family.axis
    kind = axis[0]
    if kind == "alpha":
        return "non_increasing"
    if kind == "beta":
        return "non_decreasing"
    if kind == "q":
        return "non_decreasing"
    if kind == "w":
        return "abs_non_increasing"
    if kind in ("inv_f", "f"):
        j = axis[1]
        mid = 0.5 * (family.domain[0] + family.domain[1])
        n = family.resolve(mid).equation.N
        if j == n:
            return "constant"
        return "non_increasing" if kind == "inv_f" else "non_decreasing"
    if kind == "chart":
        if axis[2] in (0, 3):
            return "non_decreasing"
        raise FamilyNotAxisAligned(
            "no monotonicity rule along the complex chart coordinate"
        )
    raise FamilyNotAxisAligned(f"no monotonicity rule for axis {axis!r}")


def check_monotonicity(family: Family, direction=None, grid_size: int = 65) -> MonotonicityReport:
    """Verify the directional monotonicity of every eigenvalue curve on
    each constant-count stretch of the sweep.

    Rules by axis: eigenvalues never increase along 1/f_j (j < N) and never
    depend on f_N; never decrease along q_j and along the two real
    coordinates of any chart; their magnitude never grows along w_j;
    separated sweeps decrease in alpha and increase in beta.  Violations
    beyond a slack of 1e-9 * (1 + |lambda|) are reported with locations.
    """
    if family.axis is None:
        raise FamilyNotAxisAligned("family does not vary a single known coordinate")
    if direction is not None and tuple(direction) != tuple(family.axis):
        raise FamilyNotAxisAligned(
            f"family sweeps {family.axis!r}, not {tuple(direction)!r}"
        )
    rule = _rule_for_axis(family)
    tr = trace(family, grid_size)
    violations: list[MonotonicityViolation] = []
    # constant-count stretches, additionally split at detected singular
    # parameters (which need not sit on the grid)
    event_nus = [ev.nu for ev in tr.events]

    def crosses_event(i):
        return any(tr.grid[i] < nu < tr.grid[i + 1] for nu in event_nus)

    runs: list[tuple] = []
    start = 0
    for i in range(1, grid_size + 1):
        if (
            i == grid_size
            or tr.counts[i] != tr.counts[start]
            or crosses_event(i - 1)
        ):
            if tr.counts[start] > 0 and i - start >= 2:
                runs.append((start, i))
            start = i
    for lo, hi in runs:
        k = int(tr.counts[lo])
        for n in range(k):
            seq = tr.values[n, lo:hi]
            for i in range(len(seq) - 1):
                x0, x1 = float(seq[i]), float(seq[i + 1])
                slack = 1e-9 * (1.0 + max(abs(x0), abs(x1)))
                if rule == "non_decreasing":
                    excess = x0 - x1 - slack
                elif rule == "non_increasing":
                    excess = x1 - x0 - slack
                elif rule == "abs_non_increasing":
                    excess = abs(x1) - abs(x0) - slack
                else:  # constant
                    excess = abs(x1 - x0) - 1e-12 * (1.0 + max(abs(x0), abs(x1)))
                if excess > 0.0:
                    violations.append(
                        MonotonicityViolation(
                            n,
                            float(tr.grid[lo + i]),
                            float(tr.grid[lo + i + 1]),
                            x0,
                            x1,
                            excess,
                        )
                    )
    return MonotonicityReport(rule, grid_size, tuple(runs), tuple(violations))


# -- named asymptotic fixtures ------------------------------------------------


@dataclass
class PatternCheck:
    """One crossing (or endpoint approach) with its expected divergence
    pattern per side: side -> (branches to -inf, branches to +inf)."""

    label: str
    family: Family
    nu_star: float
    expected: dict
    grid_size: int = 96
    explicit_limit: Problem | None = None  # endpoint approaches only


def _run_pattern_check(check: PatternCheck) -> list:
    rows = []
    if check.explicit_limit is not None:
        limit_values = _limit_values(check.explicit_limit)
        for side, want in check.expected.items():
            gap = check.family.span * 0.5
            got = _classify_side(check.family, check.nu_star, side, limit_values, 0.0, gap)
            rows.extend(_diff_side(check.label, side, want, got))
        return rows
    tr = trace(check.family, check.grid_size)
    try:
        jc = classify_jump(tr, check.nu_star)
    except ValueError as exc:
        return [(check.label, "event", "detected", str(exc))]
    for side, want in check.expected.items():
        got = jc.left if side == "left" else jc.right
        rows.extend(_diff_side(check.label, side, want, got))
    return rows


def _diff_side(label: str, side: str, want: tuple, got: SideClassification | None) -> list:
    if got is None:
        return [(label, side, f"pattern {want}", "side not classifiable")]
    rows = []
    if got.n_unclassified:
        rows.append((label, side, "all branches classified", f"{got.n_unclassified} unclassified"))
    if (got.n_div_minus, got.n_div_plus) != tuple(want):
        rows.append(
            (
                label,
                side,
                f"divergences {want}",
                f"observed ({got.n_div_minus}, {got.n_div_plus})",
            )
        )
    if not got.consistent:
        rows.append((label, side, "index bookkeeping", "shift pattern inconsistent"))
    return rows


def _fixture_equation_n4() -> Equation:
    return validate_equation(
        [0.8, 1.3, 0.7, 1.9, 1.1], [0.4, -0.3, 0.8, 0.1], [1.2, 0.9, 1.5, 1.0]
    )


def _asymptotic_checks(name: str) -> list:
    eq4 = _fixture_equation_n4()
    inv_f0 = 1.0 / eq4.f[0]  # 1.25
    z = (0.3, 0.2)
    zsq = z[0] ** 2 + z[1] ** 2

    if name == "equation-crossing":
        # fixed condition with both invariants nonzero; crossing 1/f_0 = eta = 1
        bc = validate_bc([[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, -1.0, 1.0]])
        base = validate_equation(
            [1.0, 1.3, 0.7, 1.9, 1.1], [0.4, -0.3, 0.8, 0.1], [1.2, 0.9, 1.5, 1.0]
        )
        fam = equation_axis_family(base, bc, ("inv_f", 0), 0.4, 1.6)
        return [
            PatternCheck("equation space: crossing the critical hyperplane", fam, 1.0, {"left": (1, 0), "right": (0, 1)})
        ]

    if name == "chart-i4-crossing":
        fam = chart_axis_family(
            eq4, "O14", (0.0, z[0], z[1], 0.6), 0, inv_f0 - 0.8, inv_f0 + 0.8
        )
        return [
            PatternCheck(
                "i4 chart: crossing the rank-one set", fam, inv_f0, {"left": (0, 1), "right": (1, 0)}
            )
        ]

    if name == "chart-i3-crossing":
        checks = []
        p = 0.7
        b_star = zsq / p
        fam_r = chart_axis_family(
            eq4, "O13", (inv_f0 + p, z[0], z[1], 0.0), 3, b_star - 0.5, b_star + 0.5
        )
        checks.append(
            PatternCheck(
                "i3 chart: crossing at a generic r point", fam_r, b_star, {"left": (0, 1), "right": (1, 0)}
            )
        )
        fam_l = chart_axis_family(
            eq4, "O13", (inv_f0 - p, z[0], z[1], 0.0), 3, -b_star - 0.5, -b_star + 0.5
        )
        checks.append(
            PatternCheck(
                "i3 chart: crossing at a generic l point", fam_l, -b_star, {"left": (0, 1), "right": (1, 0)}
            )
        )

        # the double-degeneracy point: all four approach cones
        def diag_family(sign):
            def resolve(s):
                return Problem(
                    eq4,
                    validate_bc(
                        chart_matrix("O13", (inv_f0 + sign * s, 0.0, 0.0, sign * s))
                    ),
                )
            return Family("chart-affine", (0.0, 0.8), resolve, label="cone path")

        checks.append(
            PatternCheck("i3 chart: double point from inside the r cone", diag_family(+1.0), 0.0, {"right": (2, 0)})
        )
        checks.append(
            PatternCheck("i3 chart: double point from inside the l cone", diag_family(-1.0), 0.0, {"right": (0, 2)})
        )
        fam_on_r = chart_axis_family(
            eq4, "O13", (0.0, 0.0, 0.0, 0.0), 0, inv_f0, inv_f0 + 0.8
        )
        checks.append(
            PatternCheck("i3 chart: double point along the r set", fam_on_r, inv_f0, {"right": (1, 0)})
        )
        fam_on_l = chart_axis_family(
            eq4, "O13", (0.0, 0.0, 0.0, 0.0), 0, inv_f0 - 0.8, inv_f0
        )
        checks.append(
            PatternCheck("i3 chart: double point along the l set", fam_on_l, inv_f0, {"left": (0, 1)})
        )
        fam_minus = chart_axis_family(
            eq4, "O13", (inv_f0, 0.0, 0.0, 0.0), 1, -0.5, 0.5
        )
        checks.append(
            PatternCheck(
                "i3 chart: double point from the minus side", fam_minus, 0.0,
                {"left": (1, 1), "right": (1, 1)},
            )
        )
        return checks

    if name == "product-diagonal":
        def resolve(nu):
            eq = validate_equation(
                [1.0 / (1.0 - nu), 1.3, 0.7, 1.9, 1.1],
                [0.4, -0.3, 0.8, 0.1],
                [1.2, 0.9, 1.5, 1.0],
            )
            bc = validate_bc(chart_matrix("O14", (1.0 + nu, z[0], z[1], 0.6)))
            return Problem(eq, bc)

        fam = Family("product-diagonal", (-0.5, 0.5), resolve, label="diagonal")
        return [
            PatternCheck(
                "product space: diagonal crossing", fam, 0.0, {"left": (0, 1), "right": (1, 0)}
            )
        ]

    if name == "separated-sweeps":
        from .discontinuity import xi_of

        xi = xi_of(eq4.f[0])
        checks = []
        beta0 = 1.9
        fam_alpha = separated_angle_family(eq4, "alpha", beta0, 0.0, math.pi)
        checks.append(
            PatternCheck(
                "separated: alpha sweep through the critical angle", fam_alpha, xi, {"left": (1, 0), "right": (0, 1)}
            )
        )
        checks.append(
            PatternCheck(
                "separated: alpha wraparound limit", fam_alpha, math.pi, {"left": (0, 0)},
                explicit_limit=Problem(eq4, separated_matrix(0.0, beta0)),
            )
        )
        alpha0 = 0.7
        fam_beta = separated_angle_family(eq4, "beta", alpha0, 0.0, math.pi)
        checks.append(
            PatternCheck(
                "separated: beta to pi", fam_beta, math.pi, {"left": (0, 1)}
            )
        )
        checks.append(
            PatternCheck(
                "separated: beta to 0", fam_beta, 0.0, {"right": (1, 0)},
                explicit_limit=Problem(eq4, separated_matrix(alpha0, math.pi)),
            )
        )
        fam_alpha_pi = separated_angle_family(eq4, "alpha", math.pi, 0.0, math.pi)
        checks.append(
            PatternCheck(
                "separated: alpha sweep on the singular line", fam_alpha_pi, xi,
                {"left": (1, 0), "right": (0, 1)},
            )
        )
        fam_beta_xi = separated_angle_family(eq4, "beta", xi, 0.0, math.pi)
        checks.append(
            PatternCheck(
                "separated: beta to pi at the critical alpha", fam_beta_xi, math.pi,
                {"left": (0, 1)},
            )
        )
        checks.append(
            PatternCheck(
                "separated: beta to 0 at the critical alpha", fam_beta_xi, 0.0,
                {"right": (1, 0)},
                explicit_limit=Problem(eq4, separated_matrix(xi, math.pi)),
            )
        )
        return checks

    if name == "coupled-sweep":
        k12, k21, gamma = 0.8, -0.4, 0.9
        t_star = eq4.f[0] * k12  # 0.64
        fam = coupled_axis_family(
            eq4, gamma, [[t_star, k12], [k21, (1.0 + k12 * k21) / t_star]],
            "k11", t_star - 0.5, t_star + 0.5,
        )
        return [
            PatternCheck(
                "coupled: k11 sweep through the critical ratio", fam, t_star, {"left": (1, 0), "right": (0, 1)}
            )
        ]

    raise KeyError(f"unknown asymptotic fixture {name!r}")


ASYMPTOTIC_FIXTURES = (
    "equation-crossing",
    "chart-i4-crossing",
    "chart-i3-crossing",
    "product-diagonal",
    "separated-sweeps",
    "coupled-sweep",
)


@dataclass(frozen=True)
class AsymptoticReport:
    name: str
    checks: tuple
    passed: bool


def verify_asymptotic_theorem(name: str) -> AsymptoticReport:
    """Run the named crossing fixtures and compare every observed
    divergence sign and index shift with the expected pattern; raises
    PatternMismatch with a diff table on any disagreement."""
    checks = _asymptotic_checks(name)
    rows = []
    for check in checks:
        rows.extend(_run_pattern_check(check))
    if rows:
        raise PatternMismatch(rows)
    return AsymptoticReport(name, tuple(c.label for c in checks), True)
