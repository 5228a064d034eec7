"""Characteristic polynomial, eigenvalue count, and eigenvalue computation.

The fundamental solutions of the difference equation with initial data
(1, 0) and (0, 1) in the (value, quasi-derivative) coordinates are
polynomials in the spectral parameter; running the equation's first-order
form in polynomial arithmetic yields their values at the right endpoint.
Combining those four boundary polynomials with the boundary-condition
matrix gives the characteristic polynomial, whose real zeros (with
multiplicity) are exactly the eigenvalues.  The number of eigenvalues is
N - 2 + r where r is the rank of a 2x2 matrix built from the boundary
condition and f_0; equivalently, it is the degree of the characteristic
polynomial.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .charts import c_point_matrix, row_span_distance
from .errors import DegreeMismatch, NonRealRoot
from .model import Equation, Problem
from .tolerances import TOL


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Coefficients in ascending degree order (real or complex dtype)."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.array(self.coeffs))
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def degree(self, rel_tol: float | None = None) -> int:
        """Largest index whose coefficient exceeds rel_tol times the largest
        coefficient magnitude; -1 for the (numerically) zero polynomial."""
        if rel_tol is None:
            rel_tol = TOL.trim
        mags = np.abs(self.coeffs)
        top = float(mags.max(initial=0.0))
        if top == 0.0:
            return -1
        keep = np.nonzero(mags > rel_tol * top)[0]
        return int(keep[-1]) if keep.size else -1

    def trimmed(self, rel_tol: float | None = None) -> "Polynomial":
        return Polynomial(self.coeffs[: self.degree(rel_tol) + 1])

    def __call__(self, x):
        return npoly.polyval(x, self.coeffs)

    def derivative(self) -> "Polynomial":
        return Polynomial(npoly.polyder(self.coeffs))


@dataclass(frozen=True, eq=False)
class FundamentalSolutions:
    """Right-endpoint values of the two fundamental solutions, as
    polynomials in the spectral parameter.

    ``phi_N`` and ``psi_N`` have degree N-1; the quasi-derivatives
    ``fdphi_N`` and ``fdpsi_N`` have degree N.
    """

    phi_N: Polynomial
    psi_N: Polynomial
    fdphi_N: Polynomial
    fdpsi_N: Polynomial


def _run_polynomial_recursion(f, q, w, y0: float, u0: float):
    """Advance (y, u) with u_n = u_{n-1} + (q_n - lam*w_n)*y_n and
    y_n = y_{n-1} + u_{n-1}/f_{n-1}, carrying coefficient arrays.

    Every 8 steps the pair is rescaled by a power of two (exact in floating
    point) to keep intermediate products in range; the accumulated exponent
    is folded back at the end.
    """
    n_pts = len(q)
    y = np.zeros(n_pts + 1)
    u = np.zeros(n_pts + 1)
    y[0] = y0
    u[0] = u0
    exp2 = 0
    for n in range(1, n_pts + 1):
        y = y + u / f[n - 1]
        u_new = u + q[n - 1] * y
        u_new[1:] -= w[n - 1] * y[:-1]
        u = u_new
        if n % 8 == 0:
            top = max(float(np.abs(y).max()), float(np.abs(u).max()))
            if top > 0.0 and not 2.0**-64 < top < 2.0**64:
                shift = -int(math.floor(math.log2(top)))
                y = np.ldexp(y, shift)
                u = np.ldexp(u, shift)
                exp2 -= shift
    if exp2:
        y = np.ldexp(y, exp2)
        u = np.ldexp(u, exp2)
    return y, u


@functools.lru_cache(maxsize=256)
def fundamental_solutions(eq: Equation) -> FundamentalSolutions:
    """Boundary polynomials of the fundamental solutions of ``eq``."""
    phi, fdphi = _run_polynomial_recursion(eq.f, eq.q, eq.w, 1.0, 0.0)
    psi, fdpsi = _run_polynomial_recursion(eq.f, eq.q, eq.w, 0.0, 1.0)
    return FundamentalSolutions(
        Polynomial(phi), Polynomial(psi), Polynomial(fdphi), Polynomial(fdpsi)
    )


def leading_coefficients(eq: Equation) -> tuple:
    """Closed forms of the leading coefficients of the four boundary
    polynomials: common factor P = prod_{i=1}^{N-1} w_i / f_i, then

        phi:   (-1)^(N-1) P             psi:   (-1)^(N-1) P / f_0
        fdphi: (-1)^N     P w_N         fdpsi: (-1)^N     P w_N / f_0
    """
    n = eq.N
    p = 1.0
    for i in range(1, n):
        p *= eq.w[i - 1] / eq.f[i]
    sign = -1.0 if (n - 1) % 2 else 1.0
    return (
        sign * p,
        sign * p / eq.f[0],
        -sign * p * eq.w[n - 1],
        -sign * p * eq.w[n - 1] / eq.f[0],
    )


def c_matrix(bc) -> np.ndarray:
    """The 2x2 weight matrix combining the boundary blocks with the
    fundamental solutions: transpose(B) times transpose(adj(A))."""
    a, b = bc.A, bc.B
    first = np.array([[b[0, 0], b[1, 0]], [b[0, 1], b[1, 1]]])
    second = np.array([[a[1, 1], -a[1, 0]], [-a[0, 1], a[0, 0]]])
    return first @ second


def _det2(m) -> complex:
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def char_poly(problem: Problem) -> Polynomial:
    """Characteristic polynomial of the problem, degree at most N, for the
    stored boundary-condition representative.

    Changing the representative by an invertible T rescales the polynomial
    by det T, so its zeros are representative-independent.
    """
    eq = problem.equation
    fs = fundamental_solutions(eq)
    c = c_matrix(problem.bc)
    coeffs = np.zeros(eq.N + 1, dtype=complex)
    coeffs += c[0, 0] * fs.phi_N.coeffs
    coeffs += c[0, 1] * fs.psi_N.coeffs
    coeffs += c[1, 0] * fs.fdphi_N.coeffs
    coeffs += c[1, 1] * fs.fdpsi_N.coeffs
    coeffs[0] += _det2(problem.bc.A) + _det2(problem.bc.B)
    return Polynomial(coeffs)


def rank_matrix(problem: Problem) -> np.ndarray:
    """The 2x2 matrix whose rank fixes the eigenvalue count."""
    a, b = problem.bc.A, problem.bc.B
    f0 = problem.equation.f[0]
    return np.array(
        [
            [-a[0, 0] + f0 * a[0, 1], b[0, 1]],
            [-a[1, 0] + f0 * a[1, 1], b[1, 1]],
        ]
    )


def _rank_input_scale(problem: Problem) -> float:
    """Magnitude bound on the rank-matrix entries from their inputs: the
    entries are -a_i1 + f_0 a_i2 and b_i2, so the bound tracks each column
    separately.  Measuring ranks against this (rather than the matrix's own
    largest singular value) keeps exactly degenerate problems with rounding
    residue at low rank without drowning honest small entries when f_0 is
    extreme."""
    a, b = problem.bc.A, problem.bc.B
    f0 = problem.equation.f[0]
    return max(
        float(np.max(np.abs(a[:, 0]))),
        abs(f0) * float(np.max(np.abs(a[:, 1]))),
        float(np.max(np.abs(b[:, 1]))),
    )


def rank_r(problem: Problem) -> int:
    """Numerical rank (0, 1, or 2) of :func:`rank_matrix`."""
    s = np.linalg.svd(rank_matrix(problem), compute_uv=False)
    scale = _rank_input_scale(problem)
    if scale == 0.0:
        return 0
    return int(np.sum(s > TOL.rank * scale))


def _theta_bracket(problem: Problem) -> complex:
    a, b = problem.bc.A, problem.bc.B
    f0 = problem.equation.f[0]
    return (a[0, 0] * b[1, 1] - a[1, 0] * b[0, 1]) / f0 + a[1, 1] * b[0, 1] - a[0, 1] * b[1, 1]


def theta(problem: Problem) -> complex:
    """Coefficient of lambda^N in the characteristic polynomial, evaluated
    in closed form for the stored representative:

        (-1)^N (w_N prod_{i=1}^{N-1} w_i/f_i)
            * [(a11 b22 - a21 b12)/f_0 + a22 b12 - a12 b22].

    It vanishes exactly on the discontinuity sets of the eigenvalue count.
    """
    eq = problem.equation
    n = eq.N
    pref = eq.w[n - 1]
    for i in range(1, n):
        pref *= eq.w[i - 1] / eq.f[i]
    if n % 2:
        pref = -pref
    return pref * _theta_bracket(problem)


def count_eigenvalues(problem: Problem) -> int:
    """Total number of eigenvalues (with multiplicity): N - 2 + r."""
    return problem.equation.N - 2 + rank_r(problem)


def count_case(problem: Problem) -> str:
    """Three-way classification of the count: ``"N"`` when the leading
    coefficient survives, else ``"N-1"``, or ``"N-2"`` when the boundary
    condition is the distinguished double-degeneracy point.

    The zero test measures the bracket against the matrix scale: entries of
    canonical representatives carry rounding at that level (for example the
    vanishing entries built from sin(pi)), so a tighter per-entry scale
    would misread them as nonzero.
    """
    m = problem.bc.matrix
    f0 = problem.equation.f[0]
    scale = problem.bc.scale ** 2 * max(1.0, 1.0 / abs(f0))
    if abs(_theta_bracket(problem)) > TOL.set_membership * scale:
        return "N"
    if row_span_distance(m, c_point_matrix(1.0 / f0)) <= TOL.set_membership:
        return "N-2"
    return "N-1"


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Sorted eigenvalues with multiplicities plus the count-law data."""

    eigenvalues: tuple  # ((value, multiplicity), ...) strictly increasing
    predicted_count: int
    r: int
    theta: complex
    gamma: Polynomial
    near_singular: bool

    def values(self) -> tuple:
        """Eigenvalues repeated according to multiplicity."""
        out = []
        for v, m in self.eigenvalues:
            out.extend([v] * m)
        return tuple(out)

    def to_json_dict(self) -> dict:
        return {
            "count": self.predicted_count,
            "r": self.r,
            "theta": [self.theta.real, self.theta.imag],
            "eigenvalues": [
                {"value": v, "multiplicity": m} for v, m in self.eigenvalues
            ],
            "near_singular": self.near_singular,
        }


def _aberth_roots(coeffs: np.ndarray) -> np.ndarray:
    """All roots of a trimmed polynomial by Aberth-Ehrlich simultaneous
    iteration on the monic normalization, polished with two Newton steps."""
    monic = coeffs / coeffs[-1]
    d = len(monic) - 1
    if d == 0:
        return np.zeros(0, dtype=complex)
    if d == 1:
        return np.array([-monic[0]], dtype=complex)
    dmonic = npoly.polyder(monic)
    radius = 1.0 + float(np.abs(monic[:-1]).max())
    k = np.arange(d)
    z = radius * np.exp(2j * np.pi * (k + 0.35) / d)
    for _ in range(200):
        p = npoly.polyval(z, monic)
        dp = npoly.polyval(z, dmonic)
        dp = np.where(np.abs(dp) > 0.0, dp, 1e-300)
        ratio = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - ratio * s
        denom = np.where(np.abs(denom) > 1e-300, denom, 1.0)
        step = ratio / denom
        z = z - step
        if float(np.abs(step).max()) <= 1e-15 * (1.0 + float(np.abs(z).max())):
            break
    for _ in range(2):
        p = npoly.polyval(z, monic)
        dp = npoly.polyval(z, dmonic)
        step = np.where(np.abs(dp) > 0.0, p / np.where(np.abs(dp) > 0.0, dp, 1.0), 0.0)
        z = z - step
    return z


def _cluster_real_roots(values: np.ndarray) -> tuple:
    groups: list[list[float]] = []
    for v in np.sort(values):
        if groups and v - groups[-1][-1] <= TOL.cluster * (1.0 + abs(v)):
            groups[-1].append(float(v))
        else:
            groups.append([float(v)])
    return tuple((float(np.mean(g)), len(g)) for g in groups)


def _polish_double_root(dgamma: Polynomial, center: float, radius: float) -> float:
    """At a double root the derivative has a simple zero; a few Newton
    steps on it recover the location to full precision where the cluster
    mean is only square-root accurate."""
    d2 = dgamma.derivative()
    x = center
    for _ in range(8):
        dp = dgamma(x)
        d2p = d2(x)
        if abs(d2p) == 0.0:
            break
        step = (dp / d2p).real
        x -= step
        if abs(step) <= 1e-16 * (1.0 + abs(x)):
            break
    if abs(x - center) > max(radius, TOL.cluster * (1.0 + abs(center))):
        return center
    return x


def eigenvalues(problem: Problem) -> Spectrum:
    """Compute the full spectrum of the problem.

    The characteristic polynomial is trimmed to its numerical degree, which
    must agree with the rank-based count (DegreeMismatch otherwise --- the
    problem sits in the tolerance gap next to a discontinuity set); all its
    roots are found simultaneously, checked to be real, and clustered into
    multiplicities.  A leading coefficient that survives trimming but is
    relatively tiny flags the spectrum as near-singular: one root is about
    to escape to infinity.
    """
    eq = problem.equation
    gamma = char_poly(problem)
    r = rank_r(problem)
    expected = eq.N - 2 + r
    coeffs = gamma.coeffs
    top = float(np.abs(coeffs).max())
    degree = gamma.degree()
    if degree != expected:
        raise DegreeMismatch(degree, expected)
    near = bool(
        degree == eq.N and abs(coeffs[eq.N]) < TOL.near_singular * top
    )
    roots = _aberth_roots(coeffs[: degree + 1])
    for root in roots:
        if abs(root.imag) > TOL.real_root * (1.0 + abs(root.real)):
            raise NonRealRoot(complex(root))
    pairs = _cluster_real_roots(roots.real)
    dgamma = gamma.derivative()
    polished = []
    for value, mult in pairs:
        if mult >= 3:
            warnings.warn(
                f"eigenvalue {value} clustered with multiplicity {mult} > 2",
                RuntimeWarning,
                stacklevel=2,
            )
        if mult == 2:
            value = _polish_double_root(dgamma, value, TOL.cluster * (1.0 + abs(value)))
        if mult >= 2:
            dscale = float(npoly.polyval(abs(value), np.abs(dgamma.coeffs)))
            if abs(dgamma(value)) > 1e-3 * max(dscale, top):
                warnings.warn(
                    f"cluster at {value} does not flatten the derivative; "
                    "possibly two close simple eigenvalues",
                    RuntimeWarning,
                    stacklevel=2,
                )
        polished.append((float(value), mult))
    pairs = tuple(polished)
    return Spectrum(
        eigenvalues=pairs,
        predicted_count=expected,
        r=r,
        theta=complex(theta(problem)),
        gamma=gamma,
        near_singular=near,
    )
