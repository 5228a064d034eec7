"""Built-in one-parameter example families with closed-form spectra.

Three N=2 families exercise the three ways a spectrum can degenerate:

* ``ex1.1`` sweeps the left endpoint angle of a separated condition on the
  free equation; the count drops from 2 to 1 at alpha = 3*pi/4.
* ``ex2.1`` sweeps a piecewise equation family under a fixed coupled-shape
  condition; at s = 1 only the upper eigenvalue escapes (to +infinity on
  both sides) while the lower one stays continuous.
* ``ex3.1`` sweeps 1/f_0 directly; at s = 1 the lower eigenvalue escapes
  to -infinity on one side and the upper to +infinity on the other.

The closed forms are used by ``slp verify-example`` and by the acceptance
tests; each returns the sorted eigenvalue tuple, with a single entry at
the degenerate parameter.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import UnknownExample
from .model import BoundaryCondition, Problem, validate_bc, validate_equation
from .tracing import Family

#: the matrix used by the two equation-side examples
COUPLING_BC = ((1.0, 1.0, 0.0, 0.0), (0.0, 0.0, -1.0, 1.0))

EX11_SINGULAR = 0.75 * math.pi


def free_equation():
    """N = 2, f = w = 1, q = 0."""
    return validate_equation([1.0, 1.0, 1.0], [0.0, 0.0], [1.0, 1.0])


def ex11_bc(alpha: float) -> BoundaryCondition:
    return validate_bc(
        [
            [math.cos(alpha), -math.sin(alpha), 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ]
    )


def ex11_closed(alpha: float) -> tuple:
    s, c = math.sin(alpha), math.cos(alpha)
    den = c + s
    if abs(den) < 1e-12:
        return (1.0,)
    disc = math.sqrt(c * c + 4.0 * math.sin(2.0 * alpha) + 4.0)
    lam_m = (3.0 * c + 2.0 * s - disc) / (2.0 * den)
    lam_p = (3.0 * c + 2.0 * s + disc) / (2.0 * den)
    return tuple(sorted((lam_m, lam_p)))


def ex11_family() -> Family:
    eq = free_equation()

    def resolve(alpha):
        return Problem(eq, ex11_bc(alpha))

    return Family(
        "builtin", (0.0, math.pi), resolve, right_open=True, axis=("alpha",),
        label="ex1.1",
    )


def ex21_equation(s: float):
    if s < 1.0:
        f0, f1 = 1.0 / (2.0 - s), 1.0
    else:
        f0, f1 = 1.0 / s, 1.0 / s
    return validate_equation([f0, f1, 1.0], [0.0, 0.0], [1.0, 1.0])


def ex21_closed(s: float) -> tuple:
    if s < 1.0:
        disc = math.sqrt(5.0 * s * s - 12.0 * s + 8.0)
        den = 2.0 * (1.0 - s)
        return ((2.0 - s - disc) / den, (2.0 - s + disc) / den)
    if s == 1.0:
        return (0.0,)
    a = s * s - s
    b = s * s - 4.0 * s + 2.0
    disc = math.sqrt(b * b - 4.0 * a * (2.0 - 2.0 * s))
    return ((-b - disc) / (2.0 * a), (-b + disc) / (2.0 * a))


def ex21_family() -> Family:
    bc = validate_bc(np.array(COUPLING_BC))

    def resolve(s):
        return Problem(ex21_equation(s), bc)

    return Family("builtin", (0.0, 2.0), resolve, label="ex2.1")


def ex31_equation(s: float):
    return validate_equation([1.0 / s, 1.0, 1.0], [0.0, 0.0], [1.0, 1.0])


def ex31_closed(s: float) -> tuple:
    if s == 1.0:
        return (0.0,)
    disc = math.sqrt(5.0 * s * s - 8.0 * s + 4.0)
    den = 2.0 * (s - 1.0)
    lo, hi = ((s + disc) / den, (s - disc) / den) if s < 1.0 else (
        (s - disc) / den,
        (s + disc) / den,
    )
    return (lo, hi)


def ex31_family() -> Family:
    bc = validate_bc(np.array(COUPLING_BC))

    def resolve(s):
        return Problem(ex31_equation(s), bc)

    # the parameter is literally the coordinate 1/f_0
    return Family("builtin", (0.1, 2.0), resolve, axis=("inv_f", 0), label="ex3.1")


BUILTINS = {
    "ex1.1": {
        "family": ex11_family,
        "closed": ex11_closed,
        "singular": (EX11_SINGULAR,),
    },
    "ex2.1": {
        "family": ex21_family,
        "closed": ex21_closed,
        "singular": (1.0,),
    },
    "ex3.1": {
        "family": ex31_family,
        "closed": ex31_closed,
        "singular": (1.0,),
    },
}


def builtin_family(name: str) -> Family:
    try:
        return BUILTINS[name]["family"]()
    except KeyError:
        raise UnknownExample(f"unknown builtin example {name!r}") from None


def closed_form(name: str):
    try:
        return BUILTINS[name]["closed"]
    except KeyError:
        raise UnknownExample(f"unknown builtin example {name!r}") from None
