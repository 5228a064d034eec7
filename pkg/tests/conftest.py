"""Shared generators for randomized corpora; every test seeds its own rng."""

import math

import numpy as np
import pytest

import slpkit as sk


def random_equation(rng, n, mixed_signs=True):
    if mixed_signs:
        signs = rng.choice([-1.0, 1.0], size=n + 1)
    else:
        signs = np.ones(n + 1)
    f = signs * rng.uniform(0.4, 2.5, size=n + 1)
    q = rng.uniform(-2.0, 2.0, size=n)
    w = rng.uniform(0.3, 3.0, size=n)
    return sk.validate_equation(f, q, w)


def random_invertible(rng, complex_entries=True):
    """Random 2x2 matrix with determinant bounded away from zero."""
    while True:
        t = rng.uniform(-1.0, 1.0, (2, 2))
        if complex_entries:
            t = t + 1j * rng.uniform(-1.0, 1.0, (2, 2))
        det = t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]
        if abs(det) > 0.3:
            return t


def random_separated(rng):
    return sk.separated_matrix(
        rng.uniform(0.0, math.pi * 0.999), rng.uniform(1e-3, math.pi)
    )


def random_coupled(rng):
    a = rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 2.0)
    b, c = rng.uniform(-2.0, 2.0, size=2)
    return sk.coupled_matrix(
        rng.uniform(0.0, math.pi * 0.999), [[a, b], [c, (1.0 + b * c) / a]]
    )


def random_chart_bc(rng):
    chart = str(rng.choice(sk.CHART_IDS))
    return sk.validate_bc(sk.chart_matrix(chart, rng.uniform(-2.0, 2.0, size=4)))


def random_bc(rng, kind=None, twist=False):
    kind = kind or str(rng.choice(["separated", "coupled", "chart"]))
    if kind == "separated":
        bc = random_separated(rng)
    elif kind == "coupled":
        bc = random_coupled(rng)
    else:
        bc = random_chart_bc(rng)
    if twist:
        bc = sk.validate_bc(random_invertible(rng) @ bc.matrix)
    return bc


def random_problem(rng, n_min=2, n_max=12, kind=None, twist=False):
    n = int(rng.integers(n_min, n_max + 1))
    return sk.Problem(random_equation(rng, n), random_bc(rng, kind=kind, twist=twist))


@pytest.fixture
def rng():
    return np.random.default_rng(171717)
