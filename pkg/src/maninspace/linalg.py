"""Exact pointwise linear algebra and deterministic sample points.

Matrices are lists of rows of Fractions. Rank, kernels and solves are done by
sympy over the rationals; only tiny matrices (at most a few dozen rows) occur.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

import sympy

from .symcalc import Chart, Poly


def _to_sympy(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> sympy.Matrix:
    rows = [list(r) for r in rows]
    if not rows:
        return sympy.zeros(0, ncols or 0)
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in map(Fraction, r)]
                         for r in rows])


def _from_sympy(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def rank(rows, ncols: int | None = None) -> int:
    if not rows:
        return 0
    return _to_sympy(rows, ncols).rank()


def nullspace(rows, ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : rows @ v = 0}`` in ``Q**ncols``."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    M = _to_sympy(rows)
    return [[_from_sympy(x) for x in v] for v in M.nullspace()]


def solve(rows, rhs) -> list[Fraction] | None:
    """One solution of ``rows @ v = rhs`` or None when inconsistent."""
    ncols = len(rows[0]) if rows else 0
    if not rows:
        return [] if not any(rhs) else None
    A = _to_sympy(rows)
    b = _to_sympy([[x] for x in rhs])
    try:
        sol, params = A.gauss_jordan_solve(b)
    except ValueError:
        return None
    sol = sol.subs({p: 0 for p in params})
    return [_from_sympy(sol[i, 0]) for i in range(ncols)]


def independent_subset(vectors) -> list[int]:
    """Indices of a maximal linearly independent subset, chosen greedily."""
    chosen: list[int] = []
    current: list = []
    r = 0
    for i, v in enumerate(vectors):
        trial = current + [list(v)]
        rr = rank(trial)
        if rr > r:
            chosen.append(i)
            current = trial
            r = rr
    return chosen


def same_span(a, b, ncols: int) -> bool:
    ra, rb = rank(a, ncols), rank(b, ncols)
    return ra == rb and rank(list(a) + list(b), ncols) == ra


def sample_points(chart: Chart, count: int = 25, seed: int = 0,
                  locus: Sequence[Poly] = ()):
    """Deterministic pseudo-random rational points on ``chart``.

    Numerators and denominators are drawn from ``[-9, 9] \\ {0}``. Points where
    any polynomial in ``locus`` vanishes are skipped; returns
    ``(points, skipped)``.
    """
    rng = random.Random(seed)
    nonzero = [k for k in range(-9, 10) if k]
    points, skipped = [], []
    attempts = 0
    while len(points) < count and attempts < 50 * count + 50:
        attempts += 1
        pt = tuple(Fraction(rng.choice(nonzero), rng.choice(nonzero)) for _ in chart.vars)
        if any(g.evaluate(pt) == 0 for g in locus):
            skipped.append(pt)
            continue
        points.append(pt)
    return points, skipped


def format_point(chart: Chart, pt) -> str:
    return "(" + ", ".join(f"{v}={x}" for v, x in zip(chart.vars, pt)) + ")"


def inverse(rows) -> list[list[Fraction]]:
    M = _to_sympy(rows)
    if M.rows != M.cols or M.rank() != M.rows:
        raise ValueError("matrix is not invertible")
    Mi = M.inv()
    return [[_from_sympy(Mi[i, j]) for j in range(M.cols)] for i in range(M.rows)]


def random_poly(chart: Chart, rng: random.Random, degree: int = 2, terms: int = 3) -> Poly:
    """Sparse polynomial of total degree <= ``degree`` with small rational coefficients."""
    out = {}
    for _ in range(terms):
        exp = [0] * chart.dim
        for _ in range(rng.randint(0, degree) if chart.dim else 0):
            exp[rng.randrange(chart.dim)] += 1
        c = Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2)))
        key = tuple(exp)
        out[key] = out.get(key, Fraction(0)) + c
    return Poly(chart, out)
