"""Finite-dimensional Lie algebras, quasi-Lie bialgebras and their doubles.

Structure constants are sparse dicts over 0-based indices with Fraction
values: ``c[i, j, k]`` is the ``e_k`` coefficient of ``[e_i, e_j]``.
The quasi-Lie bialgebra axioms are not spelled out separately; they are
checked as the Jacobi identity of the double.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product

from . import linalg
from .report import Report
from .symcalc import rat, sort_sign


def _render_vector(vec, labels) -> str:
    parts = []
    for c, name in zip(vec, labels):
        if not c:
            continue
        if c == 1:
            parts.append(name)
        elif c == -1:
            parts.append("-" + name)
        else:
            s = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
            parts.append(f"{s}*{name}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _antisymmetrize_pair(entries: dict, what: str) -> dict:
    """Complete ``t[a, b, c] = -t[b, a, c]`` from sparse input, rejecting clashes."""
    out: dict = {}
    for (a, b, c), v in entries.items():
        v = rat(v)
        if a == b:
            if v:
                raise ValueError(f"{what}: diagonal entry {(a + 1, b + 1, c + 1)} must vanish")
            continue
        for key, val in (((a, b, c), v), ((b, a, c), -v)):
            if key in out and out[key] != val:
                raise ValueError(f"{what}: entries {key} are not antisymmetric")
            out[key] = val
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True)
class LieAlgebraSC:
    """Lie algebra of dimension ``dim`` given by structure constants."""

    dim: int
    c: dict = field(default_factory=dict)
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "c", _antisymmetrize_pair(self.c, "structure constants"))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i + 1}" for i in range(self.dim)))

    def bracket_basis(self, i: int, j: int) -> list[Fraction]:
        return [self.c.get((i, j, k), Fraction(0)) for k in range(self.dim)]

    def bracket(self, x, y) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for (i, j, k), v in self.c.items():
            if x[i] and y[j]:
                out[k] += x[i] * y[j] * v
        return out

    def unit(self, i: int) -> list[Fraction]:
        return [Fraction(int(k == i)) for k in range(self.dim)]

    def is_abelian(self) -> bool:
        return not self.c


@dataclass(frozen=True)
class QuasiLieBialgebra:
    """Quasi-Lie bialgebra data ``(g, F, Omega)``.

    ``F[i, j, k]`` is ``F_i^{jk}`` with ``F(e_i) = 1/2 sum F_i^{jk} e_j ^ e_k`` and
    ``omega[i, j, k]`` is ``Omega^{ijk}`` with
    ``Omega = 1/6 sum Omega^{ijk} e_i ^ e_j ^ e_k``.
    """

    base: LieAlgebraSC
    F: dict = field(default_factory=dict)
    omega: dict = field(default_factory=dict)

    def __post_init__(self):
        F = {}
        for (i, j, k), v in self.F.items():
            v = rat(v)
            if j == k:
                if v:
                    raise ValueError("cobracket: F_i^{jj} must vanish")
                continue
            for key, val in (((i, j, k), v), ((i, k, j), -v)):
                if key in F and F[key] != val:
                    raise ValueError(f"cobracket entries {key} are not antisymmetric")
                F[key] = val
        object.__setattr__(self, "F", {k: v for k, v in F.items() if v})
        om = {}
        for idx, v in self.omega.items():
            v = rat(v)
            key, sign = sort_sign(idx)
            if key is None:
                if v:
                    raise ValueError("omega entries with a repeated index must vanish")
                continue
            v = v * sign
            if key in om and om[key] != v:
                raise ValueError(f"omega entries for {tuple(i + 1 for i in key)} are not antisymmetric")
            om[key] = v
        full = {}
        for key, v in om.items():
            if not v:
                continue
            for perm in permutations(range(3)):
                idx = tuple(key[p] for p in perm)
                _, s = sort_sign(perm)
                full[idx] = v * s
        object.__setattr__(self, "omega", full)

    @property
    def dim(self) -> int:
        return self.base.dim

    def cobracket(self, i: int) -> dict:
        """``F(e_i)`` as ``{(j, k): coefficient of e_j ^ e_k}`` over ``j < k``."""
        return {(j, k): self.F[(i, j, k)] for (a, j, k) in self.F if a == i and j < k}

    def omega_upper(self) -> dict:
        """``Omega`` as ``{(i, j, k): coefficient of e_i ^ e_j ^ e_k}`` over ``i < j < k``."""
        return {k: v for k, v in self.omega.items() if k[0] < k[1] < k[2]}


@dataclass(frozen=True)
class QuadraticLieAlgebra:
    """Lie algebra with a symmetric bilinear form (the pairing matrix)."""

    dim: int
    c: dict
    pairing: tuple
    labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "c", _antisymmetrize_pair(self.c, "structure constants"))
        pm = tuple(tuple(rat(x) for x in row) for row in self.pairing)
        object.__setattr__(self, "pairing", pm)
        if len(pm) != self.dim or any(len(r) != self.dim for r in pm):
            raise ValueError("pairing matrix has the wrong shape")
        if any(pm[i][j] != pm[j][i] for i in range(self.dim) for j in range(self.dim)):
            raise ValueError("pairing matrix is not symmetric")
        if linalg.rank(pm) != self.dim:
            raise ValueError("pairing is degenerate")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"b{i + 1}" for i in range(self.dim)))

    def bracket(self, x, y) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for (i, j, k), v in self.c.items():
            if x[i] and y[j]:
                out[k] += x[i] * y[j] * v
        return out

    def pair(self, x, y) -> Fraction:
        return sum((x[i] * self.pairing[i][j] * y[j]
                    for i in range(self.dim) for j in range(self.dim) if x[i] and y[j]),
                   Fraction(0))

    def unit(self, i: int) -> list[Fraction]:
        return [Fraction(int(k == i)) for k in range(self.dim)]

    def with_bracket(self, i: int, j: int, value) -> "QuadraticLieAlgebra":
        """Copy with ``[b_i, b_j]`` replaced by ``value`` (and ``[b_j, b_i]`` by its negative)."""
        c = {k: v for k, v in self.c.items() if k[:2] not in ((i, j), (j, i))}
        for k, v in enumerate(value):
            if v:
                c[(i, j, k)] = rat(v)
        return QuadraticLieAlgebra(self.dim, c, self.pairing, self.labels)


@dataclass(frozen=True)
class Subspace:
    ambient: int
    basis: tuple

    def __post_init__(self):
        b = tuple(tuple(rat(x) for x in v) for v in self.basis)
        object.__setattr__(self, "basis", b)
        if any(len(v) != self.ambient for v in b):
            raise ValueError("basis vector of the wrong length")
        if linalg.rank(b, self.ambient) != len(b):
            raise ValueError("basis vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def span_of_units(cls, ambient: int, indices) -> "Subspace":
        return cls(ambient, tuple(tuple(int(k == i) for k in range(ambient)) for i in indices))


def check_jacobi(g) -> Report:
    """Brute-force Jacobi identity over all basis triples ``i < j < k``."""
    rep = Report("jacobi")
    n = g.dim
    for i, j, k in combinations(range(n), 3):
        ei, ej, ek = g.unit(i), g.unit(j), g.unit(k)
        total = [Fraction(0)] * n
        for a, b, c in ((ei, ej, ek), (ej, ek, ei), (ek, ei, ej)):
            t = g.bracket(g.bracket(a, b), c)
            total = [x + y for x, y in zip(total, t)]
        if any(total):
            rep.fail("cyclic sum", (g.labels[i], g.labels[j], g.labels[k]),
                     _render_vector(total, g.labels))
    return rep


def build_double(b: QuasiLieBialgebra) -> QuadraticLieAlgebra:
    """The double ``g + g*`` on the basis ``e_1..e_n, eps^1..eps^n``.

    ``[e_i, e_j] = c_ij^k e_k``, ``[e_i, eps^j] = -c_ik^j eps^k + F_i^{jk} e_k``,
    ``[eps^i, eps^j] = F_k^{ij} eps^k + Omega^{ijk} e_k``; the pairing is
    ``(e_i | eps^j) = 1/2 delta_i^j``.
    """
    n = b.dim
    c: dict = {}

    def put(i, j, k, v):
        if v:
            c[(i, j, k)] = c.get((i, j, k), Fraction(0)) + v

    for (i, j, k), v in b.base.c.items():
        if i < j:
            put(i, j, k, v)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                put(i, n + j, n + k, -b.base.c.get((i, k, j), Fraction(0)))
                put(i, n + j, k, b.F.get((i, j, k), Fraction(0)))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                put(n + i, n + j, n + k, b.F.get((k, i, j), Fraction(0)))
                put(n + i, n + j, k, b.omega.get((i, j, k), Fraction(0)))
    half = Fraction(1, 2)
    pairing = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        pairing[i][n + i] = pairing[n + i][i] = half
    labels = tuple(f"e{i + 1}" for i in range(n)) + tuple(f"eps{i + 1}" for i in range(n))
    return QuadraticLieAlgebra(2 * n, {k: v for k, v in c.items() if v}, pairing, labels)


def check_ad_invariance(d: QuadraticLieAlgebra) -> Report:
    """``([x, y] | z) + (y | [x, z]) = 0`` on all basis triples."""
    rep = Report("ad-invariance")
    n = d.dim
    units = [d.unit(i) for i in range(n)]
    for i, j, k in product(range(n), repeat=3):
        x, y, z = units[i], units[j], units[k]
        r = d.pair(d.bracket(x, y), z) + d.pair(y, d.bracket(x, z))
        if r:
            rep.fail("invariance", (d.labels[i], d.labels[j], d.labels[k]), str(r))
    return rep


def check_lagrangian_subalgebra(d: QuadraticLieAlgebra, V: Subspace) -> Report:
    """Isotropy, maximality (``dim V = dim d / 2``) and bracket closure of ``V``."""
    rep = Report("lagrangian-subalgebra")
    if V.ambient != d.dim:
        raise ValueError("subspace lives in a different ambient space")
    isotropic = True
    for a, b in product(range(V.dim), repeat=2):
        r = d.pair(V.basis[a], V.basis[b])
        if r:
            isotropic = False
            rep.fail("isotropy", (a + 1, b + 1), str(r))
    maximal = 2 * V.dim == d.dim
    if not maximal:
        rep.fail("maximality", (V.dim,), f"dimension {V.dim}, need {d.dim // 2}")
    closed = True
    basis = [list(v) for v in V.basis]
    for a, b in combinations(range(V.dim), 2):
        w = d.bracket(V.basis[a], V.basis[b])
        if linalg.rank(basis + [w], d.dim) > len(basis):
            closed = False
            rep.fail("closure", (a + 1, b + 1), _render_vector(w, d.labels))
    rep.data.update(isotropic=isotropic, maximal=maximal, closed=closed)
    return rep
