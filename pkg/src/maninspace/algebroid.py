"""Lie algebroids over a polynomial chart, actions, 2-differentials and
quasi-Lie bialgebroids.

Sections of ``wedge A`` are :class:`~maninspace.symcalc.Exterior` elements of
kind ``'e'`` over the base chart; sections of ``wedge A*`` have kind ``'eps'``.
A 2-differential is stored only on coordinate functions and on the frame
generators; every other value follows from the graded Leibniz rule.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .liestruct import QuasiLieBialgebra
from .report import Report
from .symcalc import (Chart, ChartMismatch, DegreeError, Exterior, MultiVec, Poly,
                      PolyMap, interior_product, pullback, schouten, wedge)


def frame_element(chart: Chart, rank: int, kind: str, comps=None) -> Exterior:
    return Exterior(chart, rank, kind, comps or {})


def to_frame(P: Exterior, kind: str = "e") -> Exterior:
    """Reinterpret a multivector field on ``S`` as a section of ``wedge TS``."""
    return Exterior(P.chart, P.rank, kind, P.comps)


def to_multivec(P: Exterior) -> MultiVec:
    if P.rank != P.chart.dim:
        raise DegreeError("only rank-dim(S) frames can be read as multivector fields")
    return MultiVec(P.chart, P.comps)


def _generator(chart, rank, kind, i):
    return Exterior(chart, rank, kind, {(i,): Poly.const(chart, 1)})


def _monomial(chart, rank, kind, key, coef):
    return Exterior(chart, rank, kind, {key: coef})


class GerstenhaberBracket:
    """Graded bracket on ``wedge`` of a frame, built from the anchor fields
    ``anchor[k]`` (acting on coefficients) and the generator brackets
    ``structure[k][l]`` (degree-1 elements), extended by graded symmetry and
    the graded Leibniz rule. The Jacobi identity is not assumed.
    """

    def __init__(self, chart: Chart, rank: int, kind: str,
                 anchor: Sequence[MultiVec], structure):
        self.chart = chart
        self.rank = rank
        self.kind = kind
        self.anchor = list(anchor)
        self.structure = structure

    def zero(self) -> Exterior:
        return Exterior(self.chart, self.rank, self.kind)

    def _function_with(self, g: Poly, P: Exterior) -> Exterior:
        """[g, P] for a function g."""
        out = self.zero()
        for key, f in P.comps.items():
            for a, i in enumerate(key):
                rg = self.anchor[i].apply(g)
                if not rg:
                    continue
                coef = f * rg
                if not a & 1:
                    coef = -coef
                out = out + _monomial(self.chart, self.rank, self.kind, key[:a] + key[a + 1:], coef)
        return out

    def _generator_with(self, k: int, P: Exterior) -> Exterior:
        """[e_k, P]."""
        out = self.zero()
        for key, f in P.comps.items():
            rf = self.anchor[k].apply(f)
            if rf:
                out = out + _monomial(self.chart, self.rank, self.kind, key, rf)
            for a, i in enumerate(key):
                br = self.structure[k][i]
                if not br:
                    continue
                left = _monomial(self.chart, self.rank, self.kind, key[:a], f)
                right = _monomial(self.chart, self.rank, self.kind, key[a + 1:], Poly.const(self.chart, 1))
                out = out + wedge(wedge(left, br), right)
        return out

    def bracket(self, P: Exterior, Q: Exterior) -> Exterior:
        if isinstance(P, Poly):
            P = Exterior(self.chart, self.rank, self.kind, {(): P})
        if isinstance(Q, Poly):
            Q = Exterior(self.chart, self.rank, self.kind, {(): Q})
        for X in (P, Q):
            if X.kind != self.kind or X.chart != self.chart or X.rank != self.rank:
                raise ChartMismatch("bracket arguments do not match the algebroid frame")
        out = self.zero()
        one = Poly.const(self.chart, 1)
        for pkey, f in P.comps.items():
            p = len(pkey)
            Pm = _monomial(self.chart, self.rank, self.kind, pkey, f)
            for qkey, g in Q.comps.items():
                # [Pm, g e_K] = [Pm, g] ^ e_K + g [Pm, e_K]
                eK = _monomial(self.chart, self.rank, self.kind, qkey, one)
                t = self._function_with(g, Pm)
                if t:
                    out = out + wedge(t if not p & 1 else -t, eK)
                for b, k in enumerate(qkey):
                    inner = -self._generator_with(k, Pm)
                    if not inner:
                        continue
                    left = _monomial(self.chart, self.rank, self.kind, qkey[:b], g)
                    right = _monomial(self.chart, self.rank, self.kind, qkey[b + 1:], one)
                    term = wedge(wedge(left, inner), right)
                    if ((p - 1) * b) & 1:
                        term = -term
                    out = out + term
        return out


class Differential:
    """Degree +1 derivation of ``wedge`` of a frame, fixed by its values on the
    chart coordinates and on the generators and extended by
    ``d(P ^ Q) = dP ^ Q + (-1)**p P ^ dQ``."""

    def __init__(self, chart: Chart, rank: int, kind: str,
                 on_functions: Sequence[Exterior], on_generators: Sequence[Exterior]):
        if len(on_functions) != chart.dim:
            raise ChartMismatch(f"need one value per coordinate of {chart}")
        if len(on_generators) != rank:
            raise ChartMismatch(f"need one value per generator (rank {rank})")
        self.chart = chart
        self.rank = rank
        self.kind = kind
        self.on_functions = list(on_functions)
        self.on_generators = list(on_generators)

    def of_function(self, f: Poly) -> Exterior:
        out = Exterior(self.chart, self.rank, self.kind)
        for b, v in enumerate(self.on_functions):
            df = f.diff(b)
            if df and v:
                out = out + v * df
        return out

    def __call__(self, P) -> Exterior:
        return self.apply(P)

    def apply(self, P) -> Exterior:
        if isinstance(P, Poly):
            return self.of_function(P)
        if P.kind != self.kind or P.chart != self.chart:
            raise ChartMismatch("differential applied to an element of another frame")
        out = Exterior(self.chart, self.rank, self.kind)
        one = Poly.const(self.chart, 1)
        for key, f in P.comps.items():
            eI = _monomial(self.chart, self.rank, self.kind, key, one)
            df = self.of_function(f)
            if df:
                out = out + wedge(df, eI)
            for a, i in enumerate(key):
                dg = self.on_generators[i]
                if not dg:
                    continue
                left = _monomial(self.chart, self.rank, self.kind, key[:a], f)
                right = _monomial(self.chart, self.rank, self.kind, key[a + 1:], one)
                term = wedge(wedge(left, dg), right)
                out = out + (-term if a & 1 else term)
        return out


@dataclass
class LieAlgebroidChart:
    """Lie algebroid of rank ``rank`` over ``base``.

    ``anchor[i]`` is ``rho(e_i)`` and ``C[i][j]`` the degree-1 section
    ``[[e_i, e_j]]`` (antisymmetry enforced).
    """

    base: Chart
    rank: int
    anchor: list
    C: list

    def __post_init__(self):
        if len(self.anchor) != self.rank:
            raise ValueError("anchor needs one vector field per generator")
        for X in self.anchor:
            if X.chart != self.base or X.degrees() - {1}:
                raise ValueError("anchor rows must be vector fields on the base chart")
        C = [[self.zero(1) for _ in range(self.rank)] for _ in range(self.rank)]
        for i in range(self.rank):
            for j in range(self.rank):
                v = self.C[i][j] if self.C else None
                if v is None or not v:
                    continue
                if i == j:
                    raise ValueError("structure functions must vanish on the diagonal")
                if C[i][j] and C[i][j] != v:
                    raise ValueError(f"structure functions ({i + 1},{j + 1}) are not antisymmetric")
                C[i][j], C[j][i] = v, -v
        self.C = C
        self.schouten = GerstenhaberBracket(self.base, self.rank, "e", self.anchor, self.C)
        self.differential = Differential(
            self.base, self.rank, "eps",
            [Exterior(self.base, self.rank, "eps",
                      {(i,): self.anchor[i][(b,)] for i in range(self.rank)})
             for b in range(self.base.dim)],
            [self._d_generator(k) for k in range(self.rank)])

    def zero(self, degree=None, kind="e") -> Exterior:
        return Exterior(self.base, self.rank, kind)

    def generator(self, i: int, kind="e") -> Exterior:
        return _generator(self.base, self.rank, kind, i)

    def section(self, coeffs, kind="e") -> Exterior:
        return Exterior(self.base, self.rank, kind, {(i,): c for i, c in enumerate(coeffs)})

    def _d_generator(self, k: int) -> Exterior:
        out = {}
        for i, j in combinations(range(self.rank), 2):
            c = self.C[i][j][(k,)]
            if c:
                out[(i, j)] = -c
        return Exterior(self.base, self.rank, "eps", out)

    def bracket(self, P, Q) -> Exterior:
        return self.schouten.bracket(P, Q)

    def anchor_of(self, a: Exterior) -> MultiVec:
        out = MultiVec(self.base)
        for (i,), f in a.part(1).comps.items():
            out = out + self.anchor[i] * f
        return out

    @classmethod
    def tangent(cls, chart: Chart) -> "LieAlgebroidChart":
        n = chart.dim
        return cls(chart, n, [MultiVec.partial(chart, i) for i in range(n)], [])

    @classmethod
    def transformation(cls, g, chart: Chart, fields: Sequence[MultiVec]) -> "LieAlgebroidChart":
        """``g x S`` with anchor ``e_i -> fields[i]`` and constant structure functions."""
        r = g.dim
        C = [[Exterior(chart, r, "e", {(k,): Poly.const(chart, g.c.get((i, j, k), 0))
                                        for k in range(r)}) for j in range(r)] for i in range(r)]
        return cls(chart, r, list(fields), C)


def check_algebroid_axioms(A: LieAlgebroidChart) -> Report:
    """Anchor is a bracket morphism on generators, and the Jacobi identity holds."""
    rep = Report("algebroid-axioms")
    r = A.rank
    for i, j in combinations(range(r), 2):
        lhs = A.anchor_of(A.C[i][j])
        rhs = schouten(A.anchor[i], A.anchor[j])
        if lhs != rhs:
            rep.fail("anchor morphism", (f"e{i + 1}", f"e{j + 1}"), (lhs - rhs).render())
    for i, j, k in combinations(range(r), 3):
        e = [A.generator(t) for t in (i, j, k)]
        total = (A.bracket(e[0], A.bracket(e[1], e[2])) + A.bracket(e[1], A.bracket(e[2], e[0]))
                 + A.bracket(e[2], A.bracket(e[0], e[1])))
        if total:
            rep.fail("jacobi", (f"e{i + 1}", f"e{j + 1}", f"e{k + 1}"), total.render())
    return rep.finish()


@dataclass
class ActionTable:
    """Action of a Lie algebroid on ``J : X -> S``: ``fields[i]`` is ``hat(e_i)``."""

    J: PolyMap
    fields: list

    def __post_init__(self):
        for u in self.fields:
            if u.chart != self.J.source or u.degrees() - {1}:
                raise ValueError("hatted fields must be vector fields on X")

    @property
    def X(self) -> Chart:
        return self.J.source

    @property
    def rank(self) -> int:
        return len(self.fields)

    def hat(self, P: Exterior) -> MultiVec:
        """Multiplicative extension: ``hat(f e_I) = J*f hat(e_i1) ^ ... ^ hat(e_ip)``."""
        if P.kind != "e":
            raise ValueError("hat() takes sections of wedge A")
        if P.rank != self.rank:
            raise ValueError("action table length differs from the rank of A")
        out = MultiVec(self.X)
        for key, f in P.comps.items():
            term = MultiVec.function(pullback(self.J, f))
            for i in key:
                term = wedge(term, self.fields[i])
            out = out + term
        return out

    def hat_function(self, f: Poly) -> Poly:
        return pullback(self.J, f)


def check_action(A: LieAlgebroidChart, act: ActionTable) -> Report:
    """Bracket compatibility ``hat([[e_i, e_j]]) = [hat e_i, hat e_j]`` and
    J-relatedness ``J_* hat(e_i) = rho(e_i) o J``."""
    rep = Report("action")
    if act.rank != A.rank:
        rep.fail("arity", (act.rank, A.rank), "action table length differs from rank of A")
        return rep
    if act.J.target != A.base:
        raise ChartMismatch("moment map target is not the algebroid base")
    for i, j in combinations(range(A.rank), 2):
        lhs = act.hat(A.C[i][j])
        rhs = schouten(act.fields[i], act.fields[j])
        if lhs != rhs:
            rep.fail("bracket", (f"e{i + 1}", f"e{j + 1}"), (lhs - rhs).render())
    for i in range(A.rank):
        pushed = act.J.push_vector(act.fields[i])
        for b in range(A.base.dim):
            want = pullback(act.J, A.anchor[i][(b,)])
            if pushed[b] != want:
                rep.fail("J-related", (f"e{i + 1}", A.base.vars[b]), (pushed[b] - want).render())
    return rep.finish()


@dataclass
class QuasiLieBialgebroidData:
    """``(A, delta, Omega)``; the defining identities are check targets."""

    algebroid: LieAlgebroidChart
    delta: Differential
    omega: Exterior

    def __post_init__(self):
        A = self.algebroid
        if self.delta.kind != "e" or self.delta.rank != A.rank or self.delta.chart != A.base:
            raise ValueError("delta must act on sections of wedge A")
        if self.omega.kind != "e" or self.omega.rank != A.rank or self.omega.degrees() - {3}:
            raise ValueError("Omega must be a section of wedge^3 A")

    @property
    def base(self) -> Chart:
        return self.algebroid.base

    @property
    def rank(self) -> int:
        return self.algebroid.rank

    def delta_function(self, f: Poly) -> Exterior:
        return self.delta.of_function(f)


def extend_two_differential(qlb: QuasiLieBialgebroidData, P: Exterior) -> Exterior:
    """Leibniz extension of delta to an arbitrary section of ``wedge A``."""
    if isinstance(P, Exterior) and P.comps and max(P.degrees()) > qlb.rank:
        raise DegreeError("degree exceeds the rank of A")
    return qlb.delta.apply(P)


def _coordinate(chart, rank, b):
    return Exterior(chart, rank, "e", {(): chart.coord(b)})


def check_two_differential(qlb: QuasiLieBialgebroidData) -> Report:
    """``delta [[P, Q]] = [[delta P, Q]] + (-1)**(p+1) [[P, delta Q]]`` on generator
    pairs, (generator, coordinate) pairs and coordinate pairs.

    Both sides are derivations in each argument, so by the Leibniz rule these
    cases propagate the identity to all sections.
    """
    rep = Report("two-differential")
    A, d = qlb.algebroid, qlb.delta
    r, S = A.rank, A.base
    gens = [(f"e{i + 1}", A.generator(i), 1) for i in range(r)]
    coords = [(S.vars[b], _coordinate(S, r, b), 0) for b in range(S.dim)]

    def test(P, Q):
        (np, Pv, p), (nq, Qv, _) = P, Q
        lhs = d(A.bracket(Pv, Qv))
        rhs = A.bracket(d(Pv), Qv)
        t = A.bracket(Pv, d(Qv))
        rhs = rhs + (t if (p + 1) % 2 == 0 else -t)
        if lhs != rhs:
            rep.fail("derivation of bracket", (np, nq), (lhs - rhs).render())

    for P, Q in combinations(gens, 2):
        test(P, Q)
    for P in gens:
        for Q in coords:
            test(P, Q)
    for P, Q in combinations(coords, 2):
        test(P, Q)
    return rep.finish()


def check_quasi_bialgebroid(qlb: QuasiLieBialgebroidData) -> Report:
    """``delta^2 = [[Omega, .]]`` on coordinates and generators, and ``delta Omega = 0``."""
    rep = Report("quasi-bialgebroid")
    A, d, om = qlb.algebroid, qlb.delta, qlb.omega
    r, S = A.rank, A.base
    for b in range(S.dim):
        f = _coordinate(S, r, b)
        lhs, rhs = d(d(f)), A.bracket(om, f)
        if lhs != rhs:
            rep.fail("delta squared", (S.vars[b],), (lhs - rhs).render())
    for i in range(r):
        e = A.generator(i)
        lhs, rhs = d(d(e)), A.bracket(om, e)
        if lhs != rhs:
            rep.fail("delta squared", (f"e{i + 1}",), (lhs - rhs).render())
    dom = d(om)
    if dom:
        rep.fail("delta Omega", (), dom.render())
    return rep.finish()


@dataclass
class DualStructure:
    """Anchor and generator brackets induced on ``A*`` by delta."""

    anchor: list
    structure: list
    bracket: GerstenhaberBracket


def dual_structure(qlb: QuasiLieBialgebroidData) -> DualStructure:
    """``rho_*(eps^i) f = <delta f, eps^i>`` and
    ``<[[eps^i, eps^j]]_*, e_k> = -<delta e_k, eps^i ^ eps^j>``."""
    A = qlb.algebroid
    r, S = A.rank, A.base
    anchor = [MultiVec(S, {(b,): qlb.delta.on_functions[b][(i,)] for b in range(S.dim)})
              for i in range(r)]
    structure = [[Exterior(S, r, "eps") for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            xi = Exterior(S, r, "eps", {(i, j): Poly.const(S, 1)})
            comps = {}
            for k in range(r):
                v = -interior_product(xi, qlb.delta.on_generators[k]).scalar_part()
                if v:
                    comps[(k,)] = v
            structure[i][j] = Exterior(S, r, "eps", comps)
    return DualStructure(anchor, structure, GerstenhaberBracket(S, r, "eps", anchor, structure))


def dual_bracket(qlb: QuasiLieBialgebroidData, xi1: Exterior, xi2: Exterior) -> Exterior:
    """``[[xi1, xi2]]_*`` on arbitrary degree-1 sections, from the defining formula
    ``<[[xi1, xi2]]_*, X> = rho_*(xi1)<xi2, X> - rho_*(xi2)<xi1, X> - <delta X, xi1 ^ xi2>``."""
    A = qlb.algebroid
    r, S = A.rank, A.base
    ds = dual_structure(qlb)
    rho1 = MultiVec(S)
    rho2 = MultiVec(S)
    for (i,), f in xi1.comps.items():
        rho1 = rho1 + ds.anchor[i] * f
    for (i,), f in xi2.comps.items():
        rho2 = rho2 + ds.anchor[i] * f
    wedge12 = wedge(xi1, xi2)
    comps = {}
    for k in range(r):
        v = rho1.apply(xi2[(k,)]) - rho2.apply(xi1[(k,)])
        dk = qlb.delta.on_generators[k]
        if dk and wedge12:
            v = v - interior_product(wedge12, dk).scalar_part()
        if v:
            comps[(k,)] = v
    return Exterior(S, r, "eps", comps)


def delta_from_bivector(chart: Chart, Pi: MultiVec) -> Differential:
    """``delta = [Pi, .]`` on ``A = TS`` through the symcalc Schouten bracket."""
    n = chart.dim
    on_f = [to_frame(schouten(Pi, MultiVec.function(chart.coord(b)))) for b in range(n)]
    on_g = [to_frame(schouten(Pi, MultiVec.partial(chart, i))) for i in range(n)]
    return Differential(chart, n, "e", on_f, on_g)


def tangent_qlb(chart: Chart, Pi: MultiVec, omega: Exterior | None = None) -> QuasiLieBialgebroidData:
    """``(TS, [Pi, .], Omega)``; Omega defaults to zero."""
    A = LieAlgebroidChart.tangent(chart)
    om = to_frame(omega) if omega is not None else Exterior(chart, chart.dim, "e")
    return QuasiLieBialgebroidData(A, delta_from_bivector(chart, Pi), om)


@dataclass
class DressingData:
    """A quasi-Lie bialgebra with the infinitesimal dressing action on ``S``:
    ``g_fields[i] = (e_i)_S`` and ``h_fields[i] = (eps^i)_S``."""

    quasi: QuasiLieBialgebra
    chart: Chart
    g_fields: list
    h_fields: list

    def __post_init__(self):
        n = self.quasi.dim
        if len(self.g_fields) != n or len(self.h_fields) != n:
            raise ValueError("both dressing tables need dim(g) vector fields")

    def lam(self, f: Poly) -> Exterior:
        """``lambda(df) = sum_i (eps^i)_S(f) e_i``."""
        return Exterior(self.chart, self.quasi.dim, "e",
                        {(i,): h.apply(f) for i, h in enumerate(self.h_fields)})


def transformation_from_quasitriple(d: DressingData) -> QuasiLieBialgebroidData:
    """The transformation quasi-Lie bialgebroid ``(g x S, delta, Omega)`` with
    ``delta f = lambda(df)`` and ``delta e_i = -F(e_i)``."""
    g = d.quasi.base
    S, n = d.chart, d.quasi.dim
    A = LieAlgebroidChart.transformation(g, S, d.g_fields)
    morph = check_algebroid_axioms(A)
    if morph.failed:
        raise ValueError(f"dressing g-action is not a Lie algebra action: {morph.witnesses[0]}")
    on_f = [d.lam(S.coord(b)) for b in range(S.dim)]
    on_g = [Exterior(S, n, "e", {jk: Poly.const(S, -v) for jk, v in d.quasi.cobracket(i).items()})
            for i in range(n)]
    omega = Exterior(S, n, "e", {k: Poly.const(S, v) for k, v in d.quasi.omega_upper().items()})
    return QuasiLieBialgebroidData(A, Differential(S, n, "e", on_f, on_g), omega)


def omega_section(chart: Chart, quasi: QuasiLieBialgebra) -> Exterior:
    return Exterior(chart, quasi.dim, "e",
                    {k: Poly.const(chart, v) for k, v in quasi.omega_upper().items()})


def cobracket_section(chart: Chart, quasi: QuasiLieBialgebra, i: int) -> Exterior:
    return Exterior(chart, quasi.dim, "e",
                    {jk: Poly.const(chart, v) for jk, v in quasi.cobracket(i).items()})
