"""Concrete Courant algebroids, Dirac structures and generalized Dirac
structures over graphs.

Every model is presented on a global frame ``sigma_1..sigma_2N`` of the bundle
with a constant pairing matrix ``G``, anchor fields ``rho(sigma_a)`` and the
table of frame brackets ``sigma_a o sigma_b``. The Dorfman bracket of general
sections then follows from axioms ii) and v):

    (f sigma_a) o (g sigma_b) = f g (sigma_a o sigma_b) + f rho_a(g) sigma_b
                                - g rho_b(f) sigma_a + 2 g G_ab D f

with ``D f = 1/2 sum rho_a(f) (G^-1)^{ab} sigma_b``, so that ``e o e = D(e|e)``
and ``(Df|e) = 1/2 rho(e) f``.

* standard model on ``TX + T*X``: frame ``d/dx_i, dx_i``, all frame brackets vanish;
* double of a quasi-Lie bialgebroid ``(A, delta, Omega)``: frame ``e_i, eps_i``
  with the generator brackets of the double formula;
* product of two models over the product chart.

The direct section-level formulas are kept as independent cross-checks
(:func:`standard_dorfman_direct`, :func:`double_dorfman_direct`).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import linalg
from .algebroid import QuasiLieBialgebroidData, dual_bracket, dual_structure
from .report import Report
from .symcalc import (Chart, ChartMismatch, DiffForm, Exterior, KindMismatch, MultiVec,
                      Poly, PolyMap, _join_terms, _term_string, de_rham, interior_product,
                      lie_derivative, restrict_to_graph, schouten, sharp, wedge)

HALF = Fraction(1, 2)


def _embed_vector(X: MultiVec, chart: Chart) -> MultiVec:
    """Push a vector field on a factor chart into a chart containing its variables."""
    return MultiVec(chart, {(chart.index(X.chart.vars[i]),): c.embed(chart)
                            for (i,), c in X.comps.items()})


def _render_coef_label(coef: Poly, label: str) -> str:
    if len(coef.terms) == 1:
        ((e, c),) = coef.terms.items()
        mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(coef.chart.vars, e) if k)
        return _term_string(c, f"{mono}*{label}" if mono else label)
    return f"({coef.render()})*{label}"


class SectionPair:
    """A section of a Courant model, stored as frame coefficients.

    ``parts()`` recovers the model-dependent pair: ``(vector field, form)`` for
    the standard model, ``(section of A, section of A*)`` for a double, and
    the two factor coefficient blocks for a product.
    """

    __slots__ = ("courant", "coeffs")

    def __init__(self, courant: "CourantChart", coeffs: Sequence):
        coeffs = tuple(c if isinstance(c, Poly) else Poly.const(courant.chart, c) for c in coeffs)
        if len(coeffs) != courant.size:
            raise ValueError(f"section needs {courant.size} coefficients, got {len(coeffs)}")
        for c in coeffs:
            if c.chart != courant.chart:
                raise ChartMismatch(f"section coefficient on {c.chart}, model lives on {courant.chart}")
        self.courant = courant
        self.coeffs = coeffs

    def _check(self, other):
        if not isinstance(other, SectionPair) or other.courant is not self.courant:
            if not (isinstance(other, SectionPair) and other.courant.labels == self.courant.labels
                    and other.courant.chart == self.courant.chart):
                raise KindMismatch("sections of different Courant models")

    def __add__(self, other):
        self._check(other)
        return SectionPair(self.courant, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return SectionPair(self.courant, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return SectionPair(self.courant, [-a for a in self.coeffs])

    def __mul__(self, f):
        if not isinstance(f, Poly):
            f = Poly.const(self.courant.chart, f)
        return SectionPair(self.courant, [a * f for a in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SectionPair):
            return NotImplemented
        return self.courant.labels == other.courant.labels and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not self

    def parts(self):
        C = self.courant
        N = C.size // 2
        if C.model == "standard":
            return (MultiVec.field(C.chart, self.coeffs[:N]), DiffForm.covector(C.chart, self.coeffs[N:]))
        if C.model == "double":
            r = C.qlb.rank
            return (Exterior(C.chart, r, "e", {(i,): c for i, c in enumerate(self.coeffs[:r])}),
                    Exterior(C.chart, r, "eps", {(i,): c for i, c in enumerate(self.coeffs[r:])}))
        k = C.factors[0].size
        return self.coeffs[:k], self.coeffs[k:]

    def restrict(self, J: PolyMap) -> tuple:
        """Coefficients restricted to ``graph J`` (as polynomials on ``J.source``)."""
        return tuple(restrict_to_graph(c, J) for c in self.coeffs)

    def render(self) -> str:
        parts = [_render_coef_label(c, lab) for c, lab in zip(self.coeffs, self.courant.labels) if c]
        return _join_terms(parts) if parts else "0"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"SectionPair({self.render()!r})"


class CourantChart:
    """A Courant algebroid model on a global frame over ``chart``."""

    def __init__(self, model: str, chart: Chart, labels: Sequence[str], pairing, anchors,
                 table, factors=(), qlb: QuasiLieBialgebroidData | None = None):
        self.model = model
        self.chart = chart
        self.labels = tuple(labels)
        self.size = len(self.labels)
        if self.size % 2:
            raise ValueError("a Courant model has even rank")
        self.G = [[Fraction(x) for x in row] for row in pairing]
        if any(self.G[a][b] != self.G[b][a] for a in range(self.size) for b in range(self.size)):
            raise ValueError("pairing matrix is not symmetric")
        self.Ginv = linalg.inverse(self.G)
        self.anchors = list(anchors)
        self.table = table
        self.factors = tuple(factors)
        self.qlb = qlb

    def __repr__(self):
        return f"CourantChart({self.model}, {self.chart}, rank {self.size})"

    # -- sections

    def section(self, coeffs) -> SectionPair:
        return SectionPair(self, coeffs)

    def zero(self) -> SectionPair:
        return SectionPair(self, [0] * self.size)

    def unit(self, a: int) -> SectionPair:
        return SectionPair(self, [int(b == a) for b in range(self.size)])

    def pair(self, first: Exterior, second: Exterior) -> SectionPair:
        """Section from its two halves (standard or double model)."""
        if self.model == "product":
            raise KindMismatch("use join() for product sections")
        N = self.size // 2
        a = [first[(i,)] for i in range(N)]
        b = [second[(i,)] for i in range(N)]
        for x in (first, second):
            if x.chart != self.chart:
                raise ChartMismatch("section halves on the wrong chart")
        if self.model == "standard" and (first.kind, second.kind) != ("vec", "form"):
            raise KindMismatch("standard sections are (vector field, 1-form)")
        if self.model == "double" and (first.kind, second.kind) != ("e", "eps"):
            raise KindMismatch("double sections are (section of A, section of A*)")
        return SectionPair(self, a + b)

    def join(self, s1: SectionPair, s2: SectionPair) -> SectionPair:
        """Product section from sections of the two factors (coefficients embedded)."""
        if self.model != "product":
            raise KindMismatch("join() needs a product model")
        c1 = [c.embed(self.chart) for c in s1.coeffs]
        c2 = [c.embed(self.chart) for c in s2.coeffs]
        return SectionPair(self, c1 + c2)

    def embed(self, s: SectionPair, which: int) -> SectionPair:
        """A factor section as a product section (zero in the other factor)."""
        other = self.factors[1 - which]
        z = SectionPair(other, [0] * other.size)
        return self.join(s, z) if which == 0 else self.join(z, s)

    def render(self, s: SectionPair) -> str:
        return s.render()

    # -- structure maps

    def pairing(self, e1: SectionPair, e2: SectionPair) -> Poly:
        out = Poly.zero(self.chart)
        for a, f in enumerate(e1.coeffs):
            if not f:
                continue
            for b, g in enumerate(e2.coeffs):
                if g and self.G[a][b]:
                    out = out + f * g * self.G[a][b]
        return out

    def anchor(self, e: SectionPair) -> MultiVec:
        out = MultiVec(self.chart)
        for a, f in enumerate(e.coeffs):
            if f and self.anchors[a]:
                out = out + self.anchors[a] * f
        return out

    def d_operator(self, f: Poly) -> SectionPair:
        grads = [X.apply(f) if X else Poly.zero(self.chart) for X in self.anchors]
        coeffs = []
        for b in range(self.size):
            c = Poly.zero(self.chart)
            for a in range(self.size):
                if grads[a] and self.Ginv[a][b]:
                    c = c + grads[a] * (self.Ginv[a][b] * HALF)
            coeffs.append(c)
        return SectionPair(self, coeffs)

    def dorfman(self, e1: SectionPair, e2: SectionPair) -> SectionPair:
        n = self.size
        out = [Poly.zero(self.chart)] * n
        for a, f in enumerate(e1.coeffs):
            if not f:
                continue
            for b, g in enumerate(e2.coeffs):
                t = self.table[a][b]
                if g and t is not None:
                    fg = f * g
                    out = [o + fg * c if c else o for o, c in zip(out, t)]
        X1, X2 = self.anchor(e1), self.anchor(e2)
        if X1:
            out = [o + X1.apply(g) for o, g in zip(out, e2.coeffs)]
        if X2:
            out = [o - X2.apply(f) for o, f in zip(out, e1.coeffs)]
        for a, f in enumerate(e1.coeffs):
            if not f:
                continue
            w = Poly.zero(self.chart)
            for b, g in enumerate(e2.coeffs):
                if g and self.G[a][b]:
                    w = w + g * self.G[a][b]
            if w:
                Df = self.d_operator(f)
                out = [o + c * w * 2 if c else o for o, c in zip(out, Df.coeffs)]
        return SectionPair(self, out)

    def courant_bracket(self, e1: SectionPair, e2: SectionPair) -> SectionPair:
        return (self.dorfman(e1, e2) - self.dorfman(e2, e1)) * HALF


def dorfman_bracket(C: CourantChart, e1: SectionPair, e2: SectionPair) -> SectionPair:
    return C.dorfman(e1, e2)


def courant_bracket(C: CourantChart, e1: SectionPair, e2: SectionPair) -> SectionPair:
    return C.courant_bracket(e1, e2)


def d_operator(C: CourantChart, f: Poly) -> SectionPair:
    return C.d_operator(f)


def _standard_pairing(N: int):
    G = [[Fraction(0)] * (2 * N) for _ in range(2 * N)]
    for i in range(N):
        G[i][N + i] = G[N + i][i] = HALF
    return G


def standard_courant(chart: Chart) -> CourantChart:
    """``TX + T*X`` with the pairing ``1/2(a1(X2) + a2(X1))`` and the bracket
    ``([X1, X2], L_X1 a2 - i_X2 d a1)``."""
    n = chart.dim
    labels = [f"d/d{v}" for v in chart.vars] + [f"d{v}" for v in chart.vars]
    anchors = [MultiVec.partial(chart, i) for i in range(n)] + [MultiVec(chart)] * n
    table = [[None] * (2 * n) for _ in range(2 * n)]
    return CourantChart("standard", chart, labels, _standard_pairing(n), anchors, table)


def double_courant(qlb: QuasiLieBialgebroidData) -> CourantChart:
    """``A + A*`` with anchor ``rho + rho_*`` and the double bracket of ``(A, delta, Omega)``."""
    A = qlb.algebroid
    S, r = A.base, A.rank
    ds = dual_structure(qlb)
    dA = A.differential
    labels = [f"e{i + 1}" for i in range(r)] + [f"eps{i + 1}" for i in range(r)]
    anchors = list(A.anchor) + list(ds.anchor)

    def vec(a_part: Exterior | None, xi_part: Exterior | None):
        a = [a_part[(i,)] for i in range(r)] if a_part is not None else [Poly.zero(S)] * r
        x = [xi_part[(i,)] for i in range(r)] if xi_part is not None else [Poly.zero(S)] * r
        out = a + x
        return out if any(out) else None

    def contract(arg, P):
        if not P or not arg:
            return Exterior(S, r, P.kind)
        return interior_product(arg, P)

    eps = [A.generator(i, "eps") for i in range(r)]
    gen = [A.generator(i) for i in range(r)]
    dA_eps = [dA.on_generators[i] for i in range(r)]
    table = [[None] * (2 * r) for _ in range(2 * r)]
    for i in range(r):
        for j in range(r):
            table[i][j] = vec(A.C[i][j], None)
            table[i][r + j] = vec(-contract(eps[j], qlb.delta.on_generators[i]),
                                  contract(gen[i], dA_eps[j]))
            table[r + i][j] = vec(contract(eps[i], qlb.delta.on_generators[j]),
                                  -contract(gen[j], dA_eps[i]))
            om = contract(wedge(eps[i], eps[j]), qlb.omega) if i != j else None
            table[r + i][r + j] = vec(om, ds.structure[i][j])
    return CourantChart("double", S, labels, _standard_pairing(r), anchors, table, qlb=qlb)


def product_courant(C1: CourantChart, C2: CourantChart, name: str | None = None) -> CourantChart:
    """Componentwise pairing, anchor and bracket over the product chart."""
    clash = set(C1.chart.vars) & set(C2.chart.vars)
    if clash:
        raise ChartMismatch(f"chart collision in product: {sorted(clash)}")
    chart = C1.chart.product(C2.chart, name)
    n1, n2 = C1.size, C2.size
    G = [[Fraction(0)] * (n1 + n2) for _ in range(n1 + n2)]
    for a in range(n1):
        for b in range(n1):
            G[a][b] = C1.G[a][b]
    for a in range(n2):
        for b in range(n2):
            G[n1 + a][n1 + b] = C2.G[a][b]
    anchors = [_embed_vector(X, chart) for X in C1.anchors] + [_embed_vector(X, chart) for X in C2.anchors]
    table = [[None] * (n1 + n2) for _ in range(n1 + n2)]
    zero = Poly.zero(chart)
    for a in range(n1):
        for b in range(n1):
            t = C1.table[a][b]
            if t is not None:
                table[a][b] = [c.embed(chart) for c in t] + [zero] * n2
    for a in range(n2):
        for b in range(n2):
            t = C2.table[a][b]
            if t is not None:
                table[n1 + a][n1 + b] = [zero] * n1 + [c.embed(chart) for c in t]
    labels = [f"{lab}" for lab in C1.labels] + [f"{lab}" for lab in C2.labels]
    return CourantChart("product", chart, labels, G, anchors, table, factors=(C1, C2))


def opposite_courant(C: CourantChart) -> CourantChart:
    """Same anchor and bracket, pairing negated. D flips sign with the pairing,
    so the Dorfman table is unchanged."""
    G = [[-x for x in row] for row in C.G]
    return CourantChart(C.model, C.chart, C.labels, G, C.anchors, C.table, C.factors, C.qlb)


def assemble_courant(model: str, *args, **kw) -> CourantChart:
    """``assemble_courant('standard', chart)``, ``('double', qlb)`` or ``('product', C1, C2)``."""
    builders = {"standard": standard_courant, "double": double_courant, "product": product_courant}
    if model not in builders:
        raise ValueError(f"unknown Courant model {model!r}")
    return builders[model](*args, **kw)


# ---------------------------------------------------------------------------
# direct formulas, used as independent cross-checks of the frame engine


def standard_dorfman_direct(X1: MultiVec, a1: DiffForm, X2: MultiVec, a2: DiffForm):
    """``([X1, X2], L_X1 a2 - i_X2 d a1)``."""
    form = lie_derivative(X1, a2) if X1 else DiffForm(X1.chart)
    da1 = de_rham(a1)
    if X2 and da1:
        form = form - interior_product(X2, da1)
    return schouten(X1, X2), form


def double_dorfman_direct(qlb: QuasiLieBialgebroidData, a1: Exterior, xi1: Exterior,
                          a2: Exterior, xi2: Exterior):
    """The double bracket on general sections:

    A-part   ``[[a1, a2]] - i_xi2 delta a1 + L_xi1 a2 + (xi1 ^ xi2) _| Omega``,
    A*-part  ``[[xi1, xi2]]_* - i_a2 d_A xi1 + L_a1 xi2``,

    with ``L_xi a = i_xi delta a + delta(i_xi a)`` and ``L_a xi = i_a d_A xi + d_A(i_a xi)``.
    """
    A = qlb.algebroid
    d, dA = qlb.delta, A.differential

    def ip(arg, P):
        if not arg or not P:
            return Exterior(P.chart, P.rank, P.kind)
        return interior_product(arg, P)

    def lie_xi(xi, a):
        return ip(xi, d(a)) + d(ip(xi, a))

    def lie_a(a, xi):
        return ip(a, dA(xi)) + dA(ip(a, xi))

    a_part = A.bracket(a1, a2) - ip(xi2, d(a1)) + lie_xi(xi1, a2)
    w = wedge(xi1, xi2)
    if w:
        a_part = a_part + ip(w, qlb.omega)
    x_part = dual_bracket(qlb, xi1, xi2) - ip(a2, dA(xi1)) + lie_a(a1, xi2)
    return a_part.part(1), x_part.part(1)


# ---------------------------------------------------------------------------
# Courant axioms


def random_section(C: CourantChart, rng: random.Random, degree: int = 2, density: float = 0.5):
    coeffs = [linalg.random_poly(C.chart, rng, degree) if rng.random() < density else 0
              for _ in range(C.size)]
    return SectionPair(C, coeffs)


def check_courant_axioms(C: CourantChart, trials: int = 100, seed: int = 0, degree: int = 2) -> Report:
    """Axioms on ``trials`` pseudo-random section triples (coefficient degree <= ``degree``):

    i)   ``e1 o (e2 o e3) = (e1 o e2) o e3 + e2 o (e1 o e3)``
    ii)  ``e o e = D(e|e)``
    iii) ``rho(e)(e1|e2) = (e o e1|e2) + (e1|e o e2)``
    iv)  ``rho(e1 o e2) = [rho(e1), rho(e2)]``
    v)   ``e1 o (f e2) = f (e1 o e2) + rho(e1)(f) e2``

    Only the first failing trial per axiom is recorded as a witness.
    """
    rep = Report("courant-axioms")
    rng = random.Random(seed)
    failed: set = set()

    def fail(ax, t, residual):
        if ax not in failed:
            failed.add(ax)
            rep.fail(f"axiom {ax}", (f"trial {t}",), residual)

    for t in range(trials):
        e1, e2, e3 = (random_section(C, rng, degree) for _ in range(3))
        f = linalg.random_poly(C.chart, rng, degree)
        d12 = C.dorfman(e1, e2)
        if "i" not in failed:
            lhs = C.dorfman(e1, C.dorfman(e2, e3))
            rhs = C.dorfman(d12, e3) + C.dorfman(e2, C.dorfman(e1, e3))
            if lhs != rhs:
                fail("i", t, (lhs - rhs).render())
        if "ii" not in failed:
            r = C.dorfman(e1, e1) - C.d_operator(C.pairing(e1, e1))
            if r:
                fail("ii", t, r.render())
        if "iii" not in failed:
            r = (C.anchor(e1).apply(C.pairing(e2, e3)) - C.pairing(C.dorfman(e1, e2), e3)
                 - C.pairing(e2, C.dorfman(e1, e3)))
            if r:
                fail("iii", t, r.render())
        if "iv" not in failed:
            r = C.anchor(d12) - schouten(C.anchor(e1), C.anchor(e2))
            if r:
                fail("iv", t, r.render())
        if "v" not in failed:
            r = C.dorfman(e1, e2 * f) - d12 * f - e2 * C.anchor(e1).apply(f)
            if r:
                fail("v", t, r.render())
    rep.data["trials"] = trials
    return rep.finish()


# ---------------------------------------------------------------------------
# Dirac structures


class GraphMap(PolyMap):
    """``J : X -> S``; its graph is the base of a generalized Dirac structure."""


@dataclass
class LagrangianFrame:
    courant: CourantChart
    sections: list
    labels: list | None = None
    graph: PolyMap | None = None

    def __post_init__(self):
        if self.labels is None:
            self.labels = [f"l{i + 1}" for i in range(len(self.sections))]
        for s in self.sections:
            if s.courant.labels != self.courant.labels or s.courant.chart != self.courant.chart:
                raise KindMismatch("frame section from another Courant model")

    def __len__(self):
        return len(self.sections)


def _frame_rank(C, sections, points, restrict=None) -> list[int]:
    ranks = []
    for pt in points:
        rows = []
        for s in sections:
            coeffs = restrict(s) if restrict else s.coeffs
            rows.append([c.evaluate(pt) for c in coeffs])
        ranks.append(linalg.rank(rows, C.size))
    return ranks


def _closure(rep, C, L, restrict, bracket):
    br = C.dorfman if bracket == "dorfman" else C.courant_bracket
    n = len(L.sections)
    for i, j in combinations(range(n), 2):
        b = br(L.sections[i], L.sections[j])
        for k in range(n):
            r = C.pairing(b, L.sections[k])
            if restrict:
                r = restrict(r)
            if r:
                rep.fail("closure", (L.labels[i], L.labels[j], L.labels[k]), r.render())


def _isotropy(rep, C, L, restrict):
    n = len(L.sections)
    for i in range(n):
        for j in range(i, n):
            r = C.pairing(L.sections[i], L.sections[j])
            if restrict:
                r = restrict(r)
            if r:
                rep.fail("isotropy", (L.labels[i], L.labels[j]), r.render())


def check_dirac(C: CourantChart, L: LagrangianFrame, points: int = 25, seed: int = 0,
                bracket: str = "dorfman", locus=()) -> Report:
    """Isotropy and closure as exact identities, maximality by pointwise rank.

    Closure uses ``(l_i o l_j | l_k) = 0``: a Lagrangian subbundle equals its
    orthogonal, so this is equivalent to ``l_i o l_j`` lying in ``L``.
    """
    if 2 * len(L) != C.size:
        raise ValueError(f"frame has {len(L)} sections, need {C.size // 2}")
    rep = Report("dirac")
    _isotropy(rep, C, L, None)
    pts, skipped = linalg.sample_points(C.chart, points, seed, locus)
    for pt, rk in zip(pts, _frame_rank(C, L.sections, pts)):
        if rk != len(L):
            rep.fail("rank", (linalg.format_point(C.chart, pt),), f"rank {rk}")
    if skipped:
        rep.note(f"skipped {len(skipped)} sample points on the degeneracy locus")
    _closure(rep, C, L, None, bracket)
    return rep.finish()


def check_generalized_dirac(C: CourantChart, F: LagrangianFrame, points: int = 25, seed: int = 0,
                            bracket: str = "dorfman", locus=()) -> Report:
    """Generalized Dirac structure over ``Q = graph J`` in a product model.

    Sections are given on all of ``S x X`` (any extension of the frame off Q);
    every identity is evaluated after the substitution ``s := J(x)``.
    (i) anchor compatibility: the S-component of ``rho(f)`` equals ``J_*`` of
    the X-component on Q. (ii) closure: ``({f_i, f_j}|f_k) = 0`` on Q. Once
    (i) holds, any section vanishing on Q has bracket with a frame section whose
    pairing with the frame vanishes on Q, so the verdict does not depend on
    the chosen extension.
    """
    if C.model != "product":
        raise KindMismatch("generalized Dirac structures are checked in a product model")
    J = F.graph
    if J is None:
        raise ValueError("frame has no graph map")
    if 2 * len(F) != C.size:
        raise ValueError(f"frame has {len(F)} sections, need {C.size // 2}")
    S, X = J.target, J.source
    rep = Report("generalized-dirac")

    def restrict(p):
        return restrict_to_graph(p, J)

    _isotropy(rep, C, F, restrict)
    for lab, s in zip(F.labels, F.sections):
        v = C.anchor(s)
        xpart = MultiVec.field(X, [restrict(v[(C.chart.index(x),)]) for x in X.vars])
        pushed = J.push_vector(xpart)
        for b, sv in enumerate(S.vars):
            r = restrict(v[(C.chart.index(sv),)]) - pushed[b]
            if r:
                rep.fail("anchor", (lab, sv), r.render())
    pts, skipped = linalg.sample_points(X, points, seed, locus)
    for pt, rk in zip(pts, _frame_rank(C, F.sections, pts, lambda s: s.restrict(J))):
        if rk != len(F):
            rep.fail("rank", (linalg.format_point(X, pt),), f"rank {rk}")
    if skipped:
        rep.note(f"skipped {len(skipped)} sample points on the degeneracy locus")
    _closure(rep, C, F, restrict, bracket)
    return rep.finish()


# ---------------------------------------------------------------------------


class BivectorTwist:
    """``(v, a) -> (Pi#(a) + v, a)`` on the standard model of ``Pi``'s chart."""

    def __init__(self, C: CourantChart, Pi: MultiVec):
        if C.model != "standard" or Pi.chart != C.chart:
            raise KindMismatch("the twist acts on the standard model of the bivector's chart")
        self.courant = C
        self.Pi = Pi

    def __call__(self, s: SectionPair) -> SectionPair:
        v, a = s.parts()
        return self.courant.pair(sharp(self.Pi, a) + v if a else v, a)


def twist_by_bivector(C: CourantChart, Pi: MultiVec) -> BivectorTwist:
    return BivectorTwist(C, Pi)


def graph_frame(C: CourantChart, Pi: MultiVec) -> LagrangianFrame:
    """``{(Pi# dx_j, dx_j)}``: the graph of a bivector as a Lagrangian frame."""
    tw = twist_by_bivector(C, Pi)
    n = C.chart.dim
    secs = [tw(C.pair(MultiVec(C.chart), DiffForm.covector(C.chart, [int(i == j) for i in range(n)])))
            for j in range(n)]
    return LagrangianFrame(C, secs, [f"d{v}" for v in C.chart.vars])


def tangent_frame(C: CourantChart) -> LagrangianFrame:
    n = C.chart.dim
    return LagrangianFrame(C, [C.unit(i) for i in range(n)], [f"d/d{v}" for v in C.chart.vars])
