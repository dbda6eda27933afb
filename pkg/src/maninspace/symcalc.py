"""Exact polynomial coefficients and Cartan/Schouten calculus on a coordinate chart.

Everything here is exact: coefficients are :class:`fractions.Fraction` and two
objects are mathematically equal iff they compare equal.

Graded objects (multivector fields, differential forms, and sections of the
exterior algebra of an abstract frame ``e1..er`` / ``eps1..epsr``) share one
storage class, :class:`Exterior`: a map from strictly increasing generator
index tuples to :class:`Poly` coefficients.

Sign conventions
----------------
* Schouten bracket: ``[X, f] = X(f)``, ``[X, Y]`` is the Lie bracket,
  ``[P, Q] = -(-1)**((p-1)*(q-1)) [Q, P]`` and
  ``[P, Q^R] = [P, Q]^R + (-1)**((p-1)*q) Q^[P, R]``.
  Consequently ``[Pi, f] = -Pi#(df)`` with ``<b, Pi#(a)> = Pi(a, b)``.
* Contraction by a wedge of covectors is iterated from the left factor:
  ``(xi1 ^ xi2) _| P = i(xi2) i(xi1) P``; each ``i(xi)`` is a graded
  derivation acting from the left.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence


class ChartMismatch(ValueError):
    pass


class KindMismatch(ValueError):
    pass


class DegreeError(ValueError):
    pass


def rat(value) -> Fraction:
    """Coerce ints, strings like ``'1/2'`` and Fractions to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use Fraction or str")
    return Fraction(value)


@dataclass(frozen=True)
class Chart:
    """A single polynomial coordinate chart: a name and ordered variable names."""

    name: str
    vars: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"duplicate variable names in chart {self.name}")

    @property
    def dim(self) -> int:
        return len(self.vars)

    def index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise ChartMismatch(f"{var!r} is not a coordinate of chart {self.name}") from None

    def coord(self, var: str | int) -> "Poly":
        i = var if isinstance(var, int) else self.index(var)
        return Poly.monomial(self, _unit(self.dim, i))

    def coords(self) -> list["Poly"]:
        return [self.coord(i) for i in range(self.dim)]

    def product(self, other: "Chart", name: str | None = None) -> "Chart":
        clash = set(self.vars) & set(other.vars)
        if clash:
            raise ChartMismatch(f"charts {self.name} and {other.name} share variables {sorted(clash)}")
        return Chart(name or f"{self.name}x{other.name}", self.vars + other.vars)

    def __str__(self):
        return f"{self.name}({', '.join(self.vars)})"


def _unit(n: int, i: int) -> tuple[int, ...]:
    e = [0] * n
    e[i] = 1
    return tuple(e)


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Sparse multivariate polynomial with rational coefficients on a chart.

    ``terms`` maps exponent tuples (one entry per chart variable) to nonzero
    Fractions. Instances are treated as immutable.
    """

    __slots__ = ("chart", "terms", "_hash")

    def __init__(self, chart: Chart, terms: Mapping[tuple[int, ...], Fraction] | None = None):
        self.chart = chart
        clean = {}
        if terms:
            n = chart.dim
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match chart {chart}")
                c = rat(c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, chart, terms):
        p = cls.__new__(cls)
        p.chart = chart
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, chart: Chart, c) -> "Poly":
        c = rat(c)
        return cls._raw(chart, {(0,) * chart.dim: c} if c else {})

    @classmethod
    def zero(cls, chart: Chart) -> "Poly":
        return cls._raw(chart, {})

    @classmethod
    def monomial(cls, chart: Chart, exp, c=1) -> "Poly":
        return cls(chart, {tuple(exp): rat(c)})

    # -- structure

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.chart.dim, Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.chart == other.chart and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.chart != self.chart:
                raise ChartMismatch(f"polynomials on different charts {self.chart} and {other.chart}")
            return other
        if isinstance(other, (int, Fraction, str)):
            return Poly.const(self.chart, other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    # -- arithmetic

    def __add__(self, other):
        if isinstance(other, Exterior):
            return NotImplemented
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.chart, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.chart, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, Exterior):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Exterior):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            c = rat(other)
            if not c:
                return Poly.zero(self.chart)
            return Poly._raw(self.chart, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.chart)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Poly._raw(self.chart, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = rat(other)
        return self * (1 / c)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = Poly.const(self.chart, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- calculus

    def diff(self, var: int | str) -> "Poly":
        i = var if isinstance(var, int) else self.chart.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return Poly._raw(self.chart, out)

    def gradient(self) -> list["Poly"]:
        return [self.diff(i) for i in range(self.chart.dim)]

    def __call__(self, point) -> Fraction:
        return self.evaluate(point)

    def evaluate(self, point) -> Fraction:
        """Evaluate at a point given as a sequence or a ``{var: value}`` map."""
        if isinstance(point, Mapping):
            point = [rat(point[v]) for v in self.chart.vars]
        else:
            point = [rat(v) for v in point]
        if len(point) != self.chart.dim:
            raise ChartMismatch("point has wrong dimension")
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= x**k
            total += t
        return total

    def compose(self, images: Sequence["Poly"]) -> "Poly":
        """Substitute each chart variable by the matching polynomial in ``images``.

        All images must live on one common chart, which becomes the result chart.
        """
        if len(images) != self.chart.dim:
            raise ChartMismatch(
                f"substitution needs {self.chart.dim} images, got {len(images)}")
        if not images:
            raise ChartMismatch("cannot infer target chart from an empty substitution")
        target = images[0].chart
        for im in images:
            if im.chart != target:
                raise ChartMismatch("substitution images live on different charts")
        powers: list[dict[int, Poly]] = [{0: Poly.const(target, 1)} for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * images[i]
            return cache[k]

        result = Poly.zero(target)
        for e, c in self.terms.items():
            t = Poly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            result = result + t
        return result

    def embed(self, chart: Chart) -> "Poly":
        """Re-express on a chart containing all of this chart's variables."""
        if chart == self.chart:
            return self
        idx = [chart.index(v) for v in self.chart.vars]
        n = chart.dim
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for j, k in zip(idx, e):
                ne[j] = k
            out[tuple(ne)] = c
        return Poly._raw(chart, out)

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for v, k in zip(self.chart.vars, e):
                if k:
                    used.add(v)
        return used

    # -- rendering

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.chart.vars, e) if k)
            parts.append(_term_string(c, mono))
        return _join_terms(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Poly({self.render()!r} on {self.chart.name})"


def _coef_string(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _term_string(c: Fraction, body: str) -> str:
    if not body:
        return _coef_string(c)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{_coef_string(c)}*{body}"


def _join_terms(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


# ---------------------------------------------------------------------------
# exterior algebra


def merge_sign(a: tuple[int, ...], b: tuple[int, ...]):
    """Sorted union of two strictly increasing index tuples and the sign of the
    shuffle, or ``(None, 0)`` when they share an index."""
    if not a:
        return b, 1
    if not b:
        return a, 1
    sb = set(b)
    if any(i in sb for i in a):
        return None, 0
    inversions = 0
    for i in a:
        for j in b:
            if i > j:
                inversions += 1
    return tuple(sorted(a + b)), (-1 if inversions & 1 else 1)


def sort_sign(idx: Sequence[int]):
    """Sort a sequence of generator indices; return (key, sign) or (None, 0)."""
    if len(set(idx)) != len(idx):
        return None, 0
    idx = list(idx)
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return tuple(idx), sign


DUAL_KIND = {"vec": "form", "form": "vec", "e": "eps", "eps": "e"}


class Exterior:
    """An element of the exterior algebra over a rank-``rank`` frame with
    polynomial coefficients on ``chart``.

    ``kind`` names the frame: ``'vec'`` (coordinate vector fields),
    ``'form'`` (coordinate differentials), ``'e'`` or ``'eps'`` (an abstract
    bundle frame and its dual). Components are keyed by strictly increasing
    0-based index tuples; the empty key holds the degree-0 part.
    """

    __slots__ = ("chart", "rank", "kind", "comps")

    def __init__(self, chart: Chart, rank: int, kind: str,
                 comps: Mapping[tuple[int, ...], Poly] | None = None):
        if kind not in DUAL_KIND:
            raise KindMismatch(f"unknown frame kind {kind!r}")
        self.chart = chart
        self.rank = rank
        self.kind = kind
        clean: dict[tuple[int, ...], Poly] = {}
        for key, p in (comps or {}).items():
            key, sign = sort_sign(tuple(key))
            if key is None:
                continue
            if key and (key[0] < 0 or key[-1] >= rank):
                raise DegreeError(f"generator index out of range in {key} (rank {rank})")
            if not isinstance(p, Poly):
                p = Poly.const(chart, p)
            elif p.chart != chart:
                raise ChartMismatch(f"coefficient on {p.chart}, expected {chart}")
            if sign < 0:
                p = -p
            if key in clean:
                p = clean[key] + p
            if p:
                clean[key] = p
            else:
                clean.pop(key, None)
        self.comps = clean

    def _new(self, comps):
        out = object.__new__(type(self))
        out.chart = self.chart
        out.rank = self.rank
        out.kind = self.kind
        out.comps = {k: v for k, v in comps.items() if v}
        return out

    def like(self, comps) -> "Exterior":
        return self._new(comps)

    @classmethod
    def generator(cls, chart, rank, kind, i, coef=1) -> "Exterior":
        c = coef if isinstance(coef, Poly) else Poly.const(chart, coef)
        return Exterior(chart, rank, kind, {(i,): c})

    @classmethod
    def scalar(cls, chart, rank, kind, f) -> "Exterior":
        f = f if isinstance(f, Poly) else Poly.const(chart, f)
        return Exterior(chart, rank, kind, {(): f})

    def zero_like(self):
        return self._new({})

    # -- structure

    def degrees(self) -> set[int]:
        return {len(k) for k in self.comps}

    def degree(self) -> int:
        """Degree of a homogeneous element (0 for the zero element)."""
        ds = self.degrees()
        if len(ds) > 1:
            raise DegreeError("element is not homogeneous")
        return ds.pop() if ds else 0

    def homogeneous_parts(self):
        parts: dict[int, dict] = {}
        for k, v in self.comps.items():
            parts.setdefault(len(k), {})[k] = v
        return {d: self._new(c) for d, c in sorted(parts.items())}

    def part(self, degree: int):
        return self._new({k: v for k, v in self.comps.items() if len(k) == degree})

    def __getitem__(self, key) -> Poly:
        if isinstance(key, int):
            key = (key,)
        key, sign = sort_sign(tuple(key))
        if key is None:
            return Poly.zero(self.chart)
        p = self.comps.get(key)
        if p is None:
            return Poly.zero(self.chart)
        return p if sign > 0 else -p

    def vector(self) -> list[Poly]:
        """Coefficient list of a degree-1 element."""
        return [self[(i,)] for i in range(self.rank)]

    def scalar_part(self) -> Poly:
        return self.comps.get((), Poly.zero(self.chart))

    def is_zero(self) -> bool:
        return not self.comps

    def __bool__(self):
        return bool(self.comps)

    def _check(self, other: "Exterior"):
        if not isinstance(other, Exterior):
            raise TypeError(f"expected an exterior element, got {type(other).__name__}")
        if other.kind != self.kind:
            raise KindMismatch(f"cannot combine {self.kind!r} and {other.kind!r} elements")
        if other.chart != self.chart:
            raise ChartMismatch(f"elements on different charts {self.chart} and {other.chart}")
        if other.rank != self.rank:
            raise KindMismatch("frames of different rank")

    def __eq__(self, other):
        if not isinstance(other, Exterior):
            if isinstance(other, int) and other == 0:
                return self.is_zero()
            return NotImplemented
        return (self.kind == other.kind and self.chart == other.chart
                and self.rank == other.rank and self.comps == other.comps)

    def __hash__(self):
        return hash((self.kind, self.chart, self.rank, frozenset(self.comps.items())))

    # -- linear structure

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = out[k] + v if k in out else v
        return self._new(out)

    def __radd__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __neg__(self):
        return self._new({k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        """Multiply by a function (Poly) or a rational constant."""
        if isinstance(f, Exterior):
            raise TypeError("use wedge() or '&' for the exterior product")
        if isinstance(f, Poly):
            if f.chart != self.chart:
                raise ChartMismatch("coefficient function on a different chart")
            return self._new({k: v * f for k, v in self.comps.items()})
        c = rat(f)
        return self._new({k: v * c for k, v in self.comps.items()})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / rat(c))

    def __and__(self, other):
        return wedge(self, other)

    def map_coefficients(self, fn) -> "Exterior":
        return self._new({k: fn(v) for k, v in self.comps.items()})

    # -- rendering

    def generator_name(self, i: int) -> str:
        if self.kind == "vec":
            return f"d/d{self.chart.vars[i]}"
        if self.kind == "form":
            return f"d{self.chart.vars[i]}"
        return f"{self.kind}{i + 1}"

    def render(self) -> str:
        if not self.comps:
            return "0"
        parts = []
        for key in sorted(self.comps, key=lambda k: (len(k), k)):
            coef = self.comps[key]
            gens = "&".join(self.generator_name(i) for i in key)
            if not gens:
                parts.extend(_split_terms(coef.render()))
                continue
            if len(coef.terms) == 1:
                ((e, c),) = coef.terms.items()
                mono = "*".join(v if k == 1 else f"{v}^{k}"
                                for v, k in zip(coef.chart.vars, e) if k)
                body = f"{mono}*{gens}" if mono else gens
                parts.append(_term_string(c, body))
            else:
                parts.append(f"({coef.render()})*{gens}")
        return _join_terms(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"{type(self).__name__}({self.render()!r})"


def _split_terms(s: str) -> list[str]:
    return s.replace(" - ", " + -").split(" + ")


class MultiVec(Exterior):
    """Polynomial multivector field on a chart (frame ``d/dx_i``)."""

    __slots__ = ()

    def __init__(self, chart: Chart, comps=None):
        super().__init__(chart, chart.dim, "vec", comps)

    @classmethod
    def field(cls, chart: Chart, coeffs: Sequence) -> "MultiVec":
        """Vector field from a list of coefficient polynomials."""
        return cls(chart, {(i,): c for i, c in enumerate(coeffs)})

    @classmethod
    def function(cls, f: Poly) -> "MultiVec":
        return cls(f.chart, {(): f})

    @classmethod
    def partial(cls, chart: Chart, var) -> "MultiVec":
        i = var if isinstance(var, int) else chart.index(var)
        return cls(chart, {(i,): Poly.const(chart, 1)})

    def apply(self, f: Poly) -> Poly:
        """Directional derivative X(f) for a vector field X."""
        out = Poly.zero(self.chart)
        for key, c in self.comps.items():
            if len(key) != 1:
                raise DegreeError("apply() needs a vector field")
            out = out + c * f.diff(key[0])
        return out


class DiffForm(Exterior):
    """Polynomial differential form on a chart (frame ``dx_i``)."""

    __slots__ = ()

    def __init__(self, chart: Chart, comps=None):
        super().__init__(chart, chart.dim, "form", comps)

    @classmethod
    def covector(cls, chart: Chart, coeffs: Sequence) -> "DiffForm":
        return cls(chart, {(i,): c for i, c in enumerate(coeffs)})

    @classmethod
    def function(cls, f: Poly) -> "DiffForm":
        return cls(f.chart, {(): f})

    @classmethod
    def d(cls, f: Poly) -> "DiffForm":
        return de_rham(cls.function(f))


def as_exterior(x, like: Exterior) -> Exterior:
    if isinstance(x, Exterior):
        return x
    if isinstance(x, Poly):
        return like._new({(): x})
    return like._new({(): Poly.const(like.chart, x)})


# ---------------------------------------------------------------------------
# operations


def wedge(P: Exterior, Q: Exterior) -> Exterior:
    """Exterior product; ``wedge(P, Q) = (-1)**(p*q) wedge(Q, P)``."""
    if isinstance(P, Poly):
        return Q * P
    if isinstance(Q, Poly):
        return P * Q
    P._check(Q)
    out: dict = {}
    for k1, c1 in P.comps.items():
        for k2, c2 in Q.comps.items():
            key, sign = merge_sign(k1, k2)
            if key is None:
                continue
            v = c1 * c2
            if sign < 0:
                v = -v
            out[key] = out[key] + v if key in out else v
    return P._new(out)


def wedge_all(items: Iterable[Exterior], like: Exterior) -> Exterior:
    result = like._new({(): Poly.const(like.chart, 1)})
    for x in items:
        result = wedge(result, x)
    return result


def right_derivative(P: Exterior, i: int) -> Exterior:
    """Odd right derivative with respect to generator ``i``."""
    out = {}
    for key, c in P.comps.items():
        if i in key:
            a = key.index(i)
            rest = key[:a] + key[a + 1:]
            v = -c if (len(key) - 1 - a) & 1 else c
            out[rest] = out[rest] + v if rest in out else v
    return P._new(out)


def coefficient_derivative(P: Exterior, var: int) -> Exterior:
    return P._new({k: v.diff(var) for k, v in P.comps.items()})


def schouten(P: MultiVec, Q: MultiVec) -> MultiVec:
    """Schouten-Nijenhuis bracket of polynomial multivector fields.

    Computed as ``sum_i (P d<theta_i) ^ d_{x_i} Q - (-1)**((p-1)(q-1)) (Q d<theta_i) ^ d_{x_i} P``
    on homogeneous parts, where ``d<theta_i`` is the odd right derivative.
    """
    if isinstance(P, Poly):
        P = MultiVec.function(P)
    if isinstance(Q, Poly):
        Q = MultiVec.function(Q)
    if P.kind != "vec" or Q.kind != "vec":
        raise KindMismatch("schouten() takes multivector fields")
    P._check(Q)
    result = P.zero_like()
    n = P.chart.dim
    for p, Pp in P.homogeneous_parts().items():
        for q, Qq in Q.homogeneous_parts().items():
            if p + q - 1 < 0:
                continue
            sign = -1 if ((p - 1) * (q - 1)) & 1 else 1
            for i in range(n):
                result = result + wedge(right_derivative(Pp, i), coefficient_derivative(Qq, i))
                t = wedge(right_derivative(Qq, i), coefficient_derivative(Pp, i))
                result = result - t if sign > 0 else result + t
    return result


def sharp(Pi: MultiVec, alpha: DiffForm) -> MultiVec:
    """``Pi#(alpha)`` with ``<beta, Pi#(alpha)> = Pi(alpha, beta)``."""
    return interior_product(alpha, Pi)


def lie_bracket(X: MultiVec, Y: MultiVec) -> MultiVec:
    return schouten(X, Y)


def de_rham(w: DiffForm) -> DiffForm:
    """Exterior derivative of a polynomial form."""
    if isinstance(w, Poly):
        w = DiffForm.function(w)
    if w.kind != "form":
        raise KindMismatch("de_rham() takes differential forms")
    out: dict = {}
    for key, c in w.comps.items():
        for j in range(w.chart.dim):
            dc = c.diff(j)
            if not dc:
                continue
            nk, sign = merge_sign((j,), key)
            if nk is None:
                continue
            v = dc if sign > 0 else -dc
            out[nk] = out[nk] + v if nk in out else v
    return w._new(out)


def _contract_generator(j: int, P: Exterior) -> dict:
    out: dict = {}
    for key, c in P.comps.items():
        if j in key:
            a = key.index(j)
            rest = key[:a] + key[a + 1:]
            v = -c if a & 1 else c
            out[rest] = out[rest] + v if rest in out else v
    return out


def interior_product(arg: Exterior, P: Exterior) -> Exterior:
    """Contract ``P`` by ``arg``, an element of the dual frame.

    For a degree-1 ``arg`` this is the graded derivation fixed by
    ``i(dx_j) d/dx_i = delta_ij``. A wedge monomial ``xi1 ^ ... ^ xiq`` acts by
    ``i(xiq) ... i(xi1)``: the leftmost factor is contracted first.
    """
    if DUAL_KIND[P.kind] != arg.kind:
        raise KindMismatch(f"cannot contract a {P.kind!r} element by a {arg.kind!r} element")
    if arg.chart != P.chart:
        raise ChartMismatch("contraction across different charts")
    if arg.rank != P.rank:
        raise KindMismatch("frames of different rank")
    if P.comps and arg.comps and min(map(len, arg.comps)) > max(map(len, P.comps)):
        raise DegreeError("contraction degree exceeds the multivector degree")
    result: dict = {}
    for akey, acoef in arg.comps.items():
        cur = dict(P.comps)
        for j in akey:
            cur = _contract_generator(j, P._new(cur))
            if not cur:
                break
        for k, v in cur.items():
            v = v * acoef
            result[k] = result[k] + v if k in result else v
    return P._new(result)


def pairing(arg: Exterior, P: Exterior) -> Poly:
    """Full pairing ``<arg, P>``: the degree-0 part of ``interior_product(arg, P)``."""
    return P._new(interior_product(arg, P).comps).scalar_part()


def contract_vector(X: Exterior, w: Exterior) -> Exterior:
    """``i_X w`` for a degree-1 ``X``; same as :func:`interior_product`."""
    return interior_product(X, w)


def lie_derivative(X: MultiVec, T: Exterior) -> Exterior:
    """Lie derivative along a vector field: Cartan's formula on forms, the
    Schouten bracket on multivector fields, ``X(f)`` on functions."""
    if X.kind != "vec" or X.degrees() - {1}:
        raise DegreeError("lie_derivative() needs a vector field")
    if isinstance(T, Poly):
        return X.apply(T)
    if T.kind == "form":
        out = interior_product(X, de_rham(T))
        positive = T.like({k: c for k, c in T.comps.items() if k})
        return out + de_rham(interior_product(X, positive)) if positive else out
    if T.kind == "vec":
        return schouten(X, T)
    raise KindMismatch("lie_derivative() takes forms or multivector fields")


# ---------------------------------------------------------------------------
# maps between charts


@dataclass(frozen=True)
class PolyMap:
    """Polynomial map ``source -> target`` given by one Poly per target coordinate."""

    source: Chart
    target: Chart
    components: tuple[Poly, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) != self.target.dim:
            raise ChartMismatch(
                f"map needs {self.target.dim} components for {self.target}, got {len(comps)}")
        for c in comps:
            if c.chart != self.source:
                raise ChartMismatch("map component not on the source chart")

    @classmethod
    def identity(cls, chart: Chart, target: Chart | None = None) -> "PolyMap":
        target = target or chart
        return cls(chart, target, tuple(chart.coords()))

    def __call__(self, f: Poly) -> Poly:
        return pullback(self, f)

    def jacobian(self) -> list[list[Poly]]:
        """``jac[b][c] = d J^b / d x_c``."""
        return [[J.diff(c) for c in range(self.source.dim)] for J in self.components]

    def push_vector(self, u: MultiVec) -> list[Poly]:
        """Components of ``J_* u`` as functions on the source chart."""
        return [u.apply(J) for J in self.components]

    def graph_substitution(self, product: Chart) -> list[Poly]:
        """Images of the variables of ``product`` (target vars then source vars)
        under ``(s, x) -> (J(x), x)``, as polynomials on the source chart."""
        images = []
        for v in product.vars:
            if v in self.target.vars:
                images.append(self.components[self.target.index(v)])
            else:
                images.append(self.source.coord(v))
        return images


def pullback(J: PolyMap, T):
    """Pull a function or differential form on ``J.target`` back to ``J.source``."""
    if isinstance(T, Poly):
        if T.chart != J.target:
            raise ChartMismatch(f"function on {T.chart}, map target is {J.target}")
        if J.target.dim == 0:
            return Poly.const(J.source, T.constant_value())
        return T.compose(J.components)
    if isinstance(T, Exterior) and T.kind == "form":
        if T.chart != J.target:
            raise ChartMismatch(f"form on {T.chart}, map target is {J.target}")
        dJ = [DiffForm.d(c) for c in J.components]
        result = DiffForm(J.source)
        for key, c in T.comps.items():
            term = DiffForm.function(pullback(J, c))
            for b in key:
                term = wedge(term, dJ[b])
            result = result + term
        return result
    raise TypeError("pullback() takes a Poly or a DiffForm")


def restrict_to_graph(f: Poly, J: PolyMap) -> Poly:
    """Restrict a function on ``target x source`` to ``graph J``; result on the source."""
    images = J.graph_substitution(f.chart)
    if not images:
        return Poly.const(J.source, f.constant_value())
    return f.compose(images)


def all_keys(rank: int, degree: int):
    return list(combinations(range(rank), degree))
