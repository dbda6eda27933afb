"""Scenario files: a sectioned text format and the shared expression grammar.

A scenario is a list of ``[section]`` blocks holding ``key = value`` lines;
``#`` starts a comment. Values are expressions over

* rationals ``3``, ``-1/2`` and chart variables ``s1``, ``x2``;
* ``+ - *``, integer powers ``^``, division by a number ``/``, parentheses;
* ``&`` for the wedge product;
* generators ``d/dx1`` (vector), ``dx1`` (form), ``e1`` and ``eps1`` (bundle frame).

Whitespace is insignificant. Errors carry the line and column.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebroid import (ActionTable, Differential, DressingData, LieAlgebroidChart,
                        QuasiLieBialgebroidData, delta_from_bivector,
                        transformation_from_quasitriple)
from .courant import LagrangianFrame, standard_courant, double_courant
from .hamiltonian import AdmissiblePair, HamiltonianScenario, QuasiPoissonScenario
from .liestruct import LieAlgebraSC, QuasiLieBialgebra
from .symcalc import Chart, Exterior, MultiVec, DiffForm, Poly, PolyMap

SECTIONS = ("meta", "base", "space", "algebra", "cobracket", "omega", "algebroid", "delta",
            "dressing", "map J", "action", "bivector", "courant", "frame", "admissible",
            "kernel-frame", "quotient-coords", "degeneracy-locus")


class ScenarioError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message, self.line, self.column = message, line, column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


# ---------------------------------------------------------------------------
# expressions

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<vec>d/d[A-Za-z_][A-Za-z_0-9]*)
  | (?P<num>\d+)
  | (?P<id>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^&()])
""", re.VERBOSE)


def tokenize(text: str, line: int = 0, col0: int = 1):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ScenarioError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m.group(), col0 + pos))
        pos = m.end()
    out.append(("end", "", col0 + len(text)))
    return out


@dataclass(frozen=True)
class Node:
    op: str
    args: tuple
    column: int


class _Parser:
    def __init__(self, text, line, col0):
        self.toks = tokenize(text, line, col0)
        self.i = 0
        self.line = line

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ScenarioError(msg, self.line, tok[2])

    def parse(self) -> Node:
        if self.peek()[0] == "end":
            self.error("empty expression")
        node = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            tok = self.take()
            node = Node("add" if tok[1] == "+" else "sub", (node, self.term()), tok[2])
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "&", "/"):
            tok = self.take()
            if tok[1] == "/":
                n = self.take()
                if n[0] != "num":
                    self.error("division is only by an integer literal", n)
                node = Node("div", (node, int(n[1])), tok[2])
            else:
                node = Node("mul" if tok[1] == "*" else "wedge", (node, self.unary()), tok[2])
        return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("-", "+"):
            self.take()
            inner = self.unary()
            return Node("neg", (inner,), tok[2]) if tok[1] == "-" else inner
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            tok = self.take()
            n = self.take()
            if n[0] != "num":
                self.error("exponent must be a nonnegative integer literal", n)
            node = Node("pow", (node, int(n[1])), tok[2])
        return node

    def atom(self):
        tok = self.take()
        kind, text, col = tok
        if kind == "num":
            return Node("num", (Fraction(int(text)),), col)
        if kind == "vec":
            return Node("vec", (text[3:],), col)
        if kind == "id":
            return Node("id", (text,), col)
        if kind == "op" and text == "(":
            node = self.expr()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            return node
        self.error(f"unexpected {text!r}" if text else "unexpected end of expression", tok)


def parse_expression(text: str, line: int = 0, col0: int = 1) -> Node:
    return _Parser(text, line, col0).parse()


class _Value:
    """Evaluation value: a scalar Poly plus graded parts keyed by frame kind."""

    __slots__ = ("scalar", "parts")

    def __init__(self, scalar: Poly, parts=None):
        self.scalar = scalar
        self.parts = parts or {}


@dataclass
class Context:
    """Chart and generator frames visible to an expression."""

    chart: Chart
    kinds: tuple = ()
    rank: int = 0
    line: int = 0

    def fail(self, msg, col):
        raise ScenarioError(msg, self.line, col)

    def evaluate(self, node: Node) -> _Value:
        ch = self.chart
        op, args, col = node.op, node.args, node.column
        if op == "num":
            return _Value(Poly.const(ch, args[0]))
        if op == "vec":
            if "vec" not in self.kinds:
                self.fail("vector generators are not allowed here", col)
            if args[0] not in ch.vars:
                self.fail(f"d/d{args[0]}: {args[0]} is not a coordinate of {ch.name}", col)
            return _Value(Poly.zero(ch), {"vec": Exterior.generator(ch, ch.dim, "vec", ch.index(args[0]))})
        if op == "id":
            name = args[0]
            if name in ch.vars:
                return _Value(ch.coord(name))
            m = re.fullmatch(r"(eps|e)(\d+)", name)
            if m:
                kind, i = m.group(1), int(m.group(2))
                if kind not in self.kinds:
                    self.fail(f"frame generator {name} is not allowed here", col)
                if not 1 <= i <= self.rank:
                    self.fail(f"{name}: index out of range 1..{self.rank}", col)
                return _Value(Poly.zero(ch), {kind: Exterior.generator(ch, self.rank, kind, i - 1)})
            if name.startswith("d") and name[1:] in ch.vars:
                if "form" not in self.kinds:
                    self.fail("form generators are not allowed here", col)
                return _Value(Poly.zero(ch), {"form": Exterior.generator(ch, ch.dim, "form", ch.index(name[1:]))})
            self.fail(f"unknown identifier {name!r}", col)
        if op == "neg":
            v = self.evaluate(args[0])
            return _Value(-v.scalar, {k: -p for k, p in v.parts.items()})
        if op in ("add", "sub"):
            a, b = self.evaluate(args[0]), self.evaluate(args[1])
            if op == "sub":
                b = _Value(-b.scalar, {k: -p for k, p in b.parts.items()})
            parts = dict(a.parts)
            for k, p in b.parts.items():
                parts[k] = parts[k] + p if k in parts else p
            return _Value(a.scalar + b.scalar, parts)
        if op == "div":
            a = self.evaluate(args[0])
            if args[1] == 0:
                self.fail("division by zero", col)
            c = Fraction(1, args[1])
            return _Value(a.scalar * c, {k: p * c for k, p in a.parts.items()})
        if op == "pow":
            a = self.evaluate(args[0])
            if a.parts:
                self.fail("only functions can be raised to a power", col)
            return _Value(a.scalar ** args[1])
        if op in ("mul", "wedge"):
            a, b = self.evaluate(args[0]), self.evaluate(args[1])
            if op == "mul" and a.parts and b.parts:
                self.fail("use '&' for the product of two graded elements", col)
            parts = {}

            def put(k, p):
                parts[k] = parts[k] + p if k in parts else p

            for k, p in a.parts.items():
                if b.scalar:
                    put(k, p * b.scalar)
            for k, p in b.parts.items():
                if a.scalar:
                    put(k, p * a.scalar)
            for ka, pa in a.parts.items():
                for kb, pb in b.parts.items():
                    if ka != kb:
                        self.fail(f"cannot wedge {ka} and {kb} generators", col)
                    put(ka, pa & pb)
            return _Value(a.scalar * b.scalar, parts)
        raise AssertionError(op)


def _as_poly(ctx: Context, v: _Value, col) -> Poly:
    if any(v.parts.values()):
        ctx.fail("expected a function", col)
    return v.scalar


def _as_exterior(ctx: Context, v: _Value, kind: str, col, degree=None) -> Exterior:
    rank = ctx.chart.dim if kind in ("vec", "form") else ctx.rank
    out = Exterior(ctx.chart, rank, kind, {(): v.scalar} if v.scalar else {})
    for k, p in v.parts.items():
        if k != kind and p:
            ctx.fail(f"expected {kind} generators, found {k}", col)
        if k == kind:
            out = out + p
    if degree is not None and out.degrees() - {degree}:
        ctx.fail(f"expected a homogeneous element of degree {degree}", col)
    if kind == "vec":
        return MultiVec(ctx.chart, out.comps)
    if kind == "form":
        return DiffForm(ctx.chart, out.comps)
    return out


# ---------------------------------------------------------------------------
# files


@dataclass
class Entry:
    key: str
    value: str
    line: int
    column: int
    node: Node | None = None


@dataclass
class ScenarioFile:
    sections: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)

    def __contains__(self, name):
        return name in self.sections

    def get(self, name):
        return self.sections.get(name, [])

    def value(self, section, key, default=None):
        for e in self.get(section):
            if e.key == key:
                return e
        return default


_STRUCTURAL = {"meta", "base", "space", "courant", "quotient-coords"}
_PLAIN_KEYS = {"algebra": {"dim"}, "algebroid": {"type", "rank"}}


def parse_scenario(text: str) -> ScenarioFile:
    """Sections and entries; expression values are parsed into syntax trees."""
    sf = ScenarioFile()
    current = None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            m = re.fullmatch(r"\[\s*([A-Za-z][A-Za-z \-]*?)\s*\]", stripped)
            if not m:
                raise ScenarioError("malformed section header", ln, line.index("[") + 1)
            name = re.sub(r"\s+", " ", m.group(1))
            if name == "map":
                name = "map J"
            if name not in SECTIONS:
                raise ScenarioError(f"unknown section [{name}]", ln, line.index("[") + 1)
            if name in sf.sections:
                raise ScenarioError(f"duplicate section [{name}]", ln, line.index("[") + 1)
            sf.sections[name] = []
            sf.lines[name] = ln
            current = name
            continue
        if current is None:
            raise ScenarioError("entry outside of a section", ln, 1)
        if "=" not in line:
            raise ScenarioError("expected 'key = value'", ln, len(raw) - len(raw.lstrip()) + 1)
        eq = line.index("=")
        key = " ".join(line[:eq].split())
        rest = line[eq + 1:]
        col = eq + 2 + (len(rest) - len(rest.lstrip()))
        value = rest.strip()
        if not key:
            raise ScenarioError("missing key", ln, 1)
        if not value:
            raise ScenarioError("missing value", ln, eq + 1)
        entry = Entry(key, value, ln, col)
        plain = current in _STRUCTURAL or key in _PLAIN_KEYS.get(current, ())
        if not plain:
            if current == "admissible" and "|" in value:
                left, right = value.split("|", 1)
                entry.node = (parse_expression(left, ln, col),
                              parse_expression(right, ln, col + len(left) + 1))
            else:
                entry.node = parse_expression(value, ln, col)
        sf.sections[current].append(entry)
    return sf


def _indices(entry: Entry, prefix: str, count: int, bound: int | None = None):
    parts = entry.key.split()
    if parts[0] != prefix or len(parts) != count + 1:
        raise ScenarioError(f"expected '{prefix}' followed by {count} indices", entry.line, 1)
    try:
        idx = tuple(int(p) - 1 for p in parts[1:])
    except ValueError:
        raise ScenarioError("indices must be integers", entry.line, 1) from None
    if bound is not None and any(not 0 <= i < bound for i in idx):
        raise ScenarioError(f"index out of range 1..{bound}", entry.line, 1)
    return idx


def _number(ctx_line, entry: Entry) -> Fraction:
    ctx = Context(Chart("_", ()), line=entry.line)
    return _as_poly(ctx, ctx.evaluate(entry.node), entry.column).constant_value()


@dataclass
class Scenario:
    """Objects built from a scenario file; absent sections leave fields at None."""

    source: ScenarioFile
    name: str = ""
    S: Chart | None = None
    X: Chart | None = None
    lie: LieAlgebraSC | None = None
    quasi: QuasiLieBialgebra | None = None
    dressing: DressingData | None = None
    algebroid: LieAlgebroidChart | None = None
    qlb: QuasiLieBialgebroidData | None = None
    J: PolyMap | None = None
    fields: list | None = None
    Pi_X: MultiVec | None = None
    courant: object = None
    frame: LagrangianFrame | None = None
    admissible: list | None = None
    kernel_frame: list | None = None
    quotient: list | None = None
    locus: list = field(default_factory=list)

    def has(self, *names) -> bool:
        return all(n in self.source for n in names)

    def hamiltonian(self) -> HamiltonianScenario:
        if self.qlb is None or self.J is None or self.fields is None:
            raise ScenarioError("a Hamiltonian scenario needs the algebroid data, [map J] and [action]")
        Pi = self.Pi_X if self.Pi_X is not None else MultiVec(self.X)
        return HamiltonianScenario(self.qlb, self.J, ActionTable(self.J, self.fields), Pi, self.name)

    def quasi_poisson(self) -> QuasiPoissonScenario:
        if self.quasi is None or self.X is None or self.fields is None:
            raise ScenarioError("a quasi-Poisson scenario needs [algebra], [space] and [action]")
        Pi = self.Pi_X if self.Pi_X is not None else MultiVec(self.X)
        # over a point the moment map is implicit once dressing data is declared
        has_map = "map J" in self.source or (self.S.dim == 0 and "dressing" in self.source)
        return QuasiPoissonScenario(self.quasi, self.X, self.fields, Pi, self.dressing,
                                    self.J if has_map else None, self.name)


def _chart(sf: ScenarioFile, section: str, default_name: str):
    if section not in sf:
        return None
    e = sf.value(section, "vars")
    name = sf.value(section, "name")
    names = tuple(e.value.split()) if e else ()
    for v in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v) or re.fullmatch(r"(eps|e)\d+", v) or v == "d":
            raise ScenarioError(f"invalid variable name {v!r}", e.line, e.column)
    try:
        return Chart(name.value if name else default_name, names)
    except ValueError as exc:
        raise ScenarioError(str(exc), e.line if e else sf.lines[section], 1) from None


def build_scenario(sf: ScenarioFile) -> Scenario:
    sc = Scenario(sf)
    meta = sf.value("meta", "name")
    sc.name = meta.value if meta else ""
    sc.S = _chart(sf, "base", "S") or Chart("point", ())
    sc.X = _chart(sf, "space", "X")
    if sc.X is not None and set(sc.X.vars) & set(sc.S.vars):
        raise ScenarioError("[base] and [space] share variable names", sf.lines["space"], 1)

    def expr(entry, chart, kinds=(), rank=0):
        return Context(chart, kinds, rank, entry.line).evaluate(entry.node)

    def poly(entry, chart):
        ctx = Context(chart, (), 0, entry.line)
        return _as_poly(ctx, ctx.evaluate(entry.node), entry.column)

    def ext(entry, chart, kind, rank=0, degree=None):
        ctx = Context(chart, (kind,), rank, entry.line)
        return _as_exterior(ctx, ctx.evaluate(entry.node), kind, entry.column, degree)

    # Lie algebra side
    if "algebra" in sf:
        d = sf.value("algebra", "dim")
        if d is None:
            raise ScenarioError("[algebra] needs 'dim = n'", sf.lines["algebra"], 1)
        try:
            n = int(d.value)
        except ValueError:
            raise ScenarioError("dim must be an integer", d.line, d.column) from None
        c = {}
        for e in sf.get("algebra"):
            if e.key == "dim":
                continue
            c[_indices(e, "c", 3, n)] = _number(e.line, e)
        F = {_indices(e, "F", 3, n): _number(e.line, e) for e in sf.get("cobracket")}
        om = {_indices(e, "omega", 3, n): _number(e.line, e) for e in sf.get("omega")}
        try:
            sc.lie = LieAlgebraSC(n, c)
            sc.quasi = QuasiLieBialgebra(sc.lie, F, om)
        except ValueError as exc:
            raise ScenarioError(str(exc), sf.lines["algebra"], 1) from None
    if "dressing" in sf:
        if sc.quasi is None:
            raise ScenarioError("[dressing] needs [algebra]", sf.lines["dressing"], 1)
        n = sc.quasi.dim
        g = [MultiVec(sc.S)] * n
        h = [MultiVec(sc.S)] * n
        for e in sf.get("dressing"):
            kind, idx = e.key.split()[0], _indices(e, e.key.split()[0], 1, n)[0]
            if kind not in ("g", "h"):
                raise ScenarioError("dressing entries are 'g i = ...' or 'h i = ...'", e.line, 1)
            v = ext(e, sc.S, "vec", degree=1)
            (g if kind == "g" else h)[idx] = v
        sc.dressing = DressingData(sc.quasi, sc.S, g, h)

    # algebroid and 2-differential
    typ = sf.value("algebroid", "type")
    typ = typ.value if typ else None
    if typ is None and "algebroid" not in sf:
        if "dressing" in sf:
            typ = "transformation"
        elif "delta" in sf:
            typ = "tangent"
    if typ == "transformation":
        if sc.dressing is None and sc.quasi is not None and sc.S.dim == 0:
            zero = [MultiVec(sc.S)] * sc.quasi.dim
            sc.dressing = DressingData(sc.quasi, sc.S, zero, list(zero))
        if sc.dressing is None:
            raise ScenarioError("a transformation algebroid needs [algebra] and [dressing]",
                                sf.lines.get("algebroid", sf.lines.get("algebra", 1)), 1)
        try:
            sc.qlb = transformation_from_quasitriple(sc.dressing)
        except ValueError as exc:
            raise ScenarioError(str(exc), sf.lines["dressing"], 1) from None
        sc.algebroid = sc.qlb.algebroid
    elif typ == "tangent":
        sc.algebroid = LieAlgebroidChart.tangent(sc.S)
    elif typ == "general":
        re_ = sf.value("algebroid", "rank")
        if re_ is None:
            raise ScenarioError("a general algebroid needs 'rank = r'", sf.lines["algebroid"], 1)
        r = int(re_.value)
        anchor = [MultiVec(sc.S)] * r
        C = [[None] * r for _ in range(r)]
        for e in sf.get("algebroid"):
            head = e.key.split()[0]
            if head == "anchor":
                anchor[_indices(e, "anchor", 1, r)[0]] = ext(e, sc.S, "vec", degree=1)
            elif head == "bracket":
                i, j = _indices(e, "bracket", 2, r)
                C[i][j] = ext(e, sc.S, "e", r, degree=1)
            elif e.key not in ("type", "rank"):
                raise ScenarioError(f"unknown [algebroid] entry {e.key!r}", e.line, 1)
        try:
            sc.algebroid = LieAlgebroidChart(sc.S, r, anchor, C)
        except ValueError as exc:
            raise ScenarioError(str(exc), sf.lines["algebroid"], 1) from None
    elif typ is not None:
        raise ScenarioError(f"unknown algebroid type {typ!r}", sf.lines.get("algebroid", 1), 1)

    if "delta" in sf and typ != "transformation":
        A = sc.algebroid
        r = A.rank
        biv = sf.value("delta", "bivector")
        if biv is not None:
            if typ != "tangent":
                raise ScenarioError("'bivector' needs the tangent algebroid", biv.line, 1)
            delta = delta_from_bivector(sc.S, ext(biv, sc.S, "vec", degree=2))
        else:
            on_f = [Exterior(sc.S, r, "e")] * sc.S.dim
            on_g = [Exterior(sc.S, r, "e")] * r
            for e in sf.get("delta"):
                head = e.key.split()
                if head[0] == "f" and len(head) == 2:
                    if head[1] not in sc.S.vars:
                        raise ScenarioError(f"{head[1]} is not a base coordinate", e.line, 1)
                    on_f[sc.S.index(head[1])] = ext(e, sc.S, "e", r, degree=1)
                elif head[0] == "g":
                    on_g[_indices(e, "g", 1, r)[0]] = ext(e, sc.S, "e", r, degree=2)
                elif head[0] != "omega":
                    raise ScenarioError(f"unknown [delta] entry {e.key!r}", e.line, 1)
            delta = Differential(sc.S, r, "e", on_f, on_g)
        om = sf.value("delta", "omega")
        omega = ext(om, sc.S, "e", r, degree=3) if om else Exterior(sc.S, r, "e")
        sc.qlb = QuasiLieBialgebroidData(A, delta, omega)
    elif sc.algebroid is not None and sc.qlb is None:
        A = sc.algebroid
        sc.qlb = QuasiLieBialgebroidData(
            A, Differential(sc.S, A.rank, "e", [Exterior(sc.S, A.rank, "e")] * sc.S.dim,
                            [Exterior(sc.S, A.rank, "e")] * A.rank), Exterior(sc.S, A.rank, "e"))

    # the space X
    if "map J" in sf:
        if sc.X is None:
            raise ScenarioError("[map J] needs [space]", sf.lines["map J"], 1)
        comps = {}
        for e in sf.get("map J"):
            if e.key not in sc.S.vars:
                raise ScenarioError(f"{e.key} is not a base coordinate", e.line, 1)
            comps[e.key] = poly(e, sc.X)
        missing = [v for v in sc.S.vars if v not in comps]
        if missing:
            raise ScenarioError(f"[map J] lacks components for {', '.join(missing)}", sf.lines["map J"], 1)
        sc.J = PolyMap(sc.X, sc.S, tuple(comps[v] for v in sc.S.vars))
    elif sc.X is not None and sc.S.dim == 0:
        sc.J = PolyMap(sc.X, sc.S, ())
    if "action" in sf:
        if sc.X is None:
            raise ScenarioError("[action] needs [space]", sf.lines["action"], 1)
        r = sc.algebroid.rank if sc.algebroid is not None else (sc.quasi.dim if sc.quasi else None)
        if r is None:
            raise ScenarioError("[action] needs an algebroid or [algebra]", sf.lines["action"], 1)
        fields = [MultiVec(sc.X)] * r
        for e in sf.get("action"):
            try:
                i = int(e.key) - 1
            except ValueError:
                raise ScenarioError("action entries are 'i = vector field'", e.line, 1) from None
            if not 0 <= i < r:
                raise ScenarioError(f"action index out of range 1..{r}", e.line, 1)
            fields[i] = ext(e, sc.X, "vec", degree=1)
        sc.fields = fields
    if "bivector" in sf:
        if sc.X is None:
            raise ScenarioError("[bivector] needs [space]", sf.lines["bivector"], 1)
        e = sf.value("bivector", "Pi")
        if e is None:
            raise ScenarioError("[bivector] needs 'Pi = ...'", sf.lines["bivector"], 1)
        sc.Pi_X = ext(e, sc.X, "vec", degree=2)

    if "courant" in sf:
        m = sf.value("courant", "model")
        model = m.value if m else "standard"
        if model == "standard":
            on = sf.value("courant", "chart")
            chart = sc.S if on and on.value == "base" else sc.X
            if chart is None:
                raise ScenarioError("standard model needs [space] or 'chart = base'", sf.lines["courant"], 1)
            sc.courant = standard_courant(chart)
        elif model == "double":
            if sc.qlb is None:
                raise ScenarioError("double model needs algebroid data", sf.lines["courant"], 1)
            sc.courant = double_courant(sc.qlb)
        else:
            raise ScenarioError(f"unknown Courant model {model!r}", m.line, m.column)
    if "frame" in sf:
        if sc.courant is None:
            raise ScenarioError("[frame] needs [courant]", sf.lines["frame"], 1)
        C = sc.courant
        kinds = ("vec", "form") if C.model == "standard" else ("e", "eps")
        rank = sc.qlb.rank if C.model == "double" else 0
        secs, labels = [], []
        for e in sf.get("frame"):
            ctx = Context(C.chart, kinds, rank, e.line)
            v = ctx.evaluate(e.node)
            if v.scalar:
                ctx.fail("a section has no function part", e.column)
            halves = [v.parts.get(k, Exterior(C.chart, C.chart.dim if k in ("vec", "form") else rank, k))
                      for k in kinds]
            for hpart in halves:
                if hpart.degrees() - {1}:
                    ctx.fail("sections are linear in the generators", e.column)
            if C.model == "standard":
                halves = [MultiVec(C.chart, halves[0].comps), DiffForm(C.chart, halves[1].comps)]
            secs.append(C.pair(*halves))
            labels.append(e.key)
        sc.frame = LagrangianFrame(C, secs, labels)
    if "admissible" in sf:
        pairs = []
        for e in sf.get("admissible"):
            if isinstance(e.node, tuple):
                f_node, x_node = e.node
                ctx = Context(sc.X, ("vec",), 0, e.line)
                f = _as_poly(ctx, ctx.evaluate(f_node), e.column)
                Xf = _as_exterior(ctx, ctx.evaluate(x_node), "vec", e.column, 1)
                pairs.append(AdmissiblePair(f, Xf, e.key))
            else:
                pairs.append(AdmissiblePair(poly(e, sc.X), None, e.key))
        sc.admissible = pairs
    if "kernel-frame" in sf:
        sc.kernel_frame = [ext(e, sc.X, "form", degree=1) for e in sf.get("kernel-frame")]
    if "quotient-coords" in sf:
        e = sf.value("quotient-coords", "coords")
        names = e.value.split() if e else []
        for v in names:
            if v not in sc.X.vars:
                raise ScenarioError(f"{v} is not a coordinate of X", e.line, e.column)
        sc.quotient = names
    sc.locus = [poly(e, sc.X) for e in sf.get("degeneracy-locus")]
    return sc


def load_scenario(text: str) -> Scenario:
    return build_scenario(parse_scenario(text))


def evaluate(text: str, chart: Chart, kind: str | None = None, rank: int = 0):
    """Evaluate an expression on ``chart``: a Poly when ``kind`` is None, else an
    element of that kind (``vec``, ``form``, ``e`` or ``eps``)."""
    node = parse_expression(text)
    ctx = Context(chart, (kind,) if kind else (), rank)
    value = ctx.evaluate(node)
    if kind is None:
        return _as_poly(ctx, value, 1)
    return _as_exterior(ctx, value, kind, 1)
