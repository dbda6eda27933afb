import random

from hypothesis import given, settings, strategies as st

from maninspace.algebroid import (ActionTable, Differential, DressingData, LieAlgebroidChart,
                                  QuasiLieBialgebroidData, check_action, check_algebroid_axioms,
                                  check_quasi_bialgebroid, check_two_differential, dual_bracket,
                                  dual_structure, extend_two_differential, tangent_qlb,
                                  transformation_from_quasitriple)
from maninspace.liestruct import LieAlgebraSC, QuasiLieBialgebra
from maninspace.linalg import random_poly
from maninspace.scenario import evaluate
from maninspace.symcalc import Chart, Exterior, MultiVec, PolyMap, sharp, DiffForm

from conftest import polys

S2 = Chart("S", ("s1", "s2"))
S3 = Chart("S", ("s1", "s2", "s3"))
L = Chart("S", ("s",))
XL = Chart("X", ("x",))


def vec(text, chart=S2):
    return evaluate(text, chart, "vec")


def sec(text, chart=S2, rank=2, kind="e"):
    return evaluate(text, chart, kind, rank)


def zero_delta(chart, r):
    z = Exterior(chart, r, "e")
    return Differential(chart, r, "e", [z] * chart.dim, [z] * r)


def line_action():
    g = LieAlgebraSC(1)
    return LieAlgebroidChart.transformation(g, L, [evaluate("d/ds", L, "vec")])


def omega_triple(chart=S3, h=True):
    q = QuasiLieBialgebra(LieAlgebraSC(3), {}, {(0, 1, 2): 1})
    hf = [MultiVec.partial(chart, i) for i in range(3)] if h else [MultiVec(chart)] * 3
    return DressingData(q, chart, [MultiVec(chart)] * 3, hf)


def test_algebroid_axiom_examples():
    assert check_algebroid_axioms(LieAlgebroidChart.tangent(S2)).ok
    assert check_algebroid_axioms(line_action()).ok
    bad = LieAlgebroidChart(S2, 2, [vec("d/ds1"), vec("s1*d/ds1")], [])
    rep = check_algebroid_axioms(bad)
    assert "anchor morphism" in rep.witness_labels()
    assert any(w.residual == "-d/ds1" or w.residual == "d/ds1" for w in rep.witnesses)


def test_action_examples():
    A = LieAlgebroidChart.tangent(S2)
    X = Chart("X", ("x1", "x2"))
    J = PolyMap(X, S2, tuple(X.coords()))
    assert check_action(A, ActionTable(J, [MultiVec.partial(X, 0), MultiVec.partial(X, 1)])).ok
    shifted = PolyMap(XL, L, (evaluate("x + 5", XL),))
    dx = evaluate("d/dx", XL, "vec")
    assert check_action(line_action(), ActionTable(shifted, [dx])).ok
    square = PolyMap(XL, L, (evaluate("x^2", XL),))
    rep = check_action(line_action(), ActionTable(square, [dx]))
    assert rep.witness_labels() == {"J-related"}
    assert rep.witnesses[0].residual in ("2*x - 1", "-2*x + 1")


def test_extension_by_leibniz():
    Pi = vec("s1*d/ds1&d/ds2")
    q = tangent_qlb(S2, Pi)
    f = evaluate("s1*s2", S2)
    e1, e2 = sec("e1"), sec("e2")
    lhs = extend_two_differential(q, e1 * f)
    assert lhs == (q.delta_function(f) & e1) + q.delta.on_generators[0] * f
    assert extend_two_differential(q, e1 & e2) == \
        (q.delta.on_generators[0] & e2) - (e1 & q.delta.on_generators[1])
    # [Pi, s2] = -Pi#(ds2) = s1 d/ds1
    assert q.delta_function(evaluate("s2", S2)) == sec("s1*e1")


def test_two_differential_examples():
    A = LieAlgebroidChart.tangent(S2)
    assert check_two_differential(QuasiLieBialgebroidData(A, zero_delta(S2, 2), sec("0"))).ok
    assert check_two_differential(tangent_qlb(S2, vec("s1*s2*d/ds1&d/ds2 + s2^2*d/ds1&d/ds2"))).ok
    z = Exterior(S2, 2, "e")
    bad = Differential(S2, 2, "e", [z, z], [sec("s1*e1&e2"), z])
    rep = check_two_differential(QuasiLieBialgebroidData(A, bad, z))
    assert rep.failed
    assert ("e1", "s1") in {w.indices for w in rep.witnesses}


def test_quasi_bialgebroid_examples():
    assert check_quasi_bialgebroid(tangent_qlb(S2, vec("s1*d/ds1&d/ds2"))).ok
    q = transformation_from_quasitriple(omega_triple(h=False))
    assert check_two_differential(q).ok and check_quasi_bialgebroid(q).ok
    S4 = Chart("S", ("s1", "s2", "s3", "s4"))
    r4 = LieAlgebroidChart(S4, 4, [MultiVec(S4)] * 4, [])
    z = Exterior(S4, 4, "e")
    delta = Differential(S4, 4, "e", [sec(f"e{b}", S4, 4) for b in range(1, 5)], [z] * 4)
    rep = check_quasi_bialgebroid(
        QuasiLieBialgebroidData(r4, delta, sec("s4*e1&e2&e3", S4, 4)))
    assert rep.witness_labels() == {"delta Omega"}


def test_poisson_iff_quasi_bialgebroid():
    R3 = Chart("S", ("s1", "s2", "s3"))
    poisson = evaluate("s1*d/ds2&d/ds3", R3, "vec")
    not_poisson = evaluate("s2*d/ds2&d/ds3 + d/ds1&d/ds2", R3, "vec")
    assert check_quasi_bialgebroid(tangent_qlb(R3, poisson)).ok
    assert check_quasi_bialgebroid(tangent_qlb(R3, not_poisson)).failed


def test_dual_structure_examples():
    A = LieAlgebroidChart.tangent(S2)
    d0 = dual_structure(QuasiLieBialgebroidData(A, zero_delta(S2, 2), sec("0")))
    assert not any(d0.anchor) and not any(x for row in d0.structure for x in row)
    Pi = vec("s1*d/ds1&d/ds2 + s2^2*d/ds1&d/ds2")
    ds = dual_structure(tangent_qlb(S2, Pi))
    # rho_*(ds_b) f = <[Pi, f], ds_b> = Pi(ds_b, df), hence +Pi#(ds_b)
    for b in range(2):
        assert ds.anchor[b] == sharp(Pi, DiffForm.d(S2.coord(b)))
    q = transformation_from_quasitriple(omega_triple())
    dq = dual_structure(q)
    assert dq.anchor == [MultiVec.partial(S3, i) for i in range(3)]


def test_transformation_examples():
    P = Chart("P", ())
    q = QuasiLieBialgebra(LieAlgebraSC(2, {(0, 1, 1): 1}), {(1, 0, 1): 1})
    triv = transformation_from_quasitriple(DressingData(q, P, [MultiVec(P)] * 2, [MultiVec(P)] * 2))
    assert triv.delta.on_generators[1] == -sec("e1&e2", P)
    assert not triv.delta.on_generators[0]
    om = transformation_from_quasitriple(omega_triple())
    assert [om.delta_function(S3.coord(b)) for b in range(3)] == [sec(f"e{b}", S3, 3) for b in (1, 2, 3)]
    assert not any(om.delta.on_generators)
    assert om.omega == sec("e1&e2&e3", S3, 3)


def test_transformation_rejects_non_action():
    q = QuasiLieBialgebra(LieAlgebraSC(2))
    d = DressingData(q, S2, [vec("d/ds1"), vec("s1*d/ds2")], [MultiVec(S2)] * 2)
    try:
        transformation_from_quasitriple(d)
    except ValueError as exc:
        assert "not a Lie algebra action" in str(exc)
    else:
        raise AssertionError("expected a ValueError")


def test_corrupting_one_array_breaks_one_check():
    good = transformation_from_quasitriple(omega_triple())
    assert check_algebroid_axioms(good.algebroid).ok
    # with zero anchor and brackets the 2-differential identity is blind to this;
    # delta squared is the one check that notices
    on_g = list(good.delta.on_generators)
    on_g[0] = sec("s1*e2&e3", S3, 3)
    bad = QuasiLieBialgebroidData(good.algebroid,
                                  Differential(S3, 3, "e", good.delta.on_functions, on_g), good.omega)
    assert check_algebroid_axioms(bad.algebroid).ok
    assert check_two_differential(bad).ok
    assert check_quasi_bialgebroid(bad).witness_labels() == {"delta squared"}
    on_f = list(good.delta.on_functions)
    on_f[0] = sec("s2*e1", S3, 3)
    bad = QuasiLieBialgebroidData(good.algebroid,
                                  Differential(S3, 3, "e", on_f, good.delta.on_generators), good.omega)
    assert check_quasi_bialgebroid(bad).witness_labels() == {"delta squared"}


@settings(max_examples=50, deadline=None)
@given(polys(S2, 2), st.integers(0, 1), st.integers(0, 1), st.integers(0, 1000))
def test_dual_bracket_leibniz(f, i, j, seed):
    rng = random.Random(seed)
    Pi = vec("s1*d/ds1&d/ds2") + MultiVec(S2, {(0, 1): random_poly(S2, rng, 2, 2)})
    q = tangent_qlb(S2, Pi)
    ds = dual_structure(q)
    xi = sec(f"eps{i + 1}", kind="eps")
    eta = sec(f"eps{j + 1}", kind="eps")
    lhs = dual_bracket(q, xi, eta * f)
    rhs = dual_bracket(q, xi, eta) * f + eta * ds.anchor[i].apply(f)
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1000))
def test_two_differential_on_random_sections(seed):
    rng = random.Random(seed)
    q = tangent_qlb(S2, MultiVec(S2, {(0, 1): random_poly(S2, rng, 2, 3)}))
    A = q.algebroid
    P = sec("e1") * random_poly(S2, rng, 2, 2) + sec("e2") * random_poly(S2, rng, 1, 2)
    Q = sec("e1&e2") * random_poly(S2, rng, 2, 2)
    d = lambda T: extend_two_differential(q, T)
    lhs = d(A.bracket(P, Q))
    rhs = A.bracket(d(P), Q) + A.bracket(P, d(Q))
    assert lhs == rhs
