import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from maninspace.algebroid import DressingData, tangent_qlb, transformation_from_quasitriple
from maninspace.courant import (LagrangianFrame, assemble_courant, check_courant_axioms, check_dirac,
                                double_courant, graph_frame, product_courant, random_section,
                                standard_courant, tangent_frame, twist_by_bivector)
from maninspace.liestruct import LieAlgebraSC, QuasiLieBialgebra, build_double
from maninspace.scenario import evaluate
from maninspace.symcalc import Chart, ChartMismatch, DiffForm, MultiVec, schouten, sharp

from conftest import R2, R3

S2 = Chart("S", ("s1", "s2"))
S3 = Chart("S", ("s1", "s2", "s3"))


def std_section(C, v, a):
    return C.pair(evaluate(v, C.chart, "vec"), evaluate(a, C.chart, "form"))


def omega_double():
    q = QuasiLieBialgebra(LieAlgebraSC(3), {}, {(0, 1, 2): 1})
    dd = DressingData(q, S3, [MultiVec(S3)] * 3, [MultiVec.partial(S3, i) for i in range(3)])
    return q, assemble_courant("double", transformation_from_quasitriple(dd))


def test_standard_pairing_and_brackets():
    C = standard_courant(R2)
    assert C.pairing(std_section(C, "d/dx1", "0"), std_section(C, "0", "dx1")) == Fraction(1, 2)
    assert C.dorfman(std_section(C, "d/dx1", "0"), std_section(C, "0", "x1*dx2")) == \
        std_section(C, "0", "dx2")
    e = std_section(C, "d/dx1", "x1*dx1")
    assert C.pairing(e, e) == evaluate("x1", R2)
    assert C.dorfman(e, e) == std_section(C, "0", "dx1") == C.d_operator(C.pairing(e, e))
    a, b = std_section(C, "d/dx1", "0"), std_section(C, "d/dx2", "0")
    assert C.dorfman(a, b) == -C.dorfman(b, a) == C.zero()


def test_d_operator_examples():
    C = standard_courant(R2)
    assert C.d_operator(evaluate("x1", R2)) == std_section(C, "0", "dx1")
    assert C.d_operator(evaluate("7/3", R2)) == C.zero()
    Pi = evaluate("s1*d/ds1&d/ds2", S2, "vec")
    D = double_courant(tangent_qlb(S2, Pi))
    s1 = S2.coord(0)
    # Df = ([Pi, s1], ds1) and [Pi, s1] = -Pi#(ds1) = -s1 d/ds2
    assert schouten(Pi, MultiVec.function(s1)) == evaluate("-s1*d/ds2", S2, "vec")
    expected = D.pair(evaluate("-s1*e2", S2, "e", 2), evaluate("eps1", S2, "eps", 2))
    assert D.d_operator(s1) == expected


def test_double_agrees_with_liestruct_double():
    q, D = omega_double()
    d = build_double(q)
    n = 3
    for a in range(2 * n):
        for b in range(2 * n):
            lhs = D.dorfman(D.unit(a), D.unit(b))
            assert [c.constant_value() if c.is_constant() else None for c in lhs.coeffs] == \
                d.bracket(d.unit(a), d.unit(b)), (a, b)
    eps1, eps2 = D.unit(3), D.unit(4)
    assert D.dorfman(eps1, eps2) == D.unit(2)


def test_product_pairing_adds_and_rejects_collisions():
    C1 = standard_courant(S2)
    C2 = standard_courant(R2)
    P = product_courant(C1, C2)
    e = P.join(std_section(C1, "d/ds1", "0"), std_section(C2, "0", "dx2"))
    f = P.join(std_section(C1, "0", "ds1"), std_section(C2, "d/dx2", "0"))
    assert P.pairing(e, f) == Fraction(1)
    with pytest.raises(ChartMismatch):
        product_courant(C2, standard_courant(R2))


@pytest.mark.parametrize("chart", [R2, R3])
def test_standard_axioms(chart):
    assert check_courant_axioms(standard_courant(chart), trials=100, seed=1).ok


def test_double_axioms_poisson_and_non_poisson():
    good = double_courant(tangent_qlb(S2, evaluate("s1*d/ds1&d/ds2", S2, "vec")))
    assert check_courant_axioms(good, trials=100, seed=2).ok
    bad = double_courant(tangent_qlb(S3, evaluate("s2*d/ds2&d/ds3 + d/ds1&d/ds2", S3, "vec")))
    rep = check_courant_axioms(bad, trials=100, seed=2)
    assert "axiom i" in rep.witness_labels()
    w = [w for w in rep.witnesses if w.label == "axiom i"][0]
    assert w.residual


def test_dirac_examples():
    C = standard_courant(R2)
    assert check_dirac(C, tangent_frame(C)).ok
    assert check_dirac(C, graph_frame(C, evaluate("x1*d/dx1&d/dx2", R2, "vec"))).ok
    C3 = standard_courant(R3)
    rep = check_dirac(C3, graph_frame(C3, evaluate("x2*d/dx2&d/dx3 + d/dx1&d/dx2", R3, "vec")))
    assert rep.witness_labels() == {"closure"}
    assert all(len(w.indices) == 3 for w in rep.witnesses)


def test_dirac_rejects_wrong_frame_size():
    C = standard_courant(R2)
    with pytest.raises(ValueError):
        check_dirac(C, LagrangianFrame(C, [C.unit(0)]))


def test_twist_examples():
    C = standard_courant(R3)
    e = std_section(C, "x1*d/dx2", "x3*dx1 + dx2")
    assert twist_by_bivector(C, MultiVec(R3))(e) == e
    Pi = evaluate("x2*d/dx2&d/dx3 + d/dx1&d/dx2", R3, "vec")
    tw = twist_by_bivector(C, Pi)
    for j in range(3):
        dx = DiffForm.covector(R3, [int(i == j) for i in range(3)])
        assert tw(C.pair(MultiVec(R3), dx)) == C.pair(sharp(Pi, dx), dx)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_twist_preserves_pairing(seed):
    rng = random.Random(seed)
    C = standard_courant(R3)
    Pi = MultiVec(R3, {(0, 1): evaluate("x3", R3), (1, 2): evaluate("x1*x2 - 1", R3)})
    tw = twist_by_bivector(C, Pi)
    a, b = random_section(C, rng, 2, 0.7), random_section(C, rng, 2, 0.7)
    assert C.pairing(tw(a), tw(b)) == C.pairing(a, b)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["standard", "double"]))
def test_polarization(seed, model):
    rng = random.Random(seed)
    C = standard_courant(R2) if model == "standard" else \
        double_courant(tangent_qlb(S2, evaluate("s1*d/ds1&d/ds2", S2, "vec")))
    a, b = random_section(C, rng, 2, 0.6), random_section(C, rng, 2, 0.6)
    assert C.dorfman(a, b) + C.dorfman(b, a) == C.d_operator(C.pairing(a, b)) * 2


def _graph_closure(Pi, bracket):
    C = standard_courant(R3)
    return check_dirac(C, graph_frame(C, Pi), points=5, bracket=bracket).ok


@pytest.mark.parametrize("text", ["x1*d/dx1&d/dx2", "x3*d/dx1&d/dx2 + x1*d/dx2&d/dx3",
                                  "x2*d/dx2&d/dx3 + d/dx1&d/dx2"])
def test_dorfman_and_courant_closure_agree(text):
    Pi = evaluate(text, R3, "vec")
    assert _graph_closure(Pi, "dorfman") == _graph_closure(Pi, "courant")


def test_dirac_structure_is_a_lie_algebroid():
    # Jacobi of the restricted bracket paired with the frame vanishes for a Dirac structure
    C = standard_courant(R3)
    L = graph_frame(C, evaluate("x3*d/dx1&d/dx2 + x1*d/dx2&d/dx3 + x2*d/dx3&d/dx1", R3, "vec"))
    assert check_dirac(C, L, points=5).ok
    l = L.sections
    for i in range(3):
        for j in range(3):
            for k in range(3):
                jac = (C.dorfman(l[i], C.dorfman(l[j], l[k])) - C.dorfman(C.dorfman(l[i], l[j]), l[k])
                       - C.dorfman(l[j], C.dorfman(l[i], l[k])))
                for m in range(3):
                    assert not C.pairing(jac, l[m])
