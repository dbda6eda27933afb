import random
from fractions import Fraction

import pytest

from maninspace.algebroid import (ActionTable, DressingData, tangent_qlb,
                                  transformation_from_quasitriple)
from maninspace.hamiltonian import (AdmissiblePair, HamiltonianScenario, QuasiPoissonScenario,
                                    base_canonical_pis, base_scenario, build_split_frame,
                                    canonical_hamiltonian_field,
                                    characteristic_distribution, check_bialgebroid_morphism,
                                    check_f_of_a, check_hamiltonian_qlb, check_manin_hamiltonian,
                                    check_poisson_map, check_quasi_poisson, check_reduction_poisson,
                                    check_sign_correspondence, f_of_a, phi_from_action,
                                    reduced_bracket)
from maninspace.liestruct import LieAlgebraSC, QuasiLieBialgebra
from maninspace.linalg import random_poly
from maninspace.scenario import evaluate
from maninspace.symcalc import Chart, MultiVec, Poly, PolyMap, pullback, schouten

from conftest import scenario

P0 = Chart("P", ())
X2 = Chart("X", ("x1", "x2"))


def point_scenario(r, fields, Pi, X, c=None, omega=None):
    q = QuasiLieBialgebra(LieAlgebraSC(r, c or {}), {}, omega or {})
    qlb = transformation_from_quasitriple(DressingData(q, P0, [MultiVec(P0)] * r, [MultiVec(P0)] * r))
    J = PolyMap(X, P0, ())
    return HamiltonianScenario(qlb, J, ActionTable(J, fields), Pi)


def vec(text, chart=X2):
    return evaluate(text, chart, "vec")


def test_calibration_hs1():
    sc = scenario("hs1").hamiltonian()
    Pi_S, rep = base_canonical_pis(sc.qlb)
    assert rep.ok
    assert Pi_S == evaluate("s1*d/ds1&d/ds2", sc.S, "vec")
    assert check_hamiltonian_qlb(base_scenario(sc.qlb)).ok
    assert check_hamiltonian_qlb(sc).ok


def test_base_bivector_zero_anchor():
    sc = scenario("hs2").hamiltonian()
    Pi_S, rep = base_canonical_pis(sc.qlb)
    assert rep.ok and not Pi_S


def test_broken_hs1_residual():
    rep = check_hamiltonian_qlb(scenario("hs1_broken").hamiltonian())
    w = {(w.label, w.indices): w.residual for w in rep.witnesses}
    assert w[("pullback", ("s1",))] == "-d/dx2"


def test_hs2_passes():
    sc = scenario("hs2").hamiltonian()
    assert check_hamiltonian_qlb(sc).ok
    assert check_manin_hamiltonian(sc, points=5).ok


def test_pullback_identity_beyond_coordinates():
    # both sides of the pullback identity are derivations; spot-test random f
    sc = scenario("hs1").hamiltonian()
    rng = random.Random(7)
    for _ in range(10):
        f = random_poly(sc.S, rng, 2, 4)
        lhs = schouten(sc.Pi_X, MultiVec.function(pullback(sc.J, f)))
        assert lhs == sc.hat(sc.qlb.delta_function(f))


def test_phi_examples():
    phi, rep = phi_from_action(scenario("hs1").hamiltonian(), points=5)
    assert rep.ok
    assert [[c.constant_value() for c in row] for row in phi.matrix] == [[1, 0], [0, 1]]
    zero = point_scenario(1, [MultiVec(X2)], vec("d/dx1&d/dx2"), X2)
    phi, rep = phi_from_action(zero, points=5)
    assert rep.ok and not any(c for row in phi.matrix for c in row)
    L, XL = Chart("S", ("s",)), Chart("X", ("x",))
    q = QuasiLieBialgebra(LieAlgebraSC(1))
    qlb = transformation_from_quasitriple(DressingData(q, L, [evaluate("d/ds", L, "vec")], [MultiVec(L)]))
    J = PolyMap(XL, L, (XL.coord(0),))
    line = HamiltonianScenario(qlb, J, ActionTable(J, [evaluate("d/dx", XL, "vec")]), MultiVec(XL))
    phi, rep = phi_from_action(line, points=5)
    assert rep.ok and phi.matrix[0][0] == Poly.const(XL, 1)


def test_split_frame_shape():
    zero = point_scenario(1, [MultiVec(X2)], MultiVec(X2), X2)
    C, F = build_split_frame(zero)
    assert F.labels == ["e1", "dx1", "dx2"]
    for j, s in enumerate(F.sections[1:]):
        assert [c.is_zero() for c in s.coeffs[:2]] == [True, True]
        assert list(s.coeffs[2:4]) == [Poly.zero(C.chart)] * 2
        assert [c.constant_value() for c in s.coeffs[4:]] == [int(j == 0), int(j == 1)]
    sc = scenario("hs1").hamiltonian()
    C, F = build_split_frame(sc)
    assert len(F) == 4 and C.chart.dim == 4


def test_split_frame_round_trip_of_action():
    # the X-part of the anchor of each generator section is the input field
    sc = scenario("hs1_anchor").hamiltonian()
    C, F = build_split_frame(sc)
    for i, u in enumerate(sc.action.fields):
        v = C.anchor(F.sections[i])
        comps = [v[(C.chart.index(x),)] for x in sc.X.vars]
        assert comps == [u[(j,)].embed(C.chart) for j in range(sc.X.dim)]


def test_manin_examples():
    assert check_manin_hamiltonian(scenario("hs1").hamiltonian(), points=5).ok
    assert check_manin_hamiltonian(scenario("hs1_broken").hamiltonian(), points=5).failed


def test_f_of_a_examples():
    sc = scenario("hs1").hamiltonian()
    fib = f_of_a(sc, (Fraction(2), Fraction(-1, 3)))
    assert fib.dimension == 2 and fib.isotropic and not fib.kernel
    zero = point_scenario(1, [MultiVec(X2)], vec("x1*d/dx1&d/dx2"), X2)
    fib = f_of_a(zero, (Fraction(3), Fraction(1)))
    # graph of -Pi at x1 = 3: rows (-Pi# a, a) for a = dx1, dx2
    assert fib.vectors == [[0, -3, 1, 0], [3, 0, 0, 1]]
    assert fib.dimension == 2 and fib.isotropic
    assert check_f_of_a(zero, points=5, kernel_frame=[evaluate("dx1", X2, "form"),
                                                      evaluate("dx2", X2, "form")]).ok


def test_f_of_a_detects_non_poisson_closure():
    X3 = Chart("X", ("x1", "x2", "x3"))
    bad = point_scenario(1, [MultiVec(X3)], evaluate("x2*d/dx2&d/dx3 + d/dx1&d/dx2", X3, "vec"), X3)
    forms = [evaluate(f"dx{j}", X3, "form") for j in (1, 2, 3)]
    assert check_f_of_a(bad, points=3, kernel_frame=forms).witness_labels() == {"closure"}


def test_characteristic_examples():
    rep = characteristic_distribution(scenario("hs1").hamiltonian(), points=5)
    assert rep.ok and set(rep.data["dimensions"]) == {2}
    zero = point_scenario(1, [MultiVec(X2)], vec("d/dx1&d/dx2"), X2)
    rep = characteristic_distribution(zero, points=5)
    assert rep.ok and set(rep.data["dimensions"]) == {0}
    rep = characteristic_distribution(scenario("hs3").hamiltonian(), points=25)
    assert rep.ok and set(rep.data["dimensions"]) == {1}
    for basis in rep.data["bases"]:
        assert len(basis) == 1 and basis[0][1] == 0 and basis[0][0] != 0


def test_reduced_bracket_examples():
    sc = scenario("hs3")
    h = sc.hamiltonian()
    table, rep = reduced_bracket(h, sc.admissible, points=10, quotient=sc.quotient)
    assert rep.ok and not any(table.values())
    assert "-Pi_X" in rep.data["sign"]
    sc4 = scenario("hs4")
    table, rep = reduced_bracket(sc4.hamiltonian(), sc4.admissible, points=10,
                                 kernel_frame=sc4.kernel_frame, quotient=sc4.quotient)
    assert rep.ok and rep.data["sign"] == "-Pi_X"
    assert table[(0, 1)] == Poly.const(sc4.X, -1)


def test_reduced_bracket_independent_of_representative():
    sc4 = scenario("hs4")
    h = sc4.hamiltonian()
    pairs = [AdmissiblePair(p.f) for p in sc4.admissible]
    # d/dx1 spans the characteristic distribution of HS-4
    moved = [AdmissiblePair(p.f, canonical_hamiltonian_field(h, p.f)
                            + evaluate("(x2 - 3)*d/dx1", h.X, "vec")) for p in sc4.admissible]
    t1, r1 = reduced_bracket(h, pairs, points=5)
    t2, r2 = reduced_bracket(h, moved, points=5)
    assert r1.ok and r2.ok and t1 == t2


def test_hs1_has_no_nonconstant_admissible_functions():
    sc = scenario("hs1").hamiltonian()
    _, rep = reduced_bracket(sc, [AdmissiblePair(sc.X.coord(0))], points=3)
    assert rep.witness_labels() == {"inadmissible"}


def test_reduction_poisson_examples():
    zero = point_scenario(1, [MultiVec(X2)], MultiVec(X2), X2)
    assert check_reduction_poisson(zero, [], points=3).ok
    sc = scenario("hs3")
    assert check_reduction_poisson(sc.hamiltonian(), sc.admissible, points=10).ok
    X3 = Chart("X", ("x1", "x2", "x3"))
    fs = [AdmissiblePair(X3.coord(i)) for i in range(3)]
    good = point_scenario(1, [MultiVec(X3)], evaluate("x3*d/dx1&d/dx2 + x1*d/dx2&d/dx3", X3, "vec"), X3)
    assert check_reduction_poisson(good, fs, points=3).ok
    bad = point_scenario(1, [MultiVec(X3)], evaluate("x2*d/dx2&d/dx3 + d/dx1&d/dx2", X3, "vec"), X3)
    assert check_reduction_poisson(bad, fs, points=3).witness_labels() == {"jacobi"}


def test_quasi_poisson_examples():
    q = QuasiLieBialgebra(LieAlgebraSC(3), {}, {(0, 1, 2): 5})
    assert check_quasi_poisson(QuasiPoissonScenario(q, X2, [MultiVec(X2)] * 3, MultiVec(X2))).ok
    q2 = QuasiLieBialgebra(LieAlgebraSC(2))
    transl = [vec("d/dx1"), vec("d/dx2")]
    assert check_quasi_poisson(QuasiPoissonScenario(q2, X2, transl, vec("d/dx1&d/dx2"))).ok
    rep = check_quasi_poisson(scenario("constant_pi").quasi_poisson())
    assert rep.witness_labels() == {"omega"}
    assert rep.witnesses[0].residual == "-d/dx1&d/dx2&d/dx3"


def test_quasi_poisson_without_moment_data():
    rep = check_quasi_poisson(scenario("hs3").quasi_poisson())
    assert rep.ok and rep.data["moment"] == "skip"


@pytest.mark.parametrize("name", ["hs2", "constant_pi", "trivial", "hs_omega"])
def test_sign_correspondence_agrees(name):
    rep = check_sign_correspondence(scenario(name).quasi_poisson())
    assert rep.ok, rep


def test_sign_correspondence_moment_sign_report():
    rep = check_sign_correspondence(scenario("moment_sign").quasi_poisson())
    assert rep.data["quasi_poisson"] == "pass" and rep.data["hamiltonian"] == "fail"
    assert rep.data["moment_sign"]["s1"] == {"minus": True, "plus": False, "pullback": False}
    assert any("+(lambda)_X reading agrees" in n for n in rep.notes)


def test_bialgebroid_morphism_examples():
    S = Chart("S", ("s1", "s2"))
    Pi = evaluate("s1*d/ds1&d/ds2", S, "vec")
    Pi_X = evaluate("x1*d/dx1&d/dx2", X2, "vec")
    ident = PolyMap(X2, S, tuple(X2.coords()))
    one, zero = Poly.const(X2, 1), Poly.zero(X2)
    rep = check_bialgebroid_morphism(tangent_qlb(X2, Pi_X), tangent_qlb(S, Pi), ident,
                                     [[one, zero], [zero, one]], points=5)
    assert rep.ok
    rep = check_poisson_map(ident, evaluate("d/dx1&d/dx2", X2, "vec"), MultiVec(S), points=5)
    assert rep.failed and "pushforward" in rep.witness_labels()
    X3 = Chart("X", ("x1", "x2", "x3"))
    proj = PolyMap(X3, S, (X3.coord(0), X3.coord(1)))
    rep = check_poisson_map(proj, evaluate("x3*d/dx1&d/dx2", X3, "vec"),
                            evaluate("d/ds1&d/ds2", S, "vec"), points=5)
    assert rep.failed
    rep = check_poisson_map(proj, evaluate("d/dx1&d/dx2 + x3*d/dx2&d/dx3", X3, "vec"),
                            evaluate("d/ds1&d/ds2", S, "vec"), points=5)
    assert rep.ok and rep.data["f_dims"]


def test_bialgebroid_morphism_rejects_omega():
    S = Chart("S", ("s1",))
    q = tangent_qlb(S, MultiVec(S))
    with_omega = tangent_qlb(S, MultiVec(S))
    object.__setattr__(with_omega, "omega", evaluate("s1*e1", S, "e", 1))
    with pytest.raises(ValueError):
        check_bialgebroid_morphism(q, with_omega, PolyMap(S, S, (S.coord(0),)), [[Poly.const(S, 1)]])
