"""
Quasi-Poisson spaces and a sign
===============================

A quasi-Lie bialgebra with nonzero Omega, its double, and quasi-Poisson
spaces read as Hamiltonian spaces after flipping the sign of Pi_X.
"""
from pathlib import Path

from maninspace.hamiltonian import check_quasi_poisson, check_sign_correspondence
from maninspace.liestruct import LieAlgebraSC, QuasiLieBialgebra, build_double, check_ad_invariance, check_jacobi
from maninspace.scenario import load_scenario

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# abelian g = R^3 with Omega = e1^e2^e3: the double is a Lie algebra
q = QuasiLieBialgebra(LieAlgebraSC(3), {}, {(0, 1, 2): 1})
d = build_double(q)
print("jacobi:", check_jacobi(d).status, " ad-invariance:", check_ad_invariance(d).status)
print("[eps1, eps2] =", [str(c) for c in d.bracket(d.unit(3), d.unit(4))], "(coordinates e1 e2 e3 eps1 eps2 eps3)")

# both readings of each fixture
for name in ("hs2", "constant_pi", "trivial", "hs_omega", "moment_sign"):
    sc = load_scenario((FIXTURES / f"{name}.scn").read_text()).quasi_poisson()
    qp = check_quasi_poisson(sc)
    sign = check_sign_correspondence(sc)
    print(f"{name:12s} quasi-Poisson {qp.status:4s}  agreement {sign.status}")
    for n in sign.notes:
        print("   ", n)
