"""
Calibrating on the plane
========================

The tangent algebroid of R^2 with Pi = s1 d/ds1 ^ d/ds2, acting on itself
through the identity. Every identity holds exactly; shifting Pi_X by a
constant breaks exactly one of them.
"""
from pathlib import Path

from maninspace.hamiltonian import base_canonical_pis, check_hamiltonian_qlb, check_manin_hamiltonian
from maninspace.scenario import load_scenario

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# load the scenario file and build the split data (action, Pi_X, J)
sc = load_scenario((FIXTURES / "hs1.scn").read_text()).hamiltonian()
print("S chart:", sc.S, " X chart:", sc.X)

# the bivector the quasi-Lie bialgebroid induces on its base
Pi_S, rep = base_canonical_pis(sc.qlb)
print("Pi_S =", Pi_S.render(), "|", rep.status)

# split conditions, then the same question asked of the generalized Dirac structure
print(check_hamiltonian_qlb(sc))
print(check_manin_hamiltonian(sc, points=10))

# Pi_X = (x1 + 1) d/dx1 ^ d/dx2 is still Poisson but no longer matches delta
broken = load_scenario((FIXTURES / "hs1_broken.scn").read_text()).hamiltonian()
rep = check_hamiltonian_qlb(broken)
for w in rep.witnesses:
    print("witness:", w)

# the Dirac check blames the matching frame sections
manin = check_manin_hamiltonian(broken, points=10)
print("manin verdict:", manin.status, "classes:", manin.data["classes"])
