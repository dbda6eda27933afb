"""
Reduction by a translation action
=================================

R acts on R^3 by d/dx1 and Pi_X = d/dx2 ^ d/dx3. Functions of x2 and x3 are
admissible; the reduced bracket lives on the (x2, x3) plane.
"""
from pathlib import Path

from maninspace.hamiltonian import (characteristic_distribution, check_reduction_poisson,
                                    reduced_bracket)
from maninspace.scenario import load_scenario

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

sc = load_scenario((FIXTURES / "hs4.scn").read_text())
h = sc.hamiltonian()

# the characteristic distribution is spanned by the action field
rep = characteristic_distribution(h, points=5)
print("dimensions:", rep.data["dimensions"], "first basis:", [[str(c) for c in v] for v in rep.data["bases"][0]])

# brackets between admissible functions, compared with the projection of +-Pi_X
table, rep = reduced_bracket(h, sc.admissible, points=5, kernel_frame=sc.kernel_frame,
                             quotient=sc.quotient)
for (p, q), v in sorted(table.items()):
    print(f"{{{sc.admissible[p].name()}, {sc.admissible[q].name()}}} = {v.render() or '0'}")
print("sign:", rep.data["sign"])

# skew symmetry and Jacobi on the reduced space
print(check_reduction_poisson(h, sc.admissible, points=5, kernel_frame=sc.kernel_frame))
