"""
Graphs of bivectors as Dirac structures
=======================================

In the standard Courant algebroid of R^3 the graph of a bivector is closed
under the Dorfman bracket exactly when the bivector is Poisson. We sample a
few bivectors and compare the two verdicts.
"""
import random

from maninspace.courant import check_courant_axioms, check_dirac, graph_frame, standard_courant
from maninspace.linalg import random_poly
from maninspace.scenario import evaluate
from maninspace.symcalc import Chart, MultiVec, schouten

X = Chart("X", ("x1", "x2", "x3"))
C = standard_courant(X)

# the axioms themselves, on 100 random section triples
print(check_courant_axioms(C, trials=100, seed=0))

# a linear Poisson structure (so(3)*) and a non-Poisson one
for text in ("x3*d/dx1&d/dx2 + x1*d/dx2&d/dx3 + x2*d/dx3&d/dx1",
             "x2*d/dx2&d/dx3 + d/dx1&d/dx2"):
    Pi = evaluate(text, X, "vec")
    print(text)
    print("  [Pi,Pi] =", schouten(Pi, Pi).render() or "0")
    print("  dirac:", check_dirac(C, graph_frame(C, Pi), points=5).status)

# random bivectors: agreement count
rng = random.Random(1)
agree = 0
for _ in range(10):
    Pi = MultiVec(X)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        Pi = Pi + (MultiVec.partial(X, i) & MultiVec.partial(X, j)) * random_poly(X, rng, 1, 2)
    agree += check_dirac(C, graph_frame(C, Pi), points=3).ok == (not schouten(Pi, Pi))
print(f"agreement on {agree}/10 random bivectors")
