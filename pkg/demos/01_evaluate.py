"""Evaluating spherical functions on SU(5)/S(U(3) x U(2)).

Torus points are given as angles in units of pi, so "1/5,1/7" means
t = (pi/5, pi/7). Coinciding cosines are handled by the confluent path.
"""
from fractions import Fraction

import numpy as np

from grassmann_sph import make_space
from grassmann_sph.space import SphericalWeight, classify_point, enumerate_weights, identity_point
from grassmann_sph.spherical import EvalRequest, evaluate, oracle_exact, phi_batch

space = make_space(3, 2)
print(space.label, "rank", space.rank, "rho", space.rho)

w = SphericalWeight((3, 1))
for t in ("1/5,1/7", "1/5,1/5", "1/2,1/2", "0,0"):
    point = classify_point(space, t)
    result = evaluate(EvalRequest(space, w, point))
    print(f"t={t:8s} blocks={point.blocks}  phi={result.value: .12f}  via {result.path_taken}")

# exact arithmetic needs rational cosines, e.g. t = (pi/6, pi/3)
exact = oracle_exact(EvalRequest(space, w, classify_point(space, "1/6,1/3")))
print("exact value at (pi/6, pi/3):", exact, "=", float(exact))

# phi at the identity is 1 for every weight
n = np.array([v.n for v in enumerate_weights(space, 20)])
print("max |phi(e) - 1| over", len(n), "weights:",
      np.abs(phi_batch(space, identity_point(space), n) - 1).max())

# cosines can also be given directly
req = EvalRequest.at_nodes(make_space(2, 2), SphericalWeight((1, 0)), [Fraction(1, 2), Fraction(-1, 3)])
print("p=q=2, nodes (1/2, -1/3):", oracle_exact(req))
