"""Fixing the constant in the fully confluent formula.

At the identity every node equals 1 and the determinant turns into a
Wronskian-like matrix of derivatives at 1. Requiring phi(e) = 1 pins the
constant; we test which of the candidate closed forms survives.
"""
from grassmann_sph import make_space
from grassmann_sph.spherical import get_calibration

for q in (2, 3, 4):
    rec = get_calibration(make_space(q + 1, q))
    print(f"q={q}: constant {rec.confluent_constant} from {rec.samples} weights, "
          f"hermite sign {rec.hermite_sign}")
    for name, value in rec.candidates.items():
        mark = "ok" if name in rec.matches else "--"
        print(f"    {mark} {name:32s} {value}")

# at x = -1 the Hermite formula collapses to a product of binomials times kappa
for p, q in [(3, 2), (4, 3), (5, 4)]:
    print(f"kappa({p},{q}) =", get_calibration(make_space(p, q)).minus_one_kappa)
