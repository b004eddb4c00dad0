"""Square-integrability of convolution powers mu_a^k, numerically.

The L2 norm of mu_a^k is a sum over spherical weights of d * |phi|^(2k).
We sum shell by shell and read the tail exponent: below -1 the series
converges, above it diverges.
"""
from grassmann_sph import make_space
from grassmann_sph.series import InconclusiveError, k_min_search, series_sweep, thresholds
from grassmann_sph.space import classify_point

space = make_space(3, 2)
print("thresholds (3,2):", thresholds(space).to_dict())

regular = classify_point(space, "1/5,1/7")
for k in (1, 2, 3):
    rep = series_sweep(space, regular, k, n_max=60, threads=4)
    print(f"k={k}: tail exponent {rep.tail_exponent:+.2f} -> {rep.verdict}")

# at t = (pi/2, pi/2) degrees grow like N^7 and |phi| like 1/N, so k = 4 is
# exactly on the boundary and the search refuses to guess
for t in ("1/5,1/7", "1/6,1/6", "1/2,1/2", "0,0"):
    try:
        k = k_min_search(space, classify_point(space, t), k_cap=8, threads=4)
    except InconclusiveError as exc:
        k = exc
    print(f"k_min at t={t}:", k)

# Sobolev weights push the threshold up
for s in (0, 2, 4):
    print(f"s={s}: k_min =", k_min_search(space, regular, s=s, k_cap=8))

# at t = (pi/2, pi/2, pi/2) in SU(7)/S(U(4) x U(3)) the k = 6 tail sits on the
# boundary: degrees grow like N^11 and |phi| like 1/N along n = (N, 1, 0)
space = make_space(4, 3)
point = classify_point(space, "1/2,1/2,1/2")
for n_max in (60, 120):
    rep = series_sweep(space, point, 6, n_max=n_max, threads=4)
    print(f"(4,3) at -1, k=6, n_max={n_max}: tail {rep.tail_exponent:+.3f} ({rep.verdict})")
try:
    k_min_search(space, point)
except InconclusiveError as exc:
    print("k_min search:", exc)
