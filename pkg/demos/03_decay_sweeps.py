"""How fast |phi_lambda(a)| decays, compared with the known envelopes.

Each sweep divides |phi| by an envelope (constant 1) and reports the
maximum per shell n_1 = N. A bounded ratio shows up as a flat or falling
log-log slope; overall_sup estimates the hidden constant.
"""
import numpy as np

from grassmann_sph import make_space
from grassmann_sph.bounds import BoundKind, ratio_sweep
from grassmann_sph.space import classify_point

space = make_space(3, 2)
runs = [
    (BoundKind.REGULAR, "1/5,1/7"),
    (BoundKind.PRIOR_REGULAR, "1/5,1/7"),
    (BoundKind.GENERAL_PQ_STRICT, "1/6,1/6"),
    (BoundKind.FLAT_INTERIOR, "1/6,1/6"),
    (BoundKind.MINUS_ONE, "1/2,1/2"),
]
for kind, t in runs:
    rep = ratio_sweep(kind, space, classify_point(space, t), n_max=40)
    print(f"{kind.value:18s} t={t:8s} slope={rep.log_log_slope:+.3f}  sup={rep.overall_sup:.3g}")

# for p - q >= 2 the ratio climbs for a while before levelling off
space = make_space(4, 2)
rep = ratio_sweep(BoundKind.REGULAR, space, classify_point(space, "1/5,1/7"), n_max=60, threads=4)
m = np.array(rep.max_ratio_per_shell)
print("(4,2) regular: first-half sup %.1f, second-half sup %.1f, slope %+.3f"
      % (m[:30].max(), m[30:].max(), rep.log_log_slope))

print(rep.to_csv().splitlines()[:4])
