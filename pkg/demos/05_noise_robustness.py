"""Noise sweeps: the certification degrades gracefully and every
quantitative robustness bound holds at the observed deficit.

Depolarizing noise shifts the value linearly (5 - 3p with the canonical
measurements); tilting one observable moves the aligned operators like
sqrt(eps) and the extracted state like eps. The bound suite (correlator
floors, state-norm families at 4 sqrt(eps) and 2 sqrt(eps), anticommutator
family at 14 sqrt(eps)) never reports a violation.
"""

import numpy as np

from tempcert import canonical_scenario, fit_loglog_slope, sweep
from tempcert.robustness import Depolarizing, ObservableTilt, sweep_csv

s = canonical_scenario()

print("--- depolarizing sweep: the deficit is exactly 3p")
rows = sweep(s, lambda p: Depolarizing(p), list(np.geomspace(1e-5, 1e-2, 7)))
print(f"{'p':>10} {'epsilon':>12} {'I_T':>16} {'fidelity':>10} {'bounds':>7}")
for r in rows:
    print(f"{r.param:>10.1e} {r.epsilon:>12.4e} {r.value:>16.12f} "
          f"{r.fidelity:>10.6f} {str(r.bounds_all_hold):>7}")

print("\n--- tilt sweep on slot 1: scaling exponents")
thetas = list(np.geomspace(5e-4, 5e-2, 11))
rows = sweep(s, lambda t: ObservableTilt(1, t), thetas)
eps = [r.epsilon for r in rows]
dist_slope = fit_loglog_slope(eps, [r.max_operator_distance for r in rows])
fid_slope = fit_loglog_slope(eps, [1 - r.fidelity for r in rows])
print(f"max operator distance ~ eps^{dist_slope:.3f}")
print(f"fidelity deficit      ~ eps^{fid_slope:.3f}")

print("\n--- the per-bound detail at one noise point")
noisy_checks = rows[5].bound_checks
for c in noisy_checks[:8]:
    print(f"{c.name:<32} lhs={c.lhs:.4e}  rhs={c.rhs:.4e}  holds={c.holds}")
print(f"... {len(noisy_checks)} checks total, all hold: "
      f"{all(c.holds for c in noisy_checks)}")

print("\n--- CSV output (first rows)")
print("\n".join(sweep_csv(rows).splitlines()[:4]))
