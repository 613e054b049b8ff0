"""Sequential measurements are order-sensitive and genuinely temporal.

A projective measurement updates the state (Lüders rule), so a later
measurement sees the disturbance of an earlier one. The three-step
correlator <A B C> generally changes when the temporal order is reversed,
and repeating a measurement twice always reproduces its outcome.
"""

import numpy as np

from tempcert import canonical_scenario, exact_sequence_distribution, random_scenario, triple_corr

s = canonical_scenario()
rho = s.density()

print("--- Lüders chains on the canonical pair (A1, A4)")
dist = exact_sequence_distribution(rho, [s.observable(1), s.observable(4)])
for outcome, p in dist.probabilities.items():
    print(f"P{outcome} = {p:.4f}")
print("outcomes are perfectly correlated; the correlator is",
      f"{dist.correlator():.4f}")

print("\n--- repeating a measurement reproduces its outcome")
dist = exact_sequence_distribution(rho, [s.observable(1), s.observable(1)])
print("P(+,-) =", dist.probabilities[(1, -1)], " P(-,+) =", dist.probabilities[(-1, 1)])

print("\n--- order sensitivity of the triple correlator")
rng = np.random.Generator(np.random.PCG64(5))
r = random_scenario(4, rng)
fwd = triple_corr(r.density(), r.observable(1), r.observable(2), r.observable(3))
rev = triple_corr(r.density(), r.observable(3), r.observable(2), r.observable(1))
print(f"<A1 A2 A3> measured 1->2->3: {fwd:+.6f}")
print(f"<A3 A2 A1> measured 3->2->1: {rev:+.6f}")
print(f"difference: {fwd - rev:+.6f}  (zero only under extra commutation)")
