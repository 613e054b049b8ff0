"""The temporal and compatibility-assuming expressions, their bounds, and the
four relabeling symmetries.

The temporal expression needs no commutation assumptions; the companion
expression I_NC assumes the five measurement contexts commute, which this
module checks rather than assumes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import BadTransformId
from .scenario import Observable, Scenario
from .seqcorr import CorrelationSet, correlations

#: Maximum of the expression over deterministic +-1 assignments. Stored as a
#: constant but recomputed by classical_bound(); tests cross-check the two.
CLASSICAL_BOUND = 3.0

#: Algebraic maximum over quantum realizations (each correlator is bounded by
#: one). Never hard-trusted: the optimizer soundness tests re-derive it.
QUANTUM_BOUND = 5.0

#: Commutator pairs that would have to vanish for the five contexts
#: {A1,A4}, {A2,A5}, {A3,A6}, {A1,A2,A3}, {A4,A5,A6} to be compatible.
CONTEXT_PAIRS = (
    (1, 4), (2, 5), (3, 6),
    (1, 2), (1, 3), (2, 3),
    (4, 5), (4, 6), (5, 6),
)


@dataclass
class InequalityValue:
    value: float
    classical_bound: float = CLASSICAL_BOUND
    quantum_bound: float = QUANTUM_BOUND
    deficit: float = 0.0

    @classmethod
    def from_value(cls, value: float) -> "InequalityValue":
        return cls(value=value, deficit=QUANTUM_BOUND - value)


@dataclass
class CompatibilityReport:
    """Operator norms of the nine context commutators."""

    commutator_norms: dict
    tol: float = 1e-8

    @property
    def compatible(self) -> bool:
        return max(self.commutator_norms.values()) <= self.tol

    @property
    def max_norm(self) -> float:
        return max(self.commutator_norms.values())


def eval_IT(c: CorrelationSet) -> InequalityValue:
    """Temporal expression value from a set of sequential correlators.

    value = (triple_123 + triple_213 + triple_456 + triple_546)/2
            + pair_14 + pair_25 - pair_36
    """
    value = (
        0.5 * (c.triple_123 + c.triple_213 + c.triple_456 + c.triple_546)
        + c.pair_14 + c.pair_25 - c.pair_36
    )
    return InequalityValue.from_value(float(value))


def eval_IT_scenario(s: Scenario) -> InequalityValue:
    return eval_IT(correlations(s, "analytic"))


def eval_INC(s: Scenario):
    """Compatibility-assuming expression plus a commutator report.

    value = <A1A2A3> + <A4A5A6> + <A1A4> + <A2A5> - <A3A6> with plain
    operator products under Re tr(rho .). Always evaluated, even for
    incompatible observables; the report flags when the result is not
    physically meaningful (some context commutator norm above 1e-8).
    """
    rho = s.density()
    a = s.matrices()

    def ev(*slots):
        prod = a[slots[0] - 1]
        for k in slots[1:]:
            prod = prod @ a[k - 1]
        return float(np.trace(rho @ prod).real)

    value = ev(1, 2, 3) + ev(4, 5, 6) + ev(1, 4) + ev(2, 5) - ev(3, 6)
    norms = {
        (i, j): linalg.op_norm(linalg.comm(a[i - 1], a[j - 1]))
        for i, j in CONTEXT_PAIRS
    }
    return value, CompatibilityReport(norms)


def classical_bound():
    """Enumerate all 64 deterministic assignments and maximize the expression.

    Returns the bound (an integer) and every maximizing assignment
    (a1, ..., a6).
    """
    best = None
    argmax = []
    for a in itertools.product((1, -1), repeat=6):
        v = a[0] * a[1] * a[2] + a[3] * a[4] * a[5] + a[0] * a[3] + a[1] * a[4] - a[2] * a[5]
        if best is None or v > best:
            best = v
            argmax = [a]
        elif v == best:
            argmax.append(a)
    return best, argmax


@dataclass(frozen=True)
class SymmetryTransform:
    """Relabeling of the six observable slots, possibly with sign flips.

    relabeling maps slot -> (source slot, sign); slots not listed are left
    alone. Each of the four built-ins is an involution on the slots.
    """

    id: int
    relabeling: tuple  # tuple of (slot, source, sign)

    def source(self, slot: int):
        for sl, src, sign in self.relabeling:
            if sl == slot:
                return src, sign
        return slot, 1


SYMMETRIES = {
    1: SymmetryTransform(1, ((1, 2, 1), (2, 1, 1), (4, 5, 1), (5, 4, 1))),
    2: SymmetryTransform(2, ((1, 3, 1), (3, 1, 1), (4, 6, -1), (6, 4, -1))),
    3: SymmetryTransform(3, ((2, 3, -1), (3, 2, -1), (5, 6, 1), (6, 5, 1))),
    4: SymmetryTransform(4, ((1, 4, 1), (4, 1, 1), (2, 5, 1), (5, 2, 1), (3, 6, 1), (6, 3, 1))),
}


def get_symmetry(tid: int) -> SymmetryTransform:
    try:
        return SYMMETRIES[tid]
    except KeyError:
        raise BadTransformId(f"transform id must be 1..4, got {tid!r}") from None


def apply_symmetry(s: Scenario, t: SymmetryTransform) -> Scenario:
    """Relabel and sign-flip the observables of a scenario; state unchanged."""
    if t.id not in SYMMETRIES:
        raise BadTransformId(f"transform id must be 1..4, got {t.id!r}")
    new = []
    for slot in range(1, 7):
        src, sign = t.source(slot)
        m = s.observable(src).matrix
        new.append(Observable(sign * m) if sign != 1 else s.observable(src))
    return Scenario(s.state, new)


def symmetry_residual(s: Scenario, t: SymmetryTransform) -> float:
    """Change of the temporal value under transform 2 or 3.

    Transforms 1 and 4 are exact operator identities of the expression;
    2 and 3 shift it by double-commutator expectations that vanish when the
    triple observables pairwise commute, so only those two have a residual
    worth measuring.
    """
    if t.id not in (2, 3):
        raise BadTransformId(f"residual defined for transforms 2 and 3, got {t.id!r}")
    before = eval_IT_scenario(s).value
    after = eval_IT_scenario(apply_symmetry(s, t)).value
    return after - before
