"""Self-testing extraction: subspace, algebra residuals, alignment, fidelity.

Pipeline: from a (purified) scenario build the four-generator subspace V,
orthonormalize it with the Gram-matrix inverse square root, project the six
observables onto V, construct the alignment unitary from the projected
operator algebra, and read off the extracted state and its overlap with the
maximally entangled target.

Convention note: the alignment unitary U maps V-coordinates to the reference
frame, acting as A -> U A U† on operators and psi -> U psi on the state.
This is the unique pairing under which the extracted state and the aligned
observables reproduce the observed correlations; reported distances are
unchanged if U is read in the opposite (daggered) role, since the operator
norm is unitarily invariant.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    AnticommutatorTooLarge,
    FactorizationFailure,
    RankDeficient,
    ShapeMismatch,
    SubspaceDegenerate,
    ZeroEigenvalue,
)
from .inequality import InequalityValue, eval_IT
from .scenario import (
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    Observable,
    PureState,
    Scenario,
    atomic_write_text,
    project_involution,
    purify_scenario,
)
from .seqcorr import correlations

#: Reference observables on C^2 (x) C^2, slots 1..6.
TARGET_MATRICES = (
    np.kron(PAULI_X, PAULI_I),
    np.kron(PAULI_I, PAULI_Z),
    np.kron(PAULI_X, PAULI_Z),
    np.kron(PAULI_I, PAULI_X),
    np.kron(PAULI_Z, PAULI_I),
    np.kron(PAULI_Z, PAULI_X),
)

#: Reference state (|00> + |11>)/sqrt(2).
PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)

#: Commutators that vanish on V at maximal violation.
COMMUTING_PAIRS = ((1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6), (1, 4), (2, 5), (3, 6))

#: Anticommutators that vanish on V at maximal violation.
ANTICOMMUTING_PAIRS = ((1, 5), (1, 6), (2, 4), (2, 6), (3, 4), (3, 5))

#: Stabilizer-style state constraints at maximal violation: for each entry
#: (slots, sign), the product of the slots applied to psi equals sign * psi.
STATE_CONSTRAINTS = tuple(
    [(perm, 1) for perm in itertools.permutations((1, 2, 3))]
    + [(perm, 1) for perm in itertools.permutations((4, 5, 6))]
    + [((1, 4), 1), ((4, 1), 1), ((2, 5), 1), ((5, 2), 1), ((3, 6), -1), ((6, 3), -1)]
)


def build_subspace(psi, a1, a5, cutoff: float = linalg.INV_SQRT_CUTOFF):
    """Orthonormal basis for V = span{psi, A1 psi, A5 psi, A1 A5 psi}.

    The Gram matrix of the generators is inverted through its square root,
    phi_m = sum_n [Gamma^{-1/2}]_{nm} g_n, so the basis depends smoothly on
    the generators (symmetric orthogonalization). A Gram eigenvalue at or
    below `cutoff` means the generators are linearly dependent and a
    4-dimensional certification target cannot be extracted.

    Returns (basis, gram, projector): basis columns are the phi_m, projector
    is the d x d orthogonal projection onto V.
    """
    v = psi.amplitudes if isinstance(psi, PureState) else linalg.as_vector(psi)
    m1 = a1.matrix if isinstance(a1, Observable) else linalg.as_matrix(a1)
    m5 = a5.matrix if isinstance(a5, Observable) else linalg.as_matrix(a5)
    if m1.shape[0] != v.shape[0] or m5.shape[0] != v.shape[0]:
        raise ShapeMismatch("state and observables must share a dimension")
    if v.shape[0] < 4:
        raise ShapeMismatch(f"dimension {v.shape[0]} < 4 cannot hold the subspace")
    gens = np.column_stack([v, m1 @ v, m5 @ v, m1 @ (m5 @ v)])
    gram = linalg.hermitize(gens.conj().T @ gens)
    try:
        inv_sqrt = linalg.inv_sqrt_psd(gram, cutoff=cutoff, full_rank=True)
    except RankDeficient as exc:
        raise SubspaceDegenerate(f"subspace generators are linearly dependent: {exc}") from exc
    basis = gens @ inv_sqrt
    projector = basis @ basis.conj().T
    return basis, gram, projector


def algebra_residuals(s: Scenario, basis: np.ndarray):
    """Residuals of the algebraic relations that hold at maximal violation.

    Returns three dicts: operator norms of the nine commutators and six
    anticommutators compressed to V (basis† [.,.] basis), and the norms
    ||(A_i A_j ... -+ 1) psi|| for every stabilizer-style constraint
    including permutations. The scenario state must be pure (purify first).
    """
    if not s.is_pure():
        raise ShapeMismatch("algebra_residuals needs a pure state; purify first")
    mats = s.matrices()
    psi = s.state.amplitudes
    bd = basis.conj().T

    comm = {}
    for i, j in COMMUTING_PAIRS:
        comm[f"A{i}A{j}"] = linalg.op_norm(bd @ linalg.comm(mats[i - 1], mats[j - 1]) @ basis)
    acomm = {}
    for i, j in ANTICOMMUTING_PAIRS:
        acomm[f"A{i}A{j}"] = linalg.op_norm(bd @ linalg.acomm(mats[i - 1], mats[j - 1]) @ basis)

    constraints = {}
    for slots, sign in STATE_CONSTRAINTS:
        vec = psi
        for k in reversed(slots):
            vec = mats[k - 1] @ vec
        name = "".join(f"A{k}" for k in slots) + ("-1" if sign == 1 else "+1")
        constraints[name] = linalg.vec_norm(vec - sign * psi)
    return comm, acomm, constraints


@dataclass
class AlignmentResult:
    unitary: np.ndarray
    aligned_observables: list
    sign3: float
    sign6: float
    distances: list


def _second_factor_block(m: np.ndarray) -> np.ndarray:
    """Second-factor operator M from a 4x4 matrix close to 1 (x) M."""
    return (m[:2, :2] + m[2:, 2:]) / 2


def align(projected_observables, extracted_state_raw, eigenspace_gauge=None) -> AlignmentResult:
    """Construct the alignment unitary from the projected observables.

    The six 4x4 inputs are rounded to exact involutions, which are then used
    for the exact basis algebra; the reported aligned observables and
    distances use the raw inputs, so all approximation stays visible.

    Steps: (i) split the space along the +1 eigenspace {e1, e2} of the
    rounded slot-5 operator and its slot-1 images f_i = A1 e_i, giving
    A5 -> Z(x)1 and A1 -> X(x)1; (ii) read the second-factor operators of
    slots 2 and 4 and rotate them to Z and X; (iii) record the residual signs
    of slots 3 and 6 against the +-X(x)Z and +-Z(x)X forms. Distances are
    always measured against the +1-sign targets, which is the sign choice the
    stabilizer constraints enforce at maximal violation.

    `eigenspace_gauge` (a 2x2 unitary mixing e1, e2) exists to demonstrate
    that reported fidelities and distances do not depend on eigenbasis
    tie-breaking; leave it None in normal use.
    """
    raw = [linalg.as_matrix(m) for m in projected_observables]
    if len(raw) != 6 or any(m.shape != (4, 4) for m in raw):
        raise ShapeMismatch("align expects six 4x4 projected observables")
    psi_v = linalg.as_vector(extracted_state_raw)

    try:
        rounded = [project_involution(linalg.hermitize(m)).matrix for m in raw]
    except ZeroEigenvalue as exc:
        raise AnticommutatorTooLarge(
            f"projected observable cannot be rounded to an involution: {exc}"
        ) from exc
    a1r, a5r = rounded[0], rounded[4]
    ac15 = linalg.op_norm(linalg.acomm(a1r, a5r))
    if ac15 > 0.5:
        raise AnticommutatorTooLarge(
            f"||{{A1, A5}}|| = {ac15:.3f} after rounding exceeds 0.5"
        )

    w5, v5 = linalg.eig_hermitian(a5r)
    plus = v5[:, w5 > 0]
    # ||{A1, A5}|| <= 0.5 forces a balanced 2-2 spectrum split.
    if plus.shape[1] != 2:
        raise AnticommutatorTooLarge(
            f"slot-5 +1 eigenspace has dimension {plus.shape[1]}, expected 2"
        )
    overlaps = np.abs(plus.conj().T @ psi_v)
    order = np.argsort(-overlaps, kind="stable")
    e = plus[:, order]
    if eigenspace_gauge is not None:
        e = e @ linalg.as_matrix(eigenspace_gauge)
    f = a1r @ e
    w0 = np.column_stack([e, f])
    # Loewdin correction: with finite anticommutator residue the columns are
    # only approximately orthonormal.
    w = w0 @ linalg.inv_sqrt_psd(linalg.hermitize(w0.conj().T @ w0))

    frame1 = [w.conj().T @ m @ w for m in rounded]

    m_op = linalg.hermitize(_second_factor_block(frame1[1]))
    o_op = linalg.hermitize(_second_factor_block(frame1[3]))
    try:
        m_r = project_involution(m_op).matrix
        o_r = project_involution(o_op).matrix
    except ZeroEigenvalue as exc:
        raise FactorizationFailure(
            f"second-factor operator has no involution rounding: {exc}"
        ) from exc
    if (linalg.op_norm(m_op - m_r) > 0.5 or linalg.op_norm(o_op - o_r) > 0.5
            or linalg.op_norm(linalg.acomm(m_r, o_r)) > 0.5):
        raise FactorizationFailure(
            "second-factor operators are not close to anticommuting involutions"
        )
    wm, vm = linalg.eig_hermitian(m_r)
    m_plus, m_minus = vm[:, 0], vm[:, 1]
    c = complex(m_plus.conj() @ (o_r @ m_minus))
    if abs(c) < 0.5:
        raise FactorizationFailure(
            f"slot-4 second-factor off-diagonal element {abs(c):.3f} too small"
        )
    u2 = np.column_stack([m_plus, m_minus * (c.conjugate() / abs(c))])

    unitary = np.kron(np.eye(2), u2).conj().T @ w.conj().T
    aligned = [unitary @ m @ unitary.conj().T for m in raw]

    sign3 = 1.0 if np.trace(aligned[2] @ TARGET_MATRICES[2]).real >= 0 else -1.0
    sign6 = 1.0 if np.trace(aligned[5] @ TARGET_MATRICES[5]).real >= 0 else -1.0
    distances = [linalg.op_norm(a - t) for a, t in zip(aligned, TARGET_MATRICES)]
    return AlignmentResult(unitary, aligned, sign3, sign6, distances)


@dataclass
class CertificationReport:
    violation: InequalityValue
    subspace_basis: np.ndarray
    gram: np.ndarray
    projector: np.ndarray
    projected_observables: list
    leakage: list
    commutator_residuals: dict
    anticommutator_residuals: dict
    constraint_residuals: dict
    alignment_unitary: np.ndarray
    aligned_observables: list
    sign3: float
    sign6: float
    extracted_state: PureState
    fidelity: float
    operator_distances: list
    fidelity_witness: float
    fidelity_lower_bound: float

    @property
    def max_operator_distance(self) -> float:
        return max(self.operator_distances)

    def to_dict(self) -> dict:
        def cm(a):  # complex matrix -> nested rows of [re, im]
            arr = np.asarray(a, dtype=complex)
            return [[[float(z.real), float(z.imag)] for z in row] for row in arr]

        return {
            "violation": {
                "value": self.violation.value,
                "classical_bound": self.violation.classical_bound,
                "quantum_bound": self.violation.quantum_bound,
                "deficit": self.violation.deficit,
            },
            "subspace_basis": cm(self.subspace_basis),
            "gram": cm(self.gram),
            "projector": cm(self.projector),
            "projected_observables": [cm(m) for m in self.projected_observables],
            "leakage": [float(x) for x in self.leakage],
            "commutator_residuals": dict(self.commutator_residuals),
            "anticommutator_residuals": dict(self.anticommutator_residuals),
            "constraint_residuals": dict(self.constraint_residuals),
            "alignment_unitary": cm(self.alignment_unitary),
            "aligned_observables": [cm(m) for m in self.aligned_observables],
            "sign3": self.sign3,
            "sign6": self.sign6,
            "extracted_state": [[float(z.real), float(z.imag)]
                                for z in self.extracted_state.amplitudes],
            "fidelity": self.fidelity,
            "operator_distances": [float(x) for x in self.operator_distances],
            "fidelity_witness": self.fidelity_witness,
            "fidelity_lower_bound": self.fidelity_lower_bound,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def save(self, path) -> None:
        atomic_write_text(path, self.to_json() + "\n")


def _witness_value(psi4: np.ndarray) -> float:
    """Overlap with the maximally entangled target, via the stabilizer form
    (1 + <XX> - <YY> + <ZZ>)/4."""
    xx = np.kron(PAULI_X, PAULI_X)
    yy = np.kron(PAULI_Y, PAULI_Y)
    zz = np.kron(PAULI_Z, PAULI_Z)
    ev = lambda op: (psi4.conj() @ (op @ psi4)).real
    return float((1 + ev(xx) - ev(yy) + ev(zz)) / 4)


def _witness_lower_bound(aligned, distances, psi4: np.ndarray) -> float:
    """Certified witness lower bound assembled from operator distances.

    Each stabilizer expectation obeys <PQ> = 1 - ||(P(x)1 - 1(x)Q) psi||^2/2
    for the relevant factor pair, and the triangle chain through the aligned
    observables bounds that norm by d_i + ||(A_i -+ A_j) psi|| + d_j.
    """
    def diff_norm(i, j, sign):
        return linalg.vec_norm((aligned[i - 1] + sign * aligned[j - 1]) @ psi4)

    t_xx = distances[0] + diff_norm(1, 4, -1) + distances[3]
    t_zz = distances[4] + diff_norm(5, 2, -1) + distances[1]
    t_yy = distances[2] + diff_norm(3, 6, +1) + distances[5]
    terms = [max(1 - t * t / 2, -1.0) for t in (t_xx, t_yy, t_zz)]
    return float(max((1 + sum(terms)) / 4, 0.0))


def certify(s: Scenario) -> CertificationReport:
    """Run the full extraction pipeline on a scenario.

    Mixed states are purified first. The extracted state is the alignment
    image of the normalized projection of psi onto V, with its global phase
    fixed so the overlap with the reference state is real nonnegative.
    """
    s = purify_scenario(s)
    violation = eval_IT(correlations(s, "analytic"))

    psi = s.state
    basis, gram, projector = build_subspace(psi, s.observable(1), s.observable(5))
    comm, acomm, constraints = algebra_residuals(s, basis)

    eye = np.eye(s.dim)
    mats = s.matrices()
    leakage = [linalg.op_norm(projector @ m @ (eye - projector)) for m in mats]
    projected = [basis.conj().T @ m @ basis for m in mats]

    psi_v = basis.conj().T @ psi.amplitudes
    psi_v = psi_v / linalg.vec_norm(psi_v)

    result = align(projected, psi_v)
    extracted = result.unitary @ psi_v
    overlap = complex(PHI_PLUS.conj() @ extracted)
    if abs(overlap) > 1e-12:
        extracted = extracted * (overlap.conjugate() / abs(overlap))
    extracted = extracted / linalg.vec_norm(extracted)
    fidelity = float(abs(PHI_PLUS.conj() @ extracted) ** 2)

    return CertificationReport(
        violation=violation,
        subspace_basis=basis,
        gram=gram,
        projector=projector,
        projected_observables=projected,
        leakage=leakage,
        commutator_residuals=comm,
        anticommutator_residuals=acomm,
        constraint_residuals=constraints,
        alignment_unitary=result.unitary,
        aligned_observables=result.aligned_observables,
        sign3=result.sign3,
        sign6=result.sign6,
        extracted_state=PureState(extracted),
        fidelity=fidelity,
        operator_distances=result.distances,
        fidelity_witness=_witness_value(extracted),
        fidelity_lower_bound=_witness_lower_bound(
            result.aligned_observables, result.distances, extracted
        ),
    )
