"""States, observables, six-observable scenarios, and the canonical realization.

Basis convention: qubit ordering |00>, |01>, |10>, |11>, first factor leftmost
in every Kronecker product. This convention is load-bearing for the scenario
file format, which stores matrices row-major in exactly this basis.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from . import linalg
from .errors import (
    NonInvolution,
    NotHermitian,
    ParseError,
    ShapeMismatch,
    ZeroEigenvalue,
)

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

#: Default acceptance tolerance for deviation from A @ A == 1. Noise models
#: and optimizer iterates are near-involutions; exactness is not demanded.
INVOLUTION_TOL = 1e-8

#: Cutoff below which an eigenvalue has no well-defined sign.
SIGN_CUTOFF = 1e-8


class Observable:
    """Hermitian matrix intended as a +-1-outcome projective measurement.

    The deviation of ``matrix @ matrix`` from the identity (operator norm) is
    recorded as ``involution_residual`` and must not exceed
    ``involution_tol``.
    """

    __slots__ = ("matrix", "involution_residual")

    def __init__(self, matrix, hermitian_tol: float = linalg.STRUCTURAL_TOL,
                 involution_tol: float = INVOLUTION_TOL):
        m = linalg.as_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise ShapeMismatch(f"observable must be square, got {m.shape}")
        defect = linalg.op_norm(m - m.conj().T)
        if defect > hermitian_tol:
            raise NotHermitian(
                f"observable deviates from Hermitian by {defect:.3e}"
            )
        residual = linalg.op_norm(m @ m - np.eye(m.shape[0]))
        if residual > involution_tol:
            raise NonInvolution(
                f"involution residual {residual:.3e} exceeds {involution_tol:.1e}"
            )
        m.setflags(write=False)
        self.matrix = m
        self.involution_residual = float(residual)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"Observable(dim={self.dim}, involution_residual={self.involution_residual:.2e})"


class PureState:
    """Normalized state vector."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes, norm_tol: float = 1e-12):
        v = linalg.as_vector(amplitudes)
        n = linalg.vec_norm(v)
        if abs(n - 1.0) > norm_tol:
            raise ValueError(f"state norm {n!r} deviates from 1 by more than {norm_tol:.1e}")
        v.setflags(write=False)
        self.amplitudes = v

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def density(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def __repr__(self):
        return f"PureState(dim={self.dim})"


class DensityMatrix:
    """Trace-one positive-semidefinite Hermitian matrix."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, hermitian_tol: float = linalg.STRUCTURAL_TOL,
                 trace_tol: float = 1e-12):
        m = linalg.as_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise ShapeMismatch(f"density matrix must be square, got {m.shape}")
        defect = linalg.op_norm(m - m.conj().T)
        if defect > hermitian_tol:
            raise NotHermitian(f"density matrix deviates from Hermitian by {defect:.3e}")
        w = np.linalg.eigvalsh((m + m.conj().T) / 2)
        if w.min() < -hermitian_tol:
            raise ValueError(f"density matrix has negative eigenvalue {w.min():.3e}")
        tr = np.trace(m)
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"density matrix trace {tr!r} deviates from 1")
        m.setflags(write=False)
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def density(self) -> np.ndarray:
        return np.array(self.matrix)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


class Scenario:
    """One state plus six observables A1..A6 on a common d-dimensional space."""

    __slots__ = ("state", "observables", "dim")

    def __init__(self, state, observables):
        obs = tuple(observables)
        if len(obs) != 6:
            raise ShapeMismatch(f"a scenario needs exactly 6 observables, got {len(obs)}")
        if not all(isinstance(o, Observable) for o in obs):
            raise TypeError("observables must be Observable instances")
        d = state.dim
        for k, o in enumerate(obs, start=1):
            if o.dim != d:
                raise ShapeMismatch(f"A{k} has dimension {o.dim}, state has {d}")
        self.state = state
        self.observables = obs
        self.dim = d

    def observable(self, slot: int) -> Observable:
        """1-based access: slot in 1..6."""
        if not 1 <= slot <= 6:
            raise ShapeMismatch(f"slot must be in 1..6, got {slot}")
        return self.observables[slot - 1]

    def matrices(self) -> tuple:
        return tuple(o.matrix for o in self.observables)

    def density(self) -> np.ndarray:
        return self.state.density()

    def is_pure(self) -> bool:
        return isinstance(self.state, PureState)

    def with_state(self, state) -> "Scenario":
        return Scenario(state, self.observables)

    def with_observable(self, slot: int, obs: Observable) -> "Scenario":
        new = list(self.observables)
        new[slot - 1] = obs
        return Scenario(self.state, new)

    def __repr__(self):
        kind = "pure" if self.is_pure() else "mixed"
        return f"Scenario(dim={self.dim}, state={kind})"


def canonical_scenario() -> Scenario:
    """The maximally violating two-qubit realization.

    A1 = X(x)1, A2 = 1(x)Z, A3 = X(x)Z, A4 = 1(x)X, A5 = Z(x)1, A6 = Z(x)X
    on the maximally entangled state (|00> + |11>)/sqrt(2).
    """
    mats = (
        np.kron(PAULI_X, PAULI_I),
        np.kron(PAULI_I, PAULI_Z),
        np.kron(PAULI_X, PAULI_Z),
        np.kron(PAULI_I, PAULI_X),
        np.kron(PAULI_Z, PAULI_I),
        np.kron(PAULI_Z, PAULI_X),
    )
    phi_plus = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return Scenario(PureState(phi_plus), tuple(Observable(m) for m in mats))


def project_involution(m, cutoff: float = SIGN_CUTOFF) -> Observable:
    """Round a Hermitian matrix to the nearest involution.

    Returns sum_k sign(lambda_k) v_k v_k†, the closest involution in operator
    norm among functions of m. Eigenvalues inside (-cutoff, cutoff) have no
    well-defined sign and raise :class:`ZeroEigenvalue`.
    """
    w, v = linalg.eig_hermitian(m)
    if np.any(np.abs(w) <= cutoff):
        raise ZeroEigenvalue(
            f"eigenvalue of magnitude {np.abs(w).min():.3e} inside cutoff {cutoff:.1e}"
        )
    a = (v * np.sign(w)) @ v.conj().T
    return Observable(linalg.hermitize(a))


def lift_observable(obs: Observable, env_dim: int) -> Observable:
    """Extend an observable to act trivially on a purifying factor: A -> A(x)1."""
    return Observable(np.kron(obs.matrix, np.eye(env_dim)))


def purify(rho: DensityMatrix) -> PureState:
    """Standard purification of rho on a doubled space (dimension d^2).

    The output's reduced state on the first factor equals rho; the purifying
    factor is the second one, so observables lift as A (x) 1_d.
    """
    w, v = linalg.eig_hermitian(rho.matrix)
    w = np.clip(w, 0.0, None)
    # Psi[i*d + k] = sqrt(w_k) v_k[i]: system index first, ancilla second.
    mat = v * np.sqrt(w)
    vec = mat.reshape(-1)
    return PureState(vec / linalg.vec_norm(vec))


def purify_scenario(s: Scenario) -> Scenario:
    """Return an equivalent pure-state scenario, lifting observables if needed."""
    if s.is_pure():
        return s
    psi = purify(s.state)
    lifted = tuple(lift_observable(o, s.dim) for o in s.observables)
    return Scenario(psi, lifted)


def reduced_density(psi: PureState, dim_sys: int, dim_env: int) -> np.ndarray:
    """Partial trace of |psi><psi| over the second (environment) factor."""
    if psi.dim != dim_sys * dim_env:
        raise ShapeMismatch(f"state dim {psi.dim} != {dim_sys} * {dim_env}")
    m = psi.amplitudes.reshape(dim_sys, dim_env)
    return m @ m.conj().T


# ---------------------------------------------------------------------------
# Seeded random constructions. All randomness in the package flows through
# numpy Generator objects backed by PCG64 (see README for the policy).
# ---------------------------------------------------------------------------

def random_pure_state(dim: int, rng: np.random.Generator) -> PureState:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState(v / np.linalg.norm(v))


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    r = rank if rank is not None else dim
    g = rng.standard_normal((dim, r)) + 1j * rng.standard_normal((dim, r))
    m = g @ g.conj().T
    return DensityMatrix(linalg.hermitize(m / np.trace(m).real))


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return linalg.hermitize(g)


def random_involution(dim: int, rng: np.random.Generator) -> Observable:
    """Sign-rounded Gaussian Hermitian matrix: Haar-like eigenbasis coverage."""
    return project_involution(random_hermitian(dim, rng))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via phase-fixed QR of a Ginibre matrix."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_scenario(dim: int, rng: np.random.Generator) -> Scenario:
    state = random_pure_state(dim, rng)
    obs = tuple(random_involution(dim, rng) for _ in range(6))
    return Scenario(state, obs)


def conjugate_scenario(s: Scenario, u: np.ndarray) -> Scenario:
    """Rotate the whole realization by a unitary: A -> U A U†, psi -> U psi."""
    obs = tuple(Observable(linalg.hermitize(u @ o.matrix @ u.conj().T))
                for o in s.observables)
    if s.is_pure():
        state = PureState(u @ s.state.amplitudes)
    else:
        state = DensityMatrix(linalg.hermitize(u @ s.state.matrix @ u.conj().T))
    return Scenario(state, obs)


# ---------------------------------------------------------------------------
# Scenario file format: a UTF-8 JSON document.
#
#   dim          integer
#   state        {"vector": [[re, im], ...]} or {"density": [[re, im], ...]}
#   observables  {"A1": [[re, im], ...], ..., "A6": ...}
#
# Matrices are row-major flat lists of [re, im] pairs. Numbers are written
# with Python's shortest round-trip repr (<= 17 significant digits), so a
# save/load cycle reproduces matrices bit-exactly.
# ---------------------------------------------------------------------------

def _pairs_from_array(a: np.ndarray) -> list:
    flat = np.asarray(a, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]

def _array_from_pairs(pairs, what: str) -> np.ndarray:
    if not isinstance(pairs, list):
        raise ParseError(f"{what}: expected a list of [re, im] pairs")
    out = np.empty(len(pairs), dtype=complex)
    for i, p in enumerate(pairs):
        if (not isinstance(p, list)) or len(p) != 2:
            raise ParseError(f"{what}[{i}]: expected an [re, im] pair")
        try:
            out[i] = complex(float(p[0]), float(p[1]))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{what}[{i}]: non-numeric entry") from exc
    return out


def scenario_to_dict(s: Scenario) -> dict:
    if s.is_pure():
        state = {"vector": _pairs_from_array(s.state.amplitudes)}
    else:
        state = {"density": _pairs_from_array(s.state.matrix)}
    return {
        "dim": s.dim,
        "state": state,
        "observables": {
            f"A{k}": _pairs_from_array(o.matrix)
            for k, o in enumerate(s.observables, start=1)
        },
    }


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ParseError("scenario document must be a JSON object")
    try:
        dim = int(doc["dim"])
    except (KeyError, TypeError, ValueError):
        raise ParseError("field 'dim': missing or not an integer") from None
    if dim < 2:
        raise ParseError(f"field 'dim': must be >= 2, got {dim}")

    state_doc = doc.get("state")
    if not isinstance(state_doc, dict):
        raise ParseError("field 'state': missing or not an object")
    try:
        if "vector" in state_doc:
            v = _array_from_pairs(state_doc["vector"], "state.vector")
            if v.shape[0] != dim:
                raise ParseError(f"state.vector: length {v.shape[0]} != dim {dim}")
            state = PureState(v)
        elif "density" in state_doc:
            m = _array_from_pairs(state_doc["density"], "state.density")
            if m.shape[0] != dim * dim:
                raise ParseError(f"state.density: length {m.shape[0]} != dim^2")
            state = DensityMatrix(m.reshape(dim, dim))
        else:
            raise ParseError("field 'state': needs 'vector' or 'density'")
    except (ValueError, NotHermitian, ShapeMismatch) as exc:
        raise ParseError(f"invalid state: {exc}") from exc

    obs_doc = doc.get("observables")
    if not isinstance(obs_doc, dict):
        raise ParseError("field 'observables': missing or not an object")
    obs = []
    for k in range(1, 7):
        key = f"A{k}"
        if key not in obs_doc:
            raise ParseError(f"observables.{key}: missing")
        m = _array_from_pairs(obs_doc[key], f"observables.{key}")
        if m.shape[0] != dim * dim:
            raise ParseError(f"observables.{key}: length {m.shape[0]} != dim^2")
        try:
            obs.append(Observable(m.reshape(dim, dim)))
        except (NotHermitian, NonInvolution, ShapeMismatch) as exc:
            raise ParseError(f"observables.{key}: {exc}") from exc
    return Scenario(state, obs)


def dumps_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=1)


def loads_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(doc)


def atomic_write_text(path, text: str) -> None:
    """Write-temp-then-rename so readers never observe a partial file."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_scenario(s: Scenario, path) -> None:
    atomic_write_text(path, dumps_scenario(s) + "\n")


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return loads_scenario(fh.read())
