"""Dense complex matrix kernel for dimensions up to 64.

Every function is pure: inputs are converted to fresh complex128 arrays and
never modified in place. Structural tolerances default to 1e-10, which is
comfortable at these dimensions; callers may override them.
"""

from __future__ import annotations

import numpy as np

from .errors import NonSquare, NotHermitian, RankDeficient, ShapeMismatch

#: Default tolerance for structural checks (Hermiticity, unitarity).
STRUCTURAL_TOL = 1e-10

#: Default eigenvalue cutoff for :func:`inv_sqrt_psd`. The ideal Gram matrix
#: downstream is the identity, so anything at this scale is genuine
#: degeneracy, not noise.
INV_SQRT_CUTOFF = 1e-12


def as_matrix(m) -> np.ndarray:
    """Coerce input to a 2-d complex128 array, rejecting non-finite entries."""
    a = np.array(m, dtype=complex)
    if a.ndim != 2:
        raise ShapeMismatch(f"expected a matrix, got array of ndim {a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def as_vector(v) -> np.ndarray:
    """Coerce input to a 1-d complex128 array, rejecting non-finite entries."""
    a = np.array(v, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(a)):
        raise ValueError("vector contains NaN or Inf entries")
    return a


def _require_square(a: np.ndarray) -> None:
    if a.shape[0] != a.shape[1]:
        raise NonSquare(f"matrix is {a.shape[0]}x{a.shape[1]}")


def dagger(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m).conj().T


def hermitize(m) -> np.ndarray:
    """Return (m + m†)/2, the Hermitian part of a square matrix."""
    a = as_matrix(m)
    _require_square(a)
    return (a + a.conj().T) / 2


def hermiticity_defect(m) -> float:
    """Operator-norm distance of m from its Hermitian part."""
    a = as_matrix(m)
    _require_square(a)
    return op_norm(a - a.conj().T) / 2


def kron(a, b) -> np.ndarray:
    """Kronecker product, first factor leftmost."""
    return np.kron(as_matrix(a), as_matrix(b))


def trace(m) -> complex:
    a = as_matrix(m)
    _require_square(a)
    return complex(np.trace(a))


def op_norm(m) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(as_matrix(m), 2))


def vec_norm(v) -> float:
    return float(np.linalg.norm(as_vector(v)))


def comm(a, b) -> np.ndarray:
    """Commutator ab - ba."""
    a, b = as_matrix(a), as_matrix(b)
    return a @ b - b @ a


def acomm(a, b) -> np.ndarray:
    """Anticommutator ab + ba."""
    a, b = as_matrix(a), as_matrix(b)
    return a @ b + b @ a


def eig_hermitian(m, tol: float = STRUCTURAL_TOL):
    """Eigendecomposition of a Hermitian matrix with deterministic output.

    Parameters
    ----------
    m : array_like
        Square matrix, Hermitian within `tol` (operator norm).
    tol : float
        Allowed Hermiticity deviation.

    Returns
    -------
    w : ndarray of float
        Eigenvalues in descending order.
    v : ndarray of complex
        Eigenvectors as columns, matching `w`. Each column's first component
        of magnitude above 1e-12 is rotated to be real nonnegative so that
        repeated runs give identical output.
    """
    a = as_matrix(m)
    _require_square(a)
    if hermiticity_defect(a) > tol:
        raise NotHermitian(
            f"Hermiticity deviation {hermiticity_defect(a):.3e} exceeds {tol:.1e}"
        )
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    order = np.argsort(-w, kind="stable")
    w = np.real(w[order])
    v = v[:, order]
    for k in range(v.shape[1]):
        col = v[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        i = nz[0] if nz.size else int(np.argmax(np.abs(col)))
        phase = col[i]
        if abs(phase) > 0:
            v[:, k] = col * (phase.conjugate() / abs(phase))
    return w, v


def inv_sqrt_psd(m, cutoff: float = INV_SQRT_CUTOFF, full_rank: bool = True) -> np.ndarray:
    """Inverse square root of a Hermitian positive-semidefinite matrix.

    Returns sum_k lambda_k^{-1/2} v_k v_k† over eigenvalues above `cutoff`.
    With ``full_rank=True`` (the default) any eigenvalue at or below the
    cutoff raises :class:`RankDeficient`; otherwise those modes are dropped
    and the result is the inverse square root on the retained eigenspace.
    """
    w, v = eig_hermitian(m)
    if w[-1] < -STRUCTURAL_TOL:
        raise ValueError(
            f"matrix is not positive semidefinite (min eigenvalue {w[-1]:.3e})"
        )
    keep = w > cutoff
    if full_rank and not np.all(keep):
        raise RankDeficient(
            f"eigenvalue {w[~keep].max():.3e} at or below cutoff {cutoff:.1e}"
        )
    vk = v[:, keep]
    return (vk / w[keep] ** 0.5) @ vk.conj().T


def expi_hermitian(m, scale: float = 1.0) -> np.ndarray:
    """Unitary exp(-1j * scale * m) for Hermitian m, via eigendecomposition."""
    w, v = eig_hermitian(m)
    return (v * np.exp(-1j * scale * w)) @ v.conj().T
