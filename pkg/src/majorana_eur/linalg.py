"""Dense complex matrix helpers and a cyclic Jacobi Hermitian eigensolver.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The functions
here validate shape and finiteness and never mutate their inputs.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian

HERMITIAN_TOL = 1e-10
MAX_SWEEPS = 100
OFF_DIAGONAL_RTOL = 1e-13
RESIDUAL_RTOL = 1e-10


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    """Real eigenvalues, ascending."""
    eigenvectors: np.ndarray
    """Columns are orthonormal eigenvectors, column i paired with eigenvalue i."""


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a square, finite complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def kron(a, b) -> np.ndarray:
    """Kronecker product with ``out[i*nb + k, j*nb + l] = a[i, j] * b[k, l]``."""
    a = as_matrix(a)
    b = as_matrix(b)
    na, nb = a.shape[0], b.shape[0]
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(na * nb, na * nb)


def kron_all(*factors) -> np.ndarray:
    out = as_matrix(factors[0])
    for f in factors[1:]:
        out = kron(out, f)
    return out


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T.copy()


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def inf_norm(a) -> float:
    """Maximum absolute row sum."""
    return float(np.max(np.sum(np.abs(np.asarray(a)), axis=1)))


def hermiticity_deviation(a) -> float:
    a = as_matrix(a)
    return float(np.max(np.abs(a - a.conj().T)))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Zero ``a[p, q]`` in place with a unitary plane rotation, accumulating into ``v``."""
    apq = a[p, q]
    mag = abs(apq)
    phase = apq / mag
    theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # Phase-strip the pivot then apply a real rotation: u = diag(1, conj(phase)) @ [[c, s], [-s, c]]
    u = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
    idx = [p, q]
    a[:, idx] = a[:, idx] @ u
    a[idx, :] = u.conj().T @ a[idx, :]
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:, idx] = v[:, idx] @ u


def hermitian_eig(a, tol: float = HERMITIAN_TOL) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix with the cyclic Jacobi method.

    Sweeps over all upper-triangular pivots in row order until the
    off-diagonal Frobenius norm drops below ``1e-13 * ||a||_F``.  Pivots that
    are exactly zero are skipped, so block-diagonal structure (e.g. a
    conserved parity) is never mixed by the rotations.

    Raises ``NotHermitian`` when ``||a - a^H||_max > tol`` and
    ``NoConvergence`` if the residual bound is unmet after 100 sweeps.
    """
    a0 = as_matrix(a)
    dev = hermiticity_deviation(a0)
    if dev > tol:
        raise NotHermitian(dev)
    n = a0.shape[0]
    work = 0.5 * (a0 + a0.conj().T)
    v = identity(n)
    frob = np.linalg.norm(work)
    threshold = OFF_DIAGONAL_RTOL * frob

    sweeps = 0
    upper = np.triu_indices(n, 1)
    while True:
        off = np.sqrt(2.0 * np.sum(np.abs(work[upper]) ** 2))
        if off <= threshold or off == 0.0:
            break
        if sweeps >= MAX_SWEEPS:
            raise NoConvergence(sweeps)
        for p in range(n - 1):
            for q in range(p + 1, n):
                if work[p, q] != 0:
                    _rotate(work, v, p, q)
        sweeps += 1

    evals = work.diagonal().real.copy()
    order = np.argsort(evals, kind="stable")
    evals = evals[order]
    v = v[:, order]

    scale = inf_norm(a0)
    residual = np.max(np.abs(a0 @ v - v * evals)) if n else 0.0
    if residual > RESIDUAL_RTOL * max(scale, np.finfo(float).tiny):
        raise NoConvergence(sweeps)
    return EigenDecomposition(evals, v)


def hermitian_eigvals(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    return hermitian_eig(a, tol).eigenvalues
