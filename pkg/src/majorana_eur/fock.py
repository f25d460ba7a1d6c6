"""Fock-space model of two quantum dots side-coupled to a pair of Majorana modes.

The three fermionic modes are ordered ``(f, d1, d2)``: ``f`` is the ordinary
fermion built from the Majorana pair, ``d1`` and ``d2`` the spin-up levels of
the two dots.  Basis states ``|n_f, n_d1, n_d2>`` are indexed by
``n_f + 2*n_d1 + 4*n_d2``, i.e.::

    0:|000>  1:|100>  2:|010>  3:|110>  4:|001>  5:|101>  6:|011>  7:|111>

so ``f`` is the fastest-varying bit and, read as a Kronecker product, the
Hilbert space is ``H_d2 (x) H_d1 (x) H_f``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDelta, SectorMismatch, UnsupportedConfiguration
from .linalg import dagger, hermitian_eig, hermiticity_deviation, identity, kron_all

MODE_ORDER = ("f", "d1", "d2")
DIM = 8

_LOWER = np.array([[0, 1], [0, 0]], dtype=np.complex128)  # |0><1|
_PARITY = np.diag([1.0, -1.0]).astype(np.complex128)
_I2 = identity(2)

SQRT2 = np.sqrt(2.0)


def basis_index(n_f: int, n_d1: int, n_d2: int) -> int:
    return n_f + 2 * n_d1 + 4 * n_d2


def basis_ket(n_f: int, n_d1: int, n_d2: int) -> np.ndarray:
    v = np.zeros(DIM, dtype=np.complex128)
    v[basis_index(n_f, n_d1, n_d2)] = 1.0
    return v


def fermion_annihilators(n_modes: int = 3, ordering=MODE_ORDER) -> list[np.ndarray]:
    """Annihilators ``[f, d1, d2]`` with Jordan-Wigner strings in the order f, d1, d2.

    Mode ``k`` picks up a factor ``(-1)^n`` from every mode before it in the
    ordering.  Only the three-mode layout of this model is supported.
    """
    if n_modes != 3 or tuple(ordering) != MODE_ORDER:
        raise UnsupportedConfiguration(
            f"only n_modes=3 with ordering {MODE_ORDER} is supported, got {n_modes}, {tuple(ordering)}"
        )
    # Kronecker factors run (d2, d1, f) from slowest to fastest.
    f = kron_all(_I2, _I2, _LOWER)
    d1 = kron_all(_I2, _LOWER, _PARITY)
    d2 = kron_all(_LOWER, _PARITY, _PARITY)
    return [f, d1, d2]


def majorana_ops(f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``gamma1 = (f^+ + f)/sqrt2`` and ``gamma2 = i(f^+ - f)/sqrt2``."""
    fd = dagger(f)
    return (fd + f) / SQRT2, 1j * (fd - f) / SQRT2


def parity_operator() -> np.ndarray:
    """Total fermion parity ``(-1)^(n_f + n_d1 + n_d2)``."""
    return kron_all(_PARITY, _PARITY, _PARITY)


def number_operator(a: np.ndarray) -> np.ndarray:
    return dagger(a) @ a


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the dot-Majorana-dot Hamiltonian.

    ``omega`` and ``lam`` define the analytically solvable branch
    (``eps_M = 2*omega``, ``lambda1 = -lambda2 = sqrt2*lam``, zero dot
    energies).  Any of ``eps1``, ``eps2``, ``lambda1``, ``lambda2``, ``eps_m``
    may be overridden to leave that branch.
    """

    omega: float
    lam: float
    eps1: float = 0.0
    eps2: float = 0.0
    lambda1: float | None = None
    lambda2: float | None = None
    eps_m: float | None = None
    coulomb_u: float = field(default=0.0, init=False)

    def __post_init__(self):
        if self.omega < 0:
            raise ValueError(f"omega must be non-negative, got {self.omega}")

    @property
    def coupling1(self) -> float:
        return SQRT2 * self.lam if self.lambda1 is None else self.lambda1

    @property
    def coupling2(self) -> float:
        return -SQRT2 * self.lam if self.lambda2 is None else self.lambda2

    @property
    def overlap(self) -> float:
        return 2.0 * self.omega if self.eps_m is None else self.eps_m

    @property
    def is_analytic_branch(self) -> bool:
        return (
            self.eps1 == 0.0
            and self.eps2 == 0.0
            and self.coupling1 == SQRT2 * self.lam
            and self.coupling2 == -SQRT2 * self.lam
            and self.overlap == 2.0 * self.omega
        )

    @property
    def delta(self) -> float:
        return float(np.hypot(self.omega, 2.0 * self.lam))


def build_hamiltonian(p: ModelParams) -> np.ndarray:
    """Assemble the 8x8 Hamiltonian.

    ``H = eps1 n_d1 + eps2 n_d2 + lambda1 (d1^+ - d1) g1
          + i lambda2 g2 (d2^+ + d2) + i eps_M g1 g2``
    """
    f, d1, d2 = fermion_annihilators()
    g1, g2 = majorana_ops(f)
    h = (
        p.eps1 * number_operator(d1)
        + p.eps2 * number_operator(d2)
        + p.coupling1 * (dagger(d1) - d1) @ g1
        + 1j * p.coupling2 * g2 @ (dagger(d2) + d2)
        + 1j * p.overlap * g1 @ g2
    )
    dev = hermiticity_deviation(h)
    assert dev <= 1e-12, f"assembled Hamiltonian is not Hermitian ({dev:.2e})"
    return h


@dataclass(frozen=True)
class AnalyticEigensystem:
    delta: float
    eta_plus: float
    eta_minus: float
    xi_plus: float
    xi_minus: float
    energies: np.ndarray
    """Energy of each analytic eigenvector, aligned with ``vectors``."""
    vectors: np.ndarray
    """Columns ``e1 ... e8`` in the occupation basis."""

    @property
    def eta_sq(self) -> float:
        return self.eta_plus**2

    @property
    def xi_sq(self) -> float:
        return self.xi_plus**2

    def vector(self, k: int) -> np.ndarray:
        """Eigenvector ``e_k`` for ``k`` in 1..8."""
        return self.vectors[:, k - 1]


def _dots_bell(n_f: int, kind: str) -> np.ndarray:
    """``|n_f> (x) |Bell>`` with the Bell state written in ``|n_d1 n_d2>``."""
    s = 1.0 / SQRT2
    k = basis_ket
    if kind == "phi+":
        return s * (k(n_f, 0, 0) + k(n_f, 1, 1))
    if kind == "phi-":
        return s * (k(n_f, 0, 0) - k(n_f, 1, 1))
    if kind == "psi+":
        return s * (k(n_f, 0, 1) + k(n_f, 1, 0))
    if kind == "psi-":
        return s * (k(n_f, 0, 1) - k(n_f, 1, 0))
    raise ValueError(kind)


def mixing_coefficients(omega: float, lam: float) -> tuple[float, float, float, float, float]:
    """Return ``(delta, eta_plus, eta_minus, xi_plus, xi_minus)``.

    ``eta_pm = 2 lam / N_pm`` and ``xi_pm = (omega pm Delta) / N_pm`` with
    ``N_pm = sqrt(4 lam^2 + (omega pm Delta)^2)``.  The minus branch is
    evaluated through ``omega - Delta = -4 lam^2 / (omega + Delta)``, which
    is exact algebraically and avoids cancellation for ``lam << omega``; at
    ``lam = 0`` it yields the ``lam -> 0+`` limit.
    """
    delta = float(np.hypot(omega, 2.0 * lam))
    if delta == 0.0:
        raise DegenerateDelta("omega and lambda are both zero")
    plus = omega + delta
    norm = float(np.hypot(2.0 * lam, plus))
    eta_p = 2.0 * lam / norm
    xi_p = plus / norm
    sign = -1.0 if lam < 0 else 1.0
    eta_m = sign * xi_p
    xi_m = -abs(eta_p)
    return delta, eta_p, eta_m, xi_p, xi_m


def analytic_eigensystem(p: ModelParams) -> AnalyticEigensystem:
    """Closed-form eigenvectors of the solvable branch.

    Odd parity: ``e1`` (``-Delta``) and ``e7`` (``+Delta``) mix
    ``|1_f>|Phi->`` with ``|0_f>|Psi+>``; ``e3`` (``-omega``) and ``e5``
    (``+omega``) are unmixed.  Even parity: ``e8 = eta+|0_f>|Phi+> +
    xi+|1_f>|Psi->`` sits at ``+Delta`` and ``e2`` is its orthogonal partner
    in the same plane at ``-Delta``; ``e4`` (``-omega``) and ``e6``
    (``+omega``) are unmixed.  The ``e2`` commonly quoted alongside ``e1``
    (``eta-|1_f>|Phi-> + xi-|0_f>|Psi+>``) is not an eigenvector, hence
    the even-sector construction.
    """
    if not p.is_analytic_branch:
        raise UnsupportedConfiguration("analytic eigensystem requires the solvable parameter branch")
    delta, eta_p, eta_m, xi_p, xi_m = mixing_coefficients(p.omega, p.lam)
    e1 = -eta_p * _dots_bell(1, "phi-") + xi_p * _dots_bell(0, "psi+")
    e7 = -eta_m * _dots_bell(1, "phi-") + xi_m * _dots_bell(0, "psi+")
    e8 = eta_p * _dots_bell(0, "phi+") + xi_p * _dots_bell(1, "psi-")
    e2 = -xi_p * _dots_bell(0, "phi+") + eta_p * _dots_bell(1, "psi-")
    e3 = -_dots_bell(0, "psi-")
    e4 = -_dots_bell(0, "phi-")
    e5 = _dots_bell(1, "phi+")
    e6 = _dots_bell(1, "psi+")
    vectors = np.column_stack([e1, e2, e3, e4, e5, e6, e7, e8])
    w = p.omega
    energies = np.array([-delta, -delta, -w, -w, w, w, delta, delta])
    return AnalyticEigensystem(delta, eta_p, eta_m, xi_p, xi_m, energies, vectors)


CLUSTER_TOL = 1e-9


def ground_state(p: ModelParams, hamiltonian: np.ndarray | None = None) -> np.ndarray:
    """Numeric ground state in the sector of the analytic ``e1``.

    The lowest level is twofold degenerate (one state per parity sector), so
    the analytic ``e1`` is projected onto the numerically found ground space
    and renormalised; the result is phase-aligned so ``<e1|psi>`` is real and
    positive.  ``hamiltonian`` overrides the matrix built from ``p``.
    """
    h = build_hamiltonian(p) if hamiltonian is None else hamiltonian
    eig = hermitian_eig(h)
    e0 = eig.eigenvalues[0]
    cluster = eig.eigenvectors[:, np.abs(eig.eigenvalues - e0) <= CLUSTER_TOL]
    target = analytic_eigensystem(p).vector(1)
    amplitudes = cluster.conj().T @ target
    weight = float(np.sum(np.abs(amplitudes) ** 2))
    if weight < 0.5:
        raise SectorMismatch(f"analytic e1 has only {weight:.3e} weight in the numeric ground space")
    psi = cluster @ amplitudes
    psi /= np.linalg.norm(psi)
    overlap = np.vdot(target, psi)
    return psi * (abs(overlap) / overlap)
