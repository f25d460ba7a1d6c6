"""Direct versus interrupted spin measurements on the two dots (quantum witness).

Protocol (b) measures QD2 after the state has evolved through a Kraus map;
protocol (a) first measures QD1, keeps the ``|0>`` outcome, evolves the
post-selected state through the same map and then measures QD2.  The witness
is the absolute difference of the two outcome probabilities.

The Kraus pair swaps one excitation between the dots::

    L1 = sqrt(mu1) |1><0|_1 (x) |0><1|_2
    L2 = sqrt(mu2) |0><1|_1 (x) |1><0|_2

It is used exactly as written, so ``sum L^+ L`` is a projector rather than
the identity and the map loses trace on ``|00>`` and ``|11>``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fock
from .errors import DimensionMismatch, ZeroProbabilityOutcome
from .linalg import as_matrix, dagger, identity, kron
from .qinfo import DensityMatrix, model_ground_density, partial_trace

QD_LABELS = ("A", "B")
_KET0_BRA1 = np.array([[0, 1], [0, 0]], dtype=np.complex128)
_KET1_BRA0 = _KET0_BRA1.T.copy()
_P0 = np.diag([1.0, 0.0]).astype(np.complex128)
_P1 = np.diag([0.0, 1.0]).astype(np.complex128)


@dataclass(frozen=True)
class KrausChannel:
    mu1: float = 0.5
    mu2: float = 0.5

    def __post_init__(self):
        if min(self.mu1, self.mu2) < 0 or abs(self.mu1 + self.mu2 - 1.0) > 1e-12:
            raise ValueError(f"weights must be non-negative and sum to 1, got {self.mu1}, {self.mu2}")

    @classmethod
    def from_mu1(cls, mu1: float) -> "KrausChannel":
        return cls(mu1, 1.0 - mu1)

    @property
    def operators(self) -> list[np.ndarray]:
        return [
            np.sqrt(self.mu1) * kron(_KET1_BRA0, _KET0_BRA1),
            np.sqrt(self.mu2) * kron(_KET0_BRA1, _KET1_BRA0),
        ]


@dataclass(frozen=True)
class WitnessResult:
    p_direct: float
    q_indirect: float
    witness: float
    analytic_witness: float | None = None


def _qd_matrix(rho) -> np.ndarray:
    m = rho.matrix if isinstance(rho, DensityMatrix) else as_matrix(rho)
    if m.shape != (4, 4):
        raise DimensionMismatch(f"expected a two-dot (4x4) state, got {m.shape}")
    return m


def apply_channel(rho, ch: KrausChannel) -> np.ndarray:
    """``sum_a L_a rho L_a^+`` on the two-dot space (trace is generally below 1)."""
    m = _qd_matrix(rho)
    return sum(L @ m @ dagger(L) for L in ch.operators)


def ground_state_qd_density(omega: float, lam: float) -> DensityMatrix:
    """Two-dot reduced state of the model ground state, tracing out the Majorana fermion."""
    return partial_trace(model_ground_density(omega, lam), set(QD_LABELS))


def post_select_qd1_ground(rho: DensityMatrix) -> DensityMatrix:
    """Project QD1 onto ``|0>`` and renormalise."""
    proj = kron(_P0, identity(2))
    branch = proj @ _qd_matrix(rho) @ proj
    prob = float(np.trace(branch).real)
    if prob < 1e-14:
        raise ZeroProbabilityOutcome(f"QD1 = |0> has probability {prob:.3e}")
    return DensityMatrix(branch / prob, (2, 2), QD_LABELS)


def _outcome_projector(subsystem: str, outcome: int) -> np.ndarray:
    single = _P0 if outcome == 0 else _P1
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")
    if subsystem == "A":
        return kron(single, identity(2))
    if subsystem == "B":
        return kron(identity(2), single)
    raise ValueError(f"subsystem must be 'A' (QD1) or 'B' (QD2), got {subsystem!r}")


def witness_from_state(rho: DensityMatrix, ch: KrausChannel, target: tuple[str, int] = ("B", 0)) -> WitnessResult:
    proj = _outcome_projector(*target)
    p = float(np.trace(proj @ apply_channel(rho, ch)).real)
    q = float(np.trace(proj @ apply_channel(post_select_qd1_ground(rho), ch)).real)
    return WitnessResult(p, q, abs(p - q))


def quantum_witness(
    omega: float, lam: float, mu1: float = 0.5, target: tuple[str, int] = ("B", 0)
) -> WitnessResult:
    """Run both protocols on the model ground state.

    ``target`` is ``(subsystem, outcome)`` with subsystem ``"A"`` for QD1 and
    ``"B"`` for QD2.  ``analytic_witness`` is filled in only for the
    symmetric map and the QD2/outcome-0 target, where the closed form holds.
    """
    rho = ground_state_qd_density(omega, lam)
    res = witness_from_state(rho, KrausChannel.from_mu1(mu1), target)
    closed = analytic_witness(omega, lam) if (mu1 == 0.5 and tuple(target) == ("B", 0)) else None
    return WitnessResult(res.p_direct, res.q_indirect, res.witness, closed)


def analytic_witness(omega: float, lam: float) -> float:
    """``(1/4) (omega + Delta)^2 / (4 lam^2 + (omega + Delta)^2)``, i.e. ``xi_+^2 / 4``."""
    delta, *_ = fock.mixing_coefficients(omega, lam)
    s = (omega + delta) ** 2
    return 0.25 * s / (4.0 * lam * lam + s)
