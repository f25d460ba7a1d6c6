"""Density matrices, entropies and the quantum-memory-assisted uncertainty relations.

All entropies are in bits.  Subsystems are addressed by label; a
``DensityMatrix`` stores its Kronecker factors in ``labels`` order, slowest
varying first.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from . import fock
from .errors import BadPermutation, DimensionMismatch, InvalidState, UnknownLabel
from .linalg import as_matrix, hermitian_eigvals, hermiticity_deviation, identity, kron_all

STATE_TOL = 1e-10
EIGEN_CLIP = 1e-10
ZERO_PROBABILITY = 1e-14


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    dims: tuple[int, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        m = as_matrix(self.matrix)
        dims = tuple(int(d) for d in self.dims)
        labels = tuple(self.labels)
        if len(dims) != len(labels) or len(set(labels)) != len(labels):
            raise DimensionMismatch(f"dims {dims} and labels {labels} do not line up")
        if int(np.prod(dims)) != m.shape[0]:
            raise DimensionMismatch(f"product of dims {dims} != matrix size {m.shape[0]}")
        dev = hermiticity_deviation(m)
        if dev > STATE_TOL:
            raise InvalidState(f"state is not Hermitian (deviation {dev:.2e})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > STATE_TOL:
            raise InvalidState(f"state trace is {tr!r}, expected 1")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_ket(cls, ket, dims: Sequence[int], labels: Sequence[str]) -> "DensityMatrix":
        psi = np.asarray(ket, dtype=np.complex128).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), tuple(dims), tuple(labels))

    def dim_of(self, label: str) -> int:
        return self.dims[self.index(label)]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"no subsystem {label!r} in {self.labels}") from None


@dataclass(frozen=True)
class MeasurementBasis:
    """Rank-1 projective measurement on a qubit, given by two orthonormal kets."""

    vectors: tuple[np.ndarray, np.ndarray]

    def __post_init__(self):
        vs = tuple(np.asarray(v, dtype=np.complex128).ravel() for v in self.vectors)
        if len(vs) != 2 or any(v.shape != (2,) for v in vs):
            raise DimensionMismatch("a qubit measurement needs two 2-component kets")
        gram = np.array([[np.vdot(a, b) for b in vs] for a in vs])
        if np.max(np.abs(gram - np.eye(2))) > 1e-12:
            raise ValueError("measurement kets are not orthonormal")
        object.__setattr__(self, "vectors", vs)

    @property
    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        return tuple(np.outer(v, v.conj()) for v in self.vectors)


Z_BASIS = MeasurementBasis((np.array([1, 0]), np.array([0, 1])))
X_BASIS = MeasurementBasis((np.array([1, 1]) / np.sqrt(2), np.array([1, -1]) / np.sqrt(2)))


def rotated_basis(theta: float) -> MeasurementBasis:
    """Eigenbasis of ``cos(theta) Z + sin(theta) X``."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return MeasurementBasis((np.array([c, s]), np.array([-s, c])))


def _ptrace(mat: np.ndarray, dims: tuple[int, ...], keep: Sequence[int]) -> np.ndarray:
    """Partial trace of a raw matrix, keeping the factor indices in ``keep`` (sorted)."""
    n = len(dims)
    t = mat.reshape(dims + dims)
    # Trace out from the highest index down so remaining axis numbers stay valid.
    for i in sorted(set(range(n)) - set(keep), reverse=True):
        k = t.ndim // 2
        t = np.trace(t, axis1=i, axis2=i + k)
    d = int(np.prod([dims[i] for i in keep]))
    return t.reshape(d, d)


def _embed(op: np.ndarray, slot: int, dims: tuple[int, ...]) -> np.ndarray:
    factors = [identity(d) for d in dims]
    factors[slot] = op
    return kron_all(*factors)


def _entropy_of_matrix(mat: np.ndarray) -> float:
    evals = hermitian_eigvals(mat)
    if evals[0] < -EIGEN_CLIP:
        raise InvalidState(f"negative eigenvalue {evals[0]:.3e}")
    total = float(np.sum(evals))
    if abs(total - 1.0) > 1e-8:
        raise InvalidState(f"eigenvalues sum to {total!r}")
    p = np.clip(evals, 0.0, 1.0)
    p = p[p > 0.0]
    return float(-np.sum(p * np.log2(p)))


def partial_trace(rho: DensityMatrix, keep: Iterable[str]) -> DensityMatrix:
    keep = set(keep)
    if not keep:
        raise ValueError("must keep at least one subsystem")
    for label in keep:
        rho.index(label)
    idx = [i for i, lab in enumerate(rho.labels) if lab in keep]
    mat = _ptrace(rho.matrix, rho.dims, idx)
    return DensityMatrix(mat, tuple(rho.dims[i] for i in idx), tuple(rho.labels[i] for i in idx))


def permute_subsystems(rho: DensityMatrix, new_order: Sequence[str]) -> DensityMatrix:
    new_order = tuple(new_order)
    if sorted(new_order) != sorted(rho.labels) or len(new_order) != len(rho.labels):
        raise BadPermutation(f"{new_order} is not a permutation of {rho.labels}")
    perm = [rho.labels.index(lab) for lab in new_order]
    n = len(perm)
    t = rho.matrix.reshape(rho.dims + rho.dims)
    t = t.transpose(perm + [p + n for p in perm])
    dims = tuple(rho.dims[p] for p in perm)
    d = rho.matrix.shape[0]
    return DensityMatrix(t.reshape(d, d), dims, new_order)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """``S = -sum p log2 p`` over the spectrum, with ``0 log 0 = 0``."""
    return _entropy_of_matrix(rho.matrix)


def entropy_of(rho: DensityMatrix, labels: Iterable[str]) -> float:
    """Entropy of the marginal on ``labels``."""
    return von_neumann_entropy(partial_trace(rho, labels))


def _check_qubit(rho: DensityMatrix, label: str) -> int:
    slot = rho.index(label)
    if rho.dims[slot] != 2:
        raise DimensionMismatch(f"subsystem {label!r} has dimension {rho.dims[slot]}, expected 2")
    return slot


def post_measurement_state(rho: DensityMatrix, basis: MeasurementBasis, on: str) -> DensityMatrix:
    """Measure ``on`` in ``basis`` and keep the classical record in its slot.

    Computes ``sum_n Pi_n (x) Tr_on[(Pi_n (x) I) rho]`` with the register
    reinserted at its original position.
    """
    slot = _check_qubit(rho, on)
    rest = [i for i in range(len(rho.dims)) if i != slot]
    rest_dims = tuple(rho.dims[i] for i in rest)
    out = np.zeros_like(rho.matrix)
    for proj in basis.projectors:
        reduced = _ptrace(_embed(proj, slot, rho.dims) @ rho.matrix, rho.dims, rest)
        # Insert the projector back at ``slot`` by building in (on, rest) order and permuting.
        joint = kron_all(proj, reduced) if rest else proj * reduced[0, 0]
        order = (slot,) + tuple(rest)
        dims_joint = (2,) + rest_dims
        t = joint.reshape(dims_joint + dims_joint)
        inv = list(np.argsort(order))
        n = len(order)
        t = t.transpose(inv + [i + n for i in inv])
        out += t.reshape(joint.shape)
    return DensityMatrix(out, rho.dims, rho.labels)


def conditional_entropy(rho: DensityMatrix, target: str, memory: str) -> float:
    """``S(target|memory) = S(rho_{target,memory}) - S(rho_memory)``."""
    return entropy_of(rho, {target, memory}) - entropy_of(rho, {memory})


def mutual_information(rho: DensityMatrix, a: str, b: str) -> float:
    return entropy_of(rho, {a}) + entropy_of(rho, {b}) - entropy_of(rho, {a, b})


def outcome_ensemble(
    rho: DensityMatrix, basis: MeasurementBasis, measured: str, memory: str
) -> list[tuple[float, np.ndarray | None]]:
    """Outcome probabilities and conditional memory states for a measurement on ``measured``.

    The conditional state is ``None`` when its probability is below 1e-14.
    """
    pair = partial_trace(rho, {measured, memory})
    slot = _check_qubit(pair, measured)
    other = 1 - slot
    out = []
    for proj in basis.projectors:
        big = _embed(proj, slot, pair.dims)
        branch = big @ pair.matrix @ big
        prob = float(np.trace(branch).real)
        cond = _ptrace(branch, pair.dims, [other]) / prob if prob >= ZERO_PROBABILITY else None
        out.append((prob, cond))
    return out


def holevo_quantity(rho: DensityMatrix, basis: MeasurementBasis, measured: str, memory: str) -> float:
    """``S(rho_memory) - sum_i p_i S(rho_{memory|i})``; outcomes with ``p_i < 1e-14`` contribute nothing."""
    total = entropy_of(rho, {memory})
    for prob, cond in outcome_ensemble(rho, basis, measured, memory):
        if cond is not None:
            total -= prob * _entropy_of_matrix(cond)
    return total


def complementarity(b1: MeasurementBasis, b2: MeasurementBasis) -> float:
    """``c = max_ij |<psi_i|phi_j>|^2``."""
    return max(abs(np.vdot(u, v)) ** 2 for u in b1.vectors for v in b2.vectors)


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1.0 - p) * np.log2(1.0 - p))


def _xlog2x(x: float) -> float:
    return 0.0 if x <= 0.0 else float(x * np.log2(x))


@dataclass(frozen=True)
class EurQuantities:
    """Every scalar entering the tripartite uncertainty relation, in bits."""

    eta_sq: float
    xi_sq: float
    script_A: float
    s_rhoX_AB: float
    s_X_given_B: float
    s_rhoZ_AC: float
    s_Z_given_C: float
    s_A_given_B: float
    s_rho_AC: float
    s_rho_AB: float
    s_A_given_C: float
    i_AB: float
    i_AC: float
    h_XB: float
    h_ZC: float
    delta: float

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def deviation(self, other: "EurQuantities") -> dict[str, float]:
        return {k: abs(v - getattr(other, k)) for k, v in self.as_dict().items()}

    def max_deviation(self, other: "EurQuantities") -> float:
        return max(self.deviation(other).values())


AnalyticQuantities = EurQuantities


@dataclass(frozen=True)
class EurReport:
    numeric: EurQuantities
    lhs: float
    rhs: float
    complementarity: float
    bipartite_lhs: float
    bipartite_rhs: float
    analytic: EurQuantities | None = None

    @property
    def gap(self) -> float:
        return self.lhs - self.rhs

    @property
    def bipartite_gap(self) -> float:
        return self.bipartite_lhs - self.bipartite_rhs

    @property
    def max_numeric_deviation(self) -> float | None:
        if self.analytic is None:
            return None
        return self.numeric.max_deviation(self.analytic)


def bipartite_eur(
    rho_AB: DensityMatrix, measured: str = "A", memory: str = "B"
) -> tuple[float, float, float]:
    """``S(X|B) + S(Z|B) >= log2(1/c) + S(A|B)``; returns ``(lhs, rhs, lhs - rhs)``."""
    pair = partial_trace(rho_AB, {measured, memory})
    s_b = entropy_of(pair, {memory})
    s_x = von_neumann_entropy(post_measurement_state(pair, X_BASIS, measured)) - s_b
    s_z = von_neumann_entropy(post_measurement_state(pair, Z_BASIS, measured)) - s_b
    lhs = s_x + s_z
    rhs = np.log2(1.0 / complementarity(Z_BASIS, X_BASIS)) + conditional_entropy(pair, measured, memory)
    return lhs, float(rhs), float(lhs - rhs)


def tripartite_eur(rho_ABC: DensityMatrix) -> EurReport:
    """Evaluate every term of the tripartite relation from the state alone.

    Alice (``A``) measures X with Bob (``B``) as memory and Z with Charlie
    (``C``) as memory::

        S(X|B) + S(Z|C) >= log2(1/c) + max(0, delta) + (S(A|B) + S(A|C)) / 2
        delta = (I(A:B) + I(A:C)) / 2 - (H(X:B) + H(Z:C))

    ``eta_sq``/``xi_sq`` are read off the diagonal of ``rho_C`` (populations
    of ``|1>`` and ``|0>``), which is where they live for the model ground
    state; for other states they are just those populations.
    """
    for label in ("A", "B", "C"):
        rho_ABC.index(label)
    _check_qubit(rho_ABC, "A")
    _check_qubit(rho_ABC, "B")

    rho_AB = partial_trace(rho_ABC, {"A", "B"})
    rho_AC = partial_trace(rho_ABC, {"A", "C"})
    rho_C = partial_trace(rho_ABC, {"C"})
    s_A = entropy_of(rho_ABC, {"A"})
    s_B = entropy_of(rho_ABC, {"B"})
    s_C = von_neumann_entropy(rho_C)
    s_AB = von_neumann_entropy(rho_AB)
    s_AC = von_neumann_entropy(rho_AC)

    rhoX_AB = post_measurement_state(rho_AB, X_BASIS, "A")
    rhoZ_AC = post_measurement_state(rho_AC, Z_BASIS, "A")
    s_rhoX = von_neumann_entropy(rhoX_AB)
    s_rhoZ = von_neumann_entropy(rhoZ_AC)
    # The measurement on A leaves the memory marginal untouched, so S(rho^X_B) = S(rho_B).
    s_X_B = s_rhoX - entropy_of(rhoX_AB, {"B"})
    s_Z_C = s_rhoZ - entropy_of(rhoZ_AC, {"C"})
    s_A_B = s_AB - s_B
    s_A_C = s_AC - s_C
    i_AB = s_A + s_B - s_AB
    i_AC = s_A + s_C - s_AC
    h_XB = holevo_quantity(rho_AB, X_BASIS, "A", "B")
    h_ZC = holevo_quantity(rho_AC, Z_BASIS, "A", "C")
    delta = 0.5 * (i_AB + i_AC) - (h_XB + h_ZC)

    c_diag = rho_C.matrix.diagonal().real
    xi_sq = float(c_diag[0])
    eta_sq = float(c_diag[1]) if len(c_diag) > 1 else 0.0
    numeric = EurQuantities(
        eta_sq=eta_sq,
        xi_sq=xi_sq,
        script_A=xi_sq - eta_sq,
        s_rhoX_AB=s_rhoX,
        s_X_given_B=s_X_B,
        s_rhoZ_AC=s_rhoZ,
        s_Z_given_C=s_Z_C,
        s_A_given_B=s_A_B,
        s_rho_AC=s_AC,
        s_rho_AB=s_AB,
        s_A_given_C=s_A_C,
        i_AB=i_AB,
        i_AC=i_AC,
        h_XB=h_XB,
        h_ZC=h_ZC,
        delta=delta,
    )
    c = complementarity(Z_BASIS, X_BASIS)
    lhs = s_X_B + s_Z_C
    rhs = float(np.log2(1.0 / c) + max(0.0, delta) + 0.5 * (s_A_B + s_A_C))
    b_lhs, b_rhs, _ = bipartite_eur(rho_AB)
    return EurReport(numeric, lhs, rhs, c, b_lhs, b_rhs)


def analytic_quantities(omega: float, lam: float) -> EurQuantities:
    """Closed-form values of every term for the model ground state ``|e1>``."""
    _, eta, _, xi, _ = fock.mixing_coefficients(omega, lam)
    eta_sq, xi_sq = eta * eta, xi * xi
    a = xi_sq - eta_sq
    abs_a = abs(a)
    # -sum over the two eigenvalue pairs (1 -+ |A|)/4 of rho^X_AB, each doubly degenerate.
    s_rhoX = -2.0 * sum(_xlog2x((1.0 + s * abs_a) / 4.0) for s in (-1.0, 1.0))
    mixing = _xlog2x(xi_sq) + _xlog2x(eta_sq)  # xi^2 log xi^2 + eta^2 log eta^2
    s_rhoZ = -xi_sq * _safe_log2(xi_sq / 2.0) - eta_sq * _safe_log2(eta_sq / 2.0)
    s_Z_C = s_rhoZ + mixing
    h_XB = (
        1.0
        + _xlog2x((1.0 - xi_sq + eta_sq) / 2.0)
        + _xlog2x((1.0 + xi_sq - eta_sq) / 2.0)
    )
    delta = -_xlog2x((1.0 - a) / 2.0) - _xlog2x((1.0 + a) / 2.0)
    return EurQuantities(
        eta_sq=eta_sq,
        xi_sq=xi_sq,
        script_A=a,
        s_rhoX_AB=s_rhoX,
        s_X_given_B=s_rhoX - 1.0,
        s_rhoZ_AC=s_rhoZ,
        s_Z_given_C=s_Z_C,
        s_A_given_B=-mixing - 1.0,
        s_rho_AC=1.0,
        s_rho_AB=-mixing,
        s_A_given_C=1.0 + mixing,
        i_AB=2.0 + mixing,
        i_AC=-mixing,
        h_XB=h_XB,
        h_ZC=0.0,
        delta=delta,
    )


def _safe_log2(x: float) -> float:
    return float(np.log2(x)) if x > 0.0 else 0.0


def analytic_bound(omega: float, lam: float) -> tuple[float, float]:
    """``(lhs, rhs)`` of the relation in closed form: ``S(rho^X_AB)`` and ``1 + max(0, delta)``."""
    q = analytic_quantities(omega, lam)
    return q.s_X_given_B + q.s_Z_given_C, 1.0 + max(0.0, q.delta) + 0.5 * (q.s_A_given_B + q.s_A_given_C)


def asymptotic_bounds(omega: float, lam: float) -> tuple[float, float]:
    """Leading-order expansions of the uncertainty with ``eps_M = 2 omega``.

    Returns ``(min_uncertainty, max_uncertainty)`` where::

        min ~ 1 + (lam^2 / eps_M^2) (1 + ln(4 eps_M^2 / lam^2)) / (4 ln 2)   for eps_M >> lam
        max ~ 2 - (eps_M^2 / lam^2) / (32 ln 2)                              for eps_M << lam

    Each is meaningful only in its own regime; the other value is still
    returned (``min`` is 1 when ``lam = 0``, ``max`` is 2 when ``omega = 0``).
    """
    eps_m = 2.0 * omega
    ln2 = np.log(2.0)
    if lam == 0.0:
        min_u = 1.0
    elif eps_m == 0.0:
        min_u = float("inf")
    else:
        r = lam * lam / (eps_m * eps_m)
        min_u = 1.0 + r * (1.0 + np.log(4.0 / r)) / (4.0 * ln2)
    if eps_m == 0.0:
        max_u = 2.0
    elif lam == 0.0:
        max_u = float("-inf")
    else:
        max_u = 2.0 - (eps_m * eps_m) / (lam * lam) / (32.0 * ln2)
    return float(min_u), float(max_u)


def model_ground_density(omega: float, lam: float, hamiltonian: np.ndarray | None = None) -> DensityMatrix:
    """``|e1><e1|`` found numerically, as a state on ``(A, B, C) = (d1, d2, f)``."""
    p = fock.ModelParams(omega, lam)
    psi = fock.ground_state(p, hamiltonian)
    return fock_ket_to_density(psi)


def fock_ket_to_density(psi) -> DensityMatrix:
    """Relabel an occupation-basis 8-vector as a state on ``(A, B, C)``.

    The occupation index ``n_f + 2 n_d1 + 4 n_d2`` makes the Kronecker order
    ``(d2, d1, f) = (B, A, C)``.
    """
    rho = DensityMatrix.from_ket(psi, (2, 2, 2), ("B", "A", "C"))
    return permute_subsystems(rho, ("A", "B", "C"))


def eur_report(omega: float, lam: float, hamiltonian: np.ndarray | None = None) -> EurReport:
    """Numeric evaluation on the diagonalised model, paired with the closed forms."""
    report = tripartite_eur(model_ground_density(omega, lam, hamiltonian))
    return EurReport(
        report.numeric,
        report.lhs,
        report.rhs,
        report.complementarity,
        report.bipartite_lhs,
        report.bipartite_rhs,
        analytic_quantities(omega, lam),
    )
