"""Self-verification suite: numeric linear algebra against the closed forms."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import fock, qinfo, witness
from .errors import MajoranaEurError
from .linalg import dagger, hermitian_eig


@dataclass
class Check:
    name: str
    tolerance: float
    worst: float = 0.0
    where: tuple[float, float] | None = None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.worst <= self.tolerance

    def record(self, value: float, where: tuple[float, float] | None = None) -> None:
        value = float(value) if np.isfinite(value) else float("inf")
        if self.where is None or value > self.worst:
            self.worst = max(self.worst, value)
            self.where = where

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{self.name}: {status}  worst={self.worst:.3e} (tol {self.tolerance:.0e})"
        if self.where is not None:
            text += f" at omega={self.where[0]:.6g}, lambda={self.where[1]:.6g}"
        if self.error:
            text += f"  [{self.error}]"
        return text


def log_uniform_grid(n: int, seed: int, low: float = 1e-3, high: float = 1.0) -> np.ndarray:
    """``n`` seeded ``(omega, lambda)`` pairs, log-uniform in ``[low, high]^2``."""
    rng = np.random.default_rng(seed)
    return np.exp(rng.uniform(np.log(low), np.log(high), size=(n, 2)))


def model_hamiltonian(omega: float, lam: float, corrupt: bool = False) -> np.ndarray:
    """Model Hamiltonian; ``corrupt`` flips the sign of the QD2 coupling (negative control)."""
    if corrupt:
        return fock.build_hamiltonian(fock.ModelParams(omega, lam, lambda2=np.sqrt(2.0) * lam))
    return fock.build_hamiltonian(fock.ModelParams(omega, lam))


def expected_spectrum(omega: float, lam: float) -> np.ndarray:
    d = np.hypot(omega, 2.0 * lam)
    return np.sort(np.array([-d, -d, -omega, -omega, omega, omega, d, d]))


def closed_form_marginals(omega: float, lam: float) -> dict[str, np.ndarray]:
    """Reduced states of ``|e1><e1|`` written out in the computational basis."""
    _, eta, _, xi, _ = fock.mixing_coefficients(omega, lam)
    e2, x2 = eta * eta, xi * xi
    k0 = np.array([1.0, 0.0])
    k1 = np.array([0.0, 1.0])
    ket = lambda *ks: np.kron(*ks) if len(ks) == 2 else ks[0]  # noqa: E731
    op = lambda a, b: np.outer(a, b).astype(np.complex128)  # noqa: E731
    i2 = np.eye(2)
    rho_ab = 0.5 * e2 * (
        op(ket(k0, k0), ket(k0, k0)) + op(ket(k1, k1), ket(k1, k1))
        - op(ket(k1, k1), ket(k0, k0)) - op(ket(k0, k0), ket(k1, k1))
    ) + 0.5 * x2 * (
        op(ket(k0, k1), ket(k0, k1)) + op(ket(k1, k0), ket(k1, k0))
        + op(ket(k0, k1), ket(k1, k0)) + op(ket(k1, k0), ket(k0, k1))
    )
    sigma = op(k0, k1) - op(k1, k0)
    rho_ac = (
        0.5 * e2 * np.kron(i2, op(k1, k1))
        + 0.5 * x2 * np.kron(i2, op(k0, k0))
        + 0.5 * eta * xi * np.kron(sigma, sigma)
    )
    return {
        "AB": rho_ab,
        "AC": rho_ac,
        "C": e2 * op(k1, k1) + x2 * op(k0, k0),
        "A": 0.5 * np.eye(2, dtype=np.complex128),
        "B": 0.5 * np.eye(2, dtype=np.complex128),
    }


def _car_deviation() -> float:
    ops = fock.fermion_annihilators()
    eye = np.eye(8)
    worst = 0.0
    for i, a in enumerate(ops):
        for j, b in enumerate(ops):
            worst = max(worst, np.max(np.abs(a @ dagger(b) + dagger(b) @ a - (i == j) * eye)))
            worst = max(worst, np.max(np.abs(a @ b + b @ a)))
    return float(worst)


def run_checks(
    seed: int = 0,
    n_grid: int = 200,
    tolerance: float = 1e-9,
    corrupt: bool = False,
    progress: Callable[[str], None] | None = None,
) -> list[Check]:
    """Run every invariant over a seeded grid and return one ``Check`` per invariant."""
    grid = log_uniform_grid(n_grid, seed)
    checks = {
        "car": Check("canonical anticommutation", 0.0),
        "spectrum": Check("spectrum = {-Delta, -omega, omega, Delta} x2", 1e-10),
        "eigvec": Check("analytic eigenvectors e1..e8", 1e-10),
        "marginals": Check("marginals rho_AB, rho_AC, rho_C, rho_A, rho_B", 1e-10),
        "equality": Check("EUR equality |lhs - rhs|", tolerance),
        "inequality": Check("EUR inequality rhs - lhs", tolerance),
        "szc": Check("S(Z|C)=1", tolerance),
        "sac": Check("S(rho_AC)=1", tolerance),
        "hzc": Check("H(Z:C)=0", tolerance),
        "cond_sum": Check("S(A|B)+S(A|C)=0", tolerance),
        "mi_sum": Check("I(A:B)+I(A:C)=2", tolerance),
        "numeric": Check("numeric vs closed form (all terms)", 1e-8),
        "witness": Check("witness = xi_+^2/4", tolerance),
        "bipartite": Check("bipartite EUR rhs - lhs", tolerance),
        "bell": Check("bipartite EUR saturation (Bell state)", tolerance),
        "limits": Check("limits S(rho^X_AB)->2, lhs->1", 1e-6),
    }
    checks["car"].record(_car_deviation())

    bell = qinfo.DensityMatrix.from_ket(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2), ("A", "B"))
    checks["bell"].record(abs(qinfo.bipartite_eur(bell)[2]))

    for omega, lam in grid:
        where = (float(omega), float(lam))
        omega, lam = where
        try:
            _check_point(checks, omega, lam, corrupt, where)
        except MajoranaEurError as exc:
            for key in ("spectrum", "eigvec", "marginals", "equality", "numeric"):
                if checks[key].error is None:
                    checks[key].error = f"{type(exc).__name__}: {exc}"
                    checks[key].where = where
            break

    try:
        hi = qinfo.eur_report(1e-6, 1.0, model_hamiltonian(1e-6, 1.0, corrupt))
        lo = qinfo.eur_report(1.0, 1e-6, model_hamiltonian(1.0, 1e-6, corrupt))
        checks["limits"].record(max(2.0 - hi.numeric.s_rhoX_AB, 0.0), (1e-6, 1.0))
        checks["limits"].record(max(lo.lhs - 1.0, 0.0), (1.0, 1e-6))
    except MajoranaEurError as exc:
        checks["limits"].error = f"{type(exc).__name__}: {exc}"

    if progress is not None:
        progress(f"checked {len(grid)} grid points (seed {seed})")
    return list(checks.values())


def _check_point(checks: dict[str, Check], omega: float, lam: float, corrupt: bool, where) -> None:
    h = model_hamiltonian(omega, lam, corrupt)
    evals = hermitian_eig(h).eigenvalues
    checks["spectrum"].record(float(np.max(np.abs(evals - expected_spectrum(omega, lam)))), where)

    analytic = fock.analytic_eigensystem(fock.ModelParams(omega, lam))
    vecs = analytic.vectors
    res = np.max(np.abs(h @ vecs - vecs * analytic.energies))
    ortho = np.max(np.abs(vecs.conj().T @ vecs - np.eye(8)))
    checks["eigvec"].record(float(max(res, ortho)), where)

    rho = qinfo.model_ground_density(omega, lam, h)
    expected = closed_form_marginals(omega, lam)
    worst = max(
        float(np.max(np.abs(qinfo.partial_trace(rho, set(key)).matrix - mat))) for key, mat in expected.items()
    )
    checks["marginals"].record(worst, where)

    rep = qinfo.tripartite_eur(rho)
    num = rep.numeric
    checks["equality"].record(abs(rep.gap), where)
    checks["inequality"].record(max(rep.rhs - rep.lhs, 0.0), where)
    checks["szc"].record(abs(num.s_Z_given_C - 1.0), where)
    checks["sac"].record(abs(num.s_rho_AC - 1.0), where)
    checks["hzc"].record(abs(num.h_ZC), where)
    checks["cond_sum"].record(abs(num.s_A_given_B + num.s_A_given_C), where)
    checks["mi_sum"].record(abs(num.i_AB + num.i_AC - 2.0), where)
    checks["numeric"].record(num.max_deviation(qinfo.analytic_quantities(omega, lam)), where)
    checks["bipartite"].record(max(rep.bipartite_rhs - rep.bipartite_lhs, 0.0), where)

    qd = qinfo.partial_trace(rho, {"A", "B"})
    w = witness.witness_from_state(qd, witness.KrausChannel()).witness
    checks["witness"].record(abs(w - witness.analytic_witness(omega, lam)), where)


def format_report(checks: Iterable[Check]) -> str:
    checks = list(checks)
    lines = [c.line() for c in checks]
    failed = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    return "\n".join(lines)
