import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import binary_entropy, eta_xi_sq
from majorana_eur import qinfo
from majorana_eur.errors import BadPermutation, DimensionMismatch, InvalidState, UnknownLabel
from majorana_eur.qinfo import (
    X_BASIS,
    Z_BASIS,
    DensityMatrix,
    analytic_quantities,
    asymptotic_bounds,
    bipartite_eur,
    complementarity,
    conditional_entropy,
    holevo_quantity,
    model_ground_density,
    mutual_information,
    partial_trace,
    permute_subsystems,
    post_measurement_state,
    rotated_basis,
    tripartite_eur,
    von_neumann_entropy,
)
from majorana_eur.verify import closed_form_marginals

BELL = np.array([1, 0, 0, 1]) / math.sqrt(2)


def dm(mat, dims, labels):
    return DensityMatrix(np.asarray(mat, dtype=complex), dims, labels)


def random_state(rng, dims, labels, rank=None):
    n = int(np.prod(dims))
    rank = rank or n
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    return dm(rho / np.trace(rho).real, dims, labels)


def test_density_matrix_validation():
    with pytest.raises(InvalidState):
        dm(np.diag([0.6, 0.6]), (2,), ("A",))
    with pytest.raises(InvalidState):
        dm([[0.5, 0.1], [0.2, 0.5]], (2,), ("A",))
    with pytest.raises(DimensionMismatch):
        dm(np.eye(4) / 4, (2, 3), ("A", "B"))
    with pytest.raises(DimensionMismatch):
        dm(np.eye(4) / 4, (2, 2), ("A", "A"))


def test_partial_trace_matches_closed_form():
    rho = model_ground_density(0.5, 0.5)
    eta_sq, xi_sq = eta_xi_sq(0.5, 0.5)
    assert eta_sq == pytest.approx(0.276393, abs=1e-6)
    assert xi_sq == pytest.approx(0.723607, abs=1e-6)
    for key, mat in closed_form_marginals(0.5, 0.5).items():
        np.testing.assert_allclose(partial_trace(rho, set(key)).matrix, mat, atol=1e-12)
    np.testing.assert_allclose(partial_trace(rho, {"A"}).matrix, np.eye(2) / 2, atol=1e-12)
    np.testing.assert_allclose(partial_trace(rho, {"B"}).matrix, np.eye(2) / 2, atol=1e-12)


def test_partial_trace_product_state_is_pure(rng):
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    b = rng.normal(size=3) + 1j * rng.normal(size=3)
    rho = DensityMatrix.from_ket(np.kron(a, b), (2, 3), ("A", "B"))
    assert von_neumann_entropy(partial_trace(rho, {"A"})) < 1e-10
    assert partial_trace(rho, {"B"}).dims == (3,)


def test_partial_trace_errors_and_composition(rng):
    rho = random_state(rng, (2, 3, 2), ("A", "B", "C"))
    with pytest.raises(UnknownLabel):
        partial_trace(rho, {"D"})
    with pytest.raises(ValueError):
        partial_trace(rho, set())
    step = partial_trace(partial_trace(rho, {"A", "C"}), {"A"})
    np.testing.assert_allclose(step.matrix, partial_trace(rho, {"A"}).matrix, atol=1e-12)
    sub = partial_trace(rho, {"C", "A"})
    assert sub.labels == ("A", "C")
    assert abs(np.trace(sub.matrix) - 1) < 1e-12


def test_partial_trace_oracle(rng):
    # explicit index sum as the independent oracle
    rho = random_state(rng, (2, 3, 2), ("A", "B", "C"))
    t = rho.matrix.reshape(2, 3, 2, 2, 3, 2)
    expected = np.zeros((4, 4), complex)
    for a, c, a2, c2 in np.ndindex(2, 2, 2, 2):
        expected[a * 2 + c, a2 * 2 + c2] = sum(t[a, b, c, a2, b, c2] for b in range(3))
    np.testing.assert_allclose(partial_trace(rho, {"A", "C"}).matrix, expected, atol=1e-14)


def test_permute_subsystems(rng):
    rho = random_state(rng, (2, 3), ("A", "B"))
    same = permute_subsystems(rho, ("A", "B"))
    assert np.array_equal(same.matrix, rho.matrix)
    ra = random_state(rng, (2,), ("A",)).matrix
    rb = random_state(rng, (3,), ("B",)).matrix
    swapped = permute_subsystems(dm(np.kron(ra, rb), (2, 3), ("A", "B")), ("B", "A"))
    np.testing.assert_allclose(swapped.matrix, np.kron(rb, ra), atol=1e-15)
    assert swapped.dims == (3, 2)
    with pytest.raises(BadPermutation):
        permute_subsystems(rho, ("A", "C"))
    three = random_state(rng, (2, 2, 2), ("C", "A", "B"))
    back = permute_subsystems(permute_subsystems(three, ("A", "B", "C")), ("C", "A", "B"))
    assert np.array_equal(back.matrix, three.matrix)


def test_fock_relabel_gives_maximally_mixed_a():
    rho = model_ground_density(0.3, 0.4)
    assert rho.labels == ("A", "B", "C")
    np.testing.assert_allclose(partial_trace(rho, {"A"}).matrix, np.eye(2) / 2, atol=1e-12)


def test_entropy_examples():
    assert von_neumann_entropy(DensityMatrix.from_ket([1, 1j], (2,), ("A",))) == pytest.approx(0, abs=1e-12)
    assert von_neumann_entropy(dm(np.eye(2) / 2, (2,), ("A",))) == pytest.approx(1, abs=1e-15)
    rho_c = partial_trace(model_ground_density(0.5, 0.5), {"C"})
    assert von_neumann_entropy(rho_c) == pytest.approx(0.850489, abs=1e-6)
    assert von_neumann_entropy(rho_c) == pytest.approx(binary_entropy(eta_xi_sq(0.5, 0.5)[1]), abs=1e-12)


def test_entropy_rejects_negative_eigenvalue():
    with pytest.raises(InvalidState):
        von_neumann_entropy(dm(np.diag([1.1, -0.1]), (2,), ("A",)))
    # roundoff-level negatives are clipped
    assert von_neumann_entropy(dm(np.diag([1 + 5e-11, -5e-11]), (2,), ("A",))) == pytest.approx(0, abs=1e-9)


def test_post_measurement_closed_forms():
    rho = model_ground_density(0.5, 0.5)
    eta_sq, xi_sq = eta_xi_sq(0.5, 0.5)
    rho_ac = partial_trace(rho, {"A", "C"})  # ordered (A, C)
    z = post_measurement_state(rho_ac, Z_BASIS, "A")
    expected_z = 0.5 * np.kron(np.eye(2), np.diag([xi_sq, eta_sq]))
    np.testing.assert_allclose(z.matrix, expected_z, atol=1e-12)

    x = post_measurement_state(partial_trace(rho, {"A", "B"}), X_BASIS, "A")
    a = xi_sq - eta_sq
    sx = np.array([[0, 1], [1, 0]])
    np.testing.assert_allclose(x.matrix, np.eye(4) / 4 + a / 4 * np.kron(sx, sx), atol=1e-12)
    assert a / 4 == pytest.approx(0.111803, abs=1e-6)


def test_post_measurement_oracle_and_slots(rng):
    rho = random_state(rng, (3, 2, 2), ("B", "A", "C"))
    pm = post_measurement_state(rho, X_BASIS, "A")
    # pinching with (I (x) Pi_n (x) I) is the independent oracle for rank-1 projectors
    expected = sum(
        np.kron(np.kron(np.eye(3), p), np.eye(2)) @ rho.matrix @ np.kron(np.kron(np.eye(3), p), np.eye(2))
        for p in X_BASIS.projectors
    )
    np.testing.assert_allclose(pm.matrix, expected, atol=1e-14)
    assert pm.labels == rho.labels
    with pytest.raises(DimensionMismatch):
        post_measurement_state(rho, X_BASIS, "B")


def test_post_measurement_of_diagonal_state_is_unchanged():
    rho = dm(np.diag([0.1, 0.2, 0.3, 0.4]), (2, 2), ("A", "B"))
    np.testing.assert_allclose(post_measurement_state(rho, Z_BASIS, "A").matrix, rho.matrix, atol=1e-16)
    single = dm(np.diag([0.3, 0.7]), (2,), ("A",))
    np.testing.assert_allclose(post_measurement_state(single, Z_BASIS, "A").matrix, single.matrix)


def test_conditional_entropy_examples(rng):
    ra = random_state(rng, (2,), ("A",))
    rb = random_state(rng, (2,), ("B",))
    prod = dm(np.kron(ra.matrix, rb.matrix), (2, 2), ("A", "B"))
    assert conditional_entropy(prod, "A", "B") == pytest.approx(von_neumann_entropy(ra), abs=1e-10)
    bell = DensityMatrix.from_ket(BELL, (2, 2), ("A", "B"))
    assert conditional_entropy(bell, "A", "B") == pytest.approx(-1, abs=1e-12)
    rho = model_ground_density(0.5, 0.5)
    _, xi_sq = eta_xi_sq(0.5, 0.5)
    assert conditional_entropy(rho, "A", "B") == pytest.approx(binary_entropy(xi_sq) - 1, abs=1e-12)
    assert conditional_entropy(rho, "A", "B") == pytest.approx(-0.149511, abs=1e-6)


def test_mutual_information_examples(rng):
    ra = random_state(rng, (2,), ("A",))
    rb = random_state(rng, (3,), ("B",))
    prod = dm(np.kron(ra.matrix, rb.matrix), (2, 3), ("A", "B"))
    assert mutual_information(prod, "A", "B") == pytest.approx(0, abs=1e-10)
    rho = model_ground_density(0.5, 0.5)
    assert mutual_information(rho, "A", "C") == pytest.approx(0.850489, abs=1e-6)
    for omega, lam in [(0.1, 0.9), (0.7, 0.05), (1e-3, 1e-3)]:
        r = model_ground_density(omega, lam)
        assert mutual_information(r, "A", "B") + mutual_information(r, "A", "C") == pytest.approx(2, abs=1e-9)


def test_holevo_examples():
    rho = model_ground_density(0.5, 0.5)
    _, xi_sq = eta_xi_sq(0.5, 0.5)
    assert holevo_quantity(rho, Z_BASIS, "A", "C") == pytest.approx(0, abs=1e-12)
    assert holevo_quantity(rho, X_BASIS, "A", "B") == pytest.approx(1 - binary_entropy(xi_sq), abs=1e-12)
    assert holevo_quantity(rho, X_BASIS, "A", "B") == pytest.approx(0.149511, abs=1e-6)
    sym = model_ground_density(1e-9, 1.0)
    assert holevo_quantity(sym, X_BASIS, "A", "B") == pytest.approx(0, abs=1e-9)


def test_holevo_ensemble_closed_forms():
    eta_sq, xi_sq = eta_xi_sq(0.5, 0.5)
    rho = model_ground_density(0.5, 0.5)
    ens = qinfo.outcome_ensemble(rho, X_BASIS, "A", "B")
    a = xi_sq - eta_sq
    sx = np.array([[0, 1], [1, 0]])
    for (p, cond), sign in zip(ens, (1, -1)):
        assert p == pytest.approx(0.5, abs=1e-12)
        np.testing.assert_allclose(cond, np.eye(2) / 2 + sign * a / 2 * sx, atol=1e-12)
    for p, cond in qinfo.outcome_ensemble(rho, Z_BASIS, "A", "C"):
        assert p == pytest.approx(0.5, abs=1e-12)
        # normalised conditional state on C, identical for both outcomes
        np.testing.assert_allclose(cond, np.diag([xi_sq, eta_sq]), atol=1e-12)


def test_holevo_drops_zero_probability_outcome():
    rho = dm(np.kron(np.diag([1.0, 0.0]), np.eye(2) / 2), (2, 2), ("A", "B"))
    assert holevo_quantity(rho, Z_BASIS, "A", "B") == pytest.approx(0, abs=1e-15)
    ens = qinfo.outcome_ensemble(rho, Z_BASIS, "A", "B")
    assert ens[1][1] is None


def test_complementarity():
    assert complementarity(Z_BASIS, X_BASIS) == pytest.approx(0.5, abs=1e-15)
    assert math.log2(1 / complementarity(Z_BASIS, X_BASIS)) == pytest.approx(1, abs=1e-14)
    assert complementarity(Z_BASIS, Z_BASIS) == pytest.approx(1, abs=1e-15)
    theta = math.pi / 3
    b = rotated_basis(theta)
    # oracle: overlaps of |0>,|1> with (cos t/2, sin t/2), (-sin t/2, cos t/2)
    expected = max(math.cos(theta / 2) ** 2, math.sin(theta / 2) ** 2)
    assert complementarity(Z_BASIS, b) == pytest.approx(expected, abs=1e-15)
    assert expected == pytest.approx(0.75, abs=1e-15)


def test_tripartite_example_point():
    rep = tripartite_eur(model_ground_density(0.5, 0.5))
    _, xi_sq = eta_xi_sq(0.5, 0.5)
    h = binary_entropy(xi_sq)
    assert rep.numeric.s_rhoX_AB == pytest.approx(1 + h, abs=1e-12)
    assert rep.lhs == pytest.approx(1.850489, abs=1e-6)
    assert rep.rhs == pytest.approx(rep.lhs, abs=1e-12)
    assert rep.gap == pytest.approx(0, abs=1e-12)
    assert rep.complementarity == pytest.approx(0.5, abs=1e-15)


def test_tripartite_limits():
    hi = tripartite_eur(model_ground_density(1e-7, 1.0))
    assert hi.lhs == pytest.approx(2, abs=1e-9)
    assert hi.numeric.s_X_given_B == pytest.approx(hi.numeric.s_rhoX_AB - 1, abs=1e-12)
    lo = tripartite_eur(model_ground_density(1.0, 1e-7))
    assert lo.lhs == pytest.approx(1, abs=1e-9)


def test_tripartite_requires_labels(rng):
    with pytest.raises(UnknownLabel):
        tripartite_eur(random_state(rng, (2, 2, 2), ("A", "B", "D")))
    with pytest.raises(DimensionMismatch):
        tripartite_eur(random_state(rng, (2, 3, 2), ("A", "B", "C")))


def test_bipartite_examples():
    bell = DensityMatrix.from_ket(BELL, (2, 2), ("A", "B"))
    lhs, rhs, gap = bipartite_eur(bell)
    assert (lhs, rhs, gap) == pytest.approx((0, 0, 0), abs=1e-12)
    mixed = dm(np.eye(4) / 4, (2, 2), ("A", "B"))
    assert bipartite_eur(mixed) == pytest.approx((2, 2, 0), abs=1e-12)
    rho_ab = partial_trace(model_ground_density(0.5, 0.5), {"A", "B"})
    assert bipartite_eur(rho_ab)[2] >= -1e-9


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), rank=st.integers(1, 4))
def test_bipartite_eur_holds_for_random_states(seed, rank):
    rho = random_state(np.random.default_rng(seed), (2, 2), ("A", "B"), rank=rank)
    assert bipartite_eur(rho)[2] >= -1e-9


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_tripartite_terms_on_random_states(seed):
    # The delta-refined bound is only claimed for the model; arbitrary states obey the plain
    # tripartite bound log2(1/c) = 1, and the information terms stay in range.
    rho = rep_state(seed)
    rep = tripartite_eur(rho)
    assert rep.lhs >= 1 - 1e-9
    assert rep.numeric.i_AB >= -1e-9 and rep.numeric.i_AC >= -1e-9
    assert -1e-9 <= rep.numeric.h_XB <= von_neumann_entropy(partial_trace(rho, {"B"})) + 1e-9
    assert rep.numeric.h_XB <= rep.numeric.i_AB + 1e-9


def test_refined_bound_is_not_universal():
    rep = tripartite_eur(rep_state(0))
    assert rep.lhs >= 1
    assert rep.gap < 0


def rep_state(seed):
    return random_state(np.random.default_rng(seed), (2, 2, 2), ("A", "B", "C"))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_entropies_invariant_under_relabelling(seed):
    rho = rep_state(seed)
    moved = permute_subsystems(rho, ("C", "A", "B"))
    for keep in ({"A"}, {"B"}, {"A", "B"}, {"A", "C"}, {"C"}):
        assert von_neumann_entropy(partial_trace(moved, keep)) == pytest.approx(
            von_neumann_entropy(partial_trace(rho, keep)), abs=1e-10
        )
    assert tripartite_eur(moved).lhs == pytest.approx(tripartite_eur(rho).lhs, abs=1e-10)


def test_analytic_example_point():
    q = analytic_quantities(0.5, 0.5)
    assert q.script_A == pytest.approx(0.447214, abs=1e-6)
    assert q.s_rhoX_AB == pytest.approx(1.850489, abs=1e-6)
    assert q.delta == pytest.approx(0.850489, abs=1e-6)
    assert q.s_Z_given_C == pytest.approx(1, abs=1e-14)
    assert q.s_A_given_B + q.s_A_given_C == pytest.approx(0, abs=1e-14)
    assert q.h_ZC == 0 and q.s_rho_AC == 1


def test_analytic_symmetric_point():
    q = analytic_quantities(0.0, 0.7)
    assert q.script_A == pytest.approx(0, abs=1e-15)
    assert q.s_rhoX_AB == pytest.approx(2, abs=1e-15)
    assert q.h_XB == pytest.approx(0, abs=1e-15)
    assert q.delta == pytest.approx(1, abs=1e-15)


def test_analytic_decoupled_point():
    q = analytic_quantities(0.5, 0.0)
    assert q.script_A == 1
    assert q.s_rhoX_AB == pytest.approx(1, abs=1e-15)
    assert q.delta == 0
    assert q.h_XB == pytest.approx(1, abs=1e-15)
    tiny = analytic_quantities(0.5, 1e-9)
    assert tiny.s_rhoX_AB == pytest.approx(1, abs=1e-12)


def test_numeric_matches_analytic_on_grid():
    rng = np.random.default_rng(11)
    for omega, lam in np.exp(rng.uniform(np.log(1e-3), 0, size=(60, 2))):
        rep = qinfo.eur_report(omega, lam)
        assert rep.max_numeric_deviation <= 1e-8
        assert abs(rep.gap) <= 1e-9


def test_monotone_in_parameters():
    lams = np.geomspace(1e-3, 1, 25)
    omegas = np.geomspace(1e-3, 1, 25)
    for omega in (0.01, 0.3):
        s = [analytic_quantities(omega, lam).s_rhoX_AB for lam in lams]
        assert np.all(np.diff(s) >= -1e-15)
    for lam in (0.01, 0.3):
        s = [analytic_quantities(omega, lam).s_rhoX_AB for omega in omegas]
        assert np.all(np.diff(s) <= 1e-15)


def test_asymptotic_formula_values():
    mn, _ = asymptotic_bounds(1.0, 0.01)
    assert mn == pytest.approx(1 + (1 / (4 * math.log(2))) * (1e-4 / 4) * (1 + math.log(160000)), abs=1e-15)
    assert mn == pytest.approx(1.000117, abs=1e-6)
    _, mx = asymptotic_bounds(0.001, 1.0)
    assert 2 - mx == pytest.approx(4e-6 / (32 * math.log(2)), rel=1e-12)
    assert 2 - mx == pytest.approx(1.8e-7, rel=0.01)
    assert asymptotic_bounds(0.0, 1.0)[1] == 2.0


def test_max_expansion_tracks_exact():
    for omega in (1e-2, 1e-3, 1e-4):
        exact, _ = qinfo.analytic_bound(omega, 1.0)
        _, mx = asymptotic_bounds(omega, 1.0)
        assert abs(exact - mx) <= 0.01 * (2 - mx)


def test_min_expansion_leading_order():
    # Independent expansion of 1 + h2(eta_+^2) for omega >> lambda, where eta_+^2 ~ lambda^2/omega^2:
    # 1 + (lambda^2/omega^2)(1 + ln(omega^2/lambda^2)) / ln 2.  The exact value follows it; the
    # expansion in asymptotic_bounds is smaller by roughly a factor 12-16 (see the acceptance test).
    for omega, lam in [(1.0, 1e-3), (1.0, 1e-4), (0.5, 1e-4)]:
        exact, _ = qinfo.analytic_bound(omega, lam)
        r = lam**2 / omega**2
        leading = 1 + r * (1 + math.log(1 / r)) / math.log(2)
        assert abs(exact - leading) <= 1e-3 * (leading - 1)
