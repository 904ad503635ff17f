import cmath
import math

import numpy as np
import pytest

from gbstates.binomial import BinomialParams, binomial_amplitudes
from gbstates.displacement import delta_to_zeta, displacement
from gbstates.fock import basis_state, fidelity, hp_generators
from gbstates.oracle import dense_spectrum
from gbstates.solver import (
    GBSParams,
    SolutionKind,
    binomial_phase_parameters,
    build_operator,
    coefficient_triple,
    constraint_roots,
    degenerate_eigenstates,
    eigenstate_exponential,
    eigenstate_sum,
    select_root,
    solve,
    spectrum,
    undisplaced_eigenstate,
)


def random_params(rng, hermitian=False, m_max=12):
    m = int(rng.integers(1, m_max + 1))
    mu = rng.uniform(0.05, 2.0) * np.exp(1j * rng.uniform(-np.pi, np.pi))
    nu = np.conj(mu) if hermitian else rng.uniform(0.0, 2.0) * np.exp(1j * rng.uniform(-np.pi, np.pi))
    return GBSParams(mu=complex(mu), nu=complex(nu), eta=float(rng.uniform(0.05, 0.95)), m=m)


def test_params_validation():
    with pytest.raises(ValueError):
        GBSParams(mu=0.0, nu=0.0, eta=0.5, m=2)
    with pytest.raises(ValueError):
        GBSParams(mu=1.0, nu=0.0, eta=0.0, m=2)
    with pytest.raises(ValueError):
        GBSParams(mu=1.0, nu=0.0, eta=1.0, m=2)
    with pytest.raises(ValueError):
        GBSParams(mu=1.0, nu=0.0, eta=0.5, m=-1)


def test_build_operator_two_level_assembly():
    # mu=1, nu=0, eta=0.5, m=1: sqrt(0.5) J+ - sqrt(0.5) diag(1/2, -1/2)
    op = build_operator(GBSParams(1.0, 0.0, 0.5, 1))
    s = math.sqrt(0.5)
    expected = np.array([[-s / 2, s], [0.0, s / 2]], dtype=complex)
    np.testing.assert_allclose(op, expected, atol=1e-16)


def test_build_operator_diagonal_is_minus_sqrt_eta_j0():
    p = GBSParams(0.3 + 0.4j, 0.2j, 0.36, 5)
    op = build_operator(p)
    n = np.arange(6)
    np.testing.assert_allclose(np.diag(op), -0.6 * (5 / 2 - n), atol=1e-15)


def test_build_operator_hermitian_when_nu_is_conjugate_mu():
    mu = cmath.exp(1j * math.pi / 3)
    for m in (1, 8, 20):
        op = build_operator(GBSParams(mu, np.conj(mu), 0.7, m))
        assert np.linalg.norm(op - op.conj().T) <= 1e-14


def test_build_operator_triangular_spectrum_nu_zero():
    op = build_operator(GBSParams(1.0, 0.0, 0.25, 2))
    assert np.abs(np.tril(op, -1)).max() == 0.0
    np.testing.assert_allclose(sorted(np.diag(op).real), [-0.5, 0.0, 0.5], atol=1e-15)


def test_constraint_roots_nu_zero():
    p = GBSParams(mu=2.0j, nu=0.0, eta=0.36, m=4)
    r1, r2 = constraint_roots(p)
    assert r1 == 0.0
    assert r2 == pytest.approx(-0.6 / (2.0j * 0.8), abs=1e-15)


def test_constraint_roots_golden_ratio():
    r1, r2 = constraint_roots(GBSParams(1.0, 1.0, 0.5, 2))
    golden = (-1 + math.sqrt(5)) / 2
    got = sorted([r1, r2], key=lambda z: z.real)
    assert got[0] == pytest.approx(-1 - golden, abs=1e-15)
    assert got[1] == pytest.approx(golden, abs=1e-15)


def test_constraint_roots_match_independent_closed_form():
    # delta = -(1/2mu) sqrt(eta/(1-eta)) +- (1/2mu) sqrt(eta/(1-eta) + 4 mu nu)
    rng = np.random.default_rng(9)
    for _ in range(30):
        p = random_params(rng)
        s = p.eta / (1 - p.eta)
        base = -cmath.sqrt(s) / (2 * p.mu)
        off = cmath.sqrt(s + 4 * p.mu * p.nu) / (2 * p.mu)
        expect = sorted([base + off, base - off], key=lambda z: (z.real, z.imag))
        got = sorted(constraint_roots(p), key=lambda z: (z.real, z.imag))
        for a, b in zip(got, expect):
            assert abs(a - b) <= 1e-12 * (1 + abs(b))


def test_select_root_policies():
    p = GBSParams(1.0, 0.0, 0.25, 2)
    assert select_root(p, "principal") == 0.0
    assert select_root(p, "secondary") != 0.0
    with pytest.raises(ValueError):
        select_root(p, "smallest")


def test_coefficient_triple_no_rotation():
    p = GBSParams(0.5 + 0.5j, 0.3 - 0.1j, 0.36, 4)
    t = coefficient_triple(p, 0.0)
    assert t.a_plus == pytest.approx(p.mu * 0.8, abs=1e-15)
    assert t.a_minus == pytest.approx(p.nu * 0.8, abs=1e-15)
    assert t.a_zero == pytest.approx(0.6, abs=1e-15)


def test_coefficient_triple_kills_a_minus_at_both_roots():
    rng = np.random.default_rng(17)
    for _ in range(40):
        p = random_params(rng)
        for delta in constraint_roots(p):
            t = coefficient_triple(p, delta)
            assert abs(t.a_minus) <= 1e-10 * p.scale


def test_hermitian_case_kills_both_off_coefficients():
    p = GBSParams(1.0, 1.0, 0.5, 2)
    golden = (-1 + math.sqrt(5)) / 2
    t = coefficient_triple(p, golden)
    assert abs(t.a_minus) <= 1e-12
    assert abs(t.a_plus) <= 1e-12


def test_spectrum_nu_zero_example():
    got = spectrum(GBSParams(1.0, 0.0, 0.25, 2))
    np.testing.assert_allclose(sorted(got.real), [-0.5, 0.0, 0.5], atol=1e-15)
    assert np.abs(got.imag).max() == 0.0


def test_spectrum_matches_oracle_on_random_draws():
    rng = np.random.default_rng(23)
    for _ in range(25):
        p = random_params(rng)
        closed = np.sort_complex(spectrum(p))
        oracle_vals = np.sort_complex(dense_spectrum(build_operator(p)))
        used = np.zeros(len(oracle_vals), dtype=bool)
        worst = 0.0
        for z in closed:
            d = np.abs(oracle_vals - z)
            d[used] = np.inf
            j = int(np.argmin(d))
            used[j] = True
            worst = max(worst, float(d[j]))
        assert worst <= 1e-9 * (1 + np.abs(closed).max())


def test_spectrum_root_independence():
    # A0 may flip sign between the two roots; the symmetric ladder of
    # eigenvalues absorbs that, so the multisets must coincide
    rng = np.random.default_rng(31)
    for _ in range(25):
        p = random_params(rng)
        s1 = np.sort_complex(spectrum(p, "principal"))
        s2 = np.sort_complex(spectrum(p, "secondary"))
        used = np.zeros(len(s2), dtype=bool)
        worst = 0.0
        for z in s1:
            d = np.abs(s2 - z)
            d[used] = np.inf
            j = int(np.argmin(d))
            used[j] = True
            worst = max(worst, float(d[j]))
        assert worst <= 1e-9 * (1 + np.abs(s1).max())


def test_undisplaced_eigenstate_support():
    p = GBSParams(1.2 * np.exp(0.3j), 0.5, 0.4, 9)
    for k in (0, 3, 9):
        core = undisplaced_eigenstate(p, k)
        if k < p.m:
            assert np.abs(core[k + 1 :]).max() == 0.0
        assert abs(core[k]) > 0.0


def test_eigenstate_k0_is_rotated_vacuum():
    p = GBSParams(1.0, 0.6, 0.5, 6)
    v = eigenstate_sum(p, 0)
    zeta = delta_to_zeta(select_root(p), p.m)
    expected = displacement(zeta) @ basis_state(0, 7)
    assert fidelity(v, expected) >= 1 - 1e-13


def test_nu_zero_top_state_recovers_binomial():
    for m, eta in ((5, 0.36), (12, 0.7)):
        v = eigenstate_sum(GBSParams(1.0, 0.0, eta, m), m)
        assert fidelity(v, binomial_amplitudes(BinomialParams(eta, m))) >= 1 - 1e-12


def test_nu_zero_mu_phase_puts_phases_on_amplitudes():
    eta, m, phi = 0.4, 7, 1.1
    base = eigenstate_sum(GBSParams(1.0, 0.0, eta, m), m)
    dressed = eigenstate_sum(GBSParams(cmath.exp(1j * phi), 0.0, eta, m), m)
    n = np.arange(m + 1)
    np.testing.assert_allclose(dressed, base * np.exp(-1j * n * phi), atol=1e-13)


def test_top_state_binomial_phase_structure():
    p = GBSParams(1.3 * np.exp(0.8j), 0.4 * np.exp(-0.5j), 0.45, 8)
    eta_prime, theta0, theta_plus = binomial_phase_parameters(p)
    assert 0.0 < eta_prime < 1.0
    core = undisplaced_eigenstate(p, p.m)
    ref = binomial_amplitudes(BinomialParams(eta_prime, p.m))
    n = np.arange(p.m + 1)
    expected = ref * np.exp(1j * n * (theta0 - theta_plus))
    # both sides carry the lead-entry-real normalization, so compare termwise
    np.testing.assert_allclose(core, expected / (expected[0] / abs(expected[0])), atol=1e-12)


def test_binomial_phase_parameters_nu_zero():
    p = GBSParams(1.0, 0.0, 0.3, 6)
    eta_prime, theta0, theta_plus = binomial_phase_parameters(p)
    assert eta_prime == pytest.approx(0.3, abs=1e-14)
    assert theta0 - theta_plus == pytest.approx(0.0, abs=1e-14)

    phi = 0.9
    eta_prime, theta0, theta_plus = binomial_phase_parameters(
        GBSParams(cmath.exp(1j * phi), 0.0, 0.3, 6)
    )
    assert theta0 - theta_plus == pytest.approx(-phi, abs=1e-14)


def test_binomial_phase_parameters_modulus_dependence():
    # |mu| enters eta' squared
    for mod in (0.5, 2.0):
        eta = 0.3
        eta_prime, _, _ = binomial_phase_parameters(GBSParams(mod, 0.0, eta, 6))
        assert eta_prime == pytest.approx(eta / (eta + mod**2 * (1 - eta)), abs=1e-14)


def test_exponential_form_k0_is_vacuum_core():
    p = GBSParams(1.0, 0.4, 0.5, 5)
    zeta = delta_to_zeta(select_root(p), p.m)
    v = eigenstate_exponential(p, 0)
    expected = displacement(zeta) @ basis_state(0, 6)
    assert fidelity(v, expected) >= 1 - 1e-13


def test_exponential_equals_sum_form():
    p = GBSParams(1.0, 0.0, 0.5, 4)
    assert fidelity(eigenstate_sum(p, 2), eigenstate_exponential(p, 2)) >= 1 - 1e-12

    rng = np.random.default_rng(7)
    for _ in range(15):
        q = random_params(rng, m_max=10)
        for k in range(q.m + 1):
            assert fidelity(eigenstate_sum(q, k), eigenstate_exponential(q, k)) >= 1 - 1e-11


def test_eigenstate_index_validation():
    p = GBSParams(1.0, 0.0, 0.5, 4)
    with pytest.raises(ValueError):
        eigenstate_sum(p, 5)
    with pytest.raises(ValueError):
        eigenstate_exponential(p, -1)


def test_degenerate_branch_hermitian_case():
    p = GBSParams(1.0, 1.0, 0.5, 2)
    states = degenerate_eigenstates(p)
    assert len(states) == 3
    op = build_operator(p)
    lams = spectrum(p)
    for lam, v in zip(lams, states):
        assert np.linalg.norm(op @ v - lam * v) <= 1e-10 * np.linalg.norm(op)
    basis = np.column_stack(states)
    assert np.abs(basis.conj().T @ basis - np.eye(3)).max() <= 1e-11


def test_degenerate_states_orthonormal_random_phase():
    rng = np.random.default_rng(13)
    for _ in range(6):
        mu = rng.uniform(0.2, 2.0) * np.exp(1j * rng.uniform(-np.pi, np.pi))
        p = GBSParams(complex(mu), complex(np.conj(mu)), float(rng.uniform(0.1, 0.9)), int(rng.integers(1, 11)))
        states = degenerate_eigenstates(p)
        basis = np.column_stack(states)
        off = basis.conj().T @ basis - np.eye(p.m + 1)
        assert np.abs(off).max() <= 1e-11


def test_degenerate_states_approach_number_states_near_eta_one():
    # residual rotation shrinks like sqrt(1 - eta); fidelities rise toward 1
    p = GBSParams(1.0, 1.0, 0.999, 2)
    for k, v in enumerate(degenerate_eigenstates(p)):
        assert fidelity(v, basis_state(k, 3)) >= 0.99
    closer = GBSParams(1.0, 1.0, 0.99999, 2)
    for k, v in enumerate(degenerate_eigenstates(closer)):
        assert fidelity(v, basis_state(k, 3)) >= 0.9999


def test_degenerate_requires_right_branch():
    with pytest.raises(ValueError):
        degenerate_eigenstates(GBSParams(1.0, 0.0, 0.5, 3))
    with pytest.raises(ValueError):
        eigenstate_sum(GBSParams(1.0, 1.0, 0.5, 3), 1)


def test_solve_generic_frozen_spectrum():
    sol = solve(GBSParams(1.0, 0.0, 0.36, 5))
    assert sol.kind is SolutionKind.GENERIC
    expected = [0.6 * (2 * k - 5) / 2 for k in range(6)]
    np.testing.assert_allclose(sol.eigenvalues.real, expected, atol=1e-15)
    np.testing.assert_allclose(sol.eigenvalues.imag, 0.0, atol=1e-15)
    op = build_operator(sol.params)
    for lam, v in zip(sol.eigenvalues, sol.eigenstates):
        assert np.linalg.norm(op @ v - lam * v) <= 1e-10 * np.linalg.norm(op)


def test_solve_hermitian_branch():
    sol = solve(GBSParams(1.0, 1.0, 0.5, 3))
    assert sol.kind is SolutionKind.DEGENERATE_A_PLUS_ZERO
    assert len(sol.eigenstates) == 4
    assert np.abs(sol.eigenvalues.imag).max() <= 1e-10


def test_solve_single_level():
    sol = solve(GBSParams(1.0, 0.0, 0.5, 0))
    assert sol.eigenvalues.shape == (1,)
    assert sol.eigenvalues[0] == 0.0
    np.testing.assert_allclose(sol.eigenstates[0], basis_state(0, 1))


def test_solve_defective_branch():
    # mu nu = -eta/(4(1-eta)) collapses the whole spectrum onto zero
    p = GBSParams(1.0, -1.0, 0.8, 3)
    sol = solve(p)
    assert sol.kind is SolutionKind.DEFECTIVE_A_ZERO_ZERO
    assert np.abs(sol.eigenvalues).max() <= 1e-12
    assert len(sol.eigenstates) == 1
    op = build_operator(p)
    assert np.linalg.norm(op @ sol.eigenstates[0]) <= 1e-10 * np.linalg.norm(op)
    with pytest.raises(ValueError):
        eigenstate_sum(p, 1)
    with pytest.raises(ValueError):
        binomial_phase_parameters(p)


def test_generic_eigenbasis_linearly_independent():
    rng = np.random.default_rng(29)
    for _ in range(10):
        p = random_params(rng)
        sol = solve(p)
        if sol.kind is not SolutionKind.GENERIC:
            continue
        basis = np.column_stack(sol.eigenstates)
        smallest = np.linalg.svd(basis, compute_uv=False)[-1]
        assert smallest > 1e-10
