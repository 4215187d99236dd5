import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from conftest import rep_st
from u2reduce import validate
from u2reduce import moment as mm
from u2reduce.errors import BadLength, LengthMismatch, NotSkewHermitian, ZeroVector
from u2reduce.verify import sample_unit

S2 = np.sqrt(2)


def close(H, m, tol=1e-12):
    return np.max(np.abs(H.matrix() - np.asarray(m, dtype=complex))) <= tol


def test_f_pair_examples():
    F1, F2 = mm.f_pair(1, [1, 0])
    assert F1.tolist() == [1] and F2.tolist() == [0]
    F1, F2 = mm.f_pair(2, [0, 1, 0])
    assert np.allclose(F1, [0, 1]) and np.allclose(F2, [1, 0])
    F1, F2 = mm.f_pair(2, [1, 1, 1])
    assert np.isclose(np.vdot(F1, F1).real + np.vdot(F2, F2).real, 6)
    with pytest.raises(BadLength):
        mm.f_pair(2, [1, 1])


@pytest.mark.parametrize("j", [0, 1, 2])
def test_phi_block_basis(j):
    e = np.eye(3)[j]
    assert close(mm.phi_block(2, 0, e), np.diag([2 - j, j]))


def test_phi_block_examples():
    lam = 1.5
    Zb = [np.sqrt(lam / 2), 0, np.sqrt((2 - lam) / 2)]
    assert close(mm.phi_block(2, 0, Zb), np.diag([1.5, 0.5]))
    assert close(mm.phi_block(0, -3, [1]), np.diag([-3, -3]))
    with pytest.raises(ZeroVector):
        mm.phi_block(2, 0, [0, 0, 0])


def test_phi_rep_examples():
    assert close(mm.phi_rep(validate([(0, 2)]), [0, 1, 0]), np.eye(2))
    rep = validate([(0, 1), (0, 1)])
    assert close(mm.phi_rep(rep, [1, 0, 0, 1]), np.diag([0.5, 0.5]))
    assert close(mm.phi_rep(rep, [[1, 0], [0, 1]]), np.diag([0.5, 0.5]))
    assert close(mm.phi_rep(validate([(1, 0)]), [1]), np.eye(2))
    with pytest.raises(ZeroVector):
        mm.phi_rep(rep, np.zeros(4))


def test_psi_examples():
    rep = validate([(0, 2)])
    assert np.allclose(mm.psi_rep(rep, [1, 0, 0]), (2, 0), atol=1e-15)
    assert np.allclose(mm.psi_rep(rep, np.ones(3) / np.sqrt(3)), (1, 1))


def test_upsilon_examples():
    assert mm.upsilon(validate([(0, 2)]), [0, 1, 0]) == 0
    assert np.isclose(mm.upsilon(validate([(0, 1)]), np.array([1, 1]) / S2), 0.5)
    assert np.isclose(mm.upsilon(validate([(0, 2)]), np.array([1, 1, 0]) / S2), S2 / 2)


def test_lie_action_examples():
    A = mm.lie_action_matrix(validate([(0, 1)]), mm.RHO)
    assert np.array_equal(A, np.array([[-1j, 0], [0, 0]]))
    for k in range(5):
        A = mm.lie_action_matrix(validate([(0, k)]), mm.GAMMA)
        assert np.array_equal(A, np.diag(-1j * np.arange(k + 1)))
    alpha = np.array([[0.3j, 1 + 2j], [-1 + 2j, -0.7j]])
    A = mm.lie_action_matrix(validate([(1, 0)]), alpha)
    assert A.shape == (1, 1) and np.isclose(A[0, 0], -np.trace(alpha))
    with pytest.raises(NotSkewHermitian):
        mm.lie_action_matrix(validate([(0, 1)]), np.eye(2))


@given(rep_st, st.integers(0, 2**32 - 1))
def test_lie_action_is_skew_hermitian_and_linear(rep, seed):
    rng = np.random.default_rng(seed)
    w = rng.standard_normal(4)
    basis = [mm.ETA, mm.XI, mm.RHO, mm.GAMMA]
    alpha = sum(c * b for c, b in zip(w, basis))
    A = mm.lie_action_matrix(rep, alpha)
    assert np.allclose(A, -A.conj().T, atol=1e-12)
    parts = sum(c * mm.lie_action_matrix(rep, b) for c, b in zip(w, basis))
    assert np.allclose(A, parts, atol=1e-12)


@given(rep_st, st.integers(0, 2**32 - 1))
def test_moment_pairs_with_action(rep, seed):
    # oracle for a linear unitary action: i <Z, A_beta Z> / |Z|^2 = -i tr(H beta)
    rng = np.random.default_rng(seed)
    Z = sample_unit(rep.dim, rng)
    H = mm.phi_rep(rep, Z).matrix()
    for b in (mm.ETA, mm.XI, mm.RHO, mm.GAMMA):
        lhs = 1j * np.vdot(Z, mm.lie_action_matrix(rep, b) @ Z)
        assert abs(lhs - (-1j) * np.trace(H @ b)) <= 1e-12


@given(rep_st, st.integers(0, 2**32 - 1))
def test_trace_is_mass_weighted_average(rep, seed):
    rng = np.random.default_rng(seed)
    Z = sample_unit(rep.dim, rng)
    masses = [np.vdot(b, b).real for b in rep.split(Z)]
    expected = sum(m * s.trace_weight for m, s in zip(masses, rep.summands))
    assert abs(mm.phi_rep(rep, Z).trace - expected) <= 1e-12
    lo = min(s.trace_weight for s in rep.summands)
    hi = max(s.trace_weight for s in rep.summands)
    assert lo - 1e-12 <= mm.phi_rep(rep, Z).trace <= hi + 1e-12


@given(st.integers(2, 6), st.integers(-2, 2), st.integers(0, 2**32 - 1))
def test_single_block_psd(k, l, seed):
    H = mm.phi_block(k, l, sample_unit(k + 1, np.random.default_rng(seed)))
    assert np.linalg.eigvalsh(H.matrix() - l * np.eye(2))[0] >= -1e-12


def test_equivariance_fixed_direction():
    rep = validate([(0, 2), (1, 1), (1, 1)])
    for idx in [(1, 0), (2, 1), (3, 0)]:
        for h in (1e-2, 1e-4):
            assert mm.equivariance_residual(rep, rep.basis_vector(idx), mm.RHO, h) <= 1e-12


def test_equivariance_order_two():
    rep = validate([(0, 2)])
    Z = sample_unit(3, np.random.default_rng(7))
    r1 = mm.equivariance_residual(rep, Z, mm.XI, 1e-4)
    r2 = mm.equivariance_residual(rep, Z, mm.XI, 2e-4)
    assert r1 <= 1e-6
    assert r1 <= 1e-10 or 3.5 <= r2 / r1 <= 4.5
    with pytest.raises(ValueError):
        mm.equivariance_residual(rep, Z, mm.XI, 0)


def test_group_action_matches_flow_derivative():
    # 4th-order stencil of d/dt H(e^{tA} Z) at t=0 against the commutator
    rep = validate([(1, 3)])
    Z = sample_unit(4, np.random.default_rng(3))
    alpha = 0.4 * mm.ETA - 0.2 * mm.XI + 0.1 * mm.GAMMA
    A = mm.lie_action_matrix(rep, alpha)
    h = 1e-3
    Hs = [mm.phi_rep(rep, expm(t * A) @ Z).matrix() for t in (-2 * h, -h, h, 2 * h)]
    d = (Hs[0] - 8 * Hs[1] + 8 * Hs[2] - Hs[3]) / (12 * h)
    H = mm.phi_rep(rep, Z).matrix()
    assert np.max(np.abs(d - (alpha @ H - H @ alpha))) <= 1e-10
    assert np.allclose(mm.group_action(rep, alpha), expm(A))


def test_exp_antidiag_examples():
    assert np.array_equal(mm.exp_antidiag(0), np.eye(2))
    assert np.max(np.abs(mm.exp_antidiag(np.pi / 2) - [[0, 1j], [1j, 0]])) <= 1e-15
    assert np.max(np.abs(mm.exp_antidiag(np.pi) + np.eye(2))) <= 1e-15
    assert np.array_equal(mm.exp_antidiag_series(0, 1), np.eye(2))
    assert np.max(np.abs(mm.exp_antidiag_series(np.pi / 2, 40) - [[0, 1j], [1j, 0]])) <= 1e-12
    assert np.max(np.abs(mm.exp_antidiag_series(1 + 1j, 40) - mm.exp_antidiag(1 + 1j))) <= 1e-12
    with pytest.raises(ValueError):
        mm.exp_antidiag_series(1, 0)


@given(st.complex_numbers(max_magnitude=np.pi, allow_nan=False, allow_infinity=False))
def test_exp_antidiag_vs_expm(z):
    assert np.max(np.abs(mm.exp_antidiag(z) - expm(mm.b_matrix(z)))) <= 1e-12


def test_exp_small_argument_branch():
    for r in (1e-5, 1e-4 * 0.999, 1e-4 * 1.001, 1e-8):
        z = r * np.exp(0.3j)
        assert np.max(np.abs(mm.exp_antidiag(z) - expm(mm.b_matrix(z)))) <= 1e-15


def test_conjugate_diag_examples():
    assert close(mm.conjugate_diag(0, (3, 1)), np.diag([3, 1]))
    assert close(mm.conjugate_diag(np.pi / 2, (3, 1)), np.diag([1, 3]))
    H = mm.conjugate_diag(np.pi / 4 * np.exp(0.7j), (3, 1))
    assert np.isclose(H.h11, 2) and np.isclose(H.h22, 2) and np.isclose(abs(H.h12), 1)


@given(
    st.complex_numbers(max_magnitude=np.pi, allow_nan=False, allow_infinity=False),
    st.tuples(st.integers(-9, 9), st.integers(-9, 9)),
)
def test_conjugate_diag_vs_expm(z, nu):
    B = mm.b_matrix(z)
    direct = expm(B) @ np.diag(nu) @ expm(-B)
    H = mm.conjugate_diag(z, nu)
    assert np.max(np.abs(H.matrix() - direct)) <= 1e-12
    s2 = np.sin(abs(z)) ** 2
    assert abs(mm.nu_perp_pairing(H, nu) - (nu[0] ** 2 - nu[1] ** 2) * s2) <= 1e-12


def test_weighted_moment_examples():
    assert mm.weighted_moment([5, 5], [1, 7], [0.3, 2j]) == pytest.approx(5)
    assert mm.weighted_moment([1, 2], [1, 1], [1, 1]) == 1.5
    with pytest.raises(LengthMismatch):
        mm.weighted_moment([1, 2], [1], [1, 1])
    with pytest.raises(ZeroVector):
        mm.weighted_moment([1], [1], [0])


@given(
    st.lists(st.tuples(st.integers(1, 30), st.integers(1, 30)), min_size=1, max_size=8),
    st.integers(2, 5),
    st.integers(0, 2**32 - 1),
)
def test_weighted_moment_scale_invariant(ad, r, seed):
    a, d = map(np.array, zip(*ad))
    Z = sample_unit(len(a), np.random.default_rng(seed))
    base = mm.weighted_moment(a, d, Z)
    assert abs(mm.weighted_moment(a, r * d, Z) - base) <= 1e-12
    assert a.min() - 1e-12 <= base <= a.max() + 1e-12


def test_hermitian2_helpers():
    H = mm.Hermitian2(3.0, 1.0, 1j)
    assert H.h21 == -1j and H.trace == 4 and H.det == 2
    assert H.eigvals() == pytest.approx((2 + np.sqrt(2), 2 - np.sqrt(2)))
    assert mm.Hermitian2.from_matrix(H.matrix()) == H
