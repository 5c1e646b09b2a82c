import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orthokit.core_linalg import (
    DEFAULT_CFG,
    ToleranceConfig,
    as_matrix,
    eigenspace,
    hermitian_eig,
    operator_norm,
    polar_unitary,
    positive_part,
    psd_sqrt,
    random_complex,
    random_unitary,
    spectral_norms,
    subspace_intersection,
)
from orthokit.errors import DimensionMismatch, NoConvergence, NotHermitian, NotPSD


def rand_herm(n, rng):
    g = random_complex((n, n), rng)
    return (g + g.conj().T) / 2


# --- hermitian_eig ---------------------------------------------------------


def test_eig_2x2_real():
    e = hermitian_eig(np.array([[2, 1], [1, 2]]))
    assert np.allclose(e.eigenvalues, [1, 3], atol=1e-14)


def test_eig_zero_matrix_gives_identity_vectors():
    e = hermitian_eig(np.zeros((3, 3)))
    assert np.array_equal(e.eigenvalues, np.zeros(3))
    assert np.allclose(e.eigenvectors, np.eye(3))


def test_eig_imaginary_offdiagonal():
    e = hermitian_eig(np.array([[0, 1j], [-1j, 0]]))
    assert np.allclose(e.eigenvalues, [-1, 1], atol=1e-14)


def test_eig_1x1():
    e = hermitian_eig(np.array([[-2.5]]))
    assert e.eigenvalues[0] == -2.5


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0, 1], [0, 0]]))
    with pytest.raises(NotHermitian):
        hermitian_eig(np.ones((2, 3)))


def test_eig_reports_nonconvergence():
    rng = np.random.default_rng(3)
    with pytest.raises(NoConvergence):
        hermitian_eig(rand_herm(30, rng), ToleranceConfig(eig_sweeps=1))


def test_eig_matches_lapack():
    rng = np.random.default_rng(4)
    for n in (2, 5, 17, 40):
        m = rand_herm(n, rng)
        assert np.allclose(hermitian_eig(m).eigenvalues, np.linalg.eigvalsh(m), atol=1e-12)


def test_eig_degenerate_spectrum():
    rng = np.random.default_rng(5)
    u = random_unitary(6, rng)
    m = u @ np.diag([1, 1, 1, -2, -2, 0]) @ u.conj().T
    e = hermitian_eig(m)
    assert np.allclose(e.eigenvalues, [-2, -2, 0, 1, 1, 1], atol=1e-12)
    assert np.linalg.norm(m @ e.eigenvectors - e.eigenvectors * e.eigenvalues) < 1e-12


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 2**32 - 1))
def test_eig_reconstruction_property(n, seed):
    m = rand_herm(n, np.random.default_rng(seed))
    e = hermitian_eig(m)
    v, w = e.eigenvectors, e.eigenvalues
    scale = max(np.linalg.norm(m, 2), 1e-300)
    assert np.linalg.norm((v * w) @ v.conj().T - m, 2) <= 1e-9 * scale
    assert np.linalg.norm(v.conj().T @ v - np.eye(n), 2) <= 1e-10
    assert np.all(np.diff(w) >= 0)


# --- operator_norm ---------------------------------------------------------


@pytest.mark.parametrize(
    "m, expected",
    [
        ([[0, 2], [0, 0]], 2.0),
        (np.eye(4), 1.0),
        ([[1, 1], [1, 1]], 2.0),
        (np.zeros((2, 3)), 0.0),
    ],
)
def test_operator_norm_examples(m, expected):
    assert operator_norm(m) == pytest.approx(expected, abs=1e-14)


@settings(max_examples=30, deadline=None)
@given(r=st.integers(1, 6), c=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_operator_norm_unitary_invariance(r, c, seed):
    rng = np.random.default_rng(seed)
    m = random_complex((r, c), rng)
    u, w = random_unitary(r, rng), random_unitary(c, rng)
    nm = operator_norm(m)
    assert operator_norm(u @ m @ w) == pytest.approx(nm, rel=1e-8)
    assert nm == pytest.approx(spectral_norms(m[None])[0], rel=1e-12)


# --- polar, sqrt, positive part --------------------------------------------


def test_polar_positive_diagonal():
    u, p = polar_unitary(np.diag([2, 3]))
    assert np.allclose(u, np.eye(2))
    assert np.allclose(p, np.diag([2, 3]))


def test_polar_rank_deficient():
    b = np.array([[0, 2], [0, 0]])
    u, p = polar_unitary(b)
    assert np.allclose(p, np.diag([0, 2]), atol=1e-14)
    assert np.allclose(u @ p, b, atol=1e-14)
    assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-14)


def test_polar_of_unitary():
    u0 = random_unitary(4, np.random.default_rng(1))
    u, p = polar_unitary(u0)
    assert np.allclose(p, np.eye(4), atol=1e-12)
    assert np.allclose(u, u0, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 7), rank=st.integers(0, 7), seed=st.integers(0, 2**32 - 1))
def test_polar_property(n, rank, seed):
    rng = np.random.default_rng(seed)
    rank = min(rank, n)
    b = random_complex((n, rank), rng) @ random_complex((rank, n), rng) if rank else np.zeros((n, n))
    u, p = polar_unitary(b)
    scale = max(np.linalg.norm(b, 2), 1.0)
    assert np.linalg.norm(u @ p - b, 2) <= 1e-9 * scale
    assert np.linalg.norm(u.conj().T @ u - np.eye(n), 2) <= 1e-10
    assert np.min(np.linalg.eigvalsh(p)) >= -1e-12 * scale


def test_psd_sqrt_examples():
    assert np.allclose(psd_sqrt(np.diag([4, 9])), np.diag([2, 3]))
    assert np.allclose(psd_sqrt(np.eye(3)), np.eye(3))
    m = np.array([[2, 1], [1, 2]])
    s = psd_sqrt(m)
    assert np.linalg.norm(s @ s - m) < 1e-10
    assert np.min(np.linalg.eigvalsh(s)) >= 0


def test_psd_sqrt_clamps_roundoff_and_rejects_negative():
    s = psd_sqrt(np.diag([1.0, -1e-12]))
    assert np.allclose(s, np.diag([1, 0]))
    with pytest.raises(NotPSD):
        psd_sqrt(np.diag([1.0, -1e-3]))


def test_positive_part_examples():
    assert np.allclose(positive_part(np.diag([-1, 0.5])), np.diag([0, 0.5]))
    p = np.array([[2, 1], [1, 2]], dtype=complex)
    assert np.allclose(positive_part(p), p)
    assert np.allclose(positive_part(-np.eye(3)), 0)
    with pytest.raises(NotHermitian):
        positive_part(np.array([[0, 1], [0, 0]]))


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_positive_part_split(n, seed):
    h = rand_herm(n, np.random.default_rng(seed))
    hp, hm = positive_part(h), positive_part(-h)
    assert np.linalg.norm(hp - hm - h) <= 1e-9
    assert np.linalg.norm(hp @ hm) <= 1e-9


# --- eigenspace and intersection -------------------------------------------


def test_eigenspace_examples():
    q = eigenspace(np.diag([1, 1, 0]), 1.0)
    assert q.shape == (3, 2)
    assert np.allclose(q @ q.conj().T, np.diag([1, 1, 0]))
    assert eigenspace(np.diag([1, 0]), 0.5).shape == (2, 0)
    a = np.array([[0, 0], [1, 0]])
    q = eigenspace(a.conj().T @ a, 1.0)
    assert q.shape == (2, 1) and abs(abs(q[0, 0]) - 1) < 1e-14


def test_intersection_examples():
    e = np.eye(3)
    got = subspace_intersection([e[:, :2], e[:, 1:]])
    assert got.shape == (3, 1) and abs(abs(got[1, 0]) - 1) < 1e-12
    assert subspace_intersection([e[:, :1], e[:, 1:2]]).shape == (3, 0)


def test_intersection_errors_and_empty_input():
    with pytest.raises(DimensionMismatch):
        subspace_intersection([np.eye(3)[:, :1], np.eye(2)])
    assert subspace_intersection([np.eye(3), np.zeros((3, 0))]).shape == (3, 0)


def _rank_oracle(u, w):
    return u.shape[1] + w.shape[1] - np.linalg.matrix_rank(np.hstack([u, w]), tol=1e-8)


@settings(max_examples=40, deadline=None)
@given(d=st.integers(2, 6), seed=st.integers(0, 2**32 - 1), data=st.data())
def test_intersection_matches_rank_oracle(d, seed, data):
    rng = np.random.default_rng(seed)
    k = data.draw(st.integers(0, d - 1))
    r1 = data.draw(st.integers(max(k, 1), d))
    r2 = data.draw(st.integers(max(k, 1), d))
    common = random_unitary(d, rng)[:, :k]
    u = np.linalg.qr(np.hstack([common, random_complex((d, r1 - k), rng)]))[0]
    w = np.linalg.qr(np.hstack([common, random_complex((d, r2 - k), rng)]))[0]
    got = subspace_intersection([u, w])
    assert got.shape[1] == _rank_oracle(u, w)
    for x in got.T:
        assert np.linalg.norm(x - u @ (u.conj().T @ x)) < 1e-8
        assert np.linalg.norm(x - w @ (w.conj().T @ x)) < 1e-8


def test_random_three_dim_subspaces_of_c4():
    rng = np.random.default_rng(9)
    for _ in range(20):
        u = np.linalg.qr(random_complex((4, 3), rng))[0]
        w = np.linalg.qr(random_complex((4, 3), rng))[0]
        assert subspace_intersection([u, w]).shape[1] == _rank_oracle(u, w) == 2


# --- misc ------------------------------------------------------------------


def test_as_matrix_validation():
    assert as_matrix([1, 2]).shape == (2, 1)
    with pytest.raises(ValueError):
        as_matrix([[np.nan]])
    with pytest.raises(DimensionMismatch):
        as_matrix(np.zeros((0, 2)))


def test_tolerance_config_validation_and_seeding():
    with pytest.raises(ValueError):
        ToleranceConfig(abs_tol=0)
    a = DEFAULT_CFG.rng(1).standard_normal(3)
    b = DEFAULT_CFG.rng(1).standard_normal(3)
    c = DEFAULT_CFG.rng(2).standard_normal(3)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_random_unitary_is_unitary():
    u = random_unitary(5, np.random.default_rng(0))
    assert np.allclose(u.conj().T @ u, np.eye(5), atol=1e-13)
