import numpy as np
import pytest

from orthokit.column_orth import check_column_orthonormal
from orthokit.core_linalg import random_complex, random_unitary
from orthokit.errors import PreconditionViolated, ShapeMismatch
from orthokit.generators import canonical_pair, partial_isometry_pair
from orthokit.pythagoras import defect_profile
from orthokit.range_orth import (
    check_isometry_identity,
    check_range_orthogonal,
    majorization_test,
    metric_inequality_test,
    pythagoras_via_state,
)
from orthokit.verdict import Reason, Status

A1, B1 = canonical_pair()
E = np.eye(2)


def _orth_range_pair(rng, n=4):
    """A and B with orthogonal ranges: B = U (I - P) G, A = U P H."""
    u = random_unitary(n, rng)
    k = int(rng.integers(1, n))
    p = np.diag([1.0] * k + [0.0] * (n - k))
    return u @ p @ random_complex((n, n), rng), u @ (np.eye(n) - p) @ random_complex((n, n), rng)


def test_range_orthogonal_examples():
    assert check_range_orthogonal(np.diag([1, 0]), np.diag([0, 1]))
    assert check_range_orthogonal(A1, B1)
    assert not check_range_orthogonal(np.eye(2), np.eye(2))
    with pytest.raises(ShapeMismatch):
        check_range_orthogonal(np.eye(2), np.eye(3))


# --- metric inequality -----------------------------------------------------


def test_metric_inequality_holds_for_diagonal_pair():
    r = metric_inequality_test(np.diag([1, 0]), np.diag([0, 1]))
    assert r.all_hold and r.worst_slack >= -1e-10


def test_metric_inequality_canonical_pair():
    r = metric_inequality_test(A1, B1, trials=1000)
    assert r.all_hold and r.worst_slack >= -1e-10


def test_metric_inequality_violation_witness():
    a = np.diag([1, 0])
    r = metric_inequality_test(a, a)
    assert not r.all_hold and r.witness is not None
    x, y = r.witness
    assert np.linalg.norm(a @ x + a @ y, 2) < np.linalg.norm(a @ x, 2) - 1e-9


def test_metric_forward_soundness():
    rng = np.random.default_rng(0)
    for _ in range(10):
        a, b = _orth_range_pair(rng)
        assert np.linalg.norm(a.conj().T @ b, 2) <= 1e-12 * np.linalg.norm(a, 2) * np.linalg.norm(b, 2) + 1e-12
        assert metric_inequality_test(a, b).worst_slack >= -1e-10


def test_metric_converse_finds_witness_for_overlapping_ranges():
    rng = np.random.default_rng(1)
    for _ in range(10):
        a, b = random_complex((3, 3), rng), random_complex((3, 3), rng)
        assert not metric_inequality_test(a, b).all_hold


# --- majorization ----------------------------------------------------------


def test_majorization_holds():
    r = majorization_test(np.eye(2), np.diag([1, 0]))
    assert r.verdict and r.witness is None and r.gap <= 1e-10


def test_majorization_diagonal_witness():
    r = majorization_test(np.diag([1, 0]), np.diag([0, 1]))
    assert not r.verdict
    x = r.witness
    assert np.allclose(x, np.diag([0, r.t]))
    assert r.gap == pytest.approx(r.t) and r.gap > 0.5 - 1e-12


def test_majorization_zero_a():
    b = np.array([[0, 1], [1, 1]])
    r = majorization_test(np.zeros((2, 2)), b)
    assert not r.verdict and r.gap > 0
    assert np.linalg.norm(b @ r.witness, 2) > 0


def test_majorization_converse_witnesses():
    rng = np.random.default_rng(2)
    found = 0
    while found < 100:
        a, b = random_complex((3, 3), rng), random_complex((3, 3), rng)
        if np.linalg.eigvalsh(a.conj().T @ a - b.conj().T @ b)[0] >= -1e-3:
            continue
        r = majorization_test(a, b)
        assert not r.verdict and r.gap > 1e-6
        x = r.witness
        assert np.linalg.eigvalsh(x)[0] >= -1e-10
        found += 1


def test_majorization_order_holds_on_random_trials():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a = random_complex((3, 3), rng)
        k = random_complex((3, 3), rng)
        k /= 1.01 * np.linalg.norm(k, 2)
        r = majorization_test(a, k @ a)
        assert r.verdict and r.gap <= 1e-10


# --- isometry identity -----------------------------------------------------


def test_isometry_canonical_pair():
    p = np.diag([1, 0])
    r = check_isometry_identity([A1, B1], [p, p])
    assert r.algebraic and r.consistent


def test_isometry_violating_family():
    p = np.diag([1, 0])
    r = check_isometry_identity([np.diag([1, 0]), np.diag([0, 1])], [p, p])
    assert not r.algebraic and not r.consistent


def test_isometry_single_unitary():
    u = random_unitary(3, np.random.default_rng(4))
    r = check_isometry_identity([u], [np.eye(3)])
    assert r.algebraic and r.consistent


def test_isometry_flags_agree_on_generated_families():
    rng = np.random.default_rng(5)
    for i in range(100):
        n = 2 * int(rng.integers(1, 3))
        a, b = partial_isometry_pair(n, seed=int(rng.integers(1 << 30)))
        p = a.conj().T @ a
        if i % 2:
            # break one algebraic condition
            b = b + 0.3 * random_complex((n, n), rng)
        r = check_isometry_identity([a, b], [p, p])
        assert r.algebraic == r.consistent == (i % 2 == 0)


def test_isometry_shape_errors():
    with pytest.raises(ShapeMismatch):
        check_isometry_identity([E], [])
    with pytest.raises(ShapeMismatch):
        check_isometry_identity([E], [np.eye(3)])


# --- via state -------------------------------------------------------------


def test_via_state_examples():
    v = pythagoras_via_state(A1, B1)
    assert v.status == Status.CERTIFIED_ORTHOGONAL and np.allclose(np.abs(v.witness), [1, 0])
    v = pythagoras_via_state(np.diag([1, 0]), np.diag([0, 1]))
    assert v.status == Status.CERTIFIED_NOT_ORTHOGONAL and v.reason == Reason.NO_COMMON_NORMING_STATE
    assert v.details["defect_at_witness"] == pytest.approx(1)
    e12 = np.array([[0, 1], [0, 0]])
    assert pythagoras_via_state(e12, e12.T).status == Status.CERTIFIED_NOT_ORTHOGONAL


def test_via_state_precondition():
    with pytest.raises(PreconditionViolated):
        pythagoras_via_state(np.eye(2), np.eye(2))


def test_via_state_cross_validation():
    rng = np.random.default_rng(6)
    certified = 0
    for i in range(30):
        n = 4
        if i % 2:
            a, b = partial_isometry_pair(n, seed=i)
        else:
            a, b = _orth_range_pair(rng, n)
        v = pythagoras_via_state(a, b)
        a1, b1 = a / np.linalg.norm(a, 2), b / np.linalg.norm(b, 2)
        if v.status == Status.CERTIFIED_ORTHOGONAL:
            certified += 1
            assert defect_profile(a1, b1).max_abs_defect <= 1e-8
            assert check_column_orthonormal([a1, b1]).verdict.status == Status.CERTIFIED_ORTHOGONAL
        else:
            assert v.details["defect_at_witness"] > 1e-8
    assert certified >= 15
