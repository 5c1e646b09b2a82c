import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orthokit.core_linalg import polar_unitary, random_complex, random_unitary
from orthokit.errors import NotFound, ShapeMismatch, ZeroOperator
from orthokit.generators import canonical_pair, family_square3x3, family_rank1_partner
from orthokit.pythagoras import (
    DEFAULT_GRID,
    GridSpec,
    check_pythagoras,
    criterion_matrix,
    defect_profile,
    det_identity_test,
    find_common_kernel,
    normalize_pair,
    norming_orthogonality_test,
    reduce_to_positive,
    selfadjoint_obstruction,
)
from orthokit.verdict import Reason, Status

CO, CNO, CAT = Status.CERTIFIED_ORTHOGONAL, Status.CERTIFIED_NOT_ORTHOGONAL, Status.CONSISTENT_AT_TOLERANCE
A1, B1 = canonical_pair()


# --- grid ------------------------------------------------------------------


def test_default_grid_size_and_extras():
    pts = DEFAULT_GRID.points()
    assert pts.size == 32 * 64 + 5 >= 2048
    for z in (0, 1, -1, 1j, -1j):
        assert np.any(np.abs(pts - z) == 0)
    assert np.isclose(np.abs(pts[:64]).max(), 1e-3) and np.isclose(np.abs(pts).max(), 10)


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(radii=(1.0, 0.5))
    with pytest.raises(ValueError):
        GridSpec(radii=(-1.0,))


# --- normalize / reduce ----------------------------------------------------


def test_normalize_pair_scales():
    a, b, sa, sb = normalize_pair(2 * A1, 3 * B1)
    assert np.allclose(a, A1) and np.allclose(b, B1) and (sa, sb) == pytest.approx((2, 3))
    a, b, sa, sb = normalize_pair(np.array([[0, 0], [5, 0]]), B1)
    assert np.allclose(a, A1) and sa == pytest.approx(5)


def test_normalize_pair_errors():
    with pytest.raises(ZeroOperator):
        normalize_pair(np.zeros((2, 2)), B1)
    with pytest.raises(ShapeMismatch):
        normalize_pair(np.eye(2), np.eye(3))


def test_reduce_to_positive_cases():
    a, p = reduce_to_positive(A1, B1)
    assert np.allclose(a, A1) and np.allclose(p, B1)
    u = random_unitary(3, np.random.default_rng(0))
    a0 = random_complex((3, 3), np.random.default_rng(1))
    a, p = reduce_to_positive(a0, u)
    assert np.allclose(p, np.eye(3), atol=1e-12) and np.allclose(a, u.conj().T @ a0, atol=1e-12)


def test_reduction_preserves_defect_profile():
    # second matrix of the canonical pair in the role of B, first in the role of A
    a, b = B1, A1
    a2, p = reduce_to_positive(a, b)
    assert np.min(np.linalg.eigvalsh(p)) >= -1e-14
    d1 = defect_profile(a, b).defects
    d2 = defect_profile(a2, p).defects
    assert np.max(np.abs(d1 - d2)) <= 1e-10


# --- criterion matrix ------------------------------------------------------


def test_criterion_matrix_examples():
    m, mn = criterion_matrix(A1, B1, 0)
    assert np.allclose(m, np.diag([0, 1])) and mn == pytest.approx(0, abs=1e-14)
    m, mn = criterion_matrix(np.ones((1, 1)), np.ones((1, 1)), 1)
    assert np.allclose(m, [[-2]]) and mn == pytest.approx(-2)


def q27(b, al, be, lam):
    return (1 - b**2) * abs(lam) ** 2 - 2 * (np.conj(al) * b * lam).real + 1 - abs(al) ** 2 - abs(be) ** 2


def test_criterion_matrix_eigenvalues_of_3x3_family():
    b, al, be = 0.5, 0.5 * np.exp(0.7j), 0.6
    a, bm = family_square3x3(b, al, be)
    for lam in [0.3 + 0.1j, -2, 1j, 5 - 5j]:
        m, _ = criterion_matrix(a, bm, lam)
        want = np.sort([0, 1 + abs(lam) ** 2, q27(b, al, be, lam)])
        assert np.allclose(np.linalg.eigvalsh(m), want, atol=1e-12)


def test_criterion_matrix_agrees_with_defect():
    """Defect vanishes exactly where the criterion matrix is positive and singular."""
    for a, b in [(A1, B1), family_square3x3(0.5, 0.8, 0.6, strict=False), (np.eye(2), np.eye(2))]:
        a = a / np.linalg.norm(a, 2)
        b = b / np.linalg.norm(b, 2)
        prof = defect_profile(a, b, GridSpec.sized(6, 8))
        for lam, d in zip(prof.lambdas, prof.defects):
            w = np.linalg.eigvalsh(criterion_matrix(a, b, lam)[0])
            zero_defect = abs(d) <= 1e-9 * (1 + abs(lam) ** 2)
            psd_singular = abs(w[0]) <= 1e-9 * (1 + abs(lam) ** 2) and w[0] >= -1e-9 * (1 + abs(lam) ** 2)
            assert zero_defect == psd_singular
            assert w[0] == pytest.approx(d, abs=1e-9 * (1 + abs(lam) ** 2))


# --- defect profile --------------------------------------------------------


def test_defect_profile_examples():
    assert defect_profile(A1, B1).max_abs_defect <= 1e-12
    prof = defect_profile(np.eye(2), np.eye(2), GridSpec(radii=(1.0,), angles_per_radius=1, extra_points=()))
    assert prof.defects[0] == pytest.approx(-2)
    bad = defect_profile(*family_square3x3(0.5, 0.8, 0.6, strict=False))
    assert bad.min_defect < 0 and bad.violations().size > 0


def test_defect_profile_csv():
    text = defect_profile(A1, B1, GridSpec.sized(2, 3)).to_csv().splitlines()
    assert text[0] == "re_lambda,im_lambda,defect"
    assert len(text) == 1 + 2 * 3 + 5
    assert float(text[1].split(",")[0]) == pytest.approx(1e-3)


def test_canonical_defect_zero_at_one_plus_i():
    prof = defect_profile(A1, B1, GridSpec(radii=(1.0,), angles_per_radius=1, extra_points=(1 + 1j,)))
    assert np.all(np.abs(prof.defects) <= 1e-14)


# --- determinant identity --------------------------------------------------


def test_det_examples():
    t = det_identity_test(A1, B1)
    assert t.holds and np.allclose(t.coefficients, 0)
    t = det_identity_test(np.eye(2), np.eye(2))
    assert not t.holds and np.allclose(t.coefficients, [1, 2, 1])
    assert det_identity_test(*family_square3x3(0.5, 0.5, 0.6)).holds


def _cofactor_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _cofactor_det([row[:j] + row[j + 1 :] for row in m[1:]]) for j in range(n))


def _poly_coeffs_by_cofactors(a, b):
    """Coefficients of det(A + lam B) by cofactor expansion over integer polynomials."""
    n = len(a)
    m = [[np.polynomial.Polynomial([a[i][j], b[i][j]]) for j in range(n)] for i in range(n)]
    p = _cofactor_det(m)
    c = np.zeros(n + 1)
    c[: len(p.coef)] = p.coef
    return c


def test_det_coefficients_match_cofactors_2x2_exhaustive():
    vals = (-1, 0, 1)
    for entries in itertools.product(vals, repeat=8):
        a = [list(entries[0:2]), list(entries[2:4])]
        b = [list(entries[4:6]), list(entries[6:8])]
        t = det_identity_test(np.array(a), np.array(b))
        want = _poly_coeffs_by_cofactors(a, b)
        assert np.allclose(t.coefficients, want, atol=1e-12)
        assert t.holds == bool(np.all(want == 0))


def test_det_coefficients_match_cofactors_3x3_random():
    rng = np.random.default_rng(7)
    for _ in range(200):
        a = rng.integers(-3, 4, (3, 3)).tolist()
        b = rng.integers(-3, 4, (3, 3)).tolist()
        t = det_identity_test(np.array(a), np.array(b))
        assert np.allclose(t.coefficients, _poly_coeffs_by_cofactors(a, b), atol=1e-9)


def test_det_rejects_non_square():
    with pytest.raises(ShapeMismatch):
        det_identity_test(np.ones((3, 2)), np.ones((3, 2)))


# --- norming and selfadjoint refuters --------------------------------------


def test_norming_test_examples():
    assert norming_orthogonality_test(A1, B1).status == Status.NOT_REFUTED
    v = norming_orthogonality_test(np.diag([1, 0]), np.diag([1, 0]))
    assert v.status == CNO and np.allclose(np.abs(v.witness), [1, 0])
    assert norming_orthogonality_test(*family_square3x3(0.5, 0.5, 0.6)).status == Status.NOT_REFUTED


def test_norming_test_never_fires_on_orthogonal_pairs():
    rng = np.random.default_rng(2)
    for _ in range(20):
        th = rng.uniform(0, 2 * np.pi)
        a, b = family_rank1_partner(1, b1=np.cos(th), b2=np.sin(th), conjugate_seed=int(rng.integers(1 << 20)))
        assert norming_orthogonality_test(a, b).status == Status.NOT_REFUTED


def test_selfadjoint_obstruction_examples():
    assert selfadjoint_obstruction(np.diag([1, -1]), np.diag([1, 0])).status == CNO
    assert selfadjoint_obstruction(A1, B1).status == Status.NOT_APPLICABLE
    v = selfadjoint_obstruction(np.array([[0, 1], [1, 0]]), np.diag([1, 0.5]))
    assert v.status == CNO and v.reason == Reason.SELFADJOINT_POSITIVE
    # both selfadjoint but neither positive
    assert selfadjoint_obstruction(np.diag([1, -1]), np.array([[0, 1], [1, 0]])).status == Status.NOT_APPLICABLE


# --- common kernel ---------------------------------------------------------


def test_common_kernel_examples():
    assert np.allclose(np.abs(find_common_kernel(np.diag([1, 0]), np.diag([1, 0]))), [0, 1])
    assert np.allclose(np.abs(find_common_kernel(np.diag([1, 0, 0]), np.diag([0, 1, 0]))), [0, 0, 1])
    with pytest.raises(NotFound):
        find_common_kernel(np.diag([1, 0]), np.diag([0, 1]))


def test_common_kernel_recovers_planted_vector():
    rng = np.random.default_rng(4)
    for _ in range(10):
        h = random_complex((3, 3), rng)
        a1 = (h + h.conj().T) / 2
        g = random_complex((3, 3), rng)
        b1 = g @ g.conj().T
        a = np.zeros((4, 4), complex)
        b = np.zeros((4, 4), complex)
        a[:3, :3], b[:3, :3] = a1, b1
        s = random_unitary(4, rng)
        xi = find_common_kernel(s.conj().T @ a @ s, s.conj().T @ b @ s)
        target = s.conj().T[:, 3]
        assert abs(abs(np.vdot(target, xi)) - 1) < 1e-8


# --- full pipeline ---------------------------------------------------------


def test_pipeline_canonical_pair():
    v = check_pythagoras(A1, B1)
    assert v.status == CO and v.reason == Reason.RANGE_ORTHOGONAL_COMMON_NORM
    assert v.details["stages"]["rank1"] == CO.value


def test_pipeline_diagonal_pair_refuted_with_witness():
    v = check_pythagoras(np.diag([1, 0]), np.diag([0, 1]))
    assert v.status == CNO and v.witness is not None
    assert not det_identity_test(np.diag([1, 0]), np.diag([0, 1])).holds
    assert abs(v.details["lambda_witness_defect"]) > 1e-6


def test_pipeline_3x3_family_consistent():
    v = check_pythagoras(*family_square3x3(0.5, 0.5, 0.6))
    assert v.status == CAT and v.profile.max_abs_defect <= 1e-8


def test_pipeline_non_square():
    from orthokit.generators import family_rect3x2

    v = check_pythagoras(*family_rect3x2(1, 1, 1, np.pi / 4, np.pi / 4))
    assert v.status == CAT and "determinant" not in v.details["stages"]


def test_pipeline_zero_operator():
    with pytest.raises(ZeroOperator):
        check_pythagoras(np.zeros((2, 2)), B1)


def test_pipeline_determinism():
    a, b = family_square3x3(0.5, 0.8, 0.6, strict=False)
    v1, v2 = check_pythagoras(a, b), check_pythagoras(a, b)
    assert v1.status == v2.status and np.array_equal(np.asarray(v1.witness), np.asarray(v2.witness))


def _recheck_refutation(a, b, v):
    """Independently confirm a refutation: the grid witness, the det witness, or the named algebra."""
    a = a / np.linalg.norm(a, 2)
    b = b / np.linalg.norm(b, 2)
    if v.reason == Reason.DETERMINANT_NOT_ZERO:
        return abs(np.linalg.det(a + v.witness * b)) > 1e-10
    if v.reason == Reason.GRID_DEFECT:
        lam = v.witness
        d = 1 + abs(lam) ** 2 - np.linalg.norm(a + lam * b, 2) ** 2
        return abs(d) > 1e-8 * (1 + abs(lam) ** 2)
    if v.reason == Reason.NORMING_VECTOR_NOT_ORTHOGONAL:
        xi = np.asarray(v.witness)
        ax, bx = a @ xi, b @ xi
        return abs(np.vdot(bx, ax)) ** 2 > (1 - np.linalg.norm(ax) ** 2) * (1 - np.linalg.norm(bx) ** 2) + 1e-9
    if v.reason == Reason.SELFADJOINT_POSITIVE:
        herm = np.allclose(a, a.conj().T) and np.allclose(b, b.conj().T)
        return herm and (np.linalg.eigvalsh(a)[0] >= -1e-9 or np.linalg.eigvalsh(b)[0] >= -1e-9)
    return "lambda_witness" in v.details


@settings(max_examples=25, deadline=None)
@given(n=st.integers(2, 4), seed=st.integers(0, 2**32 - 1))
def test_refutations_are_sound(n, seed):
    rng = np.random.default_rng(seed)
    a, b = random_complex((n, n), rng), random_complex((n, n), rng)
    v = check_pythagoras(a, b, grid=GridSpec.sized(8, 16))
    assert v.status == CNO
    assert _recheck_refutation(a, b, v)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_verdict_invariance_property(seed):
    rng = np.random.default_rng(seed)
    al = rng.uniform(0.2, 1.0)
    a, b = family_rank1_partner(2, a1=np.sqrt(1 - al**2), alpha=al, b2=al)
    u, w = random_unitary(3, rng), random_unitary(3, rng)
    grid = GridSpec.sized(8, 16)
    base = check_pythagoras(a, b, grid=grid).status
    assert base == CO
    for x, y in [(2j * a, 0.5 * b), (u @ a @ w, u @ b @ w), (a.T, b.T), (a.conj().T, b.conj().T)]:
        assert check_pythagoras(x, y, grid=grid).status == base


def test_polar_reduction_used_by_pipeline_is_consistent():
    a, b = family_square3x3(0.5, 0.5, 0.6, conjugate_seed=3)
    u, p = polar_unitary(b)
    assert check_pythagoras(u.conj().T @ a, p).status == check_pythagoras(a, b).status
