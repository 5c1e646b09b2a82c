"""Exit criteria of the toolkit, shared by the test suite and ``orthokit selftest``.

Each criterion returns a :class:`CriterionResult`; ``passed`` includes the
runtime bound.  Seeds are fixed so every run checks the same instances.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .column_orth import check_column_orthonormal, coefficient_identity_test
from .core_linalg import (
    hermitian_eig,
    hermitize,
    random_complex,
    random_unitary,
    subspace_intersection,
)
from .generators import (
    canonical_pair,
    column_canonical,
    family_square3x3,
    family_rect3x2,
    family_rank1_partner,
    partial_isometry_pair,
    random_rect3x2_params,
)
from .normal_pairs import check_normal_pair, random_commuting_normal
from .pythagoras import (
    DEFAULT_GRID,
    check_pythagoras,
    criterion_matrix,
    defect_profile,
    det_identity_test,
)
from .range_orth import (
    check_isometry_identity,
    majorization_test,
    metric_inequality_test,
    pythagoras_via_state,
)
from .rank1 import construct_partner, rank1_certify
from .verdict import Reason, Status

CO = Status.CERTIFIED_ORTHOGONAL
CNO = Status.CERTIFIED_NOT_ORTHOGONAL


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.number:2d} {self.title}: {self.detail} ({self.seconds:.2f}s / {self.limit:g}s)"


def _timed(number: int, title: str, limit: float, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    ok, detail = body()
    dt = time.perf_counter() - t0
    return CriterionResult(number, title, bool(ok) and dt < limit, detail, dt, limit)


def criterion_1() -> CriterionResult:
    def body():
        a, b = canonical_pair()
        prof = defect_profile(a, b)
        v = check_pythagoras(a, b)
        r1 = rank1_certify(a, b)
        ok = (
            prof.lambdas.size >= 2048
            and prof.max_abs_defect <= 1e-10
            and v.status == CO
            and v.reason == Reason.RANGE_ORTHOGONAL_COMMON_NORM
            and r1.status == CO
        )
        return ok, f"{prof.lambdas.size} points, max|d| = {prof.max_abs_defect:.1e}, {v.status.value} / {r1.status.value}"

    return _timed(1, "canonical 2x2 pair", 1.0, body)


def q_square3x3(b: float, alpha: complex, beta: complex, lam: complex) -> float:
    return (
        (1 - b**2) * abs(lam) ** 2
        - 2 * (np.conj(alpha) * b * lam).real
        + 1
        - abs(alpha) ** 2
        - abs(beta) ** 2
    )


def criterion_2() -> CriterionResult:
    def body():
        bb, al, be = 0.5, 0.5, 0.6
        a, b = family_square3x3(bb, al, be)
        det_ok = det_identity_test(a, b).holds
        lams = DEFAULT_GRID.points()[:: max(1, DEFAULT_GRID.points().size // 100)][:100]
        err = 0.0
        for lam in lams:
            m, _ = criterion_matrix(a, b, lam)
            got = hermitian_eig(m).eigenvalues
            want = np.sort([0.0, 1 + abs(lam) ** 2, q_square3x3(bb, al, be, lam)])
            err = max(err, float(np.max(np.abs(got - want))))
        prof = defect_profile(a, b)
        bad = check_pythagoras(*family_square3x3(0.5, 0.8, 0.6, strict=False))
        lam_w = bad.details.get("lambda_witness")
        ok = (
            det_ok
            and lams.size == 100
            and err <= 1e-8
            and prof.max_abs_defect <= 1e-8
            and bad.status == CNO
            and lam_w is not None
        )
        return ok, (
            f"det holds={det_ok}, eig err {err:.1e}, max|d| {prof.max_abs_defect:.1e}, "
            f"violating pair {bad.status.value} at lambda={lam_w}"
        )

    return _timed(2, "3x3 family with parameters (b, alpha, beta)", 5.0, body)


def criterion_3() -> CriterionResult:
    def body():
        rng = np.random.default_rng(2703)
        worst = 0.0
        for _ in range(20):
            a, b = family_rect3x2(**random_rect3x2_params(rng))
            worst = max(worst, defect_profile(a, b).max_abs_defect)
        return worst <= 1e-8, f"20 draws, max|d| = {worst:.1e}"

    return _timed(3, "3x2 family, seeded draws", 10.0, body)


def criterion_4() -> CriterionResult:
    def body():
        rng = np.random.default_rng(32)
        fails = 0
        min_viol = np.inf
        for i in range(100):
            a, b = random_commuting_normal(2 + i % 5, rng)
            v = check_normal_pair(a, b)
            prof = defect_profile(a, b)
            min_viol = min(min_viol, prof.max_abs_defect)
            if v.status != CNO or prof.max_abs_defect <= 1e-6:
                fails += 1
        return fails == 0, f"{100 - fails}/100 refuted and grid-confirmed, min max|d| = {min_viol:.2e}"

    return _timed(4, "commuting normal pairs", 10.0, body)


def criterion_5() -> CriterionResult:
    def body():
        worst = 0.0
        all_yes = True
        for d in range(1, 6):
            for k in range(1, d + 1):
                fam = column_canonical(k, d)
                all_yes &= check_column_orthonormal(fam).verdict.status == CO
                for n in (1, 2, 3):
                    worst = max(worst, coefficient_identity_test(fam, n, 100))
        pair = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
        no = check_column_orthonormal(pair).verdict.status == CNO
        viol = coefficient_identity_test(pair, 1, 100)
        ok = all_yes and worst <= 1e-8 and no and viol >= 0.49
        return ok, f"canonical families certified={all_yes}, max rel err {worst:.1e}; diag pair no={no}, n=1 err {viol:.3f}"

    return _timed(5, "column orthonormal families", 10.0, body)


def criterion_6() -> CriterionResult:
    def body():
        rng = np.random.default_rng(51)
        min_gap = np.inf
        neg = 0
        for i in range(100):
            n = 2 + i % 4
            while True:
                a = random_complex((n, n), rng)
                b = random_complex((n, n), rng)
                # keep only pairs where B*B <= A*A fails (LAPACK oracle)
                if np.linalg.eigvalsh(a.conj().T @ a - b.conj().T @ b)[0] < -1e-3:
                    break
            r = majorization_test(a, b)
            if r.verdict or r.gap <= 1e-6:
                neg += 1
            else:
                min_gap = min(min_gap, r.gap)
        worst_slack = np.inf
        pos = 0
        for i in range(100):
            n = 2 + i % 4
            a = random_complex((n, n), rng)
            k = random_complex((n, n), rng)
            k /= np.linalg.norm(k, 2) * rng.uniform(1.0, 2.0)
            r = majorization_test(a, k @ a, trials=1000)
            if not r.verdict:
                pos += 1
            worst_slack = min(worst_slack, -r.gap)
        ok = neg == 0 and pos == 0 and worst_slack >= -1e-10
        return ok, f"witness gaps >= {min_gap:.2e} (misses {neg}); order-holding slack >= {worst_slack:.2e} (misses {pos})"

    return _timed(6, "positive-part witness", 20.0, body)


def _range_orthogonal_pair(n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    q = random_unitary(n, rng)
    k = int(rng.integers(1, n))
    a = q[:, :k] @ random_complex((k, n), rng)
    b = q[:, k:] @ random_complex((n - k, n), rng)
    return a, b


def criterion_7() -> CriterionResult:
    def body():
        rng = np.random.default_rng(52)
        worst = np.inf
        for i in range(50):
            a, b = _range_orthogonal_pair(2 + i % 4, rng)
            worst = min(worst, metric_inequality_test(a, b, trials=1000).worst_slack)
        a, b = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
        v = pythagoras_via_state(a, b)
        grid = defect_profile(a, b).worst_violation()
        ok = worst >= -1e-10 and v.status == CNO and grid is not None
        return ok, f"worst slack {worst:.1e}; diag pair {v.status.value}, grid witness {grid}"

    return _timed(7, "orthogonal-range inequality", 30.0, body)


def criterion_8() -> CriterionResult:
    def body():
        a, b = partial_isometry_pair(4, seed=8)
        p = hermitize(a.conj().T @ a)
        good = check_isometry_identity([a, b], [p, p], trials=100)
        bad = check_isometry_identity([0.9 * a, b], [p, p], trials=100)
        ok = good.algebraic and good.consistent and not bad.algebraic and not bad.consistent
        return ok, (
            f"family: algebraic={good.algebraic} consistent={good.consistent} (err {good.max_rel_err:.1e}); "
            f"perturbed: algebraic={bad.algebraic} consistent={bad.consistent} (err {bad.max_rel_err:.2f})"
        )

    return _timed(8, "partial-isometry identity", 5.0, body)


def _complement_conjugate(a: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    d = a.shape[0]
    left = np.eye(d, dtype=complex)
    right = np.eye(d, dtype=complex)
    left[1:, 1:] = random_unitary(d - 1, rng)
    right[1:, 1:] = random_unitary(d - 1, rng)
    return left @ a @ right


def rank1_corpus(seed: int = 61, count: int = 200) -> list[np.ndarray]:
    """Operators with vanishing (1,1) entry at d = 3, 4, tested against e1 e1*.

    Half are random; the rest are closed-form orthogonal ones (both solution
    families, transposes, and the constructor) moved by unitaries that fix
    the projection, plus a few with a perturbed entry.
    """
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        d = 3 + i % 2
        kind = i % 8
        if kind < 4:
            a = random_complex((d, d), rng)
            a[0, 0] = 0
        elif kind in (4, 5):
            if rng.uniform() < 0.5:
                th = rng.uniform(0, 2 * np.pi)
                a3 = family_rank1_partner(1, b1=np.cos(th) * np.exp(2j * np.pi * rng.uniform()), b2=np.sin(th), transpose=kind == 5)[0]
            else:
                al = rng.uniform(0.05, 1.0)
                if rng.uniform() < 0.5:
                    b2, a1 = al, np.sqrt(1 - al**2)
                else:
                    b2, a1 = 1.0, 0.0
                a3 = family_rank1_partner(2, a1=a1 * np.exp(2j * np.pi * rng.uniform()), alpha=al, b2=b2, transpose=kind == 5)[0]
            a = np.zeros((d, d), dtype=complex)
            a[:3, :3] = a3
        elif kind == 6:
            m = d - 1
            al = rng.uniform(0.1, 0.9)
            avec = np.zeros(m, dtype=complex)
            avec[0] = np.sqrt(1 - al**2)
            c = np.diag([al] + [0.0] * (m - 1)).astype(complex)
            a = construct_partner(avec, c, np.eye(m))
            if a is None:
                raise RuntimeError("constructor rejected a valid input")
        else:
            a = np.zeros((d, d), dtype=complex)
            a[:3, :3] = family_rank1_partner(2, a1=0.8, alpha=0.6, b2=0.6)[0]
            a[2, 0] += rng.uniform(0.05, 0.3)
        out.append(_complement_conjugate(a, rng))
    return out


def criterion_9() -> CriterionResult:
    def body():
        agree = 0
        n_yes = 0
        total = 0
        for a in rank1_corpus():
            d = a.shape[0]
            b = np.zeros((d, d), dtype=complex)
            b[0, 0] = 1
            v = rank1_certify(a, b)
            prof = defect_profile(a, b)
            total += 1
            if v.status == CO and prof.max_abs_defect <= 1e-8:
                agree += 1
                n_yes += 1
            elif v.status == CNO and prof.max_abs_defect > 1e-6:
                agree += 1
        fams = []
        for tr in (False, True):
            fams.append(family_rank1_partner(1, b1=0.6, b2=0.8, transpose=tr))
            fams.append(family_rank1_partner(2, a1=0.8, alpha=0.6, b2=0.6, transpose=tr))
            fams.append(family_rank1_partner(2, a1=0.0, alpha=0.4, b2=1.0, transpose=tr))
        fam_ok = all(rank1_certify(a, b).status == CO for a, b in fams)
        ok = agree == total == 200 and fam_ok
        return ok, f"{agree}/{total} agree with grid ({n_yes} orthogonal); families and transposes certified={fam_ok}"

    return _timed(9, "rank-one projection equivalence", 60.0, body)


def criterion_10() -> CriterionResult:
    def body():
        rng = np.random.default_rng(10)
        worst_res = worst_orth = 0.0
        for i in range(100):
            n = 1 + (i * 7) % 50
            g = random_complex((n, n), rng)
            m = (g + g.conj().T) / 2
            e = hermitian_eig(m)
            v, w = e.eigenvectors, e.eigenvalues
            scale = max(np.linalg.norm(m, 2), 1e-300)
            worst_res = max(worst_res, np.linalg.norm(m @ v - v * w, 2) / scale)
            worst_orth = max(worst_orth, np.linalg.norm(v.conj().T @ v - np.eye(n), 2))
        mismatches = 0
        for _ in range(100):
            k = int(rng.integers(0, 4))
            r1 = int(rng.integers(k, 6))
            r2 = int(rng.integers(k, 6))
            q = random_unitary(6, rng)
            common = q[:, :k]
            u = np.hstack([common, random_complex((6, r1 - k), rng)]) if r1 > k else common
            w2 = np.hstack([common, random_complex((6, r2 - k), rng)]) if r2 > k else common
            u = u @ random_complex((u.shape[1], u.shape[1]), rng) if u.shape[1] else u
            w2 = w2 @ random_complex((w2.shape[1], w2.shape[1]), rng) if w2.shape[1] else w2
            qu = np.linalg.qr(u)[0] if u.shape[1] else u
            qw = np.linalg.qr(w2)[0] if w2.shape[1] else w2
            got = subspace_intersection([qu, qw])
            oracle = qu.shape[1] + qw.shape[1] - np.linalg.matrix_rank(np.hstack([qu, qw]), tol=1e-8)
            inside = all(
                np.linalg.norm(x - qu @ (qu.conj().T @ x)) < 1e-8 and np.linalg.norm(x - qw @ (qw.conj().T @ x)) < 1e-8
                for x in got.T
            )
            if got.shape[1] != oracle or not inside:
                mismatches += 1
        ok = worst_res <= 1e-9 and worst_orth <= 1e-10 and mismatches == 0
        return ok, f"eig residual {worst_res:.1e}, orthonormality {worst_orth:.1e}, intersection mismatches {mismatches}/100"

    return _timed(10, "core linear algebra accuracy", 30.0, body)


def invariance_corpus(seed: int = 11, count: int = 50) -> list[tuple[np.ndarray, np.ndarray]]:
    rng = np.random.default_rng(seed)
    pairs = []
    for i in range(count):
        kind = i % 5
        if kind == 0:
            n = int(rng.integers(2, 5))
            pairs.append((random_complex((n, n), rng), random_complex((n, n), rng)))
        elif kind == 1:
            pairs.append(canonical_pair(int(rng.integers(1 << 30))))
        elif kind == 2:
            bb = rng.uniform(0.1, 0.9)
            be = rng.uniform(0.1, 0.9)
            bound = (1 - be**2) * (1 - bb**2)
            al = np.sqrt(bound) * rng.uniform(0, 1.5)  # some violate the constraint
            pairs.append(family_square3x3(bb, al, be, strict=False))
        elif kind == 3:
            al = rng.uniform(0.2, 1.0)
            pairs.append(family_rank1_partner(2, a1=np.sqrt(1 - al**2), alpha=al, b2=al, conjugate_seed=int(rng.integers(1 << 30))))
        else:
            pairs.append(partial_isometry_pair(4, int(rng.integers(1 << 30))))
    return pairs


def criterion_11() -> CriterionResult:
    def body():
        rng = np.random.default_rng(111)
        changed = 0
        counts: dict[str, int] = {}
        for a, b in invariance_corpus():
            base = check_pythagoras(a, b).status
            counts[base.value] = counts.get(base.value, 0) + 1
            n, m = a.shape
            u, v = random_unitary(n, rng), random_unitary(m, rng)
            mu, nu = complex(*rng.uniform(0.3, 3, 2)), complex(*rng.uniform(0.3, 3, 2))
            variants = [
                (mu * a, nu * b),
                (u @ a @ v, u @ b @ v),
                (a.T, b.T),
                (a.conj().T, b.conj().T),
            ]
            for x, y in variants:
                if check_pythagoras(x, y).status != base:
                    changed += 1
        return changed == 0, f"{changed} status changes over 200 transformed pairs; base statuses {counts}"

    return _timed(11, "verdict invariance", 30.0, body)


CRITERIA: list[Callable[[], CriterionResult]] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
]


def run_all(echo: Callable[[str], None] | None = print) -> list[CriterionResult]:
    results = []
    for crit in CRITERIA:
        r = crit()
        results.append(r)
        if echo:
            echo(r.line())
    return results
