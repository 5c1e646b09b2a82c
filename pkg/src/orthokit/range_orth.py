"""Metric characterizations of range orthogonality (A*B = 0).

Randomized trials evaluate norms through :func:`core_linalg.spectral_norms`
in batches; the algebraic side (eigenspaces, positive parts) goes through
the Jacobi solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core_linalg import (
    DEFAULT_CFG,
    ToleranceConfig,
    as_matrix,
    eigenspace,
    hermitian_eig,
    hermitize,
    operator_norm,
    positive_part,
    random_complex,
    spectral_norms,
    subspace_intersection,
)
from .errors import PreconditionViolated, ShapeMismatch, WitnessNotFound, ZeroOperator
from .verdict import OrthoVerdict, Reason, certified, refuted


def check_range_orthogonal(a, b, cfg: ToleranceConfig = DEFAULT_CFG) -> bool:
    """True iff ||A*B|| <= rel_tol * ||A|| ||B||."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[0] != b.shape[0]:
        raise ShapeMismatch(f"A*B undefined for shapes {a.shape}, {b.shape}")
    prod = a.conj().T @ b
    if not prod.any():
        return True
    return operator_norm(prod, cfg) <= cfg.rel_tol * operator_norm(a, cfg) * operator_norm(b, cfg)


@dataclass
class MetricInequalityResult:
    all_hold: bool
    worst_slack: float
    witness: tuple[np.ndarray, np.ndarray] | None


def _unit(stack: np.ndarray) -> np.ndarray:
    n = spectral_norms(stack)
    return stack / n[:, None, None]


def metric_inequality_test(
    a, b, trials: int = 1000, cfg: ToleranceConfig = DEFAULT_CFG
) -> MetricInequalityResult:
    """Sample ||AX + BY|| - ||AX|| over random X, Y.

    X and Y are complex Gaussian, normalized to unit norm, and Y is then
    rescaled by a log-uniform factor in [1e-2, 10] (the inequality is only
    jointly homogeneous).  The deterministic probes Y = w X for w in
    {1, -1, i, -i} are tried first.  A slack below ``-abs_tol`` is a witness
    that A*B != 0.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[0] != b.shape[0]:
        raise ShapeMismatch(f"AX + BY undefined for shapes {a.shape}, {b.shape}")
    k = a.shape[1]
    rng = cfg.rng(11)
    x = _unit(random_complex((trials, a.shape[1], k), rng))
    y = _unit(random_complex((trials, b.shape[1], k), rng))
    y *= 10.0 ** rng.uniform(-2, 1, size=trials)[:, None, None]
    if a.shape[1] == b.shape[1]:
        eye = np.eye(k, dtype=complex)
        probes = np.array([w * eye for w in (1, -1, 1j, -1j)])
        x = np.concatenate([np.repeat(eye[None], 4, axis=0), x])
        y = np.concatenate([probes, y])
    ax = a @ x
    slack = spectral_norms(ax + b @ y) - spectral_norms(ax)
    i = int(np.argmin(slack))
    worst = float(slack[i])
    ok = worst >= -cfg.abs_tol
    return MetricInequalityResult(ok, worst, None if ok else (x[i], y[i]))


@dataclass
class MajorizationResult:
    verdict: bool  # True iff B*B <= A*A
    witness: np.ndarray | None
    gap: float  # ||BX|| - ||AX|| at the witness, or worst observed gap over trials
    t: float | None = None
    min_eig: float = 0.0


def _gap(a: np.ndarray, b: np.ndarray, x: np.ndarray, cfg: ToleranceConfig) -> float:
    return operator_norm(b @ x, cfg) - operator_norm(a @ x, cfg)


def majorization_test(a, b, trials: int = 1000, cfg: ToleranceConfig = DEFAULT_CFG) -> MajorizationResult:
    """Decide B*B <= A*A and produce the positive-part witness when it fails.

    When the order fails, X = (t B*B - A*A)_+ is formed for t = 0.1, ..., 0.9
    and the candidate with the largest gap ||BX|| - ||AX|| is returned; if
    every coarse positive part vanishes, t is pushed toward 1 by halving
    1 - t.  When the order holds, random positive X confirm
    ||BX|| <= ||AX|| + abs_tol.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[1]:
        raise ShapeMismatch(f"A*A and B*B differ in size: {a.shape}, {b.shape}")
    pa = hermitize(a.conj().T @ a)
    pb = hermitize(b.conj().T @ b)
    scale = max(operator_norm(pa, cfg), operator_norm(pb, cfg), cfg.abs_tol)
    min_eig = float(hermitian_eig(pa - pb, cfg).eigenvalues[0])
    if min_eig >= -cfg.rel_tol * scale:
        rng = cfg.rng(12)
        g = random_complex((trials, a.shape[1], a.shape[1]), rng)
        x = g @ np.conj(np.swapaxes(g, 1, 2))
        x = x / spectral_norms(x)[:, None, None]
        gaps = spectral_norms(b @ x) - spectral_norms(a @ x)
        return MajorizationResult(True, None, float(np.max(gaps)), min_eig=min_eig)

    best: tuple[float, np.ndarray, float] | None = None
    for t in np.round(np.arange(1, 10) / 10, 1):
        x = positive_part(t * pb - pa, cfg)
        if not x.any() or operator_norm(x, cfg) <= cfg.abs_tol:
            continue
        gap = _gap(a, b, x, cfg)
        if best is None or gap > best[0]:
            best = (gap, x, float(t))
    if best is None:
        t = 0.9
        for _ in range(60):
            t = 1 - (1 - t) / 2
            x = positive_part(t * pb - pa, cfg)
            if operator_norm(x, cfg) > cfg.abs_tol:
                best = (_gap(a, b, x, cfg), x, t)
                break
    if best is None or best[0] <= cfg.abs_tol:
        raise WitnessNotFound(f"B*B is not <= A*A (min eig {min_eig:.3e}) but no witness beats tolerance")
    gap, x, t = best
    return MajorizationResult(False, x, gap, t, min_eig=min_eig)


@dataclass
class IsometryIdentityResult:
    consistent: bool
    algebraic: bool
    max_rel_err: float
    algebraic_residual: float


def check_isometry_identity(
    members: Sequence, targets: Sequence, trials: int = 100, cfg: ToleranceConfig = DEFAULT_CFG
) -> IsometryIdentityResult:
    """Compare the algebraic conditions (A_j*A_j = P_j, A_k*A_j = 0) with the
    identity ||sum A_j X_j||^2 = ||sum X_j* P_j X_j|| on random X_j.

    Trial ``i`` activates only member ``i mod (m + 1)`` when that index is a
    member, and all members otherwise.
    """
    mem = [as_matrix(m) for m in members]
    tgt = [as_matrix(p) for p in targets]
    if len(mem) != len(tgt) or not mem:
        raise ShapeMismatch("members and targets must be nonempty and of equal count")
    rows = mem[0].shape[0]
    for aj, pj in zip(mem, tgt):
        if aj.shape[0] != rows or pj.shape != (aj.shape[1], aj.shape[1]):
            raise ShapeMismatch("incompatible member/target shapes")

    resid = 0.0
    for j, aj in enumerate(mem):
        pj = tgt[j]
        resid = max(resid, operator_norm(aj.conj().T @ aj - pj, cfg) / max(1.0, operator_norm(pj, cfg)))
        for k in range(j):
            resid = max(resid, operator_norm(mem[k].conj().T @ aj, cfg))
    algebraic = resid <= cfg.rel_tol

    rng = cfg.rng(13)
    m = len(mem)
    k = mem[0].shape[1]
    xs = [random_complex((trials, aj.shape[1], k), rng) for aj in mem]
    mask = np.ones((trials, m))
    for i in range(trials):
        sel = i % (m + 1)
        if sel < m:
            mask[i] = 0
            mask[i, sel] = 1
    lhs_mat = sum(mask[:, j, None, None] * (mem[j] @ xs[j]) for j in range(m))
    rhs_mat = sum(
        mask[:, j, None, None] * (np.conj(np.swapaxes(xs[j], 1, 2)) @ tgt[j] @ xs[j]) for j in range(m)
    )
    lhs = spectral_norms(lhs_mat) ** 2
    rhs = spectral_norms(rhs_mat)
    err = np.abs(lhs - rhs) / np.maximum(np.maximum(lhs, rhs), 1e-300)
    max_err = float(np.max(err))
    return IsometryIdentityResult(max_err <= cfg.rel_tol, algebraic, max_err, resid)


def pythagoras_via_state(a, b, cfg: ToleranceConfig = DEFAULT_CFG) -> OrthoVerdict:
    """Exact verdict for a range-orthogonal pair.

    A common norming state exists in finite dimension iff the top eigenspaces
    of A*A and B*B intersect.  When they do not, lambda = 1 is a witness:
    the defect there equals 2 - ||A*A + B*B|| > 0 after normalization.
    """
    a, b = as_matrix(a), as_matrix(b)
    if not check_range_orthogonal(a, b, cfg):
        raise PreconditionViolated("A*B != 0")
    na, nb = operator_norm(a, cfg), operator_norm(b, cfg)
    if na == 0 or nb == 0:
        raise ZeroOperator("pythagoras_via_state needs nonzero operators")
    p = hermitize(a.conj().T @ a) / na**2
    q = hermitize(b.conj().T @ b) / nb**2
    top_p = eigenspace(p, 1.0, cfg.rel_tol, cfg)
    top_q = eigenspace(q, 1.0, cfg.rel_tol, cfg)
    common = subspace_intersection([top_p, top_q], cfg=cfg)
    if common.shape[1]:
        return certified(Reason.RANGE_ORTHOGONAL_COMMON_NORM, common[:, 0], intersection_dim=common.shape[1])
    return refuted(
        Reason.NO_COMMON_NORMING_STATE,
        1 + 0j,
        defect_at_witness=2.0 - operator_norm(p + q, cfg),
    )

