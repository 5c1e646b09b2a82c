"""Column orthonormal families.

A family of unit-norm C_j is column orthonormal when
||sum_j alpha_j (x) C_j||^2 = ||sum_j alpha_j* alpha_j|| for all square
coefficient matrices alpha_j.  In finite dimension this holds iff
||sum C_j C_j*|| <= 1 and the unit eigenspaces of the C_j*C_j share a vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
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
    random_complex,
    spectral_norms,
    subspace_intersection,
)
from .errors import EmptyFamily, ShapeMismatch
from .verdict import OrthoVerdict, Reason, Status, certified, refuted


@dataclass
class ColumnFamily:
    members: list[np.ndarray]
    cfg: ToleranceConfig = DEFAULT_CFG
    scales: list[float] = field(default_factory=list)

    @classmethod
    def from_members(cls, members: Sequence, cfg: ToleranceConfig = DEFAULT_CFG, row: bool = False):
        """Validate shapes and scale nonzero members to unit norm.

        With ``row=True`` the adjoints are used, which turns row
        orthonormality into column orthonormality.
        """
        mats = [as_matrix(m, name=f"C{j}") for j, m in enumerate(members)]
        if not mats:
            raise EmptyFamily("family has no members")
        if row:
            mats = [m.conj().T for m in mats]
        shape = mats[0].shape
        for j, m in enumerate(mats):
            if m.shape != shape:
                raise ShapeMismatch(f"member {j} has shape {m.shape}, expected {shape}")
        scales = [operator_norm(m, cfg) for m in mats]
        unit = [m / s if s > 0 else m for m, s in zip(mats, scales)]
        return cls(unit, cfg, scales)

    @property
    def has_zero(self) -> bool:
        return any(s == 0 for s in self.scales)


@dataclass
class ColumnReport:
    row_norm: float
    norming_intersection_dim: int
    verdict: OrthoVerdict
    identity_max_rel_err: float | None = None
    eigen_gaps: list[float] = field(default_factory=list)
    norming_vector: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "row_norm": self.row_norm,
            "norming_intersection_dim": self.norming_intersection_dim,
            "verdict": self.verdict.to_dict(),
            "identity_max_rel_err": self.identity_max_rel_err,
            "eigen_gaps": self.eigen_gaps,
            "norming_vector": self.norming_vector,
        }


def _as_family(f, cfg: ToleranceConfig) -> ColumnFamily:
    return f if isinstance(f, ColumnFamily) else ColumnFamily.from_members(f, cfg)


def check_column_orthonormal(f, trials: int = 0, cfg: ToleranceConfig | None = None) -> ColumnReport:
    """Exact finite-dimensional decision.

    ``eigen_gaps[j]`` is the distance from 1 to the next eigenvalue of
    C_j*C_j below the unit window; small gaps flag verdicts that may flip
    with the tolerance.  With ``trials > 0`` the coefficient identity is also
    sampled at n = 1, 2, 3 and the worst relative error is reported.
    """
    cfg = cfg or (f.cfg if isinstance(f, ColumnFamily) else DEFAULT_CFG)
    fam = _as_family(f, cfg)
    if fam.has_zero:
        return ColumnReport(0.0, 0, certified(Reason.TRIVIAL_ZERO_MEMBER, None))
    mats = fam.members
    row_sum = hermitize(sum(m @ m.conj().T for m in mats))
    row_norm = operator_norm(row_sum, cfg)
    spaces, gaps = [], []
    for m in mats:
        gram = hermitize(m.conj().T @ m)
        w = hermitian_eig(gram, cfg).eigenvalues
        spaces.append(eigenspace(gram, 1.0, cfg.rel_tol, cfg))
        below = w[w < 1 - cfg.rel_tol]
        gaps.append(float(1 - below[-1]) if below.size else 1.0)
    common = subspace_intersection(spaces, cfg=cfg)
    dim = common.shape[1]
    xi = common[:, 0] if dim else None

    if row_norm > 1 + cfg.rel_tol:
        verdict = refuted(Reason.ROW_NORM_EXCEEDS_ONE, {"condition": "||sum C_j C_j*|| <= 1", "row_norm": row_norm})
    elif dim == 0:
        verdict = refuted(Reason.NO_COMMON_NORMING_VECTOR, {"condition": "common unit vector norming every C_j"})
    else:
        verdict = certified(Reason.COLUMN_COMMON_NORMING, xi, intersection_dim=dim)
    err = None
    if trials > 0:
        err = max(coefficient_identity_test(fam, n, trials, cfg) for n in (1, 2, 3))
    return ColumnReport(row_norm, dim, verdict, err, gaps, xi)


def coefficient_identity_test(f, n: int, trials: int, cfg: ToleranceConfig = DEFAULT_CFG) -> float:
    """Worst relative error of ||sum alpha_j (x) C_j||^2 = ||sum alpha_j* alpha_j||
    over seeded random complex n x n coefficients.

    Trial ``i`` uses a single nonzero coefficient when ``i mod (m+1) < m``
    (member i mod (m+1)) and all coefficients otherwise; trial m sets every
    coefficient to the identity.  Norms are LAPACK
    singular values, independent of the Jacobi route of the exact decision.
    """
    if n not in (1, 2, 3):
        raise ValueError("n must be 1, 2 or 3")
    if trials < 1:
        raise ValueError("trials must be positive")
    fam = _as_family(f, cfg)
    mats = fam.members
    m = len(mats)
    rng = cfg.rng(41 + n)
    alphas = random_complex((trials, m, n, n), rng)
    sel = np.arange(trials) % (m + 1)
    single = sel < m
    mask = np.ones((trials, m))
    mask[single] = 0
    mask[np.flatnonzero(single), sel[single]] = 1
    alphas = alphas * mask[:, :, None, None]
    if trials > m:
        alphas[m] = np.eye(n)  # every coefficient the identity
    r, c = mats[0].shape
    big = np.zeros((trials, n * r, n * c), dtype=complex)
    for j, cj in enumerate(mats):
        # kron(alpha, C) for every trial at once
        big += np.einsum("tab,rc->tarbc", alphas[:, j], cj).reshape(trials, n * r, n * c)
    lhs = spectral_norms(big) ** 2
    rhs = spectral_norms(np.einsum("tjba,tjbc->tac", alphas.conj(), alphas))
    return float(np.max(np.abs(lhs - rhs) / rhs))


def coefficient_identity_error(f, alphas: Sequence, cfg: ToleranceConfig = DEFAULT_CFG) -> float:
    """Relative error of the identity for one explicit choice of coefficients."""
    fam = _as_family(f, cfg)
    al = [np.atleast_2d(np.asarray(a, dtype=complex)) for a in alphas]
    if len(al) != len(fam.members):
        raise ShapeMismatch("one coefficient per member required")
    big = sum(np.kron(a, c) for a, c in zip(al, fam.members))
    lhs = spectral_norms(big[None])[0] ** 2
    rhs = spectral_norms(sum(a.conj().T @ a for a in al)[None])[0]
    return float(abs(lhs - rhs) / rhs)


def gram_at_state(f, xi, cfg: ToleranceConfig = DEFAULT_CFG) -> np.ndarray:
    """G[k, j] = <C_j xi, C_k xi> for a unit vector xi."""
    fam = _as_family(f, cfg)
    xi = np.asarray(xi, dtype=complex).ravel()
    nrm = np.linalg.norm(xi)
    if abs(nrm - 1) > cfg.rel_tol:
        raise ValueError("xi must be a unit vector")
    cols = np.column_stack([c @ xi for c in fam.members])
    return cols.conj().T @ cols


def column_verdict(f, cfg: ToleranceConfig = DEFAULT_CFG) -> Status:
    return check_column_orthonormal(f, cfg=cfg).verdict.status
