"""Operators orthogonal to a rank-one projection.

Relative to an orthonormal basis whose first vector spans the range of the
projection B, an orthogonal partner must look like

    A = [[0, a*],
         [b, C ]]

and orthogonality reduces to ||a||^2 + ||b||^2 = 1 plus two families of
moment conditions in T = I - aa* - C*C:

    a* T^n C* b = 0,    b* C T^n C* b = a* T^(n+1) a,    n = 0, 1, ...

Only n below the degree of the minimal polynomial of T matter, so the block
size bounds the depth.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core_linalg import (
    DEFAULT_CFG,
    ToleranceConfig,
    as_matrix,
    hermitian_eig,
    hermitize,
    is_hermitian,
    operator_norm,
    polar_unitary,
    psd_sqrt,
)
from .errors import (
    NormSplitViolated,
    NoSolution,
    NotPSD,
    NotRank1Projection,
    Refuted11Block,
    ShapeMismatch,
    ZeroOperator,
)
from .verdict import OrthoVerdict, Reason, certified, refuted


@dataclass
class Rank1Decomposition:
    a: np.ndarray  # 1-D
    b: np.ndarray  # 1-D
    C: np.ndarray
    T: np.ndarray
    gamma: float | None  # 1 / (1 - ||b||^2), None when ||b|| = 1
    basis: np.ndarray  # unitary; first column spans range(B)
    corner: complex = 0j

    @classmethod
    def from_blocks(cls, a, b, C, basis=None) -> "Rank1Decomposition":
        a = np.asarray(a, dtype=complex).ravel()
        b = np.asarray(b, dtype=complex).ravel()
        C = as_matrix(C)
        m = a.size
        if b.size != m or C.shape != (m, m):
            raise ShapeMismatch("a, b must have length m and C must be m x m")
        T = hermitize(np.eye(m) - np.outer(a, a.conj()) - C.conj().T @ C)
        nb2 = float(np.vdot(b, b).real)
        gamma = 1.0 / (1.0 - nb2) if nb2 < 1.0 else None
        if basis is None:
            basis = np.eye(m + 1, dtype=complex)
        return cls(a, b, C, T, gamma, basis)

    def assemble(self) -> np.ndarray:
        """A in the adapted basis."""
        m = self.a.size
        out = np.zeros((m + 1, m + 1), dtype=complex)
        out[0, 1:] = self.a.conj()
        out[1:, 0] = self.b
        out[1:, 1:] = self.C
        out[0, 0] = self.corner
        return out

    def to_dict(self) -> dict:
        return {"a": self.a.reshape(-1, 1), "b": self.b.reshape(-1, 1), "C": self.C, "T": self.T}


def _projection_basis(b: np.ndarray, cfg: ToleranceConfig) -> np.ndarray:
    n = b.shape[0]
    if b.shape[1] != n or not is_hermitian(b, cfg.rel_tol):
        raise NotRank1Projection("B must be Hermitian")
    scale = max(1.0, float(np.linalg.norm(b)))
    if np.linalg.norm(b @ b - b) > 1e3 * cfg.rel_tol * scale or abs(np.trace(b) - 1) > 1e3 * cfg.rel_tol:
        raise NotRank1Projection("B must be an idempotent of trace one")
    eig = hermitian_eig(b, cfg)
    # range vector first, kernel vectors in solver order
    return np.roll(eig.eigenvectors, 1, axis=1)


def decompose_rank1(a, b, cfg: ToleranceConfig = DEFAULT_CFG) -> Rank1Decomposition:
    """Block data of A relative to range(B) (+) ker(B) for a rank-one projection B.

    Raises :class:`Refuted11Block` when <A e, e> != 0 for the unit vector e
    spanning range(B): such an A cannot be orthogonal to B.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"need square matrices of equal size, got {a.shape}, {b.shape}")
    q = _projection_basis(b, cfg)
    at = q.conj().T @ a @ q
    corner = complex(at[0, 0])
    if abs(corner) > cfg.rel_tol:
        raise Refuted11Block(corner, q[:, 0])
    dec = Rank1Decomposition.from_blocks(at[0, 1:].conj(), at[1:, 0], at[1:, 1:], basis=q)
    dec.corner = corner
    return dec


@dataclass
class Rank1Conditions:
    passed: bool
    residuals: list[float]
    labels: list[str]
    derived: dict[str, float] = field(default_factory=dict)
    tol: float = 0.0

    @property
    def first_failure(self) -> tuple[str, float] | None:
        return next(((lab, r) for lab, r in zip(self.labels, self.residuals) if not r <= self.tol), None)


def _eigen_blocks(c: np.ndarray, cfg: ToleranceConfig) -> list[np.ndarray]:
    """Orthonormal bases of the eigenspaces of a PSD C at its nonzero eigenvalues."""
    eig = hermitian_eig(hermitize(c), cfg)
    cluster = np.sqrt(cfg.rel_tol) * max(1.0, float(np.max(np.abs(eig.eigenvalues))))
    blocks, start = [], 0
    w = eig.eigenvalues
    for i in range(1, w.size + 1):
        if i == w.size or w[i] - w[i - 1] > cluster:
            if w[start:i].mean() > cluster:
                blocks.append(eig.eigenvectors[:, start:i])
            start = i
    return blocks


def rank1_conditions(dec: Rank1Decomposition, cfg: ToleranceConfig = DEFAULT_CFG) -> Rank1Conditions:
    """Evaluate the moment conditions for n = 0 .. m (m = block size).

    Also reports, under ``derived``, the identities that follow from the
    moment conditions once C is Hermitian:

    * ``norm_sq``: ||Ca||^2 + ||Cb||^2 - ||a||^2 ||b||^2
    * ``norm_fourth``: ||C^2 a||^2 + ||C^2 b||^2 - ||a||^2 ||Cb||^2 - ||b||^2 ||Ca||^2
    * ``even_moments``: max_n |<C^(2n) a, C b>|
    * ``eigen_blocks`` (C positive only): max_j |<a_j, b_j>| over the nonzero
      eigenspaces of C

    Raises :class:`NormSplitViolated` when ||a||^2 + ||b||^2 != 1.
    """
    tol = cfg.rel_tol
    a, b, c, t = dec.a, dec.b, dec.C, dec.T
    na2 = float(np.vdot(a, a).real)
    nb2 = float(np.vdot(b, b).real)
    split = na2 + nb2 - 1.0
    if abs(split) > tol:
        raise NormSplitViolated(split)

    m = a.size
    ch_b = c.conj().T @ b
    labels, res = [], []
    if nb2 > 1.0 - tol:
        # ||b|| = 1 forces a = 0 and C*b = 0
        labels += ["a = 0", "C* b = 0"]
        res += [na2, float(np.vdot(ch_b, ch_b).real)]
    tn_a = a.copy()  # T^n a
    tn_cb = ch_b.copy()  # T^n C* b
    for n in range(m + 1):
        labels.append(f"a* T^{n} C* b = 0")
        res.append(abs(np.vdot(a, tn_cb)))
        t_next_a = t @ tn_a
        labels.append(f"b* C T^{n} C* b = a* T^{n + 1} a")
        res.append(abs(np.vdot(ch_b, tn_cb) - np.vdot(a, t_next_a)))
        tn_a = t_next_a
        tn_cb = t @ tn_cb

    derived: dict[str, float] = {}
    if is_hermitian(c, tol) or not c.any():
        ca, cb = c @ a, c @ b
        c2a, c2b = c @ ca, c @ cb
        nca, ncb = np.vdot(ca, ca).real, np.vdot(cb, cb).real
        derived["norm_sq"] = float(abs(nca + ncb - na2 * nb2))
        derived["norm_fourth"] = float(
            abs(np.vdot(c2a, c2a).real + np.vdot(c2b, c2b).real - na2 * ncb - nb2 * nca)
        )
        moments, v = [], a.copy()
        for _ in range(m + 1):
            moments.append(abs(np.vdot(v, cb)))
            v = c @ (c @ v)
        derived["even_moments"] = float(max(moments)) if moments else 0.0
        if m and hermitian_eig(hermitize(c), cfg).eigenvalues[0] >= -np.sqrt(cfg.abs_tol):
            blocks = _eigen_blocks(c, cfg)
            derived["eigen_blocks"] = float(
                max((abs(np.vdot(q.conj().T @ a, q.conj().T @ b)) for q in blocks), default=0.0)
            )
    return Rank1Conditions(all(r <= tol for r in res), [float(r) for r in res], labels, derived, tol)


def positive_corner_form(dec: Rank1Decomposition, cfg: ToleranceConfig = DEFAULT_CFG):
    """Make C positive by left multiplication with 1 (+) U* where C = U|C|.

    Returns the new decomposition and the unitary 1 (+) U* (in the adapted
    basis) that was applied.
    """
    u, p = polar_unitary(dec.C, cfg)
    new = Rank1Decomposition.from_blocks(dec.a, u.conj().T @ dec.b, p, basis=dec.basis)
    new.corner = dec.corner
    left = np.eye(dec.a.size + 1, dtype=complex)
    left[1:, 1:] = u.conj().T
    return new, left


def rank1_certify(a, b, cfg: ToleranceConfig = DEFAULT_CFG) -> OrthoVerdict:
    """Exact verdict for A against a rank-one projection B.

    A is normalized first.  A passing run is a certificate; a failing one
    names the first violated condition.
    """
    a = as_matrix(a)
    na = operator_norm(a, cfg)
    if na == 0:
        raise ZeroOperator("A is zero")
    a = a / na
    try:
        dec = decompose_rank1(a, b, cfg)
    except Refuted11Block as exc:
        return refuted(Reason.CORNER_ENTRY_NONZERO, exc.vector, corner=exc.value)
    dec, left = positive_corner_form(dec, cfg)
    try:
        cond = rank1_conditions(dec, cfg)
    except NormSplitViolated as exc:
        return refuted(
            Reason.NORM_SPLIT_VIOLATED, {"condition": "|a|^2 + |b|^2 = 1", "residual": exc.residual}
        )
    details = {"max_residual": max(cond.residuals), "derived": cond.derived, "corner_unitary": left}
    if cond.passed:
        return certified(Reason.RANK_ONE_PROJECTION, **details)
    label, value = cond.first_failure
    return refuted(Reason.RANK_ONE_CONDITION_FAILED, {"condition": label, "residual": value}, **details)


def _krylov_basis(t: np.ndarray, v: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of span{v, Tv, T^2 v, ...}."""
    m = t.shape[0]
    cols: list[np.ndarray] = []
    w = v.copy()
    for _ in range(m):
        r = w.copy()
        for _ in range(2):
            for q in cols:
                r -= np.vdot(q, r) * q
        nr = np.linalg.norm(r)
        if nr <= tol:
            break
        cols.append(r / nr)
        w = t @ cols[-1]
    return np.array(cols).T if cols else np.zeros((m, 0), dtype=complex)


def construct_partner(a, c, u, cfg: ToleranceConfig = DEFAULT_CFG) -> np.ndarray | None:
    """Build A = [[0, a*], [b, C]] from (a, C, U) with C b = U T^(1/2) a.

    ``U`` must be a self-adjoint unitary commuting with T = I - aa* - C^2
    that maps the cyclic subspace of T^(1/2) a orthogonally to the cyclic
    subspace of a.  The component of b in ker C is the first kernel basis
    vector scaled to meet ||b||^2 = 1 - ||a||^2.  Returns None when the
    hypotheses on U fail or the assembled operator does not pass
    :func:`rank1_conditions`; raises :class:`NoSolution` when no b exists.
    """
    a = np.asarray(a, dtype=complex).ravel()
    c = as_matrix(c)
    u = as_matrix(u)
    m = a.size
    if c.shape != (m, m) or u.shape != (m, m):
        raise ShapeMismatch("C and U must be m x m with m = len(a)")
    tol = cfg.rel_tol
    na2 = float(np.vdot(a, a).real)
    if na2 > 1 + tol:
        raise NoSolution("||a|| > 1")
    if not is_hermitian(c, tol) or hermitian_eig(c, cfg).eigenvalues[0] < -tol:
        raise NotPSD("C must be positive semidefinite")
    c = hermitize(c)
    t = hermitize(np.eye(m) - np.outer(a, a.conj()) - c @ c)
    try:
        t_half = psd_sqrt(t, cfg)
    except NotPSD as exc:
        raise NoSolution("aa* + C^2 is not a contraction") from exc

    if (
        np.linalg.norm(u - u.conj().T) > tol
        or np.linalg.norm(u @ u - np.eye(m)) > tol
        or np.linalg.norm(u @ t - t @ u) > tol
    ):
        return None
    k_half = _krylov_basis(t, t_half @ a, tol)
    k_a = _krylov_basis(t, a, tol)
    if k_half.shape[1] and k_a.shape[1] and np.linalg.norm(k_a.conj().T @ u @ k_half) > np.sqrt(tol):
        return None

    rhs = u @ t_half @ a
    eig = hermitian_eig(c, cfg)
    w, v = eig.eigenvalues, eig.eigenvectors
    cut = np.sqrt(tol) * max(1.0, float(w[-1]))
    rng_mask = w > cut
    coeff = (v[:, rng_mask].conj().T @ rhs) / w[rng_mask]
    b_r = v[:, rng_mask] @ coeff
    if np.linalg.norm(c @ b_r - rhs) > np.sqrt(tol):
        raise NoSolution("U T^(1/2) a is not in the range of C")
    need = 1.0 - na2 - float(np.vdot(b_r, b_r).real)
    if need < -tol:
        raise NoSolution("range component of b is already too long")
    b = b_r
    if need > tol:
        kernel = v[:, ~rng_mask]
        if kernel.shape[1] == 0:
            raise NoSolution("C is injective; the norm constraint cannot be met")
        b = b_r + np.sqrt(need) * kernel[:, 0]

    dec = Rank1Decomposition.from_blocks(a, b, c)
    a_full = dec.assemble()
    if abs(operator_norm(a_full, cfg) - 1.0) > np.sqrt(tol):
        return None
    try:
        if not rank1_conditions(dec, cfg).passed:
            return None
    except NormSplitViolated:
        return None
    return a_full
