"""Dense complex linear algebra used by every orthogonality check.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; :func:`as_matrix`
coerces and validates user input.  The Hermitian eigensolver is a cyclic
Jacobi method written here so that the certificate paths do not depend on
LAPACK; everything else in this module is built on top of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian, NotPSD

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ToleranceConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    eig_sweeps: int = 50
    rng_seed: int = 0

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("abs_tol and rel_tol must be positive")
        if self.eig_sweeps < 1:
            raise ValueError("eig_sweeps must be at least 1")

    def rng(self, offset: int = 0) -> np.random.Generator:
        """Fresh generator seeded from ``rng_seed`` (plus an optional stream offset)."""
        return np.random.default_rng([self.rng_seed & 0xFFFFFFFFFFFFFFFF, offset])


DEFAULT_CFG = ToleranceConfig()


class HermitianEig(NamedTuple):
    eigenvalues: np.ndarray  # ascending, real
    eigenvectors: np.ndarray  # columns orthonormal


def as_matrix(x, *, name: str = "matrix") -> np.ndarray:
    """Coerce ``x`` to a finite 2-D complex array; 1-D input becomes a column."""
    m = np.array(x, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionMismatch(f"{name} must be a nonempty 2-D array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def adj(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermitize(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def is_hermitian(m: np.ndarray, rel_tol: float = DEFAULT_CFG.rel_tol) -> bool:
    if m.shape[0] != m.shape[1]:
        return False
    scale = np.linalg.norm(m)
    return bool(np.linalg.norm(m - m.conj().T) <= rel_tol * max(scale, 1e-300))


# ---------------------------------------------------------------------------
# Jacobi eigensolver


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Disjoint index pairs covering every (p, q), p < q, in n - 1 (or n) rounds."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            i, j = players[k], players[m - 1 - k]
            if i >= 0 and j >= 0:
                ps.append(min(i, j))
                qs.append(max(i, j))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0)
    return float(np.linalg.norm(off))


def _jacobi_round(a: np.ndarray, v: np.ndarray, p: np.ndarray, q: np.ndarray, thresh: float) -> None:
    c = a[p, q]
    mag = np.abs(c)
    keep = mag > thresh
    if not keep.any():
        return
    p, q, c, mag = p[keep], q[keep], c[keep], mag[keep]
    app = a[p, p].real
    aqq = a[q, q].real
    phase = np.conj(c / mag)
    tau = (aqq - app) / (2 * mag)
    t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
    cs = 1 / np.hypot(1.0, t)
    sn = t * cs
    # G = diag(1, e^{-i phi}) @ [[cs, sn], [-sn, cs]]
    g00, g01, g10, g11 = cs, sn, -sn * phase, cs * phase

    cp, cq = a[:, p].copy(), a[:, q].copy()
    a[:, p] = cp * g00 + cq * g10
    a[:, q] = cp * g01 + cq * g11
    rp, rq = a[p, :].copy(), a[q, :].copy()
    a[p, :] = np.conj(g00)[:, None] * rp + np.conj(g10)[:, None] * rq
    a[q, :] = np.conj(g01)[:, None] * rp + np.conj(g11)[:, None] * rq
    a[p, q] = 0
    a[q, p] = 0
    a[p, p] = app - t * mag
    a[q, q] = aqq + t * mag

    vp, vq = v[:, p].copy(), v[:, q].copy()
    v[:, p] = vp * g00 + vq * g10
    v[:, q] = vp * g01 + vq * g11


def hermitian_eig(m, cfg: ToleranceConfig = DEFAULT_CFG) -> HermitianEig:
    """Full spectral decomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Rotations are applied in round-robin order so each round touches disjoint
    index pairs and can be vectorized.  During the first three sweeps entries
    below ``0.2 * off / n**2`` are skipped (threshold strategy); the method
    stops once the off-diagonal Frobenius norm is at roundoff level.

    Raises :class:`NotHermitian` when ``||M - M*||_F > rel_tol * ||M||_F`` and
    :class:`NoConvergence` after ``cfg.eig_sweeps`` sweeps.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if a.shape[1] != n:
        raise NotHermitian(f"matrix is not square: {a.shape}")
    frob = float(np.linalg.norm(a))
    if np.linalg.norm(a - a.conj().T) > cfg.rel_tol * frob:
        raise NotHermitian("matrix is not Hermitian within rel_tol")
    a = hermitize(a)
    v = np.eye(n, dtype=complex)
    if n == 1 or frob == 0.0:
        w = np.diagonal(a).real.copy()
    else:
        stop = n * EPS * frob
        rounds = _round_robin(n)
        for sweep in range(cfg.eig_sweeps + 1):
            off = _off_norm(a)
            if off <= stop:
                break
            if sweep == cfg.eig_sweeps:
                raise NoConvergence(f"Jacobi did not converge in {cfg.eig_sweeps} sweeps (off={off:.3e})")
            thresh = 0.2 * off / n**2 if sweep < 3 else 0.01 * EPS * frob
            for p, q in rounds:
                _jacobi_round(a, v, p, q, thresh)
            a = hermitize(a)
        w = np.diagonal(a).real.copy()
    order = np.argsort(w, kind="stable")
    return HermitianEig(w[order], v[:, order])


def _spectral_synthesis(v: np.ndarray, w: np.ndarray) -> np.ndarray:
    return hermitize((v * w) @ v.conj().T)


def operator_norm(m, cfg: ToleranceConfig = DEFAULT_CFG) -> float:
    """Largest singular value, via the top eigenvalue of M*M (or MM*, whichever is smaller)."""
    a = as_matrix(m)
    g = a.conj().T @ a if a.shape[1] <= a.shape[0] else a @ a.conj().T
    top = hermitian_eig(hermitize(g), cfg).eigenvalues[-1]
    return float(np.sqrt(max(top, 0.0)))


def _orthonormalize(cols: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt with one reorthogonalization pass."""
    q = cols.astype(complex, copy=True)
    for j in range(q.shape[1]):
        for _ in range(2):
            for k in range(j):
                q[:, j] -= (q[:, k].conj() @ q[:, j]) * q[:, k]
        q[:, j] /= np.linalg.norm(q[:, j])
    return q


def orthonormal_complement(basis: np.ndarray, cfg: ToleranceConfig = DEFAULT_CFG) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of span(basis columns)."""
    n, r = basis.shape
    if r == 0:
        return np.eye(n, dtype=complex)
    proj = hermitize(basis @ basis.conj().T)
    eig = hermitian_eig(proj, cfg)
    return eig.eigenvectors[:, eig.eigenvalues < 0.5]


def polar_unitary(b, cfg: ToleranceConfig = DEFAULT_CFG) -> tuple[np.ndarray, np.ndarray]:
    """Polar decomposition B = U P of a square matrix with U unitary and P = |B|.

    The partial isometry on range(|B|) is completed by pairing the kernel
    eigenvectors of B*B with an orthonormal basis of the complement of
    range(B) (= ker B*).
    """
    b = as_matrix(b)
    n = b.shape[0]
    if b.shape[1] != n:
        raise DimensionMismatch(f"polar_unitary needs a square matrix, got {b.shape}")
    eig = hermitian_eig(hermitize(b.conj().T @ b), cfg)
    w, v = eig.eigenvalues[::-1], eig.eigenvectors[:, ::-1]
    floor = 10 * n * EPS * max(float(w[0]), 0.0)
    s = np.sqrt(np.where(w > floor, w, 0.0))  # same rounding floor as psd_sqrt
    p = _spectral_synthesis(v, s)
    smax = s[0] if n else 0.0
    rank = int(np.sum(s > max(1e-7 * smax, np.sqrt(cfg.abs_tol) * 1e-3)))
    u_range = _orthonormalize((b @ v[:, :rank]) / s[:rank]) if rank else np.zeros((n, 0), complex)
    u_ker = orthonormal_complement(u_range, cfg)
    u = u_range @ v[:, :rank].conj().T + u_ker @ v[:, rank:].conj().T
    return u, p


def psd_sqrt(p, cfg: ToleranceConfig = DEFAULT_CFG) -> np.ndarray:
    """Positive square root.

    Eigenvalues in (-sqrt(abs_tol), 0) and those below the rounding floor
    10 n eps max|w| are set to 0 before taking roots, so that noise of size
    1e-16 does not turn into a spurious 1e-8 component.
    """
    eig = hermitian_eig(p, cfg)
    w = eig.eigenvalues
    if w.size and w[0] < -np.sqrt(cfg.abs_tol):
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} is negative")
    floor = 10 * w.size * EPS * (np.max(np.abs(w)) if w.size else 0.0)
    return _spectral_synthesis(eig.eigenvectors, np.sqrt(np.where(w > floor, w, 0.0)))


def positive_part(h, cfg: ToleranceConfig = DEFAULT_CFG) -> np.ndarray:
    eig = hermitian_eig(h, cfg)
    return _spectral_synthesis(eig.eigenvectors, np.clip(eig.eigenvalues, 0.0, None))


def eigenspace(m, mu: float, tol: float | None = None, cfg: ToleranceConfig = DEFAULT_CFG) -> np.ndarray:
    """Orthonormal basis (as columns) of the eigenvectors with |lambda - mu| <= tol.

    The default window is ``rel_tol * ||M||`` (floored at ``abs_tol``).  An
    empty eigenspace comes back with zero columns.
    """
    eig = hermitian_eig(m, cfg)
    if tol is None:
        scale = float(np.max(np.abs(eig.eigenvalues))) if eig.eigenvalues.size else 0.0
        tol = max(cfg.rel_tol * scale, cfg.abs_tol)
    mask = np.abs(eig.eigenvalues - mu) <= tol
    return eig.eigenvectors[:, mask]


def subspace_intersection(
    bases: Sequence[np.ndarray], tol: float | None = None, cfg: ToleranceConfig = DEFAULT_CFG
) -> np.ndarray:
    """Orthonormal basis of the intersection of the spans of orthonormal bases.

    Computed as the (numerical) kernel of sum_j (I - Q_j Q_j*).
    """
    if not bases:
        raise ValueError("need at least one basis")
    bases = [np.asarray(q, dtype=complex) for q in bases]
    n = bases[0].shape[0]
    if any(q.ndim != 2 or q.shape[0] != n for q in bases):
        raise DimensionMismatch("all bases must have the same number of rows")
    if any(q.shape[1] == 0 for q in bases):
        return np.zeros((n, 0), dtype=complex)
    s = np.zeros((n, n), dtype=complex)
    for q in bases:
        s += np.eye(n) - q @ q.conj().T
    if tol is None:
        tol = cfg.rel_tol * len(bases)
    eig = hermitian_eig(hermitize(s), cfg)
    return eig.eigenvectors[:, eig.eigenvalues <= tol]


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix)."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_complex(shape, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def spectral_norms(stack: np.ndarray) -> np.ndarray:
    """Batched largest singular values through LAPACK.

    Used only by the randomized and grid oracles, which are meant to be
    independent of the Jacobi route above.
    """
    stack = np.asarray(stack)
    return np.linalg.norm(stack, ord=2, axis=(-2, -1))
