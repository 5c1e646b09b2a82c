"""Commuting normal pairs: joint spectra, half-ball test, and the state cone refuter."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .core_linalg import (
    DEFAULT_CFG,
    ToleranceConfig,
    as_matrix,
    hermitian_eig,
    hermitize,
    operator_norm,
)
from .errors import NotCommuting, NotNormal, ShapeMismatch, ZeroOperator
from .verdict import OrthoVerdict, Reason, Status, not_refuted, refuted

KAPPA = 0.712
N_HEMISPHERE = 500


@dataclass
class JointSpectrum:
    points: list[tuple[complex, float]]
    diagonalizer: np.ndarray
    zeta: np.ndarray  # diagonal of U*AU
    tau: np.ndarray  # diagonal of U*BU, complex in general

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        real_t = all(isinstance(t, float) for _, t in self.points)
        w.writerow(["re_zeta", "im_zeta", "t"] if real_t else ["re_zeta", "im_zeta", "re_t", "im_t"])
        for z, t in self.points:
            tail = [repr(t)] if real_t else [repr(complex(t).real), repr(complex(t).imag)]
            w.writerow([repr(z.real), repr(z.imag), *tail])
        return buf.getvalue()


def _check_normal(m: np.ndarray, name: str, cfg: ToleranceConfig) -> float:
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"{name} must be square")
    nm = operator_norm(m, cfg)
    comm = m.conj().T @ m - m @ m.conj().T
    if comm.any() and operator_norm(comm, cfg) > cfg.rel_tol * max(nm**2, cfg.abs_tol):
        raise NotNormal(f"{name} is not normal")
    return nm


def _split(a: np.ndarray, b: np.ndarray, basis: np.ndarray, cfg: ToleranceConfig, depth: int = 0) -> np.ndarray:
    """Orthonormal basis of span(basis) diagonalizing the compressions of A and B.

    Each level diagonalizes a generic Hermitian combination; blocks whose
    eigenvalues coincide are split again with the next combination.
    """
    k = basis.shape[1]
    if k == 1:
        return basis
    ca = basis.conj().T @ a @ basis
    cb = basis.conj().T @ b @ basis
    kap = KAPPA * (1.0 + 0.37 * depth)
    h = hermitize(
        (ca + ca.conj().T) / 2
        + kap * (ca - ca.conj().T) / 2j
        + kap**2 * (cb + cb.conj().T) / 2
        + kap**3 * (cb - cb.conj().T) / 2j
    )
    eig = hermitian_eig(h, cfg)
    vecs = basis @ eig.eigenvectors
    w = eig.eigenvalues
    scale = max(np.max(np.abs(w)), 1.0)
    gap = 1e3 * cfg.rel_tol * scale
    out = []
    start = 0
    for i in range(1, k + 1):
        if i == k or w[i] - w[i - 1] > gap:
            block = vecs[:, start:i]
            if i - start == 1 or depth >= 4:
                out.append(block)
            else:
                out.append(_split(a, b, block, cfg, depth + 1))
            start = i
    return np.hstack(out)


def joint_spectrum(a, b, cfg: ToleranceConfig = DEFAULT_CFG) -> JointSpectrum:
    """Simultaneous diagonalization of a commuting normal pair."""
    a, b = as_matrix(a, name="A"), as_matrix(b, name="B")
    if a.shape != b.shape:
        raise ShapeMismatch(f"A and B differ in shape: {a.shape} vs {b.shape}")
    na = _check_normal(a, "A", cfg)
    nb = _check_normal(b, "B", cfg)
    comm = a @ b - b @ a
    if comm.any() and operator_norm(comm, cfg) > cfg.rel_tol * max(na * nb, cfg.abs_tol):
        raise NotCommuting("A and B do not commute")
    n = a.shape[0]
    u = _split(a, b, np.eye(n, dtype=complex), cfg)
    da = u.conj().T @ a @ u
    db = u.conj().T @ b @ u
    zeta, tau = np.diag(da).copy(), np.diag(db).copy()
    resid = max(
        np.linalg.norm(da - np.diag(zeta)) / max(na, 1.0),
        np.linalg.norm(db - np.diag(tau)) / max(nb, 1.0),
    )
    if resid > np.sqrt(cfg.rel_tol):
        raise NotCommuting(f"simultaneous diagonalization residual {resid:.2e}")
    points = [(complex(z), float(t.real)) if abs(t.imag) <= cfg.abs_tol else (complex(z), complex(t)) for z, t in zip(zeta, tau)]
    return JointSpectrum(points, u, zeta, tau)


def hemisphere_lattice(n: int = N_HEMISPHERE) -> np.ndarray:
    """Fibonacci points (zeta, t) on the upper unit hemisphere of C x R, as rows (re, im, t)."""
    i = np.arange(n) + 0.5
    t = i / n  # uniform in height gives uniform area on a sphere cap
    r = np.sqrt(1 - t**2)
    golden = np.pi * (3 - np.sqrt(5))
    phi = golden * np.arange(n)
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), t])


def check_normal_pair(a, b, cfg: ToleranceConfig = DEFAULT_CFG) -> OrthoVerdict:
    """Half-ball containment and hemisphere coverage for a commuting normal pair.

    B is made positive entrywise on the joint spectrum: (zeta, t) becomes
    (zeta * conj(t)/|t|, |t|).  The points are tested as given, without
    rescaling, so the witness is a joint eigenvalue pair of the input.  In
    finite dimension the spectrum is finite, so coverage always fails.
    """
    js = joint_spectrum(a, b, cfg)
    zeta, tau = js.zeta, js.tau
    if not np.any(zeta) or not np.any(tau):
        raise ZeroOperator("A and B must be nonzero")
    mag = np.abs(tau)
    phase = np.ones_like(tau)
    nz = mag > 0
    phase[nz] = np.conj(tau[nz]) / mag[nz]
    zeta = zeta * phase
    t = mag
    pts = np.column_stack([zeta.real, zeta.imag, t])
    radius = np.abs(zeta) ** 2 + t**2
    worst = int(np.argmax(radius))
    if radius[worst] > 1 + cfg.rel_tol:
        return OrthoVerdict(
            Status.CERTIFIED_NOT_ORTHOGONAL,
            Reason.OUTSIDE_HALF_BALL,
            (complex(zeta[worst]), float(t[worst])),
            details={"radius_sq": float(radius[worst])},
        )
    lattice = hemisphere_lattice()
    dist = np.linalg.norm(lattice[:, None, :] - pts[None, :, :], axis=2).min(axis=1)
    far = int(np.argmax(dist))
    gap = float(dist[far])
    if gap > cfg.rel_tol:
        lat = lattice[far]
        return OrthoVerdict(
            Status.CERTIFIED_NOT_ORTHOGONAL,
            Reason.HEMISPHERE_NOT_COVERED,
            (complex(lat[0], lat[1]), float(lat[2])),
            details={"coverage_gap": gap},
        )
    return OrthoVerdict(Status.CONSISTENT_AT_TOLERANCE, Reason.GRID_CONSISTENT, details={"coverage_gap": gap})


@dataclass(frozen=True)
class ConePoint:
    x: float
    y: float
    z: complex

    def in_cone(self, tol: float) -> bool:
        if not (-tol <= self.x <= 1 + tol and -tol <= self.y <= 1 + tol):
            return False
        return abs(self.z) <= np.sqrt(max(self.x, 0) * max(self.y, 0)) + tol


def cone_points_csv(points: list[ConePoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "re_z", "im_z"])
    for p in points:
        w.writerow([repr(p.x), repr(p.y), repr(p.z.real), repr(p.z.imag)])
    return buf.getvalue()


def cone_point(rho: np.ndarray, a: np.ndarray, b: np.ndarray) -> ConePoint:
    """(omega(I - A*A), omega(I - B*B), omega(B*A)) for the density matrix rho."""
    n = a.shape[1]
    eye = np.eye(n)
    x = np.trace(rho @ (eye - a.conj().T @ a)).real
    y = np.trace(rho @ (eye - b.conj().T @ b)).real
    z = np.trace(rho @ (b.conj().T @ a))
    return ConePoint(float(x), float(y), complex(z))


def cone_refuter(
    a, b, n_samples: int = 200, cfg: ToleranceConfig = DEFAULT_CFG
) -> tuple[OrthoVerdict, list[ConePoint]]:
    """Map sampled states into (x, y, z) and look for a point outside the cone
    0 <= x, y <= 1, |z| <= sqrt(xy).

    States are vector states on seeded random unit vectors and the midpoints
    of consecutive pairs of them.  The tolerance on |z| is sqrt(abs_tol),
    since sqrt(xy) amplifies rounding in x and y near zero.  Sampling can
    only refute.
    """
    a, b = as_matrix(a, name="A"), as_matrix(b, name="B")
    if a.shape != b.shape:
        raise ShapeMismatch(f"A and B differ in shape: {a.shape} vs {b.shape}")
    n = a.shape[1]
    rng = cfg.rng(31)
    n_vec = n_samples // 2 + 1
    vecs = rng.standard_normal((n_vec, n)) + 1j * rng.standard_normal((n_vec, n))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    rhos = [np.outer(v, v.conj()) for v in vecs]
    rhos += [(rhos[i] + rhos[i + 1]) / 2 for i in range(len(rhos) - 1)]
    rhos = rhos[:n_samples]
    tol = np.sqrt(cfg.abs_tol)
    points = []
    for rho in rhos:
        p = cone_point(rho, a, b)
        points.append(p)
        if not p.in_cone(tol):
            return refuted(Reason.OUTSIDE_CONE, rho, point=p.__dict__), points
    return not_refuted(n_samples=len(points)), points


def random_commuting_normal(n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Commuting normal pair with a common Haar diagonalizer and joint points in the half-ball."""
    from .core_linalg import random_unitary

    u = random_unitary(n, rng)
    r = np.sqrt(rng.uniform(0, 1, n))
    ang = rng.uniform(0, np.pi / 2, n)
    phase = np.exp(2j * np.pi * rng.uniform(size=n))
    zeta = r * np.cos(ang) * phase
    t = r * np.sin(ang) * np.exp(2j * np.pi * rng.uniform(size=n))
    return u @ np.diag(zeta) @ u.conj().T, u @ np.diag(t) @ u.conj().T
