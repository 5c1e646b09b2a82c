"""Explicit orthogonal pairs and column orthonormal families.

Every constructor validates its parameters and returns unit-norm members.
``conjugate_seed`` applies a seeded unitary equivalence A -> U A V, which
preserves orthogonality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core_linalg import random_unitary
from .errors import OddDimension, ParamConstraintViolated, TooMany

BOUNDARY_TOL = 1e-12


def _conjugate(mats, seed: int | None, left_fix: int = 0):
    """Apply U . V to every matrix with seeded Haar U, V.

    ``left_fix`` keeps the first basis vectors fixed on both sides
    (U = 1 (+) U', V = 1 (+) V'), so a projection onto them is unchanged.
    """
    if seed is None:
        return mats
    rng = np.random.default_rng(seed)
    r, c = mats[0].shape
    u = np.eye(r, dtype=complex)
    v = np.eye(c, dtype=complex)
    u[left_fix:, left_fix:] = random_unitary(r - left_fix, rng)
    v[left_fix:, left_fix:] = random_unitary(c - left_fix, rng)
    return tuple(u @ m @ v for m in mats)


def canonical_pair(conjugate_seed: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    a = np.array([[0, 0], [1, 0]], dtype=complex)
    b = np.array([[1, 0], [0, 0]], dtype=complex)
    return _conjugate((a, b), conjugate_seed)


def family_square3x3(b: float, alpha: complex, beta: complex, conjugate_seed: int | None = None, strict: bool = True):
    """3x3 pair with trivially intersecting kernels of A, B and of A*, B*.

    Requires 0 < b < 1, beta != 0 and |alpha|^2 <= (1 - |beta|^2)(1 - b^2).
    ``strict=False`` skips validation (used to build refutable instances).
    """
    b = float(b)
    alpha, beta = complex(alpha), complex(beta)
    if strict:
        if not 0 < b < 1:
            raise ParamConstraintViolated("0 < b < 1")
        if beta == 0:
            raise ParamConstraintViolated("beta != 0")
        bound = (1 - abs(beta) ** 2) * (1 - b**2)
        if abs(alpha) ** 2 > bound + BOUNDARY_TOL:
            raise ParamConstraintViolated(
                f"|alpha|^2 <= (1 - |beta|^2)(1 - b^2): {abs(alpha) ** 2:.6g} > {bound:.6g}"
            )
    a = np.array([[0, 0, 1], [0, alpha, 0], [0, beta, 0]], dtype=complex)
    bm = np.diag([1, b, 0]).astype(complex)
    return _conjugate((a, bm), conjugate_seed)


def family_rect3x2(u: complex, v: complex, w: complex, phi: float, psi: float, conjugate_seed: int | None = None):
    """3x2 pair parametrized by unimodular u, v, w and real angles phi, psi."""
    for name, z in (("u", u), ("v", v), ("w", w)):
        if abs(abs(complex(z)) - 1) > BOUNDARY_TOL:
            raise ParamConstraintViolated(f"|{name}| = 1")
    u, v, w = complex(u), complex(v), complex(w)
    sp, cp, ss, cs = np.sin(phi), np.cos(phi), np.sin(psi), np.cos(psi)
    a = np.array([[0, 0], [u * sp * ss, w * sp * cs], [v * cs, -np.conj(u) * v * w * ss]], dtype=complex)
    bm = np.array([[1, 0], [0, cp], [0, 0]], dtype=complex)
    return _conjugate((a, bm), conjugate_seed)


def random_rect3x2_params(rng: np.random.Generator) -> dict:
    ph = np.exp(2j * np.pi * rng.uniform(size=3))
    return {"u": ph[0], "v": ph[1], "w": ph[2], "phi": rng.uniform(0, 2 * np.pi), "psi": rng.uniform(0, 2 * np.pi)}


def partial_isometry_pair(n: int, seed: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """(A, B) with B a projection of rank n/2 and A*A = B, AA* = I - B.

    ``seed=None`` leaves the standard basis; otherwise both are conjugated by
    one seeded unitary S (S A S*, S B S*), which keeps those relations.
    """
    if n <= 0 or n % 2:
        raise OddDimension("n must be a positive even integer")
    k = n // 2
    a = np.zeros((n, n), dtype=complex)
    b = np.zeros((n, n), dtype=complex)
    b[:k, :k] = np.eye(k)
    if seed is None:
        a[k:, :k] = np.eye(k)
        return a, b
    rng = np.random.default_rng(seed)
    a[k:, :k] = random_unitary(k, rng)
    s = random_unitary(n, rng)
    return s @ a @ s.conj().T, s @ b @ s.conj().T


def family_rank1_partner(
    variant: int,
    b1: complex = 0.0,
    b2: complex = 0.0,
    a1: complex = 0.0,
    alpha: float = 0.0,
    transpose: bool = False,
    conjugate_seed: int | None = None,
    strict: bool = True,
):
    """3x3 operators orthogonal to B = e1 e1*.

    Variant 1: first column (0, b1, b2), rest zero, |b1|^2 + |b2|^2 = 1.
    Variant 2: A = [[0, conj(a1), 0], [0, alpha, 0], [b2, 0, 0]] with
    |a1|^2 + |b2|^2 = 1, 0 < alpha <= 1 and |b2| = alpha or |b2| = 1.
    ``transpose`` returns the transposed pair; ``conjugate_seed`` applies
    (1 (+) V) A (1 (+) W), which fixes B.
    """
    b1, b2, a1 = complex(b1), complex(b2), complex(a1)
    if variant == 1:
        if strict and abs(abs(b1) ** 2 + abs(b2) ** 2 - 1) > BOUNDARY_TOL:
            raise ParamConstraintViolated("|b1|^2 + |b2|^2 = 1")
        a = np.array([[0, 0, 0], [b1, 0, 0], [b2, 0, 0]], dtype=complex)
    elif variant == 2:
        if strict:
            if abs(abs(a1) ** 2 + abs(b2) ** 2 - 1) > BOUNDARY_TOL:
                raise ParamConstraintViolated("|a1|^2 + |b2|^2 = 1")
            if not 0 < alpha <= 1 + BOUNDARY_TOL:
                raise ParamConstraintViolated("0 < alpha <= 1")
            if abs(abs(b2) - alpha) > BOUNDARY_TOL and abs(abs(b2) - 1) > BOUNDARY_TOL:
                raise ParamConstraintViolated("|b2| = alpha or |b2| = 1")
        a = np.array([[0, np.conj(a1), 0], [0, alpha, 0], [b2, 0, 0]], dtype=complex)
    else:
        raise ParamConstraintViolated("variant must be 1 or 2")
    bm = np.diag([1, 0, 0]).astype(complex)
    if transpose:
        a = a.T.copy()
    return _conjugate((a, bm), conjugate_seed, left_fix=1)


def column_canonical(k: int, d: int) -> list[np.ndarray]:
    """k matrices of size d x d; member j has a single 1 at (j, 0)."""
    if k < 1 or d < 1:
        raise ValueError("k and d must be positive")
    if k > d:
        raise TooMany(f"k = {k} exceeds d = {d}")
    out = []
    for j in range(k):
        m = np.zeros((d, d), dtype=complex)
        m[j, 0] = 1
        out.append(m)
    return out


@dataclass(frozen=True)
class FamilySpec:
    family_id: str
    build: Callable = field(repr=False)
    params: dict = field(default_factory=dict)
    doc: str = ""
    provenance: str = "closed form"


def _pi_pair(n: int = 2, seed: int | None = None):
    return partial_isometry_pair(int(n), None if seed is None else int(seed))


FAMILIES: dict[str, FamilySpec] = {
    "canonical2x2": FamilySpec("Canonical2x2", lambda **p: canonical_pair(), {}, "A = [[0,0],[1,0]], B = diag(1,0)"),
    "square3x3": FamilySpec(
        "Square3x3",
        lambda b=0.5, alpha=0.5, beta=0.6: family_square3x3(b, alpha, beta),
        {"b": 0.5, "alpha": 0.5, "beta": 0.6},
        "3x3; 0<b<1, beta!=0, |alpha|^2 <= (1-|beta|^2)(1-b^2)",
    ),
    "rect3x2": FamilySpec(
        "Rect3x2",
        lambda u=1, v=1, w=1, phi=np.pi / 4, psi=np.pi / 4: family_rect3x2(u, v, w, phi, psi),
        {"u": 1, "v": 1, "w": 1, "phi": np.pi / 4, "psi": np.pi / 4},
        "3x2; |u|=|v|=|w|=1, real phi, psi",
        "oracle-validated",
    ),
    "partial-isometry": FamilySpec(
        "PartialIsometryPair", _pi_pair, {"n": 2, "seed": None}, "A*A = B, AA* = I - B; n even"
    ),
    "rank1-column": FamilySpec(
        "RankOneColumn",
        lambda b1=0.6, b2=0.8, transpose=False: family_rank1_partner(1, b1=b1, b2=b2, transpose=bool(transpose)),
        {"b1": 0.6, "b2": 0.8, "transpose": False},
        "B = e1e1*; |b1|^2+|b2|^2 = 1",
    ),
    "rank1-corner": FamilySpec(
        "RankOneCorner",
        lambda a1=0.8, alpha=0.6, b2=0.6, transpose=False: family_rank1_partner(
            2, a1=a1, alpha=float(alpha), b2=b2, transpose=bool(transpose)
        ),
        {"a1": 0.8, "alpha": 0.6, "b2": 0.6, "transpose": False},
        "B = e1e1*; |a1|^2+|b2|^2 = 1, 0<alpha<=1, |b2| = alpha or 1",
    ),
    "column-canonical": FamilySpec(
        "ColumnCanonical",
        lambda k=2, d=2: tuple(column_canonical(int(k), int(d))),
        {"k": 2, "d": 2},
        "k <= d matrix units e_j e_1*; column orthonormal",
    ),
}


def generate(name: str, conjugate_seed: int | None = None, **params):
    """Build a registered family by its CLI name."""
    key = name.lower()
    if key not in FAMILIES:
        raise KeyError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}")
    spec = FAMILIES[key]
    unknown = set(params) - set(spec.params)
    if unknown:
        raise ParamConstraintViolated(f"unknown parameters for {name}: {sorted(unknown)}")
    mats = spec.build(**params)
    if conjugate_seed is not None and key != "column-canonical":
        mats = _conjugate(tuple(mats), conjugate_seed)
    return tuple(mats)
