"""Pythagoras orthogonality of matrix pairs.

For unit-norm A, B the relation A _|_P B means ||A + lam B||^2 = 1 + |lam|^2
for every complex lam.  :func:`check_pythagoras` combines exact refuters,
exact certificates for structured pairs, and a sampled defect oracle, and
reports which of them decided the outcome.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .core_linalg import (
    DEFAULT_CFG,
    ToleranceConfig,
    as_matrix,
    eigenspace,
    hermitian_eig,
    hermitize,
    is_hermitian,
    operator_norm,
    polar_unitary,
    spectral_norms,
)
from .errors import ShapeMismatch, ZeroOperator
from .rank1 import rank1_certify
from .range_orth import check_range_orthogonal, pythagoras_via_state
from .verdict import OrthoVerdict, Reason, Status, not_applicable, not_refuted, refuted


@dataclass(frozen=True)
class GridSpec:
    radii: tuple[float, ...] = tuple(np.logspace(-3, 1, 32))
    angles_per_radius: int = 64
    extra_points: tuple[complex, ...] = (0j, 1 + 0j, -1 + 0j, 1j, -1j)

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.size == 0 or np.any(r <= 0) or np.any(np.diff(r) <= 0):
            raise ValueError("radii must be positive and strictly ascending")
        if self.angles_per_radius < 1:
            raise ValueError("angles_per_radius must be positive")

    @classmethod
    def sized(cls, n_radii: int = 32, n_angles: int = 64, r_min: float = 1e-3, r_max: float = 10.0):
        return cls(tuple(np.logspace(np.log10(r_min), np.log10(r_max), n_radii)), n_angles)

    def points(self) -> np.ndarray:
        r = np.asarray(self.radii)[:, None]
        phase = np.exp(2j * np.pi * np.arange(self.angles_per_radius) / self.angles_per_radius)
        return np.concatenate([(r * phase).ravel(), np.asarray(self.extra_points, dtype=complex)])


DEFAULT_GRID = GridSpec()


def defect_tolerance(lam, cfg: ToleranceConfig = DEFAULT_CFG):
    """Allowed |defect| at lam: abs_tol + rel_tol * (1 + |lam|^2)."""
    return cfg.abs_tol + cfg.rel_tol * (1 + np.abs(lam) ** 2)


@dataclass
class DefectProfile:
    lambdas: np.ndarray
    defects: np.ndarray
    tolerances: np.ndarray = field(repr=False)

    @property
    def samples(self) -> list[tuple[complex, float]]:
        return list(zip(self.lambdas.tolist(), self.defects.tolist()))

    @property
    def min_defect(self) -> float:
        return float(self.defects.min())

    @property
    def max_abs_defect(self) -> float:
        return float(np.abs(self.defects).max())

    @property
    def argmin(self) -> complex:
        return complex(self.lambdas[np.argmin(self.defects)])

    def violations(self) -> np.ndarray:
        """Indices whose |defect| exceeds the per-point tolerance."""
        return np.flatnonzero(np.abs(self.defects) > self.tolerances)

    def worst_violation(self) -> tuple[complex, float] | None:
        idx = self.violations()
        if idx.size == 0:
            return None
        i = idx[np.argmax(np.abs(self.defects[idx]) / self.tolerances[idx])]
        return complex(self.lambdas[i]), float(self.defects[i])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re_lambda", "im_lambda", "defect"])
        for lam, d in zip(self.lambdas, self.defects):
            w.writerow([repr(float(lam.real)), repr(float(lam.imag)), repr(float(d))])
        return buf.getvalue()

    def summary(self) -> dict:
        worst = self.worst_violation()
        return {
            "n_samples": int(self.lambdas.size),
            "min_defect": self.min_defect,
            "max_abs_defect": self.max_abs_defect,
            "argmin": self.argmin,
            "n_violations": int(self.violations().size),
            "worst_violation": None if worst is None else {"lambda": worst[0], "defect": worst[1]},
        }


def normalize_pair(a, b, cfg: ToleranceConfig = DEFAULT_CFG):
    """Return (A/||A||, B/||B||, ||A||, ||B||)."""
    a, b = as_matrix(a, name="A"), as_matrix(b, name="B")
    if a.shape != b.shape:
        raise ShapeMismatch(f"A and B differ in shape: {a.shape} vs {b.shape}")
    na, nb = operator_norm(a, cfg), operator_norm(b, cfg)
    if na == 0 or nb == 0:
        raise ZeroOperator("A and B must be nonzero")
    return a / na, b / nb, na, nb


def _reduce(a: np.ndarray, b: np.ndarray, cfg: ToleranceConfig):
    u, p = polar_unitary(b, cfg)
    return u.conj().T @ a, p, u


def reduce_to_positive(a, b, cfg: ToleranceConfig = DEFAULT_CFG) -> tuple[np.ndarray, np.ndarray]:
    """Replace (A, B) by the equivalent pair (U*A, |B|) where B = U|B|."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ShapeMismatch("reduce_to_positive needs square matrices of equal size")
    a2, p, _ = _reduce(a, b, cfg)
    return a2, p


def criterion_matrix(a, b, lam: complex, cfg: ToleranceConfig = DEFAULT_CFG) -> tuple[np.ndarray, float]:
    """M = (1 + |lam|^2) I - (A + lam B)*(A + lam B) and its smallest eigenvalue.

    For unit-norm A, B orthogonality at lam means M is positive and singular.
    """
    a, b = as_matrix(a), as_matrix(b)
    s = a + lam * b
    m = hermitize((1 + abs(lam) ** 2) * np.eye(a.shape[1]) - s.conj().T @ s)
    return m, float(hermitian_eig(m, cfg).eigenvalues[0])


def defect_profile(a, b, grid: GridSpec = DEFAULT_GRID, cfg: ToleranceConfig = DEFAULT_CFG) -> DefectProfile:
    """Brute-force defect 1 + |lam|^2 - ||A + lam B||^2 over the grid, after normalization.

    Norms come from LAPACK singular values, independently of the Jacobi
    route used by the certificates.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"A and B differ in shape: {a.shape} vs {b.shape}")
    na, nb = spectral_norms(np.stack([a, b]))
    if na == 0 or nb == 0:
        raise ZeroOperator("A and B must be nonzero")
    a, b = a / na, b / nb
    lam = grid.points()
    norms = spectral_norms(a[None] + lam[:, None, None] * b[None])
    defects = 1 + np.abs(lam) ** 2 - norms**2
    return DefectProfile(lam, defects, defect_tolerance(lam, cfg))


class DetTest(NamedTuple):
    holds: bool
    coefficients: np.ndarray


def det_identity_test(a, b, cfg: ToleranceConfig = DEFAULT_CFG) -> DetTest:
    """Test det(A + lam B) == 0 as a polynomial in lam.

    The degree-n polynomial is sampled at the (n+1)-th roots of unity and its
    coefficients are recovered with an FFT.  It vanishes when every
    coefficient is at most ``rel_tol * max(1, max_k |p(lam_k)|)``.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ShapeMismatch("det_identity_test needs square matrices of equal size")
    n = a.shape[0]
    nodes = np.exp(2j * np.pi * np.arange(n + 1) / (n + 1))
    values = np.linalg.det(a[None] + nodes[:, None, None] * b[None])
    coeffs = np.fft.fft(values) / (n + 1)
    threshold = cfg.rel_tol * max(1.0, float(np.max(np.abs(values))))
    return DetTest(bool(np.all(np.abs(coeffs) <= threshold)), coeffs)


def _det_witness(coeffs: np.ndarray) -> complex:
    n = coeffs.size
    nodes = np.exp(2j * np.pi * np.arange(n) / n)
    vals = np.polynomial.polynomial.polyval(nodes, coeffs)
    return complex(nodes[np.argmax(np.abs(vals))])


def _is_psd(m: np.ndarray, cfg: ToleranceConfig) -> bool:
    scale = max(operator_norm(m, cfg), cfg.abs_tol)
    return hermitian_eig(hermitize(m), cfg).eigenvalues[0] >= -cfg.rel_tol * scale


def selfadjoint_obstruction(a, b, cfg: ToleranceConfig = DEFAULT_CFG) -> OrthoVerdict:
    """Two nonzero selfadjoint matrices, one of them positive, are never orthogonal."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape or not (is_hermitian(a, cfg.rel_tol) and is_hermitian(b, cfg.rel_tol)):
        return not_applicable()
    if not a.any() or not b.any():
        return not_applicable()
    for name, m in (("B", b), ("A", a)):
        if _is_psd(m, cfg):
            return refuted(
                Reason.SELFADJOINT_POSITIVE,
                {"condition": f"A, B selfadjoint and {name} >= 0"},
            )
    return not_applicable()


def _unit_candidates(k: int, rng: np.random.Generator, n_random: int) -> list[np.ndarray]:
    eye = np.eye(k, dtype=complex)
    out = [eye[:, i] for i in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            out.append((eye[:, i] + eye[:, j]) / np.sqrt(2))
            out.append((eye[:, i] + 1j * eye[:, j]) / np.sqrt(2))
    for _ in range(n_random):
        z = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        out.append(z / np.linalg.norm(z))
    return out


def norming_orthogonality_test(a, b, cfg: ToleranceConfig = DEFAULT_CFG, n_random: int = 8) -> OrthoVerdict:
    """A unit vector xi norming one member must satisfy <A xi, B xi> = 0.

    Both directions are checked.  For every unit xi an orthogonal pair obeys
    |<A xi, B xi>|^2 <= (1 - ||A xi||^2)(1 - ||B xi||^2); a candidate breaking
    that bound by more than ``rel_tol`` is returned as the witness.  Candidates
    are the basis vectors of the norming eigenspace, their pairwise sums
    (which suffice by polarization) and a few seeded random combinations.
    """
    a, b = as_matrix(a), as_matrix(b)
    na, nb = operator_norm(a, cfg), operator_norm(b, cfg)
    a, b = a / na, b / nb
    rng = cfg.rng(21)
    for name, y in (("B", b), ("A", a)):
        space = eigenspace(hermitize(y.conj().T @ y), 1.0, cfg.rel_tol, cfg)
        if space.shape[1] == 0:
            continue
        comp = space.conj().T @ b.conj().T @ a @ space
        if np.max(np.abs(comp)) <= cfg.rel_tol:
            continue
        for c in _unit_candidates(space.shape[1], rng, n_random):
            xi = space @ c
            ax, bx = a @ xi, b @ xi
            z = np.vdot(bx, ax)
            x = 1 - np.vdot(ax, ax).real
            yv = 1 - np.vdot(bx, bx).real
            if abs(z) ** 2 - max(x, 0) * max(yv, 0) > cfg.rel_tol:
                return refuted(
                    Reason.NORMING_VECTOR_NOT_ORTHOGONAL, xi, inner_product=complex(z), norming_member=name
                )
    return not_refuted()


def _rank(m: np.ndarray, cfg: ToleranceConfig) -> int:
    w = hermitian_eig(hermitize(m.conj().T @ m), cfg).eigenvalues
    return int(np.sum(w > max(cfg.abs_tol, cfg.abs_tol * w[-1])))


def _top_projection(p: np.ndarray, cfg: ToleranceConfig) -> np.ndarray:
    v = hermitian_eig(hermitize(p), cfg).eigenvectors[:, -1]
    return np.outer(v, v.conj())


@dataclass
class _Stage:
    name: str
    verdict: OrthoVerdict


def _pipeline(a: np.ndarray, b: np.ndarray, cfg: ToleranceConfig) -> list[_Stage]:
    stages: list[_Stage] = []
    square = a.shape[0] == a.shape[1]

    stages.append(_Stage("selfadjoint", selfadjoint_obstruction(a, b, cfg)))
    if square:
        a2, p, _ = _reduce(a, b, cfg)
        stages.append(_Stage("selfadjoint_reduced", selfadjoint_obstruction(a2, p, cfg)))
        det = det_identity_test(a, b, cfg)
        if det.holds:
            stages.append(_Stage("determinant", not_refuted(coefficients=det.coefficients)))
        else:
            stages.append(
                _Stage(
                    "determinant",
                    refuted(Reason.DETERMINANT_NOT_ZERO, _det_witness(det.coefficients), coefficients=det.coefficients),
                )
            )
    stages.append(_Stage("norming", norming_orthogonality_test(a, b, cfg)))

    if check_range_orthogonal(a, b, cfg):
        stages.append(_Stage("range_state", pythagoras_via_state(a, b, cfg)))
    elif check_range_orthogonal(a.conj().T, b.conj().T, cfg):
        v = pythagoras_via_state(a.conj().T, b.conj().T, cfg)
        v.details["adjoint"] = True
        stages.append(_Stage("range_state", v))

    if square:
        for x, y, label in ((a, b, "rank1"), (b, a, "rank1_swapped")):
            if _rank(y, cfg) == 1:
                x2, py, _ = _reduce(x, y, cfg)
                stages.append(_Stage(label, rank1_certify(x2, _top_projection(py, cfg), cfg)))
                break
    return stages


def check_pythagoras(
    a, b, cfg: ToleranceConfig = DEFAULT_CFG, grid: GridSpec = DEFAULT_GRID
) -> OrthoVerdict:
    """Decide A _|_P B.

    Stages, in order: normalization, polar reduction, selfadjoint obstruction,
    determinant identity (square only), norming-vector test, the
    range-orthogonal certificate, the rank-one certificate, and finally the
    defect grid.  A refutation from any exact stage or a grid violation gives
    CertifiedNotOrthogonal; a certificate gives CertifiedOrthogonal unless
    the grid or a refuter contradicts it (then Inconclusive); with neither,
    the result is ConsistentAtTolerance.  Whenever the grid shows a
    violation, ``details["lambda_witness"]`` holds the worst sampled lambda.
    """
    a1, b1, na, nb = normalize_pair(a, b, cfg)
    stages = _pipeline(a1, b1, cfg)
    profile = defect_profile(a1, b1, cfg=cfg, grid=grid)
    details = {
        "scale_a": na,
        "scale_b": nb,
        "stages": {s.name: s.verdict.status.value for s in stages},
        "seed": cfg.rng_seed,
    }

    worst = profile.worst_violation()
    if worst is not None:
        details["lambda_witness"] = worst[0]
        details["lambda_witness_defect"] = worst[1]

    refuters = [s for s in stages if s.verdict.status == Status.CERTIFIED_NOT_ORTHOGONAL]
    certs = [s for s in stages if s.verdict.status == Status.CERTIFIED_ORTHOGONAL]

    if refuters and certs:
        return OrthoVerdict(
            Status.INCONCLUSIVE,
            Reason.CONTRADICTION,
            refuters[0].verdict.witness,
            profile,
            {**details, "certificate": certs[0].verdict.reason.value, "refuter": refuters[0].verdict.reason.value},
        )
    if refuters:
        first = refuters[0].verdict
        return OrthoVerdict(
            Status.CERTIFIED_NOT_ORTHOGONAL,
            first.reason,
            first.witness,
            profile,
            {**details, **first.details, "stage": refuters[0].name},
        )
    if certs:
        first = certs[0].verdict
        if worst is not None:
            return OrthoVerdict(
                Status.INCONCLUSIVE,
                Reason.CONTRADICTION,
                worst[0],
                profile,
                {**details, "certificate": first.reason.value, "grid_defect": worst[1]},
            )
        return OrthoVerdict(
            Status.CERTIFIED_ORTHOGONAL,
            first.reason,
            first.witness,
            profile,
            {**details, **first.details, "stage": certs[0].name},
        )
    if worst is not None:
        return OrthoVerdict(
            Status.CERTIFIED_NOT_ORTHOGONAL, Reason.GRID_DEFECT, worst[0], profile, {**details, "defect": worst[1]}
        )
    return OrthoVerdict(Status.CONSISTENT_AT_TOLERANCE, Reason.GRID_CONSISTENT, None, profile, details)


def find_common_kernel(a, b, cfg: ToleranceConfig = DEFAULT_CFG) -> np.ndarray:
    """Unit vector in ker A ∩ ker B for selfadjoint A and positive B.

    Guaranteed to exist when det(A + lam B) vanishes identically; raises
    :class:`NotFound` if the numerical kernels do not meet.
    """
    from .core_linalg import subspace_intersection
    from .errors import NotFound

    a, b = as_matrix(a), as_matrix(b)
    scale_a = max(operator_norm(a, cfg), cfg.abs_tol)
    scale_b = max(operator_norm(b, cfg), cfg.abs_tol)
    ker_a = eigenspace(hermitize(a) / scale_a, 0.0, np.sqrt(cfg.abs_tol), cfg)
    ker_b = eigenspace(hermitize(b) / scale_b, 0.0, np.sqrt(cfg.abs_tol), cfg)
    common = subspace_intersection([ker_a, ker_b], cfg=cfg)
    if common.shape[1] == 0:
        raise NotFound("ker A and ker B intersect trivially")
    return common[:, 0]


def verdict_statuses(pairs: Sequence[tuple[np.ndarray, np.ndarray]], cfg: ToleranceConfig = DEFAULT_CFG) -> list[Status]:
    return [check_pythagoras(a, b, cfg).status for a, b in pairs]
