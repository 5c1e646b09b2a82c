"""Outcome types shared by the orthogonality checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Status(str, Enum):
    CERTIFIED_ORTHOGONAL = "CertifiedOrthogonal"
    CERTIFIED_NOT_ORTHOGONAL = "CertifiedNotOrthogonal"
    CONSISTENT_AT_TOLERANCE = "ConsistentAtTolerance"
    INCONCLUSIVE = "Inconclusive"
    # only used by verdict fragments of individual stages
    NOT_REFUTED = "NotRefuted"
    NOT_APPLICABLE = "NotApplicable"


class Reason(str, Enum):
    # certificates
    RANGE_ORTHOGONAL_COMMON_NORM = "range-orthogonal pair with a common norming state"
    RANK_ONE_PROJECTION = "rank-one projection conditions hold"
    COLUMN_COMMON_NORMING = "row sum bounded and a common norming vector exists"
    TRIVIAL_ZERO_MEMBER = "family contains the zero operator"
    # refuters
    SELFADJOINT_POSITIVE = "nonzero selfadjoint pair with a positive member"
    DETERMINANT_NOT_ZERO = "det(A + lambda B) is not identically zero"
    NORMING_VECTOR_NOT_ORTHOGONAL = "a norming vector of one member is not orthogonal under the other"
    NO_COMMON_NORMING_STATE = "range-orthogonal pair without a common norming state"
    CORNER_ENTRY_NONZERO = "compression to the range of the projection is nonzero"
    NORM_SPLIT_VIOLATED = "|a|^2 + |b|^2 != 1"
    RANK_ONE_CONDITION_FAILED = "a rank-one moment condition fails"
    OUTSIDE_HALF_BALL = "joint spectrum leaves the unit half-ball"
    HEMISPHERE_NOT_COVERED = "joint spectrum does not cover the hemisphere"
    OUTSIDE_CONE = "a state maps outside the cone"
    ROW_NORM_EXCEEDS_ONE = "||sum C_j C_j*|| exceeds one"
    NO_COMMON_NORMING_VECTOR = "members share no norming vector"
    GRID_DEFECT = "nonzero defect at a sampled lambda"
    # neither
    GRID_CONSISTENT = "defect vanishes on the sample grid"
    CONTRADICTION = "a certificate and a refuter disagree"
    NONE = "no applicable test"


@dataclass
class OrthoVerdict:
    """Result of an orthogonality query.

    ``witness`` is a complex lambda, a vector, a matrix or a dict naming the
    violated algebraic condition; every refutation carries one.
    """

    status: Status
    reason: Reason
    witness: Any = None
    profile: Any = None
    details: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.status in (Status.CERTIFIED_ORTHOGONAL, Status.CERTIFIED_NOT_ORTHOGONAL)

    @property
    def refuted(self) -> bool:
        return self.status == Status.CERTIFIED_NOT_ORTHOGONAL

    def to_dict(self) -> dict:
        out = {
            "status": self.status.value,
            "reason": self.reason.value,
            "witness": self.witness,
            "details": self.details,
        }
        if self.profile is not None:
            out["profile"] = self.profile.summary()
        return out


def refuted(reason: Reason, witness, **details) -> OrthoVerdict:
    return OrthoVerdict(Status.CERTIFIED_NOT_ORTHOGONAL, reason, witness, details=details)


def certified(reason: Reason, witness=None, **details) -> OrthoVerdict:
    return OrthoVerdict(Status.CERTIFIED_ORTHOGONAL, reason, witness, details=details)


def not_refuted(reason: Reason = Reason.NONE, **details) -> OrthoVerdict:
    return OrthoVerdict(Status.NOT_REFUTED, reason, details=details)


def not_applicable(**details) -> OrthoVerdict:
    return OrthoVerdict(Status.NOT_APPLICABLE, Reason.NONE, details=details)
