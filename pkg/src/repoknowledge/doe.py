"""Degree-of-expertise scoring and per-file expert classification.

A developer's expertise on a file is a linear combination of four history
signals: lines added, first authorship, recency of their last touch, and the
file's size. The coefficients were estimated empirically in the literature
and are fixed here; overriding them is possible but recorded in the analysis
configuration so results stay attributable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .mining import ContributionFact, FileRecord

__all__ = [
    "DEFAULT_EXPERT_THRESHOLD",
    "DoeCoefficients",
    "DoeEntry",
    "FileKnowledge",
    "classify_experts",
    "compute_doe",
    "num_days_between",
    "score_file",
]

SECONDS_PER_DAY = 86400

DEFAULT_EXPERT_THRESHOLD = 0.75


@dataclass(frozen=True)
class DoeCoefficients:
    """Coefficients of the expertise model; defaults are the published constants."""

    intercept: float = 5.28223
    adds: float = 0.23173
    first_authorship: float = 0.36151
    num_days: float = 0.19421
    size: float = 0.28761


DEFAULT_COEFFICIENTS = DoeCoefficients()


@dataclass(frozen=True)
class DoeEntry:
    """Expertise of one developer on one file, raw and per-file normalized."""

    developer_id: str
    path: str
    doe: float
    normalized_doe: float


@dataclass
class FileKnowledge:
    """Everything the truck-factor stage needs to know about one file."""

    path: str
    entries: list[DoeEntry]
    experts: set[str]
    importance_score: float
    loc: int = 0


def compute_doe(
    adds: int,
    fa: int | bool,
    num_days: int,
    size: int,
    coeffs: DoeCoefficients = DEFAULT_COEFFICIENTS,
) -> float:
    """Evaluate the expertise model in double precision, natural logarithms.

    The first-authorship term is added last so that toggling ``fa`` changes
    the result by exactly the coefficient (bit-for-bit).
    """
    if size < 1:
        raise DomainError(f"file size must be >= 1, got {size}")
    if adds < 0:
        raise DomainError(f"adds must be >= 0, got {adds}")
    if num_days < 0:
        raise DomainError(f"num_days must be >= 0, got {num_days}")
    base = (
        coeffs.intercept
        + coeffs.adds * math.log1p(adds)
        - coeffs.num_days * math.log1p(num_days)
        - coeffs.size * math.log(size)
    )
    return base + (coeffs.first_authorship if fa else 0.0)


def num_days_between(reference_ts: int, last_commit_ts: int) -> int:
    """Whole days elapsed from a developer's last touch to the reference commit."""
    return (reference_ts - last_commit_ts) // SECONDS_PER_DAY


def classify_experts(entries: list[DoeEntry], threshold: float) -> set[str]:
    """Developers whose normalized expertise clears the threshold.

    Entries with non-positive raw values normalize to zero and normally never
    qualify; when every entry is non-positive the developer(s) holding the
    file maximum qualify anyway, so a contributed file always has an expert.
    """
    if not entries:
        raise DomainError("cannot classify experts of a file without entries")
    if not 0.0 < threshold <= 1.0:
        raise DomainError(f"expert threshold must be in (0, 1], got {threshold}")
    experts = {e.developer_id for e in entries if e.normalized_doe >= threshold}
    if not experts:
        top = max(e.doe for e in entries)
        experts = {e.developer_id for e in entries if e.doe == top}
    return experts


def score_file(
    record: FileRecord,
    facts: list[ContributionFact],
    reference_ts: int,
    coeffs: DoeCoefficients = DEFAULT_COEFFICIENTS,
    threshold: float = DEFAULT_EXPERT_THRESHOLD,
) -> FileKnowledge:
    """Score every contributor of one file and classify its experts.

    Importance is the sum of the raw expertise values of all contributors,
    accumulated with compensated summation.
    """
    if not facts:
        raise DomainError(f"no contribution facts for {record.path}")
    raw: list[tuple[str, float]] = []
    for fact in sorted(facts, key=lambda f: f.developer_id):
        value = compute_doe(
            fact.adds,
            1 if fact.first_authorship else 0,
            num_days_between(reference_ts, fact.last_commit_ts),
            record.loc,
            coeffs,
        )
        raw.append((fact.developer_id, value))

    top = max(value for _, value in raw)
    entries = [
        DoeEntry(
            developer_id=dev,
            path=record.path,
            doe=value,
            normalized_doe=(value / top) if (top > 0.0 and value > 0.0) else 0.0,
        )
        for dev, value in raw
    ]
    return FileKnowledge(
        path=record.path,
        entries=entries,
        experts=classify_experts(entries, threshold),
        importance_score=math.fsum(value for _, value in raw),
        loc=record.loc,
    )
