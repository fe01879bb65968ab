"""Resolution of raw git author (name, email) pairs into canonical developers.

Merging is deliberately conservative: two raw pairs belong to the same
developer iff their emails match after lowercasing, or an explicit alias
override says so. The canonical id of a developer is their canonical
lowercased email, which keeps ids stable across re-runs of the same history.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import ValidationError

__all__ = [
    "DeveloperIdentity",
    "IdentityMap",
    "parse_alias_overrides",
    "resolve_identities",
]


@dataclass(frozen=True)
class DeveloperIdentity:
    """One canonical developer with every raw alias observed in history."""

    canonical_id: str
    display_name: str
    email: str
    aliases: frozenset[tuple[str, str]]


@dataclass
class IdentityMap:
    """Lookup from raw author pairs to canonical developers."""

    identities: dict[str, DeveloperIdentity] = field(default_factory=dict)
    _by_alias: dict[tuple[str, str], str] = field(default_factory=dict)

    def resolve(self, name: str, email: str) -> str:
        """Canonical id for a raw (name, email) pair seen during mining."""
        return self._by_alias[(name, email)]

    def get(self, canonical_id: str) -> DeveloperIdentity:
        return self.identities[canonical_id]

    def __len__(self) -> int:
        return len(self.identities)

    def __iter__(self):
        return iter(self.identities.values())


def parse_alias_overrides(text: str) -> dict[str, str]:
    """Parse an alias override file: one ``canonical_email <- alias_email`` per line.

    Blank lines and ``#`` comments are ignored. Chained rules are allowed
    (a <- b, b <- c); cycles are rejected.
    """
    mapping: dict[str, str] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "<-" not in line:
            raise ValidationError(
                f"alias override line {lineno}: expected 'canonical_email <- alias_email'"
            )
        canonical, alias = (part.strip().lower() for part in line.split("<-", 1))
        if not canonical or not alias:
            raise ValidationError(f"alias override line {lineno}: empty email")
        if alias in mapping and mapping[alias] != canonical:
            raise ValidationError(
                f"alias override line {lineno}: conflicting rule for {alias}"
            )
        mapping[alias] = canonical
    _check_acyclic(mapping)
    return mapping


def load_alias_overrides(path: str | Path) -> dict[str, str]:
    return parse_alias_overrides(Path(path).read_text(encoding="utf-8"))


def _check_acyclic(mapping: Mapping[str, str]) -> None:
    for start in mapping:
        seen = {start}
        cursor = start
        while cursor in mapping:
            cursor = mapping[cursor]
            if cursor in seen:
                raise ValidationError(f"alias override cycle involving {start!r}")
            seen.add(cursor)


def _canonical_email(email: str, overrides: Mapping[str, str]) -> str:
    cursor = email.lower()
    while cursor in overrides:
        cursor = overrides[cursor]
    return cursor


def resolve_identities(
    pairs: Iterable[tuple[str, str]],
    overrides: Mapping[str, str] | None = None,
) -> IdentityMap:
    """Partition raw (name, email) author pairs into canonical developers.

    ``pairs`` may repeat (one entry per authored commit); the multiplicity
    picks the display name (most commits, ties broken lexicographically).
    The result is a pure function of the multiset of pairs plus overrides.
    """
    overrides = overrides or {}
    by_canonical: dict[str, set[tuple[str, str]]] = {}
    name_counts: dict[str, Counter[str]] = {}
    for name, email in pairs:
        canonical = _canonical_email(email, overrides)
        by_canonical.setdefault(canonical, set()).add((name, email))
        name_counts.setdefault(canonical, Counter())[name] += 1

    identity_map = IdentityMap()
    for canonical in sorted(by_canonical):
        counts = name_counts[canonical]
        display = min(counts, key=lambda n: (-counts[n], n))
        identity = DeveloperIdentity(
            canonical_id=canonical,
            display_name=display,
            email=canonical,
            aliases=frozenset(by_canonical[canonical]),
        )
        identity_map.identities[canonical] = identity
        for alias in identity.aliases:
            identity_map._by_alias[alias] = canonical
    return identity_map
