"""Greedy truck-factor estimation and the per-directory knowledge tree.

The estimator removes, one at a time, the developer who is expert on the most
files, until at most half of the files still have a surviving expert. The
number of removals is the truck factor. Ties are broken by total expertise
over the node's files, then by canonical id, which makes the removal order a
total (hence reproducible) order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .doe import FileKnowledge
from .errors import DomainError, NoExpertsLeft
from .identities import IdentityMap
from .mining import ContributionFact

__all__ = [
    "ACTIVITY_WINDOW_DAYS",
    "KnowledgeNode",
    "TfDeveloper",
    "TopFile",
    "TruckFactorResult",
    "build_knowledge_tree",
    "compute_truck_factor",
    "coverage",
    "is_active",
    "select_top_author",
]

SECONDS_PER_DAY = 86400
ACTIVITY_WINDOW_DAYS = 365
DEFAULT_TOP_FILES_LIMIT = 50


@dataclass(frozen=True)
class TruckFactorResult:
    value: int
    removed_developers: tuple[str, ...]
    coverage_trace: tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class TfDeveloper:
    developer_id: str
    name: str
    email: str
    authored_file_count: int
    authored_files: tuple[str, ...]
    active: bool


@dataclass(frozen=True)
class TopFile:
    path: str
    importance_score: float
    active_author_count: int


@dataclass
class KnowledgeNode:
    name: str
    kind: str  # "directory" | "file"
    children: list["KnowledgeNode"]
    file_count: int
    truck_factor: TruckFactorResult
    tf_developers: list[TfDeveloper]
    top_files: list[TopFile]


def coverage(files: list[FileKnowledge], removed: set[str]) -> float:
    """Fraction of files that still have at least one non-removed expert."""
    if not files:
        raise DomainError("coverage over an empty file set is undefined")
    surviving = sum(1 for f in files if f.experts - removed)
    return surviving / len(files)


def _doe_sums(files: list[FileKnowledge]) -> dict[str, float]:
    per_dev: dict[str, list[float]] = {}
    for f in files:
        for entry in f.entries:
            per_dev.setdefault(entry.developer_id, []).append(entry.doe)
    return {dev: math.fsum(values) for dev, values in per_dev.items()}


def select_top_author(files: list[FileKnowledge], removed: set[str]) -> str:
    """The non-removed developer who is expert on the most files.

    Ties fall back to the larger expertise sum over the node's files, then to
    the lexicographically smaller canonical id.
    """
    counts: dict[str, int] = {}
    for f in files:
        for dev in f.experts:
            if dev not in removed:
                counts[dev] = counts.get(dev, 0) + 1
    if not counts:
        raise NoExpertsLeft("every expert has already been removed")
    doe_sums = _doe_sums(files)
    return min(counts, key=lambda d: (-counts[d], -doe_sums.get(d, 0.0), d))


def compute_truck_factor(files: list[FileKnowledge]) -> TruckFactorResult:
    """Run the greedy removal loop and keep the full coverage trace.

    The trace has one entry per coverage evaluation; when the expert pool is
    exhausted before coverage drops, the final (zero) coverage is appended so
    the trace always ends at or below one half.
    """
    if not files:
        raise DomainError("truck factor over an empty file set is undefined")
    removed: list[str] = []
    removed_set: set[str] = set()
    trace: list[tuple[int, float]] = []
    all_experts = set().union(*(f.experts for f in files))
    while all_experts - removed_set:
        cov = coverage(files, removed_set)
        trace.append((len(removed), cov))
        if cov <= 0.5:
            break
        top = select_top_author(files, removed_set)
        removed.append(top)
        removed_set.add(top)
    else:
        trace.append((len(removed), coverage(files, removed_set)))
    return TruckFactorResult(
        value=len(removed),
        removed_developers=tuple(removed),
        coverage_trace=tuple(trace),
    )


def is_active(
    developer_id: str,
    facts: list[ContributionFact],
    reference_ts: int,
    window_days: int = ACTIVITY_WINDOW_DAYS,
) -> bool:
    """True iff the developer touched any analyzed file within the window.

    The window is measured against the analyzed head commit's author date and
    is inclusive at exactly ``window_days`` days.
    """
    own = [f.last_commit_ts for f in facts if f.developer_id == developer_id]
    if not own:
        raise DomainError(f"developer {developer_id} has no contribution facts")
    return max(own) >= reference_ts - window_days * SECONDS_PER_DAY


def activity_flags(
    facts: list[ContributionFact], reference_ts: int
) -> dict[str, bool]:
    """Active flag for every developer that has at least one fact."""
    last: dict[str, int] = {}
    for fact in facts:
        last[fact.developer_id] = max(
            last.get(fact.developer_id, 0), fact.last_commit_ts
        )
    cutoff = reference_ts - ACTIVITY_WINDOW_DAYS * SECONDS_PER_DAY
    return {dev: ts >= cutoff for dev, ts in last.items()}


@dataclass
class _TreeScaffold:
    name: str
    directories: dict[str, "_TreeScaffold"] = field(default_factory=dict)
    files: list[FileKnowledge] = field(default_factory=list)


def build_knowledge_tree(
    files: list[FileKnowledge],
    identities: IdentityMap,
    facts: list[ContributionFact],
    reference_ts: int,
    top_files_limit: int = DEFAULT_TOP_FILES_LIMIT,
) -> KnowledgeNode:
    """Directory tree over the analyzed files, a truck factor at every node.

    Every node's truck factor is computed over exactly the files of its
    subtree; a file node is a one-file set, so its value equals its expert
    count. Developers listed on a node are the removed set of that node's
    run, ordered for display by authored-file count.
    """
    if not files:
        raise DomainError("cannot build a knowledge tree without files")
    active = activity_flags(facts, reference_ts)

    root = _TreeScaffold(name=".")
    for knowledge in sorted(files, key=lambda f: f.path):
        parts = knowledge.path.split("/")
        cursor = root
        for part in parts[:-1]:
            cursor = cursor.directories.setdefault(part, _TreeScaffold(name=part))
        cursor.files.append(knowledge)

    return _build_node(root, "directory", identities, active, top_files_limit)


def _subtree_files(scaffold: _TreeScaffold) -> list[FileKnowledge]:
    collected = list(scaffold.files)
    for child in scaffold.directories.values():
        collected.extend(_subtree_files(child))
    return collected


def _build_node(
    scaffold: _TreeScaffold,
    kind: str,
    identities: IdentityMap,
    active: dict[str, bool],
    top_files_limit: int,
) -> KnowledgeNode:
    subtree = _subtree_files(scaffold)
    children = [
        _build_node(scaffold.directories[name], "directory", identities, active,
                    top_files_limit)
        for name in sorted(scaffold.directories)
    ] + [
        _file_node(knowledge, identities, active)
        for knowledge in sorted(scaffold.files, key=lambda f: f.path)
    ]
    result = compute_truck_factor(subtree)
    return KnowledgeNode(
        name=scaffold.name,
        kind=kind,
        children=children,
        file_count=len(subtree),
        truck_factor=result,
        tf_developers=_tf_developers(result, subtree, identities, active),
        top_files=_top_files(subtree, active, top_files_limit),
    )


def _file_node(
    knowledge: FileKnowledge,
    identities: IdentityMap,
    active: dict[str, bool],
) -> KnowledgeNode:
    result = compute_truck_factor([knowledge])
    return KnowledgeNode(
        name=knowledge.path.rsplit("/", 1)[-1],
        kind="file",
        children=[],
        file_count=1,
        truck_factor=result,
        tf_developers=_tf_developers(result, [knowledge], identities, active),
        top_files=_top_files([knowledge], active, limit=1),
    )


def _tf_developers(
    result: TruckFactorResult,
    subtree: list[FileKnowledge],
    identities: IdentityMap,
    active: dict[str, bool],
) -> list[TfDeveloper]:
    developers = []
    for dev in result.removed_developers:
        authored = tuple(sorted(f.path for f in subtree if dev in f.experts))
        identity = identities.get(dev)
        developers.append(
            TfDeveloper(
                developer_id=dev,
                name=identity.display_name,
                email=identity.email,
                authored_file_count=len(authored),
                authored_files=authored,
                active=active.get(dev, False),
            )
        )
    developers.sort(key=lambda d: (-d.authored_file_count, d.developer_id))
    return developers


def _top_files(
    subtree: list[FileKnowledge],
    active: dict[str, bool],
    limit: int,
) -> list[TopFile]:
    ranked = sorted(subtree, key=lambda f: (-f.importance_score, f.path))
    return [
        TopFile(
            path=f.path,
            importance_score=f.importance_score,
            active_author_count=sum(
                1 for e in f.entries if active.get(e.developer_id, False)
            ),
        )
        for f in ranked[:limit]
    ]
