"""Synchronous end-to-end analysis: clone, mine, score, build the tree.

This is the engine shared by the CLI (which runs it inline) and the job
pipeline (which runs it on worker threads and persists stage transitions via
the ``on_stage`` callback).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .config import AnalysisConfig
from .doe import FileKnowledge, score_file
from .identities import DeveloperIdentity
from .mining import (
    Checkout,
    ContributionFact,
    MiningOptions,
    MiningResult,
    RepoSource,
    RepoSummary,
    clone_repository,
    mine_checkout,
)
from .truckfactor import KnowledgeNode, activity_flags, build_knowledge_tree

__all__ = ["AnalysisPhase", "RepositoryVersion", "analyze_checkout", "run_analysis"]

# Phase names reported just before each phase starts.
PHASE_CLONING = "Cloning"
PHASE_EXTRACTING_HISTORY = "ExtractingHistory"
PHASE_COMPUTING_DOE = "ComputingDoe"
PHASE_COMPUTING_TRUCK_FACTOR = "ComputingTruckFactor"

AnalysisPhase = str
StageCallback = Callable[[AnalysisPhase], None]


@dataclass
class RepositoryVersion:
    """Self-contained result of one analysis; rendering needs no re-mining."""

    repo_url: str
    branch: str | None
    summary: RepoSummary
    root: KnowledgeNode
    developers: list[tuple[DeveloperIdentity, bool]]  # identity, active flag
    facts: list[ContributionFact]
    knowledge: list[FileKnowledge]
    config: AnalysisConfig


def _mining_options(config: AnalysisConfig) -> MiningOptions:
    return MiningOptions(
        excludes=config.excludes,
        alias_overrides=config.overrides_mapping or None,
    )


def analyze_checkout(
    checkout: Checkout,
    source: RepoSource,
    config: AnalysisConfig = AnalysisConfig(),
    on_stage: StageCallback | None = None,
) -> RepositoryVersion:
    """Analyze an existing checkout (mining through tree construction)."""
    notify = on_stage or (lambda phase: None)

    notify(PHASE_EXTRACTING_HISTORY)
    mined: MiningResult = mine_checkout(checkout, _mining_options(config))

    notify(PHASE_COMPUTING_DOE)
    facts_by_path: dict[str, list[ContributionFact]] = {}
    for fact in mined.facts:
        facts_by_path.setdefault(fact.path, []).append(fact)
    knowledge = [
        score_file(
            record,
            facts_by_path[record.path],
            mined.summary.reference_ts,
            coeffs=config.coefficients,
            threshold=config.expert_threshold,
        )
        for record in mined.files
    ]

    notify(PHASE_COMPUTING_TRUCK_FACTOR)
    root = build_knowledge_tree(
        knowledge,
        mined.identities,
        mined.facts,
        mined.summary.reference_ts,
        top_files_limit=config.top_files_limit,
    )

    active = activity_flags(mined.facts, mined.summary.reference_ts)
    developers = [
        (identity, active.get(identity.canonical_id, False))
        for identity in sorted(mined.identities, key=lambda i: i.canonical_id)
        if identity.canonical_id in active
    ]
    return RepositoryVersion(
        repo_url=source.url,
        branch=source.branch,
        summary=mined.summary,
        root=root,
        developers=developers,
        facts=mined.facts,
        knowledge=knowledge,
        config=config,
    )


def run_analysis(
    source: RepoSource,
    workdir: str | Path,
    config: AnalysisConfig = AnalysisConfig(),
    on_stage: StageCallback | None = None,
) -> RepositoryVersion:
    """Clone and analyze in one synchronous call."""
    notify = on_stage or (lambda phase: None)
    notify(PHASE_CLONING)
    checkout = clone_repository(source, workdir)
    return analyze_checkout(checkout, source, config, on_stage)
