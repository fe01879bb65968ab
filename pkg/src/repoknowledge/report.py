"""The canonical JSON report consumed by the API clients, CLI, and web UI.

Serialization is byte-reproducible: keys are emitted in sorted order with
fixed separators, and expertise/importance values are rounded to 5 decimal
places at build time. The same builder runs in the service and in the CLI,
so both produce identical bytes for identical inputs.
"""

from __future__ import annotations

import json
from typing import Any

from .analysis import RepositoryVersion
from .config import AnalysisConfig
from .mining import MiningResult
from .truckfactor import KnowledgeNode

__all__ = [
    "SCHEMA_VERSION",
    "build_report",
    "canonical_json",
    "facts_document",
]

SCHEMA_VERSION = "1"
_PLACES = 5


def _round(value: float) -> float:
    return round(value, _PLACES)


def _node_block(node: KnowledgeNode) -> dict[str, Any]:
    return {
        "name": node.name,
        "kind": node.kind,
        "fileCount": node.file_count,
        "truckFactor": {
            "value": node.truck_factor.value,
            "removedDevelopers": list(node.truck_factor.removed_developers),
        },
        "tfDevelopers": [
            {
                "id": dev.developer_id,
                "name": dev.name,
                "email": dev.email,
                "authoredFileCount": dev.authored_file_count,
                "authoredFiles": list(dev.authored_files),
                "active": dev.active,
            }
            for dev in node.tf_developers
        ],
        "topFiles": [
            {
                "path": top.path,
                "importance": _round(top.importance_score),
                "activeAuthors": top.active_author_count,
            }
            for top in node.top_files
        ],
        "children": [_node_block(child) for child in node.children],
    }


def _config_block(config: AnalysisConfig) -> dict[str, Any]:
    return {
        "expertThreshold": config.expert_threshold,
        "coefficients": {
            "intercept": config.coefficients.intercept,
            "adds": config.coefficients.adds,
            "firstAuthorship": config.coefficients.first_authorship,
            "numDays": config.coefficients.num_days,
            "size": config.coefficients.size,
        },
        "excludes": list(config.excludes),
        "topFilesLimit": config.top_files_limit,
        "aliasOverrides": {alias: canon for alias, canon in config.alias_overrides},
    }


def build_report(version: RepositoryVersion) -> dict[str, Any]:
    """Project an analysis result onto the versioned report document."""
    return {
        "schemaVersion": SCHEMA_VERSION,
        "repository": {"url": version.repo_url, "branch": version.branch},
        "summary": {
            "headCommit": version.summary.head_commit,
            "referenceTs": version.summary.reference_ts,
            "developers": version.summary.developer_count,
            "commits": version.summary.commit_count,
            "files": version.summary.file_count,
            "truckFactor": version.root.truck_factor.value,
        },
        "tree": _node_block(version.root),
        "developers": [
            {
                "id": identity.canonical_id,
                "name": identity.display_name,
                "email": identity.email,
                "active": active,
            }
            for identity, active in version.developers
        ],
        "config": _config_block(version.config),
    }


def canonical_json(document: dict[str, Any]) -> str:
    """Stable-key, fixed-separator serialization (byte-reproducible)."""
    return json.dumps(document, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False) + "\n"


def facts_document(mined: MiningResult) -> dict[str, Any]:
    """Intermediate mining facts as a JSON document (same conventions as the report)."""
    return {
        "schemaVersion": SCHEMA_VERSION,
        "summary": {
            "headCommit": mined.summary.head_commit,
            "referenceTs": mined.summary.reference_ts,
            "developers": mined.summary.developer_count,
            "commits": mined.summary.commit_count,
            "files": mined.summary.file_count,
        },
        "developers": [
            {
                "id": identity.canonical_id,
                "name": identity.display_name,
                "email": identity.email,
                "aliases": sorted(list(pair) for pair in identity.aliases),
            }
            for identity in sorted(mined.identities, key=lambda i: i.canonical_id)
        ],
        "files": [
            {
                "path": record.path,
                "loc": record.loc,
                "creatorId": record.creator_id,
                "renamedFrom": list(record.renamed_from),
            }
            for record in mined.files
        ],
        "facts": [
            {
                "developerId": fact.developer_id,
                "path": fact.path,
                "adds": fact.adds,
                "firstAuthorship": fact.first_authorship,
                "lastCommitTs": fact.last_commit_ts,
            }
            for fact in mined.facts
        ],
    }
