"""Git history mining, per-developer expertise scoring, and truck factors."""

from .analysis import RepositoryVersion, analyze_checkout, run_analysis
from .config import AnalysisConfig, ServiceConfig, load_config
from .doe import (
    DEFAULT_EXPERT_THRESHOLD,
    DoeCoefficients,
    DoeEntry,
    FileKnowledge,
    classify_experts,
    compute_doe,
    score_file,
)
from .errors import (
    AuthError,
    CloneFailure,
    CorruptHistory,
    DomainError,
    DuplicateUsername,
    InvalidCredentials,
    MiningError,
    NoExpertsLeft,
    NotFound,
    NotReady,
    RepoKnowledgeError,
    UnknownBranch,
    UnreachableRemote,
    ValidationError,
)
from .identities import DeveloperIdentity, IdentityMap, resolve_identities
from .mining import (
    Checkout,
    ContributionFact,
    FileRecord,
    MiningOptions,
    MiningResult,
    RepoSource,
    RepoSummary,
    clone_repository,
    enumerate_files,
    extract_contribution_facts,
    mine_checkout,
    summarize,
)
from .report import build_report, canonical_json, facts_document
from .truckfactor import (
    KnowledgeNode,
    TfDeveloper,
    TopFile,
    TruckFactorResult,
    build_knowledge_tree,
    compute_truck_factor,
    coverage,
    is_active,
    select_top_author,
)

__version__ = "0.1.0"
