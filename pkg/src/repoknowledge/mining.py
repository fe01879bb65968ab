"""Cloning and raw history extraction from a git repository.

Everything here is model-agnostic: the output is the file set at the analyzed
version, per (developer, file) contribution facts, and summary counts. Facts
are attributed by walking every commit's diff against its first parent in
topological order (newest first), following renames so that lines added under
an old path count toward the file's current name.

Attribution rules:
  * merge commits contribute nothing (their lines were attributed where they
    were originally committed);
  * binary files, empty files, and paths matching the exclusion globs are not
    analyzed, and commits touching them contribute nothing;
  * a commit that only deletes lines still counts as touching the file.

History is read with the system ``git`` executable; parsing uses control
characters as field separators, so any commit metadata survives except the
pathological case of tabs or newlines inside file names.
"""

from __future__ import annotations

import fnmatch
import logging
import os
import re
import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import (
    CloneFailure,
    CorruptHistory,
    MiningError,
    UnknownBranch,
    UnreachableRemote,
    ValidationError,
)
from .identities import IdentityMap, resolve_identities

__all__ = [
    "Checkout",
    "ContributionFact",
    "FileRecord",
    "MiningOptions",
    "MiningResult",
    "RepoSource",
    "RepoSummary",
    "clone_repository",
    "collect_author_pairs",
    "enumerate_files",
    "extract_contribution_facts",
    "mine_checkout",
    "summarize",
]

log = logging.getLogger(__name__)

_HEADER_MARK = "\x01"
_FIELD_SEP = "\x02"
_BINARY_SNIFF_BYTES = 8000
_FILE_MODES = {"100644", "100755"}  # plain blobs; skips symlinks and submodules


@dataclass(frozen=True)
class RepoSource:
    """What to analyze: a clone URL or local path, optionally a branch."""

    url: str
    branch: str | None = None

    def __post_init__(self) -> None:
        if not self.url or not self.url.strip():
            raise ValidationError("repository URL must be non-empty")


@dataclass(frozen=True)
class Checkout:
    """A local working tree produced by :func:`clone_repository`."""

    path: Path
    head_commit: str


@dataclass(frozen=True)
class FileRecord:
    """One analyzed file at the analyzed version."""

    path: str
    loc: int
    creator_id: str
    renamed_from: tuple[str, ...] = ()


@dataclass(frozen=True)
class ContributionFact:
    """Raw history facts for one developer on one analyzed file."""

    developer_id: str
    path: str
    adds: int
    first_authorship: bool
    last_commit_ts: int


@dataclass(frozen=True)
class RepoSummary:
    head_commit: str
    reference_ts: int
    developer_count: int
    commit_count: int
    file_count: int


@dataclass(frozen=True)
class MiningOptions:
    """Filters and knobs for history extraction."""

    excludes: tuple[str, ...] = ()
    rename_similarity: int = 50  # percent, passed to git's rename detection
    alias_overrides: Mapping[str, str] | None = None

    def is_excluded(self, path: str) -> bool:
        return any(fnmatch.fnmatch(path, pattern) for pattern in self.excludes)


@dataclass
class MiningResult:
    """Everything one pass over a checkout produces."""

    identities: IdentityMap
    files: list[FileRecord]
    facts: list[ContributionFact]
    summary: RepoSummary

    def facts_for(self, path: str) -> list[ContributionFact]:
        return [f for f in self.facts if f.path == path]


def _git_env() -> dict[str, str]:
    # Hermetic: user/system git config must not influence diffs or output.
    env = dict(os.environ)
    env["GIT_CONFIG_GLOBAL"] = os.devnull
    env["GIT_CONFIG_SYSTEM"] = os.devnull
    env["LC_ALL"] = "C"
    return env


def _run_git(args: Sequence[str], cwd: Path | None = None) -> str:
    # quotepath off: log output must name files exactly like ls-tree -z does.
    result = subprocess.run(
        ["git", "-c", "core.quotepath=false", *args],
        cwd=cwd,
        env=_git_env(),
        capture_output=True,
        text=True,
    )
    if result.returncode != 0:
        raise CorruptHistory(
            f"git {' '.join(args[:2])} failed: {result.stderr.strip()[:500]}"
        )
    return result.stdout


def clone_repository(source: RepoSource, workdir: str | Path) -> Checkout:
    """Clone ``source`` into ``workdir`` and return a handle at the branch tip.

    The full history is always fetched; shallow sources are refused because
    first-authorship and line attribution need every commit.
    """
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    dest = workdir / "checkout"
    cmd = ["clone", "--quiet"]
    if source.branch:
        cmd += ["--branch", source.branch]
    cmd += ["--", source.url, str(dest)]
    result = subprocess.run(
        ["git", *cmd], env=_git_env(), capture_output=True, text=True
    )
    if result.returncode != 0:
        raise _classify_clone_failure(source, result.stderr)

    probe = subprocess.run(
        ["git", "rev-parse", "--is-shallow-repository"],
        cwd=dest, env=_git_env(), capture_output=True, text=True,
    )
    if probe.stdout.strip() == "true":
        raise MiningError(
            "shallow clone: full history is required for attribution"
        )
    head = subprocess.run(
        ["git", "rev-parse", "HEAD"],
        cwd=dest, env=_git_env(), capture_output=True, text=True,
    )
    if head.returncode != 0:
        raise MiningError(f"repository has no commits: {source.url}")
    return Checkout(path=dest, head_commit=head.stdout.strip())


def _classify_clone_failure(source: RepoSource, stderr: str) -> MiningError:
    if "is shallow" in stderr or "shallow" in stderr.lower():
        return MiningError(
            f"refusing shallow source {source.url}: full history required"
        )
    probe = subprocess.run(
        ["git", "ls-remote", "--heads", "--", source.url],
        env=_git_env(), capture_output=True, text=True, timeout=120,
    )
    if probe.returncode != 0:
        return UnreachableRemote(
            f"cannot reach repository {source.url}: {probe.stderr.strip()[:300]}"
        )
    if source.branch is not None:
        heads = {
            line.split("\t", 1)[1].removeprefix("refs/heads/")
            for line in probe.stdout.splitlines()
            if "\t" in line
        }
        if source.branch not in heads:
            return UnknownBranch(
                f"branch {source.branch!r} does not exist in {source.url}"
            )
    return CloneFailure(f"clone of {source.url} failed: {stderr.strip()[:500]}")


# --- history walking ---------------------------------------------------------


@dataclass
class _CommitEntry:
    sha: str
    parents: tuple[str, ...]
    author_name: str
    author_email: str
    author_ts: int
    changes: list[tuple[str, str, str | None, int]] = field(default_factory=list)
    # changes: (status_letter, path, old_path_for_renames, lines_added)

    @property
    def is_merge(self) -> bool:
        return len(self.parents) > 1


_BRACE_RENAME = re.compile(r"^(.*)\{(.*) => (.*)\}(.*)$")


def _split_numstat_path(spec: str) -> tuple[str, str | None]:
    """Decode a numstat path spec into (current_path, previous_path)."""
    match = _BRACE_RENAME.match(spec)
    if match:
        pre, old_mid, new_mid, post = match.groups()
        old = (pre + old_mid + post).replace("//", "/")
        new = (pre + new_mid + post).replace("//", "/")
        return new, old
    if " => " in spec:
        old, new = spec.split(" => ", 1)
        return new, old
    return spec, None


def _walk_history(checkout: Checkout, options: MiningOptions) -> list[_CommitEntry]:
    """All commits reachable from HEAD, newest first in topological order.

    Raw status lines supply add/rename/delete events; numstat lines supply
    added-line counts. Merge commits list no changes (git shows no diff for
    them without -m/-c), which is exactly the attribution rule we want.
    """
    fmt = _HEADER_MARK + _FIELD_SEP.join(["%H", "%P", "%an", "%ae", "%at"])
    out = _run_git(
        [
            "log",
            "--topo-order",
            "--raw",
            "--numstat",
            "--no-renames" if options.rename_similarity <= 0
            else f"--find-renames={options.rename_similarity}%",
            f"--format={fmt}",
            "HEAD",
        ],
        cwd=checkout.path,
    )
    commits: list[_CommitEntry] = []
    raw_changes: dict[str, tuple[str, str | None]] = {}  # path -> (status, old)
    for line in out.splitlines():
        if line.startswith(_HEADER_MARK):
            sha, parents, name, email, ts = line[1:].split(_FIELD_SEP)
            commits.append(
                _CommitEntry(
                    sha=sha,
                    parents=tuple(parents.split()) if parents else (),
                    author_name=name,
                    author_email=email,
                    author_ts=int(ts),
                )
            )
            raw_changes = {}
        elif line.startswith(":"):
            # :100644 100644 abc123 def456 R100\told\tnew
            meta, *paths = line.split("\t")
            status = meta.split(" ")[-1][0]
            if status in ("R", "C") and len(paths) == 2:
                raw_changes[paths[1]] = (status, paths[0])
            elif paths:
                raw_changes[paths[0]] = (status, None)
        elif line[:1].isdigit() or line[:1] == "-":
            parts = line.split("\t", 2)
            if len(parts) != 3:
                continue
            added_str, _, spec = parts
            path, old = _split_numstat_path(spec)
            added = 0 if added_str == "-" else int(added_str)
            status, raw_old = raw_changes.get(path, ("M", None))
            commits[-1].changes.append((status, path, raw_old or old, added))
    if not commits:
        raise MiningError("repository has no commits")
    return commits


@dataclass
class _Lineage:
    """Per analyzed file: accumulated attribution while walking backward."""

    creator: str | None = None
    prior_names: list[str] = field(default_factory=list)
    adds: dict[str, int] = field(default_factory=dict)
    last_ts: dict[str, int] = field(default_factory=dict)
    oldest_toucher: str | None = None  # fallback creator when no add event exists


def _list_head_files(checkout: Checkout) -> list[str]:
    out = _run_git(["ls-tree", "-r", "-z", "HEAD"], cwd=checkout.path)
    paths = []
    for entry in out.split("\0"):
        if not entry:
            continue
        meta, path = entry.split("\t", 1)
        mode = meta.split(" ", 1)[0]
        if mode in _FILE_MODES:
            paths.append(path)
    return paths


def _count_loc(data: bytes) -> int:
    loc = data.count(b"\n")
    if data and not data.endswith(b"\n"):
        loc += 1
    return loc


def _admit_file(checkout: Checkout, path: str, options: MiningOptions) -> int | None:
    """LOC of an analyzable file, or None when it is filtered out."""
    if options.is_excluded(path):
        return None
    try:
        data = (checkout.path / path).read_bytes()
    except OSError as exc:
        log.warning("skipping unreadable file %s: %s", path, exc)
        return None
    if not data:
        return None
    if b"\0" in data[:_BINARY_SNIFF_BYTES]:
        return None
    return _count_loc(data)


def collect_author_pairs(checkout: Checkout) -> list[tuple[str, str]]:
    """Raw (name, email) author pairs, one per commit, oldest first."""
    out = _run_git(
        ["log", "--reverse", f"--format=%an{_FIELD_SEP}%ae", "HEAD"],
        cwd=checkout.path,
    )
    pairs = []
    for line in out.splitlines():
        if _FIELD_SEP in line:
            name, email = line.split(_FIELD_SEP, 1)
            pairs.append((name, email))
    return pairs


def mine_checkout(
    checkout: Checkout,
    options: MiningOptions = MiningOptions(),
    identities: IdentityMap | None = None,
) -> MiningResult:
    """One deterministic pass: files, contribution facts, and summary counts."""
    commits = _walk_history(checkout, options)
    head = commits[0]
    if head.sha != checkout.head_commit:
        raise CorruptHistory(
            f"walk started at {head.sha}, expected {checkout.head_commit}"
        )
    reference_ts = head.author_ts

    if identities is None:
        pairs = [(c.author_name, c.author_email) for c in reversed(commits)]
        identities = resolve_identities(pairs, options.alias_overrides)

    head_files = _list_head_files(checkout)
    loc_by_path: dict[str, int] = {}
    for path in head_files:
        loc = _admit_file(checkout, path, options)
        if loc is not None:
            loc_by_path[path] = loc
    if not loc_by_path:
        raise MiningError("no analyzable files at the requested version")

    # Walking newest -> oldest: name_map sends the path a file had at this
    # point in history to its name at HEAD. An add event ends the lineage
    # (older homonymous paths belong to dead incarnations).
    name_map: dict[str, str] = {p: p for p in head_files}
    lineages: dict[str, _Lineage] = {p: _Lineage() for p in loc_by_path}

    for commit in commits:
        if commit.is_merge:
            continue
        author = identities.resolve(commit.author_name, commit.author_email)
        for status, path, old, added in commit.changes:
            head_name = name_map.get(path)
            if head_name is not None and head_name in lineages:
                lineage = lineages[head_name]
                lineage.adds[author] = lineage.adds.get(author, 0) + added
                lineage.last_ts[author] = max(
                    lineage.last_ts.get(author, 0), commit.author_ts
                )
                lineage.oldest_toucher = author
                if status == "A":
                    lineage.creator = author
            if status == "A" or status == "C":
                name_map.pop(path, None)
            elif status == "R" and old is not None:
                if head_name is not None:
                    name_map[old] = head_name
                    if head_name in lineages:
                        lineages[head_name].prior_names.append(old)
                name_map.pop(path, None)
            elif status == "D":
                name_map.pop(path, None)

    files: list[FileRecord] = []
    facts: list[ContributionFact] = []
    head_author = identities.resolve(head.author_name, head.author_email)
    for path in sorted(loc_by_path):
        lineage = lineages[path]
        creator = lineage.creator or lineage.oldest_toucher
        if creator is None:
            # File introduced with no non-merge history (e.g. only ever
            # touched by merge commits): attribute it to the head author.
            creator = head_author
            lineage.adds[creator] = 0
            lineage.last_ts[creator] = reference_ts
        files.append(
            FileRecord(
                path=path,
                loc=loc_by_path[path],
                creator_id=creator,
                renamed_from=tuple(lineage.prior_names),
            )
        )
        for dev in sorted(lineage.adds):
            facts.append(
                ContributionFact(
                    developer_id=dev,
                    path=path,
                    adds=lineage.adds[dev],
                    first_authorship=dev == creator,
                    last_commit_ts=min(lineage.last_ts[dev], reference_ts),
                )
            )

    summary = RepoSummary(
        head_commit=head.sha,
        reference_ts=reference_ts,
        developer_count=len({f.developer_id for f in facts}),
        commit_count=len(commits),
        file_count=len(files),
    )
    return MiningResult(
        identities=identities, files=files, facts=facts, summary=summary
    )


def enumerate_files(
    checkout: Checkout, options: MiningOptions = MiningOptions()
) -> list[FileRecord]:
    """Analyzable files at the analyzed version, with creators resolved."""
    return mine_checkout(checkout, options).files


def extract_contribution_facts(
    checkout: Checkout,
    identities: IdentityMap,
    options: MiningOptions = MiningOptions(),
) -> list[ContributionFact]:
    """Per (developer, file) facts using a caller-supplied identity map."""
    return mine_checkout(checkout, options, identities=identities).facts


def summarize(
    checkout: Checkout,
    identities: IdentityMap,
    files: Iterable[FileRecord],
    options: MiningOptions = MiningOptions(),
) -> RepoSummary:
    """Summary counts consistent with the given file set."""
    result = mine_checkout(checkout, options, identities=identities)
    file_count = sum(1 for _ in files)
    if file_count != result.summary.file_count:
        raise MiningError(
            "file set disagrees with checkout: "
            f"{file_count} given, {result.summary.file_count} mined"
        )
    return result.summary
