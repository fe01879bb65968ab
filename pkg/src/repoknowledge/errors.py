"""Exception types shared across the package."""


class RepoKnowledgeError(Exception):
    """Base class for all errors raised by this package."""


class MiningError(RepoKnowledgeError):
    """History extraction failed (empty repo, shallow clone, no analyzable files)."""


class UnreachableRemote(MiningError):
    """The clone URL could not be reached or is not a git repository."""


class UnknownBranch(MiningError):
    """The requested branch does not exist in the remote."""


class CloneFailure(MiningError):
    """Clone failed for reasons other than reachability or branch (disk, permissions)."""


class CorruptHistory(MiningError):
    """Commit objects could not be read while walking history."""


class DomainError(RepoKnowledgeError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class NoExpertsLeft(RepoKnowledgeError):
    """Top-author selection was asked to pick from an exhausted expert pool."""


class ValidationError(RepoKnowledgeError, ValueError):
    """A caller-supplied value fails validation (empty URL, short credential)."""


class AuthError(RepoKnowledgeError):
    """Missing/unknown user or an invalid or expired session token."""


class InvalidCredentials(AuthError):
    """Login rejected: unknown username or wrong credential."""


class DuplicateUsername(RepoKnowledgeError):
    """Registration rejected: the username is already taken."""


class NotFound(RepoKnowledgeError):
    """The requested record does not exist."""


class NotReady(RepoKnowledgeError):
    """The analysis exists but has not finished yet."""
