"""Kernel error hierarchy. Every error carries a stable machine-readable
code (used verbatim by the protocol layer) plus a human message."""

from __future__ import annotations


class ProofError(Exception):
    code = "proof-error"


# rule application
class SchemaMismatch(ProofError):
    code = "schema-mismatch"


class NoPrincipal(ProofError):
    code = "no-principal"


class AmbiguousPrincipal(ProofError):
    code = "ambiguous-principal"

    def __init__(self, message: str, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class EigenvariableViolation(ProofError):
    code = "eigenvariable-violation"


class CommandMismatch(ProofError):
    code = "command-mismatch"


class SideConditionFailed(ProofError):
    code = "side-condition-failed"


# tree surgery
class NotAHole(ProofError):
    code = "not-a-hole"


class AlreadyHole(ProofError):
    code = "already-hole"


class CannotDetachRoot(ProofError):
    code = "cannot-detach-root"


class GoalMismatch(ProofError):
    code = "goal-mismatch"


class InvalidPath(ProofError):
    code = "invalid-path"


class InvalidTree(ProofError):
    code = "invalid-tree"


# automation
class NotLKGoal(ProofError):
    code = "not-lk-goal"


class AutoCancelled(ProofError):
    code = "auto-cancelled"


# smt bridge
class ArityConflict(ProofError):
    code = "arity-conflict"


class SolverNotFound(ProofError):
    code = "solver-not-found"


# persistence
class MalformedFile(ProofError):
    code = "malformed-file"


class VersionUnsupported(ProofError):
    code = "version-unsupported"


class ReplayError(ProofError):
    code = "replay-error"

    def __init__(self, step_index: int, cause: Exception):
        super().__init__(f"step {step_index} failed to replay: {cause}")
        self.step_index = step_index
        self.cause = cause
