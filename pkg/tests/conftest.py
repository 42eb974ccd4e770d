import pytest

from proofkit import smt
from proofkit.errors import SolverNotFound


def _solver_available() -> bool:
    try:
        smt.resolve_solver()
        return True
    except SolverNotFound:
        return False


SOLVER_AVAILABLE = _solver_available()

requires_solver = pytest.mark.skipif(
    not SOLVER_AVAILABLE,
    reason="no SMT solver configured (set PROOFKIT_SOLVER or npm install in tools/z3smt)")
