"""proofkit: a proof assistant kernel for LK sequent calculus and Hoare logic.

Proof trees grow upward from a goal by validated rule application; goals can
also be discharged by an external SMT solver (flagged as a pseudo-axiom),
exported to LaTeX, and saved in a replay-checked file format.
"""

__version__ = "0.1.0"
