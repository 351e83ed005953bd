"""Proof-net laboratory for multiplicative-exponential linear logic.

Normalizes proof-nets under several strategies, runs the context-semantics
token machine, computes the weight aggregates, and checks the quantitative
invariants for MELL and its subsystems ELL, SLL and LLL.
"""

__version__ = "0.1.0"
