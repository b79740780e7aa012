"""contactkit: contact numbers of congruent sphere packings.

Enumeration of candidate contact graphs by degree sequence, budgeted
geometric realizability with checkable certificates, FCC lower-bound
constructions, and audit runs for the degree-structure lemmas.
"""

__version__ = "0.1.0"

from .degseq import build_case_tree, enumerate_sequences, is_graphical
from .graphenum import ContactGraph, canonical_form, enumerate_graphs
from .realize import (
    Packing,
    RealizabilityVerdict,
    SolverConfig,
    embed,
    greedy_fcc_lower_bound,
    objective,
    verify_certificate,
)
from .search import RefutationLedger, contact_number, refute
from .lemma_audit import audit

__all__ = [
    "ContactGraph",
    "Packing",
    "RealizabilityVerdict",
    "RefutationLedger",
    "SolverConfig",
    "audit",
    "build_case_tree",
    "canonical_form",
    "contact_number",
    "embed",
    "enumerate_graphs",
    "enumerate_sequences",
    "greedy_fcc_lower_bound",
    "is_graphical",
    "objective",
    "refute",
    "verify_certificate",
]
