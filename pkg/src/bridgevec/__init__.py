"""Bridge hand vectorization toolkit.

A numpy-based library for contract bridge analytics: an exact double-dummy
solver, duplicate scoring, trick-count training data generation, a small
dense-network engine, a weight-shared hand encoder that turns a 13-card hand
into a short float vector, embedding-space queries, opening-bid classifiers,
and cross-entropy-method bidding agents.
"""

from bridgevec.cards import (
    Bid,
    Card,
    Deal,
    Hand,
    PASS,
    Seat,
    Strain,
    format_deal,
    format_pbn,
    hcp,
    parse_deal,
    parse_pbn,
    shape,
)
from bridgevec.dds import TrickTable, solve, solve_table
from bridgevec.scoring import Vulnerability, best_ns_score, contract_score

__version__ = "0.1.0"

__all__ = [
    "Bid",
    "Card",
    "Deal",
    "Hand",
    "PASS",
    "Seat",
    "Strain",
    "TrickTable",
    "Vulnerability",
    "best_ns_score",
    "contract_score",
    "format_deal",
    "format_pbn",
    "hcp",
    "parse_deal",
    "parse_pbn",
    "shape",
    "solve",
    "solve_table",
]
