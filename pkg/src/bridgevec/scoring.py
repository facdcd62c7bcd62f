"""Duplicate bridge scoring for undoubled contracts.

Implements the standard duplicate schedule: trick scores of 20 per odd trick
for minors, 30 for majors, 40 for the first no-trump trick and 30 after,
part-score bonus 50, game bonus 300 (500 vulnerable), small slam 500/750,
grand slam 1000/1500, undertricks -50 (-100 vulnerable).  Doubles and
redoubles are out of scope.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from bridgevec.cards import ALL_CONTRACT_BIDS, Bid, Seat, Strain


class Vulnerability(enum.Enum):
    NONE = "none"
    VULNERABLE = "vul"

    @classmethod
    def parse(cls, token: str) -> "Vulnerability":
        token = token.strip().lower()
        if token in ("none", "nv", "no", "not-vulnerable"):
            return cls.NONE
        if token in ("vul", "v", "vulnerable"):
            return cls.VULNERABLE
        raise ValueError(f"unrecognized vulnerability {token!r}")


@dataclass(frozen=True)
class ContractResult:
    bid: Bid
    declarer: Seat
    tricks_taken: int
    vul: Vulnerability = Vulnerability.NONE

    def __post_init__(self):
        if self.bid.is_pass:
            raise ValueError("a pass is not a contract; nothing to score")
        if not 0 <= self.tricks_taken <= 13:
            raise ValueError(f"tricks_taken {self.tricks_taken} outside 0..13")


_TRICK_VALUE = {Strain.C: 20, Strain.D: 20, Strain.H: 30, Strain.S: 30, Strain.NT: 30}
_FIRST_TRICK = {Strain.C: 20, Strain.D: 20, Strain.H: 30, Strain.S: 30, Strain.NT: 40}


def contract_score(result: ContractResult) -> int:
    """Signed score for the declaring side, undoubled."""
    bid, tricks, vul = result.bid, result.tricks_taken, result.vul
    needed = 6 + bid.level
    vulnerable = vul is Vulnerability.VULNERABLE
    if tricks < needed:
        return -(100 if vulnerable else 50) * (needed - tricks)

    per_trick = _TRICK_VALUE[bid.strain]
    trick_score = _FIRST_TRICK[bid.strain] + per_trick * (bid.level - 1)
    score = trick_score + per_trick * (tricks - needed)
    if trick_score >= 100:
        score += 500 if vulnerable else 300
    else:
        score += 50
    if bid.level == 6:
        score += 750 if vulnerable else 500
    elif bid.level == 7:
        score += 1500 if vulnerable else 1000
    return score


def best_ns_score(table, vul: Vulnerability = Vulnerability.NONE) -> int:
    """Best score NS can book from a trick table: the maximum over passing
    out (0) and every (bid, declarer in {N, S}) pair scored at the table's
    trick count for that declarer and strain.
    """
    best = 0
    for declarer in (Seat.N, Seat.S):
        for bid in ALL_CONTRACT_BIDS:
            tricks = table[declarer, bid.strain]
            score = contract_score(ContractResult(bid, declarer, tricks, vul))
            if score > best:
                best = score
    return best


def best_ns_contract(table, vul: Vulnerability = Vulnerability.NONE):
    """Like best_ns_score but also reports which (bid, declarer) achieves it.

    Returns (score, bid, declarer); (0, PASS-equivalent None, None) when
    passing out is best.  Ties are broken toward the earlier declarer (N)
    and the lower bid.
    """
    best = (0, None, None)
    for declarer in (Seat.N, Seat.S):
        for bid in ALL_CONTRACT_BIDS:
            tricks = table[declarer, bid.strain]
            score = contract_score(ContractResult(bid, declarer, tricks, vul))
            if score > best[0]:
                best = (score, bid, declarer)
    return best
