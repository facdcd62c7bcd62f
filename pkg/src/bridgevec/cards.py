"""Card, hand, and deal domain model with PBN text handling.

Hands are sets of exactly 13 cards from a 52-card deck.  The binary encoding
used for network inputs follows a fixed convention: index = suit * 13 + rank
with suits ordered S, H, D, C (PBN reading order) and ranks ordered ace-high
down to the deuce.  Weight files record this convention identifier so encoded
datasets stay portable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

SUITS = "SHDC"
RANKS = "AKQJT98765432"  # descending; index 0 = ace
HCP_POINTS = {"A": 4, "K": 3, "Q": 2, "J": 1}

ENCODING_ID = "suit-major:SHDC/rank:A-high"

_TEN_ALIASES = {"10": "T"}


class PBNError(ValueError):
    """Raised for malformed PBN hand or deal text."""


class DealError(ValueError):
    """Raised when four hands do not partition the deck."""


@dataclass(frozen=True, order=True)
class Card:
    suit: str  # one of "SHDC"
    rank: str  # one of RANKS

    def __post_init__(self):
        if self.suit not in SUITS:
            raise ValueError(f"invalid suit {self.suit!r}")
        if self.rank not in RANKS:
            raise ValueError(f"invalid rank {self.rank!r}")

    def __str__(self):
        return f"{self.suit}{self.rank}"

    @property
    def index(self) -> int:
        """Position in the 52-slot binary encoding."""
        return SUITS.index(self.suit) * 13 + RANKS.index(self.rank)


FULL_DECK = frozenset(Card(s, r) for s in SUITS for r in RANKS)


def card_from_index(index: int) -> Card:
    if not 0 <= index < 52:
        raise ValueError(f"card index {index} out of range")
    return Card(SUITS[index // 13], RANKS[index % 13])


class Seat(enum.IntEnum):
    N = 0
    E = 1
    S = 2
    W = 3

    @property
    def partner(self) -> "Seat":
        return Seat((self + 2) % 4)

    @property
    def lho(self) -> "Seat":
        """Left-hand opponent: next seat clockwise."""
        return Seat((self + 1) % 4)

    @property
    def is_ns(self) -> bool:
        return self % 2 == 0


class Strain(enum.IntEnum):
    """Contract denominations in canonical output order C, D, H, S, NT."""

    C = 0
    D = 1
    H = 2
    S = 3
    NT = 4

    @property
    def trump_suit(self) -> str | None:
        return None if self is Strain.NT else self.name


@dataclass(frozen=True)
class Bid:
    """A contract bid (level 1-7 plus strain) or the pass, 36 values total."""

    level: int
    strain: Strain | None

    def __post_init__(self):
        if self.level == 0:
            if self.strain is not None:
                raise ValueError("pass carries no strain")
        elif not 1 <= self.level <= 7:
            raise ValueError(f"bid level {self.level} outside 1..7")
        elif self.strain is None:
            raise ValueError("contract bid needs a strain")

    @property
    def is_pass(self) -> bool:
        return self.level == 0

    def __str__(self):
        return "PASS" if self.is_pass else f"{self.level}{self.strain.name}"

    @classmethod
    def parse(cls, token: str) -> "Bid":
        token = token.strip().upper()
        if token in ("PASS", "P"):
            return PASS
        if len(token) >= 2 and token[0].isdigit():
            level = int(token[0])
            name = token[1:]
            if name in Strain.__members__:
                return cls(level, Strain[name])
        raise ValueError(f"unrecognized bid token {token!r}")


PASS = Bid(0, None)

ALL_CONTRACT_BIDS = tuple(
    Bid(level, strain) for level in range(1, 8) for strain in Strain
)
ALL_BIDS = (PASS,) + ALL_CONTRACT_BIDS  # index 0 = PASS, then 1C..7NT


class Hand:
    """An immutable set of exactly 13 distinct cards."""

    __slots__ = ("cards", "_hash")

    def __init__(self, cards: Iterable[Card]):
        cards = frozenset(cards)
        if len(cards) != 13:
            raise ValueError(f"hand needs exactly 13 cards, got {len(cards)}")
        object.__setattr__(self, "cards", cards)
        object.__setattr__(self, "_hash", hash(cards))

    def __setattr__(self, name, value):
        raise AttributeError("Hand is immutable")

    def __eq__(self, other):
        return isinstance(other, Hand) and self.cards == other.cards

    def __hash__(self):
        return self._hash

    def __contains__(self, card: Card) -> bool:
        return card in self.cards

    def __iter__(self):
        return iter(sorted(self.cards, key=lambda c: c.index))

    def __repr__(self):
        return f"Hand({format_pbn(self)!r})"

    def suit_ranks(self, suit: str) -> str:
        """Ranks held in one suit, descending."""
        held = {c.rank for c in self.cards if c.suit == suit}
        return "".join(r for r in RANKS if r in held)

    def disjoint(self, other: "Hand") -> bool:
        return not (self.cards & other.cards)


@dataclass(frozen=True)
class Deal:
    """All 52 cards partitioned into four seat-labeled hands."""

    hands: dict  # Seat -> Hand

    def __post_init__(self):
        if set(self.hands) != set(Seat):
            raise DealError("deal needs hands for all four seats")
        union = set()
        for seat in Seat:
            union |= self.hands[seat].cards
        if len(union) != 52:
            raise DealError("the four hands do not partition the deck")

    def __getitem__(self, seat: Seat) -> Hand:
        return self.hands[seat]


def parse_pbn(text: str) -> Hand:
    """Parse a dot-separated PBN hand string (suits in S.H.D.C order).

    Ranks may appear in any order and any case; "10" is accepted for the ten.
    Raises PBNError with a distinct diagnostic for a wrong group count, an
    invalid rank character, a duplicate card, or a hand that is not 13 cards.
    """
    groups = text.strip().split(".")
    if len(groups) != 4:
        raise PBNError(
            f"expected 4 dot-separated suit groups, got {len(groups)} in {text!r}"
        )
    cards = []
    seen = set()
    for suit, group in zip(SUITS, groups):
        group = group.upper()
        for alias, canon in _TEN_ALIASES.items():
            group = group.replace(alias, canon)
        for ch in group:
            if ch not in RANKS:
                raise PBNError(f"invalid rank character {ch!r} in {text!r}")
            card = Card(suit, ch)
            if card in seen:
                raise PBNError(f"duplicate card {card} in {text!r}")
            seen.add(card)
            cards.append(card)
    if len(cards) != 13:
        raise PBNError(f"hand {text!r} has {len(cards)} cards, expected 13")
    return Hand(cards)


def format_pbn(hand: Hand) -> str:
    """Canonical PBN text: suits S.H.D.C, ranks descending within each suit."""
    return ".".join(hand.suit_ranks(suit) for suit in SUITS)


def parse_deal(text: str) -> Deal:
    """Parse a full-deal string "N:<hand> <hand> <hand> <hand>".

    Hands run clockwise starting from the seat named before the colon.
    """
    text = text.strip()
    if len(text) < 2 or text[1] != ":":
        raise PBNError(f"deal string must start with '<seat>:', got {text!r}")
    first = text[0].upper()
    if first not in Seat.__members__:
        raise PBNError(f"unknown seat {first!r} in deal string")
    parts = text[2:].split()
    if len(parts) != 4:
        raise PBNError(f"expected 4 hands in deal string, got {len(parts)}")
    seat = Seat[first]
    hands = {}
    for part in parts:
        hands[seat] = parse_pbn(part)
        seat = seat.lho
    return Deal(hands)


def format_deal(deal: Deal, first: Seat = Seat.N) -> str:
    seats = [Seat((first + i) % 4) for i in range(4)]
    return f"{first.name}:" + " ".join(format_pbn(deal[s]) for s in seats)


def hcp(hand: Hand) -> int:
    """High card points: A=4, K=3, Q=2, J=1."""
    return sum(HCP_POINTS.get(c.rank, 0) for c in hand.cards)


def shape(hand: Hand) -> tuple:
    """Suit lengths in non-increasing order; always sums to 13."""
    lengths = [len(hand.suit_ranks(s)) for s in SUITS]
    return tuple(sorted(lengths, reverse=True))


def is_balanced(hand: Hand) -> bool:
    """4333, 4432 or 5332: no void, no singleton, at most one doubleton."""
    return shape(hand) in ((4, 3, 3, 3), (4, 4, 3, 2), (5, 3, 3, 2))


def encode_binary(hand: Hand) -> np.ndarray:
    """52-slot 0/1 vector with exactly 13 ones; see module docstring."""
    vec = np.zeros(52, dtype=np.float64)
    for card in hand.cards:
        vec[card.index] = 1.0
    return vec


def decode_binary(vec: np.ndarray) -> Hand:
    """Inverse of encode_binary."""
    (idx,) = np.nonzero(np.asarray(vec) != 0)
    return Hand(card_from_index(int(i)) for i in idx)


# Suit rotation follows the PBN text rotating one group left
# (K2.A76543.Q2.J32 -> A76543.Q2.J32.K2): hearts become spades, diamonds
# become hearts, clubs become diamonds, spades become clubs.
ROTATE_SUIT_MAP = {"H": "S", "D": "H", "C": "D", "S": "C"}


def rotate_suits(hand: Hand) -> Hand:
    """Relabel every card's suit one step along the rotation cycle."""
    return Hand(Card(ROTATE_SUIT_MAP[c.suit], c.rank) for c in hand.cards)


def _sorted_cards(cards: Iterable[Card]) -> list:
    return sorted(cards, key=lambda c: c.index)


def sample_hand(rng: np.random.Generator, exclude: Iterable[Card] = ()) -> Hand:
    """Draw a uniformly random hand from the deck minus `exclude`."""
    pool = _sorted_cards(FULL_DECK - set(exclude))
    if len(pool) < 13:
        raise ValueError("not enough cards left to deal a hand")
    return Hand(_draw(rng, pool, 13))


def deal_remaining(hand_n: Hand, hand_s: Hand, seed) -> tuple:
    """Complete a deal: split the 26 cards outside N and S uniformly into E, W.

    `seed` may be an integer or a numpy Generator (for stream reuse).
    Deterministic for a given seed; the generator algorithm is PCG64
    (numpy default_rng) with a partial Fisher-Yates draw over the pool
    sorted in encoding order.
    """
    if not hand_n.disjoint(hand_s):
        raise ValueError("N and S hands overlap")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    pool = _sorted_cards(FULL_DECK - hand_n.cards - hand_s.cards)
    east = _draw(rng, pool, 13)
    west = [c for c in pool if c not in set(east)]
    return Hand(east), Hand(west)


def _draw(rng: np.random.Generator, pool: list, k: int) -> list:
    """First k items of a partial Fisher-Yates shuffle of `pool` (copied)."""
    arr = list(pool)
    n = len(arr)
    for i in range(k):
        j = int(rng.integers(i, n))
        arr[i], arr[j] = arr[j], arr[i]
    return arr[:k]


def random_ns_pair(rng: np.random.Generator) -> tuple:
    """Uniform N hand, then uniform S hand from the remaining 39 cards."""
    hand_n = sample_hand(rng)
    hand_s = sample_hand(rng, exclude=hand_n.cards)
    return hand_n, hand_s


def complete_deal(hand_n: Hand, hand_s: Hand, seed) -> Deal:
    hand_e, hand_w = deal_remaining(hand_n, hand_s, seed)
    return Deal({Seat.N: hand_n, Seat.E: hand_e, Seat.S: hand_s, Seat.W: hand_w})
