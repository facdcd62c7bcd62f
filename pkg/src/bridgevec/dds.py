"""Exact double-dummy solver.

For a full deal, a declarer, and a strain, computes the number of tricks the
declaring side takes against optimal play by all four players, with the
opening lead from the seat left of declarer.

The search maximizes NS tricks regardless of declarer: the optimal NS trick
count from a position depends only on the position and the leader, so one
value function (and one transposition table) serves all four declarer
questions for a strain.  EW-declarer answers are reported as
``tricks_remaining - ns_tricks``.

Engine: depth-first boolean search ("can NS still take at least `need`
tricks?") driven by a binary search on the trick count, with

* a transposition table at trick boundaries storing value bounds under a
  rank-squeezed key (dead ranks removed, so positions that differ only in
  gaps left by played cards share entries), exact two-word key match;
* rank-equivalence move generation: among one seat's cards of a suit, cards
  adjacent once dead cards are removed are interchangeable, so one
  representative per run is searched;
* quick-trick bounds: top winners the leader can cash without losing the
  lead settle many positions without search;
* move ordering by cashing masters, cheapest winners, hash moves from the
  table, and killer moves per depth.

The hot path compiles with numba when available and runs as plain Python
otherwise (slow but exact; fine for reduced decks).

A deliberately naive reference oracle (`oracle_solve`) enumerates every legal
play sequence on reduced decks for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from bridgevec.cards import Card, Deal, RANKS, SUITS, Seat, Strain

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - environment without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


DEFAULT_TT_LOG2 = 20

# Bitboard layout: bit (suit * 13 + rank_value), suit in SUITS order
# (S=0, H=1, D=2, C=3), rank_value 0 = deuce .. 12 = ace.
_SUIT_OF_STRAIN = {Strain.S: 0, Strain.H: 1, Strain.D: 2, Strain.C: 3, Strain.NT: 4}

_HASH_A = 0x2545F4914F6CDD1D  # 63-bit odd multipliers
_HASH_B = 0x100000001B3
_MASK63 = (1 << 63) - 1
_NO_MOVE = 63


def _build_pext_table(bits):
    size = 1 << bits
    table = np.zeros((size, size), dtype=np.int16)
    for mask in range(size):
        for x in range(size):
            out = 0
            j = 0
            for r in range(bits):
                if mask >> r & 1:
                    if x >> r & 1:
                        out |= 1 << j
                    j += 1
            table[x, mask] = out
    return table


_PEXT7 = _build_pext_table(7)
_PEXT6 = _build_pext_table(6)
_POP7 = np.array([bin(i).count("1") for i in range(128)], dtype=np.int8)
# spread bit j of a 13-bit mask to bit 2j
_TWOBIT = np.zeros(1 << 13, dtype=np.int64)
for _m in range(1 << 13):
    _v = 0
    for _r in range(13):
        if _m >> _r & 1:
            _v |= 1 << (2 * _r)
    _TWOBIT[_m] = _v
# rank of the j-th live card counted from the bottom
_SELECT = np.full((1 << 13, 13), -1, dtype=np.int8)
for _m in range(1 << 13):
    _j = 0
    for _r in range(13):
        if _m >> _r & 1:
            _SELECT[_m, _j] = _r
            _j += 1
del _m, _v, _r, _j


def _card_bit(card: Card) -> int:
    return SUITS.index(card.suit) * 13 + (12 - RANKS.index(card.rank))


def pack_hand(cards) -> int:
    """Bitboard of a card collection (Hand or iterable of Card)."""
    bb = 0
    for card in cards:
        bb |= 1 << _card_bit(card)
    return bb


@njit(cache=False, inline="always")
def _pext13(x, m):
    return _PEXT7[x & 127, m & 127] | (_PEXT6[x >> 7, m >> 7] << _POP7[m & 127])


@njit(cache=False)
def _tt_keys(h0, h1, h2, h3, seat):
    """Rank-squeezed position key: per suit, the seat assignment of each
    live card bottom-up (2 bits each) plus the live count; plus the leader."""
    k1 = seat << 60
    k2 = 0
    for si in range(4):
        sh = 13 * si
        a0 = (h0 >> sh) & 0x1FFF
        a1 = (h1 >> sh) & 0x1FFF
        a2 = (h2 >> sh) & 0x1FFF
        a3 = (h3 >> sh) & 0x1FFF
        live = a0 | a1 | a2 | a3
        lo_bit = _pext13(a1 | a3, live)  # seat index bit 0
        hi_bit = _pext13(a2 | a3, live)  # seat index bit 1
        length = _POP7[live & 127] + _POP7[live >> 7]
        word = _TWOBIT[lo_bit] | (_TWOBIT[hi_bit] << 1)
        if si == 0:
            k1 |= word
        elif si == 1:
            k1 |= word << 26
            k1 |= length << 56
        elif si == 2:
            k2 |= word
            k2 |= length << 56
        else:
            k2 |= word << 26
            k2 |= length << 60
    return k1, k2


@njit(cache=False, inline="always")
def _tt_slot(k1, k2, tlog):
    h = ((k1 * _HASH_A) ^ (k2 * _HASH_B)) & _MASK63
    h ^= h >> 31
    return h & ((1 << tlog) - 1)


# cache=False throughout the search: numba disk caching is unreliable for
# self-recursive functions (reloaded binaries crash); compile per process.
@njit(cache=False)
def _dfs(h0, h1, h2, h3, tmask, seat, cnt, led, bpow, bseat,
         need, tricks_left, depth, trump,
         keys1, keys2, tlo, thi, tdep, tmv, tlog, cbuf, sbuf, karr):
    """True iff NS can take at least `need` of the remaining tricks
    (the current, possibly partial, trick included)."""
    hmove = -1
    if cnt == 0:
        if need <= 0:
            return True
        if need > tricks_left:
            return False

        if tricks_left == 1:
            # forced: one card per hand, play it out
            wseat = seat
            wpow = -1
            s = seat
            lsuit = -1
            for _ in range(4):
                if s == 0:
                    hh = h0
                elif s == 1:
                    hh = h1
                elif s == 2:
                    hh = h2
                else:
                    hh = h3
                psi = 0
                for si in range(4):
                    if (hh >> (13 * si)) & 0x1FFF != 0:
                        psi = si
                        break
                r = _SELECT[(hh >> (13 * psi)) & 0x1FFF, 0]
                if lsuit < 0:
                    lsuit = psi
                if psi == trump:
                    power = 16 + r
                elif psi == lsuit:
                    power = r
                else:
                    power = -1
                if power > wpow:
                    wpow = power
                    wseat = s
                s = (s + 1) & 3
            return (wseat & 1) == 0

        if tlog > 0:
            k1, k2 = _tt_keys(h0, h1, h2, h3, seat)
            slot = _tt_slot(k1, k2, tlog)
            if keys1[slot] == k1 and keys2[slot] == k2:
                if tlo[slot] >= need:
                    return True
                if thi[slot] < need:
                    return False
                hmove = tmv[slot]

    if seat == 0:
        hs = h0
    elif seat == 1:
        hs = h1
    elif seat == 2:
        hs = h2
    else:
        hs = h3

    live_all = (h0 | h1 | h2 | h3) | tmask

    if cnt == 0:
        # quick tricks: winners the leader can cash off the top without
        # giving up the lead bound the leading side's total from below
        if (seat & 1) == 0:
            ho = h1 | h3
        else:
            ho = h0 | h2
        opp_trumps = 0
        if trump < 4:
            opp_trumps = (ho >> (13 * trump)) & 0x1FFF
        qt = 0
        for si in range(4):
            live = (live_all >> (13 * si)) & 0x1FFF
            if live == 0:
                continue
            mine = (hs >> (13 * si)) & 0x1FFF
            if mine == 0:
                continue
            cap = 13
            if si != trump and opp_trumps != 0:
                # rounds where both opponents still follow (no ruff)
                c1 = (ho >> (13 * si)) & 0x1FFF
                if (seat & 1) == 0:
                    d1 = (h1 >> (13 * si)) & 0x1FFF
                    d2 = (h3 >> (13 * si)) & 0x1FFF
                else:
                    d1 = (h0 >> (13 * si)) & 0x1FFF
                    d2 = (h2 >> (13 * si)) & 0x1FFF
                n1 = _POP7[d1 & 127] + _POP7[d1 >> 7]
                n2 = _POP7[d2 & 127] + _POP7[d2 >> 7]
                cap = n1 if n1 < n2 else n2
            run = 0
            for r in range(12, -1, -1):
                b = 1 << r
                if live & b == 0:
                    continue
                if mine & b != 0:
                    run += 1
                    if run >= cap:
                        break
                else:
                    break
            qt += run
        if qt > tricks_left:
            qt = tricks_left
        settled = False
        result = False
        if (seat & 1) == 0:
            if qt >= need:
                settled = True
                result = True
        else:
            if tricks_left - qt < need:
                settled = True
                result = False
        if settled:
            if tlog > 0:
                k1, k2 = _tt_keys(h0, h1, h2, h3, seat)
                slot = _tt_slot(k1, k2, tlog)
                if keys1[slot] == k1 and keys2[slot] == k2:
                    if result:
                        if need > tlo[slot]:
                            tlo[slot] = need
                    else:
                        if need - 1 < thi[slot]:
                            thi[slot] = need - 1
                elif keys1[slot] == -1 or tricks_left >= tdep[slot]:
                    keys1[slot] = k1
                    keys2[slot] = k2
                    tdep[slot] = tricks_left
                    tmv[slot] = _NO_MOVE
                    if result:
                        tlo[slot] = need
                        thi[slot] = tricks_left
                    else:
                        tlo[slot] = 0
                        thi[slot] = need - 1
            return result

    # candidate suits: must follow the led suit when possible
    lo_suit = 0
    hi_suit = 3
    if cnt > 0:
        if (hs >> (13 * led)) & 0x1FFF != 0:
            lo_suit = led
            hi_suit = led

    base = depth * 14
    ncand = 0
    for si in range(lo_suit, hi_suit + 1):
        mine = (hs >> (13 * si)) & 0x1FFF
        if mine == 0:
            continue
        live = (live_all >> (13 * si)) & 0x1FFF
        # one representative per run of own cards, adjacent in live ordering
        in_run = False
        for r in range(12, -1, -1):
            b = 1 << r
            if live & b == 0:
                continue
            if mine & b != 0:
                if not in_run:
                    in_run = True
                    cbuf[base + ncand] = si * 13 + r
                    ncand += 1
            else:
                in_run = False

    # resolve the hash move into an actual card
    hcard = -1
    if hmove >= 0 and hmove != _NO_MOVE:
        hsi = hmove >> 4
        hj = hmove & 15
        hlive = (live_all >> (13 * hsi)) & 0x1FFF
        hr = _SELECT[hlive, hj]
        if hr >= 0:
            hcard = hsi * 13 + hr

    killer = karr[depth]

    # score candidates for move ordering
    for i in range(ncand):
        p = cbuf[base + i]
        si = p // 13
        r = p - si * 13
        if si == trump:
            power = 16 + r
        elif cnt == 0 or si == led:
            power = r
        else:
            power = -1
        if cnt == 0:
            live = (live_all >> (13 * si)) & 0x1FFF
            top = 12
            while top >= 0 and (live >> top) & 1 == 0:
                top -= 1
            if r == top:
                score = 200 + r  # master card: cash it first
            else:
                score = -r
        else:
            partner_best = bseat >= 0 and ((bseat ^ seat) == 2)
            if partner_best and cnt == 3:
                score = -r  # partner already won: cheapest card
            elif power > bpow:
                score = 100 - r  # cheapest winner first
            else:
                score = -r
        if p == hcard:
            score = 10000
        elif p == killer:
            score += 1000
        sbuf[base + i] = score

    # insertion sort, descending score
    for i in range(1, ncand):
        cp = cbuf[base + i]
        sp = sbuf[base + i]
        j = i - 1
        while j >= 0 and sbuf[base + j] < sp:
            cbuf[base + j + 1] = cbuf[base + j]
            sbuf[base + j + 1] = sbuf[base + j]
            j -= 1
        cbuf[base + j + 1] = cp
        sbuf[base + j + 1] = sp

    ns_turn = (seat & 1) == 0
    result = not ns_turn
    cut_card = -1
    for i in range(ncand):
        p = cbuf[base + i]
        si = p // 13
        r = p - si * 13
        mv = 1 << p
        if si == trump:
            power = 16 + r
        elif cnt == 0 or si == led:
            power = r
        else:
            power = -1

        if seat == 0:
            g0, g1, g2, g3 = h0 ^ mv, h1, h2, h3
        elif seat == 1:
            g0, g1, g2, g3 = h0, h1 ^ mv, h2, h3
        elif seat == 2:
            g0, g1, g2, g3 = h0, h1, h2 ^ mv, h3
        else:
            g0, g1, g2, g3 = h0, h1, h2, h3 ^ mv

        if power > bpow:
            nbpow = power
            nbseat = seat
        else:
            nbpow = bpow
            nbseat = bseat

        if cnt == 3:
            won = 1 if (nbseat & 1) == 0 else 0
            sub = _dfs(g0, g1, g2, g3, 0,
                       nbseat, 0, -1, -1, -1,
                       need - won, tricks_left - 1, depth + 1, trump,
                       keys1, keys2, tlo, thi, tdep, tmv, tlog, cbuf, sbuf, karr)
        else:
            nled = si if cnt == 0 else led
            sub = _dfs(g0, g1, g2, g3, tmask | mv,
                       (seat + 1) & 3, cnt + 1, nled, nbpow, nbseat,
                       need, tricks_left, depth + 1, trump,
                       keys1, keys2, tlo, thi, tdep, tmv, tlog, cbuf, sbuf, karr)
        if ns_turn:
            if sub:
                result = True
                cut_card = p
                break
        else:
            if not sub:
                result = False
                cut_card = p
                break

    if cut_card >= 0:
        karr[depth] = cut_card

    if cnt == 0 and tlog > 0:
        k1, k2 = _tt_keys(h0, h1, h2, h3, seat)
        slot = _tt_slot(k1, k2, tlog)
        move_code = _NO_MOVE
        if cut_card >= 0:
            msi = cut_card // 13
            mr = cut_card - msi * 13
            mlive = (live_all >> (13 * msi)) & 0x1FFF
            mj = _POP7[(mlive & ((1 << mr) - 1)) & 127] \
                + _POP7[(mlive & ((1 << mr) - 1)) >> 7]
            move_code = (msi << 4) | mj
        if keys1[slot] == k1 and keys2[slot] == k2:
            if result:
                if need > tlo[slot]:
                    tlo[slot] = need
            else:
                if need - 1 < thi[slot]:
                    thi[slot] = need - 1
            if move_code != _NO_MOVE:
                tmv[slot] = move_code
        elif keys1[slot] == -1 or tricks_left >= tdep[slot]:
            keys1[slot] = k1
            keys2[slot] = k2
            tdep[slot] = tricks_left
            tmv[slot] = move_code
            if result:
                tlo[slot] = need
                thi[slot] = tricks_left
            else:
                tlo[slot] = 0
                thi[slot] = need - 1
    return result


@njit(cache=False)
def _solve_ns(h0, h1, h2, h3, leader, trump, n_tricks,
              keys1, keys2, tlo, thi, tdep, tmv, tlog, cbuf, sbuf, karr):
    """Optimal NS trick count via zero-window binary search."""
    lo = 0
    hi = n_tricks
    while lo < hi:
        mid = (lo + hi + 1) >> 1
        if _dfs(h0, h1, h2, h3, 0, leader, 0, -1, -1, -1,
                mid, n_tricks, 0, trump,
                keys1, keys2, tlo, thi, tdep, tmv, tlog, cbuf, sbuf, karr):
            lo = mid
        else:
            hi = mid - 1
    return lo


class _StrainContext:
    """Search state for one (deal, strain): bitboards plus a transposition
    table shared by all four declarer questions."""

    def __init__(self, bitboards, trump_index, tt_log2=DEFAULT_TT_LOG2):
        if not 0 <= tt_log2 <= 28:
            raise ValueError(f"tt_log2 {tt_log2} outside 0..28")
        self.bb = [np.int64(b) for b in bitboards]
        self.trump = int(trump_index)
        self.tt_log2 = int(tt_log2)
        size = 1 << tt_log2 if tt_log2 > 0 else 1
        self.keys1 = np.full(size, -1, dtype=np.int64)
        self.keys2 = np.zeros(size, dtype=np.int64)
        self.tlo = np.zeros(size, dtype=np.int8)
        self.thi = np.zeros(size, dtype=np.int8)
        self.tdep = np.zeros(size, dtype=np.int8)
        self.tmv = np.full(size, _NO_MOVE, dtype=np.int8)
        self.cbuf = np.zeros(56 * 14, dtype=np.int64)
        self.sbuf = np.zeros(56 * 14, dtype=np.int64)
        self.karr = np.full(64, -1, dtype=np.int64)
        self.n_tricks = bin(bitboards[0]).count("1")
        for b in bitboards:
            if bin(b).count("1") != self.n_tricks:
                raise ValueError("hands must have equal sizes")

    def ns_tricks(self, leader: int) -> int:
        return int(_solve_ns(self.bb[0], self.bb[1], self.bb[2], self.bb[3],
                             np.int64(leader), np.int64(self.trump),
                             np.int64(self.n_tricks),
                             self.keys1, self.keys2, self.tlo, self.thi,
                             self.tdep, self.tmv, np.int64(self.tt_log2),
                             self.cbuf, self.sbuf, self.karr))


@dataclass(frozen=True)
class TrickTable:
    """Double-dummy trick counts per (declarer seat, strain), 20 entries."""

    tricks: dict

    def __post_init__(self):
        for seat in Seat:
            for strain in Strain:
                v = self.tricks[(seat, strain)]
                if not 0 <= v <= 13:
                    raise ValueError(f"trick count {v} outside 0..13")

    def __getitem__(self, key):
        seat, strain = key
        return self.tricks[(Seat(seat), Strain(strain))]

    def row(self, seat: Seat) -> tuple:
        return tuple(self.tricks[(seat, strain)] for strain in Strain)

    def grid_text(self) -> str:
        lines = ["declarer    C   D   H   S  NT"]
        for seat in (Seat.N, Seat.S, Seat.E, Seat.W):
            cells = "".join(f"{self.tricks[(seat, st)]:4d}" for st in Strain)
            lines.append(f"{seat.name}       {cells}")
        return "\n".join(lines)


def _deal_bitboards(deal: Deal):
    return [pack_hand(deal[Seat(i)]) for i in range(4)]


def solve(deal, declarer: Seat, strain: Strain, tt_log2: int = DEFAULT_TT_LOG2) -> int:
    """Tricks the declaring side takes under optimal play by everyone."""
    if isinstance(deal, MiniDeal):
        boards = [pack_hand(deal.hands[Seat(i)]) for i in range(4)]
    elif isinstance(deal, Deal):
        boards = _deal_bitboards(deal)
    else:
        raise TypeError(f"expected Deal or MiniDeal, got {type(deal).__name__}")
    ctx = _StrainContext(boards, _SUIT_OF_STRAIN[strain], tt_log2)
    return _declarer_tricks(ctx, declarer)


def _declarer_tricks(ctx: _StrainContext, declarer: Seat) -> int:
    leader = int(Seat(declarer).lho)
    ns = ctx.ns_tricks(leader)
    return ns if Seat(declarer).is_ns else ctx.n_tricks - ns


def solve_table(deal, tt_log2: int = DEFAULT_TT_LOG2,
                declarers=tuple(Seat), strains=tuple(Strain)):
    """All requested (declarer, strain) trick counts; full 20-entry
    TrickTable by default.  Declarers of one strain share a transposition
    table."""
    if isinstance(deal, MiniDeal):
        boards = [pack_hand(deal.hands[Seat(i)]) for i in range(4)]
    else:
        boards = _deal_bitboards(deal)
    tricks = {}
    for strain in strains:
        ctx = _StrainContext(boards, _SUIT_OF_STRAIN[strain], tt_log2)
        for declarer in declarers:
            tricks[(declarer, strain)] = _declarer_tricks(ctx, declarer)
    if len(tricks) == 20:
        return TrickTable(tricks)
    return tricks


def ns_trick_profile(deal, tt_log2: int = DEFAULT_TT_LOG2) -> dict:
    """The ten (declarer in {N, S}, strain) entries used for training data."""
    return solve_table(deal, tt_log2, declarers=(Seat.N, Seat.S))


# ---------------------------------------------------------------------------
# Reduced-deck deals and the exhaustive reference oracle
# ---------------------------------------------------------------------------

MAX_ORACLE_RANKS = 5


@dataclass(frozen=True)
class MiniDeal:
    """A deal over a reduced deck: 4 suits x n_ranks top ranks, n_ranks cards
    per seat."""

    hands: dict  # Seat -> frozenset[Card]
    n_ranks: int

    def __post_init__(self):
        ranks = set(RANKS[: self.n_ranks])
        deck = {Card(s, r) for s in SUITS for r in ranks}
        union = set()
        for seat in Seat:
            hand = self.hands[seat]
            if len(hand) != self.n_ranks:
                raise ValueError("each seat needs n_ranks cards")
            union |= set(hand)
        if union != deck:
            raise ValueError("hands do not partition the reduced deck")


def random_minideal(rng: np.random.Generator, n_ranks: int = 4) -> MiniDeal:
    deck = [Card(s, r) for s in SUITS for r in RANKS[:n_ranks]]
    order = list(rng.permutation(len(deck)))
    hands = {}
    for i, seat in enumerate(Seat):
        hands[seat] = frozenset(deck[order[j]] for j in range(i * n_ranks, (i + 1) * n_ranks))
    return MiniDeal(hands=hands, n_ranks=n_ranks)


@njit(cache=False)
def _oracle_dfs(h0, h1, h2, h3, seat, cnt, led, bpow, bseat, trump, tricks_left):
    """NS tricks from this state by exhaustive minimax: every legal move at
    every node is fully evaluated.  No pruning, no memoization, no
    equivalence reduction."""
    if tricks_left == 0:
        return 0
    if seat == 0:
        hs = h0
    elif seat == 1:
        hs = h1
    elif seat == 2:
        hs = h2
    else:
        hs = h3

    legal = hs
    if cnt > 0:
        follow = hs & (np.int64(0x1FFF) << (13 * led))
        if follow != 0:
            legal = follow

    ns_turn = (seat & 1) == 0
    best = -1 if ns_turn else 99
    for p in range(52):
        if (legal >> p) & 1 == 0:
            continue
        si = p // 13
        r = p - si * 13
        mv = np.int64(1) << p
        if si == trump:
            power = 16 + r
        elif cnt == 0 or si == led:
            power = r
        else:
            power = -1

        if seat == 0:
            g0, g1, g2, g3 = h0 ^ mv, h1, h2, h3
        elif seat == 1:
            g0, g1, g2, g3 = h0, h1 ^ mv, h2, h3
        elif seat == 2:
            g0, g1, g2, g3 = h0, h1, h2 ^ mv, h3
        else:
            g0, g1, g2, g3 = h0, h1, h2, h3 ^ mv

        if power > bpow:
            nbpow = power
            nbseat = seat
        else:
            nbpow = bpow
            nbseat = bseat

        if cnt == 3:
            won = 1 if (nbseat & 1) == 0 else 0
            sub = won + _oracle_dfs(g0, g1, g2, g3, nbseat, 0, -1, -1, -1,
                                    trump, tricks_left - 1)
        else:
            nled = si if cnt == 0 else led
            sub = _oracle_dfs(g0, g1, g2, g3, (seat + 1) & 3, cnt + 1, nled,
                              nbpow, nbseat, trump, tricks_left)
        if ns_turn:
            if sub > best:
                best = sub
        else:
            if sub < best:
                best = sub
    return best


def oracle_solve(mini: MiniDeal, declarer: Seat, strain: Strain) -> int:
    """Reference value by plain exhaustive minimax; reduced decks only."""
    if mini.n_ranks > MAX_ORACLE_RANKS:
        raise ValueError(
            f"oracle limited to {MAX_ORACLE_RANKS} ranks per suit, got {mini.n_ranks}"
        )
    boards = [np.int64(pack_hand(mini.hands[Seat(i)])) for i in range(4)]
    leader = int(Seat(declarer).lho)
    ns = int(_oracle_dfs(boards[0], boards[1], boards[2], boards[3],
                         np.int64(leader), np.int64(0), np.int64(-1),
                         np.int64(-1), np.int64(-1),
                         np.int64(_SUIT_OF_STRAIN[strain]),
                         np.int64(mini.n_ranks)))
    return ns if Seat(declarer).is_ns else mini.n_ranks - ns
