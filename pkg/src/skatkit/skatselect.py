"""Skat discard selection: enumerate, veto, score, rank.

Given the twelve cards a declarer holds after taking the skat, there are
66 ways to bury two of them.  This module ranks those 66:

1. classify the hand into a :class:`~skatkit.rules.SelectionSubtype`,
2. veto implausible puts with the named rule table (relaxing tiers when
   a freak hand would otherwise reject everything),
3. score the survivors with a coefficient-weighted sum of hand features,
   plus a few bounded expert adjustments,
4. rank, with a certified override when a four-jack hand is provably won.

A second entry point, :func:`evaluate_take`, prices the *decision to
pick up the skat* before it is seen: the mean over all 231 possible
skat contents of the best put's expected payoff.  A vectorized path
makes that cheap enough to sit inside an auction loop.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .cards import ACES, DECK, JACKS, Card, CardSet, Position, Rank, Suit
from .cards import trump_set
from .gamedef import BID_LADDER, GameType, game_value, trump_order
from .handeval import (
    _W2_BOUNDS,
    _W3_BOUNDS,
    FeatureVector,
    _bucket,
    estimated_lost_tricks,
    feature_vector,
    jack_class,
    kinback,
    standing_suit,
    standing_trumps,
    von_stegen,
    winning_params,
)
from .probmodel import (
    NullSuitTable,
    ProbTable,
    TableSet,
    null_win_probability,
    params_key,
)
from .rules import SelectionSubtype, active_rules, rejection

__all__ = [
    "GameContext",
    "SkatCandidate",
    "HighCardCertificate",
    "LambdaRow",
    "LambdaTable",
    "POLICIES",
    "classify_subtype",
    "enumerate_puts",
    "high_card_theorem",
    "hard_filter",
    "soft_score",
    "expected_cost",
    "select_put",
    "evaluate_take",
    "default_lambda_table",
    "load_lambda_table",
    "save_lambda_table",
]

POLICIES = ("proposal", "winprob", "stegen", "kinback", "random")

_LADDER = frozenset(BID_LADDER)
_LOW_RANKS = (Rank.NINE, Rank.EIGHT, Rank.SEVEN)
_PLAIN_MASK = 0xFF & ~(1 << Rank.JACK)
_BLACK_JACKS = CardSet.of(
    Card(Suit.CLUBS, Rank.JACK), Card(Suit.SPADES, Rank.JACK)
)

# subtype thresholds (documented knobs, not magic)
HIGH_CARD_MIN = 7       # jacks + aces + ace-backed tens
LONG_TRUMP_MIN = 5      # trick-oriented from five trumps up
SHORT_TRUMP_LEN = 4     # ... or four trumps with two of the top three
SHORT_TRUMP_TOPS = 2


# --- context and candidate types ---------------------------------------------


@dataclass(frozen=True, slots=True)
class GameContext:
    """Everything about the table that influences the discard."""

    game: GameType
    position: Position
    bid: int
    subtype: SelectionSubtype

    def __post_init__(self) -> None:
        if self.bid != 0 and self.bid not in _LADDER:
            raise ValueError(f"bid {self.bid} is not on the ladder")

    @classmethod
    def for_hand(
        cls,
        hand12: CardSet,
        game: GameType,
        position: Position,
        bid: int = 0,
    ) -> "GameContext":
        return cls(game, position, bid, classify_subtype(hand12, game))


@dataclass(slots=True)
class SkatCandidate:
    """One of the 66 ways to bury two cards, scored in stages."""

    put: CardSet
    remaining: CardSet
    features: Optional[FeatureVector] = None
    soft_score: float = 0.0
    win_prob: float = 0.0
    expected_cost: float = 0.0
    filtered_by: Optional[str] = None
    relaxed: bool = False  # survived only because rule tiers were dropped

    def __post_init__(self) -> None:
        if len(self.put) != 2 or len(self.remaining) != 10:
            raise ValueError("expected a 2-card put and a 10-card remainder")
        if not self.put.isdisjoint(self.remaining):
            raise ValueError("put overlaps the kept hand")


# --- subtype classification ---------------------------------------------------


def classify_subtype(hand12: CardSet, game: GameType) -> SelectionSubtype:
    """The one hand family that decides rule set and coefficient row."""
    if len(hand12) != 12:
        raise ValueError(f"expected 12 cards, got {len(hand12)}")
    if game is GameType.NULL:
        return SelectionSubtype.NULL_LIKE
    if game is GameType.GRAND:
        jacks = jack_class(hand12)
        if jacks == 0:
            return SelectionSubtype.FOUR_JACK_GRAND
        density = len(hand12 & JACKS) + len(hand12 & ACES)
        for suit in Suit:
            pattern = hand12.suit_pattern(suit)
            if pattern & 1 and pattern >> Rank.TEN & 1:
                density += 1  # a ten behind its ace is as good as high
        if density >= HIGH_CARD_MIN:
            return SelectionSubtype.HIGH_CARD_GRAND
        if len(hand12 & JACKS) == 2:
            return SelectionSubtype.TWO_JACK_GRAND
        return SelectionSubtype.STD_GRAND
    trumps = hand12 & trump_set(game)
    if len(trumps) >= LONG_TRUMP_MIN:
        return SelectionSubtype.HIGH_TRUMP_SUIT
    tops = CardSet.of(*trump_order(game)[:3])
    if len(trumps) == SHORT_TRUMP_LEN and len(trumps & tops) >= SHORT_TRUMP_TOPS:
        return SelectionSubtype.HIGH_TRUMP_SUIT
    return SelectionSubtype.LOW_TRUMP_SUIT


# --- enumeration and the certified override -----------------------------------


def enumerate_puts(hand12: CardSet) -> list[SkatCandidate]:
    """All 66 candidate puts in canonical (card-index) order."""
    if len(hand12) != 12:
        raise ValueError(f"expected 12 cards, got {len(hand12)}")
    cards = list(hand12)
    out = []
    for a, b in itertools.combinations(cards, 2):
        put = CardSet.of(a, b)
        out.append(SkatCandidate(put=put, remaining=hand12 - put))
    return out


@dataclass(frozen=True, slots=True)
class HighCardCertificate:
    """Proof sketch that a four-jack hand cannot lose.

    With all four jacks kept, the defenders are trumpless, so every kept
    top-run card wins its trick and the declarer only ever loses the
    `lost_tricks` filler leads.  Fillers carry no eyes, so the declarer
    banks `secured_eyes` (own winning cards plus the skat) no matter how
    the defense sloughs; at 61 or more the game is won outright.
    """

    secured_eyes: int
    winning_tricks: int
    lost_tricks: int
    high_cards: int


_GRAND_PLAIN_ORDER = (Rank.ACE, Rank.TEN, Rank.KING, Rank.QUEEN,
                      Rank.NINE, Rank.EIGHT, Rank.SEVEN)


def _certify_kept(kept: CardSet, put: CardSet) -> Optional[HighCardCertificate]:
    if len(kept & JACKS) != 4:
        return None
    run_cards = 0
    high = 0
    fillers = 0
    for suit in Suit:
        pattern = kept.suit_pattern(suit) & _PLAIN_MASK
        in_run = True
        for rank in _GRAND_PLAIN_ORDER:
            if not pattern >> rank & 1:
                in_run = False
                continue
            if in_run:
                run_cards += 1
                if rank in (Rank.ACE, Rank.TEN):
                    high += 1
            else:
                if rank.points:
                    return None  # an eyes card would die in a lost trick
                fillers += 1
    # The defense is trumpless, so only the filler leads can be lost, and
    # each lost trick swallows at most two defender cards.  The floor is
    # therefore 120 minus the fattest 2*fillers cards they could bank.
    defense = sorted((c.points for c in DECK - kept - put), reverse=True)
    secured = 120 - sum(defense[: 2 * fillers])
    if high < fillers or secured < 61:
        return None
    return HighCardCertificate(
        secured_eyes=secured,
        winning_tricks=4 + run_cards,
        lost_tricks=fillers,
        high_cards=high,
    )


def high_card_theorem(hand12: CardSet) -> Optional[tuple[CardSet, HighCardCertificate]]:
    """A put certified to win a grand outright, if one exists.

    Conservative: fires only for hands keeping all four jacks whose
    non-run cards are eyeless and outnumbered by the secured full-value
    cards, with 61 eyes banked in the declarer's own winning tricks.
    Returns the certifying put with the highest secured-eye count.
    """
    if len(hand12) != 12:
        raise ValueError(f"expected 12 cards, got {len(hand12)}")
    best: Optional[tuple[CardSet, HighCardCertificate]] = None
    for a, b in itertools.combinations(list(hand12), 2):
        put = CardSet.of(a, b)
        cert = _certify_kept(hand12 - put, put)
        if cert and (best is None or cert.secured_eyes > best[1].secured_eyes):
            best = (put, cert)
    return best


# --- filtering -----------------------------------------------------------------


def hard_filter(
    candidates: Sequence[SkatCandidate],
    hand12: CardSet,
    game: GameType,
    subtype: SelectionSubtype,
) -> list[SkatCandidate]:
    """Veto implausible puts; label the fallen; never reject everything.

    Tiers are dropped from the top (refinements first, core bans last)
    until at least one candidate survives, so even an eleven-trump hand
    comes back with a legal discard.
    """
    for max_tier in (3, 2, 1, 0):
        rules = active_rules(game, subtype, max_tier)
        labels = [rejection(c.put, c.remaining, game, rules) for c in candidates]
        if any(label is None for label in labels):
            break
    for cand, label in zip(candidates, labels):
        cand.filtered_by = label
        cand.relaxed = label is None and max_tier < 3
    return [c for c in candidates if c.filtered_by is None]


# --- scoring -------------------------------------------------------------------


def soft_score(features: FeatureVector, coefficients: Sequence[float]) -> float:
    """Weighted sum of the nine candidate features."""
    values = features.as_tuple()
    if len(coefficients) != len(values):
        raise ValueError(f"expected {len(values)} coefficients")
    return float(sum(c * f for c, f in zip(coefficients, values)))


def expected_cost(win_prob: float, value: int) -> float:
    """Expected payoff of declaring a game worth `value` at this win rate.

    A win pays 50 plus the game value; a loss costs 50 plus twice the
    value (lost games double).
    """
    if not 0.0 <= win_prob <= 1.0:
        raise ValueError(f"win probability {win_prob} outside [0, 1]")
    return (50 + value) * win_prob - (50 + 2 * value) * (1.0 - win_prob)


@dataclass(frozen=True, slots=True)
class LambdaRow:
    """One coefficient row; None fields are wildcards."""

    subtype: SelectionSubtype
    position: Optional[Position]
    aces: Optional[int]
    jack_class: Optional[int]
    longest_suit: Optional[int]
    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.coefficients) != 9:
            raise ValueError("a coefficient row has exactly 9 entries")
        if not all(math.isfinite(c) for c in self.coefficients):
            raise ValueError("coefficients must be finite")

    @property
    def specificity(self) -> int:
        keys = (self.position, self.aces, self.jack_class, self.longest_suit)
        return sum(k is not None for k in keys)

    def matches(
        self,
        position: Position,
        aces: int,
        jack_cls: int,
        longest: int,
    ) -> bool:
        return (
            (self.position is None or self.position == position)
            and (self.aces is None or self.aces == aces)
            and (self.jack_class is None or self.jack_class == jack_cls)
            and (self.longest_suit is None or self.longest_suit == longest)
        )


_TRUMP_SUBTYPES = tuple(
    s for s in SelectionSubtype if s is not SelectionSubtype.NULL_LIKE
)


@dataclass(frozen=True)
class LambdaTable:
    """Coefficient rows per subtype plus named expert adjustments.

    Lookup picks the most specific matching row (wildcards count as
    less specific); every trump subtype must keep a catch-all row so a
    lookup can never fail.  Adjustment magnitudes are unitless: they are
    applied relative to the mean coefficient size of the row in play, so
    rescaling a row rescales its adjustments with it.
    """

    rows: tuple[LambdaRow, ...]
    adjustments: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for subtype in _TRUMP_SUBTYPES:
            if not any(
                r.subtype == subtype and r.specificity == 0 for r in self.rows
            ):
                raise ValueError(f"no catch-all coefficient row for {subtype}")
        for name, value in self.adjustments.items():
            if not math.isfinite(value):
                raise ValueError(f"adjustment {name!r} must be finite")

    def coefficients(
        self,
        subtype: SelectionSubtype,
        position: Position,
        aces: int,
        jack_cls: int,
        longest: int,
    ) -> tuple[float, ...]:
        best: Optional[LambdaRow] = None
        for row in self.rows:
            if row.subtype != subtype:
                continue
            if not row.matches(position, aces, jack_cls, longest):
                continue
            if best is None or row.specificity > best.specificity:
                best = row
        if best is None:
            raise LookupError(f"no coefficient row for {subtype}")
        return best.coefficients

    def adjustment(self, name: str) -> float:
        return float(self.adjustments.get(name, 0.0))


def default_lambda_table() -> LambdaTable:
    """Shipped coefficients: point values where settled, midpoints else."""
    mk = lambda st, co: LambdaRow(st, None, None, None, None, co)
    rows = (
        mk(SelectionSubtype.HIGH_CARD_GRAND, (2, 2, 2, 2, 1, 2, 4, 1, 1)),
        mk(SelectionSubtype.TWO_JACK_GRAND, (3, 13.5, 4.5, 4.5, 1, 10, 4, 41, 3)),
        mk(SelectionSubtype.STD_GRAND, (10, 60, 3, 4, 5, 40, 40, 1, 1)),
        # four-jack grands are rare; they reuse the standard-grand row
        mk(SelectionSubtype.FOUR_JACK_GRAND, (10, 60, 3, 4, 5, 40, 40, 1, 1)),
        mk(SelectionSubtype.HIGH_TRUMP_SUIT, (15, 75, 2, 2, 2, 60, 60, 30, 0)),
        mk(SelectionSubtype.LOW_TRUMP_SUIT, (2, 67.5, 3, 35, 2, 40, 12, 12, 22.5)),
    )
    adjustments = {
        "forehand-bank-eyes": 2.0,
        "keep-standing-cards": 6.0,
        "rearhand-third-suit": 2.0,
        "jack-jumper": 1.0,
        "ten-with-king-queen": 3.0,
    }
    return LambdaTable(rows=rows, adjustments=adjustments)


# --- expert adjustments ---------------------------------------------------------


def _standing_put_cards(cand: SkatCandidate, hand12: CardSet, game: GameType) -> int:
    """Put cards that were certain tricks while still in the full hand."""
    count = 0
    trumps = trump_set(game)
    for card in cand.put:
        if card in trumps:
            one = CardSet.of(card)
            with_card = standing_trumps(hand12, game)
            without = standing_trumps(hand12 - one, game, one)
        else:
            pattern = hand12.suit_pattern(card.suit) & _PLAIN_MASK
            bit = 1 << card.rank
            with_card = standing_suit(pattern, 0, "certain", 20)
            without = standing_suit(pattern & ~bit, bit, "certain", 20)
        if with_card > without:
            count += 1
    return count


def _entry_suits(remaining: CardSet, game: GameType) -> int:
    entries = 0
    for suit in Suit:
        if game.is_suit_game and suit == game.trump_suit:
            continue
        pattern = remaining.suit_pattern(suit)
        ace = bool(pattern & 1)
        ten_king = bool(pattern >> Rank.TEN & 1) and bool(pattern >> Rank.KING & 1)
        if ace or ten_king:
            entries += 1
    return entries


def _adjustment_terms(
    cand: SkatCandidate,
    hand12: CardSet,
    game: GameType,
    ctx: GameContext,
) -> Iterable[tuple[str, float]]:
    """Bounded expert nudges, each |term| <= 1, yielded with their ids."""
    remaining = cand.remaining
    if ctx.position is Position.FOREHAND:
        if estimated_lost_tricks(remaining, game, excluded=cand.put) <= 3:
            yield "forehand-bank-eyes", cand.put.eyes / 22.0
    standing = _standing_put_cards(cand, hand12, game)
    if standing:
        yield "keep-standing-cards", -standing / 2.0
    if ctx.position is Position.REARHAND and _entry_suits(remaining, game) >= 2:
        made_void = any(
            hand12.suit_pattern(s) & _PLAIN_MASK
            and not remaining.suit_pattern(s) & _PLAIN_MASK
            for s in Suit
            if not (game.is_suit_game and s == game.trump_suit)
        )
        kept_lone_ten = any(
            remaining.suit_pattern(s) & _PLAIN_MASK & (1 << Rank.TEN)
            and not remaining.suit_pattern(s) & 1
            and bin(remaining.suit_pattern(s) & _PLAIN_MASK).count("1") == 2
            for s in Suit
            if not (game.is_suit_game and s == game.trump_suit)
        )
        if made_void and kept_lone_ten:
            yield "rearhand-third-suit", 1.0
    if len(remaining & JACKS) >= 2 and remaining & _BLACK_JACKS:
        plain_suits = sum(
            1
            for s in Suit
            if remaining.suit_pattern(s) & _PLAIN_MASK
            and not (game.is_suit_game and s == game.trump_suit)
        )
        if plain_suits == 2:
            yield "jack-jumper", 1.0
    if game.is_suit_game:
        for card in cand.put:
            if card.rank != Rank.TEN or card.suit == game.trump_suit:
                continue
            pattern = cand.remaining.suit_pattern(card.suit)
            has_king = bool(pattern >> Rank.KING & 1)
            has_third = bool(pattern >> Rank.QUEEN & 1) or any(
                pattern >> r & 1 for r in _LOW_RANKS
            )
            if has_king and has_third:
                yield "ten-with-king-queen", 1.0
                break


def _apply_adjustments(
    base: float,
    cand: SkatCandidate,
    hand12: CardSet,
    game: GameType,
    ctx: GameContext,
    coefficients: Sequence[float],
    table: LambdaTable,
) -> float:
    scale = sum(abs(c) for c in coefficients) / len(coefficients)
    for name, term in _adjustment_terms(cand, hand12, game, ctx):
        base += table.adjustment(name) * scale * term
    return base


# --- ranking -------------------------------------------------------------------


def _longest_suit(hand12: CardSet) -> int:
    return max(
        bin(hand12.suit_pattern(s) & _PLAIN_MASK).count("1") for s in Suit
    )


def _table_for(game: GameType, tables: TableSet) -> ProbTable:
    return tables.grand if game is GameType.GRAND else tables.suit


def _rank_null(
    candidates: list[SkatCandidate],
    tables: TableSet,
) -> list[SkatCandidate]:
    # Null discards bypass feature scoring: the per-suit loss model is
    # already the whole story, so take the product and sort.
    order = []
    for i, cand in enumerate(candidates):
        prob = null_win_probability(cand.remaining, tables.null)
        cand.win_prob = prob
        cand.expected_cost = expected_cost(prob, game_value(cand.remaining, GameType.NULL).value)
        cand.soft_score = prob
        order.append((-prob, i))
    order.sort()
    return [candidates[i] for _, i in order]


def _score_survivors(
    survivors: list[SkatCandidate],
    hand12: CardSet,
    ctx: GameContext,
    tables: TableSet,
    lambdas: LambdaTable,
) -> None:
    game = ctx.game
    table = _table_for(game, tables)
    value = game_value(hand12, game).value
    coefficients = lambdas.coefficients(
        ctx.subtype,
        ctx.position,
        len(hand12 & ACES),
        jack_class(hand12),
        _longest_suit(hand12),
    )
    for cand in survivors:
        params = winning_params(cand.remaining, cand.put, game, ctx.bid, ctx.position)
        prob = table.probability(params)
        cand.features = feature_vector(cand.remaining, cand.put, game, ctx.position, prob)
        cand.win_prob = prob
        cand.expected_cost = expected_cost(prob, value)
        base = soft_score(cand.features, coefficients)
        cand.soft_score = _apply_adjustments(
            base, cand, hand12, game, ctx, coefficients, lambdas
        )


def select_put(
    hand12: CardSet,
    game: GameType,
    ctx: Optional[GameContext] = None,
    policy: str = "proposal",
    *,
    tables: Optional[TableSet] = None,
    lambdas: Optional[LambdaTable] = None,
    rng: Union[random.Random, int, None] = None,
) -> list[SkatCandidate]:
    """Rank all 66 puts of a 12-card hand under the chosen policy.

    The returned list always holds 66 candidates, best first.  Under the
    proposal policy the veto survivors lead (scored and ordered), the
    vetoed rest trails in canonical order, each labeled with the rule
    that felled it.  Ties everywhere break by canonical order.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    if ctx is None:
        ctx = GameContext.for_hand(hand12, game, Position.FOREHAND)
    if ctx.game is not game:
        raise ValueError("context game does not match")
    if tables is None:
        tables = TableSet(grand=ProbTable("grand"), suit=ProbTable("suit"), null=NullSuitTable())
    if lambdas is None:
        lambdas = default_lambda_table()
    candidates = enumerate_puts(hand12)

    if policy == "random":
        chooser = rng if isinstance(rng, random.Random) else random.Random(rng)
        chooser.shuffle(candidates)
        return candidates

    if game is GameType.NULL:
        return _rank_null(candidates, tables)

    if policy == "proposal":
        survivors = hard_filter(candidates, hand12, game, ctx.subtype)
        lead: list[SkatCandidate] = []
        if game is GameType.GRAND:
            certified = high_card_theorem(hand12)
            if certified is not None:
                put, _cert = certified
                for cand in candidates:
                    if cand.put == put:
                        cand.filtered_by = None  # the certificate outranks vetoes
                        if all(c is not cand for c in survivors):
                            survivors.append(cand)
                        lead = [cand]
                        break
        _score_survivors(survivors, hand12, ctx, tables, lambdas)
        ranked = sorted(
            ((c, i) for i, c in enumerate(candidates) if c.filtered_by is None),
            key=lambda pair: (-pair[0].soft_score, pair[1]),
        )
        ordered = [c for c, _ in ranked if c not in lead]
        tail = [c for c in candidates if c.filtered_by is not None]
        return lead + ordered + tail

    if policy == "winprob":
        table = _table_for(game, tables)
        value = game_value(hand12, game).value
        for cand in candidates:
            params = winning_params(cand.remaining, cand.put, game, ctx.bid, ctx.position)
            cand.win_prob = table.probability(params)
            cand.expected_cost = expected_cost(cand.win_prob, value)
        return _stable_ranked(candidates, key=lambda c: c.expected_cost)

    for cand in candidates:
        if policy == "stegen":
            cand.soft_score = von_stegen(cand.remaining, game, bid_open=False)
        else:
            cand.soft_score = kinback(cand.remaining, game, ctx.position)
    return _stable_ranked(candidates, key=lambda c: c.soft_score)


def _stable_ranked(candidates, key):
    order = sorted(range(len(candidates)), key=lambda i: (-key(candidates[i]), i))
    return [candidates[i] for i in order]


# --- pricing the take ------------------------------------------------------------


def evaluate_take(
    hand10: CardSet,
    game: GameType,
    ctx: GameContext,
    tables: TableSet,
    *,
    loss_base: float = 50.0,
) -> float:
    """Worth of taking the skat: mean over 231 skats of the best put's payoff.

    `loss_base` replaces the flat 50 of the loss branch, a knob for
    pricing defeats more harshly than the plain payoff rule does.
    """
    if len(hand10) != 10:
        raise ValueError(f"expected 10 cards, got {len(hand10)}")
    if ctx.game is not game:
        raise ValueError("context game does not match")
    return float(np.mean(_take_costs(hand10, game, ctx, tables, loss_base)))


def _skat_layouts(hand10: CardSet) -> tuple[np.ndarray, np.ndarray]:
    """(231, 12) card-index rows and (231,) twelve-card masks."""
    held = [c.index for c in hand10]
    unseen = [i for i in range(32) if not hand10.mask >> i & 1]
    rows = np.empty((231, 12), dtype=np.int64)
    for n, (a, b) in enumerate(itertools.combinations(unseen, 2)):
        rows[n] = sorted(held + [a, b])
    masks = (np.int64(1) << rows).sum(axis=1)
    return rows, masks


_PUT_PAIRS = np.array(list(itertools.combinations(range(12), 2)), dtype=np.int64)
_EYES_BY_INDEX = np.array([Rank(i % 8).points for i in range(32)], dtype=np.int64)
_JACK_CLASS_BY_NIBBLE = np.array(
    [5, 4, 4, 2, 4, 3, 3, 1, 4, 3, 3, 1, 3, 1, 1, 0], dtype=np.int64
)


@lru_cache(maxsize=1)
def _certain_by_patterns() -> np.ndarray:
    """certain standing tricks per (held, excluded) plain-suit pattern pair."""
    table = np.zeros((256, 256), dtype=np.int8)
    patterns = [p for p in range(256) if not p & 1 << Rank.JACK]
    for held in patterns:
        for excl in patterns:
            if held & excl:
                continue
            table[held, excl] = int(standing_suit(held, excl, "certain", 20))
    return table


def _bucket_lut(bounds: tuple[int, ...], size: int) -> np.ndarray:
    return np.array([_bucket(v, bounds) for v in range(size)], dtype=np.int64)


@lru_cache(maxsize=1)
def _put_eyes_buckets() -> np.ndarray:
    return _bucket_lut(_W2_BOUNDS, 23)  # two aces put is the ceiling


def _take_costs(
    hand10: CardSet,
    game: GameType,
    ctx: GameContext,
    tables: TableSet,
    loss_base: float = 50.0,
) -> np.ndarray:
    """Best-put expected cost for each of the 231 possible skats."""
    rows, h12_masks = _skat_layouts(hand10)
    bits = np.int64(1) << rows                       # (231, 12)
    puts = bits[:, _PUT_PAIRS[:, 0]] | bits[:, _PUT_PAIRS[:, 1]]   # (231, 66)
    kept = h12_masks[:, None] ^ puts
    eyes_by_pos = _EYES_BY_INDEX[rows]               # (231, 12)
    put_eyes = eyes_by_pos[:, _PUT_PAIRS[:, 0]] + eyes_by_pos[:, _PUT_PAIRS[:, 1]]

    if game is GameType.NULL:
        ratios = tables.null.ratio_array()
        prob = np.ones(kept.shape, dtype=np.float64)
        for shift in (0, 8, 16, 24):
            prob *= ratios[kept >> shift & 0xFF]
        values = np.full(231, game_value(hand10, game).value, dtype=np.float64)
    else:
        keys = _take_keys(kept, puts, put_eyes, game, ctx)
        table = _table_for(game, tables)
        prob = table.probability_array(keys.ravel()).reshape(kept.shape)
        values = np.array(
            [game_value(CardSet(int(m)), game).value for m in h12_masks],
            dtype=np.float64,
        )
    cost = (50.0 + values)[:, None] * prob - (loss_base + 2.0 * values)[:, None] * (1.0 - prob)
    return cost.max(axis=1)


def _take_keys(
    kept: np.ndarray,
    puts: np.ndarray,
    put_eyes: np.ndarray,
    game: GameType,
    ctx: GameContext,
) -> np.ndarray:
    """winning_params -> packed key, vectorized over kept/put mask arrays."""
    trump_mask = np.int64(trump_set(game).mask)
    w5 = np.bitwise_count((kept & trump_mask).astype(np.uint64)).astype(np.int64)
    w1 = np.zeros(kept.shape, dtype=np.int64)
    certain = np.zeros(kept.shape, dtype=np.int64)
    cert = _certain_by_patterns()
    for suit in Suit:
        if game.is_suit_game and suit == game.trump_suit:
            continue
        shift = 8 * suit
        held = kept >> shift & _PLAIN_MASK
        excl = puts >> shift & _PLAIN_MASK
        w1 += held == 0
        certain += cert[held, excl]
    nibble = (
        (kept >> 4 & 1)
        | (kept >> 12 & 1) << 1
        | (kept >> 20 & 1) << 2
        | (kept >> 28 & 1) << 3
    )
    w7 = _JACK_CLASS_BY_NIBBLE[nibble]
    safe = np.zeros(kept.shape, dtype=np.int64)
    alive = np.ones(kept.shape, dtype=bool)
    for card in trump_order(game):
        alive &= (kept >> card.index & 1).astype(bool)
        safe += alive
    taken = np.minimum(10, safe + (w5 - safe) // 2 + certain)
    w8 = 10 - taken
    w2 = _put_eyes_buckets()[put_eyes]
    w3 = _bucket(ctx.bid, _W3_BOUNDS)
    w4 = int(ctx.position)
    key = w1
    key = key * 4 + w2
    key = key * 4 + w3
    key = key * 3 + w4
    key = key * 12 + w5
    key = key * 11 + (10 - w5)
    key = key * 6 + w7
    key = key * 11 + w8
    return key


def _evaluate_take_scalar(
    hand10: CardSet,
    game: GameType,
    ctx: GameContext,
    tables: TableSet,
    loss_base: float = 50.0,
) -> float:
    """Loop-and-dict reference for `evaluate_take`; kept for cross-checks."""
    unseen = DECK - hand10
    total = 0.0
    count = 0
    for s1, s2 in itertools.combinations(list(unseen), 2):
        hand12 = hand10 | CardSet.of(s1, s2)
        value = game_value(hand12, game).value
        best = -math.inf
        for a, b in itertools.combinations(list(hand12), 2):
            put = CardSet.of(a, b)
            kept = hand12 - put
            if game is GameType.NULL:
                prob = null_win_probability(kept, tables.null)
            else:
                params = winning_params(kept, put, game, ctx.bid, ctx.position)
                prob = _table_for(game, tables).probability(params)
            best = max(best, (50.0 + value) * prob - (loss_base + 2.0 * value) * (1.0 - prob))
        total += best
        count += 1
    return total / count


# --- configuration file ------------------------------------------------------------

_CONFIG_FORMAT = "skatkit-scoring"
_CONFIG_VERSION = 1


def save_lambda_table(table: LambdaTable, path: Union[str, Path]) -> None:
    """Write the coefficient rows and adjustments as a line-oriented file.

    Schema: a `# skatkit-scoring 1` header; then one line per row,
    `lambda <subtype> <pos|*> <aces|*> <jacks|*> <longest|*> c1..c9`,
    and one `adjust <id> <magnitude>` line per expert adjustment.
    """
    lines = [f"# {_CONFIG_FORMAT} {_CONFIG_VERSION}"]
    for row in table.rows:
        keys = [
            row.position.code if row.position is not None else "*",
            str(row.aces) if row.aces is not None else "*",
            str(row.jack_class) if row.jack_class is not None else "*",
            str(row.longest_suit) if row.longest_suit is not None else "*",
        ]
        coeffs = " ".join(repr(float(c)) for c in row.coefficients)
        lines.append(f"lambda {row.subtype.value} {' '.join(keys)} {coeffs}")
    for name in sorted(table.adjustments):
        lines.append(f"adjust {name} {table.adjustments[name]!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_lambda_table(path: Union[str, Path]) -> LambdaTable:
    """Read a coefficient file written by `save_lambda_table`."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise ValueError("missing scoring file header")
    header = lines[0].lstrip("#").split()
    if header[:1] != [_CONFIG_FORMAT] or header[1:2] != [str(_CONFIG_VERSION)]:
        raise ValueError(f"unsupported scoring file header {lines[0]!r}")
    rows: list[LambdaRow] = []
    adjustments: dict[str, float] = {}
    for line in lines[1:]:
        if line.startswith("#"):
            continue
        fields = line.split()
        if fields[0] == "lambda":
            if len(fields) != 15:
                raise ValueError(f"malformed coefficient line: {line!r}")
            subtype = SelectionSubtype.from_name(fields[1])
            pos = None if fields[2] == "*" else Position.from_name(fields[2])
            aces = None if fields[3] == "*" else int(fields[3])
            jacks = None if fields[4] == "*" else int(fields[4])
            longest = None if fields[5] == "*" else int(fields[5])
            coeffs = tuple(float(v) for v in fields[6:15])
            rows.append(LambdaRow(subtype, pos, aces, jacks, longest, coeffs))
        elif fields[0] == "adjust":
            if len(fields) != 3:
                raise ValueError(f"malformed adjustment line: {line!r}")
            adjustments[fields[1]] = float(fields[2])
        else:
            raise ValueError(f"unknown scoring directive {fields[0]!r}")
    return LambdaTable(rows=tuple(rows), adjustments=adjustments)
