"""Veto rules for skat discards in trump games.

A candidate put can be rejected outright before any scoring happens:
discarding trumps, breaking up a guarded ten, or wasting the higher of
two equivalent spot cards are all mistakes no ranking should have to
price in.  Each veto is a named :class:`PutRule`; the active set depends
on the game and on the hand subtype (a two-jack grand guards its jacks,
a high-card grand does not need to).

Rules carry a tier so an over-constrained hand (eleven trumps, say) can
be rescued by dropping the least essential rules first:

* tier 1 -- core bans (never discard a trump in a suit game),
* tier 2 -- enforcement (sole tens must go, jack and ace guards),
* tier 3 -- refinements (equivalences, guard patterns, preferences).

The filter loop that applies these and relaxes tiers lives in
:mod:`skatkit.skatselect`; this module only knows single candidates.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Optional

from .cards import Card, CardSet, Rank, Suit, trump_set
from .gamedef import GameType

__all__ = [
    "SelectionSubtype",
    "PutRule",
    "RULES",
    "active_rules",
    "rejection",
]


class SelectionSubtype(str, Enum):
    """Hand families that want a different discard emphasis."""

    HIGH_CARD_GRAND = "high_card_grand"
    TWO_JACK_GRAND = "two_jack_grand"
    STD_GRAND = "std_grand"
    FOUR_JACK_GRAND = "four_jack_grand"
    HIGH_TRUMP_SUIT = "high_trump_suit"
    LOW_TRUMP_SUIT = "low_trump_suit"
    NULL_LIKE = "null_like"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value

    @classmethod
    def from_name(cls, name: str) -> "SelectionSubtype":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown selection subtype {name!r}") from None


_GRAND_SUBTYPES = frozenset(
    {
        SelectionSubtype.HIGH_CARD_GRAND,
        SelectionSubtype.TWO_JACK_GRAND,
        SelectionSubtype.STD_GRAND,
        SelectionSubtype.FOUR_JACK_GRAND,
    }
)
_SUIT_SUBTYPES = frozenset(
    {SelectionSubtype.HIGH_TRUMP_SUIT, SelectionSubtype.LOW_TRUMP_SUIT}
)

_LOW_RANKS = (Rank.NINE, Rank.EIGHT, Rank.SEVEN)
_TEN_BIT = 1 << Rank.TEN
_PLAIN_MASK = 0xFF & ~(1 << Rank.JACK)


def _plain_suits(game: GameType) -> tuple[Suit, ...]:
    if game.is_suit_game:
        return tuple(s for s in Suit if s != game.trump_suit)
    return tuple(Suit)


def _low_cards(cards: CardSet) -> list[Card]:
    return [c for c in cards if c.rank in _LOW_RANKS]


def _kings(cards: CardSet) -> list[Card]:
    return [c for c in cards if c.rank == Rank.KING]


# --- predicates --------------------------------------------------------------
# Each takes (put, remaining, game); hand12 is their union.


def _puts_trump(put: CardSet, remaining: CardSet, game: GameType) -> bool:
    return bool(put & trump_set(game))


def _puts_jack(put: CardSet, remaining: CardSet, game: GameType) -> bool:
    return any(c.rank == Rank.JACK for c in put)


def _puts_ace(put: CardSet, remaining: CardSet, game: GameType) -> bool:
    return any(c.rank == Rank.ACE for c in put)


def _sole_tens(hand12: CardSet, game: GameType) -> list[Card]:
    tens = []
    for suit in _plain_suits(game):
        if hand12.suit_pattern(suit) & _PLAIN_MASK == _TEN_BIT:
            tens.append(Card(suit, Rank.TEN))
    return tens


def _skips_sole_ten(put: CardSet, remaining: CardSet, game: GameType) -> bool:
    sole = _sole_tens(put | remaining, game)
    if not sole or len(sole) >= 3:
        return False
    return any(ten not in put for ten in sole)


def _ace_ten_unguarded(put: CardSet, remaining: CardSet, game: GameType) -> bool:
    # A put of ace and ten from one three-card suit leaves a lone loser
    # behind unless that third card is the king.
    cards = list(put)
    if len(cards) != 2 or cards[0].suit != cards[1].suit:
        return False
    if {cards[0].rank, cards[1].rank} != {Rank.ACE, Rank.TEN}:
        return False
    suit = cards[0].suit
    hand12 = put | remaining
    pattern = hand12.suit_pattern(suit) & _PLAIN_MASK
    return bin(pattern).count("1") == 3 and Card(suit, Rank.KING) not in hand12


def _ten_put_before_ace(put: CardSet, remaining: CardSet, game: GameType) -> bool:
    # The ace banks one more eye and the leftover of the pair is a
    # master either way.
    return any(
        c.rank == Rank.TEN and Card(c.suit, Rank.ACE) in remaining for c in put
    )


def _higher_equivalent_put(high: Rank, low: Rank, via: Optional[Rank] = None):
    def check(put: CardSet, remaining: CardSet, game: GameType) -> bool:
        hand12 = put | remaining
        for c in put:
            if c.rank != high or Card(c.suit, low) not in remaining:
                continue
            if via is not None and Card(c.suit, via) not in hand12:
                continue
            return True
        return False

    return check


def _breaks_ten_for_sole_low(put: CardSet, remaining: CardSet, game: GameType) -> bool:
    if not any(c.rank == Rank.TEN for c in put):
        return False
    if not any(c.rank in _LOW_RANKS for c in put):
        return False
    for suit in _plain_suits(game):
        pattern = remaining.suit_pattern(suit) & _PLAIN_MASK
        if pattern & (pattern - 1) == 0 and pattern >= 1 << Rank.NINE:
            return True  # a lone spot card could make the void instead
    return False


def _guarded_ten_kept(remaining: CardSet, suit: Suit, game: GameType) -> bool:
    if game.is_suit_game and suit == game.trump_suit:
        return False
    if Card(suit, Rank.TEN) not in remaining:
        return False
    return any(Card(suit, r) in remaining for r in _LOW_RANKS)


def _king_ten_kept(remaining: CardSet, suit: Suit, game: GameType) -> bool:
    if game.is_suit_game and suit == game.trump_suit:
        return False
    return Card(suit, Rank.KING) in remaining and Card(suit, Rank.TEN) in remaining


def _king_with_low_strips_guard(put: CardSet, remaining: CardSet, game: GameType) -> bool:
    kings = _kings(put)
    lows = _low_cards(put)
    if len(kings) != 1 or len(lows) != 1 or kings[0].suit == lows[0].suit:
        return False
    return _guarded_ten_kept(remaining, kings[0].suit, game)


def _low_pair_strips_duck(put: CardSet, remaining: CardSet, game: GameType) -> bool:
    lows = _low_cards(put)
    if len(lows) != 2 or lows[0].suit == lows[1].suit:
        return False
    return any(_king_ten_kept(remaining, c.suit, game) for c in lows)


def _king_pair_strips_guard(put: CardSet, remaining: CardSet, game: GameType) -> bool:
    kings = _kings(put)
    if len(kings) != 2:
        return False
    return any(_guarded_ten_kept(remaining, k.suit, game) for k in kings)


def _low_with_king_strips_duck(put: CardSet, remaining: CardSet, game: GameType) -> bool:
    kings = _kings(put)
    lows = _low_cards(put)
    if len(kings) != 1 or len(lows) != 1 or kings[0].suit == lows[0].suit:
        return False
    return _king_ten_kept(remaining, lows[0].suit, game)


def _king_with_queen_strips_guard(put: CardSet, remaining: CardSet, game: GameType) -> bool:
    kings = _kings(put)
    queens = [c for c in put if c.rank == Rank.QUEEN]
    if len(kings) != 1 or len(queens) != 1 or kings[0].suit == queens[0].suit:
        return False
    return _king_ten_kept(remaining, queens[0].suit, game)


# --- the rule table ----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PutRule:
    """One named veto: reject a put when ``rejects`` fires."""

    rule_id: str
    tier: int
    subtypes: frozenset[SelectionSubtype]
    rejects: Callable[[CardSet, CardSet, GameType], bool]
    description: str

    def applies_to(self, subtype: SelectionSubtype) -> bool:
        return subtype in self.subtypes


_ALL_TRUMP = _GRAND_SUBTYPES | _SUIT_SUBTYPES
_JACK_GUARDED = frozenset(
    {SelectionSubtype.TWO_JACK_GRAND, SelectionSubtype.FOUR_JACK_GRAND}
)
_ACE_GUARDED = _JACK_GUARDED | {SelectionSubtype.LOW_TRUMP_SUIT}

RULES: tuple[PutRule, ...] = (
    PutRule(
        "no-trump-discard",
        1,
        _SUIT_SUBTYPES,
        _puts_trump,
        "suit games never bury a trump card",
    ),
    PutRule(
        "no-jack-discard",
        2,
        _JACK_GUARDED,
        _puts_jack,
        "grands built on few or all jacks keep every jack",
    ),
    PutRule(
        "no-ace-discard",
        2,
        _ACE_GUARDED,
        _puts_ace,
        "eye-oriented hands keep their aces as trick takers",
    ),
    PutRule(
        "sole-ten-enforce",
        2,
        _ALL_TRUMP,
        _skips_sole_ten,
        "unguarded lone tens must go into the skat, unless there are three",
    ),
    PutRule(
        "ace-ten-needs-king",
        3,
        _ALL_TRUMP,
        _ace_ten_unguarded,
        "burying ace and ten from a three-card suit needs the king behind",
    ),
    PutRule(
        "put-ace-before-ten",
        3,
        _ALL_TRUMP,
        _ten_put_before_ace,
        "of an ace-ten pair, bury the ace: one more eye",
    ),
    PutRule(
        "equiv-nine-eight",
        3,
        _ALL_TRUMP,
        _higher_equivalent_put(Rank.NINE, Rank.EIGHT),
        "never bury a nine while the equivalent eight stays behind",
    ),
    PutRule(
        "equiv-eight-seven",
        3,
        _ALL_TRUMP,
        _higher_equivalent_put(Rank.EIGHT, Rank.SEVEN),
        "never bury an eight while the equivalent seven stays behind",
    ),
    PutRule(
        "equiv-nine-seven",
        3,
        _ALL_TRUMP,
        _higher_equivalent_put(Rank.NINE, Rank.SEVEN, via=Rank.EIGHT),
        "with the eight in hand, nine and seven are equivalent: keep the nine",
    ),
    PutRule(
        "void-low-before-ten",
        3,
        _ALL_TRUMP,
        _breaks_ten_for_sole_low,
        "do not pair a ten with a spot card while a lone spot card could void",
    ),
    PutRule(
        "guard-king-with-low",
        3,
        _ALL_TRUMP,
        _king_with_low_strips_guard,
        "putting king plus foreign spot card strips a kept ten of its guard",
    ),
    PutRule(
        "duck-card-with-low",
        3,
        _ALL_TRUMP,
        _low_pair_strips_duck,
        "keep the spot card that ducks under while king and ten stay",
    ),
    PutRule(
        "guard-kings-pair",
        3,
        _ALL_TRUMP,
        _king_pair_strips_guard,
        "putting two kings strips a kept spot-and-ten suit of its guard",
    ),
    PutRule(
        "duck-card-with-king",
        3,
        _ALL_TRUMP,
        _low_with_king_strips_duck,
        "keep the duck card of a king-ten suit over a foreign king put",
    ),
    PutRule(
        "guard-queen-with-king",
        3,
        _ALL_TRUMP,
        _king_with_queen_strips_guard,
        "putting the queen of a kept king-ten suit strips its second guard",
    ),
)

_RULE_BY_ID = {rule.rule_id: rule for rule in RULES}
if len(_RULE_BY_ID) != len(RULES):  # pragma: no cover - table sanity
    raise AssertionError("duplicate rule id in the veto table")


def rule_by_id(rule_id: str) -> PutRule:
    try:
        return _RULE_BY_ID[rule_id]
    except KeyError:
        raise KeyError(f"unknown put rule {rule_id!r}") from None


def active_rules(
    game: GameType,
    subtype: SelectionSubtype,
    max_tier: int = 3,
) -> tuple[PutRule, ...]:
    """The vetoes in force for this game and subtype, strongest tiers first.

    `max_tier` caps the refinement level: 3 applies everything, 1 keeps
    only the core bans, 0 disables the table (the relaxation endpoint).
    """
    if not game.is_trump_game:
        raise ValueError("put rules apply to trump games only")
    picked = [
        r for r in RULES if r.tier <= max_tier and r.applies_to(subtype)
    ]
    picked.sort(key=lambda r: (r.tier, r.rule_id))
    return tuple(picked)


def rejection(
    put: CardSet,
    remaining: CardSet,
    game: GameType,
    rules: Iterable[PutRule],
) -> Optional[str]:
    """Id of the first rule vetoing this put, or None if it survives."""
    if len(put) != 2 or len(remaining) != 10:
        raise ValueError("expected a 2-card put and a 10-card remainder")
    if not put.isdisjoint(remaining):
        raise ValueError("put overlaps the kept hand")
    for rule in rules:
        if rule.rejects(put, remaining, game):
            return rule.rule_id
    return None
