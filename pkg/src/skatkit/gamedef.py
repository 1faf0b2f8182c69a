"""Game values, payoffs, and the bid ladder.

Base values: diamonds 9, hearts 10, spades 11, clubs 12, grand 24; the
multiplier is matadors + 1 (with or against, counted from the club jack
down the trump order).  Null is a fixed 23.  No hand/schneider/schwarz
tiers: the declarer wins a trump game at 61 eyes and a null game by
taking no trick.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .cards import Card, CardSet, GameType, Rank, Suit

BASE_VALUES = {
    GameType.GRAND: 24,
    GameType.CLUBS: 12,
    GameType.SPADES: 11,
    GameType.HEARTS: 10,
    GameType.DIAMONDS: 9,
}
NULL_VALUE = 23

WIN_BASE = 50
LOSS_BASE = 50
OPPONENT_BONUS = 40

_PLAIN_TRUMP_RANKS = (Rank.ACE, Rank.TEN, Rank.KING, Rank.QUEEN, Rank.NINE, Rank.EIGHT, Rank.SEVEN)


def trump_order(game: GameType) -> tuple[Card, ...]:
    """Trump cards from strongest to weakest (club jack first)."""
    if not game.is_trump_game:
        raise ValueError("null has no trump order")
    jacks = tuple(Card(s, Rank.JACK) for s in Suit)
    suit = game.trump_suit
    if suit is None:
        return jacks
    return jacks + tuple(Card(suit, r) for r in _PLAIN_TRUMP_RANKS)


def matador_count(cards: CardSet, game: GameType) -> int:
    """Length of the unbroken run, with or against, from the club jack.

    Holding the club jack counts consecutive held trumps; lacking it counts
    consecutive missing ones.  `cards` is whatever the count is taken over:
    the full 12 (hand plus skat) for the real game value, the 10-card hand
    for a bidding-time potential.
    """
    order = trump_order(game)
    holding = order[0] in cards
    run = 0
    for card in order:
        if (card in cards) == holding:
            run += 1
        else:
            break
    return run


@dataclass(frozen=True, slots=True)
class GameValue:
    base: int
    multiplier: int

    @property
    def value(self) -> int:
        return self.base * self.multiplier


def game_value(cards: CardSet, game: GameType) -> GameValue:
    """Value of a declared game: base x (matadors + 1); null fixed 23."""
    if game is GameType.NULL:
        return GameValue(NULL_VALUE, 1)
    return GameValue(BASE_VALUES[game], matador_count(cards, game) + 1)


@dataclass(frozen=True, slots=True)
class Outcome:
    """Result of one played game from the declarer's side."""

    declarer_eyes: int
    declarer_tricks: int
    won: bool

    def __post_init__(self) -> None:
        if not 0 <= self.declarer_eyes <= 120:
            raise ValueError(f"declarer eyes out of range: {self.declarer_eyes}")
        if not 0 <= self.declarer_tricks <= 10:
            raise ValueError(f"declarer tricks out of range: {self.declarer_tricks}")

    @classmethod
    def for_game(cls, game: GameType, declarer_eyes: int, declarer_tricks: int) -> "Outcome":
        if game is GameType.NULL:
            won = declarer_tricks == 0
        else:
            won = declarer_eyes >= 61
        return cls(declarer_eyes, declarer_tricks, won)

    def consistent_with(self, game: GameType) -> bool:
        if game is GameType.NULL:
            return self.won == (self.declarer_tricks == 0)
        return self.won == (self.declarer_eyes >= 61)


def seeger_payoff(won: bool, value: int, win_base: int = WIN_BASE, loss_base: int = LOSS_BASE) -> int:
    """Declarer's Seeger score for one game: +(50+V) won, -(50+2V) lost.

    `loss_base` is the knob that makes lost declarations more expensive
    (e.g. 90 instead of 50) without touching the win side.
    """
    if won:
        return win_base + value
    return -(loss_base + 2 * value)


def series_score(
    payoffs: Iterable[float],
    games_played: int,
    opponent_bonus: int = OPPONENT_BONUS,
    opponents: int = 2,
) -> float:
    """Extended-Seeger series total normalized to a 36-game table.

    Sums the declarer payoffs, adds the per-opponent bonus for every lost
    game (negative payoff), and scales by 36 / games_played.
    """
    if games_played <= 0:
        raise ValueError("games_played must be positive")
    total = 0.0
    for p in payoffs:
        total += p
        if p < 0:
            total += opponent_bonus * opponents
    return total * 36.0 / games_played


def bid_ladder() -> tuple[int, ...]:
    """All holdable bid values in ascending order (18, 20, 22, 23, 24, ...)."""
    values = {NULL_VALUE}
    for game, base in BASE_VALUES.items():
        top = 5 if game is GameType.GRAND else 12
        values.update(base * m for m in range(2, top + 1))
    return tuple(sorted(values))


BID_LADDER = bid_ladder()


def is_legal_announcement(bid: int, value: int) -> bool:
    """A declared game covers the bid iff its value is at least the bid."""
    return value >= bid


def next_bid(current: int, ladder: Sequence[int] = BID_LADDER) -> int | None:
    """Smallest ladder value above `current`, or None past the top."""
    for v in ladder:
        if v > current:
            return v
    return None
