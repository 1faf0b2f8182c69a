"""Open-card (double-dummy) solver.

Values a play state with both opponents' cards face up: the declarer
maximizes captured eyes (or avoids every trick in null) against a
coalition that minimizes.  The search is exact; the alpha-beta and
transposition-table machinery must return the same value as plain
enumeration, and the test suite holds it to that.

Eye values returned by :func:`solve` are the declarer's final total
including the skat and anything already captured, so 61 is always the
winning threshold.  Null returns 1 when the declarer escapes every trick.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Optional

import numpy as np

from . import _ddcore
from .cards import Card, CardSet, GameType, Position, Rank, Suit, trump_set
from .gamedef import trump_order


@dataclass(frozen=True)
class GameRules:
    """Per-game follow classes and trick powers, shared by solver and play.

    `classv` maps card index to follow class (0..3 plain suit, 4 trump);
    `power` orders cards inside a class; `classmask` gives the member mask
    per class.
    """

    game: GameType
    classv: np.ndarray
    power: np.ndarray
    points: np.ndarray
    classmask: np.ndarray
    order: np.ndarray

    def legal_mask(self, hand_mask: int, led: Optional[Card]) -> int:
        if led is None:
            return hand_mask
        follow = hand_mask & int(self.classmask[self.classv[led.index]])
        return follow if follow else hand_mask

    def beats(self, challenger: Card, holder: Card) -> bool:
        ci, hi = challenger.index, holder.index
        if self.classv[ci] == self.classv[hi]:
            return self.power[ci] > self.power[hi]
        return self.classv[ci] == 4


_NULL_RANK_POWER = {
    Rank.ACE: 7, Rank.KING: 6, Rank.QUEEN: 5, Rank.JACK: 4,
    Rank.TEN: 3, Rank.NINE: 2, Rank.EIGHT: 1, Rank.SEVEN: 0,
}
_PLAIN_RANK_POWER = {
    Rank.ACE: 6, Rank.TEN: 5, Rank.KING: 4, Rank.QUEEN: 3,
    Rank.NINE: 2, Rank.EIGHT: 1, Rank.SEVEN: 0,
}

_RULES_CACHE: dict[GameType, GameRules] = {}


def game_rules(game: GameType) -> GameRules:
    cached = _RULES_CACHE.get(game)
    if cached is not None:
        return cached

    classv = np.zeros(32, dtype=np.int8)
    power = np.zeros(32, dtype=np.int16)
    points = np.zeros(32, dtype=np.int16)
    for i in range(32):
        card = Card.from_index(i)
        points[i] = card.points
        classv[i] = card.suit
        if game is GameType.NULL:
            power[i] = _NULL_RANK_POWER[card.rank]
        elif card.rank is not Rank.JACK:
            power[i] = _PLAIN_RANK_POWER[card.rank]

    if game.is_trump_game:
        for rank_in_run, card in enumerate(trump_order(game)):
            classv[card.index] = 4
            power[card.index] = 100 - rank_in_run

    classmask = np.zeros(5, dtype=np.uint64)
    for i in range(32):
        classmask[classv[i]] |= np.uint64(1 << i)

    # static try-order: trumps strong-first, then plain suits strong-first
    order = np.array(
        sorted(range(32), key=lambda i: (-power[i] - (1000 if classv[i] == 4 else 0), i)),
        dtype=np.int8,
    )
    rules = GameRules(game, classv, power, points, classmask, order)
    _RULES_CACHE[game] = rules
    return rules


@dataclass(frozen=True)
class PlayState:
    """A position during play, always from the deal's seat frame.

    `trick` holds the cards already played to the current trick in play
    order (the leader first).  Hand sizes must be consistent with that.
    """

    hands: tuple[CardSet, CardSet, CardSet]
    game: GameType
    declarer: Position
    leader: Position
    trick: tuple[Card, ...] = ()
    declarer_eyes: int = 0
    declarer_tricks: int = 0
    skat_eyes: int = 0

    def __post_init__(self) -> None:
        union = 0
        total = 0
        for h in self.hands:
            if union & h.mask:
                raise ValueError("hands overlap")
            union |= h.mask
            total += len(h)
        for c in self.trick:
            if union >> c.index & 1:
                raise ValueError(f"trick card {c.code} still in a hand")
        if len(self.trick) > 2:
            raise ValueError("a trick holds at most 2 pending cards")
        sizes = sorted(len(h) for h in self.hands)
        played = len(self.trick)
        if played:
            n = len(self.hands[(self.leader + played) % 3])
            for i in range(3):
                seat = (self.leader + i) % 3
                want = n - 1 if i < played else n
                if len(self.hands[seat]) != want:
                    raise ValueError("hand sizes inconsistent with trick")
        elif sizes[0] != sizes[-1]:
            raise ValueError("hand sizes must match at a trick boundary")

    @property
    def to_move(self) -> Position:
        return Position((self.leader + len(self.trick)) % 3)

    @property
    def cards_left(self) -> int:
        return sum(len(h) for h in self.hands) + len(self.trick)


def legal_moves(state: PlayState) -> CardSet:
    """Cards the seat to move may play (follow class if possible)."""
    rules = game_rules(state.game)
    hand = state.hands[state.to_move]
    led = state.trick[0] if state.trick else None
    return CardSet(rules.legal_mask(hand.mask, led))


def trick_winner(cards: tuple[Card, Card, Card], leader: Position, game: GameType) -> Position:
    """Seat that wins a completed trick led by `leader`."""
    rules = game_rules(game)
    best_card = cards[0]
    best_seat = leader
    for i in (1, 2):
        if rules.beats(cards[i], best_card):
            best_card = cards[i]
            best_seat = Position((leader + i) % 3)
    return best_seat


def apply_move(state: PlayState, card: Card) -> PlayState:
    """Play one legal card, resolving the trick when it completes."""
    if card not in legal_moves(state):
        raise ValueError(f"illegal move {card.code}")
    seat = state.to_move
    hands = list(state.hands)
    hands[seat] = hands[seat].remove(card)
    trick = state.trick + (card,)
    if len(trick) < 3:
        return replace(state, hands=tuple(hands), trick=trick)
    winner = trick_winner(trick, state.leader, state.game)
    eyes = sum(c.points for c in trick)
    declarer_won = winner == state.declarer
    return replace(
        state,
        hands=tuple(hands),
        trick=(),
        leader=winner,
        declarer_eyes=state.declarer_eyes + (eyes if declarer_won else 0),
        declarer_tricks=state.declarer_tricks + (1 if declarer_won else 0),
    )


_tt_generation = 0


def _next_generation() -> int:
    global _tt_generation
    _tt_generation += 1
    if _tt_generation >= 2**32:
        _tt_generation = 1
        _ddcore.TT_GEN.fill(0)
    return _tt_generation


def _core_value(state: PlayState, alpha: int, beta: int, gen: int) -> int:
    """Future declarer value from a trick-boundary or mid-trick state."""
    rules = game_rules(state.game)
    kernel = _ddcore.search_null if state.game is GameType.NULL else _ddcore.search_eyes

    def boundary(hands: tuple[int, int, int], leader: int, a: int, b: int) -> int:
        return int(
            kernel(
                np.uint64(hands[0]), np.uint64(hands[1]), np.uint64(hands[2]),
                leader, a, b, int(state.declarer),
                rules.classv, rules.power, rules.points, rules.classmask, rules.order,
                _ddcore.TT_KEY, _ddcore.TT_VAL, _ddcore.TT_FLAG, _ddcore.TT_GEN,
                np.uint32(gen),
            )
        )

    null_game = state.game is GameType.NULL

    def complete(hands: list[int], trick: list[Card], a: int, b: int) -> int:
        if len(trick) == 3:
            winner = trick_winner((trick[0], trick[1], trick[2]), state.leader, state.game)
            if null_game:
                if winner == state.declarer:
                    return 0
                return boundary((hands[0], hands[1], hands[2]), int(winner), a, b)
            gained = sum(c.points for c in trick) if winner == state.declarer else 0
            return gained + boundary((hands[0], hands[1], hands[2]), int(winner), a - gained, b - gained)
        seat = (state.leader + len(trick)) % 3
        legal = rules.legal_mask(hands[seat], trick[0] if trick else None)
        maximizing = seat == state.declarer
        best = -1 if maximizing else 200
        m = legal
        while m:
            low = m & -m
            m ^= low
            card = Card.from_index(low.bit_length() - 1)
            hands[seat] ^= low
            v = complete(hands, trick + [card], a, b)
            hands[seat] |= low
            if maximizing:
                if v > best:
                    best = v
                if best > a:
                    a = best
            else:
                if v < best:
                    best = v
                if best < b:
                    b = best
            if a >= b:
                break
        return best

    masks = [h.mask for h in state.hands]
    if not state.trick:
        if sum(masks) == 0:
            return 1 if null_game else 0
        return boundary((masks[0], masks[1], masks[2]), int(state.leader), alpha, beta)
    return complete(masks, list(state.trick), alpha, beta)


def solve(state: PlayState, alpha: int = -1, beta: int = 121) -> int:
    """Exact value under optimal play by all three seats.

    Trump games: the declarer's final eye total (skat included), searched
    inside [alpha, beta].  Null: 1 if the declarer takes no trick, else 0.
    """
    gen = _next_generation()
    if state.game is GameType.NULL:
        if state.declarer_tricks > 0:
            return 0
        return _core_value(state, 0, 1, gen)
    base = state.declarer_eyes + state.skat_eyes
    return base + _core_value(state, alpha - base, beta - base, gen)


def solve_win(state: PlayState) -> bool:
    """Does the declarer win from here with everyone playing perfectly?

    Trump games are probed with a one-eye window around the 61 threshold,
    which is much faster than an exact count.
    """
    if state.game is GameType.NULL:
        return solve(state) == 1
    base = state.declarer_eyes + state.skat_eyes
    if base >= 61:
        return True
    remaining = sum(c.points for h in state.hands for c in h) + sum(
        c.points for c in state.trick
    )
    if base + remaining < 61:
        return False
    gen = _next_generation()
    future = _core_value(state, 60 - base, 61 - base, gen)
    return base + future >= 61


def _value(state: PlayState, gen: int) -> int:
    """solve() semantics with a caller-owned table generation."""
    if state.game is GameType.NULL:
        if state.declarer_tricks > 0:
            return 0
        return _core_value(state, 0, 1, gen)
    base = state.declarer_eyes + state.skat_eyes
    return base + _core_value(state, -1 - base, 121 - base, gen)


def _best_card(state: PlayState, gen: int) -> tuple[Card, int]:
    moves = list(legal_moves(state))
    if not moves:
        raise ValueError("no cards to play")
    maximizing = state.to_move == state.declarer
    best: tuple[Card, int] | None = None
    for card in moves:
        value = _value(apply_move(state, card), gen)
        if best is None or (value > best[1] if maximizing else value < best[1]):
            best = (card, value)
    return best


def best_card(state: PlayState) -> tuple[Card, int]:
    """Optimal card for the seat to move, canonical-first among ties.

    The value reported is from :func:`solve` after the move (declarer
    total eyes, or the null win flag).  Sibling moves share one
    transposition-table generation; the value of a state does not depend
    on the root it was searched from, so reuse across siblings is exact.
    """
    return _best_card(state, _next_generation())


def principal_variation(state: PlayState) -> Iterator[tuple[Position, Card, int]]:
    """Optimal line to the end: (seat, card, value-after) per play."""
    gen = _next_generation()
    while any(state.hands):
        seat = state.to_move
        card, value = _best_card(state, gen)
        yield seat, card, value
        state = apply_move(state, card)


def initial_state(
    hands: tuple[CardSet, CardSet, CardSet],
    game: GameType,
    declarer: Position,
    skat: CardSet = CardSet(0),
) -> PlayState:
    """Trick-one state for a declared game (forehand leads)."""
    return PlayState(
        hands=hands,
        game=game,
        declarer=declarer,
        leader=Position.FOREHAND,
        skat_eyes=sum(c.points for c in skat),
    )
