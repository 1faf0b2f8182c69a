"""Corpus generation by self-play: deal, declare, bury, play out exactly.

Table building needs played games before any table exists, so declaration
here cannot use the probability model it feeds.  Seats are scored with the
closed-form hand strengths instead, with seeded noise so that mediocre
declarations (the informative ones) stay in the mix, and the put rotates
through several selection policies for cell coverage.  Play is exact: the
declared game is handed to the open-cards solver and the win flag is its
truth.

The stored eye count is the solver's threshold bound (at least 61 on wins,
at most 60 on losses), not a full count, and trick counts are left at the
minimal value consistent with the flag; nothing downstream reads more than
the flag.
"""

from __future__ import annotations

import random
from typing import Iterator, Optional

from .cards import CardSet, GameType, Position
from .dealing import Deal, random_deals
from .ddsolver import initial_state, solve
from .gamedef import BID_LADDER, Outcome, game_value
from .handeval import von_stegen
from .probmodel import _NULL_POWER_BY_BIT, NullSuitTable, null_win_probability
from .records import GameRecord
from .skatselect import GameContext, select_put

TRUMP_GAMES = (GameType.GRAND, GameType.CLUBS, GameType.SPADES,
               GameType.HEARTS, GameType.DIAMONDS)

# put policies rotated through the corpus, weighted toward the closed-form
# scorers but keeping a random share so weak cells see samples too
_PUT_POLICIES = ("stegen", "kinback", "random")
_PUT_WEIGHTS = (0.45, 0.35, 0.20)

_NULL_FLOOR = 0.25   # never declare null below this default-model estimate


def _best_trump(hand: CardSet, rng: random.Random, noise: float) -> GameType:
    return max(
        TRUMP_GAMES,
        key=lambda g: von_stegen(hand, g, bid_open=False) + rng.gauss(0.0, noise),
    )


def _pick_declaration(
    hand12: CardSet,
    rng: random.Random,
    noise: float,
    null_share: float,
    null_model: NullSuitTable,
) -> GameType:
    if rng.random() < null_share:
        if null_win_probability(hand12 - _worst_null_put(hand12), null_model) >= _NULL_FLOOR:
            return GameType.NULL
    return _best_trump(hand12, rng, noise)


def _worst_null_put(hand12: CardSet) -> CardSet:
    # highest two cards by null rank order, a cheap stand-in for the real put
    ranked = sorted(hand12, key=lambda c: (-_NULL_POWER_BY_BIT[c.rank], c.index))
    return CardSet.of(*ranked[:2])


def _legal_bid(value: int, rng: random.Random) -> int:
    slice_ = [b for b in BID_LADDER if b <= value]
    return rng.choice(slice_) if slice_ else BID_LADDER[0]


def play_out(deal: Deal, declarer: Position, game: GameType, put: CardSet) -> Outcome:
    """Exact outcome of a declared game with the given put, everyone perfect."""
    hands = list(deal.hands)
    hands[declarer] = (deal.hands[declarer] | deal.skat) - put
    state = initial_state(tuple(hands), game, declarer, skat=put)
    if game is GameType.NULL:
        won = solve(state) == 1
        return Outcome(0, 0 if won else 1, won)
    eyes_bound = solve(state, 60, 61)
    return Outcome(eyes_bound, 0, eyes_bound >= 61)


def generate_records(
    count: int,
    seed: int = 0,
    *,
    null_share: float = 0.12,
    noise: float = 1.5,
    source: str = "selfplay",
    stream: int = 0,
) -> Iterator[GameRecord]:
    """Yield `count` exactly-played games from the seeded deal stream."""
    rng = random.Random(f"selfplay:{seed}:{stream}")
    null_model = NullSuitTable()
    for deal in random_deals(seed, count, stream=stream):
        scores = [
            max(von_stegen(deal.hands[p], g, bid_open=False) for g in TRUMP_GAMES)
            + rng.gauss(0.0, noise)
            for p in Position
        ]
        declarer = Position(max(range(3), key=scores.__getitem__))
        hand12 = deal.hands[declarer] | deal.skat
        game = _pick_declaration(hand12, rng, noise, null_share, null_model)
        bid = _legal_bid(game_value(hand12, game).value, rng)
        ctx = GameContext.for_hand(hand12, game, declarer, bid)
        policy = rng.choices(_PUT_POLICIES, weights=_PUT_WEIGHTS)[0]
        put = select_put(
            hand12, game, ctx, policy, rng=rng.randrange(1 << 30)
        )[0].put
        yield GameRecord(
            deal=deal,
            winning_bid=bid,
            declarer=declarer,
            game=game,
            put=put,
            outcome=play_out(deal, declarer, game, put),
            source=source,
        )
