"""Shared table builders for the test modules."""

import functools
import random

from skatkit.cards import CardSet, GameType, Position
from skatkit.dealing import random_deals
from skatkit.gamedef import BID_LADDER, Outcome
from skatkit.handeval import von_stegen
from skatkit.probmodel import NullSuitTable, ProbTable, TableSet, build_tables
from skatkit.records import GameRecord

TRUMP_GAMES = (GameType.GRAND, GameType.CLUBS, GameType.SPADES,
               GameType.HEARTS, GameType.DIAMONDS)


def empty_tables():
    return TableSet(grand=ProbTable("grand"), suit=ProbTable("suit"), null=NullSuitTable())


@functools.lru_cache(maxsize=None)
def skill_tables(seed=13, count=1500, min_samples=12):
    """Tables whose win rates track a published strength score.

    Outcomes are synthesized, not played out: eyes follow the von Stegen
    score, so stronger holdings land in winning cells and the bidder has
    a gradient worth testing against.
    """
    rng = random.Random(seed)
    records = []
    for deal in random_deals(seed, count):
        declarer = Position(rng.randrange(3))
        hand12 = deal.hands[declarer] | deal.skat
        game = rng.choice(TRUMP_GAMES)
        strength = von_stegen(hand12, game, bid_open=False)
        eyes = max(0, min(120, int(rng.gauss(strength * 9.0, 12.0))))
        put = CardSet.of(*sorted(hand12, key=lambda c: (c.points, c.index))[:2])
        records.append(GameRecord(
            deal=deal,
            winning_bid=rng.choice(BID_LADDER[:6]),
            declarer=declarer,
            game=game,
            put=put,
            outcome=Outcome.for_game(game, eyes, 5),
            source="synthetic",
        ))
    return build_tables(records, min_samples=min_samples)
