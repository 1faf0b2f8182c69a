"""Auction simulation on top of the take evaluator.

A seat holds a bid when two things are true: some game type could still
be worth the bid (game value of the 10 visible cards), and the priced
worth of picking up the skat clears a threshold.  The price is
:func:`~skatkit.skatselect.evaluate_take`, which sees the bid only
through its bucket, so evaluations are cached per bucket and a whole
ladder climb costs a handful of table scans.

The auction itself is the standard two-phase duel: middlehand speaks to
forehand, the survivor then listens to rearhand, and a deal folds when
nobody will even say 18.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, NamedTuple, Optional, Union

from .cards import CardSet, GameType, Position
from .gamedef import BID_LADDER, game_value
from .handeval import _W3_BOUNDS, _bucket
from .probmodel import TableSet
from .records import GameRecord
from .rules import SelectionSubtype
from .skatselect import GameContext, LambdaTable, evaluate_take, select_put

__all__ = [
    "AuctionResult",
    "AuctionState",
    "BidPolicy",
    "Bidder",
    "OverbidError",
    "bid_decision",
    "max_bid",
    "replay_auction",
    "run_auction",
    "select_game",
]

BidPolicy = Callable[[CardSet, int, Position], bool]

_LADDER_SET = frozenset(BID_LADDER)
# cheapest ladder value per bid bucket, enough to reproduce any bucket's price
_BUCKET_BIDS = tuple(
    next(b for b in BID_LADDER if _bucket(b, _W3_BOUNDS) == g) for g in range(4)
)


class OverbidError(ValueError):
    """The skat left no declarable game worth the winning bid."""

    def __init__(self, bid: int, best_value: int):
        super().__init__(f"bid {bid} exceeds the best available game value {best_value}")
        self.bid = bid
        self.best_value = best_value


class AuctionResult(NamedTuple):
    declarer: Optional[Position]
    winning_bid: Optional[int]
    folded: bool


def _pricing_context(game: GameType, bid: int, position: Position) -> GameContext:
    # the take evaluator reads game, bid and seat off the context but
    # never the subtype, which is only known once the skat is in hand
    if game is GameType.NULL:
        subtype = SelectionSubtype.NULL_LIKE
    elif game is GameType.GRAND:
        subtype = SelectionSubtype.STD_GRAND
    else:
        subtype = SelectionSubtype.LOW_TRUMP_SUIT
    return GameContext(game, position, bid, subtype)


def _hand_potential(hand10: CardSet) -> int:
    return max(game_value(hand10, game).value for game in GameType)


class Bidder:
    """Hold/pass policy priced by the take evaluator.

    `threshold` is the minimum acceptable expected payoff (in Seeger
    points) for picking up the skat; `loss_base` flows into the pricing
    so defeats can be weighted more harshly.  Instances are callable
    with the (hand, bid, seat) signature the auction driver expects.
    Prices are cached per (hand, seat, bid bucket), and a hand's
    standing at a bid never exceeds its standing at any lower bid, so a
    seat that has passed stays passed further up the ladder.
    """

    def __init__(
        self,
        tables: TableSet,
        lambdas: Optional[LambdaTable] = None,
        *,
        threshold: float = 0.0,
        loss_base: float = 50.0,
    ):
        self.tables = tables
        self.lambdas = lambdas
        self.threshold = threshold
        self.loss_base = loss_base
        self._prices: dict[tuple[int, Position, int], float] = {}

    def _bucket_price(self, hand10: CardSet, position: Position, group: int) -> float:
        key = (hand10.mask, position, group)
        if key not in self._prices:
            bid = _BUCKET_BIDS[group]
            self._prices[key] = max(
                evaluate_take(
                    hand10,
                    game,
                    _pricing_context(game, bid, position),
                    self.tables,
                    loss_base=self.loss_base,
                )
                for game in GameType
            )
        return self._prices[key]

    def take_price(self, hand10: CardSet, bid: int, position: Position) -> float:
        """Best take price over game types, clamped never to rise with the bid."""
        group = _bucket(bid, _W3_BOUNDS)
        return min(self._bucket_price(hand10, position, g) for g in range(group + 1))

    def decision(self, hand10: CardSet, current_bid: int, position: Position) -> bool:
        if current_bid not in _LADDER_SET:
            raise ValueError(f"bid {current_bid} is not on the ladder")
        if _hand_potential(hand10) < current_bid:
            return False
        return self.take_price(hand10, current_bid, position) >= self.threshold

    def __call__(self, hand10: CardSet, current_bid: int, position: Position) -> bool:
        return self.decision(hand10, current_bid, position)

    def max_bid(self, hand10: CardSet, position: Position) -> Optional[int]:
        """Highest ladder value this hand holds, or None for an opening pass."""
        held = None
        for bid in BID_LADDER:
            if not self.decision(hand10, bid, position):
                break
            held = bid
        return held

    def select_game(self, hand12: CardSet, bid: int, position: Position) -> tuple[GameType, CardSet]:
        return select_game(hand12, bid, position, self.tables, self.lambdas)


def bid_decision(
    hand10: CardSet,
    current_bid: int,
    position: Position,
    tables: TableSet,
    lambdas: Optional[LambdaTable] = None,
    *,
    threshold: float = 0.0,
    loss_base: float = 50.0,
) -> bool:
    """One-shot hold/pass call; auctions in bulk should share a Bidder."""
    bidder = Bidder(tables, lambdas, threshold=threshold, loss_base=loss_base)
    return bidder.decision(hand10, current_bid, position)


def max_bid(
    hand10: CardSet,
    position: Position,
    tables: TableSet,
    lambdas: Optional[LambdaTable] = None,
    *,
    threshold: float = 0.0,
    loss_base: float = 50.0,
) -> Optional[int]:
    """Highest ladder value the hand holds under the default policy."""
    bidder = Bidder(tables, lambdas, threshold=threshold, loss_base=loss_base)
    return bidder.max_bid(hand10, position)


# --- auction protocol ---------------------------------------------------------


@dataclass
class AuctionState:
    """Live two-phase auction; transitions validate protocol order.

    The speaker announces ascending ladder values, the listener holds or
    retires; when either of the first pair retires, the third seat takes
    over as speaker against the survivor.  A final survivor who was
    never pushed to a bid keeps the option of claiming the game at 18.
    """

    speaker: Optional[Position] = Position.MIDDLEHAND
    listener: Optional[Position] = Position.FOREHAND
    upcoming: Optional[Position] = Position.REARHAND
    current_bid: Optional[int] = None
    offered: Optional[int] = None
    passed: set[Position] = field(default_factory=set)
    winner: Optional[Position] = None

    @property
    def done(self) -> bool:
        return self.winner is not None or len(self.passed) == 3

    def _check_open(self) -> None:
        if self.done:
            raise ValueError("auction already settled")

    def offer(self, value: int) -> None:
        """Speaker announces `value`; binds at once when unopposed."""
        self._check_open()
        if self.offered is not None:
            raise ValueError(f"offer {self.offered} still awaits an answer")
        if value not in _LADDER_SET:
            raise ValueError(f"bid {value} is not on the ladder")
        if self.current_bid is not None and value <= self.current_bid:
            raise ValueError(f"bid {value} does not raise {self.current_bid}")
        if self.listener is None:
            self.current_bid = value
            self.winner = self.speaker
        else:
            self.offered = value

    def hold(self) -> None:
        """Listener accepts the pending offer."""
        self._check_open()
        if self.offered is None:
            raise ValueError("nothing to hold")
        self.current_bid = self.offered
        self.offered = None

    def retire(self, seat: Position) -> None:
        """Seat drops out; a pending offer binds against a retiring listener."""
        self._check_open()
        if seat not in (self.speaker, self.listener):
            raise ValueError(f"{seat.code} has no say right now")
        if seat == self.speaker and self.offered is not None:
            raise ValueError("speaker cannot retire on an unanswered offer")
        if seat == self.listener and self.offered is not None:
            self.current_bid = self.offered
            self.offered = None
        self.passed.add(seat)
        survivor = self.listener if seat == self.speaker else self.speaker
        if self.upcoming is not None:
            self.speaker, self.listener = self.upcoming, survivor
            self.upcoming = None
        elif survivor is None:
            self.winner = None  # the 18 option went begging: folded
        elif self.current_bid is not None:
            self.winner = survivor
        else:
            self.speaker, self.listener = survivor, None


def _per_seat(policy: Union[BidPolicy, Mapping[Position, BidPolicy]]) -> dict[Position, BidPolicy]:
    if isinstance(policy, Mapping):
        missing = [pos for pos in Position if pos not in policy]
        if missing:
            raise ValueError(f"no bid policy for {[p.code for p in missing]}")
        return dict(policy)
    return {pos: policy for pos in Position}


def run_auction(
    deal,
    policy: Union[BidPolicy, Mapping[Position, BidPolicy]],
) -> AuctionResult:
    """Drive the two-phase auction; returns (declarer, winning bid, folded).

    `policy` answers "will this seat go to this bid?" given the seat's
    ten cards; pass one callable for all seats or a per-seat mapping.
    """
    decide = _per_seat(policy)
    state = AuctionState()
    while not state.done:
        if state.listener is None:
            seat = state.speaker
            if decide[seat](deal.hands[seat], BID_LADDER[0], seat):
                state.offer(BID_LADDER[0])
            else:
                state.retire(seat)
            continue
        floor = state.current_bid if state.current_bid is not None else 0
        value = next((b for b in BID_LADDER if b > floor), None)
        speaker = state.speaker
        if value is None or not decide[speaker](deal.hands[speaker], value, speaker):
            state.retire(speaker)
            continue
        state.offer(value)
        listener = state.listener
        if decide[listener](deal.hands[listener], value, listener):
            state.hold()
        else:
            state.retire(listener)
    if state.winner is None:
        return AuctionResult(None, None, True)
    return AuctionResult(state.winner, state.current_bid, False)


def replay_auction(record: GameRecord) -> AuctionResult:
    """Take a recorded auction outcome at face value, skipping decisions."""
    if record.winning_bid not in _LADDER_SET:
        raise ValueError(f"recorded bid {record.winning_bid} is not on the ladder")
    return AuctionResult(record.declarer, record.winning_bid, False)


# --- game selection after the take ---------------------------------------------


def select_game(
    hand12: CardSet,
    bid: int,
    position: Position,
    tables: TableSet,
    lambdas: Optional[LambdaTable] = None,
) -> tuple[GameType, CardSet]:
    """Best (game, put) by expected cost among games still worth the bid."""
    if len(hand12) != 12:
        raise ValueError(f"expected 12 cards, got {len(hand12)}")
    if bid not in _LADDER_SET:
        raise ValueError(f"bid {bid} is not on the ladder")
    best: Optional[tuple[float, GameType, CardSet]] = None
    best_value = 0
    for game in GameType:
        value = game_value(hand12, game).value
        best_value = max(best_value, value)
        if value < bid:
            continue
        ctx = GameContext.for_hand(hand12, game, position, bid)
        top = select_put(hand12, game, ctx, "proposal", tables=tables, lambdas=lambdas)[0]
        if best is None or top.expected_cost > best[0]:
            best = (top.expected_cost, game, top.put)
    if best is None:
        raise OverbidError(bid, best_value)
    return best[1], best[2]
