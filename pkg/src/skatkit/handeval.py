"""Hand-strength scoring and per-suit standing analysis.

Two published expert point systems (von Stegen, Kinback) serve as
baselines, and a pair of suit "minigame" models measure how many tricks a
suit holding is worth on its own:

* `certain` - guaranteed tricks against an adversarial defender holding
  every outstanding card of the suit, declarer free to stop or re-enter.
  No ruffs: this is the pure suit race.
* `with_retake` / `without_retake` - expected tricks over all opponent
  splits of the outstanding cards (weighted by how many of the unseen
  cards each opponent could hold).  A defender still in the suit covers
  the best card so far with its cheapest higher card, sheds low once the
  trick is already lost, and otherwise unloads its strongest guard.  A
  void defender ruffs only while the other defender still follows suit;
  once both are out, the remaining leads stand (by then the declarer has
  drawn trumps).  `without_retake` stops at the first trick the declarer
  fails to win, `with_retake` keeps cashing.

The winning parameters (w1..w8) and feature vector (f1..f9) condense a
candidate (kept hand, put) into the keys used by the probability tables
and the soft scoring function.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .cards import (
    ACES,
    CLUB_JACK,
    EMPTY,
    HEART_JACK,
    JACKS,
    SPADE_JACK,
    TENS,
    CardSet,
    GameType,
    Position,
    Rank,
    Suit,
    trump_set,
)
from .gamedef import trump_order

# plain-suit strength inside a trick: A > 10 > K > Q > 9 > 8 > 7
_PLAIN_POWER = {
    Rank.ACE: 6, Rank.TEN: 5, Rank.KING: 4, Rank.QUEEN: 3,
    Rank.NINE: 2, Rank.EIGHT: 1, Rank.SEVEN: 0,
}
_POWER_BY_BIT = (6, 5, 4, 3, -1, 2, 1, 0)  # suit-pattern bit -> power, jack bit unused

_TOP_TWO_JACKS = CardSet.of(CLUB_JACK, SPADE_JACK)
_TOP_THREE_JACKS = CardSet.of(CLUB_JACK, SPADE_JACK, HEART_JACK)


def _check_hand_size(hand: CardSet) -> None:
    if len(hand) not in (10, 12):
        raise ValueError(f"hand must hold 10 or 12 cards, got {len(hand)}")


def von_stegen(hand: CardSet, game: GameType, bid_open: bool) -> float:
    """Point-count strength of a trump-game hand, half-point resolution."""
    if not game.is_trump_game:
        raise ValueError("score is defined for trump games only")
    _check_hand_size(hand)
    jacks = len(hand & JACKS)
    v = float(jacks)
    v += len(hand & (ACES | TENS))
    if game.is_suit_game:
        v += len(hand & trump_set(game))
        if CLUB_JACK not in hand and jacks > 2:
            v += 0.5
    if len(hand & _TOP_TWO_JACKS) == 2:
        v += 0.5
    if len(hand & _TOP_THREE_JACKS) == 3:
        v += 1.0
    if jacks == 4:
        v += 0.5
    if bid_open:
        v += 0.5
    return v


def kinback(hand: CardSet, game: GameType, pos: Position) -> float:
    """Trick-oriented strength of a trump-game hand."""
    if not game.is_trump_game:
        raise ValueError("score is defined for trump games only")
    _check_hand_size(hand)
    if game is GameType.GRAND:
        return float((pos == Position.FOREHAND) + len(hand & ACES) + len(hand & JACKS))
    kb = 0.0
    for suit in Suit:
        if suit == game.trump_suit:
            continue
        held = hand.suit_pattern(suit)
        a = bool(held & 1)
        t = bool(held >> 1 & 1)
        k = bool(held >> 2 & 1)
        q = bool(held >> 3 & 1)
        n = bool(held >> 5 & 1)
        if a and t:
            kb += 2.0
        if a and k and not t:
            kb += 1.5
        if a and not t and not k:
            kb += 1.0
        if t and k and not a:
            kb += 1.0
        if t and q and n and not a:
            kb += 0.5
        if k and q and n and not a and not t:
            kb += 0.5
    st = safe_tricks(hand & trump_set(game), game)
    return 0.5 * (pos == Position.FOREHAND) + st + kb


def safe_tricks(trump_holding: CardSet, game: GameType | None = None) -> int:
    """Tricks the trump holding wins no matter how the rest is placed.

    Counted as the longest fully-held prefix of the trump order, a lower
    bound on the true minigame value.  When `game` is omitted it is
    inferred from the holding (any non-jack card fixes the suit; a pure
    jack holding reads the same in every trump game).
    """
    if not trump_holding:
        return 0
    if game is None:
        plain = trump_holding - JACKS
        if plain:
            game = GameType(next(iter(plain)).suit.name.lower())
        else:
            game = GameType.GRAND
    order = trump_order(game)
    if trump_holding - CardSet.from_indices(c.index for c in order):
        raise ValueError("holding contains non-trump cards")
    run = 0
    for card in order:
        if card not in trump_holding:
            break
        run += 1
    return run


# --- suit minigames ---------------------------------------------------------


@lru_cache(maxsize=None)
def _certain_race(held: tuple[int, ...], out: tuple[int, ...]) -> int:
    """Guaranteed tricks, declarer leading, one defender holding `out`."""
    if not held:
        return 0
    if not out:
        return len(held)
    best = 0  # stopping is always allowed
    for i, x in enumerate(held):
        rest_h = held[:i] + held[i + 1 :]
        worst = None
        for j, y in enumerate(out):
            rest_o = out[:j] + out[j + 1 :]
            v = (1 if x > y else 0) + _certain_race(rest_h, rest_o)
            if worst is None or v < worst:
                worst = v
        best = max(best, worst)
    return best


def _race_once(held: tuple[int, ...], left: list[int], right: list[int], retake: bool) -> int:
    tricks = 0
    for lead in held:
        winning = True
        top = lead
        for defender, partner in ((left, right), (right, left)):
            if defender:
                if winning:
                    cover = [c for c in defender if c > top]
                    if cover:
                        play = min(cover)
                        top = play
                        winning = False
                    else:
                        play = max(defender)  # cannot cover: unload the big guard
                else:
                    play = min(defender)  # trick already lost: keep guards
                defender.remove(play)
            elif winning and partner:
                winning = False  # short hand ruffs while its partner still follows
        if winning:
            tricks += 1
        elif not retake:
            break
    return tricks


@lru_cache(maxsize=None)
def _expected_race(held: tuple[int, ...], out: tuple[int, ...], unseen: int, retake: bool) -> float:
    """Expected race tricks over all opponent splits of `out`.

    The `unseen` cards hide two 10-card opponent hands (plus a leftover
    pocket when unseen > 20); each split of the outstanding suit cards is
    weighted by the number of ways the remaining unseen cards complete it.
    """
    if not held:
        return 0.0
    m = len(out)
    filler = unseen - m
    pocket = max(0, unseen - 20)
    total_weight = 0
    total_tricks = 0.0
    for assign in itertools.product(range(3), repeat=m):
        k_l = assign.count(0)
        k_r = assign.count(1)
        k_p = m - k_l - k_r
        rem = filler - (10 - k_l)
        if k_p > pocket or k_l > 10 or k_r > 10 or rem < 0:
            continue
        w = comb(filler, 10 - k_l) * comb(rem, 10 - k_r)
        if w == 0:
            continue
        left = [out[i] for i in range(m) if assign[i] == 0]
        right = [out[i] for i in range(m) if assign[i] == 1]
        total_weight += w
        total_tricks += w * _race_once(held, left, right, retake)
    if total_weight == 0:
        return 0.0
    return total_tricks / total_weight


def _suit_powers(pattern: int) -> tuple[int, ...]:
    return tuple(sorted((_POWER_BY_BIT[b] for b in range(8) if pattern >> b & 1 and b != 4), reverse=True))


def standing_suit(held_pattern: int, excluded_pattern: int, mode: str, unseen: int) -> float:
    """Standing tricks for one suit given 8-bit holding/excluded patterns."""
    held = _suit_powers(held_pattern)
    gone = held_pattern | excluded_pattern
    out = tuple(p for p in _suit_powers(0xFF & ~gone))
    if mode == "certain":
        return float(_certain_race(held, out))
    if mode == "with_retake":
        return _expected_race(held, out, unseen, True)
    if mode == "without_retake":
        return _expected_race(held, out, unseen, False)
    raise ValueError(f"unknown standing mode {mode!r}")


def standing_cards(
    hand: CardSet,
    game: GameType,
    mode: str = "certain",
    excluded: CardSet = EMPTY,
) -> dict[Suit, float]:
    """Per-suit standing-trick counts over the non-trump suits.

    `excluded` marks cards known to be out of play (the put), which
    therefore cannot turn up in an opponent hand.
    """
    if not game.is_trump_game:
        raise ValueError("standing analysis applies to trump games only")
    if not hand.isdisjoint(excluded):
        raise ValueError("excluded cards overlap the hand")
    unseen = 32 - len(hand) - len(excluded)
    result: dict[Suit, float] = {}
    for suit in Suit:
        if game.is_suit_game and suit == game.trump_suit:
            continue
        held = hand.suit_pattern(suit) & ~0x10
        excl = excluded.suit_pattern(suit) & ~0x10
        result[suit] = standing_suit(held, excl, mode, unseen)
    return result


def standing_trumps(hand: CardSet, game: GameType, excluded: CardSet = EMPTY) -> int:
    """Guaranteed standing tricks of the trump group, jacks included.

    The trump holding races like a long suit of its own, except that a
    defender out of trumps can never beat a trump lead, so the certain
    minigame applies unchanged.
    """
    if not game.is_trump_game:
        raise ValueError("standing analysis applies to trump games only")
    if not hand.isdisjoint(excluded):
        raise ValueError("excluded cards overlap the hand")
    order = trump_order(game)
    top = len(order) - 1
    held = tuple(top - i for i, c in enumerate(order) if c in hand)
    out = tuple(top - i for i, c in enumerate(order) if c not in hand and c not in excluded)
    return _certain_race(held, out)


# --- winning parameters and features ----------------------------------------

_W2_BOUNDS = (4, 10, 19)  # put eyes: 0-4, 5-10, 11-19, 20+
_W3_BOUNDS = (20, 27, 36)  # bid: <=20, <=27, <=36, above


def _bucket(value: int, bounds: tuple[int, ...]) -> int:
    for i, b in enumerate(bounds):
        if value <= b:
            return i
    return len(bounds)


def jack_class(hand: CardSet) -> int:
    """Six-way jack classification, strongest first.

    0: all four; 1: any three; 2: exactly the two black ones;
    3: any other pair; 4: one; 5: none.
    """
    held = hand & JACKS
    n = len(held)
    if n == 4:
        return 0
    if n == 3:
        return 1
    if n == 2:
        return 2 if held == _TOP_TWO_JACKS else 3
    return 4 if n == 1 else 5


@dataclass(frozen=True)
class WinningParams:
    """Table key describing a declarer's situation after the put."""

    w1: int  # void non-trump suits
    w2: int  # put-eyes group
    w3: int  # bid group
    w4: Position
    w5: int  # trumps held
    w6: int  # plain cards held
    w7: int  # jack class
    w8: int  # estimated lost tricks

    def __post_init__(self) -> None:
        ranges = {
            "w1": (self.w1, 3), "w2": (self.w2, 3), "w3": (self.w3, 3),
            "w5": (self.w5, 11), "w6": (self.w6, 10), "w7": (self.w7, 5),
            "w8": (self.w8, 10),
        }
        for name, (value, top) in ranges.items():
            if not 0 <= value <= top:
                raise ValueError(f"{name}={value} outside 0..{top}")


def void_suits(hand: CardSet, game: GameType) -> int:
    """Non-trump suits with no plain card in hand (jacks do not count)."""
    voids = 0
    for suit in Suit:
        if game.is_suit_game and suit == game.trump_suit:
            continue
        if hand.suit_pattern(suit) & ~0x10 == 0:
            voids += 1
    return voids


def estimated_lost_tricks(hand: CardSet, game: GameType, excluded: CardSet = EMPTY) -> int:
    """Crude 0..10 loss estimate: safe trumps, trump length, suit races.

    Each pair of non-safe trumps is booked as one trick (ruffs or forced
    wins); plain suits contribute their guaranteed race tricks.
    """
    trumps = hand & trump_set(game)
    safe = safe_tricks(trumps, game)
    spare = len(trumps) - safe
    certain_sum = sum(standing_cards(hand, game, "certain", excluded).values())
    taken = min(10, int(safe + spare // 2 + certain_sum))
    return 10 - taken


def winning_params(
    hand10: CardSet,
    put: CardSet,
    game: GameType,
    bid: int,
    pos: Position,
) -> WinningParams:
    """Condense a (kept hand, put) pair into the probability-table key."""
    if len(hand10) != 10 or len(put) != 2:
        raise ValueError("expected a 10-card hand and a 2-card put")
    if not hand10.isdisjoint(put):
        raise ValueError("put overlaps the kept hand")
    if not game.is_trump_game:
        raise ValueError("winning parameters apply to trump games only")
    trumps = len(hand10 & trump_set(game))
    return WinningParams(
        w1=void_suits(hand10, game),
        w2=_bucket(put.eyes, _W2_BOUNDS),
        w3=_bucket(bid, _W3_BOUNDS),
        w4=pos,
        w5=trumps,
        w6=10 - trumps,
        w7=jack_class(hand10),
        w8=estimated_lost_tricks(hand10, game, excluded=put),
    )


@dataclass(frozen=True)
class FeatureVector:
    """Soft-scoring features of a candidate put, f1 first."""

    f1: float  # win probability
    f2: int    # void non-trump suits
    f3: int    # eyes put away
    f4: int    # suits holding both ace and ten
    f5: int    # rear-hand liability: ten and king without the ace
    f6: float  # guaranteed standing tricks
    f7: float  # expected standing tricks, lead recoverable
    f8: float  # expected standing tricks, single visit
    f9: int    # suits entered from the top (ace, or ten-king)

    def as_tuple(self) -> tuple[float, ...]:
        return (self.f1, self.f2, self.f3, self.f4, self.f5,
                self.f6, self.f7, self.f8, self.f9)


def feature_vector(
    hand10: CardSet,
    put: CardSet,
    game: GameType,
    pos: Position,
    win_prob: float,
) -> FeatureVector:
    """Features of keeping `hand10` and putting `put`.

    The win probability is supplied by the caller (it comes out of the
    probability tables, which live a layer above this module).
    """
    if len(hand10) != 10 or len(put) != 2:
        raise ValueError("expected a 10-card hand and a 2-card put")
    if not game.is_trump_game:
        raise ValueError("features apply to trump games only")
    f4 = 0
    f5 = 0
    f9 = 0
    for suit in Suit:
        if game.is_suit_game and suit == game.trump_suit:
            continue
        held = hand10.suit_pattern(suit) & ~0x10
        a = bool(held & 1)
        t = bool(held >> 1 & 1)
        k = bool(held >> 2 & 1)
        if a and t:
            f4 += 1
        if t and k and not a:
            f5 += 1
        if a or (t and k):
            f9 += 1
    if pos != Position.REARHAND:
        f5 = 0
    return FeatureVector(
        f1=win_prob,
        f2=void_suits(hand10, game),
        f3=put.eyes,
        f4=f4,
        f5=f5,
        f6=sum(standing_cards(hand10, game, "certain", put).values()),
        f7=sum(standing_cards(hand10, game, "with_retake", put).values()),
        f8=sum(standing_cards(hand10, game, "without_retake", put).values()),
        f9=f9,
    )
