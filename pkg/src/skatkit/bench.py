"""Paired policy benchmark and corpus replay.

`bench` plays the same deals under every policy: one auction decides the
declarer and game, each policy buries its own two cards, and the solver
plays the rest perfectly.  Deals that fold, or where the taken skat
leaves no game worth the bid, drop out before any policy acts, so the
pairing is exact.  `replay` walks a recorded corpus and tabulates, per
record, whether the recorded game, the solver's line with the recorded
put, and the policy's put each win.

Scoring is the extended series convention: the declarer collects
50 + value on a win, pays 50 + 2*value plus the per-opponent bonus on a
loss, normalized to a 36-game table.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .bidding import Bidder, OverbidError, run_auction, select_game
from .cards import DECK, CardSet, GameType, Position
from .dealing import Deal, random_deals
from .ddsolver import initial_state, solve_win
from .gamedef import game_value, seeger_payoff, series_score
from .probmodel import TableSet
from .records import GameRecord
from .selfplay import play_out
from .skatselect import GameContext, LambdaTable, select_put

PLAYOUT_MODES = ("glassbox", "pimc")
DEFAULT_WORLDS = 8


# --- playing one declared game ----------------------------------------------


def _pimc_won(
    deal: Deal,
    declarer: Position,
    game: GameType,
    put: CardSet,
    worlds: int,
    rng: random.Random,
) -> bool:
    """Majority vote over sampled defender worlds.

    The declarer's information set fixes only their own 12 cards; each
    world deals the unseen 20 into the defender seats at random and is
    solved exactly.  A sensitivity probe for the put, not a model of
    hidden-information play.
    """
    kept = (deal.hands[declarer] | deal.skat) - put
    unseen = list(DECK - kept - put)
    defenders = [p for p in Position if p is not declarer]
    wins = 0
    for _ in range(worlds):
        rng.shuffle(unseen)
        hands: list[CardSet] = [CardSet(0)] * 3
        hands[declarer] = kept
        hands[defenders[0]] = CardSet.of(*unseen[:10])
        hands[defenders[1]] = CardSet.of(*unseen[10:])
        state = initial_state(tuple(hands), game, declarer, skat=put)
        wins += solve_win(state)
    return 2 * wins > worlds


def _played_won(
    deal: Deal,
    declarer: Position,
    game: GameType,
    put: CardSet,
    mode: str,
    worlds: int,
    rng: random.Random,
) -> bool:
    if mode == "pimc":
        return _pimc_won(deal, declarer, game, put, worlds, rng)
    return play_out(deal, declarer, game, put).won


# --- the paired bench ---------------------------------------------------------


@dataclass
class PolicyResult:
    """One policy's line of the bench report."""

    name: str
    payoffs: list[int] = field(default_factory=list)

    @property
    def games(self) -> int:
        return len(self.payoffs)

    @property
    def wins(self) -> int:
        return sum(p > 0 for p in self.payoffs)

    @property
    def win_rate(self) -> float:
        return self.wins / self.games if self.games else 0.0

    @property
    def series_mean(self) -> float:
        """Extended series score normalized to 36 games."""
        if not self.games:
            return 0.0
        return series_score(self.payoffs, self.games)

    @property
    def mean_payoff(self) -> float:
        return sum(self.payoffs) / self.games if self.games else 0.0


@dataclass
class BenchReport:
    """Everything one bench run produced, per policy and in aggregate."""

    policies: list[PolicyResult]
    seed: int
    mode: str
    deals: int
    scored: int
    folds: int
    overbids: int

    def result(self, name: str) -> PolicyResult:
        for p in self.policies:
            if p.name == name:
                return p
        raise KeyError(name)

    def summary_rows(self) -> list[dict]:
        return [
            {
                "policy": p.name,
                "games": p.games,
                "wins": p.wins,
                "win_rate": round(p.win_rate, 4),
                "series_per_36": round(p.series_mean, 2),
                "mean_payoff": round(p.mean_payoff, 2),
            }
            for p in self.policies
        ]


def bench(
    count: int,
    policies: Sequence[str],
    tables: TableSet,
    lambdas: Optional[LambdaTable] = None,
    *,
    seed: int = 0,
    mode: str = "glassbox",
    worlds: int = DEFAULT_WORLDS,
    threshold: float = 0.0,
    loss_base: float = 50.0,
    progress: Optional[Callable[[int, int], None]] = None,
) -> BenchReport:
    """Play `count` random deals under every policy, identically paired.

    Per deal: all-engine auction, game choice by the engine's proposal,
    then one put per policy and an exact playout.  Folded and overbid
    deals are counted and skipped before any policy acts.  The same seed
    reproduces the report bit for bit.
    """
    if mode not in PLAYOUT_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if not policies:
        raise ValueError("need at least one policy")
    bidder = Bidder(tables, threshold=threshold, loss_base=loss_base)
    results = [PolicyResult(name) for name in policies]
    folds = overbids = scored = 0
    for index, deal in enumerate(random_deals(seed, count)):
        declarer, bid, folded = run_auction(deal, bidder)
        if folded:
            folds += 1
            continue
        hand12 = deal.hands[declarer] | deal.skat
        try:
            game, _ = select_game(hand12, bid, declarer, tables, lambdas)
        except OverbidError:
            overbids += 1
            continue
        scored += 1
        value = game_value(hand12, game).value
        ctx = GameContext.for_hand(hand12, game, declarer, bid)
        outcomes: dict[CardSet, bool] = {}
        for result in results:
            put = select_put(
                hand12, game, ctx, result.name,
                tables=tables, lambdas=lambdas,
                rng=random.Random(f"bench:{seed}:{index}:{result.name}"),
            )[0].put
            if put not in outcomes:
                outcomes[put] = _played_won(
                    deal, declarer, game, put, mode, worlds,
                    random.Random(f"bench:{seed}:{index}:worlds"),
                )
            result.payoffs.append(seeger_payoff(outcomes[put], value))
        if progress is not None:
            progress(index + 1, scored)
    return BenchReport(
        policies=results,
        seed=seed,
        mode=mode,
        deals=count,
        scored=scored,
        folds=folds,
        overbids=overbids,
    )


# --- replaying a recorded corpus ------------------------------------------------


@dataclass
class CrossTab:
    """Win/loss agreement between the record, the solver, and a policy.

    One cell per (recorded won, solver-with-recorded-put won, policy won)
    triple; the three series scores aggregate each column over the same
    scored records.
    """

    policy: str
    cells: dict[tuple[bool, bool, bool], int] = field(default_factory=dict)
    scored: int = 0
    skipped: int = 0
    reference_score: float = 0.0
    glassbox_score: float = 0.0
    policy_score: float = 0.0

    def count(self, reference: bool, glassbox: bool, policy: bool) -> int:
        return self.cells.get((reference, glassbox, policy), 0)

    def check(self) -> None:
        if sum(self.cells.values()) != self.scored:
            raise AssertionError("cross-tab cells out of balance")

    def rows(self) -> list[dict]:
        out = []
        for key in sorted(self.cells, reverse=True):
            ref, glass, pol = key
            out.append(
                {
                    "reference": int(ref),
                    "glassbox": int(glass),
                    "policy": int(pol),
                    "games": self.cells[key],
                }
            )
        return out


def replay(
    records: Iterable[GameRecord],
    policy: str,
    tables: TableSet,
    lambdas: Optional[LambdaTable] = None,
    *,
    seed: int = 0,
) -> CrossTab:
    """Tabulate recorded, solver and policy outcomes over a corpus.

    The recorded outcome is ground truth for the recorded put, so a
    policy that picks the same two cards inherits it; only counterfactual
    puts are played out.  The pseudo-policy ``recorded`` replays the
    recorded put itself.  Records without a put are counted and skipped.
    """
    tab = CrossTab(policy=policy)
    ref_payoffs: list[int] = []
    glass_payoffs: list[int] = []
    pol_payoffs: list[int] = []
    for index, record in enumerate(records):
        if record.put is None:
            tab.skipped += 1
            continue
        hand12 = record.deal.hands[record.declarer] | record.deal.skat
        try:
            if policy == "recorded":
                choice = record.put
            else:
                ctx = GameContext.for_hand(
                    hand12, record.game, record.declarer, record.winning_bid
                )
                choice = select_put(
                    hand12, record.game, ctx, policy,
                    tables=tables, lambdas=lambdas,
                    rng=random.Random(f"replay:{seed}:{index}:{policy}"),
                )[0].put
        except ValueError:
            tab.skipped += 1
            continue
        reference = record.outcome.won
        glassbox = play_out(record.deal, record.declarer, record.game, record.put).won
        if choice == record.put:
            policy_won = reference
        else:
            policy_won = play_out(record.deal, record.declarer, record.game, choice).won
        key = (reference, glassbox, policy_won)
        tab.cells[key] = tab.cells.get(key, 0) + 1
        tab.scored += 1
        value = game_value(hand12, record.game).value
        ref_payoffs.append(seeger_payoff(reference, value))
        glass_payoffs.append(seeger_payoff(glassbox, value))
        pol_payoffs.append(seeger_payoff(policy_won, value))
    if tab.scored:
        tab.reference_score = series_score(ref_payoffs, tab.scored)
        tab.glassbox_score = series_score(glass_payoffs, tab.scored)
        tab.policy_score = series_score(pol_payoffs, tab.scored)
    tab.check()
    return tab
