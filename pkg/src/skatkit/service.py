"""HTTP advisory service: discard rankings for a declarer's 12 cards.

One stateless endpoint, POST /api/v1/advise, prices every game type for
the submitted hand and returns the ranked surviving puts with their
numbers.  Malformed hands (size, duplicates, unknown codes) are 400;
well-formed requests with an illegal context (unknown seat, off-ladder
bid, unknown game) are 422.  A per-request time budget truncates the
game-type sweep rather than blowing the latency bound.
"""

from __future__ import annotations

import time
from pathlib import Path
from typing import Optional, Union

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .cards import Card, CardSet, GameType, Position, parse_card
from .gamedef import BID_LADDER, game_value
from .probmodel import NullSuitTable, ProbTable, TableSet
from .skatselect import GameContext, LambdaTable, SkatCandidate, select_put

DEFAULT_BUDGET_S = 1.0
DEFAULT_TOP = 5

_GAME_SWEEP = (GameType.GRAND, GameType.CLUBS, GameType.SPADES,
               GameType.HEARTS, GameType.DIAMONDS, GameType.NULL)


class AdviseRequest(BaseModel):
    hand: list[str] = Field(..., description="12 card codes, or 10 with `skat`")
    skat: Optional[list[str]] = None
    position: str = "forehand"
    bid: int = 0
    game: Optional[str] = None
    top: int = Field(DEFAULT_TOP, ge=1, le=66)


def _parse_cards(codes: list[str], what: str) -> list[Card]:
    cards = []
    for code in codes:
        try:
            cards.append(parse_card(code))
        except ValueError as exc:
            raise HTTPException(400, f"bad {what} card {code!r}: {exc}") from exc
    if len(set(cards)) != len(cards):
        dupes = sorted({c.code for c in cards if cards.count(c) > 1})
        raise HTTPException(400, f"duplicate {what} card(s): {', '.join(dupes)}")
    return cards


def _parse_hand(request: AdviseRequest) -> CardSet:
    cards = _parse_cards(request.hand, "hand")
    if request.skat is not None:
        if len(cards) != 10:
            raise HTTPException(
                400, f"hand with separate skat must hold 10 cards, got {len(cards)}"
            )
        skat = _parse_cards(request.skat, "skat")
        if len(skat) != 2:
            raise HTTPException(400, f"skat must hold 2 cards, got {len(skat)}")
        cards += skat
        if len(set(cards)) != len(cards):
            raise HTTPException(400, "skat repeats a hand card")
    elif len(cards) != 12:
        raise HTTPException(400, f"need 12 cards, got {len(cards)}")
    return CardSet.of(*cards)


def _parse_context(request: AdviseRequest) -> tuple[Position, int, Optional[GameType]]:
    try:
        position = Position.from_name(request.position)
    except ValueError as exc:
        raise HTTPException(422, f"unknown position {request.position!r}") from exc
    if request.bid != 0 and request.bid not in BID_LADDER:
        raise HTTPException(422, f"bid {request.bid} is not on the ladder")
    game = None
    if request.game is not None:
        try:
            game = GameType.from_name(request.game)
        except ValueError as exc:
            raise HTTPException(422, f"unknown game {request.game!r}") from exc
    return position, request.bid, game


def _candidate_payload(game: GameType, cand: SkatCandidate) -> dict:
    fired = [cand.filtered_by] if cand.filtered_by else []
    features = None
    if cand.features is not None:
        features = {
            f"f{i}": round(float(v), 6)
            for i, v in enumerate(cand.features.as_tuple(), start=1)
        }
    return {
        "game": str(game),
        "put": sorted(c.code for c in cand.put),
        "win_prob": round(cand.win_prob, 6),
        "expected_cost": round(cand.expected_cost, 6),
        "soft_score": round(cand.soft_score, 6),
        "features": features,
        "fired_rules": fired,
        "relaxed": cand.relaxed,
    }


def create_app(
    tables: Optional[TableSet] = None,
    lambdas: Optional[LambdaTable] = None,
    *,
    budget_s: float = DEFAULT_BUDGET_S,
    static_dir: Union[str, Path, None] = None,
) -> FastAPI:
    """Build the service around one shared read-only table set."""
    if tables is None:
        tables = TableSet(grand=ProbTable("grand"), suit=ProbTable("suit"), null=NullSuitTable())
    app = FastAPI(title="skat discard advisor")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.post("/api/v1/advise")
    def advise(request: AdviseRequest) -> dict:
        started = time.perf_counter()
        hand12 = _parse_hand(request)
        position, bid, only_game = _parse_context(request)
        sweep = (only_game,) if only_game else _GAME_SWEEP
        rankings = []
        truncated = False
        for game in sweep:
            if rankings and time.perf_counter() - started > budget_s:
                truncated = True
                break
            ctx = GameContext.for_hand(hand12, game, position, bid)
            ranked = select_put(hand12, game, ctx, "proposal", tables=tables, lambdas=lambdas)
            survivors = [c for c in ranked if c.filtered_by is None]
            rankings.append(
                {
                    "game": str(game),
                    "game_value": game_value(hand12, game).value,
                    "subtype": str(ctx.subtype),
                    "candidates": [
                        _candidate_payload(game, c) for c in survivors[: request.top]
                    ],
                }
            )
        return {
            "hand": sorted(c.code for c in hand12),
            "position": position.code,
            "bid": bid,
            "rankings": rankings,
            "truncated": truncated,
            "elapsed_ms": round((time.perf_counter() - started) * 1000, 2),
        }

    @app.get("/api/v1/health")
    def health() -> dict:
        return {"status": "ok"}

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    return app
