"""Capture the frontend's golden advisor exchanges from a live app.

Twenty seeded requests, varied across position, bid, game filter and the
split 10+2 hand form, posted against the service backed by tables built
from the given record corpus. The pretty-printed pairs land in
frontend/fixtures/golden.json for the UI contract tests.
"""

import argparse
import itertools
import json
import random
import sys
from pathlib import Path

from starlette.testclient import TestClient

from skatkit.cards import DECK
from skatkit.probmodel import build_tables
from skatkit.records import read_records
from skatkit.service import create_app

ROOT = Path(__file__).resolve().parent.parent


def build_requests(seed: str) -> list[dict]:
    rng = random.Random(seed)
    deck = [c.code for c in DECK]
    positions = itertools.cycle(["forehand", "middlehand", "rearhand"])
    bids = itertools.cycle([0, 18, 20, 24, 30, 36, 48])
    games = {3: "grand", 9: "hearts", 15: "null"}
    requests = []
    for i in range(20):
        cards = rng.sample(deck, 12)
        body = {"hand": cards, "position": next(positions), "bid": next(bids)}
        if i in games:
            body["game"] = games[i]
        if i in (6, 13):
            body = {**body, "hand": cards[:10], "skat": cards[10:]}
        if i == 17:
            body["top"] = 3
        requests.append(body)
    return requests


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--records", type=Path, default=ROOT / "data" / "selfplay-60k.jsonl")
    parser.add_argument("--train", type=int, default=50_000,
                        help="use the first N records for the tables")
    parser.add_argument("--out", type=Path, default=ROOT / "frontend" / "fixtures" / "golden.json")
    args = parser.parse_args()

    records = itertools.islice(read_records(args.records), args.train)
    tables = build_tables(records)
    app = create_app(tables)
    pairs = []
    with TestClient(app) as client:
        for body in build_requests("golden-v1"):
            response = client.post("/api/v1/advise", json=body)
            if response.status_code != 200:
                sys.exit(f"advise rejected {body}: {response.status_code} {response.text}")
            pairs.append({"request": body, "response": response.json()})

    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(pairs, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {len(pairs)} golden pairs to {args.out}")


if __name__ == "__main__":
    main()
