"""Game-record persistence: one JSON object per line under a versioned header.

A record is one complete game: the deal, the winning bid, who declared
what, the two cards the declarer buried, and how it ended.  Table building
and replay stream these files; ``convert_columns`` ingests a flat
tab-separated layout for third-party corpora.

File layout::

    {"format": "skatkit-games", "version": 1}
    {"deal": "<fore> / <mid> / <rear> / <skat>", "bid": 18, ...}
    ...

Readers reject a missing or mismatched header.  Each line is one record;
`read_records` either raises on a broken line or counts and skips it,
depending on ``on_error``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Optional, Union

from .cards import CardSet, GameType, Position
from .dealing import Deal
from .gamedef import Outcome

FORMAT_NAME = "skatkit-games"
FORMAT_VERSION = 1


class RecordError(ValueError):
    """An unreadable record file, header, or line."""


@dataclass(frozen=True, slots=True)
class GameRecord:
    """One replayable game: deal, auction result, declaration, outcome."""

    deal: Deal
    winning_bid: int
    declarer: Position
    game: GameType
    put: Optional[CardSet]
    outcome: Outcome
    source: str = ""

    def __post_init__(self) -> None:
        if self.winning_bid < 0:
            raise ValueError(f"bad winning bid {self.winning_bid}")
        if self.put is not None:
            if len(self.put) != 2:
                raise ValueError(f"put must hold 2 cards, got {len(self.put)}")
            holding = self.deal.hands[self.declarer] | self.deal.skat
            if (self.put & holding) != self.put:
                raise ValueError("put must come from the declarer's hand or the skat")
        if not self.outcome.consistent_with(self.game):
            raise ValueError("outcome flag contradicts eyes/tricks for this game")

    @property
    def kept_hand(self) -> Optional[CardSet]:
        """The declarer's 10 cards after taking the skat and burying the put."""
        if self.put is None:
            return None
        return (self.deal.hands[self.declarer] | self.deal.skat) - self.put

    def to_dict(self) -> dict:
        return {
            "deal": self.deal.to_codes(),
            "bid": self.winning_bid,
            "declarer": self.declarer.code,
            "game": str(self.game),
            "put": self.put.to_codes() if self.put is not None else None,
            "eyes": self.outcome.declarer_eyes,
            "tricks": self.outcome.declarer_tricks,
            "won": self.outcome.won,
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GameRecord":
        try:
            put = data.get("put")
            return cls(
                deal=Deal.from_codes(data["deal"]),
                winning_bid=int(data["bid"]),
                declarer=Position.from_name(data["declarer"]),
                game=GameType.from_name(data["game"]),
                put=CardSet.from_codes(put) if put else None,
                outcome=Outcome(int(data["eyes"]), int(data["tricks"]), bool(data["won"])),
                source=str(data.get("source", "")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise RecordError(f"bad record: {exc}") from exc


def _header_line() -> str:
    return json.dumps({"format": FORMAT_NAME, "version": FORMAT_VERSION})


def write_records(path: Union[str, Path], records: Iterable[GameRecord]) -> int:
    """Write records under a header line; returns the record count."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_header_line() + "\n")
        for record in records:
            fh.write(json.dumps(record.to_dict()) + "\n")
            count += 1
    return count


def _check_header(line: str, path: Union[str, Path]) -> None:
    try:
        head = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordError(f"{path}: not a game-record file") from exc
    if not isinstance(head, dict) or head.get("format") != FORMAT_NAME:
        raise RecordError(f"{path}: not a game-record file")
    if head.get("version") != FORMAT_VERSION:
        raise RecordError(f"{path}: unsupported version {head.get('version')!r}")


class RecordReader:
    """Iterate the records of a file; `skipped` counts bad lines when
    ``on_error='skip'``."""

    def __init__(self, path: Union[str, Path], on_error: str = "raise") -> None:
        if on_error not in ("raise", "skip"):
            raise ValueError(f"bad on_error {on_error!r}")
        self.path = Path(path)
        self.on_error = on_error
        self.skipped = 0

    def __iter__(self) -> Iterator[GameRecord]:
        with open(self.path, encoding="utf-8") as fh:
            head = fh.readline()
            if not head:
                raise RecordError(f"{self.path}: empty file")
            _check_header(head, self.path)
            for lineno, line in enumerate(fh, start=2):
                line = line.strip()
                if not line:
                    continue
                try:
                    yield GameRecord.from_dict(json.loads(line))
                except (json.JSONDecodeError, RecordError) as exc:
                    if self.on_error == "raise":
                        raise RecordError(f"{self.path}:{lineno}: {exc}") from exc
                    self.skipped += 1


def read_records(path: Union[str, Path], on_error: str = "raise") -> RecordReader:
    return RecordReader(path, on_error)


# Column layout for third-party corpora, tab-separated, no header:
#   deal TAB bid TAB declarer TAB game TAB put TAB eyes TAB tricks TAB source
# with `deal` in the slash-separated code layout and put "-" when unknown.
_COLUMNS = 8


def parse_column_line(line: str, source_default: str = "import") -> GameRecord:
    parts = line.rstrip("\n").split("\t")
    if len(parts) != _COLUMNS:
        raise RecordError(f"expected {_COLUMNS} columns, got {len(parts)}")
    deal, bid, declarer, game_name, put, eyes, tricks, source = parts
    game = GameType.from_name(game_name)
    eyes_n, tricks_n = int(eyes), int(tricks)
    return GameRecord(
        deal=Deal.from_codes(deal),
        winning_bid=int(bid),
        declarer=Position.from_name(declarer),
        game=game,
        put=None if put.strip() in ("", "-") else CardSet.from_codes(put),
        outcome=Outcome.for_game(game, eyes_n, tricks_n),
        source=source.strip() or source_default,
    )


def convert_columns(src: Union[str, Path], dst: Union[str, Path], on_error: str = "raise") -> tuple[int, int]:
    """Convert a column file to the record format; returns (written, skipped)."""
    written = skipped = 0
    with open(src, encoding="utf-8") as fh, open(dst, "w", encoding="utf-8") as out:
        out.write(_header_line() + "\n")
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = parse_column_line(line)
            except (RecordError, ValueError) as exc:
                if on_error == "raise":
                    raise RecordError(f"{src}:{lineno}: {exc}") from exc
                skipped += 1
                continue
            out.write(json.dumps(record.to_dict()) + "\n")
            written += 1
    return written, skipped
