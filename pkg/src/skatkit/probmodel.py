"""Winning-probability tables: trump lookup with fallback, null suit product.

Trump games read a foreground table keyed by the full winning-parameter
tuple and fall back to a background table keyed by the three strongest
parameters (trump count, jack class, estimated lost tricks) when the
foreground cell is thin, and finally to a flat 0.5 prior.  Grand and the
suit games get separate table pairs; the four suit games share one.

Null games multiply four per-suit win ratios, one per 8-bit suit-holding
pattern (jacks count as ordinary suit cards there).  Patterns without
enough samples fall back to an analytic default: the fraction of duck
rounds the holding survives against two defenders who always attack with
their lowest cards and never show out.

Table files are line-oriented text, one `key<TAB>wins<TAB>samples` row per
populated foreground cell between a versioned header and a counted end
marker, so a truncated or mixed-up file never loads partially.  Background
counts are not stored: they re-aggregate exactly from the foreground rows.
Foreground keys pack the parameter tuple in mixed radix; see
``params_key`` for the exact layout.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Union

import numpy as np

from .cards import CardSet, GameType, Position, Suit
from .handeval import WinningParams, winning_params
from .records import GameRecord

log = logging.getLogger(__name__)

GLOBAL_PRIOR = 0.5
DEFAULT_MIN_SAMPLES = 30

# mixed-radix sizes for (w1, w2, w3, w4, w5, w6, w7, w8)
_FG_RADIX = (4, 4, 4, 3, 12, 11, 6, 11)
_BG_RADIX = (12, 6, 11)  # (w5, w7, w8)
FG_SPACE = int(np.prod(_FG_RADIX))
BG_SPACE = int(np.prod(_BG_RADIX))

FILE_FORMAT = "skatkit-tables"
FILE_VERSION = 1


class TableError(ValueError):
    """A table file that cannot be loaded as written."""


def params_key(p: WinningParams) -> int:
    """Pack a parameter tuple into one integer.

    Digits run w1 (most significant) through w8 (least significant) with
    radices (4, 4, 4, 3, 12, 11, 6, 11): key = ((((((w1*4 + w2)*4 + w3)*3
    + w4)*12 + w5)*11 + w6)*6 + w7)*11 + w8.
    """
    key = 0
    for value, radix in zip((p.w1, p.w2, p.w3, int(p.w4), p.w5, p.w6, p.w7, p.w8), _FG_RADIX):
        key = key * radix + value
    return key


def key_params(key: int) -> WinningParams:
    """Inverse of ``params_key``."""
    if not 0 <= key < FG_SPACE:
        raise ValueError(f"key {key} outside table space")
    digits = []
    for radix in reversed(_FG_RADIX):
        key, digit = divmod(key, radix)
        digits.append(digit)
    w1, w2, w3, w4, w5, w6, w7, w8 = reversed(digits)
    return WinningParams(w1, w2, w3, Position(w4), w5, w6, w7, w8)


def _bg_key(p: WinningParams) -> int:
    return (p.w5 * _BG_RADIX[1] + p.w7) * _BG_RADIX[2] + p.w8


class ProbTable:
    """Foreground/background win-count table for one trump-game family."""

    def __init__(self, kind: str = "trump", min_samples: int = DEFAULT_MIN_SAMPLES) -> None:
        if min_samples < 1:
            raise ValueError("min_samples must be positive")
        self.kind = kind
        self.min_samples = min_samples
        self._fg_wins = np.zeros(FG_SPACE, dtype=np.int32)
        self._fg_samples = np.zeros(FG_SPACE, dtype=np.int32)
        self._bg_wins = np.zeros(BG_SPACE, dtype=np.int32)
        self._bg_samples = np.zeros(BG_SPACE, dtype=np.int32)
        # instrumentation: which tier answered each lookup
        self.lookups = {"foreground": 0, "background": 0, "prior": 0}

    def add(self, params: WinningParams, won: bool, count: int = 1) -> None:
        if count < 1:
            raise ValueError("count must be positive")
        fg = params_key(params)
        bg = _bg_key(params)
        self._fg_samples[fg] += count
        self._bg_samples[bg] += count
        if won:
            self._fg_wins[fg] += count
            self._bg_wins[bg] += count

    def entry(self, params: WinningParams) -> tuple[int, int]:
        key = params_key(params)
        return int(self._fg_wins[key]), int(self._fg_samples[key])

    def background_entry(self, params: WinningParams) -> tuple[int, int]:
        key = _bg_key(params)
        return int(self._bg_wins[key]), int(self._bg_samples[key])

    def probability(self, params: WinningParams) -> float:
        wins, samples = self.entry(params)
        if samples >= self.min_samples:
            self.lookups["foreground"] += 1
            return wins / samples
        wins, samples = self.background_entry(params)
        if samples >= self.min_samples:
            self.lookups["background"] += 1
            return wins / samples
        self.lookups["prior"] += 1
        return GLOBAL_PRIOR

    def probability_array(self, keys: np.ndarray) -> np.ndarray:
        """Bulk `probability` over an array of packed foreground keys.

        Same fallback chain as the scalar path; the lookup counters are
        bumped once per element.
        """
        keys = np.asarray(keys, dtype=np.int64)
        if keys.size and (keys.min() < 0 or keys.max() >= FG_SPACE):
            raise ValueError("key outside table space")
        fg_n = self._fg_samples[keys]
        w8 = keys % 11
        w7 = keys // 11 % 6
        w5 = keys // 726 % 12  # the w6 digit (radix 11) sits in between
        bg_keys = (w5 * 6 + w7) * 11 + w8
        bg_n = self._bg_samples[bg_keys]
        use_fg = fg_n >= self.min_samples
        use_bg = ~use_fg & (bg_n >= self.min_samples)
        out = np.full(keys.shape, GLOBAL_PRIOR, dtype=np.float64)
        np.divide(self._fg_wins[keys], fg_n, out=out, where=use_fg)
        np.divide(self._bg_wins[bg_keys], bg_n, out=out, where=use_bg)
        self.lookups["foreground"] += int(use_fg.sum())
        self.lookups["background"] += int(use_bg.sum())
        self.lookups["prior"] += int(keys.size - use_fg.sum() - use_bg.sum())
        return out

    def foreground_items(self) -> Iterator[tuple[int, int, int]]:
        """(key, wins, samples) for every populated foreground cell."""
        for key in np.flatnonzero(self._fg_samples):
            yield int(key), int(self._fg_wins[key]), int(self._fg_samples[key])

    def merge(self, other: "ProbTable") -> None:
        """Fold another table's counts in (associative, for partial builds)."""
        self._fg_wins += other._fg_wins
        self._fg_samples += other._fg_samples
        self._bg_wins += other._bg_wins
        self._bg_samples += other._bg_samples

    def __len__(self) -> int:
        return int(np.count_nonzero(self._fg_samples))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProbTable):
            return NotImplemented
        return (
            self.min_samples == other.min_samples
            and bool(np.array_equal(self._fg_wins, other._fg_wins))
            and bool(np.array_equal(self._fg_samples, other._fg_samples))
        )


# Null suit analysis.  Bit -> rank strength under null order
# (7 < 8 < 9 < 10 < J < Q < K < A); bit 4 is the jack, a plain card here.
_NULL_POWER_BY_BIT = (7, 3, 6, 5, 4, 2, 1, 0)


def _null_default(pattern: int) -> float:
    """Fraction of duck rounds survived vs two low-leading defenders.

    No-void approximation: each round the defense plays its two lowest
    remaining cards and the holding ducks with its highest card under
    their better one.  1.0 when the suit can always duck, 0.0 when the
    very first round forces a trick.
    """
    held = sorted(_NULL_POWER_BY_BIT[b] for b in range(8) if pattern >> b & 1)
    out = sorted(p for p in range(8) if p not in held)
    rounds = 0
    survived = 0
    total = min(len(held), (len(out) + 1) // 2) if held else 0
    while held and out:
        led = out.pop(0)
        threshold = max(led, out.pop(0)) if out else led
        rounds += 1
        ducks = [c for c in held if c < threshold]
        if not ducks:
            break
        held.remove(max(ducks))
        survived += 1
    if total == 0:
        return 1.0
    return survived / total


_NULL_DEFAULTS = tuple(_null_default(p) for p in range(256))


class NullSuitTable:
    """Per-suit win ratios for null, empirical counts over 256 patterns."""

    def __init__(self, min_samples: int = DEFAULT_MIN_SAMPLES) -> None:
        if min_samples < 1:
            raise ValueError("min_samples must be positive")
        self.min_samples = min_samples
        self._wins = np.zeros(256, dtype=np.int32)
        self._samples = np.zeros(256, dtype=np.int32)
        self.lookups = {"empirical": 0, "default": 0}

    def add(self, pattern: int, won: bool, count: int = 1) -> None:
        if not 0 <= pattern < 256:
            raise ValueError(f"bad suit pattern {pattern}")
        if count < 1:
            raise ValueError("count must be positive")
        self._samples[pattern] += count
        if won:
            self._wins[pattern] += count

    def entry(self, pattern: int) -> tuple[int, int]:
        return int(self._wins[pattern]), int(self._samples[pattern])

    def ratio(self, pattern: int) -> float:
        if not 0 <= pattern < 256:
            raise ValueError(f"bad suit pattern {pattern}")
        wins, samples = self.entry(pattern)
        if samples >= self.min_samples:
            self.lookups["empirical"] += 1
            return wins / samples
        self.lookups["default"] += 1
        return _NULL_DEFAULTS[pattern]

    def ratio_array(self) -> np.ndarray:
        """All 256 pattern ratios at once, empirical where backed, else default."""
        out = np.array(_NULL_DEFAULTS, dtype=np.float64)
        have = self._samples >= self.min_samples
        np.divide(self._wins, self._samples, out=out, where=have)
        self.lookups["empirical"] += int(have.sum())
        self.lookups["default"] += int(256 - have.sum())
        return out

    def items(self) -> Iterator[tuple[int, int, int]]:
        for key in np.flatnonzero(self._samples):
            yield int(key), int(self._wins[key]), int(self._samples[key])

    def merge(self, other: "NullSuitTable") -> None:
        self._wins += other._wins
        self._samples += other._samples

    def __len__(self) -> int:
        return int(np.count_nonzero(self._samples))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NullSuitTable):
            return NotImplemented
        return (
            self.min_samples == other.min_samples
            and bool(np.array_equal(self._wins, other._wins))
            and bool(np.array_equal(self._samples, other._samples))
        )


def null_win_probability(hand: CardSet, table: NullSuitTable) -> float:
    """Product of the four per-suit win ratios of a 10-card null hand."""
    if len(hand) != 10:
        raise ValueError(f"hand must hold 10 cards, got {len(hand)}")
    product = 1.0
    for suit in Suit:
        product *= table.ratio(hand.suit_pattern(suit))
    return product


def trump_win_probability(params: WinningParams, table: ProbTable) -> float:
    """Foreground ratio, else background ratio, else the 0.5 prior."""
    return table.probability(params)


@dataclass
class TableSet:
    """Everything ``build_tables`` produces, plus its skip count."""

    grand: ProbTable
    suit: ProbTable
    null: NullSuitTable
    skipped: int = 0


def build_tables(records: Iterable[GameRecord], min_samples: int = DEFAULT_MIN_SAMPLES) -> TableSet:
    """Accumulate win counts from played records.

    Records without a put, or whose fields refuse to key (bad sizes,
    inconsistent game), are skipped and counted; counting is
    order-independent.
    """
    tables = TableSet(
        grand=ProbTable("grand", min_samples),
        suit=ProbTable("suit", min_samples),
        null=NullSuitTable(min_samples),
    )
    for record in records:
        kept = record.kept_hand
        if kept is None:
            tables.skipped += 1
            continue
        won = record.outcome.won
        if record.game is GameType.NULL:
            for suit in Suit:
                tables.null.add(kept.suit_pattern(suit), won)
            continue
        try:
            params = winning_params(
                kept, record.put, record.game, record.winning_bid, record.declarer
            )
        except ValueError:
            tables.skipped += 1
            continue
        target = tables.grand if record.game is GameType.GRAND else tables.suit
        target.add(params, won)
    if tables.skipped:
        log.warning("build_tables skipped %d unusable records", tables.skipped)
    return tables


_FILES = {"grand": "grand.tsv", "suit": "suit.tsv", "null": "null.tsv"}


def _write_table(path: Path, kind: str, min_samples: int, items: Iterable[tuple[int, int, int]], space: int) -> None:
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {FILE_FORMAT} {FILE_VERSION} kind={kind} min_samples={min_samples}\n")
        for key, wins, samples in items:
            if not 0 <= wins <= samples or not 0 <= key < space:
                raise TableError(f"refusing to write bad row {key} {wins} {samples}")
            fh.write(f"{key}\t{wins}\t{samples}\n")
            count += 1
        fh.write(f"# end {count}\n")


def save_tables(tables: TableSet, path: Union[str, Path]) -> None:
    """Write grand.tsv, suit.tsv, null.tsv under `path` (a directory)."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    _write_table(root / _FILES["grand"], "grand", tables.grand.min_samples,
                 tables.grand.foreground_items(), FG_SPACE)
    _write_table(root / _FILES["suit"], "suit", tables.suit.min_samples,
                 tables.suit.foreground_items(), FG_SPACE)
    _write_table(root / _FILES["null"], "null", tables.null.min_samples,
                 tables.null.items(), 256)


def _read_table(path: Path, want_kind: str) -> tuple[int, list[tuple[int, int, int]]]:
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise TableError(f"{path}: {exc}") from exc
    if not lines:
        raise TableError(f"{path}: empty file")
    head = lines[0].split()
    if len(head) < 5 or head[0] != "#" or head[1] != FILE_FORMAT:
        raise TableError(f"{path}: not a table file")
    if head[2] != str(FILE_VERSION):
        raise TableError(f"{path}: unsupported version {head[2]}")
    meta = dict(part.split("=", 1) for part in head[3:] if "=" in part)
    if meta.get("kind") != want_kind:
        raise TableError(f"{path}: expected kind={want_kind}, got {meta.get('kind')}")
    try:
        min_samples = int(meta["min_samples"])
    except (KeyError, ValueError) as exc:
        raise TableError(f"{path}: bad min_samples") from exc
    if not lines[-1].startswith("# end "):
        raise TableError(f"{path}: truncated (no end marker)")
    try:
        declared = int(lines[-1].split()[2])
    except (IndexError, ValueError) as exc:
        raise TableError(f"{path}: bad end marker") from exc
    rows = []
    for lineno, line in enumerate(lines[1:-1], start=2):
        parts = line.split("\t")
        try:
            key, wins, samples = (int(p) for p in parts)
        except ValueError as exc:
            raise TableError(f"{path}:{lineno}: bad row") from exc
        if not 0 <= wins <= samples:
            raise TableError(f"{path}:{lineno}: wins outside 0..samples")
        rows.append((key, wins, samples))
    if len(rows) != declared:
        raise TableError(f"{path}: row count {len(rows)} != declared {declared}")
    return min_samples, rows


def load_tables(path: Union[str, Path]) -> TableSet:
    """Load what ``save_tables`` wrote; any defect refuses the whole set."""
    root = Path(path)
    loaded: dict[str, object] = {}
    for kind, name in _FILES.items():
        min_samples, rows = _read_table(root / name, kind)
        if kind == "null":
            table = NullSuitTable(min_samples)
            for key, wins, samples in rows:
                if not 0 <= key < 256:
                    raise TableError(f"{root / name}: pattern {key} out of range")
                table._wins[key] = wins
                table._samples[key] = samples
        else:
            table = ProbTable(kind, min_samples)
            for key, wins, samples in rows:
                if not 0 <= key < FG_SPACE:
                    raise TableError(f"{root / name}: key {key} out of range")
                table._fg_wins[key] = wins
                table._fg_samples[key] = samples
                bg = _bg_key(key_params(key))
                table._bg_wins[bg] += wins
                table._bg_samples[bg] += samples
        loaded[kind] = table
    return TableSet(grand=loaded["grand"], suit=loaded["suit"], null=loaded["null"])
