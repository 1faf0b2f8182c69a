"""Deal construction: unranking, seeded random deals, collision odds.

The deal space indexes the partition of 32 cards into three 10-card hands
plus the 2-card skat through a nested combinatorial number system, so every
integer below ``deal_count()`` maps to exactly one deal and the same index
always reproduces the same deal.  A swap-based permutation unranker is kept
alongside for full-permutation use; the deal path goes through the
partition unranker.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .cards import DECK, CardSet

HAND_SIZES = (10, 10, 10, 2)


@dataclass(frozen=True, slots=True)
class Deal:
    """Three hands in seat order (fore, middle, rear) plus the skat."""

    hands: tuple[CardSet, CardSet, CardSet]
    skat: CardSet

    def __post_init__(self) -> None:
        union = 0
        total = 0
        for part, want in zip((*self.hands, self.skat), HAND_SIZES):
            if len(part) != want:
                raise ValueError(f"bad part size {len(part)}, expected {want}")
            union |= part.mask
            total += len(part)
        if union != DECK.mask or total != 32:
            raise ValueError("hands and skat must partition the deck")

    def to_codes(self) -> str:
        return " / ".join(p.to_codes() for p in (*self.hands, self.skat))

    @classmethod
    def from_codes(cls, text: str) -> "Deal":
        parts = [CardSet.from_codes(p) for p in text.split("/")]
        if len(parts) != 4:
            raise ValueError(f"expected 4 slash-separated parts, got {len(parts)}")
        return cls(hands=(parts[0], parts[1], parts[2]), skat=parts[3])


def mr_unrank(n: int, r: int) -> list[int]:
    """Unrank ``r`` into a permutation of 0..n-1 by repeated swaps.

    Walks the swap chain ``perm[m-1] <-> perm[r mod m]`` downward from m=n,
    dividing the rank by m each step; the map is a bijection from
    [0, n!) onto the permutations.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0 <= r < math.factorial(n):
        raise ValueError(f"rank {r} out of range for n={n}")
    perm = list(range(n))
    m = n
    while m > 0:
        j = r % m
        perm[m - 1], perm[j] = perm[j], perm[m - 1]
        r //= m
        m -= 1
    return perm


def unrank_combination(rank: int, n: int, k: int) -> tuple[int, ...]:
    """Lexicographic unranking of a k-subset of 0..n-1.

    Rank 0 is (0, 1, .., k-1).
    """
    if not 0 <= rank < math.comb(n, k):
        raise ValueError(f"rank {rank} out of range for C({n},{k})")
    out = []
    c = 0
    for slot in range(k, 0, -1):
        while True:
            below = math.comb(n - c - 1, slot - 1)
            if rank < below:
                break
            rank -= below
            c += 1
        out.append(c)
        c += 1
    return tuple(out)


def partition_count(n: int, sizes: Sequence[int]) -> int:
    if sum(sizes) != n:
        raise ValueError("sizes must sum to n")
    total = 1
    left = n
    for s in sizes:
        total *= math.comb(left, s)
        left -= s
    return total


def partition_unrank(index: int, n: int, sizes: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Unrank an ordered partition of 0..n-1 into blocks of the given sizes.

    Index 0 assigns the lowest positions to the first block, the next
    lowest to the second, and so on; the map is a bijection from
    [0, partition_count(n, sizes)).
    """
    total = partition_count(n, sizes)
    if not 0 <= index < total:
        raise ValueError(f"index {index} out of range for partition space {total}")
    remaining = list(range(n))
    radix = total
    blocks = []
    for s in sizes:
        radix //= math.comb(len(remaining), s)
        block_rank, index = divmod(index, radix)
        picks = unrank_combination(block_rank, len(remaining), s)
        blocks.append(tuple(remaining[p] for p in picks))
        for p in reversed(picks):
            del remaining[p]
    return tuple(blocks)


DEAL_SPACE = partition_count(32, HAND_SIZES)


def deal_count() -> int:
    """Size of the deal space: C(32,10) * C(22,10) * C(12,10)."""
    return DEAL_SPACE


def deal_unrank(index: int) -> Deal:
    """Deterministic index -> deal bijection over the whole deal space."""
    fore, middle, rear, skat = partition_unrank(index, 32, HAND_SIZES)
    return Deal(
        hands=(
            CardSet.from_indices(fore),
            CardSet.from_indices(middle),
            CardSet.from_indices(rear),
        ),
        skat=CardSet.from_indices(skat),
    )


def deal_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Seeded generator; distinct streams split off one seed reproducibly."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def random_deal(rng: np.random.Generator | int) -> Deal:
    """Uniform random deal from a generator (or a seed for a one-off)."""
    if isinstance(rng, (int, np.integer)):
        rng = deal_rng(int(rng))
    return deal_unrank(int(rng.integers(0, DEAL_SPACE)))


def random_deals(seed: int, count: int, stream: int = 0) -> Iterator[Deal]:
    rng = deal_rng(seed, stream)
    for _ in range(count):
        yield random_deal(rng)


def collision_probability(games: int, space: int = DEAL_SPACE) -> float:
    """Probability that `games` uniform deals contain at least one repeat.

    Exact birthday product 1 - prod_{i<k}(n-i)/n, evaluated in log space
    with high-precision loggamma so the tiny exponents survive.
    """
    if games < 0:
        raise ValueError("games must be non-negative")
    if games <= 1:
        return 0.0
    if games > space:
        return 1.0
    import mpmath

    with mpmath.workdps(60):
        n = mpmath.mpf(space)
        log_keep = (
            mpmath.loggamma(n + 1)
            - mpmath.loggamma(n - games + 1)
            - games * mpmath.log(n)
        )
        return float(1 - mpmath.e**log_keep)


def games_for_collision(p: float = 0.5, space: int = DEAL_SPACE) -> int:
    """Smallest game count whose collision probability reaches ``p``."""
    if not 0 < p < 1:
        raise ValueError("p must be in (0, 1)")
    lo, hi = 1, 2
    while collision_probability(hi, space) < p:
        lo, hi = hi, hi * 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if collision_probability(mid, space) < p:
            lo = mid
        else:
            hi = mid
    return hi
