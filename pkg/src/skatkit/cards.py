"""Card primitives for three-hand Skat.

Every card has a fixed index 0..31.  The canonical order runs clubs,
spades, hearts, diamonds, and inside a suit ace, ten, king, queen, jack,
nine, eight, seven.  A :class:`CardSet` is an immutable 32-bit mask over
those indices, so set algebra is single-word arithmetic and serialized
sets are bit-exact reproducible.  One byte of the mask is one suit, with
the bit position equal to the rank index.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterable, Iterator, Optional


class Suit(IntEnum):
    CLUBS = 0
    SPADES = 1
    HEARTS = 2
    DIAMONDS = 3

    @property
    def code(self) -> str:
        return "CSHD"[self]


class Rank(IntEnum):
    ACE = 0
    TEN = 1
    KING = 2
    QUEEN = 3
    JACK = 4
    NINE = 5
    EIGHT = 6
    SEVEN = 7

    @property
    def code(self) -> str:
        return "ATKQJ987"[self]

    @property
    def points(self) -> int:
        return _RANK_POINTS[self]


_RANK_POINTS = (11, 10, 4, 3, 2, 0, 0, 0)

_SUIT_BY_CODE = {s.code: s for s in Suit}
_RANK_BY_CODE = {r.code: r for r in Rank}


@dataclass(frozen=True, slots=True)
class Card:
    suit: Suit
    rank: Rank

    @property
    def index(self) -> int:
        return self.suit * 8 + self.rank

    @property
    def points(self) -> int:
        return _RANK_POINTS[self.rank]

    @property
    def code(self) -> str:
        return self.suit.code + self.rank.code

    @classmethod
    def from_index(cls, index: int) -> "Card":
        return _CARDS[index]

    def __str__(self) -> str:
        return self.code

    def __lt__(self, other: "Card") -> bool:
        return self.index < other.index


_CARDS = tuple(Card(Suit(i // 8), Rank(i % 8)) for i in range(32))

FULL_MASK = 0xFFFFFFFF
JACK_BIT = 1 << Rank.JACK


def parse_card(code: str) -> Card:
    """Parse a two-character card code such as ``CJ`` or ``HT``."""
    if len(code) == 2:
        suit = _SUIT_BY_CODE.get(code[0].upper())
        rank = _RANK_BY_CODE.get(code[1].upper())
        if suit is not None and rank is not None:
            return Card(suit, rank)
    raise ValueError(f"bad card code {code!r}")


def format_card(card: Card) -> str:
    return card.code


def card_points(card: Card) -> int:
    """Eye value of a single card (A=11, 10=10, K=4, Q=3, J=2, else 0)."""
    return _RANK_POINTS[card.rank]


@dataclass(frozen=True, slots=True)
class CardSet:
    """Immutable set of cards backed by a 32-bit mask."""

    mask: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.mask <= FULL_MASK:
            raise ValueError(f"mask out of range: {self.mask:#x}")

    @classmethod
    def of(cls, *cards: Card) -> "CardSet":
        m = 0
        for c in cards:
            m |= 1 << c.index
        return cls(m)

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> "CardSet":
        m = 0
        for i in indices:
            m |= 1 << i
        return cls(m)

    @classmethod
    def from_codes(cls, text: str) -> "CardSet":
        """Parse a space-separated code list; duplicates are rejected."""
        m = 0
        for tok in text.split():
            bit = 1 << parse_card(tok).index
            if m & bit:
                raise ValueError(f"duplicate card {tok!r}")
            m |= bit
        return cls(m)

    def to_codes(self) -> str:
        """Serialize in canonical order, space separated (bit exact)."""
        return " ".join(c.code for c in self)

    def __contains__(self, card: Card) -> bool:
        return bool(self.mask >> card.index & 1)

    def __iter__(self) -> Iterator[Card]:
        m = self.mask
        while m:
            low = m & -m
            yield _CARDS[low.bit_length() - 1]
            m ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __or__(self, other: "CardSet") -> "CardSet":
        return CardSet(self.mask | other.mask)

    def __and__(self, other: "CardSet") -> "CardSet":
        return CardSet(self.mask & other.mask)

    def __sub__(self, other: "CardSet") -> "CardSet":
        return CardSet(self.mask & ~other.mask)

    def __xor__(self, other: "CardSet") -> "CardSet":
        return CardSet(self.mask ^ other.mask)

    def isdisjoint(self, other: "CardSet") -> bool:
        return not self.mask & other.mask

    def add(self, card: Card) -> "CardSet":
        return CardSet(self.mask | 1 << card.index)

    def remove(self, card: Card) -> "CardSet":
        if not self.mask >> card.index & 1:
            raise KeyError(card.code)
        return CardSet(self.mask ^ 1 << card.index)

    def complement(self) -> "CardSet":
        return CardSet(self.mask ^ FULL_MASK)

    def suit_pattern(self, suit: Suit) -> int:
        """The suit's 8 rank bits (bit = Rank index)."""
        return self.mask >> 8 * suit & 0xFF

    @property
    def eyes(self) -> int:
        return eyes(self)


EMPTY = CardSet(0)
DECK = CardSet(FULL_MASK)

SUIT_MASKS = tuple(CardSet(0xFF << 8 * s) for s in Suit)
JACKS = CardSet.from_indices(s * 8 + Rank.JACK for s in Suit)
ACES = CardSet.from_indices(s * 8 + Rank.ACE for s in Suit)
TENS = CardSet.from_indices(s * 8 + Rank.TEN for s in Suit)
CLUB_JACK = Card(Suit.CLUBS, Rank.JACK)
SPADE_JACK = Card(Suit.SPADES, Rank.JACK)
HEART_JACK = Card(Suit.HEARTS, Rank.JACK)
DIAMOND_JACK = Card(Suit.DIAMONDS, Rank.JACK)

# eyes per suit byte, indexed by the 8-bit rank pattern
_BYTE_EYES = tuple(
    sum(_RANK_POINTS[r] for r in range(8) if b >> r & 1) for b in range(256)
)


def eyes(cards: CardSet) -> int:
    """Total eye value of a card set (whole deck sums to 120)."""
    m = cards.mask
    return (
        _BYTE_EYES[m & 0xFF]
        + _BYTE_EYES[m >> 8 & 0xFF]
        + _BYTE_EYES[m >> 16 & 0xFF]
        + _BYTE_EYES[m >> 24 & 0xFF]
    )


class GameType(Enum):
    GRAND = "grand"
    NULL = "null"
    CLUBS = "clubs"
    SPADES = "spades"
    HEARTS = "hearts"
    DIAMONDS = "diamonds"

    @classmethod
    def from_name(cls, name: str) -> "GameType":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"bad game type {name!r}") from None

    @property
    def trump_suit(self) -> Optional[Suit]:
        return _TRUMP_SUITS[self]

    @property
    def is_suit_game(self) -> bool:
        return _TRUMP_SUITS[self] is not None

    @property
    def is_trump_game(self) -> bool:
        return self is not GameType.NULL

    def __str__(self) -> str:
        return self.value


_TRUMP_SUITS = {
    GameType.GRAND: None,
    GameType.NULL: None,
    GameType.CLUBS: Suit.CLUBS,
    GameType.SPADES: Suit.SPADES,
    GameType.HEARTS: Suit.HEARTS,
    GameType.DIAMONDS: Suit.DIAMONDS,
}

SUIT_GAMES = (GameType.CLUBS, GameType.SPADES, GameType.HEARTS, GameType.DIAMONDS)
TRUMP_GAMES = (GameType.GRAND,) + SUIT_GAMES
ALL_GAMES = TRUMP_GAMES + (GameType.NULL,)


class Position(IntEnum):
    FOREHAND = 0
    MIDDLEHAND = 1
    REARHAND = 2

    @property
    def code(self) -> str:
        return ("fore", "mid", "rear")[self]

    @classmethod
    def from_name(cls, name: str) -> "Position":
        key = name.strip().lower()
        for p in cls:
            if key in (p.code, p.name.lower(), str(int(p))):
                return p
        raise ValueError(f"bad position {name!r}")


def trump_set(game: GameType) -> CardSet:
    """All trump cards of a game: 4 jacks for grand, jacks plus the trump
    suit's other 7 cards for suit games, empty for null."""
    if game is GameType.NULL:
        return EMPTY
    suit = game.trump_suit
    if suit is None:
        return JACKS
    return JACKS | (SUIT_MASKS[suit] - JACKS)


def plain_suit_set(suit: Suit, game: GameType) -> CardSet:
    """Non-trump cards of a suit.  Null keeps all 8 (the jack ranks inside
    its suit); trump games drop the jack; asking for a suit game's own
    trump suit is an error."""
    if game is GameType.NULL:
        return SUIT_MASKS[suit]
    if game.trump_suit == suit:
        raise ValueError(f"{suit.name} is trump in {game}")
    return SUIT_MASKS[suit] - JACKS


def parse_hand(text: str, size: Optional[int] = None) -> CardSet:
    """Parse a hand code list, optionally enforcing its size."""
    cards = CardSet.from_codes(text)
    if size is not None and len(cards) != size:
        raise ValueError(f"expected {size} cards, got {len(cards)}")
    return cards
