"""skatkit: Skat discard selection and evaluation toolkit."""

__version__ = "0.1.0"

from .cards import Card, CardSet, GameType, Position, Rank, Suit  # noqa: F401
