/** Hand-picker state: an ordered selection of at most 12 distinct cards. */

export const HAND_SIZE = 12;

export const SUITS = ['C', 'S', 'H', 'D'] as const;
export const RANKS = ['A', 'T', 'K', 'Q', 'J', '9', '8', '7'] as const;

export const SUIT_GLYPHS: Record<string, string> = {
  C: '♣',
  S: '♠',
  H: '♥',
  D: '♦',
};

/** All 32 card codes in display order, clubs down to diamonds. */
export function deckCodes(): string[] {
  return SUITS.flatMap((suit) => RANKS.map((rank) => suit + rank));
}

/**
 * Toggle a card in the selection, preserving pick order.
 *
 * A selected card is removed; a new card is appended unless the hand is
 * already full, in which case the selection is returned unchanged.
 * Duplicates cannot arise: a code already present always toggles off.
 */
export function toggleCard(selected: readonly string[], code: string): string[] {
  if (selected.includes(code)) {
    return selected.filter((c) => c !== code);
  }
  if (selected.length >= HAND_SIZE) {
    return [...selected];
  }
  return [...selected, code];
}

export function isComplete(selected: readonly string[]): boolean {
  return selected.length === HAND_SIZE;
}

export function cardLabel(code: string): string {
  return SUIT_GLYPHS[code[0]] + code.slice(1);
}
