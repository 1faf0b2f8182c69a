/** The 32-card grid plus the strip of cards picked so far. */

import { HAND_SIZE, RANKS, SUITS, cardLabel } from './hand.js';

export interface PickerOptions {
  selected: readonly string[];
  onToggle: (code: string) => void;
}

export function createCardPicker(opts: PickerOptions): HTMLElement {
  const el = document.createElement('div');
  el.className = 'picker';
  const full = opts.selected.length >= HAND_SIZE;

  for (const suit of SUITS) {
    const row = document.createElement('div');
    row.className = 'picker-row';
    for (const rank of RANKS) {
      const code = suit + rank;
      const button = document.createElement('button');
      button.type = 'button';
      button.className = 'card';
      button.dataset.code = code;
      button.textContent = cardLabel(code);
      if (suit === 'H' || suit === 'D') {
        button.classList.add('red');
      }
      if (opts.selected.includes(code)) {
        button.classList.add('selected');
      } else if (full) {
        button.disabled = true;
      }
      button.addEventListener('click', () => opts.onToggle(code));
      row.appendChild(button);
    }
    el.appendChild(row);
  }
  return el;
}

export function createSelectionStrip(selected: readonly string[]): HTMLElement {
  const el = document.createElement('div');
  el.className = 'strip';
  for (const code of selected) {
    const chip = document.createElement('span');
    chip.className = 'chip';
    chip.textContent = cardLabel(code);
    if (code[0] === 'H' || code[0] === 'D') {
      chip.classList.add('red');
    }
    el.appendChild(chip);
  }
  const count = document.createElement('span');
  count.className = 'count';
  count.textContent = `${selected.length}/${HAND_SIZE}`;
  el.appendChild(count);
  return el;
}
