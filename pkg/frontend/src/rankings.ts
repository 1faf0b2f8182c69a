/** Render the ranked discard options exactly as the endpoint ordered them. */

import type { GameSection } from './view.js';

function featureBars(row: { name: string; value: number }[]): HTMLElement {
  const wrap = document.createElement('span');
  wrap.className = 'features';
  for (const feature of row) {
    const bar = document.createElement('span');
    bar.className = 'feature';
    bar.title = `${feature.name} = ${feature.value}`;
    const fill = document.createElement('span');
    fill.className = 'fill';
    // bars are a relative visual aid; the magnitude scale is arbitrary
    const width = Math.max(0, Math.min(1, Math.abs(feature.value) / 10));
    fill.style.width = `${Math.round(width * 100)}%`;
    if (feature.value < 0) {
      fill.classList.add('negative');
    }
    bar.appendChild(fill);
    wrap.appendChild(bar);
  }
  return wrap;
}

export function createRankingList(sections: GameSection[]): HTMLElement {
  const el = document.createElement('div');
  el.className = 'rankings';
  for (const section of sections) {
    const box = document.createElement('section');
    box.className = 'game-section';

    const heading = document.createElement('h3');
    heading.textContent = `${section.game} (value ${section.gameValue}, ${section.subtype})`;
    box.appendChild(heading);

    const list = document.createElement('ol');
    for (const row of section.rows) {
      const item = document.createElement('li');
      item.className = 'candidate';
      item.dataset.put = row.putCodes.join(' ');

      const put = document.createElement('span');
      put.className = 'put';
      put.textContent = row.put;
      item.appendChild(put);

      const numbers = document.createElement('span');
      numbers.className = 'numbers';
      numbers.textContent = `win ${row.winPercent}  cost ${row.expectedCost}  score ${row.softScore}`;
      item.appendChild(numbers);

      item.appendChild(featureBars(row.features));

      for (const rule of row.firedRules) {
        const badge = document.createElement('span');
        badge.className = 'rule';
        badge.textContent = rule;
        item.appendChild(badge);
      }
      if (row.relaxed) {
        const badge = document.createElement('span');
        badge.className = 'relaxed';
        badge.title = 'survived only after the strictest veto tiers were dropped';
        badge.textContent = 'relaxed';
        item.appendChild(badge);
      }
      list.appendChild(item);
    }
    if (!section.rows.length) {
      const empty = document.createElement('p');
      empty.className = 'empty';
      empty.textContent = 'no candidates returned';
      box.appendChild(empty);
    }
    box.appendChild(list);
    el.appendChild(box);
  }
  return el;
}
