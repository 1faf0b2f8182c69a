/**
 * Contract fixtures: twenty request/response pairs captured from a live
 * advisor. The UI must render candidates in exactly the captured order
 * and must not invent any number the payload does not carry.
 */

import { readFileSync } from 'node:fs';
import { describe, expect, it } from 'vitest';

import type { AdviseRequest, AdviseResponse } from '../src/api.js';
import { createRankingList } from '../src/rankings.js';
import { rankingSections } from '../src/view.js';

interface GoldenPair {
  request: AdviseRequest;
  response: AdviseResponse;
}

// vitest runs from the package root, next to fixtures/
const pairs: GoldenPair[] = JSON.parse(readFileSync('fixtures/golden.json', 'utf-8'));

describe('golden advisor exchanges', () => {
  it('holds twenty pairs with well-formed hands', () => {
    expect(pairs).toHaveLength(20);
    for (const { request } of pairs) {
      const cards = [...request.hand, ...(request.skat ?? [])];
      expect(cards).toHaveLength(12);
      expect(new Set(cards).size).toBe(12);
    }
  });

  it('maps every response to rows in exactly the payload order', () => {
    for (const { response } of pairs) {
      const sections = rankingSections(response);
      expect(sections.map((s) => s.game)).toEqual(response.rankings.map((r) => r.game));
      sections.forEach((section, i) => {
        const fromPayload = response.rankings[i].candidates.map((c) => c.put.join(' '));
        expect(section.rows.map((r) => r.putCodes.join(' '))).toEqual(fromPayload);
      });
    }
  });

  it('renders every response in exactly the payload order', () => {
    for (const { response } of pairs) {
      const el = createRankingList(rankingSections(response));
      const rendered = [...el.querySelectorAll<HTMLElement>('.candidate')].map(
        (item) => item.dataset.put,
      );
      const fromPayload = response.rankings.flatMap((r) =>
        r.candidates.map((c) => c.put.join(' ')),
      );
      expect(rendered).toEqual(fromPayload);
    }
  });

  it('shows win figures only for candidates the payload priced', () => {
    for (const { response } of pairs) {
      const el = createRankingList(rankingSections(response));
      const numbers = [...el.querySelectorAll<HTMLElement>('.numbers')];
      const priced = response.rankings.reduce((n, r) => n + r.candidates.length, 0);
      expect(numbers).toHaveLength(priced);
    }
  });
});
