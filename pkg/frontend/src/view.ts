/**
 * Pure mapping from the endpoint payload to what the page shows.
 *
 * Every number on screen comes from the response; this module only
 * formats, it never scores. Candidate order is the endpoint's order.
 */

import type { AdviseResponse, Candidate, GameRanking } from './api.js';
import { cardLabel } from './hand.js';

export interface CandidateRow {
  put: string;
  putCodes: string[];
  winPercent: string;
  expectedCost: string;
  softScore: string;
  features: { name: string; value: number }[];
  firedRules: string[];
  relaxed: boolean;
}

export interface GameSection {
  game: string;
  gameValue: number;
  subtype: string;
  rows: CandidateRow[];
}

export function candidateRow(candidate: Candidate): CandidateRow {
  const features = candidate.features
    ? Object.entries(candidate.features).map(([name, value]) => ({ name, value }))
    : [];
  return {
    put: candidate.put.map(cardLabel).join(' '),
    putCodes: [...candidate.put],
    winPercent: (candidate.win_prob * 100).toFixed(1) + '%',
    expectedCost: candidate.expected_cost.toFixed(1),
    softScore: candidate.soft_score.toFixed(3),
    features,
    firedRules: [...candidate.fired_rules],
    relaxed: candidate.relaxed,
  };
}

export function gameSection(ranking: GameRanking): GameSection {
  return {
    game: ranking.game,
    gameValue: ranking.game_value,
    subtype: ranking.subtype,
    rows: ranking.candidates.map(candidateRow),
  };
}

export function rankingSections(response: AdviseResponse): GameSection[] {
  return response.rankings.map(gameSection);
}
