/** Types and transport for the discard advisor endpoint. */

export interface AdviseRequest {
  hand: string[];
  skat?: string[];
  position?: string;
  bid?: number;
  game?: string;
  top?: number;
}

export interface Candidate {
  game: string;
  put: string[];
  win_prob: number;
  expected_cost: number;
  soft_score: number;
  features: Record<string, number> | null;
  fired_rules: string[];
  relaxed: boolean;
}

export interface GameRanking {
  game: string;
  game_value: number;
  subtype: string;
  candidates: Candidate[];
}

export interface AdviseResponse {
  hand: string[];
  position: string;
  bid: number;
  rankings: GameRanking[];
  truncated: boolean;
  elapsed_ms: number;
}

/** The endpoint answered with a 4xx; `detail` is its message, verbatim. */
export class AdviceRejected extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

/** The endpoint could not be reached at all. */
export class AdvisorUnreachable extends Error {
  constructor(cause: unknown) {
    super(cause instanceof Error ? cause.message : String(cause));
  }
}

declare global {
  interface Window {
    SKAT_API_BASE?: string;
  }
}

function apiBase(): string {
  return (typeof window !== 'undefined' && window.SKAT_API_BASE) || '';
}

function detailText(body: unknown): string {
  if (body && typeof body === 'object' && 'detail' in body) {
    const detail = (body as { detail: unknown }).detail;
    return typeof detail === 'string' ? detail : JSON.stringify(detail);
  }
  return JSON.stringify(body);
}

export async function requestAdvice(
  req: AdviseRequest,
  signal?: AbortSignal,
): Promise<AdviseResponse> {
  let response: Response;
  try {
    response = await fetch(`${apiBase()}/api/v1/advise`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(req),
      signal,
    });
  } catch (err) {
    throw new AdvisorUnreachable(err);
  }
  if (!response.ok) {
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      body = await response.text().catch(() => '');
    }
    throw new AdviceRejected(response.status, detailText(body));
  }
  return (await response.json()) as AdviseResponse;
}

export async function advisorIsUp(): Promise<boolean> {
  try {
    const response = await fetch(`${apiBase()}/api/v1/health`);
    return response.ok;
  } catch {
    return false;
  }
}
