/**
 * Mocked API around one university predicted at (600, 630) with pad 5:
 * buckets A [595, 610), B [610, 620), C [620, 635). The mock places the
 * student the same way the live engine does, so the view under test sees
 * response bodies with the production shape.
 */

import type { FetchLike } from '../src/api';
import { DEFAULT_FORM, type FormState, type RecommendResponse, type SlotColumn } from '../src/types';

export const FIXTURE_BUCKETS: Array<[string, number, number]> = [
  ['A', 595, 610],
  ['B', 610, 620],
  ['C', 620, 635],
];

export function fixtureResponse(
  score: number,
  opts: { excluded?: boolean } = {},
): RecommendResponse {
  const slots: SlotColumn[] = FIXTURE_BUCKETS.map(([label, low, high]) => {
    const hit = !opts.excluded && score >= low && score < high;
    return {
      label,
      universities: hit
        ? [{
            university: 'uni-x',
            predicted_low: 600,
            predicted_high: 630,
            interval: [low, high] as [number, number],
            location: 'beijing',
            flags: ['two-base-mean'],
          }]
        : [],
    };
  });
  return {
    model: 'brm',
    j: 3,
    pad: 5,
    gaokao_score: score,
    target_year: 2015,
    srt_provenance: 'exact',
    labels: ['A', 'B', 'C'],
    slots,
    diagnostics: [],
  };
}

export interface MockCall {
  body: Record<string, unknown>;
}

export function mockApi(options: {
  delayByScore?: Record<number, number>;
  failuresBeforeSuccess?: number;
  fieldError?: { status: number; error: string; field?: string };
} = {}): { fetchImpl: FetchLike; calls: MockCall[] } {
  const calls: MockCall[] = [];
  let failures = options.failuresBeforeSuccess ?? 0;
  const fetchImpl: FetchLike = async (_url, init) => {
    const body = JSON.parse(String(init?.body)) as Record<string, unknown>;
    calls.push({ body });
    if (failures > 0) {
      failures -= 1;
      throw new TypeError('network down');
    }
    if (options.fieldError) {
      const { status, ...payload } = options.fieldError;
      return new Response(JSON.stringify(payload), { status });
    }
    const score = body.gaokao_score as number;
    const disliked = (body.disliked_locations as string[]) ?? [];
    const excluded = disliked.includes('beijing');
    const delay = options.delayByScore?.[score] ?? 0;
    if (delay) await new Promise((resolve) => setTimeout(resolve, delay));
    return new Response(JSON.stringify(fixtureResponse(score, { excluded })), { status: 200 });
  };
  return { fetchImpl, calls };
}

export function formWithScore(score: number, extra: Partial<FormState> = {}): FormState {
  return { ...DEFAULT_FORM, gaokaoScore: score, ...extra };
}

export function consoleDom(): {
  results: HTMLElement;
  errors: HTMLElement;
  status: HTMLElement;
  retry: HTMLButtonElement;
} {
  document.body.innerHTML = `
    <div id="results"></div>
    <div id="errors"></div>
    <span id="status"></span>
    <button id="retry"></button>
  `;
  return {
    results: document.getElementById('results') as HTMLElement,
    errors: document.getElementById('errors') as HTMLElement,
    status: document.getElementById('status') as HTMLElement,
    retry: document.getElementById('retry') as HTMLButtonElement,
  };
}
