/**
 * The one network call the console makes. A monotonically increasing
 * sequence number discards stale responses: only the answer to the most
 * recent request may reach the view.
 */

import type { ApiFieldError, FetchOutcome, FormState, RecommendResponse } from './types';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export function requestBody(form: FormState): Record<string, unknown> {
  return {
    par: form.par,
    exam_type: form.examType,
    tier: form.tier,
    target_year: form.targetYear,
    base_years: form.baseYears,
    model: form.model,
    j: form.j,
    pad: form.pad,
    gaokao_score: form.gaokaoScore,
    preferred_locations: form.preferredLocations,
    disliked_locations: form.dislikedLocations,
    preferred_majors: form.preferredMajors,
    disliked_majors: form.dislikedMajors,
  };
}

export class RecommendClient {
  private sequence = 0;

  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  /** POST the form; resolve 'stale' if a newer request started meanwhile. */
  async recommend(form: FormState): Promise<FetchOutcome> {
    const ticket = ++this.sequence;
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}/recommend`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(requestBody(form)),
      });
    } catch (err) {
      if (ticket !== this.sequence) return { kind: 'stale' };
      return { kind: 'network-error', message: err instanceof Error ? err.message : String(err) };
    }
    if (ticket !== this.sequence) return { kind: 'stale' };
    if (!response.ok) {
      let payload: ApiFieldError = { error: `request failed (${response.status})` };
      try {
        payload = (await response.json()) as ApiFieldError;
      } catch {
        /* non-JSON error body: keep the status message */
      }
      return { kind: 'field-error', message: payload.error, field: payload.field };
    }
    const body = (await response.json()) as RecommendResponse;
    if (ticket !== this.sequence) return { kind: 'stale' };
    return { kind: 'ok', response: body };
  }
}
