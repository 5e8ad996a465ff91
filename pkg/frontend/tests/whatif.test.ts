import { beforeEach, describe, expect, it } from 'vitest';

import { RecommendClient } from '../src/api';
import { WhatIfConsole } from '../src/controller';
import { diffResponses } from '../src/view';
import { consoleDom, fixtureResponse, formWithScore, mockApi } from './fixtures';

const cardsIn = (results: HTMLElement, label: string): HTMLElement[] => {
  const column = results.querySelector<HTMLElement>(`[data-label="${label}"]`);
  return column ? Array.from(column.querySelectorAll('.card')) : [];
};

describe('the what-if console against a mocked API', () => {
  let dom: ReturnType<typeof consoleDom>;

  beforeEach(() => {
    dom = consoleDom();
  });

  it('renders the fixture: one card, in column B', async () => {
    const { fetchImpl, calls } = mockApi();
    const app = new WhatIfConsole(new RecommendClient('http://api', fetchImpl), dom, null);

    expect(await app.submit(formWithScore(612))).toBe('ok');
    expect(calls).toHaveLength(1);
    expect(cardsIn(dom.results, 'A')).toHaveLength(0);
    expect(cardsIn(dom.results, 'B')).toHaveLength(1);
    expect(cardsIn(dom.results, 'C')).toHaveLength(0);

    const card = cardsIn(dom.results, 'B')[0]!;
    expect(card.dataset.university).toBe('uni-x');
    expect(card.textContent).toContain('predicted 600–630');
    expect(card.textContent).toContain('[610, 620)');
    expect(card.querySelector('.badge')?.textContent).toBe('two-base-mean');
  });

  it('moves the card from B to C when the score climbs 612 -> 625, highlighted', async () => {
    const { fetchImpl } = mockApi();
    const app = new WhatIfConsole(new RecommendClient('http://api', fetchImpl), dom, null);

    await app.submit(formWithScore(612));
    expect(await app.whatIf({ gaokaoScore: 625 })).toBe('ok');

    expect(cardsIn(dom.results, 'B')).toHaveLength(0);
    const [card] = cardsIn(dom.results, 'C');
    expect(card).toBeDefined();
    expect(card!.classList.contains('card--moved')).toBe(true);
    expect(card!.dataset.movedFrom).toBe('B');
    expect(card!.textContent).toContain('was B');
  });

  it('a no-op change renders identically with no highlights', async () => {
    const { fetchImpl } = mockApi();
    const app = new WhatIfConsole(new RecommendClient('http://api', fetchImpl), dom, null);

    await app.submit(formWithScore(612));
    const before = dom.results.innerHTML;
    await app.whatIf({});
    expect(dom.results.innerHTML).toBe(before);
    expect(dom.results.querySelectorAll('.card--moved')).toHaveLength(0);
  });

  it('blocks an invalid form before any request is made', async () => {
    const { fetchImpl, calls } = mockApi();
    const app = new WhatIfConsole(new RecommendClient('http://api', fetchImpl), dom, null);

    expect(await app.submit(formWithScore(900))).toBe('blocked');
    expect(calls).toHaveLength(0);
    const error = dom.errors.querySelector<HTMLElement>('.form-error');
    expect(error?.dataset.field).toBe('gaokaoScore');
  });

  it('surfaces API field errors inline', async () => {
    const { fetchImpl } = mockApi({
      fieldError: { status: 400, error: "bad value for 'tier'", field: 'tier' },
    });
    const app = new WhatIfConsole(new RecommendClient('http://api', fetchImpl), dom, null);

    expect(await app.submit(formWithScore(612))).toBe('error');
    const error = dom.errors.querySelector<HTMLElement>('.form-error');
    expect(error?.dataset.field).toBe('tier');
    expect(error?.textContent).toContain('bad value');
  });

  it('offers a retry after a network failure, and the retry works', async () => {
    const { fetchImpl, calls } = mockApi({ failuresBeforeSuccess: 1 });
    const app = new WhatIfConsole(new RecommendClient('http://api', fetchImpl), dom, null);

    expect(await app.submit(formWithScore(612))).toBe('error');
    expect(dom.retry.hidden).toBe(false);
    expect(dom.status.className).toContain('error');

    dom.retry.click();
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(calls).toHaveLength(2);
    expect(cardsIn(dom.results, 'B')).toHaveLength(1);
  });

  it('discards a stale response when a newer what-if overtakes it', async () => {
    const { fetchImpl } = mockApi({ delayByScore: { 612: 40 } });
    const app = new WhatIfConsole(new RecommendClient('http://api', fetchImpl), dom, null);

    const slow = app.submit(formWithScore(612));
    const fast = app.submit(formWithScore(625));
    const [slowOutcome, fastOutcome] = await Promise.all([slow, fast]);

    expect(slowOutcome).toBe('stale');
    expect(fastOutcome).toBe('ok');
    expect(cardsIn(dom.results, 'C')).toHaveLength(1);
    expect(cardsIn(dom.results, 'B')).toHaveLength(0);
    expect(app.lastResponse()?.gaokao_score).toBe(625);
  });

  it('notes a university filtered out by a new dislike', async () => {
    const { fetchImpl } = mockApi();
    const app = new WhatIfConsole(new RecommendClient('http://api', fetchImpl), dom, null);

    await app.submit(formWithScore(612));
    await app.whatIf({ dislikedLocations: ['beijing'] });

    expect(cardsIn(dom.results, 'B')).toHaveLength(0);
    const note = dom.results.querySelector('.results__filtered');
    expect(note?.textContent).toContain('uni-x');
  });
});

describe('response diffing', () => {
  it('classifies moves, appearances and removals', () => {
    const before = fixtureResponse(612);
    const after = fixtureResponse(625);
    const diff = diffResponses(before, after);
    expect(diff.moved.get('uni-x')).toEqual({ from: 'B', to: 'C' });
    expect(diff.appeared.size).toBe(0);

    const emptied = diffResponses(after, fixtureResponse(625, { excluded: true }));
    expect(emptied.removed.has('uni-x')).toBe(true);

    const fresh = diffResponses(null, after);
    expect(fresh.moved.size).toBe(0);
    expect(fresh.appeared.size).toBe(0);
  });
});
