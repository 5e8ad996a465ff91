import { describe, expect, it } from 'vitest';

import { DEFAULT_FORM, type FormState } from '../src/types';
import { formFromQuery, formToQuery } from '../src/urlState';

describe('URL round-trip of form state', () => {
  it('defaults produce an empty query', () => {
    expect(formToQuery(DEFAULT_FORM)).toBe('');
    expect(formFromQuery('')).toEqual(DEFAULT_FORM);
  });

  it('a fully customized form survives the round trip', () => {
    const form: FormState = {
      par: 'hebei',
      examType: 'wenke',
      tier: 2,
      targetYear: 2016,
      baseYears: [2014, 2015],
      model: 'wpm',
      j: 4,
      pad: 7,
      gaokaoScore: 612,
      scaleMax: 480,
      preferredLocations: ['beijing', 'shanghai'],
      dislikedLocations: ['xian'],
      preferredMajors: ['cs'],
      dislikedMajors: ['history', 'literature'],
    };
    expect(formFromQuery(formToQuery(form))).toEqual(form);
  });

  it('garbage parameters fall back to defaults', () => {
    const form = formFromQuery('tier=banana&model=gbm&score=not-a-number');
    expect(form.tier).toBe(DEFAULT_FORM.tier);
    expect(form.model).toBe('brm');
    expect(form.gaokaoScore).toBe(DEFAULT_FORM.gaokaoScore);
  });

  it('only non-default fields appear in the link', () => {
    const query = formToQuery({ ...DEFAULT_FORM, gaokaoScore: 612 });
    expect(query).toBe('score=612');
  });
});
