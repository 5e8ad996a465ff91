/**
 * Form state lives in the URL: a shared link reproduces the same what-if
 * view against the same snapshot. Lists are comma-joined; defaults are
 * omitted to keep links short.
 */

import { DEFAULT_FORM, type FormState } from './types';

const LIST_KEYS = [
  ['preferredLocations', 'pl'],
  ['dislikedLocations', 'dl'],
  ['preferredMajors', 'pm'],
  ['dislikedMajors', 'dm'],
] as const;

export function formToQuery(form: FormState): string {
  const params = new URLSearchParams();
  const put = (key: string, value: string, fallback: string) => {
    if (value !== fallback) params.set(key, value);
  };
  put('par', form.par, DEFAULT_FORM.par);
  put('exam', form.examType, DEFAULT_FORM.examType);
  put('tier', String(form.tier), String(DEFAULT_FORM.tier));
  put('target', String(form.targetYear), String(DEFAULT_FORM.targetYear));
  put('bases', form.baseYears.join(','), DEFAULT_FORM.baseYears.join(','));
  put('model', form.model, DEFAULT_FORM.model);
  put('j', String(form.j), String(DEFAULT_FORM.j));
  put('pad', String(form.pad), String(DEFAULT_FORM.pad));
  put('score', String(form.gaokaoScore), String(DEFAULT_FORM.gaokaoScore));
  put('scale', String(form.scaleMax), String(DEFAULT_FORM.scaleMax));
  for (const [key, short] of LIST_KEYS) {
    const joined = form[key].join(',');
    if (joined) params.set(short, joined);
  }
  return params.toString();
}

const intOr = (raw: string | null, fallback: number): number => {
  if (raw === null) return fallback;
  const value = Number.parseInt(raw, 10);
  return Number.isNaN(value) ? fallback : value;
};

const listOr = (raw: string | null): string[] =>
  raw ? raw.split(',').map((s) => s.trim()).filter(Boolean) : [];

export function formFromQuery(query: string): FormState {
  const params = new URLSearchParams(query);
  const exam = params.get('exam');
  const model = params.get('model');
  return {
    par: params.get('par') ?? DEFAULT_FORM.par,
    examType: exam === 'wenke' ? 'wenke' : 'like',
    tier: intOr(params.get('tier'), DEFAULT_FORM.tier),
    targetYear: intOr(params.get('target'), DEFAULT_FORM.targetYear),
    baseYears: params.get('bases')
      ? params.get('bases')!.split(',').map((y) => Number.parseInt(y, 10)).filter((y) => !Number.isNaN(y))
      : [...DEFAULT_FORM.baseYears],
    model: model === 'wsm' || model === 'wpm' || model === 'aasm' || model === 'aadm' ? model : 'brm',
    j: intOr(params.get('j'), DEFAULT_FORM.j),
    pad: intOr(params.get('pad'), DEFAULT_FORM.pad),
    gaokaoScore: intOr(params.get('score'), DEFAULT_FORM.gaokaoScore),
    scaleMax: intOr(params.get('scale'), DEFAULT_FORM.scaleMax),
    preferredLocations: listOr(params.get('pl')),
    dislikedLocations: listOr(params.get('dl')),
    preferredMajors: listOr(params.get('pm')),
    dislikedMajors: listOr(params.get('dm')),
  };
}

/** Push the form into the address bar without reloading. */
export function syncUrl(form: FormState, win: Window = window): void {
  const query = formToQuery(form);
  const url = query ? `${win.location.pathname}?${query}` : win.location.pathname;
  win.history.replaceState(null, '', url);
}
