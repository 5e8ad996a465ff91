/** Shapes shared across the what-if console. */

export interface FormState {
  par: string;
  examType: 'like' | 'wenke';
  tier: number;
  targetYear: number;
  baseYears: number[];
  model: 'brm' | 'wsm' | 'wpm' | 'aasm' | 'aadm';
  j: number;
  pad: number;
  gaokaoScore: number;
  scaleMax: number;
  preferredLocations: string[];
  dislikedLocations: string[];
  preferredMajors: string[];
  dislikedMajors: string[];
}

export interface UniversityCard {
  university: string;
  predicted_low: number;
  predicted_high: number;
  interval: [number, number];
  location: string;
  flags: string[];
}

export interface SlotColumn {
  label: string;
  universities: UniversityCard[];
}

/** Response of POST /recommend; rendered verbatim, never recomputed. */
export interface RecommendResponse {
  model: string;
  j: number;
  pad: number;
  gaokao_score: number;
  target_year: number;
  srt_provenance: string;
  labels: string[];
  slots: SlotColumn[];
  diagnostics: string[];
}

export interface ApiFieldError {
  error: string;
  field?: string;
}

export type FetchOutcome =
  | { kind: 'ok'; response: RecommendResponse }
  | { kind: 'field-error'; message: string; field?: string }
  | { kind: 'network-error'; message: string }
  | { kind: 'stale' };

export const DEFAULT_FORM: FormState = {
  par: 'henan',
  examType: 'like',
  tier: 1,
  targetYear: 2015,
  baseYears: [2013, 2014],
  model: 'brm',
  j: 3,
  pad: 5,
  gaokaoScore: 600,
  scaleMax: 750,
  preferredLocations: [],
  dislikedLocations: [],
  preferredMajors: [],
  dislikedMajors: [],
};
