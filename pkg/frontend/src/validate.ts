/**
 * Client-side mirror of the preference invariants. A form that fails here
 * never reaches the network; the server enforces the same rules again.
 */

import type { FormState } from './types';

export interface FieldIssue {
  field: string;
  message: string;
}

const overlap = (a: string[], b: string[]): string[] => {
  const bSet = new Set(b.map((s) => s.trim().toLowerCase()).filter(Boolean));
  return a
    .map((s) => s.trim().toLowerCase())
    .filter((s) => s && bSet.has(s));
};

export function validateForm(form: FormState): FieldIssue[] {
  const issues: FieldIssue[] = [];
  if (!form.par.trim()) {
    issues.push({ field: 'par', message: 'region is required' });
  }
  if (!Number.isInteger(form.gaokaoScore) || form.gaokaoScore < 0 || form.gaokaoScore > form.scaleMax) {
    issues.push({
      field: 'gaokaoScore',
      message: `score must be an integer between 0 and ${form.scaleMax}`,
    });
  }
  if (![1, 2, 3].includes(form.tier)) {
    issues.push({ field: 'tier', message: 'tier must be 1, 2 or 3' });
  }
  if (!Number.isInteger(form.j) || form.j < 1 || form.j > 10) {
    issues.push({ field: 'j', message: 'slot count must be between 1 and 10' });
  }
  if (!Number.isInteger(form.pad) || form.pad < 1) {
    issues.push({ field: 'pad', message: 'pad must be a positive integer' });
  }
  if (form.baseYears.length < 1 || form.baseYears.length > 2 || form.baseYears.some((y) => !Number.isInteger(y))) {
    issues.push({ field: 'baseYears', message: 'give one or two base years' });
  }
  if (form.baseYears.some((y) => y >= form.targetYear)) {
    issues.push({ field: 'baseYears', message: 'base years must precede the target year' });
  }
  const locClash = overlap(form.preferredLocations, form.dislikedLocations);
  if (locClash.length) {
    issues.push({
      field: 'dislikedLocations',
      message: `locations both preferred and disliked: ${locClash.join(', ')}`,
    });
  }
  const majorClash = overlap(form.preferredMajors, form.dislikedMajors);
  if (majorClash.length) {
    issues.push({
      field: 'dislikedMajors',
      message: `majors both preferred and disliked: ${majorClash.join(', ')}`,
    });
  }
  return issues;
}

export const isValid = (form: FormState): boolean => validateForm(form).length === 0;
