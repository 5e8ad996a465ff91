import { RecommendClient } from './api';
import { WhatIfConsole } from './controller';
import type { FormState } from './types';
import { formFromQuery } from './urlState';

const API_BASE = import.meta.env.VITE_API_BASE ?? 'http://127.0.0.1:8080';

const $ = <T extends HTMLElement>(selector: string): T => {
  const node = document.querySelector<T>(selector);
  if (!node) throw new Error(`missing element ${selector}`);
  return node;
};

const input = (selector: string) => $<HTMLInputElement>(selector);
const select = (selector: string) => $<HTMLSelectElement>(selector);

const splitList = (raw: string): string[] =>
  raw.split(',').map((s) => s.trim()).filter(Boolean);

function readForm(): FormState {
  return {
    par: input('#par').value.trim(),
    examType: select('#exam').value === 'wenke' ? 'wenke' : 'like',
    tier: Number.parseInt(select('#tier').value, 10),
    targetYear: Number.parseInt(input('#target-year').value, 10),
    baseYears: splitList(input('#base-years').value).map((y) => Number.parseInt(y, 10)),
    model: select('#model').value as FormState['model'],
    j: Number.parseInt(input('#slot-count').value, 10),
    pad: Number.parseInt(input('#pad').value, 10),
    gaokaoScore: Number.parseInt(input('#score').value, 10),
    scaleMax: Number.parseInt(input('#scale').value, 10),
    preferredLocations: splitList(input('#preferred-locations').value),
    dislikedLocations: splitList(input('#disliked-locations').value),
    preferredMajors: splitList(input('#preferred-majors').value),
    dislikedMajors: splitList(input('#disliked-majors').value),
  };
}

function writeForm(form: FormState): void {
  input('#par').value = form.par;
  select('#exam').value = form.examType;
  select('#tier').value = String(form.tier);
  input('#target-year').value = String(form.targetYear);
  input('#base-years').value = form.baseYears.join(',');
  select('#model').value = form.model;
  input('#slot-count').value = String(form.j);
  input('#pad').value = String(form.pad);
  input('#score').value = String(form.gaokaoScore);
  input('#scale').value = String(form.scaleMax);
  input('#preferred-locations').value = form.preferredLocations.join(',');
  input('#disliked-locations').value = form.dislikedLocations.join(',');
  input('#preferred-majors').value = form.preferredMajors.join(',');
  input('#disliked-majors').value = form.dislikedMajors.join(',');
}

function bootstrap(): void {
  const consoleApp = new WhatIfConsole(new RecommendClient(API_BASE), {
    results: $('#results'),
    errors: $('#form-errors'),
    status: $('#status'),
    retry: $<HTMLButtonElement>('#retry'),
  });

  // A shared link restores the exact what-if view.
  writeForm(formFromQuery(window.location.search));

  $('#whatif-form').addEventListener('submit', (event) => {
    event.preventDefault();
    void consoleApp.submit(readForm());
  });

  // Any field edit re-queries immediately once a first result exists.
  $('#whatif-form').addEventListener('change', () => {
    if (consoleApp.lastResponse()) void consoleApp.submit(readForm());
  });
}

bootstrap();
