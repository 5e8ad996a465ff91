/**
 * Wires the form, the client and the view into the what-if loop:
 * edit a field, re-query, see which universities changed bucket.
 */

import { RecommendClient } from './api';
import type { FormState, RecommendResponse } from './types';
import { syncUrl } from './urlState';
import { validateForm } from './validate';
import { renderIssues, renderResults, renderStatus } from './view';

export interface ConsoleElements {
  results: HTMLElement;
  errors: HTMLElement;
  status: HTMLElement;
  retry: HTMLButtonElement;
}

export class WhatIfConsole {
  private previous: RecommendResponse | null = null;
  private lastForm: FormState | null = null;

  constructor(
    private readonly client: RecommendClient,
    private readonly elements: ConsoleElements,
    private readonly win: Window | null = typeof window === 'undefined' ? null : window,
  ) {
    this.elements.retry.addEventListener('click', () => {
      if (this.lastForm) void this.submit(this.lastForm);
    });
    this.elements.retry.hidden = true;
  }

  /** Validate, then query; invalid forms never reach the network. */
  async submit(form: FormState): Promise<'blocked' | 'ok' | 'error' | 'stale'> {
    const issues = validateForm(form);
    renderIssues(this.elements.errors, issues);
    if (issues.length) {
      renderStatus(this.elements.status, 'fix the highlighted fields', 'error');
      return 'blocked';
    }
    this.lastForm = form;
    this.elements.retry.hidden = true;
    renderStatus(this.elements.status, 'asking the engine…', 'loading');

    const outcome = await this.client.recommend(form);
    switch (outcome.kind) {
      case 'stale':
        return 'stale';
      case 'network-error':
        renderStatus(this.elements.status, `network failure: ${outcome.message}`, 'error');
        this.elements.retry.hidden = false;
        return 'error';
      case 'field-error': {
        renderIssues(this.elements.errors, [
          { field: outcome.field ?? 'form', message: outcome.message },
        ]);
        renderStatus(this.elements.status, 'the server rejected the request', 'error');
        return 'error';
      }
      case 'ok': {
        renderResults(this.elements.results, outcome.response, this.previous);
        this.previous = outcome.response;
        renderStatus(this.elements.status, 'up to date', 'idle');
        if (this.win) syncUrl(form, this.win);
        return 'ok';
      }
    }
  }

  /** The what-if step: change one field of the last successful form. */
  async whatIf(change: Partial<FormState>): Promise<'blocked' | 'ok' | 'error' | 'stale'> {
    if (!this.lastForm) throw new Error('no previous query to vary');
    return this.submit({ ...this.lastForm, ...change });
  }

  lastResponse(): RecommendResponse | null {
    return this.previous;
  }
}
