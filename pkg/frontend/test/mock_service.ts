// In-memory stand-in for the session service, serving envelopes that
// were captured verbatim from the real HTTP service (test/fixtures/*).

import { readFileSync } from 'node:fs';
import { fileURLToPath } from 'node:url';
import path from 'node:path';
import type { FetchLike } from '../src/api.js';
import type { FinalAnswer, SessionEnvelope } from '../src/types.js';

const here = path.dirname(fileURLToPath(import.meta.url));

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(path.join(here, 'fixtures', `${name}.json`), 'utf-8')) as T;
}

export interface Scenario {
  created: SessionEnvelope;
  query: { status: number; body: SessionEnvelope };
  feedback?: { status: number; body: SessionEnvelope };
  final: FinalAnswer;
}

export function askScenario(): Scenario {
  return {
    created: fixture<SessionEnvelope>('ask_created'),
    query: { status: 200, body: fixture<SessionEnvelope>('ask_query') },
    final: fixture<FinalAnswer>('ask_final'),
  };
}

export function februaryScenario(): Scenario {
  return {
    created: fixture<SessionEnvelope>('feb_created'),
    query: { status: 422, body: fixture<SessionEnvelope>('feb_query') },
    feedback: { status: 200, body: fixture<SessionEnvelope>('feb_feedback') },
    final: fixture<FinalAnswer>('feb_final'),
  };
}

type Planned = { status: number; body: unknown } | 'network-error';

export class MockService {
  readonly calls: { method: string; path: string; body: unknown }[] = [];
  latest: SessionEnvelope;
  private plannedFailures: Planned[] = [];
  private gate: Promise<void> | null = null;

  constructor(private readonly scenario: Scenario) {
    this.latest = scenario.created;
  }

  /** Queue a failure for the next request. */
  failNext(planned: Planned): void {
    this.plannedFailures.push(planned);
  }

  /** Hold the next request open until the returned release() is called. */
  holdNext(): () => void {
    let release: () => void = () => {};
    this.gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    return release;
  }

  get fetch(): FetchLike {
    return async (url: string, init?: RequestInit) => {
      const method = init?.method ?? 'GET';
      const parsed = new URL(url, 'http://mock.test');
      const body = init?.body ? JSON.parse(String(init.body)) : undefined;
      this.calls.push({ method, path: parsed.pathname, body });

      if (this.gate) {
        const gate = this.gate;
        this.gate = null;
        await gate;
      }
      const failure = this.plannedFailures.shift();
      if (failure === 'network-error') {
        throw new TypeError('fetch failed');
      }
      if (failure) {
        return jsonResponse(failure.status, failure.body);
      }

      if (method === 'POST' && parsed.pathname === '/sessions') {
        this.latest = this.scenario.created;
        return jsonResponse(201, this.scenario.created);
      }
      if (method === 'POST' && parsed.pathname.endsWith('/query')) {
        this.latest = this.scenario.query.body;
        return jsonResponse(this.scenario.query.status, this.scenario.query.body);
      }
      if (method === 'POST' && parsed.pathname.endsWith('/feedback')) {
        if (!this.scenario.feedback) {
          return jsonResponse(409, { version: 1, error: 'no feedback planned' });
        }
        this.latest = this.scenario.feedback.body;
        return jsonResponse(this.scenario.feedback.status, this.scenario.feedback.body);
      }
      if (method === 'POST' && parsed.pathname.endsWith('/approve')) {
        return jsonResponse(200, this.scenario.final);
      }
      if (method === 'GET') {
        return jsonResponse(200, this.latest);
      }
      return jsonResponse(404, { version: 1, error: `no route for ${method} ${parsed.pathname}` });
    };
  }
}

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  });
}
