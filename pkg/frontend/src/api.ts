// Typed client for the five session-service endpoints. The fetch
// implementation is injectable so tests can run against a mock service.

import type { FinalAnswer, SessionEnvelope } from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly envelope: SessionEnvelope | null = null,
  ) {
    super(message);
    this.name = 'ApiError';
  }

  // status 0 marks a transport failure (no response at all)
  get retryable(): boolean {
    return this.status === 0 || this.status >= 500;
  }
}

async function readJson(response: Response): Promise<Record<string, unknown>> {
  try {
    return (await response.json()) as Record<string, unknown>;
  } catch {
    return {};
  }
}

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike,
  ) {}

  private async request(
    method: string,
    path: string,
    body?: Record<string, unknown>,
  ): Promise<{ status: number; body: Record<string, unknown> }> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, {
        method,
        headers: body === undefined ? {} : { 'content-type': 'application/json' },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (error) {
      throw new ApiError(0, `service unreachable: ${String(error)}`);
    }
    return { status: response.status, body: await readJson(response) };
  }

  /** POST /sessions */
  async createSession(variant?: string): Promise<SessionEnvelope> {
    const { status, body } = await this.request(
      'POST',
      '/sessions',
      variant ? { variant } : {},
    );
    if (status !== 201) {
      throw new ApiError(status, String(body.error ?? `create failed (${status})`));
    }
    return body as unknown as SessionEnvelope;
  }

  /** POST /sessions/{id}/query; a 422 still carries a session envelope. */
  async query(sessionId: string, question: string): Promise<SessionEnvelope> {
    const { status, body } = await this.request(
      'POST',
      `/sessions/${sessionId}/query`,
      { question },
    );
    if (status === 200 || status === 422) {
      return body as unknown as SessionEnvelope;
    }
    throw new ApiError(status, String(body.error ?? `query failed (${status})`));
  }

  /** POST /sessions/{id}/feedback; a 422 still carries a session envelope. */
  async feedback(sessionId: string, text: string): Promise<SessionEnvelope> {
    const { status, body } = await this.request(
      'POST',
      `/sessions/${sessionId}/feedback`,
      { text },
    );
    if (status === 200 || status === 422) {
      return body as unknown as SessionEnvelope;
    }
    throw new ApiError(status, String(body.error ?? `feedback failed (${status})`));
  }

  /** POST /sessions/{id}/approve */
  async approve(sessionId: string): Promise<FinalAnswer> {
    const { status, body } = await this.request('POST', `/sessions/${sessionId}/approve`);
    if (status !== 200) {
      throw new ApiError(status, String(body.error ?? `approve failed (${status})`));
    }
    return body as unknown as FinalAnswer;
  }

  /** GET /sessions/{id} */
  async getSession(sessionId: string): Promise<SessionEnvelope> {
    const { status, body } = await this.request('GET', `/sessions/${sessionId}`);
    if (status !== 200) {
      throw new ApiError(status, String(body.error ?? `get failed (${status})`));
    }
    return body as unknown as SessionEnvelope;
  }
}
