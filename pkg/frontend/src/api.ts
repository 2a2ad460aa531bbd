/**
 * Thin typed client for the fairscope HTTP API. The fetch implementation is
 * injectable so tests can drive the UI without a server.
 */

import type { PortfolioSummary, RunCreated, RunPayload, RunRequest } from './types';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  status: number;
  stage: string | null;

  constructor(status: number, message: string, stage: string | null = null) {
    super(message);
    this.status = status;
    this.stage = stage;
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  let message = `HTTP ${resp.status}`;
  let stage: string | null = null;
  try {
    const body = await resp.json();
    const detail = body?.detail;
    if (typeof detail === 'string') {
      message = detail;
    } else if (detail && typeof detail === 'object') {
      message = String(detail.message ?? message);
      stage = detail.stage ? String(detail.stage) : null;
    }
  } catch {
    /* non-JSON error body: keep the status text */
  }
  return new ApiError(resp.status, message, stage);
}

export class ApiClient {
  private base: string;
  private fetchImpl: FetchLike;

  constructor(base = '', fetchImpl: FetchLike = (...args) => fetch(...args)) {
    this.base = base.replace(/\/$/, '');
    this.fetchImpl = fetchImpl;
  }

  private async get<T>(path: string): Promise<T> {
    const resp = await this.fetchImpl(`${this.base}${path}`);
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as T;
  }

  async getPortfolio(): Promise<PortfolioSummary & { fingerprint: string }> {
    return this.get('/api/portfolio');
  }

  async startRun(request: RunRequest): Promise<RunCreated> {
    const resp = await this.fetchImpl(`${this.base}/api/run`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(request),
    });
    if (!resp.ok) throw await parseError(resp);
    return (await resp.json()) as RunCreated;
  }

  async getRun(runId: string): Promise<RunPayload> {
    return this.get(`/api/runs/${runId}`);
  }

  async health(): Promise<{ status: string; portfolio_loaded: boolean }> {
    return this.get('/api/health');
  }
}
