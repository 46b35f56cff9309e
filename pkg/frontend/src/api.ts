// Thin typed client for the analysis service. The fetch implementation is
// injected so tests can script responses and timing.

import type {
  AnalyzeRequest,
  AnalyzeResponse,
  ApiErrorBody,
  DatasetInfo,
} from "./types.js";

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly detail?: string,
  ) {
    super(message);
  }
}

export class AnalyzeClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike,
  ) {}

  async datasets(): Promise<DatasetInfo[]> {
    const response = await this.fetchImpl(`${this.baseUrl}/datasets`);
    const body = (await response.json()) as { datasets: DatasetInfo[] };
    if (!response.ok) {
      throw new ApiError(response.status, "datasets_failed", "cannot list datasets");
    }
    return body.datasets;
  }

  async analyze(request: AnalyzeRequest): Promise<AnalyzeResponse> {
    const response = await this.fetchImpl(`${this.baseUrl}/analyze`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    const body = await response.json();
    if (!response.ok) {
      const err = body as ApiErrorBody;
      throw new ApiError(
        response.status,
        err.code ?? "request_failed",
        err.message ?? `analyze failed with status ${response.status}`,
        err.detail,
      );
    }
    return body as AnalyzeResponse;
  }
}
