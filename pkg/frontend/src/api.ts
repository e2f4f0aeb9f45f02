// Gateway API client. All server interaction funnels through an injectable
// transport so tests can intercept and record every payload the UI sees.

import type {
  DesignContent,
  DesignRecord,
  HeatmapResponse,
  JobState,
  RankingResponse,
  SummaryResponse,
} from "./types.js";

export interface HttpResponse {
  status: number;
  body: unknown;
}

export type Transport = (
  method: string,
  path: string,
  body?: unknown,
) => Promise<HttpResponse>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown,
  ) {
    super(`gateway returned ${status}: ${JSON.stringify(detail)}`);
  }
}

export function fetchTransport(baseUrl: string): Transport {
  return async (method, path, body) => {
    const resp = await fetch(baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await resp.text();
    let parsed: unknown = text;
    try {
      parsed = JSON.parse(text);
    } catch {
      // text endpoints (heatmap format=text) stay as strings
    }
    return { status: resp.status, body: parsed };
  };
}

export class GatewayClient {
  constructor(private transport: Transport) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const resp = await this.transport(method, path, body);
    if (resp.status >= 400) {
      throw new ApiError(resp.status, (resp.body as { detail?: unknown })?.detail ?? resp.body);
    }
    return resp.body as T;
  }

  createDesign(content: DesignContent): Promise<{ id: string; version: number }> {
    return this.call("POST", "/designs", { content });
  }

  getDesign(id: string): Promise<DesignRecord> {
    return this.call("GET", `/designs/${id}`);
  }

  updateDesign(id: string, content: DesignContent, version: number): Promise<{ version: number }> {
    return this.call("PUT", `/designs/${id}`, { content, version });
  }

  submitJob(designId: string, kind: "simulate" | "sweep"): Promise<{ job_id: string; state: string }> {
    return this.call("POST", `/designs/${designId}/jobs`, { kind });
  }

  jobState(jobId: string): Promise<JobState> {
    return this.call("GET", `/jobs/${jobId}`);
  }

  summary(jobId: string): Promise<SummaryResponse> {
    return this.call("GET", `/jobs/${jobId}/summary`);
  }

  heatmap(jobId: string, layer: number): Promise<HeatmapResponse> {
    return this.call("GET", `/jobs/${jobId}/heatmap?layer=${layer}`);
  }

  ranking(jobId: string): Promise<RankingResponse> {
    return this.call("GET", `/jobs/${jobId}/ranking`);
  }
}
