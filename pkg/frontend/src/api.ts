/** Typed client for the annotation service API. */

export type Role = "prototype" | "counter";

export interface SessionInfo {
  id: string;
  width: number;
  height: number;
  has_gold: boolean;
}

export interface ServerPoint {
  n: number;
  x: number;
  y: number;
  role: Role;
  class: string;
}

export interface TrainRequest {
  seed: number;
  starts: number;
  steps: number;
  stepsize: number;
  fdres: number;
  objective: "a" | "ba";
  radius: number;
  sort: boolean;
  d_first: number;
  gain: number;
  offset: number;
  threshold: number;
  subsample: number;
}

export interface JobStatus {
  status: "running" | "done" | "failed";
  progress: number;
  ba?: number | null;
  error?: string;
}

export interface LandscapeGrid {
  axis1: number[];
  axis2: number[];
  values: number[][];
  argmax: [number, number];
}

export interface RawOutputs {
  width: number;
  height: number;
  values: number[];
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

type Fetch = typeof fetch;

/** All methods re-fetch server state rather than inferring it locally. */
export class Api {
  constructor(private readonly fetchFn: Fetch = fetch.bind(globalThis),
              private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.base + path, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = await resp.json();
        detail = typeof body.detail === "string"
          ? body.detail
          : JSON.stringify(body.detail ?? body);
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return resp.json() as Promise<T>;
  }

  createSession(image: File, gold?: File): Promise<SessionInfo> {
    const form = new FormData();
    form.append("image", image);
    if (gold) form.append("gold", gold);
    return this.request<SessionInfo>("/api/sessions", {
      method: "POST",
      body: form,
    });
  }

  addPoint(sid: string, x: number, y: number, role: Role,
           classLabel: string): Promise<ServerPoint[]> {
    return this.request<ServerPoint[]>(`/api/sessions/${sid}/points`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ x, y, role, class_label: classLabel }),
    });
  }

  deletePoint(sid: string, n: number): Promise<ServerPoint[]> {
    return this.request<ServerPoint[]>(`/api/sessions/${sid}/points/${n}`, {
      method: "DELETE",
    });
  }

  train(sid: string, body: TrainRequest): Promise<{ job_id: string }> {
    return this.request<{ job_id: string }>(`/api/sessions/${sid}/train`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  jobStatus(sid: string, jid: string): Promise<JobStatus> {
    return this.request<JobStatus>(`/api/sessions/${sid}/jobs/${jid}`);
  }

  rawOutputs(sid: string): Promise<RawOutputs> {
    return this.request<RawOutputs>(`/api/sessions/${sid}/raw.json`);
  }

  landscape(sid: string, free: string, res: number): Promise<LandscapeGrid> {
    const q = new URLSearchParams({ free, res: String(res) });
    return this.request<LandscapeGrid>(`/api/sessions/${sid}/landscape?${q}`);
  }

  /** URL of the current mask PNG; `version` busts the browser cache. */
  maskUrl(sid: string, version: number): string {
    return `${this.base}/api/sessions/${sid}/segmentation.png?v=${version}`;
  }
}
