// Thin typed client over the service HTTP API. The base URL is the only
// configuration the workbench takes.

import type {
  AcceptResponse,
  CampaignInfo,
  ModifyResponse,
  PoolEntry,
} from "./types";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly detail: string,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    throw new ApiError(`network error: ${String(err)}`, 0, String(err));
  }
  const text = await response.text();
  if (!response.ok) {
    let detail = text;
    try {
      const body = JSON.parse(text);
      detail = body.detail ?? text;
    } catch {
      // keep raw text
    }
    throw new ApiError(`request failed (${response.status})`, response.status, detail);
  }
  return JSON.parse(text) as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  modify(sessionId: string, smiles: string, instruction: string): Promise<ModifyResponse> {
    return request(this.url(`/sessions/${sessionId}/modify`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ smiles, instruction }),
    });
  }

  accept(sessionId: string, turn: number, accept = true): Promise<AcceptResponse> {
    return request(this.url(`/sessions/${sessionId}/accept`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ turn, accept }),
    });
  }

  pool(sessionId: string): Promise<{ pool: PoolEntry[] }> {
    return request(this.url(`/sessions/${sessionId}/pool`));
  }

  campaign(campaignId: string): Promise<CampaignInfo> {
    return request(this.url(`/campaigns/${campaignId}`));
  }
}
