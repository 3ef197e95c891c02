/** Thin fetch client for the simulation service. */

import type {
  Diagnostic,
  SimulateResponse,
  SummaryResponse,
  TaxDesignPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
    readonly diagnostics: Diagnostic[] = [],
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function raiseFor(response: Response): Promise<never> {
  let message = `${response.status} ${response.statusText}`;
  let diagnostics: Diagnostic[] = [];
  try {
    const body = await response.json();
    if (typeof body.detail === "string") {
      message = body.detail;
    } else if (body.detail) {
      message = body.detail.message ?? message;
      diagnostics = body.detail.diagnostics ?? [];
    }
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(response.status, message, diagnostics);
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`);
    if (!response.ok) await raiseFor(response);
    return response.json() as Promise<T>;
  }

  getPresets(): Promise<TaxDesignPayload[]> {
    return this.get("/api/presets");
  }

  getSummary(): Promise<SummaryResponse> {
    return this.get("/api/summary");
  }

  getHealth(): Promise<{ status: string; ready: boolean }> {
    return this.get("/api/health");
  }

  async simulate(
    design: TaxDesignPayload,
    options: { freeze_thresholds?: boolean } = {},
  ): Promise<SimulateResponse> {
    const response = await fetch(`${this.baseUrl}/api/simulate`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ design, options }),
    });
    if (!response.ok) await raiseFor(response);
    return response.json() as Promise<SimulateResponse>;
  }
}
