import type { HighlightPayload } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

/** Thin client for the highlight service; the base URL is configurable. */
export class ApiClient {
  constructor(readonly baseUrl: string) {}

  async submitHighlight(responseText: string, mode?: "live" | "replay"): Promise<HighlightPayload> {
    const body: Record<string, string> = { response_text: responseText };
    if (mode) body.mode = mode;
    let response: Response;
    try {
      response = await fetch(`${this.baseUrl}/highlight`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      });
    } catch (error) {
      throw new ApiError(0, `cannot reach ${this.baseUrl}: ${String(error)}`);
    }
    if (!response.ok) {
      let detail = `HTTP ${response.status}`;
      try {
        const payload = (await response.json()) as { detail?: string };
        if (payload.detail) detail = `${detail}: ${payload.detail}`;
      } catch {
        // non-JSON error body; keep the bare status
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as HighlightPayload;
  }
}
