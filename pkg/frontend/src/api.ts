/** Thin typed client for the engine's JSON API. */

import type { PlayerColor, ServerState } from "./state";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Connectivity problem as opposed to a server-side rejection. */
export class NetworkError extends Error {
  constructor(cause: unknown) {
    super("network failure");
    this.name = "NetworkError";
    this.cause = cause;
  }
}

export interface CreateResponse {
  id: string;
  board: string[];
  to_move: PlayerColor;
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let resp: Response;
  try {
    resp = await fetch(url, init);
  } catch (err) {
    throw new NetworkError(err);
  }
  let body: unknown = null;
  try {
    body = await resp.json();
  } catch {
    // non-JSON error bodies fall through to the status check
  }
  if (!resp.ok) {
    const message =
      body && typeof body === "object" && "error" in body
        ? String((body as { error: unknown }).error)
        : `http ${resp.status}`;
    throw new ApiError(resp.status, message);
  }
  return body as T;
}

export class GameApi {
  constructor(private readonly base: string) {}

  createGame(size: number, humanColor: PlayerColor): Promise<CreateResponse> {
    return request(`${this.base}/game`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ size, human_color: humanColor }),
    });
  }

  getGame(id: string): Promise<ServerState> {
    return request(`${this.base}/game/${id}`);
  }

  postMove(id: string, cell: string): Promise<ServerState> {
    return request(`${this.base}/game/${id}/move`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ cell }),
    });
  }
}
