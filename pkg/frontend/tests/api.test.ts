import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, GameApi, NetworkError } from "../src/api";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("GameApi", () => {
  it("creates a game with the chosen size and color", async () => {
    const fetchMock = vi.fn(async (_url: string, _init?: RequestInit) =>
      jsonResponse(200, { id: "g1", board: [], to_move: "black" }),
    );
    vi.stubGlobal("fetch", fetchMock);

    const api = new GameApi("http://x");
    const created = await api.createGame(9, "black");
    expect(created.id).toBe("g1");

    const [url, init] = fetchMock.mock.calls[0]!;
    expect(url).toBe("http://x/game");
    expect(init!.method).toBe("POST");
    expect(JSON.parse(init!.body as string)).toEqual({ size: 9, human_color: "black" });
  });

  it("posts moves to the game's move endpoint", async () => {
    const fetchMock = vi.fn(async (_url: string, _init?: RequestInit) =>
      jsonResponse(200, { ok: true }),
    );
    vi.stubGlobal("fetch", fetchMock);

    await new GameApi("").postMove("g7", "c3");
    const [url, init] = fetchMock.mock.calls[0]!;
    expect(url).toBe("/game/g7/move");
    expect(JSON.parse(init!.body as string)).toEqual({ cell: "c3" });
  });

  it("turns error bodies into ApiError with the server's message", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse(409, { error: "illegal move" })));

    const err = await new GameApi("").postMove("g1", "a1").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(409);
    expect(err.message).toBe("illegal move");
  });

  it("survives non-JSON error bodies", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => new Response("boom", { status: 500 })),
    );

    const err = await new GameApi("").getGame("g1").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.message).toBe("http 500");
  });

  it("wraps connection failures as NetworkError", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => {
        throw new TypeError("fetch failed");
      }),
    );

    const err = await new GameApi("http://down").getGame("g1").catch((e) => e);
    expect(err).toBeInstanceOf(NetworkError);
  });
});
