import { describe, expect, it } from "vitest";

import {
  applyMoveResponse,
  cellIndex,
  cellName,
  emptyCells,
  fromServer,
  humanCanAct,
  parseCell,
  type ServerState,
} from "../src/state";

function serverState(overrides: Partial<ServerState> = {}): ServerState {
  return {
    id: "g1",
    size: 5,
    cells: Array(25).fill("empty"),
    to_move: "black",
    status: "in_progress",
    winner: null,
    history: [],
    ...overrides,
  };
}

describe("cell naming", () => {
  it("column letter first, row number second", () => {
    expect(cellName(0, 0)).toBe("a1");
    expect(cellName(1, 2)).toBe("c2");
    expect(cellName(12, 12)).toBe("m13");
  });

  it("round-trips through parseCell", () => {
    for (let r = 0; r < 13; r++) {
      for (let c = 0; c < 13; c++) {
        expect(parseCell(cellName(r, c), 13)).toEqual([r, c]);
      }
    }
  });

  it("flat index is row-major", () => {
    expect(cellIndex("a1", 5)).toBe(0);
    expect(cellIndex("e1", 5)).toBe(4);
    expect(cellIndex("a2", 5)).toBe(5);
  });

  it("rejects off-board and malformed names", () => {
    expect(() => parseCell("f1", 5)).toThrow();
    expect(() => parseCell("a6", 5)).toThrow();
    expect(() => parseCell("a0", 5)).toThrow();
    expect(() => parseCell("11", 5)).toThrow();
    expect(() => parseCell("", 5)).toThrow();
  });
});

describe("fromServer", () => {
  it("mirrors every server field", () => {
    const cells = Array(25).fill("empty");
    cells[0] = "black";
    const state = fromServer(
      serverState({ cells, to_move: "white", history: ["a1"] }),
      "black",
    );
    expect(state.id).toBe("g1");
    expect(state.size).toBe(5);
    expect(state.cells[0]).toBe("black");
    expect(state.toMove).toBe("white");
    expect(state.status).toBe("in_progress");
    expect(state.humanColor).toBe("black");
    expect(state.lastMove).toBe("a1");
  });

  it("copies arrays instead of sharing them", () => {
    const server = serverState();
    const state = fromServer(server, "black");
    server.cells[3] = "white";
    expect(state.cells[3]).toBe("empty");
  });
});

describe("applyMoveResponse", () => {
  it("highlights the engine reply when there is one", () => {
    const prev = fromServer(serverState(), "black");
    const next = applyMoveResponse(
      prev,
      serverState({ history: ["a1", "c3"], engine_move: "c3" }),
    );
    expect(next.engineMove).toBe("c3");
    expect(next.lastMove).toBe("c3");
  });

  it("falls back to the human move when the game ended", () => {
    const prev = fromServer(serverState(), "black");
    const next = applyMoveResponse(
      prev,
      serverState({
        history: ["a1", "a2", "a3"],
        engine_move: null,
        status: "finished",
        winner: "black",
      }),
    );
    expect(next.lastMove).toBe("a3");
    expect(next.winner).toBe("black");
  });
});

describe("turn taking", () => {
  it("human acts only on their turn in a live game", () => {
    const live = fromServer(serverState({ to_move: "black" }), "black");
    expect(humanCanAct(live)).toBe(true);
    expect(humanCanAct({ ...live, toMove: "white" })).toBe(false);
    expect(humanCanAct({ ...live, status: "finished" })).toBe(false);
  });

  it("emptyCells reflects occupancy only", () => {
    const cells = Array(25).fill("empty");
    cells[7] = "white";
    cells[8] = "black";
    const state = fromServer(serverState({ cells }), "black");
    const empty = emptyCells(state);
    expect(empty).toHaveLength(23);
    expect(empty).not.toContain(7);
    expect(empty).not.toContain(8);
  });
});
