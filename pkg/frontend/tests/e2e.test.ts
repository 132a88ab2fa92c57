/** Whole-stack check: a scripted browser session plays a real engine over
 * HTTP. Boots the python server with tiny fresh weights; the client must
 * mirror the server after every move. */

import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { Window } from "happy-dom";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, GameApi } from "../src/api";
import { GameController, type Elements } from "../src/main";
import { cellIndex, cellName, emptyCells } from "../src/state";
import { clearToast } from "../src/view";

const pkgRoot = fileURLToPath(new URL("../..", import.meta.url));

let proc: ChildProcess | undefined;
let workDir: string;
let base: string;
let api: GameApi;
let win: Window;
let els: Elements;
let serverLog = "";

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = createServer();
    srv.on("error", reject);
    srv.listen(0, "127.0.0.1", () => {
      const port = (srv.address() as { port: number }).port;
      srv.close(() => resolve(port));
    });
  });
}

async function waitReady(url: string): Promise<void> {
  const deadline = Date.now() + 60_000;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${url}/game/probe`);
      if (resp.status === 404) return;
    } catch {
      // still booting
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error(`engine server never came up\n${serverLog}`);
}

async function until(cond: () => boolean, what: string): Promise<void> {
  const deadline = Date.now() + 15_000;
  while (!cond()) {
    if (Date.now() > deadline) throw new Error(`timed out waiting for ${what}`);
    await new Promise((r) => setTimeout(r, 25));
  }
}

/** The acceptance bar: client state and rendered stones match a fresh GET. */
async function expectMirrorsServer(controller: GameController): Promise<void> {
  const state = controller.state!;
  const fresh = await api.getGame(state.id);
  expect(state.cells).toEqual(fresh.cells);
  expect(state.toMove).toBe(fresh.to_move);
  expect(state.status).toBe(fresh.status);
  expect(state.winner).toBe(fresh.winner);
  expect(state.history).toEqual(fresh.history);

  const stones = Array.from(els.board.querySelectorAll("circle.stone"));
  const drawn = stones.map((s) => s.getAttribute("data-stone")).sort();
  const expected = fresh.cells
    .flatMap((v, i) =>
      v === "empty" ? [] : [cellName(Math.floor(i / fresh.size), i % fresh.size)],
    )
    .sort();
  expect(drawn).toEqual(expected);
  for (const stone of stones) {
    const idx = cellIndex(stone.getAttribute("data-stone")!, fresh.size);
    expect(stone.getAttribute("class")).toContain(`stone-${fresh.cells[idx]}`);
  }
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "hexq-e2e-"));
  const weights = join(workDir, "w5.hxw");
  execFileSync(
    "python3",
    ["-m", "hexq.cli", "init-net", "--size", "5", "--out", weights,
     "--layers", "2", "--filters-d5", "4", "--filters-d3", "4", "--init-seed", "3"],
    { cwd: pkgRoot },
  );

  const port = await freePort();
  base = `http://127.0.0.1:${port}`;
  proc = spawn(
    "python3",
    ["-m", "hexq.cli", "serve", "--weights", weights, "--port", String(port)],
    { cwd: pkgRoot, stdio: ["ignore", "pipe", "pipe"] },
  );
  proc.stdout!.on("data", (d) => (serverLog += d));
  proc.stderr!.on("data", (d) => (serverLog += d));
  await waitReady(base);

  api = new GameApi(base);
  win = new Window();
  globalThis.document = win.document as unknown as Document;
  document.body.innerHTML = `
    <form id="new-game"></form>
    <div id="status"></div>
    <svg id="board"></svg>
    <div id="toast"></div>`;
  els = {
    board: document.querySelector("#board") as SVGSVGElement,
    status: document.querySelector("#status") as HTMLElement,
    toast: document.querySelector("#toast") as HTMLElement,
    form: document.querySelector("#new-game") as HTMLFormElement,
  };
});

afterAll(async () => {
  proc?.kill("SIGTERM");
  if (workDir) rmSync(workDir, { recursive: true, force: true });
  try {
    await win?.happyDOM.close();
  } catch {
    // already torn down
  }
});

describe("live game against the engine", () => {
  it("plays a full 5x5 game to the winner banner", async () => {
    const controller = new GameController(api, els);
    await controller.newGame(5, "black");
    expect(controller.state).not.toBeNull();
    expect(controller.state!.toMove).toBe("black");
    await expectMirrorsServer(controller);

    // first move through the real click path
    const a1 = els.board.querySelector('polygon[data-cell="a1"]')!;
    expect(a1.getAttribute("class")).toContain("clickable");
    a1.dispatchEvent(new win.MouseEvent("click") as unknown as Event);
    await until(() => controller.state!.history.length >= 1, "first move to land");
    await expectMirrorsServer(controller);

    let plies = 0;
    while (controller.state!.status === "in_progress" && plies++ < 30) {
      const target = emptyCells(controller.state!)[0]!;
      await controller.submitMove(cellName(Math.floor(target / 5), target % 5));
      await expectMirrorsServer(controller);
    }

    const final = controller.state!;
    expect(final.status).toBe("finished");
    expect(final.winner === "white" || final.winner === "black").toBe(true);
    expect(final.history.length).toBeLessThanOrEqual(25);

    const banner = document.querySelector("#winner-banner");
    expect(banner).not.toBeNull();
    expect(banner!.textContent).toMatch(/^(White|Black) wins$/);
    expect(els.board.querySelectorAll(".clickable")).toHaveLength(0);
  });

  it("rejects a click on an occupied cell and keeps state unchanged", async () => {
    const controller = new GameController(api, els);
    await controller.newGame(5, "black");
    await controller.submitMove("c3");
    expect(controller.state!.cells[cellIndex("c3", 5)]).toBe("black");

    const before = JSON.stringify(controller.state);
    await controller.submitMove("c3");
    expect(JSON.stringify(controller.state)).toBe(before);
    expect(els.toast.textContent).toBe("illegal move");
    expect(els.toast.classList.contains("visible")).toBe(true);
    await expectMirrorsServer(controller);

    // occupied cells carry no click handler either
    const hex = els.board.querySelector('polygon[data-cell="c3"]')!;
    expect(hex.getAttribute("class")).not.toContain("clickable");
    hex.dispatchEvent(new win.MouseEvent("click") as unknown as Event);
    await new Promise((r) => setTimeout(r, 100));
    expect(JSON.stringify(controller.state)).toBe(before);
    clearToast(els.toast);
  });

  it("refuses games the loaded weights cannot play", async () => {
    await expect(api.createGame(9, "black")).rejects.toMatchObject({
      status: 400,
    });
    await expect(api.createGame(9, "black")).rejects.toBeInstanceOf(ApiError);
  });
});
