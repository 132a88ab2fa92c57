/** Client-side game state: a direct image of the last server response. */

export type CellValue = "empty" | "white" | "black";
export type PlayerColor = "white" | "black";
export type GameStatus = "in_progress" | "finished";

export interface ServerState {
  id: string;
  size: number;
  cells: CellValue[];
  to_move: PlayerColor;
  status: GameStatus;
  winner: PlayerColor | null;
  history: string[];
  engine_move?: string | null;
}

export interface ClientGameState {
  id: string;
  size: number;
  cells: CellValue[];
  toMove: PlayerColor;
  status: GameStatus;
  winner: PlayerColor | null;
  history: string[];
  humanColor: PlayerColor;
  /** Engine's reply to the previous submit, if any. */
  engineMove: string | null;
  /** Most recent stone placed by either side, for highlighting. */
  lastMove: string | null;
}

const LETTERS = "abcdefghijklmnopqrstuvwxyz";

/** "c2" -> [row 1, col 2]. Column letter first, row number second. */
export function parseCell(name: string, size: number): [number, number] {
  const m = /^([a-z])([0-9]{1,2})$/.exec(name);
  if (!m) throw new Error(`bad cell name: ${name}`);
  const col = LETTERS.indexOf(m[1]!);
  const row = Number(m[2]) - 1;
  if (col < 0 || col >= size || row < 0 || row >= size) {
    throw new Error(`cell off the board: ${name}`);
  }
  return [row, col];
}

export function cellName(row: number, col: number): string {
  return `${LETTERS[col]}${row + 1}`;
}

export function cellIndex(name: string, size: number): number {
  const [r, c] = parseCell(name, size);
  return r * size + c;
}

export function fromServer(
  server: ServerState,
  humanColor: PlayerColor,
  lastMove: string | null = null,
): ClientGameState {
  return {
    id: server.id,
    size: server.size,
    cells: server.cells.slice(),
    toMove: server.to_move,
    status: server.status,
    winner: server.winner,
    history: server.history.slice(),
    humanColor,
    engineMove: server.engine_move ?? null,
    lastMove: lastMove ?? server.history[server.history.length - 1] ?? null,
  };
}

/** Fold a move response over the previous state. */
export function applyMoveResponse(
  prev: ClientGameState,
  server: ServerState,
): ClientGameState {
  const last = server.engine_move ?? server.history[server.history.length - 1] ?? null;
  return fromServer(server, prev.humanColor, last);
}

/** True when a click on this cell is worth sending to the server. */
export function humanCanAct(state: ClientGameState): boolean {
  return state.status === "in_progress" && state.toMove === state.humanColor;
}

/** Indices of empty cells; the only "rule" the client knows. */
export function emptyCells(state: ClientGameState): number[] {
  const out: number[] = [];
  state.cells.forEach((v, i) => {
    if (v === "empty") out.push(i);
  });
  return out;
}
