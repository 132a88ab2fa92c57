/** Page wiring: one controller owns the state and serializes requests. */

import { ApiError, GameApi, NetworkError } from "./api";
import {
  applyMoveResponse,
  fromServer,
  humanCanAct,
  type ClientGameState,
  type PlayerColor,
} from "./state";
import { clearToast, renderBoard, renderDialog, renderStatus, showToast } from "./view";

export interface Elements {
  board: SVGSVGElement;
  status: HTMLElement;
  toast: HTMLElement;
  form: HTMLFormElement;
}

export class GameController {
  state: ClientGameState | null = null;
  private busy = false;
  private lastAttempt: string | null = null;

  constructor(
    private readonly api: GameApi,
    private readonly els: Elements,
  ) {}

  async newGame(size: number, color: PlayerColor): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    try {
      const created = await this.api.createGame(size, color);
      const full = await this.api.getGame(created.id);
      this.state = fromServer(full, color);
      clearToast(this.els.toast);
    } catch (err) {
      this.report(err);
    } finally {
      this.busy = false;
      this.render();
    }
  }

  /** Click entry point. Ignores input while a request is in flight or when
   * it is not the human's turn; everything else goes to the server. */
  async submitMove(cell: string): Promise<void> {
    const state = this.state;
    if (this.busy || !state || !humanCanAct(state)) return;
    this.busy = true;
    this.lastAttempt = cell;
    try {
      const resp = await this.api.postMove(state.id, cell);
      this.state = applyMoveResponse(state, resp);
      clearToast(this.els.toast);
    } catch (err) {
      this.report(err);
    } finally {
      this.busy = false;
      this.render();
    }
  }

  async retry(): Promise<void> {
    if (this.lastAttempt && this.state) {
      await this.submitMove(this.lastAttempt);
    }
  }

  private report(err: unknown): void {
    if (err instanceof NetworkError) {
      showToast(this.els.toast, "Connection lost. Click your move to retry.", true);
    } else if (err instanceof ApiError) {
      showToast(this.els.toast, err.message);
    } else {
      throw err;
    }
  }

  render(): void {
    if (this.state) {
      renderBoard(this.els.board, this.state, (cell) => void this.submitMove(cell));
    }
    renderStatus(this.els.status, this.state);
  }
}

export function mount(root: Document, baseUrl: string): GameController {
  const els: Elements = {
    board: root.querySelector("#board") as SVGSVGElement,
    status: root.querySelector("#status") as HTMLElement,
    toast: root.querySelector("#toast") as HTMLElement,
    form: root.querySelector("#new-game") as HTMLFormElement,
  };
  const controller = new GameController(new GameApi(baseUrl), els);
  renderDialog(els.form, (choice) => void controller.newGame(choice.size, choice.color));
  return controller;
}

if (typeof document !== "undefined" && document.querySelector("#board")) {
  mount(document, "");
}
