/** DOM rendering. Every render redraws from the state object alone, so the
 * page can never show anything the server did not send. */

import { cellCenter, edgeMarks, hexCorners, viewBox, HEX_RADIUS } from "./hexgrid";
import { cellName, humanCanAct, type ClientGameState } from "./state";

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderBoard(
  svg: SVGSVGElement,
  state: ClientGameState,
  onCell: (cell: string) => void,
): void {
  svg.replaceChildren();
  svg.setAttribute("viewBox", viewBox(state.size));

  for (const mark of edgeMarks(state.size)) {
    const poly = document.createElementNS(SVG_NS, "polyline");
    poly.setAttribute("points", mark.points);
    poly.setAttribute("class", `edge edge-${mark.owner}`);
    poly.setAttribute("data-side", mark.side);
    svg.appendChild(poly);
  }

  const clickable = humanCanAct(state);
  for (let r = 0; r < state.size; r++) {
    for (let c = 0; c < state.size; c++) {
      const idx = r * state.size + c;
      const name = cellName(r, c);
      const value = state.cells[idx]!;
      const [cx, cy] = cellCenter(r, c);

      const hex = document.createElementNS(SVG_NS, "polygon");
      hex.setAttribute("points", hexCorners(cx, cy));
      hex.setAttribute("data-cell", name);
      const canClick = clickable && value === "empty";
      hex.setAttribute("class", canClick ? "hex clickable" : "hex");
      if (canClick) {
        hex.addEventListener("click", () => onCell(name));
      }
      svg.appendChild(hex);

      if (value !== "empty") {
        const stone = document.createElementNS(SVG_NS, "circle");
        stone.setAttribute("cx", String(cx));
        stone.setAttribute("cy", String(cy));
        stone.setAttribute("r", String(HEX_RADIUS * 0.62));
        const last = state.lastMove === name ? " last-move" : "";
        stone.setAttribute("class", `stone stone-${value}${last}`);
        stone.setAttribute("data-stone", name);
        svg.appendChild(stone);
      }
    }
  }
}

export function renderStatus(el: HTMLElement, state: ClientGameState | null): void {
  el.replaceChildren();
  if (!state) return;
  const line = document.createElement("div");
  line.className = "status-line";
  if (state.status === "finished") {
    const banner = document.createElement("div");
    banner.id = "winner-banner";
    banner.className = `banner banner-${state.winner}`;
    banner.textContent = `${capitalize(state.winner!)} wins`;
    el.appendChild(banner);
  } else {
    const you = state.toMove === state.humanColor;
    line.textContent = you
      ? `Your move (${state.humanColor})`
      : `Engine thinking (${state.toMove})`;
    el.appendChild(line);
  }
  if (state.engineMove) {
    const em = document.createElement("div");
    em.className = "engine-move";
    em.textContent = `Engine played ${state.engineMove}`;
    el.appendChild(em);
  }
}

let toastTimer: ReturnType<typeof setTimeout> | undefined;

export function showToast(el: HTMLElement, message: string, sticky = false): void {
  el.textContent = message;
  el.classList.add("visible");
  if (toastTimer) clearTimeout(toastTimer);
  if (!sticky) {
    toastTimer = setTimeout(() => el.classList.remove("visible"), 2500);
  }
}

export function clearToast(el: HTMLElement): void {
  if (toastTimer) clearTimeout(toastTimer);
  el.textContent = "";
  el.classList.remove("visible");
}

export interface NewGameChoice {
  size: number;
  color: "white" | "black";
}

export function renderDialog(
  form: HTMLFormElement,
  onStart: (choice: NewGameChoice) => void,
): void {
  form.replaceChildren();

  const sizeLabel = document.createElement("label");
  sizeLabel.textContent = "Board size ";
  const size = document.createElement("select");
  size.name = "size";
  for (let n = 5; n <= 13; n++) {
    const opt = document.createElement("option");
    opt.value = String(n);
    opt.textContent = `${n} x ${n}`;
    size.appendChild(opt);
  }
  size.value = "13";
  sizeLabel.appendChild(size);

  const colorLabel = document.createElement("label");
  colorLabel.textContent = " You play ";
  const color = document.createElement("select");
  color.name = "color";
  for (const value of ["black", "white"] as const) {
    const opt = document.createElement("option");
    opt.value = value;
    opt.textContent = value === "black" ? "Black" : "White";
    color.appendChild(opt);
  }
  color.value = "black";
  colorLabel.appendChild(color);

  const start = document.createElement("button");
  start.type = "submit";
  start.textContent = "New game";

  form.append(sizeLabel, colorLabel, start);
  form.onsubmit = (ev) => {
    ev.preventDefault();
    onStart({
      size: Number(size.value),
      color: color.value as "white" | "black",
    });
  };
}

function capitalize(s: string): string {
  return s.charAt(0).toUpperCase() + s.slice(1);
}
