/** Pointy-top hexagon geometry for the rhombus board. Pure functions. */

export const HEX_RADIUS = 18;

const W = Math.sqrt(3) * HEX_RADIUS; // width of one hexagon
const ROW_STEP = 1.5 * HEX_RADIUS; // vertical distance between row centers
const MARGIN = HEX_RADIUS * 1.6;

/** Center of cell (row, col); each row shifts right, producing the slant. */
export function cellCenter(row: number, col: number): [number, number] {
  return [MARGIN + (col + row / 2) * W, MARGIN + row * ROW_STEP];
}

/** The six corners as an SVG points string. */
export function hexCorners(cx: number, cy: number, radius = HEX_RADIUS): string {
  const pts: string[] = [];
  for (let k = 0; k < 6; k++) {
    const angle = (Math.PI / 180) * (60 * k + 90);
    const x = cx + radius * Math.cos(angle);
    const y = cy - radius * Math.sin(angle);
    pts.push(`${x.toFixed(2)},${y.toFixed(2)}`);
  }
  return pts.join(" ");
}

export function viewBox(size: number): string {
  // the slant pushes the bottom-right cell farthest out
  const [rx, by] = cellCenter(size - 1, size - 1);
  return `0 0 ${Math.ceil(rx + MARGIN)} ${Math.ceil(by + MARGIN)}`;
}

export interface EdgeMark {
  owner: "white" | "black";
  side: "left" | "right" | "top" | "bottom";
  points: string;
}

/** Four colored strips along the rhombus sides: White owns left/right,
 * Black owns top/bottom. */
export function edgeMarks(size: number): EdgeMark[] {
  const off = HEX_RADIUS * 1.25;
  const line = (cells: Array<[number, number]>, dx: number, dy: number) =>
    cells
      .map(([r, c]) => {
        const [x, y] = cellCenter(r, c);
        return `${(x + dx).toFixed(2)},${(y + dy).toFixed(2)}`;
      })
      .join(" ");
  const rows = [...Array(size).keys()];
  return [
    { owner: "white", side: "left", points: line(rows.map((r) => [r, 0]), -off, 0) },
    { owner: "white", side: "right", points: line(rows.map((r) => [r, size - 1]), off, 0) },
    { owner: "black", side: "top", points: line(rows.map((c) => [0, c]), 0, -off) },
    { owner: "black", side: "bottom", points: line(rows.map((c) => [size - 1, c]), 0, off) },
  ];
}
