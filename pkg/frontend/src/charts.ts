// Hand-rolled rolling-window line charts and the commanded/actual overlay.

import type { PathBuffer, SeriesBuffer } from "./ringbuffer.js";

export interface ChartStyle {
  label: string;
  color: string;
  unitScale: number; // multiply raw values for display (e.g. m -> mm)
  unit: string;
}

export function drawSeries(ctx: CanvasRenderingContext2D, buf: SeriesBuffer,
                           style: ChartStyle, width: number,
                           height: number): void {
  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = "#345";
  ctx.strokeRect(0.5, 0.5, width - 1, height - 1);
  const { t, v } = buf.data();
  ctx.fillStyle = "#9ab";
  ctx.font = "11px monospace";
  if (t.length < 2) {
    ctx.fillText(`${style.label}: waiting for data`, 8, 14);
    return;
  }
  const t1 = t[t.length - 1];
  const t0 = t1 - buf.windowSeconds;
  let vmax = 0;
  for (const x of v) vmax = Math.max(vmax, Math.abs(x));
  const scaleY = vmax > 0 ? (height - 24) / (vmax * 1.1) : 1;
  ctx.strokeStyle = style.color;
  ctx.lineWidth = 1.2;
  ctx.beginPath();
  for (let i = 0; i < t.length; i++) {
    const x = ((t[i] - t0) / buf.windowSeconds) * width;
    const y = height - 6 - v[i] * scaleY;
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  }
  ctx.stroke();
  const last = v[v.length - 1] * style.unitScale;
  ctx.fillText(
    `${style.label}: ${last.toPrecision(3)} ${style.unit}  ` +
    `(peak ${(vmax * style.unitScale).toPrecision(3)})`, 8, 14);
}

/** Commanded-vs-actual tip paths projected on the x/y plane. */
export function drawOverlay(ctx: CanvasRenderingContext2D, buf: PathBuffer,
                            width: number, height: number): void {
  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = "#345";
  ctx.strokeRect(0.5, 0.5, width - 1, height - 1);
  ctx.fillStyle = "#9ab";
  ctx.font = "11px monospace";
  if (buf.length < 2) {
    ctx.fillText("path overlay: waiting for data", 8, 14);
    return;
  }
  let minx = Infinity, maxx = -Infinity, miny = Infinity, maxy = -Infinity;
  for (const p of buf.commanded) {
    minx = Math.min(minx, p[0]); maxx = Math.max(maxx, p[0]);
    miny = Math.min(miny, p[1]); maxy = Math.max(maxy, p[1]);
  }
  const span = Math.max(maxx - minx, maxy - miny, 0.02);
  const scale = (Math.min(width, height) - 30) / span;
  const cx = (minx + maxx) / 2, cy = (miny + maxy) / 2;
  const toPx = (p: [number, number, number]): [number, number] => [
    width / 2 + (p[0] - cx) * scale,
    height / 2 - (p[1] - cy) * scale,
  ];
  for (const [points, color, w] of [
    [buf.commanded, "#888", 1] as const,
    [buf.actual, "#4f8", 1.6] as const,
  ]) {
    ctx.strokeStyle = color;
    ctx.lineWidth = w;
    ctx.beginPath();
    points.forEach((p, i) => {
      const [x, y] = toPx(p);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();
  }
  ctx.fillText("commanded (grey) vs actual (green), top view", 8, 14);
}
