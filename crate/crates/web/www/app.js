import init, { magnitudeCurve, polylogPair, twoAtomScan } from "./pkg/momentkit_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => parseFloat($(id).value);
const POINTS = 200;

function plot(canvas, series, colors) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 48;
  ctx.clearRect(0, 0, w, h);
  const xs = series[0].map((p) => Math.log10(p[0]));
  const ys = series.flatMap((s) => s.map((p) => Math.log10(p[1]))).filter(Number.isFinite);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (y1 - y0 < 1e-9) { y0 -= 0.5; y1 += 0.5; }
  const sx = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const sy = (y) => h - pad + ((y0 - y) / (y1 - y0)) * (h - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#333";
  ctx.font = "12px sans-serif";
  for (const [v, x] of [[x0, pad], [x1, w - pad]]) ctx.fillText(`y=${(10 ** v).toPrecision(3)}`, x - 20, h - pad + 16);
  for (const [v, y] of [[y0, h - pad], [y1, pad]]) ctx.fillText((10 ** v).toPrecision(4), 2, y + 4);

  series.forEach((s, i) => {
    ctx.strokeStyle = colors[i];
    ctx.lineWidth = 2;
    ctx.beginPath();
    s.forEach(([x, y], j) => {
      const px = sx(Math.log10(x));
      const py = sy(Math.log10(y));
      j === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
    });
    ctx.stroke();
  });
}

function triples(flat) {
  const out = [];
  for (let i = 0; i < flat.length; i += 3) out.push([flat[i], flat[i + 1], flat[i + 2]]);
  return out;
}

function guard(outId, fn) {
  try {
    $(outId).classList.remove("err");
    fn();
  } catch (e) {
    $(outId).classList.add("err");
    $(outId).textContent = String(e.message ?? e);
  }
}

function drawCurve() {
  guard("c-out", () => {
    const rows = triples(magnitudeCurve($("c-family").value, num("c-param"), num("c-gamma"), num("c-ylo"), num("c-yhi"), POINTS));
    plot($("c-plot"), [rows.map((r) => [r[0], r[1]])], ["#1f5fbf"]);
    const rises = rows.slice(1).filter((r, i) => r[1] > rows[i][1]).length;
    $("c-out").textContent =
      `|f| from ${rows[0][1].toPrecision(6)} to ${rows[rows.length - 1][1].toPrecision(6)}; increasing steps: ${rises}`;
  });
}

function drawPolylog() {
  guard("p-out", () => {
    const rows = triples(polylogPair(num("p-alpha"), num("p-beta"), 0.05, 20, POINTS));
    plot($("p-plot"), [rows.map((r) => [r[0], r[1]]), rows.map((r) => [r[0], r[2]])], ["#1f5fbf", "#c0392b"]);
    const crossings = rows.filter((r) => r[1] > r[2] + 1e-12).length;
    $("p-out").textContent = `blue |Li_α(iy)|, red |Li_β(iy)|; points with blue above red: ${crossings}`;
  });
}

function runScan() {
  guard("s-out", () => {
    const [min, violations, evaluations, rho, t1, t2] = twoAtomScan(num("s-gamma"), num("s-y1"), num("s-y2"), Math.round(num("s-n")));
    $("s-out").textContent =
      `min Re ratio − 1 = ${min.toExponential(4)} at rho=${rho.toFixed(3)}, t1=${t1.toFixed(3)}, t2=${t2.toFixed(3)}\n` +
      `${violations} of ${evaluations} grid points below 1`;
  });
}

await init();
for (const id of ["c-family", "c-param", "c-gamma", "c-ylo", "c-yhi"]) $(id).addEventListener("input", drawCurve);
for (const id of ["p-alpha", "p-beta"]) $(id).addEventListener("input", drawPolylog);
$("s-run").addEventListener("click", runScan);
drawCurve();
drawPolylog();
runScan();
