import init, { momentTable, edgeworthCurves, sampledComparison } from "./pkg/entmom_web.js";

const COLORS = ["#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];
const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function status(msg, isError = false) {
  $("status").textContent = msg;
  $("status").className = isError ? "err" : "";
}

function guarded(fn) {
  return () => {
    try {
      status("");
      fn();
    } catch (e) {
      status(String(e), true);
    }
  };
}

// Draws polylines sharing one x axis. `series` items: {x, y, color, dash?}.
function plot(canvas, series, bars) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  ctx.clearRect(0, 0, w, h);
  const xs = series.flatMap((s) => s.x).concat(bars ? bars.edges : []);
  const ys = series.flatMap((s) => s.y).concat(bars ? bars.heights : []).concat([0]);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys) * 1.05];
  const sx = (x) => pad + ((x - x0) / (x1 - x0)) * (w - 2 * pad);
  const sy = (y) => h - pad - ((y - y0) / (y1 - y0)) * (h - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, sy(0));
  ctx.lineTo(w - pad, sy(0));
  ctx.stroke();
  ctx.fillStyle = "#333";
  ctx.font = "11px monospace";
  ctx.fillText(x0.toPrecision(6), pad, h - pad + 14);
  ctx.fillText(x1.toPrecision(6), w - pad - 60, h - pad + 14);
  ctx.fillText(y1.toPrecision(4), 2, pad);

  if (bars) {
    ctx.fillStyle = "#ddd";
    bars.heights.forEach((v, i) => {
      const a = sx(bars.edges[i]);
      const b = sx(bars.edges[i + 1]);
      ctx.fillRect(a, sy(v), b - a, sy(0) - sy(v));
    });
  }
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.setLineDash(s.dash || []);
    ctx.beginPath();
    s.x.forEach((x, i) => (i ? ctx.lineTo(sx(x), sy(s.y[i])) : ctx.moveTo(sx(x), sy(s.y[i]))));
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

function legend(el, labels) {
  el.innerHTML = labels
    .map(([text, color]) => `<span style="color:${color}">&#9644; ${text}</span>`)
    .join("");
}

function runTable() {
  const data = JSON.parse(momentTable($("target").value, num("nmax")));
  const head = "<tr><th>n</th><th>moment</th><th>≈</th><th>cumulant</th><th>≈</th></tr>";
  const body = data.rows
    .map(
      (r) =>
        `<tr><td>${r.n}</td><td>${r.moment}</td><td>${r.moment_f64.toPrecision(10)}</td>` +
        `<td>${r.cumulant}</td><td>${r.cumulant_f64.toPrecision(10)}</td></tr>`
    )
    .join("");
  $("table").innerHTML = `<table>${head}${body}</table>`;
}

function runCurves() {
  const data = JSON.parse(edgeworthCurves($("target").value, num("order"), 400));
  const series = data.curves.map((y, s) => ({ x: data.x, y, color: COLORS[s % COLORS.length] }));
  const labels = series.map((s, i) => [`order ${i}`, s.color]);
  if (data.exact) {
    series.push({ x: data.x, y: data.exact, color: "#000", dash: [4, 3] });
    labels.push(["exact", "#000"]);
  }
  plot($("curves"), series);
  legend($("curves-legend"), labels);
}

function runCompare() {
  const data = JSON.parse(
    sampledComparison($("target").value, num("count"), num("seed"), num("bins"), num("order"))
  );
  const centers = data.edges.slice(0, -1).map((e, i) => (e + data.edges[i + 1]) / 2);
  const series = data.model.map((y, s) => ({ x: centers, y, color: COLORS[s % COLORS.length] }));
  plot($("compare"), series, { edges: data.edges, heights: data.empirical });
  $("l1").textContent =
    `${data.count} samples; L1 by order: ` + data.l1.map((v, s) => `${s}: ${v.toFixed(4)}`).join(", ");
}

await init();
$("run-table").onclick = guarded(runTable);
$("run-curves").onclick = guarded(runCurves);
$("run-compare").onclick = guarded(runCompare);
guarded(runTable)();
guarded(runCurves)();
