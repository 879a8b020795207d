import init, { chargeCurves, zetaCurves, elementSummary } from "./pkg/pseudoatom_web.js";

const ELEMENTS = ["H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg"];
const COLORS = ["#444", "#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
const $ = (id) => document.getElementById(id);

function fillSelect(sel, value) {
  for (const s of ELEMENTS) sel.add(new Option(s, s, false, s === value));
}

// Log-x line plot. `series` is [{name, values}], hidden entries are skipped.
function plot(canvas, legend, r, series, yLabel) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, pad = 48;
  ctx.clearRect(0, 0, W, H);
  const finite = series.flatMap((s) => s.values).filter(Number.isFinite);
  let lo = Math.min(...finite), hi = Math.max(...finite);
  if (hi - lo < 1e-12) { lo -= 1; hi += 1; }
  const lx0 = Math.log10(r[0]), lx1 = Math.log10(r[r.length - 1]);
  const X = (x) => pad + (Math.log10(x) - lx0) / (lx1 - lx0) * (W - 2 * pad);
  const Y = (y) => H - pad - (y - lo) / (hi - lo) * (H - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, W - 2 * pad, H - 2 * pad);
  ctx.fillStyle = "#333";
  ctx.font = "12px system-ui";
  for (let d = Math.ceil(lx0); d <= Math.floor(lx1); d++) {
    ctx.fillText(`1e${d}`, X(10 ** d) - 12, H - pad + 16);
  }
  ctx.fillText(hi.toPrecision(4), 4, pad + 4);
  ctx.fillText(lo.toPrecision(4), 4, H - pad);
  ctx.fillText(yLabel, pad, pad - 10);
  ctx.fillText("r (bohr)", W - pad - 50, H - 8);

  legend.innerHTML = "";
  series.forEach((s, i) => {
    const color = COLORS[i % COLORS.length];
    ctx.strokeStyle = color;
    ctx.beginPath();
    let pen = false;
    s.values.forEach((v, j) => {
      if (!Number.isFinite(v)) { pen = false; return; }
      const y = Math.min(Math.max(Y(v), 0), H);
      pen ? ctx.lineTo(X(r[j]), y) : ctx.moveTo(X(r[j]), y);
      pen = true;
    });
    ctx.stroke();
    const tag = document.createElement("span");
    tag.style.color = color;
    tag.textContent = s.name;
    legend.append(tag);
  });
}

function guard(errId, fn) {
  $(errId).textContent = "";
  try { fn(); } catch (e) { $(errId).textContent = String(e); }
}

function drawCharge() {
  guard("charge-err", () => {
    const c = JSON.parse(chargeCurves($("charge-el").value, 1e-3, Number($("charge-rmax").value), 400));
    plot($("charge-plot"), $("charge-legend"), c.r, c.series, "charge -rV(r)");
  });
}

function drawZeta() {
  guard("zeta-err", () => {
    const z = Number($("zeta-z").value);
    const c = JSON.parse(zetaCurves(z, 1e-3 / z, 20 / z, 200, Number($("zeta-k").value)));
    // The flag series becomes a threshold note in the legend, not a line.
    const flags = c.series.pop();
    plot($("zeta-plot"), $("zeta-legend"), c.r, c.series, "zeta(r)");
    const last = flags.values.lastIndexOf(1);
    if (last >= 0) {
      const tag = document.createElement("span");
      tag.textContent = `closed form unreliable below r = ${c.r[last].toPrecision(3)} (Zr < 0.05)`;
      $("zeta-legend").append(tag);
    }
  });
}

function solveLevels() {
  $("lv-status").textContent = "solving...";
  // Let the status paint before the solve blocks the thread.
  setTimeout(() => guard("lv-err", () => {
    const t0 = performance.now();
    const s = JSON.parse(elementSummary($("lv-el").value, Number($("lv-m").value), Number($("lv-n").value)));
    $("lv-status").textContent = `${(performance.now() - t0).toFixed(0)} ms`;
    const [v1, v2] = s.models;
    const rows = v1.levels.map((lv) => {
      const other = v2.levels.find((w) => w.label === lv.label);
      return `<tr><td>${lv.label}</td><td>${lv.energy_ev.toFixed(3)}</td><td>${other ? other.energy_ev.toFixed(3) : ""}</td></tr>`;
    });
    const ref = s.reference_ip_ev == null ? "n/a" : s.reference_ip_ev.toFixed(2);
    $("lv-out").innerHTML =
      `<p>${s.symbol}: Z = ${s.z}, m/n = ${s.m}/${s.n_electrons}. ` +
      `IP v1 ${v1.ip_ev.toFixed(2)} eV, v2 ${v2.ip_ev.toFixed(2)} eV, reference ${ref} eV.</p>` +
      `<table><tr><th>state</th><th>v1 (eV)</th><th>v2 (eV)</th></tr>${rows.join("")}</table>`;
  }), 10);
}

await init();
fillSelect($("charge-el"), "Na");
fillSelect($("lv-el"), "Li");
$("charge-go").onclick = drawCharge;
$("zeta-go").onclick = drawZeta;
$("lv-go").onclick = solveLevels;
drawCharge();
drawZeta();
