// Built by wasm-bindgen --target web into ./pkg (see README).
import init, { steklov_modes, tubular_study, chromatic_table } from "./pkg/steklov_demo.js";

const $ = (id) => document.getElementById(id);
let modes = null;

function fit(canvas, vertices) {
  let [x0, y0, x1, y1] = [Infinity, Infinity, -Infinity, -Infinity];
  for (const [x, y] of vertices) {
    x0 = Math.min(x0, x); x1 = Math.max(x1, x);
    y0 = Math.min(y0, y); y1 = Math.max(y1, y);
  }
  const pad = 10;
  const s = Math.min((canvas.width - 2 * pad) / (x1 - x0), (canvas.height - 2 * pad) / (y1 - y0));
  return ([x, y]) => [pad + (x - x0) * s, canvas.height - pad - (y - y0) * s];
}

// blue for negative, red for positive
function color(t) {
  const a = Math.min(1, Math.abs(t));
  const c = Math.round(255 * (1 - a));
  return t >= 0 ? `rgb(255,${c},${c})` : `rgb(${c},${c},255)`;
}

function draw(canvas, mesh, values) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const map = fit(canvas, mesh.vertices);
  const m = Math.max(...values.map(Math.abs)) || 1;
  for (const tri of mesh.triangles) {
    const pts = tri.map((i) => map(mesh.vertices[i]));
    const v = (values[tri[0]] + values[tri[1]] + values[tri[2]]) / (3 * m);
    ctx.beginPath();
    ctx.moveTo(...pts[0]); ctx.lineTo(...pts[1]); ctx.lineTo(...pts[2]);
    ctx.closePath();
    ctx.fillStyle = color(v);
    ctx.fill();
  }
  // nodal set: zero crossings on triangle edges
  ctx.strokeStyle = "#000";
  ctx.lineWidth = 1.5;
  for (const tri of mesh.triangles) {
    const cut = [];
    for (let e = 0; e < 3; e++) {
      const a = tri[e], b = tri[(e + 1) % 3];
      const fa = values[a], fb = values[b];
      if ((fa < 0) !== (fb < 0)) {
        const t = fa / (fa - fb);
        const [pa, pb] = [mesh.vertices[a], mesh.vertices[b]];
        cut.push(map([pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]));
      }
    }
    if (cut.length === 2) {
      ctx.beginPath(); ctx.moveTo(...cut[0]); ctx.lineTo(...cut[1]); ctx.stroke();
    }
  }
}

function table(el, head, rows) {
  el.innerHTML = "<tr>" + head.map((h) => `<th>${h}</th>`).join("") + "</tr>" +
    rows.map((r) => "<tr>" + r.map((c) => `<td>${c}</td>`).join("") + "</tr>").join("");
}

function showMode() {
  if (!modes) return;
  const i = Math.min(+$("mode").value, modes.modes.length - 1);
  const m = modes.modes[i];
  $("mode-label").textContent = `σ${i} = ${m.sigma.toFixed(5)}, ${m.domains} nodal domains`;
  draw($("modes-canvas"), modes.mesh, m.values);
}

function solve() {
  $("modes-err").textContent = "";
  try {
    const k = +$("k").value;
    modes = JSON.parse(steklov_modes($("shape").value, +$("inner").value, +$("h").value, k));
    $("mode").max = k;
    table($("modes-table"), ["k", "σ", "domains", "Courant", "touches ∂"],
      modes.modes.map((m) => [m.k, m.sigma.toFixed(6), m.domains, m.courant ? "✓" : "✗", m.boundary_contact ? "✓" : "✗"]));
    showMode();
  } catch (e) {
    $("modes-err").textContent = e.message ?? e;
  }
}

function tube() {
  $("tube-err").textContent = "";
  $("tube-status").textContent = "meshing…";
  // let the status paint before the solve blocks the page
  setTimeout(() => {
    try {
      const eps = new Float64Array($("eps").value.split(",").map(Number));
      const r = JSON.parse(tubular_study(eps, +$("th").value));
      table($("tube-table"), ["ε", "σ₁", "σ₂", "|σ₁−3|", "|σ₂−3|"],
        r.rows.map((x) => [x.epsilon, x.sigma[1].toFixed(5), x.sigma[2].toFixed(5), x.error[1].toExponential(3), x.error[2].toExponential(3)]));
      draw($("tube-canvas"), r.last.mesh, r.last.values);
      $("tube-status").textContent = "graph eigenvalues " + r.lambda.map((l) => l.toFixed(3)).join(", ");
    } catch (e) {
      $("tube-err").textContent = e.message ?? e;
      $("tube-status").textContent = "";
    }
  }, 20);
}

function chrom() {
  $("chrom-err").textContent = "";
  try {
    const rows = JSON.parse(chromatic_table(+$("maxp").value));
    const p = rows[0].cells.length;
    const head = ["surface", "χ", "Chr"].concat([...Array(p).keys()].map((i) => `p=${i + 1}`));
    table($("chrom-table"), head, rows.map((r) => [r.surface, r.chi, r.chr].concat(
      r.cells.map((c) => c.exact ?? `<span class="open" title="${c.lower} or ${c.upper}">?</span>`))));
  } catch (e) {
    $("chrom-err").textContent = e.message ?? e;
  }
}

await init();
$("solve").onclick = solve;
$("mode").oninput = showMode;
$("tube").onclick = tube;
$("chrom").onclick = chrom;
solve();
chrom();
