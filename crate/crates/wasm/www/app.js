import init, { opinions, placement, verify_suite } from "./pkg/leaderdiv_wasm.js";

const TREE11 = `n 11
1 2
2 3
3 4
4 5
5 6
2 7
7 8
7 9
7 10
10 11`;

const $ = (id) => document.getElementById(id);

function inputs() {
  return {
    source: $("source").value,
    l0: Number($("l0").value),
    l1: Number($("l1").value),
    bins: $("bins").value.trim(),
    snap: Number($("snap").value),
  };
}

function guarded(fn) {
  return () => {
    $("error").textContent = "";
    try {
      fn();
    } catch (e) {
      $("error").textContent = e.message ?? String(e);
    }
  };
}

// Paths on a line, cycles on a circle, everything else in BFS layers from l0.
function layout(n, edges, l0, width, height) {
  const adj = Array.from({ length: n + 1 }, () => []);
  for (const [u, v] of edges) {
    adj[u].push(v);
    adj[v].push(u);
  }
  const pos = new Array(n + 1);
  const pad = 30;
  const isCycle = edges.length === n && adj.slice(1).every((a) => a.length === 2);
  if (isCycle) {
    const r = Math.min(width, height) / 2 - pad;
    for (let v = 1; v <= n; v++) {
      const t = (2 * Math.PI * (v - 1)) / n - Math.PI / 2;
      pos[v] = [width / 2 + r * Math.cos(t), height / 2 + r * Math.sin(t)];
    }
    return pos;
  }
  const depth = new Array(n + 1).fill(-1);
  const layers = [];
  depth[l0] = 0;
  const queue = [l0];
  while (queue.length) {
    const u = queue.shift();
    (layers[depth[u]] ??= []).push(u);
    for (const w of adj[u]) {
      if (depth[w] < 0) {
        depth[w] = depth[u] + 1;
        queue.push(w);
      }
    }
  }
  const dx = (width - 2 * pad) / Math.max(1, layers.length - 1);
  layers.forEach((layer, d) => {
    const dy = (height - 2 * pad) / (layer.length + 1);
    layer.forEach((v, i) => {
      pos[v] = [pad + d * dx, pad + (i + 1) * dy];
    });
  });
  return pos;
}

function colour(x) {
  const r = Math.round(40 + 200 * x);
  const b = Math.round(240 - 200 * x);
  return `rgb(${r},90,${b})`;
}

function drawGraph(doc) {
  const c = $("graph");
  const ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const pos = layout(doc.n, doc.edges, doc.l0, c.width, c.height);
  const value = new Array(doc.n + 1).fill(null);
  value[doc.l0] = 0;
  value[doc.l1] = 1;
  for (const row of doc.opinions) value[row.node] = row.opinion;
  ctx.strokeStyle = "#999";
  for (const [u, v] of doc.edges) {
    ctx.beginPath();
    ctx.moveTo(...pos[u]);
    ctx.lineTo(...pos[v]);
    ctx.stroke();
  }
  ctx.font = "11px sans-serif";
  ctx.textAlign = "center";
  for (let v = 1; v <= doc.n; v++) {
    const [x, y] = pos[v];
    const leader = v === doc.l0 || v === doc.l1;
    ctx.beginPath();
    ctx.arc(x, y, leader ? 12 : 10, 0, 2 * Math.PI);
    ctx.fillStyle = colour(value[v]);
    ctx.fill();
    ctx.lineWidth = leader ? 3 : 1;
    ctx.strokeStyle = "#222";
    ctx.stroke();
    ctx.fillStyle = "#fff";
    ctx.fillText(String(v), x, y + 4);
    ctx.fillStyle = "#444";
    if (!leader) ctx.fillText(value[v].toFixed(3), x, y + 24);
  }
  ctx.lineWidth = 1;
}

function drawHistogram(h) {
  const c = $("hist");
  const ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const top = Math.max(...h.counts, 1);
  const w = (c.width - 20) / h.R;
  ctx.font = "10px sans-serif";
  ctx.textAlign = "center";
  h.counts.forEach((count, i) => {
    const bh = ((c.height - 30) * count) / top;
    ctx.fillStyle = colour((i + 0.5) / h.R);
    ctx.fillRect(10 + i * w + 1, c.height - 18 - bh, w - 2, bh);
    ctx.fillStyle = "#333";
    if (count) ctx.fillText(String(count), 10 + (i + 0.5) * w, c.height - 22 - bh);
  });
  ctx.fillText("0", 10, c.height - 4);
  ctx.fillText("1", c.width - 10, c.height - 4);
}

function solve() {
  const p = inputs();
  const doc = JSON.parse(opinions(p.source, p.l0, p.l1, p.bins, p.snap));
  drawGraph(doc);
  drawHistogram(doc.histogram);
  const fmt = (v) => (v === null ? "n/a" : v.toFixed(4));
  $("summary").textContent =
    `R = ${doc.histogram.R}, ${doc.histogram.n_f} followers, ` +
    `Simpson ${fmt(doc.simpson)}, Shannon ${fmt(doc.shannon)}`;
}

function place() {
  const p = inputs();
  const doc = JSON.parse(placement(p.source, p.l0, p.bins, p.snap));
  const r = doc.result;
  const body = $("scores").querySelector("tbody");
  body.replaceChildren();
  for (const row of r.scores) {
    const tr = document.createElement("tr");
    if (r.argmax_simpson.includes(row.l1)) tr.classList.add("best-s");
    if (r.argmax_shannon.includes(row.l1)) tr.classList.add("best-h");
    for (const v of [row.l1, row.simpson.toFixed(3), row.shannon.toFixed(3)]) {
      const td = document.createElement("td");
      td.textContent = v;
      tr.appendChild(td);
    }
    tr.addEventListener("click", guarded(() => {
      $("l1").value = row.l1;
      solve();
    }));
    body.appendChild(tr);
  }
  const lines = [
    `best Simpson {${r.argmax_simpson.join(", ")}}, best Shannon {${r.argmax_shannon.join(", ")}}`,
  ];
  if (doc.bounds) {
    lines.push(`upper bounds: Simpson ${doc.bounds.simpson.toFixed(3)}, Shannon ${doc.bounds.shannon.toFixed(3)}`);
  }
  if (doc.predictor) {
    const ok = doc.predictor.agrees_simpson && doc.predictor.agrees_shannon;
    lines.push(`rule (${doc.predictor.rule}) predicts {${doc.predictor.predicted.join(", ")}}: ${ok ? "agrees" : "disagrees"}`);
  }
  $("verdict").textContent = lines.join(" · ");
}

function verify() {
  const doc = JSON.parse(verify_suite($("suite").value, Number($("bound").value), Number($("trees").value)));
  const lines = doc.checks.map((c) => `${c.name.padEnd(40)} ${String(c.instances).padStart(6)} checked, ${c.failures} failed`);
  for (const cx of doc.counterexamples.slice(0, 20)) lines.push(`[${cx.check}] ${cx.instance}: ${cx.detail}`);
  const audited = doc.audit.filter((a) => !(a.optimal_simpson && a.optimal_shannon));
  if (doc.audit.length) lines.push(`audit: ${doc.audit.length - audited.length}/${doc.audit.length} stated leaders optimal`);
  for (const a of audited.slice(0, 12)) lines.push(`  ${a.instance}: stated {${a.stated}} vs best {${a.argmax_simpson}}`);
  lines.push(doc.counterexamples.length ? `FAIL (${doc.counterexamples.length})` : "PASS");
  $("verify-out").textContent = lines.join("\n");
}

function loadPreset() {
  const v = $("preset").value;
  if (v === "custom") return;
  $("source").value = v === "tree11" ? TREE11 : v;
  const n = v === "tree11" ? 11 : null;
  $("l0").value = 1;
  if (n) $("l1").value = n;
  else if (v.startsWith("path")) $("l1").value = 10;
  else if (v.startsWith("cycle")) $("l1").value = 2;
  else $("l1").value = 6;
}

await init();
$("preset").addEventListener("change", guarded(() => {
  loadPreset();
  solve();
  place();
}));
$("source").addEventListener("input", () => ($("preset").value = "custom"));
$("solve").addEventListener("click", guarded(solve));
$("place").addEventListener("click", guarded(place));
$("verify").addEventListener("click", guarded(verify));
loadPreset();
guarded(() => {
  solve();
  place();
})();
