import init, { dimensions, s_matrix_row, orbit_geometry } from "./pkg/verlinde_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function escape(s) {
  return String(s).replace(/[&<>]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;" })[c]);
}

function showDimensions() {
  const res = JSON.parse(dimensions(num("dim-r"), num("dim-k"), num("dim-g")));
  if (res.error) {
    $("dim-out").innerHTML = `<p class="error">${escape(res.error)}</p>`;
    return;
  }
  const rows = res.degrees.map((d) =>
    `<tr><td>${d.d}</td><td>${d.sl ?? ""}</td><td>${d.pgl ?? ""}</td>` +
    `<td class="note">${escape(d.note ?? "")}</td></tr>`).join("");
  $("dim-out").innerHTML =
    `<table><tr><th>d</th><th>SL<sub>r</sub></th><th>PGL<sub>r</sub></th><th></th></tr>${rows}` +
    `<tr><th>all d</th><td>${res.sl_total ?? ""}</td><td>${res.pgl_total ?? ""}</td><td></td></tr></table>`;
}

function showSRow() {
  const res = JSON.parse(s_matrix_row(num("s-r"), num("s-k"), $("s-pgl").checked));
  const canvas = $("s-canvas");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (res.error) {
    $("s-msg").innerHTML = `<p class="error">${escape(res.error)}</p>`;
    return;
  }
  const entries = res.entries;
  const sumSq = entries.reduce((acc, e) => acc + e.s0 * e.s0, 0);
  $("s-msg").textContent = `${entries.length} entries, sum of |S|² = ${sumSq.toFixed(12)}`;
  const max = Math.max(...entries.map((e) => e.s0));
  const pad = 20;
  const w = (canvas.width - 2 * pad) / entries.length;
  const h = canvas.height - 2 * pad;
  entries.forEach((e, i) => {
    const bar = (e.s0 / max) * h;
    ctx.fillStyle = e.label.startsWith("nu^") ? "#d2691e" : e.members > 1 ? "#4a7bd0" : "#6a9f58";
    ctx.fillRect(pad + i * w + w * 0.1, pad + h - bar, Math.max(w * 0.8, 1), bar);
  });
  canvas.onmousemove = (ev) => {
    const rect = canvas.getBoundingClientRect();
    const x = ((ev.clientX - rect.left) * canvas.width) / rect.width;
    const i = Math.floor((x - pad) / w);
    if (i >= 0 && i < entries.length) {
      const e = entries[i];
      canvas.title = `${e.label}: |S|² = ${e.s0_squared}, |S| ≈ ${e.s0.toPrecision(8)}`;
    }
  };
}

let geometry = null;
let selected = 0;

function drawGeometry() {
  const canvas = $("o-canvas");
  const ctx = canvas.getContext("2d");
  const c = canvas.width / 2;
  const rad = c - 30;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!geometry) return;
  ctx.strokeStyle = "#ccc";
  ctx.beginPath();
  ctx.arc(c, c, rad, 0, 2 * Math.PI);
  ctx.stroke();
  const n = geometry.N;
  if (n <= 240) {
    ctx.fillStyle = "#ddd";
    for (let j = 0; j < n; j++) {
      const a = (2 * Math.PI * j) / n;
      ctx.fillRect(c + rad * Math.cos(a) - 1, c - rad * Math.sin(a) - 1, 2, 2);
    }
  }
  const orbit = geometry.orbits[selected];
  if (!orbit) return;
  const pts = orbit.angles.map((a) => [c + rad * Math.cos(a), c - rad * Math.sin(a)]);
  ctx.strokeStyle = orbit.in_root_lattice ? "#4a7bd0" : "#d2691e";
  ctx.beginPath();
  pts.forEach(([x, y], i) => (i ? ctx.lineTo(x, y) : ctx.moveTo(x, y)));
  ctx.closePath();
  ctx.stroke();
  ctx.fillStyle = ctx.strokeStyle;
  pts.forEach(([x, y]) => {
    ctx.beginPath();
    ctx.arc(x, y, 5, 0, 2 * Math.PI);
    ctx.fill();
  });
  ctx.fillStyle = "#222";
  ctx.fillText(`weight (${orbit.marks.join(",")})`, 10, 16);
  ctx.fillText(`exponents of ζ_${n}: ${orbit.exponents.join(", ")}`, 10, 32);
  ctx.fillText(`t^(k+r) = ζ_r^${orbit.center_class}`, 10, 48);
}

function showGeometry() {
  const res = JSON.parse(orbit_geometry(num("o-r"), num("o-k")));
  const list = $("orbit-list");
  list.innerHTML = "";
  if (res.error) {
    geometry = null;
    $("o-msg").innerHTML = `<p class="error">${escape(res.error)}</p>`;
    drawGeometry();
    return;
  }
  geometry = res;
  selected = 0;
  $("o-msg").textContent = `${res.orbits.length} weights, N = ${res.N}; blue: root lattice`;
  res.orbits.forEach((o, i) => {
    const div = document.createElement("div");
    div.textContent = `(${o.marks.join(",")})`;
    div.onclick = () => {
      selected = i;
      list.querySelectorAll("div").forEach((d, j) => d.classList.toggle("sel", j === i));
      drawGeometry();
    };
    if (i === 0) div.classList.add("sel");
    list.appendChild(div);
  });
  drawGeometry();
}

await init();
for (const [form, fn] of [["dim-form", showDimensions], ["s-form", showSRow], ["o-form", showGeometry]]) {
  $(form).addEventListener("input", fn);
  $(form).addEventListener("submit", (e) => e.preventDefault());
  fn();
}
