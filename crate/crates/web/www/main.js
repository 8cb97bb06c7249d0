import init, { eer_explorer, synthetic_cp_map, synthetic_delta_map } from "./pkg/cpmap_web.js";

const num = (id) => Number(document.getElementById(id).value);
const str = (id) => document.getElementById(id).value;
const fmt = (v) => v.toFixed(6);

function report(id, f) {
  const out = document.getElementById(id);
  out.classList.remove("err");
  try {
    out.textContent = f();
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e);
  }
}

// cells are row-major with y = 1 first; the image puts y = M on top
function paint(canvasId, cells, m, color) {
  const canvas = document.getElementById(canvasId);
  canvas.width = m;
  canvas.height = m;
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(m, m);
  for (let y = 1; y <= m; y++) {
    for (let x = 1; x <= m; x++) {
      const v = cells[(y - 1) * m + (x - 1)];
      const [r, g, b] = Number.isNaN(v) ? [0, 0, 0] : color(v);
      const p = 4 * ((m - y) * m + (x - 1));
      img.data.set([r, g, b, 255], p);
    }
  }
  ctx.putImageData(img, 0, 0);
}

function range(cells) {
  const defined = cells.filter((v) => !Number.isNaN(v));
  if (defined.length === 0) return [0, 1];
  const lo = Math.min(...defined);
  const hi = Math.max(...defined);
  return lo < hi ? [lo, hi] : [lo, lo + 1];
}

function runExplorer() {
  report("ex-out", () => {
    const [eer, t, sEer, sT, dcf] = eer_explorer(
      num("ex-mu-pos"), num("ex-sigma-pos"), num("ex-mu-neg"), num("ex-sigma-neg"),
      num("ex-n-pos"), num("ex-n-neg"), num("ex-seed"), num("ex-p"));
    return `analytic  eer=${fmt(eer)} threshold=${fmt(t)}\n` +
           `sampled   eer=${fmt(sEer)} threshold=${fmt(sT)} min_dcf=${fmt(dcf)}`;
  });
}

function runCpMap() {
  report("cp-out", () => {
    const m = num("cp-grid");
    const cells = synthetic_cp_map(
      num("cp-sep"), num("cp-n-pos"), num("cp-n-neg"), num("cp-seed"),
      m, num("cp-min"), str("cp-metric"), num("cp-p"));
    const [lo, hi] = range(cells);
    paint("cp-canvas", cells, m, (v) => {
      const t = Math.min(1, Math.max(0, (v - lo) / (hi - lo)));
      const c = Math.round(255 * (1 - t));
      return [c, c, c];
    });
    const defined = cells.filter((v) => !Number.isNaN(v)).length;
    return `white=${fmt(lo)} black=${fmt(hi)} defined=${defined}/${m * m}`;
  });
}

function runDelta() {
  report("dm-out", () => {
    const m = num("dm-grid");
    const out = synthetic_delta_map(
      num("dm-ref"), num("dm-test"), num("dm-rho"), num("dm-n-pos"), num("dm-n-neg"),
      num("dm-seed"), m, num("dm-min"));
    const cells = out.slice(0, m * m);
    const [win, tie, lose] = out.slice(m * m);
    const span = Math.max(...cells.filter((v) => !Number.isNaN(v)).map(Math.abs), 0) || 1;
    paint("dm-canvas", cells, m, (v) => {
      const t = Math.min(1, Math.max(-1, v / span));
      const fade = 255 - Math.round(255 * Math.abs(t));
      return t >= 0 ? [255, fade, fade] : [fade, fade, 255];
    });
    if (Number.isNaN(win)) return "no defined cells";
    return `win=${fmt(win)} tie=${fmt(tie)} lose=${fmt(lose)} span=${fmt(span)}`;
  });
}

await init();
document.getElementById("ex-run").addEventListener("click", runExplorer);
document.getElementById("cp-run").addEventListener("click", runCpMap);
document.getElementById("dm-run").addEventListener("click", runDelta);
runExplorer();
runCpMap();
runDelta();
