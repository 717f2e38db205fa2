import init, { surface, bounds, optimize } from "./pkg/purity_witness_web.js";

const N = 101;
const $ = (id) => document.getElementById(id);

function drawSurface(values) {
  const canvas = $("surface");
  const ctx = canvas.getContext("2d");
  const img = ctx.createImageData(N, N);
  for (let i = 0; i < N; i++) {
    for (let j = 0; j < N; j++) {
      const t = values[i * N + j] - 2; // in [0, 1]
      const k = ((N - 1 - j) * N + i) * 4; // p right, w up
      img.data[k] = Math.round(40 + 215 * t);
      img.data[k + 1] = Math.round(30 + 170 * t * t);
      img.data[k + 2] = Math.round(90 * (1 - t));
      img.data[k + 3] = 255;
    }
  }
  const off = new OffscreenCanvas(N, N);
  off.getContext("2d").putImageData(img, 0, 0);
  return () => {
    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
    const p = +$("p").value, w = +$("w").value;
    ctx.strokeStyle = "#fff";
    ctx.beginPath();
    ctx.arc(p * canvas.width, (1 - w) * canvas.height, 5, 0, 2 * Math.PI);
    ctx.stroke();
  };
}

function show(id, text) {
  try {
    $(id).textContent = JSON.stringify(JSON.parse(text), null, 2);
  } catch {
    $(id).textContent = text;
  }
}

async function main() {
  await init();
  const values = surface(N, N);
  const redraw = drawSurface(values);

  const updateSurface = () => {
    const p = +$("p").value, w = +$("w").value;
    $("p-val").textContent = p.toFixed(2);
    $("w-val").textContent = w.toFixed(2);
    const i = Math.round(p * (N - 1)), j = Math.round(w * (N - 1));
    const threshold = (1 - p) / (3 + p);
    $("surface-out").textContent =
      `B1 max = ${values[i * N + j].toFixed(6)}\n` +
      `threshold w = ${threshold.toFixed(4)} (${w <= threshold ? "deterministic strategy optimal" : "sequential strategy optimal"})`;
    redraw();
  };

  const updateBounds = () => {
    const b1 = +$("b1").value;
    const usePurity = $("use-purity").checked;
    const purity = +$("purity").value;
    $("b1-val").textContent = b1.toFixed(3);
    $("purity-val").textContent = purity.toFixed(3);
    try {
      show("bounds-out", bounds(b1, usePurity ? purity : undefined));
    } catch (e) {
      $("bounds-out").textContent = `error: ${e}`;
    }
  };

  $("optimize").addEventListener("click", () => {
    $("optimize-out").textContent = "running...";
    setTimeout(() => {
      try {
        show("optimize-out", optimize(+$("p").value, +$("w").value, +$("restarts").value, 0n));
      } catch (e) {
        $("optimize-out").textContent = `error: ${e}`;
      }
    }, 0);
  });

  for (const id of ["p", "w"]) $(id).addEventListener("input", updateSurface);
  for (const id of ["b1", "purity", "use-purity"]) $(id).addEventListener("input", updateBounds);
  updateSurface();
  updateBounds();
}

main();
