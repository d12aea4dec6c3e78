/** DOM wiring for the annotation tool.
 *
 * Flow: upload image (optionally a gold mask) -> click to place prototype
 * points (toggle or alt-click for counter-prototypes) -> Train -> poll the
 * job -> draw the mask overlay and show the balanced accuracy.  The overlay
 * opacity and threshold sliders act client-side on fetched data.
 */

import { Api } from "./api.js";
import { displayToImage, fitZoom, imageToDisplay } from "./coords.js";
import { gridPixels, maskFromRaw, overlayPixels } from "./overlay.js";
import { pollJob } from "./poll.js";
import {
  canTrain, formatBa, initialState, jobUpdated, pointsSynced, roleColor,
  sessionCreated, trainBlockReason, trainRequested, rawLoaded, UiState,
} from "./state.js";

const api = new Api();
let state: UiState = initialState();
let zoom = 1;
let imageBitmap: ImageBitmap | null = null;

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

const imageCanvas = $("image-canvas") as unknown as HTMLCanvasElement;
const overlayCanvas = $("overlay-canvas") as unknown as HTMLCanvasElement;
const pointsCanvas = $("points-canvas") as unknown as HTMLCanvasElement;
const statusLine = $("status-line");
const baLine = $("ba-line");
const pointsList = $("points-list");
const trainButton = $("train-button") as unknown as HTMLButtonElement;

function setState(next: UiState): void {
  state = next;
  render();
}

function setStatus(text: string): void {
  statusLine.textContent = text;
}

// --- rendering ------------------------------------------------------------

function render(): void {
  trainButton.disabled = !canTrain(state);
  baLine.textContent = `balanced accuracy: ${formatBa(state.lastBa)}`;
  renderPoints();
  renderOverlay();
  renderPointsList();
  const phase = state.jobPhase;
  if (phase === "running") {
    setStatus(`training... ${(state.jobProgress * 100).toFixed(0)}%`);
  } else if (phase === "failed") {
    setStatus(`training failed: ${state.jobError}`);
  } else if (phase === "done") {
    setStatus("training done");
  }
}

function renderImage(): void {
  if (!imageBitmap) return;
  zoom = fitZoom(
    { width: state.imageWidth, height: state.imageHeight }, 640, 640);
  const w = Math.round(state.imageWidth * zoom);
  const h = Math.round(state.imageHeight * zoom);
  for (const canvas of [imageCanvas, overlayCanvas, pointsCanvas]) {
    canvas.width = w;
    canvas.height = h;
  }
  const ctx = imageCanvas.getContext("2d")!;
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(imageBitmap, 0, 0, w, h);
}

function renderPoints(): void {
  const ctx = pointsCanvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, pointsCanvas.width, pointsCanvas.height);
  for (const p of state.points) {
    const { u, v } = imageToDisplay(p.x, p.y, zoom);
    ctx.strokeStyle = roleColor(p.role);
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.arc(u, v, 6, 0, 2 * Math.PI);
    ctx.stroke();
    ctx.beginPath();
    ctx.arc(u, v, 1.5, 0, 2 * Math.PI);
    ctx.fillStyle = roleColor(p.role);
    ctx.fill();
  }
}

function renderOverlay(): void {
  const ctx = overlayCanvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, overlayCanvas.width, overlayCanvas.height);
  if (!state.raw) return;
  const mask = maskFromRaw(state.raw, state.threshold);
  const pixels = overlayPixels(mask, state.overlayOpacity);
  const image = new ImageData(
    pixels, state.imageWidth, state.imageHeight);
  // draw at native resolution, then scale onto the display canvas
  const scratch = document.createElement("canvas");
  scratch.width = state.imageWidth;
  scratch.height = state.imageHeight;
  scratch.getContext("2d")!.putImageData(image, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(scratch, 0, 0, overlayCanvas.width, overlayCanvas.height);
}

function renderPointsList(): void {
  pointsList.innerHTML = "";
  state.points.forEach((p) => {
    const li = document.createElement("li");
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = roleColor(p.role);
    li.appendChild(swatch);
    li.appendChild(document.createTextNode(
      ` (${p.x}, ${p.y}) ${p.role} [${p.class}] `));
    const del = document.createElement("button");
    del.textContent = "remove";
    del.onclick = async () => {
      if (!state.sessionId) return;
      const points = await api.deletePoint(state.sessionId, p.n);
      setState(pointsSynced(state, points));
    };
    li.appendChild(del);
    pointsList.appendChild(li);
  });
}

// --- event handlers ---------------------------------------------------------

$("upload-button").onclick = async () => {
  const imageInput = $("image-file") as unknown as HTMLInputElement;
  const goldInput = $("gold-file") as unknown as HTMLInputElement;
  const file = imageInput.files?.[0];
  if (!file) {
    setStatus("choose an image file first");
    return;
  }
  try {
    const info = await api.createSession(file, goldInput.files?.[0]);
    imageBitmap = await createImageBitmap(file);
    setState(sessionCreated(state, info));
    renderImage();
    setStatus(`session ${info.id}: ${info.width}x${info.height}` +
      (info.has_gold ? " with gold mask" : ""));
  } catch (err) {
    setStatus(`upload failed: ${err}`);
  }
};

pointsCanvas.onclick = async (ev: MouseEvent) => {
  if (!state.sessionId) return;
  const rect = pointsCanvas.getBoundingClientRect();
  const hit = displayToImage(
    ev.clientX - rect.left, ev.clientY - rect.top, zoom,
    { width: state.imageWidth, height: state.imageHeight });
  if (!hit) return;
  // alt/ctrl-click drops a counter-prototype regardless of the toggle
  const role = ev.altKey || ev.ctrlKey ? "counter" : state.activeRole;
  try {
    const points = await api.addPoint(
      state.sessionId, hit.x, hit.y, role, state.classLabel);
    setState(pointsSynced(state, points));
  } catch (err) {
    setStatus(`point rejected: ${err}`);
  }
};

for (const id of ["role-prototype", "role-counter"]) {
  $(id).onchange = () => {
    state.activeRole =
      ($("role-counter") as unknown as HTMLInputElement).checked
        ? "counter" : "prototype";
  };
}

($("class-label") as unknown as HTMLInputElement).onchange = (ev) => {
  state.classLabel = (ev.target as HTMLInputElement).value || "object";
};

trainButton.onclick = async () => {
  const reason = trainBlockReason(state);
  if (reason) {
    setStatus(reason);
    return;
  }
  const num = (id: string) =>
    Number(($(id) as unknown as HTMLInputElement).value);
  const body = {
    seed: num("train-seed"),
    starts: num("train-starts"),
    steps: num("train-steps"),
    stepsize: 0.05,
    fdres: 0.01,
    objective: "a" as const,
    radius: num("train-radius"),
    sort: true,
    d_first: num("train-dfirst"),
    gain: num("train-gain"),
    offset: 0,
    threshold: state.threshold,
    subsample: num("train-subsample"),
  };
  try {
    const sid = state.sessionId!;
    const { job_id } = await api.train(sid, body);
    setState(trainRequested(state, job_id));
    const done = await pollJob(api, sid, job_id,
      (doc) => setState(jobUpdated(state, doc)));
    if (done.status === "done") {
      const raw = await api.rawOutputs(sid);
      setState(rawLoaded(state, raw.values));
    }
  } catch (err) {
    setStatus(`training failed: ${err}`);
  }
};

($("opacity-slider") as unknown as HTMLInputElement).oninput = (ev) => {
  state.overlayOpacity = Number((ev.target as HTMLInputElement).value) / 100;
  renderOverlay();
};

($("threshold-slider") as unknown as HTMLInputElement).oninput = (ev) => {
  state.threshold = Number((ev.target as HTMLInputElement).value) / 100;
  $("threshold-value").textContent = state.threshold.toFixed(2);
  renderOverlay();
};

$("landscape-button").onclick = async () => {
  if (!state.sessionId) {
    setStatus("train a network first");
    return;
  }
  const free = ($("landscape-free") as unknown as HTMLInputElement).value;
  try {
    const grid = await api.landscape(state.sessionId, free, 0.05);
    const canvas = $("landscape-canvas") as unknown as HTMLCanvasElement;
    const rows = grid.values.length;
    const cols = grid.values[0].length;
    const scratch = document.createElement("canvas");
    scratch.width = cols;
    scratch.height = rows;
    scratch.getContext("2d")!.putImageData(
      new ImageData(gridPixels(grid.values), cols, rows), 0, 0);
    const scale = Math.max(1, Math.floor(256 / Math.max(rows, cols)));
    canvas.width = cols * scale;
    canvas.height = rows * scale;
    const ctx = canvas.getContext("2d")!;
    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(scratch, 0, 0, canvas.width, canvas.height);
    setStatus(`landscape max at (w1, w2) = ` +
      `(${grid.argmax[0].toFixed(2)}, ${grid.argmax[1].toFixed(2)})`);
  } catch (err) {
    setStatus(`landscape failed: ${err}`);
  }
};

render();
setStatus("upload an image to begin");
