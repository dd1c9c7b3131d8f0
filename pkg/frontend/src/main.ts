// DOM wiring: canvas, sliders, report panel, camera drag, reset.

import { Client } from "./api.js";
import { Controller, ViewHooks } from "./controller.js";
import { Camera, fitCamera, Vec3 } from "./math3.js";
import { drawScene, projectSegments } from "./render.js";
import { LAMBDA_MAX, LAMBDA_MIN, SLIDER_STEPS, lambdaToSlider, sliderToLambda } from "./sliders.js";
import type { DiagramPayload } from "./types.js";

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const badgeEl = document.getElementById("badge")!;
const reportEl = document.getElementById("report")!;
const slidersEl = document.getElementById("sliders")!;
const bannerEl = document.getElementById("banner")!;
const resetEl = document.getElementById("reset") as HTMLButtonElement;

let camera: Camera | null = null;
let lastDiagram: DiagramPayload | null = null;
let lastPalette: string[] = [];
const sliderInputs = new Map<number, HTMLInputElement>();
const sliderValues = new Map<number, HTMLElement>();

function sizeCanvas(): void {
  canvas.width = canvas.clientWidth * devicePixelRatio;
  canvas.height = canvas.clientHeight * devicePixelRatio;
  ctx.setTransform(devicePixelRatio, 0, 0, devicePixelRatio, 0, 0);
}

function repaint(): void {
  if (!lastDiagram || !camera) return;
  const segments = projectSegments(lastDiagram, lastPalette, camera);
  drawScene(ctx, canvas.clientWidth, canvas.clientHeight, segments);
}

const hooks: ViewHooks = {
  renderDiagram(diagram, palette) {
    lastDiagram = diagram;
    lastPalette = palette;
    if (!camera) {
      camera = fitCamera(diagram.vertices.map((v) => v.p as Vec3),
                         canvas.clientWidth, canvas.clientHeight);
    }
    repaint();
  },
  renderBadge(badge, preserved) {
    badgeEl.textContent = preserved ? badge.text : `SYMMETRY LOST  ${badge.text}`;
    badgeEl.className = preserved ? (badge.grown ? "badge grown" : "badge") : "badge failure";
  },
  renderReport(lines) {
    reportEl.innerHTML = "";
    for (const [key, value] of lines) {
      const row = document.createElement("div");
      row.className = "row";
      const k = document.createElement("span");
      k.className = "key";
      k.textContent = key;
      const v = document.createElement("span");
      v.className = "value";
      v.textContent = value;
      row.append(k, v);
      reportEl.append(row);
    }
  },
  setSlider(edge, lambda) {
    const input = sliderInputs.get(edge);
    if (input) input.value = String(lambdaToSlider(lambda));
    const label = sliderValues.get(edge);
    if (label) label.textContent = `λ = ${lambda.toFixed(3)}`;
  },
  buildSliders(edges, lambdas) {
    slidersEl.innerHTML = "";
    sliderInputs.clear();
    sliderValues.clear();
    for (const edge of edges) {
      const wrap = document.createElement("div");
      wrap.className = "slider";
      const title = document.createElement("div");
      title.className = "slider-title";
      title.textContent = `edge e${edge}`;
      const value = document.createElement("span");
      value.className = "slider-value";
      const input = document.createElement("input");
      input.type = "range";
      input.min = "0";
      input.max = String(SLIDER_STEPS);
      input.value = String(lambdaToSlider(lambdas[edge] ?? 1.0));
      input.title = `scale within [${LAMBDA_MIN}, ${LAMBDA_MAX}]`;
      input.addEventListener("input", () => {
        const lambda = sliderToLambda(Number(input.value));
        value.textContent = `λ = ${lambda.toFixed(3)}`;
        controller.onSliderChange(edge, lambda);
      });
      const toOne = document.createElement("button");
      toOne.textContent = "1×";
      toOne.addEventListener("click", () => {
        input.value = String(lambdaToSlider(1.0));
        value.textContent = "λ = 1.000";
        controller.onSliderChange(edge, 1.0);
      });
      title.append(value);
      wrap.append(title, input, toOne);
      slidersEl.append(wrap);
      sliderInputs.set(edge, input);
      sliderValues.set(edge, value);
      hooks.setSlider(edge, lambdas[edge] ?? 1.0);
    }
  },
  showBanner(message) {
    bannerEl.textContent = message ?? "";
    bannerEl.style.display = message ? "block" : "none";
  },
};

const controller = new Controller(new Client(), hooks);

let dragging = false;
let lastX = 0;
let lastY = 0;
canvas.addEventListener("mousedown", (e) => {
  dragging = true;
  lastX = e.clientX;
  lastY = e.clientY;
});
window.addEventListener("mouseup", () => (dragging = false));
window.addEventListener("mousemove", (e) => {
  if (!dragging || !camera) return;
  camera.azimuth += (e.clientX - lastX) * 0.008;
  camera.elevation = Math.min(1.5, Math.max(-1.5,
    camera.elevation + (e.clientY - lastY) * 0.008));
  lastX = e.clientX;
  lastY = e.clientY;
  repaint();
});
canvas.addEventListener("wheel", (e) => {
  if (!camera) return;
  e.preventDefault();
  camera.zoom *= Math.exp(-e.deltaY * 0.0012);
  repaint();
});
resetEl.addEventListener("click", () => void controller.reset());
window.addEventListener("resize", () => {
  sizeCanvas();
  repaint();
});

sizeCanvas();
void controller.init().catch(() => {
  /* banner already shown; retry on demand */
});
