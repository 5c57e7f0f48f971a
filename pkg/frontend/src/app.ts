// Browser glue: one animation loop drives the flicker panels and repaints,
// one socket feeds the reducer.  All legality and labels come from the
// server; this file only draws.

import { ghostStones } from "./board.js";
import {
  initialView,
  reduceFrame,
  RenderInstrumentation,
  sparklinePath,
  UiSessionView,
} from "./dashboard.js";
import { GazeController } from "./gaze.js";
import { CommandName, COMMANDS, ServerFrame } from "./protocol.js";
import { GameSocket } from "./socket.js";
import { DEFAULT_FLICKER, StimulusPanels } from "./stimuli.js";

const $ = (id: string) => document.getElementById(id)!;

let view: UiSessionView = initialView();
let dirty = true;
let frameIndex = 0;
const instrumentation = new RenderInstrumentation();

const refreshHz = 60;
const panels = new StimulusPanels(DEFAULT_FLICKER, refreshHz);

const socket = new GameSocket({
  url: `${location.protocol === "https:" ? "wss:" : "ws:"}//${location.host}/ws${location.search}`,
  onFrame: (frame: ServerFrame) => {
    if (frame.type === "hello") socket.adoptSession(frame.session_id);
    view = reduceFrame(view, frame);
    instrumentation.received(frameIndex);
    dirty = true;
  },
  onStateChange: (state) => {
    view = { ...view, connection: state };
    dirty = true;
  },
});

const gaze = new GazeController((frame) => socket.send(frame), 2000);

function buildStimulusPanels(): void {
  const host = $("stimuli");
  for (const command of COMMANDS) {
    const panel = document.createElement("div");
    panel.className = "panel";
    panel.id = `panel-${command}`;
    panel.dataset.command = command;
    const freq = DEFAULT_FLICKER[command];
    panel.innerHTML = `<span class="arrow">${symbolFor(command)}</span><span class="freq">${freq} Hz</span>`;
    if (panels.degraded(command)) panel.classList.add("degraded");
    panel.addEventListener("pointerenter", () => gaze.hold(command, performance.now()));
    panel.addEventListener("pointerleave", () => gaze.release());
    host.appendChild(panel);
  }
}

function symbolFor(command: CommandName): string {
  return { up: "↑", down: "↓", left: "←", right: "→", select: "●" }[command];
}

function paintStimuli(tMs: number): void {
  const luminance = panels.tick(tMs);
  if (panels.log.length > 1200) panels.log.splice(0, panels.log.length - 1200);
  for (const command of COMMANDS) {
    const el = $(`panel-${command}`);
    if (!panels.degraded(command)) {
      el.style.setProperty("--lum", luminance[command].toFixed(3));
    }
  }
}

function paintBoard(): void {
  const host = $("board");
  const board = view.board;
  if (!board) return;
  host.style.setProperty("--size", String(board.size));
  if (host.childElementCount !== board.size * board.size) {
    host.innerHTML = "";
    for (let i = 0; i < board.size * board.size; i++) {
      const cell = document.createElement("div");
      cell.className = "cell";
      host.appendChild(cell);
    }
  }
  const ghosts = new Map(
    ghostStones(view.suggestions).map((g) => [g.y * board.size + g.x, g]),
  );
  for (let i = 0; i < board.cells.length; i++) {
    const el = host.children[i] as HTMLElement;
    const v = board.cells[i];
    const x = i % board.size;
    const y = Math.floor(i / board.size);
    el.className = "cell";
    if (v === "X") el.classList.add("black");
    if (v === "O") el.classList.add("white");
    if (board.cursor.x === x && board.cursor.y === y) el.classList.add("cursor");
    if (board.lastMove && board.lastMove.x === x && board.lastMove.y === y)
      el.classList.add("last");
    const ghost = ghosts.get(i);
    el.innerHTML = ghost ? `<span class="ghost">${ghost.rank}</span>` : "";
  }
}

function paintDashboard(): void {
  $("connection").textContent = view.connection;
  $("connection").className = `banner ${view.connection}`;
  $("badge").textContent = view.label ?? "–";
  $("badge").dataset.label = view.label ?? "";
  $("advisor").textContent = view.advisorText ?? "";
  $("decoded").textContent = view.lastPredicted
    ? `${view.lastPredicted} (${((view.lastConfidence ?? 0) * 100).toFixed(0)}%)`
    : "–";
  $("result").textContent = view.gameResult ?? "";
  $("error").textContent = view.lastError ?? "";
  const path = sparklinePath(view.winrates, 240, 60);
  $("spark-path").setAttribute("d", path);
}

function loop(tMs: number): void {
  frameIndex++;
  paintStimuli(tMs);
  gaze.tick(tMs);
  if (dirty) {
    paintBoard();
    paintDashboard();
    instrumentation.rendered(frameIndex);
    dirty = false;
  }
  requestAnimationFrame(loop);
}

function sendImpedance(): void {
  socket.send({
    type: "impedance_report",
    kohm: { O1: 95 + Math.random() * 10, O2: 95 + Math.random() * 10 },
  });
}

export function start(): void {
  buildStimulusPanels();
  $("impedance").addEventListener("click", sendImpedance);
  $("pause").addEventListener("click", () => {
    document.body.classList.toggle("paused");
  });
  socket.connect();
  requestAnimationFrame(loop);
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  start();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", start);
}
