// Dashboard reducer: staleness discipline, pass-through rendering state,
// reconnect hydration, and receipt-to-render latency instrumentation.

import { describe, expect, it } from "vitest";
import {
  initialView,
  reduceFrame,
  RenderInstrumentation,
  sparklinePath,
  UiSessionView,
} from "../src/dashboard.js";
import {
  AssessmentFrame,
  BoardStateFrame,
  MovePlayedFrame,
  ServerFrame,
} from "../src/protocol.js";

const hello: ServerFrame = {
  type: "hello",
  session_id: "s1",
  mode: "predictive",
  human_color: "B",
  board_size: 9,
};

function boardFrame(grid: string, cursor = { x: 4, y: 4 }): BoardStateFrame {
  return { type: "board_state", size: 9, grid, to_move: "B", cursor };
}

function moveFrame(moveNo: number, x: number, y: number): MovePlayedFrame {
  return {
    type: "move_played",
    color: moveNo % 2 ? "B" : "W",
    move: { kind: "play", x, y },
    move_no: moveNo,
    captures: 0,
  };
}

function assessFrame(moveNo: number, w: number): AssessmentFrame {
  return {
    type: "assessment",
    move_no: moveNo,
    black_winrate: w,
    simulations: 10_000,
    label: w > 0.75 ? "B++" : w >= 0.35 ? "U" : "W++",
  };
}

function feed(view: UiSessionView, frames: ServerFrame[]): UiSessionView {
  return frames.reduce(reduceFrame, view);
}

describe("dashboard reducer", () => {
  it("hydrates from hello + board_state", () => {
    const view = feed(initialView(), [hello, boardFrame(".".repeat(81))]);
    expect(view.sessionId).toBe("s1");
    expect(view.mode).toBe("predictive");
    expect(view.board?.size).toBe(9);
    expect(view.board?.cursor).toEqual({ x: 4, y: 4 });
  });

  it("renders assessments as badge + sparkline points", () => {
    const view = feed(initialView(), [hello, assessFrame(2, 0.95)]);
    expect(view.label).toBe("B++");
    expect(view.winrates).toEqual([{ moveNo: 2, blackWinrate: 0.95 }]);
    expect(sparklinePath(view.winrates, 240, 60)).toMatch(/^M/);
  });

  it("ignores out-of-order move_played frames", () => {
    let view = feed(initialView(), [hello, boardFrame(".".repeat(81))]);
    view = reduceFrame(view, moveFrame(2, 3, 3));
    expect(view.lastMoveNo).toBe(2);
    const stale = reduceFrame(view, moveFrame(1, 5, 5));
    expect(stale).toBe(view); // discarded, not merely merged
    expect(stale.board?.lastMove).toEqual({ x: 3, y: 3 });
  });

  it("ignores stale classification window ids", () => {
    let view = feed(initialView(), [hello]);
    view = reduceFrame(view, {
      type: "classification",
      window_id: 4,
      scores: { up: 0.9, down: 0, left: 0, right: 0, select: 0.1 },
      predicted: "up",
      confidence: 0.8,
    });
    const stale = reduceFrame(view, {
      type: "classification",
      window_id: 3,
      scores: { up: 0, down: 0.9, left: 0, right: 0, select: 0.1 },
      predicted: "down",
      confidence: 0.8,
    });
    expect(stale.lastPredicted).toBe("up");
  });

  it("ignores stale assessments", () => {
    let view = feed(initialView(), [hello, assessFrame(4, 0.5)]);
    view = reduceFrame(view, assessFrame(4, 0.9));
    expect(view.winrates).toHaveLength(1);
    expect(view.label).toBe("U");
  });

  it("keeps suggestions until the next move lands", () => {
    let view = feed(initialView(), [
      hello,
      boardFrame(".".repeat(81)),
      {
        type: "suggestion",
        moves: [
          { x: 2, y: 2, winrate: 0.6, visits: 120 },
          { x: 6, y: 6, winrate: 0.55, visits: 90 },
        ],
        text: "I suggest C7 (win 60.0%).",
      },
    ]);
    expect(view.suggestions).toHaveLength(2);
    expect(view.advisorText).toContain("I suggest");
    view = reduceFrame(view, moveFrame(1, 2, 2));
    expect(view.suggestions).toHaveLength(0);
  });

  it("surfaces errors and game results without dropping state", () => {
    let view = feed(initialView(), [hello]);
    view = reduceFrame(view, { type: "error", code: "IllegalMove", message: "Occupied" });
    expect(view.lastError).toBe("IllegalMove: Occupied");
    view = reduceFrame(view, { type: "game_over", result: "W+7.5" });
    expect(view.gameResult).toBe("W+7.5");
    expect(view.sessionId).toBe("s1");
  });

  it("board_state always wins over local guesses (server authoritative)", () => {
    const grid = "X" + ".".repeat(80);
    const view = feed(initialView(), [hello, boardFrame(grid, { x: 1, y: 0 })]);
    expect(view.board?.cells[0]).toBe("X");
    expect(view.board?.cursor).toEqual({ x: 1, y: 0 });
  });
});

describe("render instrumentation", () => {
  it("proves frames render within one animation frame of receipt", () => {
    const instr = new RenderInstrumentation();
    let frame = 0;
    for (let i = 0; i < 50; i++) {
      frame++;
      instr.received(frame); // frame arrives during animation frame N
      instr.rendered(frame + 1); // paint applied on the next rAF at latest
    }
    expect(instr.worst).toBeLessThanOrEqual(1);
    expect(instr.latencies).toHaveLength(50);
  });
});
