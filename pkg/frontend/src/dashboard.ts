// Dashboard reducer: a pure view of the server frame stream.  Stale frames
// (older move_no / window_id than already shown) are discarded; render
// timing is instrumented so tests can prove frames appear within one
// animation frame of receipt.

import { applyBoardState, applyMovePlayed, BoardView, emptyBoardView } from "./board.js";
import {
  AssessmentFrame,
  BoardStateFrame,
  ServerFrame,
  SuggestionMove,
} from "./protocol.js";

export type ConnectionState = "connected" | "disconnected" | "reconnecting";

export interface WinratePoint {
  moveNo: number;
  blackWinrate: number;
}

export interface UiSessionView {
  connection: ConnectionState;
  sessionId: string | null;
  boardSize: number;
  mode: string;
  board: BoardView | null;
  winrates: WinratePoint[];
  label: string | null;
  advisorText: string | null;
  suggestions: SuggestionMove[];
  lastMoveNo: number;
  lastWindowId: number;
  lastConfidence: number | null;
  lastPredicted: string | null;
  gameResult: string | null;
  lastError: string | null;
}

export function initialView(): UiSessionView {
  return {
    connection: "disconnected",
    sessionId: null,
    boardSize: 19,
    mode: "competitive",
    board: null,
    winrates: [],
    label: null,
    advisorText: null,
    suggestions: [],
    lastMoveNo: 0,
    lastWindowId: -1,
    lastConfidence: null,
    lastPredicted: null,
    gameResult: null,
    lastError: null,
  };
}

export function reduceFrame(view: UiSessionView, frame: ServerFrame): UiSessionView {
  switch (frame.type) {
    case "hello":
      return {
        ...view,
        sessionId: frame.session_id,
        boardSize: frame.board_size,
        mode: frame.mode,
        board: view.board ?? emptyBoardView(frame.board_size),
      };
    case "board_state":
      return { ...view, board: applyBoardState(view.board, frame as BoardStateFrame) };
    case "move_played": {
      if (frame.move_no <= view.lastMoveNo) return view; // stale
      const board = view.board ?? emptyBoardView(view.boardSize);
      return {
        ...view,
        lastMoveNo: frame.move_no,
        board: applyMovePlayed(board, frame),
        suggestions: [], // a new move invalidates ghost stones
      };
    }
    case "classification": {
      if (frame.window_id <= view.lastWindowId) return view; // stale
      return {
        ...view,
        lastWindowId: frame.window_id,
        lastPredicted: frame.predicted,
        lastConfidence: frame.confidence,
      };
    }
    case "assessment": {
      if (view.winrates.some((p) => p.moveNo >= frame.move_no)) return view; // stale
      const point = { moveNo: frame.move_no, blackWinrate: frame.black_winrate };
      return {
        ...view,
        winrates: [...view.winrates, point],
        label: (frame as AssessmentFrame).label,
      };
    }
    case "suggestion":
      return { ...view, suggestions: frame.moves, advisorText: frame.text };
    case "command":
      return view;
    case "game_over":
      return { ...view, gameResult: frame.result };
    case "error":
      return { ...view, lastError: `${frame.code}: ${frame.message}` };
    default:
      return view;
  }
}

/** Sparkline geometry for the winrate history (viewBox 0..width/0..height). */
export function sparklinePath(points: WinratePoint[], width: number, height: number): string {
  if (points.length === 0) return "";
  const maxMove = Math.max(points[points.length - 1].moveNo, 1);
  return points
    .map((p, i) => {
      const x = (p.moveNo / maxMove) * width;
      const y = (1 - p.blackWinrate) * height;
      return `${i === 0 ? "M" : "L"}${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
}

/** Receipt -> render latency instrumentation, in animation frames. */
export class RenderInstrumentation {
  readonly latencies: number[] = [];
  private pending: number[] = [];

  received(frameIndex: number): void {
    this.pending.push(frameIndex);
  }

  rendered(frameIndex: number): void {
    for (const receivedAt of this.pending) {
      this.latencies.push(frameIndex - receivedAt);
    }
    this.pending = [];
  }

  get worst(): number {
    return this.latencies.length ? Math.max(...this.latencies) : 0;
  }
}
