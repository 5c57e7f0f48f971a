// Pure board view model built from board_state frames; the DOM layer in
// app.ts renders it without adding any game logic of its own.

import { BoardStateFrame, MovePlayedFrame, SuggestionMove } from "./protocol.js";

export type Cell = "." | "X" | "O";

export interface BoardView {
  size: number;
  cells: Cell[];
  toMove: "B" | "W";
  cursor: { x: number; y: number };
  lastMove: { x: number; y: number } | null;
}

export function emptyBoardView(size: number): BoardView {
  return {
    size,
    cells: Array(size * size).fill(".") as Cell[],
    toMove: "B",
    cursor: { x: (size - 1) >> 1, y: (size - 1) >> 1 },
    lastMove: null,
  };
}

export function applyBoardState(view: BoardView | null, frame: BoardStateFrame): BoardView {
  return {
    size: frame.size,
    cells: frame.grid.split("") as Cell[],
    toMove: frame.to_move,
    cursor: { ...frame.cursor },
    lastMove: view && view.size === frame.size ? view.lastMove : null,
  };
}

export function applyMovePlayed(view: BoardView, frame: MovePlayedFrame): BoardView {
  if (frame.move.kind !== "play") return view;
  return { ...view, lastMove: { x: frame.move.x!, y: frame.move.y! } };
}

export interface GhostStone extends SuggestionMove {
  rank: number;
}

export function ghostStones(moves: SuggestionMove[]): GhostStone[] {
  return moves.map((m, i) => ({ ...m, rank: i + 1 }));
}
