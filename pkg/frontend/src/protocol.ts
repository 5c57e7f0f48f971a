// Wire frames, mirroring the server's JSON schema exactly.
// The client only ever *sends* hello / impedance_report / gaze frames; all
// game logic stays server-side.

export type CommandName = "up" | "down" | "left" | "right" | "select";
export type GazeTarget = CommandName | "none";

export interface HelloFrame {
  type: "hello";
  session_id: string;
  mode: "competitive" | "predictive";
  human_color: "B" | "W";
  board_size: number;
}

export interface ImpedanceReportFrame {
  type: "impedance_report";
  kohm: Record<string, number>;
}

export interface GazeFrame {
  type: "gaze";
  target: GazeTarget;
}

export interface ClassificationFrame {
  type: "classification";
  window_id: number;
  scores: Record<CommandName, number>;
  predicted: CommandName;
  confidence: number;
}

export interface CommandFrame {
  type: "command";
  command: CommandName;
}

export interface MovePayload {
  kind: "play" | "pass" | "resign";
  x?: number;
  y?: number;
}

export interface MovePlayedFrame {
  type: "move_played";
  color: "B" | "W";
  move: MovePayload;
  move_no: number;
  captures: number;
}

export interface BoardStateFrame {
  type: "board_state";
  size: number;
  grid: string; // row-major ".XO"
  to_move: "B" | "W";
  cursor: { x: number; y: number };
}

export interface SuggestionMove {
  x: number;
  y: number;
  winrate: number;
  visits: number;
}

export interface SuggestionFrame {
  type: "suggestion";
  moves: SuggestionMove[];
  text: string;
}

export interface AssessmentFrame {
  type: "assessment";
  move_no: number;
  black_winrate: number;
  simulations: number;
  label: "W++" | "W+" | "U" | "B+" | "B++";
}

export interface GameOverFrame {
  type: "game_over";
  result: string;
}

export interface ErrorFrame {
  type: "error";
  code: string;
  message: string;
}

export type ClientFrame = HelloFrame | ImpedanceReportFrame | GazeFrame;
export type ServerFrame =
  | HelloFrame
  | ClassificationFrame
  | CommandFrame
  | MovePlayedFrame
  | BoardStateFrame
  | SuggestionFrame
  | AssessmentFrame
  | GameOverFrame
  | ErrorFrame;

export const COMMANDS: CommandName[] = ["up", "down", "left", "right", "select"];

export const LABEL_ORDER = ["W++", "W+", "U", "B+", "B++"] as const;

/** Validate an outbound frame against the client-sendable schema. */
export function isClientFrame(frame: unknown): frame is ClientFrame {
  if (typeof frame !== "object" || frame === null) return false;
  const f = frame as Record<string, unknown>;
  if (f.type === "hello") return true;
  if (f.type === "gaze")
    return typeof f.target === "string" && [...COMMANDS, "none"].includes(f.target as string);
  if (f.type === "impedance_report")
    return (
      typeof f.kohm === "object" &&
      f.kohm !== null &&
      Object.values(f.kohm as object).every((v) => typeof v === "number" && v >= 0)
    );
  return false;
}
