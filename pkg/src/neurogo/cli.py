"""Command-line entry point: serve / simulate / bench-decoder / replay.

Every pipeline stage is runnable headlessly and deterministically; outputs
are plain files (SGF, JSONL frame logs, CSV) so runs can be diffed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import bench, goban, session, sgf
from .assessor import timeline_csv
from .commands import Command
from .decoder import DecoderConfig, StimulusTable
from .engine import EngineConfig, genmove
from .goban import Color
from .seeds import derive
from .session import SessionConfig, assessment_from_search
from .synth import SynthConfig, measure_impedance

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_GATE = 3

_DEFAULTS = {
    "addr": "127.0.0.1:8765",
    "seed": 42,
    "snr_db": 60.0,
    "window_s": 2.0,
    "method": "cca",
    "playouts": 10_000,
    "board_size": 19,
    "komi": 7.5,
    "mode": "competitive",
    "out": "out",
    "trials": 200,
    "snr_grid": "60,10,0,-2.5,-5,-7.5,-10,-15,-20",
    "window_grid": "2.0",
    "impedance_o1_kohm": 100.0,
    "impedance_o2_kohm": 100.0,
    "impedance_jitter_pct": 5.0,
    "impedance_threshold_kohm": 200.0,
}


def read_config_file(path: str) -> dict[str, str]:
    """Parse simple `key = value` lines; '#' starts a comment."""
    values: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


class Settings:
    """Flag values override config-file values override defaults."""

    def __init__(self, args: argparse.Namespace):
        self.flags = vars(args)
        self.file = read_config_file(args.config) if getattr(args, "config", None) else {}

    def get(self, key: str, cast=str):
        flag = self.flags.get(key)
        if flag is not None:
            return flag
        if key in self.file:
            return cast(self.file[key])
        return _DEFAULTS[key]

    def session_config(self) -> SessionConfig:
        return SessionConfig(
            board_size=self.get("board_size", int),
            komi=self.get("komi", float),
            impedance_threshold_kohm=self.get("impedance_threshold_kohm", float),
            stim=StimulusTable(),
            synth=SynthConfig(
                snr_db=self.get("snr_db", float),
                window_s=self.get("window_s", float),
            ),
            decoder=DecoderConfig(method=self.get("method")),
            engine=EngineConfig(playouts=self.get("playouts", int)),
        )


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value config file; flags win over it")
    parser.add_argument("--addr", help="listen address host:port")
    parser.add_argument("--seed", type=int, help="root seed for all randomness")
    parser.add_argument("--snr-db", dest="snr_db", type=float, help="synthetic EEG SNR in dB")
    parser.add_argument("--window-s", dest="window_s", type=float, help="decode window length")
    parser.add_argument("--method", choices=["psd", "cca"], help="decoder method")
    parser.add_argument("--playouts", type=int, help="engine playout budget")
    parser.add_argument("--board-size", dest="board_size", type=int, help="goban size")
    parser.add_argument("--komi", type=float, help="komi for White")
    parser.add_argument("--mode", choices=["competitive", "predictive"], help="session mode")
    parser.add_argument("--out", help="output path (directory or file per subcommand)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="neurogo", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_serve = sub.add_parser("serve", help="run the WebSocket game server")
    _add_common(p_serve)
    p_serve.add_argument("--static", help="directory of built UI assets to serve")

    p_sim = sub.add_parser("simulate", help="drive a full scripted game in-process")
    p_sim.add_argument("script", help="gaze script: one of up/down/left/right/select per line")
    _add_common(p_sim)

    p_bench = sub.add_parser("bench-decoder", help="accuracy/ITR sweep over an SNR grid")
    _add_common(p_bench)
    p_bench.add_argument("--trials", type=int, help="trials per grid cell")
    p_bench.add_argument("--snr-grid", dest="snr_grid", help="comma-separated SNR dB values")
    p_bench.add_argument("--window-grid", dest="window_grid", help="comma-separated window lengths")

    p_replay = sub.add_parser("replay", help="replay an SGF and emit the assessment timeline")
    p_replay.add_argument("sgf_path", help="game record to replay")
    _add_common(p_replay)
    return parser


# ---------------------------------------------------------------------------
# subcommands


def cmd_serve(settings: Settings, static: str | None) -> int:
    from . import ws

    ws.serve(
        settings.get("addr"),
        settings.session_config(),
        seed=settings.get("seed", int),
        static_dir=static,
    )
    return EXIT_OK


def parse_gaze_script(text: str) -> list[Command]:
    commands = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            commands.append(Command(line.lower()))
        except ValueError:
            raise ValueError(f"line {lineno}: unknown gaze intent {line!r}") from None
    return commands


def run_simulation(
    script: list[Command],
    config: SessionConfig,
    seed: int,
    mode: str,
    impedance_kohm: dict[str, float] | None = None,
    jitter_pct: float = 5.0,
) -> tuple[session.SessionState, list[dict]]:
    """Run the scripted pipeline through handle_frame; returns final state and log.

    The log holds both directions: {"t": now_s, "dir": "in"|"out", "frame": ...}.
    Feeding the "in" entries back through handle_frame at their recorded times
    reproduces the "out" entries exactly.
    """
    state = session.create_session(mode, Color.BLACK, config, seed=seed)
    log: list[dict] = []
    now = 0.0

    def send(frame: dict) -> None:
        nonlocal state, now
        log.append({"t": now, "dir": "in", "frame": frame})
        state, outbound = session.handle_frame(state, frame, now_s=now)
        for out in outbound:
            log.append({"t": now, "dir": "out", "frame": out})

    report = measure_impedance(
        impedance_kohm if impedance_kohm is not None else {"O1": 100.0, "O2": 100.0},
        jitter_pct=jitter_pct,
        seed=seed,
    )
    send(
        {
            "type": "impedance_report",
            "kohm": {k: round(v, 6) for k, v in report.per_channel_kohm.items()},
        }
    )
    if state.phase != "playing":
        return state, log

    # one script line = consecutive_required identically-targeted windows,
    # which the debouncer turns into exactly one command
    for command in script:
        for _ in range(config.decoder.consecutive_required):
            now += config.synth.window_s
            send({"type": "gaze", "target": command.value})
    return state, log


def cmd_simulate(settings: Settings) -> int:
    script_path = settings.flags["script"]
    try:
        script = parse_gaze_script(Path(script_path).read_text())
    except (OSError, ValueError) as exc:
        print(f"script error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    config = settings.session_config()
    seed = settings.get("seed", int)
    state, log = run_simulation(
        script,
        config,
        seed,
        settings.get("mode"),
        impedance_kohm={
            "O1": settings.get("impedance_o1_kohm", float),
            "O2": settings.get("impedance_o2_kohm", float),
        },
        jitter_pct=settings.get("impedance_jitter_pct", float),
    )
    if state.phase == "impedance_gate":
        print("impedance gate failed", file=sys.stderr)
        return EXIT_GATE

    out_dir = Path(settings.get("out"))
    out_dir.mkdir(parents=True, exist_ok=True)
    record = session.close_session(state)
    (out_dir / "game.sgf").write_text(sgf.to_sgf(record) + "\n")
    with (out_dir / "frames.jsonl").open("w") as fh:
        for entry in log:
            fh.write(json.dumps(entry, separators=(",", ":")) + "\n")
    (out_dir / "assessment.csv").write_text(
        timeline_csv(list(state.eval_history), config.assessor)
    )
    print(f"wrote {out_dir}/game.sgf, frames.jsonl, assessment.csv")
    return EXIT_OK


def cmd_bench_decoder(settings: Settings) -> int:
    snr_grid = [float(v) for v in str(settings.get("snr_grid")).split(",") if v.strip()]
    window_grid = [float(v) for v in str(settings.get("window_grid")).split(",") if v.strip()]
    cells = bench.benchmark(
        StimulusTable(),
        DecoderConfig(method=settings.get("method")),
        snr_db_grid=snr_grid,
        window_s_grid=window_grid,
        methods=[settings.get("method")],
        trials_per_cell=settings.get("trials", int),
        seed=settings.get("seed", int),
    )
    csv_text = bench.bench_to_csv(cells)
    out = Path(settings.get("out"))
    if out.suffix != ".csv":
        out.mkdir(parents=True, exist_ok=True)
        out = out / "bench.csv"
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(csv_text)
    print(csv_text, end="")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_replay(settings: Settings) -> int:
    path = settings.flags["sgf_path"]
    try:
        record = sgf.from_sgf(Path(path).read_text())
    except (OSError, sgf.ParseError) as exc:
        print(f"replay error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    seed = settings.get("seed", int)
    cfg = EngineConfig(
        playouts=settings.get("playouts", int),
        komi=record.komi,
    )
    board = goban.BoardState.empty(record.size)
    samples = []
    for i, (color, move) in enumerate(record.moves, start=1):
        board = goban.play(board, move)
        if board.game_over:
            break
        result = genmove(board, replace(cfg, seed=derive(seed, "replay", i)))
        samples.append(assessment_from_search(result, board.to_move, i))

    csv_text = timeline_csv(samples)
    out = Path(settings.get("out"))
    if out.suffix != ".csv":
        out.mkdir(parents=True, exist_ok=True)
        out = out / "assessment.csv"
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(csv_text)
    print(csv_text, end="")
    print(f"wrote {out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    settings = Settings(args)
    if args.subcommand == "serve":
        return cmd_serve(settings, args.static)
    if args.subcommand == "simulate":
        return cmd_simulate(settings)
    if args.subcommand == "bench-decoder":
        return cmd_bench_decoder(settings)
    return cmd_replay(settings)


if __name__ == "__main__":
    sys.exit(main())
