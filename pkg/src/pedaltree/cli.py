"""Command-line entry points: run, replay-check, serve."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import ConfigError, EngineConfig, load_config
from .engine import replay_check, run_scenario
from .scenario import ScenarioError, load_scenario
from .telemetry import write_csv, write_jsonl


def _load(args) -> EngineConfig:
    config = load_config(args.config) if args.config else EngineConfig()
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    return config


def _cmd_run(args) -> int:
    config = _load(args)
    scenario = load_scenario(args.scenario)
    records, summary = run_scenario(config, scenario, name=args.scenario)
    if args.out:
        if args.out.endswith(".jsonl"):
            with open(args.out, "w", encoding="utf-8") as fh:
                write_jsonl(records, fh)
        elif args.out.endswith(".csv"):
            with open(args.out, "w", encoding="utf-8") as fh:
                write_csv(records, fh)
        else:
            print(f"error: --out must end in .csv or .jsonl, got {args.out!r}",
                  file=sys.stderr)
            return 2
    print(summary.to_text())
    return 0


def _cmd_replay_check(args) -> int:
    config = _load(args)
    scenario = load_scenario(args.scenario)
    if replay_check(config, scenario):
        print("replay-check: ok (telemetry hashes identical)")
        return 0
    print("replay-check: FAILED (telemetry hashes differ)", file=sys.stderr)
    return 1


def _cmd_serve(args) -> int:
    from .server import LiveServer

    config = _load(args)
    server = LiveServer(config, host=args.host, port=args.port)
    server.start()
    print(f"serving on {server.host}:{server.port} "
          f"(newline-delimited JSON, {server.snapshot_hz} Hz snapshots)",
          flush=True)
    try:
        server.run_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pedaltree",
        description="Deterministic simulator and control engine for a "
                    "pedal-powered kinetic leaf installation.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario file and print the summary")
    run.add_argument("scenario")
    run.add_argument("--config", help="engine config file")
    run.add_argument("--out", help="telemetry output (.csv or .jsonl)")
    run.add_argument("--seed", type=int, help="override the config seed")
    run.set_defaults(func=_cmd_run)

    replay = sub.add_parser("replay-check",
                            help="run a scenario twice and compare telemetry hashes")
    replay.add_argument("scenario")
    replay.add_argument("--config", help="engine config file")
    replay.add_argument("--seed", type=int, help="override the config seed")
    replay.set_defaults(func=_cmd_replay_check)

    serve = sub.add_parser("serve", help="run live and serve the socket protocol")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=7077)
    serve.add_argument("--config", help="engine config file")
    serve.add_argument("--seed", type=int, help="override the config seed")
    serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
