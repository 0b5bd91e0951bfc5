"""Command line entry points.

  trustya simulate --spec FILE [--seeds K] [--out DIR]
  trustya replay --log FILE
  trustya baselines [--seeds K] [--out DIR] [--overtime]
  trustya serve [--host H] [--port P] [--archive DIR] [--frontend DIR]
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import ConfigError
from .events import LogError
from .sim import SimSpec, replay_log, run_baselines, run_batch


def _cmd_simulate(args: argparse.Namespace) -> int:
    spec = SimSpec.from_file(args.spec)
    if args.seeds is not None:
        spec = dataclasses.replace(spec, seeds=args.seeds)
    result = run_batch(spec, out_dir=args.out)
    agg = result.agg
    print(f"{spec.label()}: {agg.count} games, "
          f"mean gini {agg.mean_gini:.4f}, "
          f"mean earnings {agg.mean_earnings:.4f}, "
          f"mean rounds {agg.mean_rounds:.1f}")
    for reason, count in sorted(agg.end_reasons.items()):
        print(f"  ended by {reason}: {count}")
    if args.out:
        print(f"wrote logs and csv under {args.out}")
    return 0


def _cmd_replay(args: argparse.Namespace) -> int:
    report = replay_log(args.log)
    if report.ok:
        print(f"replay clean: {report.events} events match")
        return 0
    print(f"replay failed: {report.first_problem()}", file=sys.stderr)
    for d in report.divergences[:3]:
        if d.expected is not None:
            print(f"  logged:   {d.expected}", file=sys.stderr)
        if d.produced is not None:
            print(f"  replayed: {d.produced}", file=sys.stderr)
    return 1


def _cmd_baselines(args: argparse.Namespace) -> int:
    results = run_baselines(out_dir=args.out, seeds=args.seeds)
    if args.overtime:
        # rerun with the probabilistic ending instead of the fixed stop
        import dataclasses as _dc
        for kind, result in results.items():
            spec = result.spec
            spec = _dc.replace(
                spec, config=_dc.replace(spec.config, hard_stop=False))
            results[kind] = run_batch(
                spec, out_dir=None if args.out is None else f"{args.out}/{kind}",
                label=kind)
    width = max(len(k) for k in results)
    print(f"{'kind':<{width}}  {'gini':>7}  {'earnings':>8}  {'rounds':>6}")
    for kind, result in results.items():
        agg = result.agg
        print(f"{kind:<{width}}  {agg.mean_gini:>7.4f}  "
              f"{agg.mean_earnings:>8.4f}  {agg.mean_rounds:>6.1f}")
    if args.out:
        print(f"wrote per-kind logs and csv under {args.out}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server.app import ServerConfig, create_app

    server_cfg = ServerConfig.from_args(
        defaults_file=args.defaults,
        archive_dir=args.archive,
        frontend_dir=args.frontend,
    )
    app = create_app(server_cfg)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trustya",
        description="Cooperative betting game: simulate, replay, serve")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a batch described by a spec file")
    p.add_argument("--spec", required=True, help="JSON spec file")
    p.add_argument("--seeds", type=int, default=None,
                   help="override the spec's seed count")
    p.add_argument("--out", default=None, help="directory for logs and csv")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("replay", help="verify an event log reproduces itself")
    p.add_argument("--log", required=True, help="JSON-lines event log")
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("baselines", help="run every bot kind on its own table")
    p.add_argument("--seeds", type=int, default=30)
    p.add_argument("--out", default=None)
    p.add_argument("--overtime", action="store_true",
                   help="use the probabilistic ending instead of a fixed stop")
    p.set_defaults(func=_cmd_baselines)

    p = sub.add_parser("serve", help="run the multiplayer service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8040)
    p.add_argument("--defaults", default=None,
                   help="JSON file with server defaults")
    p.add_argument("--archive", default=None,
                   help="directory for finished session logs")
    p.add_argument("--frontend", default=None,
                   help="static directory to serve at /")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, LogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
