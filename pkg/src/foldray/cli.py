"""
Command line front end.

    foldray run    --scene S --trace T [--out E]      replay a trace
    foldray reach  --scene S [--max-folds K] [--grid G] [--format json|table]
    foldray digest --scene S                          canonical content digest
    foldray serve  --scene S --port P [--ui-dir D]    WebSocket session service

`run` streams the event log (one JSON object per line) to stdout or --out
as it is produced and prints a short summary to stderr. Parse and
validation failures exit nonzero with a message naming the offending
location.
"""

from __future__ import annotations

import argparse
import sys

from .canon import canonical_json, vec3_json
from .folding import ConfigError, FoldConfig
from .reach import reachability_report
from .scene import SceneError, load_scene_file, scene_digest
from .session import (
    SelectionMade,
    TraceError,
    event_json,
    load_trace_file,
    new_session,
)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SceneError, TraceError, ConfigError, OSError) as exc:
        print(f"foldray {args.command}: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="foldray",
        description="fold-point ray selection: trace replay, reachability, serving",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="replay an input trace against a scene")
    run.add_argument("--scene", required=True, help="scene JSON file")
    run.add_argument("--trace", required=True, help="JSON-lines input trace")
    run.add_argument("--out", help="write the event log here instead of stdout")
    run.set_defaults(func=cmd_run)

    reach = sub.add_parser("reach", help="minimum folds needed per target")
    reach.add_argument("--scene", required=True)
    reach.add_argument("--max-folds", type=int, default=8)
    reach.add_argument("--grid", type=float, default=0.25, help="grid step in meters")
    reach.add_argument("--format", choices=("json", "table"), default="json")
    reach.add_argument("--hand", choices=("left", "right"), default="right")
    reach.set_defaults(func=cmd_reach)

    digest = sub.add_parser("digest", help="print the scene's canonical digest")
    digest.add_argument("--scene", required=True)
    digest.set_defaults(func=cmd_digest)

    srv = sub.add_parser("serve", help="expose sessions over a WebSocket")
    srv.add_argument("--scene", required=True)
    srv.add_argument("--port", type=int, default=8765)
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--ui-dir", help="also serve static UI files from this directory")
    srv.set_defaults(func=cmd_serve)

    return parser


def cmd_run(args) -> int:
    scene = load_scene_file(args.scene)
    frames = load_trace_file(args.trace)
    session = new_session(scene)

    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    close_out = args.out is not None
    selections: list[int] = []
    count = 0
    try:
        for frame in frames:
            _, events = session.step(frame)
            for event in events:
                out.write(event_json(event) + "\n")
                out.flush()
                count += 1
                if isinstance(event, SelectionMade):
                    selections.append(event.object_id)
    finally:
        if close_out:
            out.close()
    print(
        f"replayed {len(frames)} frames: {count} events, "
        f"selections {selections}, final fold count {len(session.chain)}",
        file=sys.stderr,
    )
    return 0


def cmd_reach(args) -> int:
    scene = load_scene_file(args.scene)
    entries = reachability_report(
        scene, max_folds=args.max_folds, grid_step=args.grid, hand=args.hand
    )
    if args.format == "json":
        for e in entries:
            print(
                canonical_json(
                    {
                        "target_id": e.target_id,
                        "label": e.label,
                        "min_folds": e.min_folds,
                        "witness": [vec3_json(p) for p in e.witness],
                        "grid_step": e.grid_step,
                        "nodes": e.node_count,
                    }
                )
            )
    else:
        print(f"{'target':>6}  {'min_folds':>9}  {'nodes':>7}  label")
        for e in entries:
            folds = "unreachable" if e.min_folds is None else str(e.min_folds)
            print(f"{e.target_id:>6}  {folds:>9}  {e.node_count:>7}  {e.label}")
    return 0


def cmd_digest(args) -> int:
    print(scene_digest(load_scene_file(args.scene)))
    return 0


def cmd_serve(args) -> int:
    from .server import serve_forever

    scene = load_scene_file(args.scene)
    try:
        serve_forever(scene, host=args.host, port=args.port, ui_dir=args.ui_dir)
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    sys.exit(main())
