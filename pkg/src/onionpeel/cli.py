"""Command line: ``onionpeel {solve,layers,compare,bench,render}``.

Exit status is 0 on success, 1 for input errors (unreadable or malformed
files, bad arguments) and 2 for domain errors (nothing to solve, no
coordinates to draw).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import format_gap_table, format_records, layers_gap_experiment, run_comparison
from .geometry import GeometryError, convex_layers
from .heuristics import MergePolicy, OracleSizeError, onion_solve
from .instance import InstanceError, NoGeometryError, TspInstance, read_tsplib, parse_tour_order
from .render import RenderSpec, render_svg
from .tour import Tour, tour_from_json


class DomainError(Exception):
    pass


def _load(path: str) -> TspInstance:
    inst = read_tsplib(path)
    if inst.n == 0:
        raise DomainError(f"{path}: instance has no cities")
    return inst


def _load_tour(path: str, inst: TspInstance) -> Tour:
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".json"):
        return tour_from_json(text, inst)
    return Tour(parse_tour_order(text, inst.n), inst)


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _policy(args) -> MergePolicy:
    if args.policy == "best-start":
        return MergePolicy("best")
    if args.policy == "random":
        return MergePolicy("random", seed=args.seed)
    return MergePolicy("given", start_vertex=args.start)


def cmd_solve(args) -> int:
    inst = _load(args.instance)
    report = onion_solve(inst, _policy(args), improve=args.improve, completion=args.completion)
    if args.output:
        as_json = args.json or args.output.endswith(".json")
        tour_text = report.tour.to_json() + "\n" if as_json else report.tour.to_tsplib()
        Path(args.output).write_text(tour_text, encoding="utf-8")
    if args.json:
        print(json.dumps(report.to_dict()))
    else:
        print(f"instance: {inst.name} (n={inst.n})")
        print(f"layers: {report.layer_count} {report.layers.sizes()}")
        for stage, length in report.lengths:
            print(f"  {stage}: {length:g}")
        print(f"length: {report.length:g}")
    return 0


def cmd_layers(args) -> int:
    inst = _load(args.instance)
    layers = convex_layers(inst.points())
    if args.json:
        rows = [
            {"layer": k, "kind": l.kind.value, "cities": [c + 1 for c in l.vertex_ids]}
            for k, l in enumerate(layers, start=1)
        ]
        _emit(args, json.dumps({"instance": inst.name, "layers": rows}) + "\n")
        return 0
    lines = [f"{inst.name}: {len(layers)} layers"]
    for k, layer in enumerate(layers, start=1):
        cities = " ".join(str(c + 1) for c in layer.vertex_ids)
        lines.append(f"layer {k}: {len(layer)} points; {layer.kind.value}: {cities}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_compare(args) -> int:
    inst = _load(args.instance)
    reference = _load_tour(args.opt_tour, inst) if args.opt_tour else None
    records = run_comparison(inst, reference, reference_start=args.start)
    if args.json:
        _emit(args, "".join(r.to_json() + "\n" for r in records))
    else:
        _emit(args, format_records(records) + "\n")
    return 0


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise InstanceError(f"bad --sizes {args.sizes!r}") from None
    exp = layers_gap_experiment(sizes, args.trials, args.seed, kind="convex" if args.convex else "uniform")
    if args.summary:
        _emit(args, format_gap_table(exp.table) + "\n")
    else:
        _emit(args, "".join(r.to_json() + "\n" for r in exp.records))
    return 0


def cmd_render(args) -> int:
    inst = _load(args.instance)
    tour = None
    if args.tour:
        tour = _load_tour(args.tour, inst)
    elif args.solve:
        tour = onion_solve(inst, _policy(args), improve=args.improve).tour
    spec = RenderSpec(
        width=args.width,
        height=args.height,
        show_layers=not args.no_layers,
        show_labels=args.labels,
        flag_count=args.flags,
    )
    _emit(args, render_svg(inst, tour, spec))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--output", "-o", help="write the main result to this file")

    merge = argparse.ArgumentParser(add_help=False)
    merge.add_argument("--policy", choices=("best-start", "random", "given"), default="best-start")
    merge.add_argument("--start", type=int, default=0, help="start city (0-based) for --policy given")
    merge.add_argument("--improve", action="store_true", help="run the flagged 2-opt / Or-opt pass")

    p = argparse.ArgumentParser(prog="onionpeel", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common, merge], help="convex-layer merge tour")
    s.add_argument("instance")
    s.add_argument("--completion", choices=("vertexwise", "ring"), default="vertexwise")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("layers", parents=[common], help="list convex layers")
    s.add_argument("instance")
    s.set_defaults(func=cmd_layers)

    s = sub.add_parser("compare", parents=[common], help="compare construction heuristics")
    s.add_argument("instance")
    s.add_argument("--opt-tour", help="reference tour for gap columns")
    s.add_argument("--start", type=int, default=0, help="fixed nearest-neighbour start (0-based)")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("bench", parents=[common], help="layer count vs. gap experiment")
    s.add_argument("--sizes", default="8,10,12,14")
    s.add_argument("--trials", type=int, default=50)
    s.add_argument("--convex", action="store_true", help="use points in convex position")
    s.add_argument("--summary", action="store_true", help="aggregate table instead of JSON lines")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("render", parents=[common, merge], help="draw layers and a tour as SVG")
    s.add_argument("instance")
    s.add_argument("--tour", help="tour file (TSPLIB TOUR or .json)")
    s.add_argument("--solve", action="store_true", help="draw the merged tour")
    s.add_argument("--flags", type=int, default=5, help="number of detour flags to circle")
    s.add_argument("--labels", action="store_true")
    s.add_argument("--no-layers", action="store_true")
    s.add_argument("--width", type=int, default=800)
    s.add_argument("--height", type=int, default=600)
    s.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, NoGeometryError) as e:
        print(f"onionpeel: {e}", file=sys.stderr)
        return 2
    except (OSError, InstanceError, GeometryError, OracleSizeError, ValueError) as e:
        print(f"onionpeel: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
