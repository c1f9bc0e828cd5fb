"""Heuristic comparison tables and the layer-count vs. optimality-gap experiment."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .geometry import convex_layers
from .heuristics import (
    HELD_KARP_MAX_N,
    OracleSizeError,
    farthest_insertion_tour,
    greedy_edge_tour,
    held_karp_optimal,
    nearest_neighbor_tour,
    onion_solve,
)
from .instance import TspInstance, random_convex_instance, random_uniform_instance
from .tour import Tour, cycle_length


@dataclass(frozen=True)
class BenchRecord:
    instance: str
    heuristic: str
    length: float
    gap_percent: Optional[float]
    reference: Optional[float]
    wall_time_s: float
    layer_count: Optional[int]

    def to_json(self) -> str:
        return json.dumps(
            {
                "instance": self.instance,
                "heuristic": self.heuristic,
                "length": self.length,
                "gap_percent": self.gap_percent,
                "wall_time_s": self.wall_time_s,
                "layer_count": self.layer_count,
            }
        )


def gap_percent(length: float, reference: float) -> float:
    if reference == 0:
        return 0.0 if length == 0 else float("inf")
    return 100.0 * (length - reference) / reference


def _revalidated_length(tour: Tour) -> float:
    # rebuild from the raw order so the permutation check runs again
    t = Tour(list(tour.order), tour.instance)
    return cycle_length(t.order, t.instance.dist)


def _timed(fn: Callable[[], Tour]) -> tuple[Tour, float]:
    t0 = time.perf_counter()
    tour = fn()
    return tour, time.perf_counter() - t0


def run_comparison(
    inst: TspInstance,
    reference: Optional[Tour] = None,
    reference_start: int = 0,
) -> list[BenchRecord]:
    """Run every construction heuristic on ``inst``; rows sorted by length.

    ``reference_start`` is the fixed nearest-neighbour start reported next to
    the best-over-all-starts row.
    """
    ref_len = _revalidated_length(reference) if reference is not None else None
    layer_count = len(convex_layers(inst.points())) if inst.has_geometry and inst.n else None

    def best_nn():
        return min(
            (nearest_neighbor_tour(inst, s) for s in range(inst.n)),
            key=lambda t: t.length,
        )

    runs: list[tuple[str, Callable[[], Tour]]] = [
        ("nearest-neighbor (best start)", best_nn),
        (f"nearest-neighbor (start {reference_start})", lambda: nearest_neighbor_tour(inst, reference_start)),
    ]
    if inst.n >= 3:
        runs += [
            ("greedy-edge", lambda: greedy_edge_tour(inst)),
            ("farthest-insertion", lambda: farthest_insertion_tour(inst)),
        ]
    else:
        runs += [
            ("greedy-edge", lambda: Tour(range(inst.n), inst)),
            ("farthest-insertion", lambda: Tour(range(inst.n), inst)),
        ]
    if inst.has_geometry:
        runs += [
            ("onion", lambda: onion_solve(inst).tour),
            ("onion+improve", lambda: onion_solve(inst, improve=True).tour),
        ]

    records = []
    for name, fn in runs:
        tour, wall = _timed(fn)
        length = _revalidated_length(tour)
        records.append(
            BenchRecord(
                instance=inst.name,
                heuristic=name,
                length=length,
                gap_percent=gap_percent(length, ref_len) if ref_len is not None else None,
                reference=ref_len,
                wall_time_s=wall,
                layer_count=layer_count,
            )
        )
    records.sort(key=lambda r: r.length)
    return records


@dataclass(frozen=True)
class GapRow:
    layer_count: int
    mean_gap: float
    max_gap: float
    trials: int


@dataclass(frozen=True)
class GapExperiment:
    records: tuple[BenchRecord, ...]
    table: tuple[GapRow, ...]


def _instance_seed(seed: int, n: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, n, trial]).generate_state(1)[0])


def layers_gap_experiment(
    sizes: Sequence[int],
    trials: int,
    seed: int,
    kind: str = "uniform",
) -> GapExperiment:
    """Exact optimality gap of the unimproved onion tour, grouped by layer count.

    Each trial draws a fresh instance (``kind`` is ``"uniform"`` or
    ``"convex"``), counts its convex layers and compares the merged tour to
    the Held-Karp optimum. The table only reports the growth; it makes no
    claim about its shape.
    """
    sizes = list(sizes)
    too_big = [n for n in sizes if n > HELD_KARP_MAX_N]
    if too_big:
        raise OracleSizeError(
            f"sizes {too_big} exceed the exact-oracle limit n <= {HELD_KARP_MAX_N}"
        )
    make = {"uniform": random_uniform_instance, "convex": random_convex_instance}[kind]

    records = []
    for n in sizes:
        for trial in range(trials):
            inst = make(n, _instance_seed(seed, n, trial))
            t0 = time.perf_counter()
            report = onion_solve(inst)
            wall = time.perf_counter() - t0
            opt = _revalidated_length(held_karp_optimal(inst))
            length = _revalidated_length(report.tour)
            # equal-length optima can differ in the last ulp
            gap = 0.0 if abs(length - opt) <= 1e-9 * max(1.0, opt) else gap_percent(length, opt)
            records.append(
                BenchRecord(
                    instance=inst.name,
                    heuristic="onion",
                    length=length,
                    gap_percent=gap,
                    reference=opt,
                    wall_time_s=wall,
                    layer_count=report.layer_count,
                )
            )

    groups: dict[int, list[float]] = {}
    for r in records:
        groups.setdefault(r.layer_count, []).append(r.gap_percent)
    table = tuple(
        GapRow(k, float(np.mean(g)), float(np.max(g)), len(g)) for k, g in sorted(groups.items())
    )
    return GapExperiment(tuple(records), table)


def format_records(records: Iterable[BenchRecord]) -> str:
    rows = [("heuristic", "length", "gap %", "time s", "layers")]
    for r in records:
        rows.append(
            (
                r.heuristic,
                f"{r.length:g}",
                "-" if r.gap_percent is None else f"{r.gap_percent:.2f}",
                f"{r.wall_time_s:.4f}",
                "-" if r.layer_count is None else str(r.layer_count),
            )
        )
    return _align(rows)


def format_gap_table(table: Iterable[GapRow]) -> str:
    rows = [("layers", "trials", "mean gap %", "max gap %")]
    rows += [(str(r.layer_count), str(r.trials), f"{r.mean_gap:.3f}", f"{r.max_gap:.3f}") for r in table]
    return _align(rows)


def _align(rows: list[tuple[str, ...]]) -> str:
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    out = []
    for r in rows:
        cells = [r[0].ljust(widths[0])] + [v.rjust(w) for v, w in zip(r[1:], widths[1:])]
        out.append("  ".join(cells).rstrip())
    return "\n".join(out)
