"""Construction heuristics: convex-layer merging plus baselines and exact oracles."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .geometry import Layer, LayerDecomposition, LayerKind, convex_layers
from .instance import InstanceError, TspInstance
from .tour import DetourFlag, Tour, cycle_length, improve_tour

BRUTE_FORCE_MAX_N = 10
HELD_KARP_MAX_N = 16


class MergeError(ValueError):
    pass


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class MergePolicy:
    """How ``merge_layers`` picks the outer attachment vertex.

    ``start_choice`` is ``"best"`` (try every outer vertex, keep the shortest
    result), ``"given"`` (use ``start_vertex`` if it is on the outer cycle,
    else the first outer vertex) or ``"random"`` (seeded by ``seed``). With
    the ring completion the inner ring is walked in whichever direction is
    cheaper; the vertexwise completion only uses the start for its first
    attachment.
    """

    start_choice: str = "best"
    start_vertex: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.start_choice not in ("best", "given", "random"):
            raise ValueError(f"unknown start_choice {self.start_choice!r}")


BEST_START = MergePolicy("best")


def _layer_path(inner: Layer | Sequence[int]) -> tuple[list[int], bool]:
    """Inner vertex ids and whether they form an open path (degenerate layer)."""
    if isinstance(inner, Layer):
        return list(inner.vertex_ids), inner.kind is not LayerKind.POLYGON
    ids = list(inner)
    return ids, len(ids) < 3


def _longer_neighbour(cycle: list[int], pos: int, d) -> tuple[int, bool]:
    """(u, after): v's neighbour across its longer edge, and whether u follows v.

    Ties go to the higher-index neighbour.
    """
    m = len(cycle)
    v = cycle[pos]
    if m == 1:
        return v, True
    prv, nxt = cycle[pos - 1], cycle[(pos + 1) % m]
    if (d[v, prv], prv) > (d[v, nxt], nxt):
        return prv, False
    return nxt, True


def _insert_piece(cycle: list[int], pos: int, piece: list[int], after: bool) -> list[int]:
    # piece[0] joins v = cycle[pos]; piece[-1] joins u
    if after:
        return cycle[: pos + 1] + piece + cycle[pos + 1 :]
    return cycle[:pos] + piece[::-1] + cycle[pos:]


def _ring_splice(outer: list[int], pos: int, inner: list[int], is_path: bool, d) -> list[int]:
    v = outer[pos]
    u, after = _longer_neighbour(outer, pos, d)
    if is_path:
        piece = min([inner, inner[::-1]], key=lambda p: d[v, p[0]] + d[p[-1], u])
    else:
        k = min(range(len(inner)), key=lambda i: (d[v, inner[i]], inner[i]))
        ccw = inner[k:] + inner[:k]
        cw = [ccw[0]] + ccw[:0:-1]
        piece = ccw if d[ccw[-1], u] <= d[cw[-1], u] else cw
    return _insert_piece(outer, pos, piece, after)


def _attach(cycle: list[int], pos: int, remaining: list[int], d) -> tuple[list[int], int, float]:
    """Drop v's longer edge (v, u), join v to its nearest remaining inner
    vertex w and w back to u. Returns (new cycle, w, length increase)."""
    v = cycle[pos]
    w = min(remaining, key=lambda c: (d[v, c], c))
    u, after = _longer_neighbour(cycle, pos, d)
    delta = d[v, w] + d[w, u] - (d[v, u] if len(cycle) > 1 else 0.0)
    return _insert_piece(cycle, pos, [w], after), w, float(delta)


def _vertexwise(cycle: list[int], first_pos: int, inner: list[int], d) -> list[int]:
    remaining = list(inner)
    cycle, w, _ = _attach(cycle, first_pos, remaining, d)
    remaining.remove(w)
    while remaining:
        best = None
        for pos in range(len(cycle)):
            cand = _attach(cycle, pos, remaining, d)
            if best is None or cand[2] < best[2]:
                best = cand
        cycle, w, _ = best
        remaining.remove(w)
    return cycle


def merge_layers(
    outer: Sequence[int],
    inner: Layer | Sequence[int],
    inst: TspInstance,
    policy: MergePolicy = BEST_START,
    completion: str = "vertexwise",
) -> list[int]:
    """Merge an inner convex layer into the outer cycle.

    The basic move at an outer vertex v: drop the longer of v's two tour
    edges (v, u) and join v to its nearest inner vertex w.

    ``completion="vertexwise"`` (default) closes each move with the edge
    (w, u), i.e. attaches one inner vertex at a time. The policy picks the
    first v; every later move uses whichever cycle vertex adds the least
    length. ``completion="ring"`` instead walks the whole inner ring from w,
    in the direction whose far end is closer to u, and joins that end to u;
    segment and singleton layers go in as a path in the cheaper orientation.

    With ``start_choice="best"`` every first vertex is tried and the shortest
    merged cycle is kept.
    """
    if completion not in ("vertexwise", "ring"):
        raise ValueError(f"unknown completion {completion!r}")
    outer = list(outer)
    ids, is_path = _layer_path(inner)
    if not ids:
        raise MergeError("inner layer is empty")
    if not outer:
        raise MergeError("outer cycle is empty")
    shared = set(outer) & set(ids)
    if shared:
        raise MergeError(f"outer and inner share cities {sorted(shared)}")
    d = inst.dist

    def run(pos):
        if completion == "ring":
            return _ring_splice(outer, pos, ids, is_path, d)
        return _vertexwise(outer, pos, ids, d)

    if policy.start_choice == "given":
        return run(outer.index(policy.start_vertex) if policy.start_vertex in outer else 0)
    if policy.start_choice == "random":
        return run(random.Random(policy.seed).randrange(len(outer)))

    best, best_len = None, None
    for pos in range(len(outer)):
        cand = run(pos)
        length = cycle_length(cand, d)
        if best_len is None or length < best_len:
            best, best_len = cand, length
    return best


@dataclass(frozen=True)
class SolveReport:
    tour: Tour
    layer_count: int
    layers: LayerDecomposition = field(repr=False)
    lengths: tuple[tuple[str, float], ...]
    flags_used: tuple[DetourFlag, ...] = ()

    @property
    def length(self) -> float:
        return self.tour.length

    def to_dict(self) -> dict:
        return {
            "instance": self.tour.instance.name,
            "length": self.length,
            "layer_count": self.layer_count,
            "layer_sizes": self.layers.sizes(),
            "stages": [{"stage": s, "length": v} for s, v in self.lengths],
            "flags_used": [f._asdict() for f in self.flags_used],
            "order": list(self.tour.order),
        }


def onion_solve(
    inst: TspInstance,
    policy: MergePolicy = BEST_START,
    improve: bool = False,
    completion: str = "vertexwise",
) -> SolveReport:
    """Peel convex layers, merge them outermost-inward, optionally improve.

    Layer 1 is merged with layer 2, that product with layer 3, and so on.
    """
    if inst.n < 1:
        raise InstanceError("cannot solve an empty instance")
    layers = convex_layers(inst.points())
    cycle = list(layers[0].vertex_ids)
    stages = [("layer 1", cycle_length(cycle, inst.dist))]
    for k, layer in enumerate(layers.layers[1:], start=2):
        step = policy
        if policy.start_choice == "random":
            step = MergePolicy("random", seed=policy.seed * 1_000_003 + k)
        cycle = merge_layers(cycle, layer, inst, step, completion)
        stages.append((f"merge 1-{k}", cycle_length(cycle, inst.dist)))
    tour = Tour(cycle, inst)
    flags: tuple[DetourFlag, ...] = ()
    if improve:
        res = improve_tour(tour)
        tour, flags = res.tour, res.flags_used
        stages.append(("improved", tour.length))
    return SolveReport(tour, len(layers), layers, tuple(stages), flags)


# --------------------------------------------------------------------------
# Baselines
# --------------------------------------------------------------------------


def nearest_neighbor_tour(inst: TspInstance, start: int = 0) -> Tour:
    """Greedy nearest-unvisited chain; ties go to the smaller city index."""
    n = inst.n
    if not 0 <= start < n:
        raise IndexError(f"start city {start} out of range for n={n}")
    d = inst.dist
    unvisited = np.ones(n, dtype=bool)
    unvisited[start] = False
    order = [start]
    for _ in range(n - 1):
        row = np.where(unvisited, d[order[-1]], np.inf)
        nxt = int(np.argmin(row))  # argmin returns the first (smallest) index on ties
        unvisited[nxt] = False
        order.append(nxt)
    return Tour(order, inst)


def greedy_edge_tour(inst: TspInstance, tie_break: str = "low") -> Tour:
    """Greedy matching-style construction: accept edges shortest first unless
    they give a city degree 3 or close a cycle early.

    Equal-length edges are taken in ascending ``(i, j)`` order for
    ``tie_break="low"`` and descending for ``"high"``.
    """
    n = inst.n
    if n < 3:
        raise InstanceError("greedy edge tour needs n >= 3")
    if tie_break not in ("low", "high"):
        raise ValueError(f"unknown tie_break {tie_break!r}")
    d = inst.dist
    iu, ju = np.triu_indices(n, 1)
    sign = 1 if tie_break == "low" else -1
    idx = np.lexsort((sign * ju, sign * iu, d[iu, ju]))

    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    deg = [0] * n
    adj: list[list[int]] = [[] for _ in range(n)]
    accepted = 0
    for k in idx:
        i, j = int(iu[k]), int(ju[k])
        if deg[i] == 2 or deg[j] == 2:
            continue
        ri, rj = find(i), find(j)
        if ri == rj and accepted < n - 1:
            continue
        parent[ri] = rj
        deg[i] += 1
        deg[j] += 1
        adj[i].append(j)
        adj[j].append(i)
        accepted += 1
        if accepted == n:
            break

    order = [0]
    prev = None
    while len(order) < n:
        cur = order[-1]
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        prev = cur
        order.append(nxt)
    return Tour(order, inst)


def farthest_insertion_tour(inst: TspInstance, start: Optional[int] = None) -> Tour:
    """Farthest insertion.

    Starts from the two mutually farthest cities (``start=None``) or from the
    single city ``start``. Each step takes the unvisited city whose distance
    to the partial tour is largest and inserts it where the length grows
    least. Ties go to the smaller city index / earlier tour position.
    """
    n = inst.n
    if n < 3:
        raise InstanceError("farthest insertion needs n >= 3")
    d = inst.dist
    if start is None:
        iu, ju = np.triu_indices(n, 1)
        k = int(np.argmax(d[iu, ju]))
        order = [int(iu[k]), int(ju[k])]
    else:
        if not 0 <= start < n:
            raise IndexError(f"start city {start} out of range for n={n}")
        order = [start]
    in_tour = np.zeros(n, dtype=bool)
    in_tour[order] = True
    near = d[order].min(axis=0)
    while len(order) < n:
        cand = np.where(in_tour, -np.inf, near)
        c = int(np.argmax(cand))
        m = len(order)
        if m == 1:
            order.append(c)
        else:
            a = np.array(order)
            b = np.roll(a, -1)
            cost = d[a, c] + d[c, b] - d[a, b]
            p = int(np.argmin(cost))
            order.insert(p + 1, c)
        in_tour[c] = True
        near = np.minimum(near, d[c])
    return Tour(order, inst)


# --------------------------------------------------------------------------
# Exact oracles
# --------------------------------------------------------------------------


def brute_force_optimal(inst: TspInstance) -> Tour:
    """Enumerate the (n-1)!/2 distinct cycles through city 0."""
    n = inst.n
    if n > BRUTE_FORCE_MAX_N:
        raise OracleSizeError(f"brute force limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    if n <= 3:
        return Tour(range(n), inst)
    d = inst.dist.tolist()
    best, best_len = None, float("inf")
    for perm in itertools.permutations(range(1, n)):
        if perm[0] > perm[-1]:
            continue
        length = d[0][perm[0]] + d[perm[-1]][0]
        for a, b in zip(perm, perm[1:]):
            length += d[a][b]
        if length < best_len:
            best, best_len = perm, length
    return Tour((0,) + best, inst)


def held_karp_optimal(inst: TspInstance) -> Tour:
    """Subset dynamic programming (Held-Karp), vectorised over subsets of
    equal size. City 0 is the fixed origin; bit k of a mask is city k + 1."""
    n = inst.n
    if n > HELD_KARP_MAX_N:
        raise OracleSizeError(f"Held-Karp limited to n <= {HELD_KARP_MAX_N}, got {n}")
    if n <= 3:
        return Tour(range(n), inst)
    d = np.asarray(inst.dist)
    m = n - 1
    full = 1 << m
    cost = np.full((full, m), np.inf)
    parent = np.full((full, m), -1, dtype=np.int64)
    for k in range(m):
        cost[1 << k, k] = d[0, k + 1]
    masks = np.arange(full)
    popcount = np.array([bin(x).count("1") for x in range(full)])
    inner = d[1:, 1:]
    for size in range(2, m + 1):
        group = masks[popcount == size]
        for j in range(m):
            sel = group[(group >> j) & 1 == 1]
            prev = sel ^ (1 << j)
            cand = cost[prev] + inner[:, j][None, :]
            best = np.argmin(cand, axis=1)
            cost[sel, j] = cand[np.arange(len(sel)), best]
            parent[sel, j] = best
    last = full - 1
    totals = cost[last] + d[1:, 0]
    j = int(np.argmin(totals))
    path = []
    mask = last
    while j >= 0:
        path.append(j + 1)
        pj = int(parent[mask, j])
        mask ^= 1 << j
        j = pj
    return Tour([0] + path[::-1], inst)
