import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from onionpeel.heuristics import brute_force_optimal, onion_solve
from onionpeel.instance import (
    InvalidTourError,
    MetricKind,
    NoGeometryError,
    TspInstance,
    parse_opt_tour,
    random_uniform_instance,
)
from onionpeel.tour import (
    Tour,
    canonical_order,
    cycle_length,
    detour_flags,
    find_crossings,
    improve_tour,
    or_opt_improve,
    tour_area,
    tour_from_json,
    two_opt_improve,
)

from conftest import euclid

PERIMETER = [0, 1, 2, 3]
BOWTIE = [0, 1, 3, 2]


def test_canonical_form():
    assert canonical_order([2, 3, 0, 1]) == (0, 1, 2, 3)
    assert canonical_order([0, 3, 2, 1]) == (0, 1, 2, 3)
    assert canonical_order([1, 0]) == (0, 1)


def test_tour_rejects_non_permutation(square):
    with pytest.raises(InvalidTourError):
        Tour([0, 1, 1, 2], square)
    with pytest.raises(InvalidTourError):
        Tour([0, 1, 2], square)


def test_same_cycle_compares_equal(square):
    assert Tour([1, 2, 3, 0], square) == Tour([3, 2, 1, 0], square)


def test_length_examples(square, dantzig_opt):
    assert Tour(PERIMETER, square).length == 4.0
    assert dantzig_opt.length == 699


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 12), st.integers(0, 1000), st.integers(0, 11))
def test_length_rotation_reversal(n, seed, shift):
    inst = random_uniform_instance(n, seed)
    order = list(np.random.default_rng(seed).permutation(n))
    k = shift % n
    rotated = order[k:] + order[:k]
    base = cycle_length(order, inst.dist)
    assert cycle_length(rotated, inst.dist) == pytest.approx(base)
    assert cycle_length(order[::-1], inst.dist) == pytest.approx(base)


def test_detour_flag_examples():
    line = euclid([(0, 0), (1, 0), (2, 0), (1, 5)])
    flags = {f.middle: f for f in detour_flags(Tour([0, 1, 2, 3], line), None)}
    assert flags[1].ratio == 1.0

    h = math.sqrt(3) / 2
    tri = euclid([(0, 0), (1, 0), (0.5, h), (0.5, -3)])
    flags = {f.middle: f for f in detour_flags(Tour([0, 2, 1, 3], tri), None)}
    assert flags[2].ratio == pytest.approx(2.0)


def test_detour_zero_direct_distance():
    m = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    inst = TspInstance("z", 3, MetricKind.EXPLICIT, matrix=m)
    assert all(f.ratio == 1.0 for f in detour_flags(Tour([0, 1, 2], inst), None) if f.middle == 1)


def test_detour_flags_sorted_and_bounded():
    inst = random_uniform_instance(25, 4)
    order = list(np.random.default_rng(4).permutation(25))
    flags = detour_flags(Tour(order, inst), None)
    assert len(flags) == 25
    assert all(f.ratio >= 1 - 1e-12 for f in flags)
    keys = [(-f.ratio, f.middle) for f in flags]
    assert keys == sorted(keys)
    assert detour_flags(Tour(order, inst), 3) == flags[:3]


def test_dantzig_merged_tour_flags(dantzig):
    flags = detour_flags(onion_solve(dantzig).tour, 5)
    # frozen from the first run on the bundled data
    assert [f.middle for f in flags] == [41, 35, 16, 32, 24]
    assert flags[0].ratio == pytest.approx(11 / 3)


def test_crossings(square):
    assert find_crossings(Tour(BOWTIE, square)) == [(1, 3)]
    assert find_crossings(Tour(PERIMETER, square)) == []


def test_convex_hull_tour_has_no_crossings():
    theta = np.linspace(0, 2 * math.pi, 11)[:-1]
    inst = euclid(np.column_stack([np.cos(theta), np.sin(theta)]))
    assert find_crossings(Tour(range(10), inst)) == []


def test_no_geometry_error():
    inst = TspInstance("m", 3, MetricKind.EXPLICIT, matrix=np.ones((3, 3)) - np.eye(3))
    with pytest.raises(NoGeometryError):
        find_crossings(Tour([0, 1, 2], inst))
    with pytest.raises(NoGeometryError):
        tour_area(Tour([0, 1, 2], inst))


def test_area_examples(square):
    per = tour_area(Tour(PERIMETER, square))
    bow = tour_area(Tour(BOWTIE, square))
    assert per.absolute == 1.0 and per.crossings == 0
    assert bow.signed == 0.0 and bow.crossings == 1
    # the shorter tour encloses more area
    assert Tour(PERIMETER, square).length == 4.0
    assert Tour(BOWTIE, square).length == pytest.approx(2 + 2 * math.sqrt(2))
    assert per.absolute > bow.absolute


def test_two_opt_uncrosses_bowtie(square):
    out = two_opt_improve(Tour(BOWTIE, square))
    assert out.order == (0, 1, 2, 3)
    assert out.length == 4.0


def test_two_opt_fixed_point(square):
    t = Tour(PERIMETER, square)
    assert two_opt_improve(t) == t


def test_two_opt_not_below_optimum():
    for seed in range(10):
        inst = random_uniform_instance(8, seed)
        opt = brute_force_optimal(inst).length
        start = Tour(np.random.default_rng(seed).permutation(8), inst)
        assert two_opt_improve(start).length >= opt - 1e-9


def test_two_opt_flagged_mode_never_worse():
    inst = random_uniform_instance(30, 11)
    start = Tour(np.random.default_rng(11).permutation(30), inst)
    out = two_opt_improve(start, "flagged", top_k=3, radius=2)
    assert out.length <= start.length


HEX = [(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3)) for k in range(6)]


def test_or_opt_relocates_misplaced_city():
    inst = euclid(HEX)
    # city 1 sits between 3 and 4 instead of between 0 and 2
    bad = Tour([0, 2, 3, 1, 4, 5], inst)
    opt = brute_force_optimal(inst)
    out = or_opt_improve(bad, {1})
    assert out.length == pytest.approx(opt.length)
    assert out == opt


def test_or_opt_keeps_optimal():
    for seed in range(8):
        inst = random_uniform_instance(8, seed)
        opt = brute_force_optimal(inst)
        assert or_opt_improve(opt) == opt


def test_or_opt_empty_set_is_identity():
    inst = random_uniform_instance(9, 2)
    t = Tour(np.random.default_rng(2).permutation(9), inst)
    assert or_opt_improve(t, set()) is t


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 25), st.integers(0, 10_000))
def test_local_search_never_increases(n, seed):
    inst = random_uniform_instance(n, seed)
    t = Tour(np.random.default_rng(seed).permutation(n), inst)
    assert two_opt_improve(t).length <= t.length
    assert or_opt_improve(t).length <= t.length
    res = improve_tour(t)
    assert res.tour.length <= t.length
    assert res.lengths[0] == t.length


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 25), st.integers(0, 10_000))
def test_full_two_opt_removes_crossings(n, seed):
    inst = random_uniform_instance(n, seed)
    t = Tour(np.random.default_rng(seed).permutation(n), inst)
    assert find_crossings(two_opt_improve(t)) == []


def test_serialization_round_trip(dantzig_opt):
    data = json.loads(dantzig_opt.to_json())
    assert data["name"] == "dantzig42" and data["length"] == 699
    assert tour_from_json(dantzig_opt.to_json(), dantzig_opt.instance) == dantzig_opt
    assert parse_opt_tour(dantzig_opt.to_tsplib(), dantzig_opt.instance) == dantzig_opt
