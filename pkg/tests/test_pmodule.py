import json
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gpdgrid import linalg
from gpdgrid.bifiltration import Bifiltration
from gpdgrid.constructions import blowup_D, blowup_U, blowup_dims, filtration_F
from gpdgrid.grid import (Grid2, contains, cover_set, enumerate_intervals, interval_from_points,
                          max_zz, min_zz)
from gpdgrid.homology import SimplicialComplex
from gpdgrid.inversion import Barcode, barcode_module
from gpdgrid.pmodule import (GridModule, colimit_brute, colimit_over, generalized_rank, gri,
                             limit_brute, limit_over, module_from_bifiltration, restrict)

from oracles import random_bifiltration, random_interval, random_module, scrambled

G2 = Grid2(2, 2)
INT2 = enumerate_intervals(G2)
seeds = st.integers(0, 100_000)


def test_zero_dimensional_spaces_and_missing_arrows():
    M = GridModule((2, 2), [[1, 1], [0, 1]], {((0, 0), 1): [[1]]})
    assert M.dim((1, 0)) == 0
    assert M.map((0, 0), (1, 1)).shape == (1, 1)
    assert not M.map((0, 0), (1, 1)).any()
    assert M.map((0, 0), (0, 1)).tolist() == [[1]]
    assert M.check_commutative()


def test_map_rejects_incomparable_points():
    M = barcode_module(Barcode.from_list(Grid2(1, 1), [Grid2(1, 1).full()]))
    with pytest.raises(ValueError):
        M.map((0, 1), (1, 0))


def test_noncommuting_square_is_detected():
    arrows = {((0, 0), 0): [[1]], ((0, 0), 1): [[1]], ((1, 0), 1): [[1]], ((0, 1), 0): [[0]]}
    M = GridModule((2, 2), np.ones((2, 2), dtype=int), arrows, 3)
    assert not M.check_commutative()


def test_rejects_composite_field():
    with pytest.raises(ValueError):
        GridModule((1, 1), [[1]], {}, 6)


@given(seeds, st.sampled_from([2, 3]))
def test_random_modules_commute(seed, p):
    M = random_module(random.Random(seed), G2, p)
    assert M.check_commutative()


@given(seeds, st.sampled_from([2, 3]))
def test_fence_cones_agree_with_all_point_cones(seed, p):
    M = random_module(random.Random(seed), G2, p)
    for I in INT2:
        R = restrict(M, I)
        assert limit_over(R, min_zz(I)).dimension == limit_brute(R, I.points).dimension
        assert colimit_over(R, max_zz(I)).dimension == colimit_brute(R, I.points).dimension
        fence = generalized_rank(M, I, check=True)
        assert fence == generalized_rank(M, I, method="brute")
        assert fence == generalized_rank(M, I.points)


@given(seeds)
def test_rank_is_monotone_under_inclusion(seed):
    M = random_module(random.Random(seed), G2)
    rk = gri(M)
    for I in INT2:
        for J in cover_set(I, G2):
            assert rk[J] <= rk[I]


@given(seeds)
def test_rank_of_point_is_dimension_and_rank_of_segment_is_map_rank(seed):
    M = random_module(random.Random(seed), G2)
    for pt in G2.points():
        assert generalized_rank(M, interval_from_points([pt])) == M.dim(pt)
    a, b = (0, 1), (2, 2)
    seg = interval_from_points([(x, y) for x in range(3) for y in range(1, 3)])
    assert generalized_rank(M, seg) == linalg.rank(M.map(a, b), M.p)


@given(seeds)
def test_change_of_basis_keeps_ranks(seed):
    rng = random.Random(seed)
    M = random_module(rng, G2, 3)
    assert gri(M).entries == gri(scrambled(M, rng)).entries


@given(seeds)
def test_nested_restriction_is_restriction_to_intersection(seed):
    rng = random.Random(seed)
    M = random_module(rng, G2)
    I, J = random_interval(rng, G2), random_interval(rng, G2)
    twice = restrict(restrict(M, I), J)
    assert twice.support == I.points & J.points
    for pt in G2.points():
        assert twice.dim(pt) == (M.dim(pt) if pt in I.points & J.points else 0)


def test_restrict_rejects_points_outside():
    M = barcode_module(Barcode.from_list(G2, []))
    with pytest.raises(ValueError):
        restrict(M, [(3, 0)])


def test_interval_module_has_rank_one_exactly_inside():
    I = interval_from_points([(0, 0), (1, 0), (2, 0), (0, 1), (1, 1)])
    M = barcode_module(Barcode.from_list(G2, [I]))
    rk = gri(M)
    for J in INT2:
        assert rk[J] == (1 if contains(I, J) else 0)


def test_zero_module_has_empty_rank_function():
    M = GridModule((3, 3), np.zeros((3, 3), dtype=int))
    assert gri(M).support_size() == 0


def test_constant_complex_gives_identity_arrows():
    K = SimplicialComplex([(0, 1), (1, 2), (0, 2), (3,)])
    bf = Bifiltration(K, {s: ((0, 0),) for s in K}, (3, 2))
    for m, b in ((0, 2), (1, 1)):
        M = module_from_bifiltration(bf, m, 3)
        assert (M.dims == b).all()
        for A in M.arrows.values():
            assert np.array_equal(A, linalg.eye(b))
        assert gri(M)[Grid2(2, 1).full()] == b


def test_non_monotone_bifiltration_is_rejected():
    K = SimplicialComplex([(0, 1)])
    births = {(0,): ((1, 1),), (1,): ((0, 0),), (0, 1): ((0, 0),)}
    with pytest.raises(ValueError):
        module_from_bifiltration(Bifiltration(K, births, (2, 2)), 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_blowup_module_dimensions_and_injective_arrows(n):
    M = module_from_bifiltration(filtration_F(n), 0)
    assert np.array_equal(M.dims, blowup_dims(n, "F"))
    for i in range(n + 1):
        src = (i, n - i)
        for q in ((i + 1, n - i), (i, n - i + 1)):
            if q in M and M.dim(q) == n + 1:
                assert linalg.rank(M.map(src, q), 2) == n


@pytest.mark.parametrize("n", [2, 3])
def test_blowup_limit_over_antidiagonal_vanishes(n):
    M = module_from_bifiltration(filtration_F(n), 0)
    D = blowup_D(n)
    assert limit_brute(restrict(M, D), D.points).dimension == 0
    assert generalized_rank(M, blowup_U(n), check=True) == 0


@given(seeds)
def test_random_bifiltration_modules_are_functorial(seed):
    bf = random_bifiltration(random.Random(seed), (3, 3))
    M = module_from_bifiltration(bf, 1, 3)
    assert M.check_commutative()
    # composite along any monotone path equals the direct induced map
    assert np.array_equal(M.map((0, 0), (2, 2)),
                          linalg.matmul(M.map((1, 2), (2, 2)), M.map((0, 0), (1, 2)), 3))


@given(seeds)
def test_json_roundtrip(seed):
    M = random_module(random.Random(seed), G2, 3)
    back = GridModule.from_json(json.loads(json.dumps(M.to_json())))
    assert back.p == M.p and np.array_equal(back.dims, M.dims)
    for key, A in M.arrows.items():
        assert np.array_equal(back.arrows[key], A)


def test_threads_give_identical_results():
    M = module_from_bifiltration(filtration_F(3), 0)
    one = gri(M)
    assert gri(M, threads=3).entries == one.entries
    assert gri(M, threads=8).entries == one.entries


def test_sub_box_reindexes():
    M = module_from_bifiltration(filtration_F(3), 0)
    S = M.sub_box((1, 1), (3, 2))
    assert S.shape == (3, 2)
    assert S.dim((0, 0)) == M.dim((1, 1))
    assert np.array_equal(S.map((0, 0), (2, 1)), M.map((1, 1), (3, 2)))
