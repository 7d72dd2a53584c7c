import io
import csv
import json
import random

import pytest
from hypothesis import given, strategies as st

from gpdgrid.diagram import Diagram
from gpdgrid.grid import (Grid2, contains, enumerate_intervals, interval_from_points, leq,
                          rectangle)
from gpdgrid.inversion import (Barcode, barcode_module, check_monotone, check_roundtrip,
                               gpd_cover, gpd_direct, gpd_from_gri, is_galois_connection,
                               interval_poset_at, mobius_function, mobius_inversion,
                               projection_to, pullback, pushforward, restrict_diagram,
                               restrict_module, rota_holds, superset_leq, superset_sums,
                               support_contained, verify_barcode)
from gpdgrid.pmodule import gri

from oracles import random_barcode, random_interval, random_module, zeta_solve

G1, G2 = Grid2(1, 1), Grid2(2, 2)
INT2 = enumerate_intervals(G2)
seeds = st.integers(0, 100_000)


def test_empty_rank_gives_empty_diagram():
    assert gpd_from_gri(Diagram(G2)).support_size() == 0


def test_single_interval_inverts_to_itself():
    I = interval_from_points([(0, 0), (0, 1), (1, 0)])
    rk = Diagram(G1, {J: 1 for J in enumerate_intervals(G1) if contains(I, J)})
    assert gpd_from_gri(rk).entries == {I: 1}


def test_doubled_interval_has_multiplicity_two():
    I = rectangle(0, 1, 1, 2)
    b = Barcode.from_list(G2, [I, I])
    dgm = gpd_from_gri(gri(barcode_module(b)))
    assert dgm.entries == {I: 2}
    assert verify_barcode(dgm, b)


def test_barcode_rejects_bad_input():
    with pytest.raises(ValueError):
        Barcode(G1, {G1.full(): 0})
    with pytest.raises(ValueError):
        Barcode(G1, {G2.full(): 1})


@given(seeds, st.sampled_from([2, 3]))
def test_superset_recursion_matches_dense_zeta_solve(seed, p):
    rk = gri(random_module(random.Random(seed), G2, p))
    assert gpd_from_gri(rk).entries == zeta_solve(G2, INT2, rk)


@given(seeds)
def test_cover_subsets_match_recursion(seed):
    M = random_module(random.Random(seed), G2)
    rk = gri(M)
    dgm = gpd_from_gri(rk)
    assert gpd_cover(rk).entries == dgm.entries
    rng = random.Random(seed + 1)
    for I in rng.sample(INT2, 5):
        res = gpd_direct(M, I)
        assert res.value == dgm[I]
        assert res.nonzero_terms <= res.total_terms


@given(seeds)
def test_generic_poset_inversion_matches(seed):
    rk = gri(random_module(random.Random(seed), G1))
    Is = enumerate_intervals(G1)
    g = mobius_inversion(Is, superset_leq, rk.entries)
    assert {I: v for I, v in g.items() if v} == gpd_from_gri(rk).entries


def test_mobius_function_on_a_chain_and_boolean_lattice():
    mu = mobius_function(range(4), lambda a, b: a <= b)
    assert mu[(0, 0)] == 1 and mu[(0, 1)] == -1 and mu[(0, 2)] == 0
    subsets = [frozenset(s) for s in ([], [0], [1], [0, 1])]
    mu = mobius_function(subsets, lambda a, b: a <= b)
    assert mu[(subsets[0], subsets[3])] == 1


@given(seeds)
def test_roundtrip_and_support(seed):
    rk = gri(random_module(random.Random(seed), G2))
    dgm = gpd_from_gri(rk)
    assert check_roundtrip(rk, dgm)
    assert check_monotone(rk)
    assert support_contained(dgm, rk)
    assert superset_sums(dgm) == {I: rk[I] for I in INT2}


def test_non_monotone_rank_is_flagged():
    I = interval_from_points([(0, 0)])
    assert not check_monotone(Diagram(G1, {G1.full(): 1}))
    assert check_monotone(Diagram(G1, {I: 1}))


@given(seeds)
def test_barcode_modules_recover_their_barcode(seed):
    rng = random.Random(seed)
    b = random_barcode(rng, G2, max_bars=5)
    M = barcode_module(b, rng.choice([2, 3]))
    dgm = gpd_from_gri(gri(M))
    assert verify_barcode(dgm, b)
    assert all(v > 0 for v in dgm.entries.values())


RECTS = [I for I in INT2 if I.is_rectangle()]


@given(seeds)
def test_restricted_diagram_matches_direct_computation(seed):
    rng = random.Random(seed)
    M = random_module(rng, G2)
    dgm = gpd_from_gri(gri(M))
    for R in rng.sample(RECTS, 6):
        direct = gpd_from_gri(gri(restrict_module(M, R)))
        assert restrict_diagram(dgm, R) == direct


def test_restriction_to_full_grid_is_identity():
    M = random_module(random.Random(3), G2)
    dgm = gpd_from_gri(gri(M))
    assert restrict_diagram(dgm, G2.full()) == dgm


def test_restriction_needs_a_rectangle():
    hook = interval_from_points([(0, 0), (0, 1), (1, 0)])
    with pytest.raises(ValueError):
        restrict_diagram(Diagram(G1), hook)
    with pytest.raises(ValueError):
        restrict_module(barcode_module(Barcode(G1)), hook)


def test_pushforward_and_pullback():
    h = {1: 2, 2: -2, 3: 5}
    assert pushforward(h, lambda x: x % 2) == {1: 7, 0: -2}
    assert pushforward({1: 1, 2: -1}, lambda x: 0) == {}
    assert pullback({0: 4}, lambda x: x % 2, range(3)) == {0: 4, 1: 0, 2: 4}
    assert pullback(lambda y: y + 1, abs, [-2]) == {-2: 3}


def _projection_setup(I, p):
    P = interval_poset_at(G2, p)
    Q = interval_poset_at(G2, p, within=I)
    return P, Q, projection_to(I, p), (lambda J: J)


@pytest.mark.parametrize("I", [I for I in INT2 if I.size >= 2][::7])
def test_projection_and_inclusion_form_a_galois_connection(I):
    p = sorted(I.points)[0]
    P, Q, g1, g2 = _projection_setup(I, p)
    assert all(g1(J) in Q for J in P)
    assert is_galois_connection(P, Q, superset_leq, superset_leq, g1, g2)


@given(seeds)
def test_inversion_commutes_with_projection(seed):
    rng = random.Random(seed)
    rk = gri(random_module(rng, G2))
    I = random_interval(rng, G2)
    p = rng.choice(sorted(I.points))
    P, Q, g1, g2 = _projection_setup(I, p)
    assert rota_holds(P, Q, superset_leq, superset_leq, g1, g2, {J: rk[J] for J in P})


def test_galois_check_rejects_non_adjoint_maps():
    P = Q = list(range(3))
    le = lambda a, b: a <= b  # noqa: E731
    assert is_galois_connection(P, Q, le, le, lambda x: x, lambda x: x)
    assert not is_galois_connection(P, Q, le, le, lambda x: 0, lambda x: 0)


def test_diagram_serialization():
    rk = gri(random_module(random.Random(11), G2))
    back = Diagram.from_json(json.loads(json.dumps(rk.to_json())))
    assert back == rk
    rows = list(csv.DictReader(io.StringIO(rk.to_csv())))
    assert len(rows) == rk.support_size()
    assert {int(r["value"]) for r in rows} <= set(rk.entries.values())
    assert all(int(r["size"]) >= 1 for r in rows)


def test_diagram_drops_zeros_and_checks_grid():
    d = Diagram(G1, {G1.full(): 0})
    assert d.support_size() == 0
    with pytest.raises(ValueError):
        Diagram(G1, {G2.full(): 1})


def test_leq_is_componentwise():
    assert leq((0, 1), (1, 1)) and not leq((1, 0), (0, 1))
