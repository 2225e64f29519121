import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from graftlab.gradedalg import (INT, INTMOD, RATIONAL, BoxShape, GradedModule, compare_maps, compose_maps,
                                grid_differential, hashed_map, identity_map, parse_ring, random_sparse_map,
                                sparse_map, sum_maps, tensor_cols, tensor_rows, to_matrix, transpose_map,
                                transpose_sign, zero_map)

Z2 = INTMOD(2)
MIXED = GradedModule((("e", 0), ("f", 1), ("g", 1)), "M")
EVEN = GradedModule((("p", 0), ("q", 2)), "E")
RINGS = st.sampled_from([INT, Z2, INTMOD(3), RATIONAL])


def cell(m, a=1, b=1):
    return BoxShape.uniform(m, a, b)


def dense_product(G, F, ring):
    return [[ring(sum(G[i][t] * F[t][j] for t in range(len(F)))) for j in range(len(F[0]))] for i in range(len(G))]


@given(st.integers(0, 10 ** 6))
def test_compose_matches_dense_product(seed):
    rng = random.Random(seed)
    A = GradedModule((("a", 0), ("b", 0), ("c", 0)))
    s = cell(A, 1, 2)
    f = random_sparse_map(s, s, 0, Z2, rng)
    g = random_sparse_map(s, s, 0, Z2, rng)
    assert to_matrix(compose_maps(g, f)) == dense_product(to_matrix(g), to_matrix(f), Z2)


def test_transpose_sign_examples():
    s = cell(MIXED, 2, 2)
    for x in s.basis():
        d = s.degrees(x)
        assert transpose_sign(s, x) == d[1] * d[2] % 2
    even = cell(EVEN, 2, 3)
    assert all(transpose_sign(even, x) == 0 for x in even.basis())
    for sh in (cell(MIXED, 1, 3), cell(MIXED, 3, 1)):
        assert all(transpose_sign(sh, x) == 0 for x in sh.basis())


def test_tensor_cols_of_identities():
    f = identity_map(cell(MIXED, 2, 1), INT)
    g = identity_map(cell(MIXED, 2, 2), INT)
    assert compare_maps(tensor_cols([f, g]), identity_map(cell(MIXED, 2, 3), INT)).equal


def test_tensor_cols_even_is_naive():
    rng = random.Random(3)
    f = random_sparse_map(cell(EVEN, 2, 1), cell(EVEN, 1, 1), 0, INT, rng, density=1)
    g = random_sparse_map(cell(EVEN, 2, 1), cell(EVEN, 1, 1), 2, INT, rng, density=1)
    t = tensor_cols([f, g])
    for x in t.src.basis():
        (x11, x12, x21, x22) = x
        want = {}
        for (y1,), c in f.apply((x11, x21)).items():
            for (y2,), d in g.apply((x12, x22)).items():
                want[(y1, y2)] = want.get((y1, y2), 0) + c * d
        assert t.apply(x) == {y: c for y, c in want.items() if c}


@given(st.integers(0, 10 ** 6), RINGS, st.integers(-1, 1), st.integers(-1, 1))
def test_tensor_cols_is_transposed_tensor_rows(seed, ring, d1, d2):
    rng = random.Random(seed)
    f = random_sparse_map(cell(MIXED, 2, 1), cell(MIXED, 1, 1), d1, ring, rng, density=0.8)
    g = random_sparse_map(cell(MIXED, 2, 1), cell(MIXED, 1, 2), d2, ring, rng, density=0.8)
    brute = transpose_map(tensor_rows([transpose_map(f), transpose_map(g)]))
    assert compare_maps(tensor_cols([f, g]), brute).equal


def _square_zero_d(ring):
    c = cell(MIXED)
    return sparse_map(c, c, -1, ring, {(1,): {(0,): 1}, (2,): {(0,): 2}})


def test_grid_differential_examples():
    d = _square_zero_d(INT)
    assert compare_maps(grid_differential(d, 1, 1), d).equal
    z = zero_map(cell(MIXED), cell(MIXED), -1, INT)
    assert grid_differential(z, 2, 2).apply((1, 2, 1, 0)) == {}
    D = grid_differential(d, 1, 2)
    assert D.apply((1, 1)) == {(0, 1): 1, (1, 0): -1}


@given(RINGS, st.integers(1, 2), st.integers(1, 3))
def test_grid_differential_squares_to_zero(ring, a, b):
    D = grid_differential(_square_zero_d(ring), a, b)
    DD = compose_maps(D, D)
    assert all(not DD.apply(x) for x in DD.src.basis())


def test_sum_maps_cancels():
    rng = random.Random(0)
    s = cell(MIXED, 1, 2)
    f = random_sparse_map(s, s, 0, INT, rng)
    m = sum_maps([(1, f), (-1, f)])
    assert all(not m.apply(x) for x in s.basis())


def test_sparse_map_checks_degree():
    with pytest.raises(ValueError):
        sparse_map(cell(MIXED), cell(MIXED), 0, INT, {(0,): {(1,): 1}})


def test_rings():
    assert parse_ring("Z") == INT and parse_ring("Q") == RATIONAL and parse_ring("Z/5") == INTMOD(5)
    assert INTMOD(5)(Fraction(1, 2)) == 3
    assert RATIONAL(3) == Fraction(3)
    with pytest.raises(ValueError):
        INTMOD(4)
    with pytest.raises(ValueError):
        parse_ring("R")


def test_hashed_map_is_deterministic():
    s = cell(MIXED, 2, 2)
    f = hashed_map(s, s, 0, INT, "seed")
    g = hashed_map(s, s, 0, INT, "seed")
    assert compare_maps(f, g).equal
