from math import prod

import pytest
from hypothesis import given

from graftlab.multiindex import (heartsuit, heartsuit_oracle, leaves, mi, multi_indices, n_tilde, ones, sharp,
                                 splittings, tilde, trees, v, v_ge, vert_set)
from strategies import glueable, multi_indices as mis


@pytest.mark.parametrize("k, n", [((2, 1, 3), 6), ((1,), 1), ((1, 1, 1), 3)])
def test_leaves(k, n):
    assert leaves(mi(k)) == n


@pytest.mark.parametrize("k, vs", [((2, 1, 3), [1, 4, 5]), ((1, 1), []), ((3,), [1, 2])])
def test_vert_set(k, vs):
    assert list(vert_set(mi(k))) == vs


@pytest.mark.parametrize("k, t", [((2, 1, 3), (2, 3)), ((1, 1), ()), ((4,), (4,))])
def test_tilde(k, t):
    assert tuple(tilde(mi(k))) == t
    assert n_tilde(mi(k)) == len(t)


@pytest.mark.parametrize("k, h, n", [((2, 1, 3), 4, 2), ((2, 1, 3), 1, 3), ((1, 1), 1, 0)])
def test_v_ge(k, h, n):
    assert v_ge(mi(k), h) == n


def test_sharp_examples():
    assert sharp(mi(1, 2, 1), mi(2, 1)) == mi(3, 1)
    assert sharp(mi(2, 2), mi(2)) == mi(4)
    k = mi(2, 3)
    assert sharp(ones(5), k) == k


def test_sharp_rejects_mismatch():
    with pytest.raises(ValueError):
        sharp(mi(1, 1), mi(3))


def test_splittings_examples():
    assert [(tuple(s.lower), tuple(s.upper)) for s in splittings(mi(2))] == [((1,), (2,)), ((2,), (1, 1))]
    assert [(tuple(s.lower), tuple(s.upper)) for s in splittings(mi(1))] == [((1,), (1,))]
    assert len(splittings(mi(3))) == 4


def test_heartsuit_examples():
    assert heartsuit(mi(2, 1), mi(2)) == 1
    assert heartsuit(mi(2, 2), mi(2)) == 1
    assert heartsuit(ones(4), mi(3, 1)) == 0
    assert heartsuit_oracle(mi(2, 1), mi(2)) == 1
    assert heartsuit_oracle(ones(3), mi(2, 1)) == 0


@given(mis())
def test_splittings_recover_k(k):
    sps = splittings(k)
    assert len(sps) == prod(2 ** (e - 1) for e in k)
    assert len(set(sps)) == len(sps)
    for sp in sps:
        assert sharp(sp.upper, sp.lower) == k


@given(glueable())
def test_sharp_shape_and_vertex_count(pair):
    k1, k0 = pair
    k = sharp(k1, k0)
    assert trees(k) == trees(k0)
    assert leaves(k) == leaves(k1)
    assert v(k) == v(k1) + v(k0)


@given(glueable())
def test_heartsuit_matches_oracle(pair):
    assert heartsuit(*pair) == heartsuit_oracle(*pair)


@given(mis())
def test_vertical_layers_have_no_sign(k):
    assert heartsuit(ones(leaves(k)), k) == 0
    assert heartsuit(k, ones(trees(k))) == 0


def test_multi_indices_enumeration():
    ks = list(multi_indices(3))
    assert len(ks) == 1 + 2 + 4
    assert len(set(ks)) == len(ks)
