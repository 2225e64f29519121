import pytest
from hypothesis import given, strategies as st

from graftlab import bimultihedron as bm
from graftlab.bimultihedron import EMPTY, Face, Prod, stype


def test_stratum_dim():
    assert bm.stratum_dim(stype(2, "2", "1")) == 2
    assert bm.stratum_dim(stype(0, "1", "1")) is EMPTY
    assert bm.stratum_dim(stype(0, "2", "2")) == 1


def test_type_splittings_examples():
    sps = bm.type_splittings(stype(1, "2", "1"))
    assert (stype(0, "2", "1"), stype(1, "1,1", "1")) in sps
    assert all(not bm.is_empty(a) and not bm.is_empty(b) for a, b in sps)
    assert bm.type_splittings(stype(0, "2", "1")) == []
    assert bm.type_splittings(stype(2, "1", "1")) == [(stype(1, "1", "1"), stype(1, "1", "1"))]


def test_rho_examples():
    assert bm.rho(stype(0, "2", "1"), stype(1, "1,1", "1")) == 1
    assert bm.rho(stype(1, "1", "1"), stype(1, "1", "1")) == 0
    assert bm.rho_oracle(stype(0, "2", "1"), stype(1, "1,1", "1")) == 1
    assert bm.rho_oracle(stype(1, "1", "1"), stype(1, "1", "1")) == 0


def test_boundary_examples():
    D = stype(2, "1", "1")
    assert bm.boundary(D) == [(Face(D, (1,)), 1), (Prod((stype(1, "1", "1"), stype(1, "1", "1"))), 0)]
    assert bm.boundary(stype(1, "1", "1")) == []
    assert all(isinstance(lab, Prod) for lab, _ in bm.boundary(stype(0, "2", "2")))


def test_boundary_of_empty_type_rejected():
    with pytest.raises(ValueError):
        bm.boundary(stype(0, "1", "1"))


def test_boundary_faces_have_codimension_one():
    for D in bm.stratum_types(2, 3, 3, max_dim=4):
        d = bm.stratum_dim(D)
        for lab, _ in bm.boundary(D):
            if isinstance(lab, Face):
                assert bm.stratum_dim(bm.face_type(D, lab.removed[0])) == d - 1
            else:
                assert sum(bm.stratum_dim(E) for E in lab.factors) == d - 1


@pytest.mark.parametrize("D", [stype(2, "2", "1"), stype(3, "1", "1"), stype(1, "2,1", "2")])
def test_dd_zero_examples(D):
    rep = bm.check_dd_zero(D)
    assert rep.passed, rep.lines()


def test_dd_zero_sees_face_pairs():
    D = stype(3, "1", "1")
    terms = {}
    for lab, s in bm.boundary(D):
        if isinstance(lab, Face):
            bm._face_boundary(bm.face_type(D, lab.removed[0]), lab.removed, D, s, terms)
    assert Face(D, (1, 2)) in terms


def test_dd_zero_detects_a_flipped_sign(monkeypatch):
    orig = bm.rho
    monkeypatch.setattr(bm, "rho", lambda D0, D1: (orig(D0, D1) + D0.n + 1) % 2)
    assert not all(bm.check_dd_zero(D).passed for D in bm.stratum_types(3, 3, 3, max_dim=4, min_dim=2))


@given(st.sampled_from(list(bm.stratum_types(3, 4, 3, max_dim=5))))
def test_rho_matches_oracle_on_splittings(D):
    for D0, D1 in bm.type_splittings(D):
        assert bm.rho(D0, D1) == bm.rho_oracle(D0, D1)
