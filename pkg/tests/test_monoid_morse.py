import pytest

from graftlab import foresty_cat as fc
from graftlab.foresty_cat import BIMOD, UD, BimodIndex
from graftlab.gradedalg import INT, compare_maps
from graftlab.monoid_morse import (ActionAxiomError, ActionTriple, FiniteSemigroup, NotAHomomorphism, NotAssociative,
                                   block_table, composable_chains, corpus, corpus_homomorphisms, cyclic,
                                   direct_component, extract_bimodule_blocks, extras, hom, morse_fbialgebra,
                                   morse_pushforward, morse_simplex, translation_triple, triple_to_monoid)
from graftlab.multiindex import mi, multi_indices, ones


def test_corpus():
    c = corpus()
    assert sorted(c) == ["LZ2", "S3", "SL2", "Z2", "Z3", "Z4"]
    assert c["Z2"].is_group() and c["S3"].is_group() and not c["LZ2"].is_group()
    assert extras()["Z8"].is_group()


def test_non_associative_table_rejected():
    with pytest.raises(NotAssociative):
        FiniteSemigroup("bad", ("a", "b"), ((1, 1), (1, 0)))


def test_json_round_trip():
    M = corpus()["S3"]
    assert FiniteSemigroup.from_json(M.to_json()) == M


def test_product_component_is_the_table():
    M = cyclic(2)
    _, alpha = morse_fbialgebra(M, INT, 2)
    m = alpha.component((mi(2), mi(1)))
    for x in range(2):
        for y in range(2):
            assert m.apply((x, y)) == {(M.mul(x, y),): 1}


def test_single_vertex_components_match_direct_reading():
    for M, ml in ((corpus()["S3"], 2), (corpus()["LZ2"], 3), (corpus()["SL2"], 3)):
        _, alpha = morse_fbialgebra(M, INT, ml)
        for k in multi_indices(ml):
            for l in multi_indices(ml):
                if (k.is_vertical() or l.is_vertical()) and sum(k) - len(k) + sum(l) - len(l) == 1:
                    m = alpha.component((k, l))
                    for x in m.src.basis():
                        assert m.apply(x) == {direct_component(M, k, l, x): 1}, (k, l, x)


def test_pushforwards():
    M = corpus()["Z3"]
    A = M.module()
    ident = morse_pushforward(hom(M, M, lambda e: e, "id"), INT, 3)
    assert compare_maps(ident.component((mi(1, 1), mi(1, 1))), fc.identity(UD, A, INT, 3)[(mi(1, 1), mi(1, 1))]).equal
    one = cyclic(1)
    triv = morse_pushforward(hom(M, one, lambda e: "0", "!"), INT, 3)
    box = triv.component((ones(2), ones(2)))
    assert all(box.apply(x) == {(0, 0, 0, 0): 1} for x in box.src.basis())


def test_non_homomorphism_rejected():
    Z2, Z3 = corpus()["Z2"], corpus()["Z3"]
    with pytest.raises(NotAHomomorphism):
        hom(Z3, Z2, lambda e: str(int(e) % 2))


def test_chain_z8_z4_z2_passes():
    Z8, Z4, Z2 = extras()["Z8"], corpus()["Z4"], corpus()["Z2"]
    chain = [hom(Z8, Z4, lambda e: str(int(e) % 4)), hom(Z4, Z2, lambda e: str(int(e) % 2))]
    rep = fc.check_simplex(morse_simplex(chain, INT, 3), 3)
    assert rep.passed, rep.lines()


def test_identity_chain_passes():
    M = corpus()["LZ2"]
    i = hom(M, M, lambda e: e)
    assert fc.check_simplex(morse_simplex([i, i], INT, 3), 3, objects=False).passed


def test_non_composable_chain_rejected():
    H = {h.name: h for h in corpus_homomorphisms()}
    with pytest.raises(ValueError):
        morse_simplex([H["Z4->Z2"], H["Z4->Z2"]], INT, 2)


def test_composable_chains():
    homs = corpus_homomorphisms()
    for f, g in composable_chains(homs, 2):
        assert f.dst == g.src


def test_translation_triple():
    S = triple_to_monoid(translation_triple())
    assert len(S) == 6
    assert S.associativity_failure() is None


def test_broken_commutation_rejected():
    Z2 = cyclic(2)
    with pytest.raises(ActionAxiomError):
        ActionTriple(Z2, ("x0", "x1"), Z2, ((0, 1), (1, 0)), ((0, 0), (1, 0)))


def test_bimodule_blocks():
    T = translation_triple()
    mu = extract_bimodule_blocks(T, INT, 2)
    act = mu.component(BimodIndex(mi(2), mi(1), 1, 2))
    for g in range(2):
        for x in range(2):
            assert act.apply((g, x)) == {(T.left[g][x],): 1}
    mult = mu.component(BimodIndex(mi(2), mi(1), 0, 1))
    for g in range(2):
        for h in range(2):
            assert mult.apply((g, h)) == {(T.G.mul(g, h),): 1}
    assert fc.check_bimodule_object(mu, 2).passed
    rows = block_table(mu, emit_limit=2)
    assert all(entries is None or n <= 2 for _, entries, n in rows)
