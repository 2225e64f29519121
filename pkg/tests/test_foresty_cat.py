import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from graftlab import foresty_cat as fc
from graftlab import suites
from graftlab.foresty_cat import BIMOD, D, U, UD, CheckOptions
from graftlab.gradedalg import INT, INTMOD, RATIONAL, BoxShape, compare_maps, sparse_map
from graftlab.monoid_morse import FiniteSemigroup, cyclic, morse_fbialgebra, morse_pushforward, corpus_homomorphisms
from graftlab.multiindex import mi, ones

ONE, TWO, THREE = mi(1), mi(2), mi(3)
SYSTEMS = [UD, U, D, BIMOD]
RINGS = [INT, INTMOD(2), RATIONAL]


def corrupted_z2(monkeypatch):
    monkeypatch.setattr(FiniteSemigroup, "associativity_failure", lambda self: None)
    return FiniteSemigroup("Z2bad", ("0", "1"), ((1, 1), (1, 0)))


def test_vertical_support_composes_plainly():
    (A, B, C), _ = suites.law_modules(INT)
    rng = random.Random(1)
    f = fc.random_morphism(UD, A, B, 0, INT, rng, 3, support=0)
    g = fc.random_morphism(UD, B, C, 1, INT, rng, 3, support=0)
    gf = fc.compose(g, f)
    for idx in UD.indices(3):
        if UD.is_identity_index(idx) and f.get(idx) and g.get(idx):
            assert compare_maps(gf.component(idx), fc.compose_maps(g.component(idx), f.component(idx))).equal


def test_alpha_alpha_at_3_1_is_the_associator():
    _, alpha = morse_fbialgebra(cyclic(2), INT, 3)
    aa = fc.compose(alpha, alpha).component((THREE, ONE))
    assert all(not aa.apply(x) for x in aa.src.basis())


def test_corrupted_table_breaks_associator(monkeypatch):
    M = corrupted_z2(monkeypatch)
    _, alpha = morse_fbialgebra(M, INT, 3)
    aa = fc.compose(alpha, alpha).component((THREE, ONE))
    for x, y, z in product(range(2), repeat=3):
        assoc = M.mul(M.mul(x, y), z) == M.mul(x, M.mul(y, z))
        assert (not aa.apply((x, y, z))) == assoc
    rep = fc.check_fbialgebra(alpha, 3)
    assert not rep.passed
    assert any(v.relation == "alpha-alpha" and v.location == ("(3);(1)",) for v in rep.violations)


def test_morse_fbialgebra_passes():
    _, alpha = morse_fbialgebra(cyclic(2), INT, 4)
    rep = fc.check_fbialgebra(alpha, 4)
    assert rep.passed, rep.lines()


def test_zero_alpha_satisfies_coherence():
    A = cyclic(2).module()
    rep = fc.check_fbialgebra(fc.zero_morphism(UD, A, A, -1, INT, 3), 3)
    assert rep.passed, rep.lines()


def test_hom_differential_of_identity_and_zero():
    A, alpha = morse_fbialgebra(cyclic(3), INT, 3)
    did = fc.hom_differential(alpha, fc.identity(UD, A, INT, 3), alpha)
    assert fc.check_vanishes(did, "d-id", fc.Report("t"))
    z = fc.hom_differential(alpha, fc.zero_morphism(UD, A, A, 0, INT, 3), alpha)
    assert z.support() == []


def _homs():
    return {h.name: h for h in corpus_homomorphisms()}


def test_morphism_checks():
    h = _homs()["Z4->Z2"]
    _, a = morse_fbialgebra(h.src, INT, 3)
    _, b = morse_fbialgebra(h.dst, INT, 3)
    assert fc.check_fbialg_morphism(fc.identity(UD, a.src, INT, 3), a, a, 3).passed
    phi = morse_pushforward(h, INT, 3)
    assert fc.check_fbialg_morphism(phi, a, b, 3).passed
    s, t = phi.shapes((ONE, ONE))
    phi.set((ONE, ONE), sparse_map(s, t, 0, INT, {(x,): {((x + 1) % 2,): 1} for x in range(4)}))
    rep = fc.check_fbialg_morphism(phi, a, b, 3)
    assert any(v.relation == "d-phi" for v in rep.violations)


def _morse_2_simplex(ml=3):
    H = _homs()
    f, g = H["Z4->Z2"], H["Z2:trivial"]
    objs = [morse_fbialgebra(M, INT, ml) for M in (g.dst, f.dst, f.src)]
    objs = [((A,), al) for A, al in objs]
    return fc.horn_simplex(objs[0], objs[1], objs[2], morse_pushforward(g, INT, ml), morse_pushforward(f, INT, ml))


def test_filled_horn_passes_and_bad_edge_fails():
    sx = _morse_2_simplex()
    assert fc.check_simplex(sx, 3).passed
    bad = fc.add((1, sx.maps[(0, 2)]), (1, sx.maps[(0, 2)]))
    sx.maps[(0, 2)] = bad
    rep = fc.check_simplex(sx, 3, objects=False)
    assert not rep.passed
    assert all(v.location[0] == "[0, 1, 2]" for v in rep.violations)


def test_fill_identities():
    A, alpha = morse_fbialgebra(cyclic(2), INT, 3)
    ident = fc.identity(UD, A, INT, 3)
    phi02, phi012 = fc.fill_inner_horn_2(ident, ident)
    assert compare_maps(phi02.component((mi(1, 1), ONE)), ident.component((mi(1, 1), ONE))).equal
    assert phi02.support() == ident.support()
    assert phi012.support() == []


@pytest.mark.parametrize("system", SYSTEMS)
def test_fill_random_vertical_chain_maps(system):
    rng = random.Random(7)
    (A, B, C), _ = suites.law_modules(INT)
    objs = suites._objects(system, (A, B, C))
    zero = [fc.zero_morphism(system, o, o, -1, INT, 3) for o in objs]
    phi01 = fc.random_morphism(system, objs[1], objs[0], 0, INT, rng, 3, support=0)
    phi12 = fc.random_morphism(system, objs[2], objs[1], 0, INT, rng, 3, support=0)
    sx = fc.horn_simplex((objs[0], zero[0]), (objs[1], zero[1]), (objs[2], zero[2]), phi01, phi12)
    assert fc.check_simplex(sx, 3, objects=False).passed


def test_one_sided_objects():
    _, alpha = morse_fbialgebra(cyclic(2), INT, 4)
    u, d = fc.forget_to_u(alpha), fc.forget_to_d(alpha)
    assert fc.check_fAlg_object(u, 4).passed
    assert fc.check_fCoalg_object(d, 4).passed
    (A, _, _), _ = suites.law_modules(INT)
    bad = fc.zero_morphism(U, A, A, -1, INT, 4)
    s, t = bad.shapes(mi(2, 2))
    bad.set(mi(2, 2), sparse_map(s, t, 1, INT, {(0, 0, 0, 0): {(1, 0): 1}}))
    rep = fc.check_fAlg_object(bad, 4)
    assert any(v.relation == "vanish" and v.location == ("(2,2)",) for v in rep.violations)


@settings(max_examples=8)
@given(st.sampled_from(SYSTEMS), st.sampled_from(RINGS), st.integers(0, 10 ** 6))
def test_category_laws(system, ring, seed):
    rep = fc.Report("laws")
    suites.law_trial(system, ring, random.Random(seed), rep, CheckOptions(3, 512, 64, seed), 3)
    assert rep.passed, rep.lines()


@settings(max_examples=6)
@given(st.sampled_from(SYSTEMS), st.integers(0, 10 ** 6))
def test_residuals_agree_on_random_families(system, seed):
    rng = random.Random(seed)
    mods, _ = suites.law_modules(INT)
    objs = [suites._objects(system, mods)[j] for j in range(3)]
    sx = fc.random_simplex(system, objs, INT, rng, 3)
    rep = fc.Report("r")
    for sigma in sx.faces():
        fc.residuals_agree(sx, sigma, CheckOptions(3, 512, 64), rep)
    assert rep.passed, rep.lines()


@settings(max_examples=8)
@given(st.integers(0, 10 ** 6))
def test_forgetful_restriction_intertwines(seed):
    rng = random.Random(seed)
    (A, B, C), _ = suites.law_modules(INT)
    f = fc.random_morphism(UD, A, B, rng.randint(-1, 1), INT, rng, 3)
    g = fc.random_morphism(UD, B, C, rng.randint(-1, 1), INT, rng, 3)
    rep = fc.Report("f")
    fc.compare_morphisms(fc.forget_to_u(fc.compose(g, f)), fc.compose(fc.forget_to_u(g), fc.forget_to_u(f)), "u", rep)
    fc.compare_morphisms(fc.forget_to_d(fc.compose(g, f)), fc.compose(fc.forget_to_d(g), fc.forget_to_d(f)), "d", rep)
    assert rep.passed, rep.lines()


def test_bimodule_indices_and_splits():
    for idx in BIMOD.indices(3):
        k, l = BIMOD.kl(idx)
        if idx.eps == 1:
            assert 1 <= idx.mark <= sum(k)
        else:
            assert 0 <= idx.mark <= len(k)
        for sp in BIMOD.splits(idx):
            assert BIMOD.kl(sp.lower)[0] == sp.k0 and BIMOD.kl(sp.upper)[0] == sp.k1


def test_objects_need_matching_arity():
    A = cyclic(2).module()
    with pytest.raises(ValueError):
        fc.ForestyMorphism(BIMOD, A, A, 0, INT)


def test_component_shape_is_checked():
    A = cyclic(2).module()
    f = fc.zero_morphism(UD, A, A, 0, INT, 2)
    s = BoxShape.uniform(A, 1, 1)
    with pytest.raises(ValueError):
        f.set((TWO, ONE), sparse_map(s, s, 0, INT, {}))


def test_residuals_detect_sign_without_degree_term(monkeypatch):
    from graftlab.multiindex import heartsuit, v

    def s(sp, deg):
        return (heartsuit(sp.k1, sp.k0) + heartsuit(sp.l0, sp.l1) + v(sp.l0) * (v(sp.k1) + v(sp.l1))) % 2
    assert suites.residual_sweep(3, suites.DEFAULT_SEED, max_leaves=3).passed
    monkeypatch.setattr(fc, "_ud_sign", s)
    assert not suites.residual_sweep(3, suites.DEFAULT_SEED, max_leaves=3).passed
