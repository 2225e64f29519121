"""Sweeps behind ``selftest`` and the acceptance tests.

Every sweep returns a ``Report``.  Bounds default to the full profile;
``PROFILES["quick"]`` shrinks them.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from . import bimultihedron as bm
from . import foresty_cat as fc
from .forest import ASCENDING, DESCENDING, binary, cut_at_heights, henriques_graph
from .gradedalg import INT, INTMOD, RATIONAL, BoxShape, GradedModule, sparse_map
from .monoid_morse import (composable_chains, corpus, corpus_homomorphisms, extras, hom, morse_fbialgebra,
                           morse_pushforward, morse_simplex, trivial_triple, triple_to_monoid)
from .multiindex import heartsuit, heartsuit_oracle, multi_indices, sharp, splittings, v
from .report import Report, timed

DEFAULT_SEED = 20240601

PROFILES = {
    "quick": dict(hs_leaves=5, assoc_leaves=4, rho_leaves=4, rho_v=3, dd_n=3, dd_k=4, dd_l=4, dd_dim=3,
                  trials=5, morse_leaves=3, families=10, pairs=20, three_simplices=0),
    "full": dict(hs_leaves=6, assoc_leaves=5, rho_leaves=5, rho_v=3, dd_n=3, dd_k=3, dd_l=3, dd_dim=4,
                 trials=100, morse_leaves=4, families=50, pairs=100, three_simplices=3),
}

RINGS = (INT, INTMOD(2), RATIONAL)

# comparisons on random families: exhaustive up to 512 inputs, else 64 seeded samples
RANDOM_OPTS = dict(limit=512, samples=64)


# -- signs -------------------------------------------------------------------------

def heartsuit_sweep(max_leaves=6) -> Report:
    """Closed formula against the vertex-reordering signature for every splitting."""
    rep = Report("heartsuit-oracle")
    with timed(rep):
        for k in multi_indices(max_leaves):
            for sp in splittings(k):
                rep.checked += 1
                a, b = heartsuit(sp.upper, sp.lower), heartsuit_oracle(sp.upper, sp.lower)
                if a != b:
                    rep.add("heartsuit", (repr(sp.upper), repr(sp.lower)), f"formula {a} != oracle {b}")
    return rep


def triple_splittings(k):
    """``(k0, k1, k2)`` bottom to top with ``k = k2 # k1 # k0``."""
    for sp in splittings(k):
        for sp2 in splittings(sp.upper):
            yield sp.lower, sp2.lower, sp2.upper


def _s(k0, l0, k1, l1, deg):
    return fc._ud_sign(fc.Split(None, None, k0, k1, l0, l1), deg)


def sign_associativity_sweep(max_leaves=5, degrees=(0, 1)) -> Report:
    """Cocycle identities of the splitting signs over all triple splittings.

    ``heartsuit(k2, k1 # k0) + heartsuit(k1, k0) = heartsuit(k2 # k1, k0) + heartsuit(k2, k1)``, and
    ``s(01,2) + s(0,1) = s(0,12) + s(1,2)`` for ``chi o psi o phi``.

    ``phi`` owns the top layer 2 and ``psi`` the middle layer 1; ``l`` stacks
    the other way, ``l = l0 # l1 # l2`` with ``l0`` on top.
    """
    rep = Report("sign-associativity")
    with timed(rep):
        ks = {k: list(triple_splittings(k)) for k in multi_indices(max_leaves)}
        # l = l0 # (l1 # l2): splittings give (lower, upper) = (l12, l0) then (l2, l1)
        ls = {l: [(t[2], t[1], t[0]) for t in triple_splittings(l)] for l in multi_indices(max_leaves)}
        for k, kt in ks.items():
            for k0, k1, k2 in kt:
                rep.checked += 1
                lhs = heartsuit(k2, sharp(k1, k0)) + heartsuit(k1, k0)
                rhs = heartsuit(sharp(k2, k1), k0) + heartsuit(k2, k1)
                if (lhs - rhs) % 2:
                    rep.add("heartsuit-assoc", (repr(k0), repr(k1), repr(k2)))
        for k, kt in ks.items():
            for l, lt in ls.items():
                for (k0, k1, k2), (l0, l1, l2) in product(kt, lt):
                    k01, k12 = sharp(k1, k0), sharp(k2, k1)
                    l01, l12 = sharp(l0, l1), sharp(l1, l2)
                    for dpsi, dphi in product(degrees, repeat=2):
                        rep.checked += 1
                        lhs = _s(k01, l01, k2, l2, dphi) + _s(k0, l0, k1, l1, dpsi)
                        rhs = _s(k0, l0, k12, l12, dpsi + dphi) + _s(k1, l1, k2, l2, dphi)
                        if (lhs - rhs) % 2:
                            rep.add("s-assoc", (repr(k0), repr(k1), repr(k2), repr(l0), repr(l1), repr(l2),
                                                dpsi, dphi))
    return rep


def rho_pairs(max_n=2, max_v=3, max_leaves=5):
    """Gluable nonempty pairs ``(D0, D1)`` with ``n_i <= max_n``, ``v <= max_v`` and at most ``max_leaves`` leaves."""
    mis = [k for k in multi_indices(max_leaves) if v(k) <= max_v]
    by_len = {}
    for k in mis:
        by_len.setdefault(len(k), []).append(k)
    for n0, n1 in product(range(max_n + 1), repeat=2):
        for k0 in mis:
            for k1 in by_len.get(sum(k0), []):
                for l1 in mis:
                    for l0 in by_len.get(sum(l1), []):
                        D0, D1 = bm.StratumType(n0, k0, l0), bm.StratumType(n1, k1, l1)
                        if not bm.is_empty(D0) and not bm.is_empty(D1):
                            yield D0, D1


def rho_sweep(max_n=2, max_v=3, max_leaves=5) -> Report:
    rep = Report("rho-oracle")
    with timed(rep):
        for D0, D1 in rho_pairs(max_n, max_v, max_leaves):
            rep.checked += 1
            a, b = bm.rho(D0, D1), bm.rho_oracle(D0, D1)
            if a != b:
                rep.add("rho", (repr(D0), repr(D1)), f"formula {a} != oracle {b}")
    return rep


def dd_sweep(max_n=3, max_k=3, max_l=3, max_dim=4, strict=True) -> Report:
    """``check_dd_zero`` on every nonempty type in range.

    With ``strict=False`` uncancelled corners whose intermediate gluing is
    empty are listed as notes instead of violations.
    """
    rep = Report("ddzero")
    with timed(rep):
        for D in bm.stratum_types(max_n, max_k, max_l, max_dim, min_dim=2):
            rep.checked += 1
            r = bm.check_dd_zero(D)
            for lab, c in sorted(r.offending.items(), key=lambda t: repr(t[0])):
                if not strict and bm.is_degenerate_triple(lab):
                    rep.notes.append(f"{D!r}: {c:+d} {lab!r} (empty intermediate gluing)")
                else:
                    rep.add("dd", (repr(D),), f"{c:+d} {lab!r}")
    return rep


# -- categories ----------------------------------------------------------------------

def law_modules(ring):
    """Three modules with odd generators and a square-zero differential on each."""
    A = GradedModule((("e", 0), ("f", 1)), "A")
    B = GradedModule((("g", 0), ("h", 1)), "B")
    C = GradedModule((("u", 1), ("w", 2)), "C")
    ds = {}
    for M in (A, B, C):
        cell = BoxShape.uniform(M, 1, 1)
        ds[M] = sparse_map(cell, cell, -1, ring, {(1,): {(0,): 1}})
    return (A, B, C), ds


def _objects(system, mods):
    A, B, C = mods
    if system.arity == 3:
        return (A, B, C), (B, C, A), (C, A, B)
    return (A,), (B,), (C,)


def law_trial(system, ring, rng, rep, opts, max_leaves=4):
    """Associativity, both unit laws, Leibniz and d^2 = 0 on one random triple of maps."""
    mods, ds = law_modules(ring)
    oa, ob, oc = _objects(system, mods)
    d1, d2, d3 = (rng.randint(-1, 1) for _ in range(3))
    f = fc.random_morphism(system, oa, ob, d1, ring, rng, max_leaves)
    g = fc.random_morphism(system, ob, oc, d2, ring, rng, max_leaves)
    h = fc.random_morphism(system, oc, oa, d3, ring, rng, max_leaves)
    where = (system.name, ring.name)
    fc.compare_morphisms(fc.compose(fc.compose(h, g), f), fc.compose(h, fc.compose(g, f)), "assoc", rep, opts,
                         where)
    fc.compare_morphisms(fc.compose(fc.identity(system, ob, ring, max_leaves), f), f, "left-unit", rep, opts, where)
    fc.compare_morphisms(fc.compose(f, fc.identity(system, oa, ring, max_leaves)), f, "right-unit", rep, opts, where)
    aa, ab, ac = (fc.differential_object(system, o, ds, ring, max_leaves) for o in (oa, ob, oc))
    lhs = fc.hom_differential(ac, fc.compose(g, f), aa)
    rhs = fc.add((1, fc.compose(fc.hom_differential(ac, g, ab), f)),
                 (-1 if d2 % 2 else 1, fc.compose(g, fc.hom_differential(ab, f, aa))))
    fc.compare_morphisms(lhs, rhs, "leibniz", rep, opts, where)
    fc.check_vanishes(fc.hom_differential(ab, fc.hom_differential(ab, f, aa), aa), "dd", rep, opts, where)


def category_laws_sweep(trials=100, seed=DEFAULT_SEED, max_leaves=4, systems=None, rings=RINGS) -> Report:
    rep = Report("category-laws")
    opts = fc.CheckOptions(max_leaves, seed=seed, **RANDOM_OPTS)
    with timed(rep):
        for system in systems or (fc.UD, fc.U, fc.D, fc.BIMOD):
            for ring in rings:
                rng = random.Random(f"{seed}:{system.name}:{ring.name}")
                for _ in range(trials):
                    law_trial(system, ring, rng, rep, opts, max_leaves)
    return rep


def residual_sweep(families=50, seed=DEFAULT_SEED, max_leaves=4) -> Report:
    """Absorbed and unabsorbed simplex residuals on random (incoherent) families, all categories."""
    rep = Report("residuals")
    opts = fc.CheckOptions(max_leaves, seed=seed, **RANDOM_OPTS)
    systems = (fc.UD, fc.U, fc.D, fc.BIMOD)
    with timed(rep):
        for t in range(families):
            system = systems[t % len(systems)]
            ring = RINGS[t % len(RINGS)]
            rng = random.Random(f"{seed}:residual:{t}")
            mods, _ = law_modules(ring)
            n = 2 + t % 2
            objs = [_objects(system, mods)[j % 3] for j in range(n + 1)]
            sx = fc.random_simplex(system, objs, ring, rng, max_leaves)
            for sigma in sx.faces():
                fc.residuals_agree(sx, sigma, opts, rep)
    return rep


def forgetful_sweep(pairs=100, seed=DEFAULT_SEED, max_leaves=4) -> Report:
    rep = Report("forgetful")
    opts = fc.CheckOptions(max_leaves, seed=seed, **RANDOM_OPTS)
    with timed(rep):
        for t in range(pairs):
            ring = RINGS[t % len(RINGS)]
            rng = random.Random(f"{seed}:forget:{t}")
            (A, B, C), _ = law_modules(ring)
            f = fc.random_morphism(fc.UD, A, B, rng.randint(-1, 1), ring, rng, max_leaves)
            g = fc.random_morphism(fc.UD, B, C, rng.randint(-1, 1), ring, rng, max_leaves)
            gf = fc.compose(g, f)
            fc.compare_morphisms(fc.forget_to_u(gf), fc.compose(fc.forget_to_u(g), fc.forget_to_u(f)), "forget-u",
                                 rep, opts, (t,))
            fc.compare_morphisms(fc.forget_to_d(gf), fc.compose(fc.forget_to_d(g), fc.forget_to_d(f)), "forget-d",
                                 rep, opts, (t,))
    return rep


# -- monoids ---------------------------------------------------------------------------

def _hom_key(h):
    return (h.src.name, h.dst.name, h.images)


def monoid_morse_sweep(max_leaves=4, three_simplices=3, seed=DEFAULT_SEED) -> Report:
    """Objects, pushforwards of every corpus homomorphism and composite, and every 2-simplex of a chain
    of two composable homomorphisms (three semigroups).  Each object and each distinct edge is checked
    once; the simplex check then covers the coherence relations."""
    rep = Report("monoid-morse")
    opts = fc.CheckOptions(max_leaves, seed=seed)
    with timed(rep):
        alphas = {}
        for name, M in corpus().items():
            _, alphas[name] = morse_fbialgebra(M, INT, max_leaves)
            rep.merge(fc.check_fbialgebra(alphas[name], max_leaves, opts), f"{name}:")
        homs = corpus_homomorphisms()
        chains = composable_chains(homs, 2)
        edges = {_hom_key(h): h for h in homs}
        for f, g in chains:
            c = f.then(g)
            edges.setdefault(_hom_key(c), c)
        for key, h in sorted(edges.items(), key=lambda t: (t[1].name, t[0])):
            phi = morse_pushforward(h, INT, max_leaves)
            rep.merge(fc.check_fbialg_morphism(phi, alphas[h.src.name], alphas[h.dst.name], max_leaves, opts),
                      f"{h.name}:")
        for f, g in chains:
            sx = morse_simplex([f, g], INT, max_leaves)
            rep.merge(fc.check_simplex(sx, max_leaves, opts, objects=False), f"{f.name},{g.name}:")
        ex = extras()
        Z8, Z4, Z2 = ex["Z8"], corpus()["Z4"], corpus()["Z2"]
        z84 = hom(Z8, Z4, lambda e: str(int(e) % 4), "Z8->Z4")
        z42 = hom(Z4, Z2, lambda e: str(int(e) % 2), "Z4->Z2")
        rep.merge(fc.check_simplex(morse_simplex([z84, z42], INT, max_leaves), max_leaves, opts), "Z8,Z4,Z2:")
        for chain in composable_chains(homs, 3)[:: max(1, 209 // max(1, three_simplices))][:three_simplices]:
            sx = morse_simplex(chain, INT, max_leaves)
            rep.merge(fc.check_simplex(sx, max_leaves, opts, objects=False), ",".join(h.name for h in chain) + ":")
    return rep


# -- golden examples ---------------------------------------------------------------

def golden_sweep() -> Report:
    rep = Report("golden")
    with timed(rep):
        U = binary(0, ASCENDING)
        D = binary(1, DESCENDING)
        g = henriques_graph(U, D)
        rep.checked += 3
        if g.strand_counts() != [2, 4, 2]:
            rep.add("hopf-strands", (), f"{g.strand_counts()} != [2, 4, 2]")
        if len(g.nodes) != 4:
            rep.add("hopf-nodes", (), f"{len(g.nodes)} nodes != 4")
        hs = sorted(n.height for n in g.nodes)
        if hs != [0, 0, 1, 1]:
            rep.add("hopf-node-heights", (), f"{hs}")
        cut = cut_at_heights(g, [Fraction(1, 2)])
        rep.checked += 1
        if cut.levels() != [0, 1] or len(cut.strands) != 12:
            rep.add("hopf-cut", (), f"{len(cut.strands)} strands, levels {cut.levels()}")
        S = triple_to_monoid(trivial_triple())
        expected = {("G:0", "G:0"): "G:0", ("G:0", "X:x"): "X:x", ("X:x", "H:0"): "X:x", ("H:0", "H:0"): "H:0"}
        rep.checked += 1
        if S.elements != ("G:0", "X:x", "H:0", "pt"):
            rep.add("triple-elements", (), f"{S.elements}")
        else:
            for x, y in product(S.elements, repeat=2):
                want = expected.get((x, y), "pt")
                got = S.elements[S.mul(S.index(x), S.index(y))]
                if got != want:
                    rep.add("triple-table", (x, y), f"{got} != {want}")
    return rep


# -- orchestration -------------------------------------------------------------------

def suite_table(profile="full", seed=DEFAULT_SEED):
    p = PROFILES[profile]
    return {
        "heartsuit-oracle": lambda: heartsuit_sweep(p["hs_leaves"]),
        "sign-associativity": lambda: sign_associativity_sweep(p["assoc_leaves"]),
        "rho-oracle": lambda: rho_sweep(2, p["rho_v"], p["rho_leaves"]),
        "ddzero": lambda: dd_sweep(p["dd_n"], p["dd_k"], p["dd_l"], p["dd_dim"], strict=profile == "full"),
        "category-laws": lambda: category_laws_sweep(p["trials"], seed),
        "monoid-morse": lambda: monoid_morse_sweep(p["morse_leaves"], p["three_simplices"], seed),
        "residuals": lambda: residual_sweep(p["families"], seed),
        "forgetful": lambda: forgetful_sweep(p["pairs"], seed),
        "golden": golden_sweep,
    }


def _run_one(args):
    profile, seed, name = args
    return suite_table(profile, seed)[name]()


def run_suites(profile="full", seed=DEFAULT_SEED, names=None, threads=1):
    """Run the named suites (all by default); reports come back sorted by suite name."""
    table = suite_table(profile, seed)
    names = sorted(names or table)
    for n in names:
        if n not in table:
            raise KeyError(f"unknown suite {n!r}")
    if threads > 1 and len(names) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as ex:
            reports = list(ex.map(_run_one, [(profile, seed, n) for n in names]))
    else:
        reports = [table[n]() for n in names]
    return reports
