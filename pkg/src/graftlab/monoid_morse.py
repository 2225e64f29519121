"""Finite semigroups as 0-dimensional monoids and their f-bialgebra structures.

The Morse complex of a finite semigroup ``M`` is the free module ``R[M]`` in
degree 0 with zero differential.  Operations of positive dimension vanish,
so the only nonzero structure maps are the ones with a single vertex:
multiplication of two rows (ascending vertex) and duplication of a column
(descending vertex).  The core components are ``(2),(1)`` and ``(1),(2)``;
the positioned ones are built from them through the tree deletion and
single-tree relations.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations, product

from .foresty_cat import (BIMOD, UD, BimodIndex, ForestyMorphism, NerveSimplex, d_cols_model, d_rows_model,
                          v_cols_model, v_rows_model)
from .gradedalg import INT, TENSOR_CACHE, BoxShape, GradedModule, Ring, func_map
from .multiindex import MultiIndex, multi_indices, ones


class NotAssociative(ValueError):
    pass


class NotAHomomorphism(ValueError):
    pass


@dataclass(frozen=True)
class FiniteSemigroup:
    name: str
    elements: tuple
    table: tuple

    def __post_init__(self):
        els = tuple(str(e) for e in self.elements)
        tab = tuple(tuple(int(c) for c in row) for row in self.table)
        n = len(els)
        if len(set(els)) != n:
            raise ValueError("element names must be unique")
        if len(tab) != n or any(len(row) != n for row in tab):
            raise ValueError("table must be square of size |elements|")
        if any(not 0 <= c < n for row in tab for c in row):
            raise ValueError("table entries must be element indices")
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "table", tab)
        bad = self.associativity_failure()
        if bad:
            raise NotAssociative(f"{self.name}: ({bad[0]}*{bad[1]})*{bad[2]} != {bad[0]}*({bad[1]}*{bad[2]})")

    def __len__(self):
        return len(self.elements)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def associativity_failure(self):
        t = self.table
        n = len(t)
        for x, y, z in product(range(n), repeat=3):
            if t[t[x][y]][z] != t[x][t[y][z]]:
                return (self.elements[x], self.elements[y], self.elements[z])
        return None

    def index(self, name) -> int:
        return self.elements.index(str(name))

    def identity_element(self):
        for e in range(len(self)):
            if all(self.mul(e, x) == x == self.mul(x, e) for x in range(len(self))):
                return e
        return None

    def is_group(self) -> bool:
        e = self.identity_element()
        return e is not None and all(any(self.mul(x, y) == e for y in range(len(self))) for x in range(len(self)))

    def module(self) -> GradedModule:
        return GradedModule(tuple((e, 0) for e in self.elements), self.name)

    def to_json(self):
        return {"name": self.name, "elements": list(self.elements), "table": [list(r) for r in self.table]}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data.get("name", "M"), tuple(data["elements"]), tuple(tuple(r) for r in data["table"]))


def cyclic(n: int) -> FiniteSemigroup:
    return FiniteSemigroup(f"Z{n}", tuple(str(i) for i in range(n)),
                           tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))


def left_zero(n: int = 2) -> FiniteSemigroup:
    return FiniteSemigroup(f"LZ{n}", tuple(f"l{i}" for i in range(n)), tuple(tuple(i for _ in range(n)) for i in range(n)))


def semilattice_min() -> FiniteSemigroup:
    return FiniteSemigroup("SL2", ("0", "1"), ((0, 0), (0, 1)))


def _perm_name(p):
    return "".join(str(i) for i in p)


def symmetric3() -> FiniteSemigroup:
    perms = sorted(permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    # (p*q)(i) = p(q(i))
    table = tuple(tuple(idx[tuple(p[q[i]] for i in range(3))] for q in perms) for p in perms)
    return FiniteSemigroup("S3", tuple(_perm_name(p) for p in perms), table)


def corpus() -> dict:
    """The six built-in semigroups."""
    ms = [cyclic(2), cyclic(3), cyclic(4), left_zero(2), semilattice_min(), symmetric3()]
    return {m.name: m for m in ms}


def extras() -> dict:
    ms = [cyclic(1), cyclic(8)]
    return {m.name: m for m in ms}


@dataclass(frozen=True)
class Homomorphism:
    src: FiniteSemigroup
    dst: FiniteSemigroup
    images: tuple
    name: str = ""

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        object.__setattr__(self, "images", imgs)
        if len(imgs) != len(self.src) or any(not 0 <= i < len(self.dst) for i in imgs):
            raise NotAHomomorphism(f"{self.name}: images do not match the semigroups")
        for x, y in product(range(len(self.src)), repeat=2):
            if imgs[self.src.mul(x, y)] != self.dst.mul(imgs[x], imgs[y]):
                raise NotAHomomorphism(f"{self.name}: f({self.src.elements[x]}*{self.src.elements[y]}) "
                                       f"!= f({self.src.elements[x]})*f({self.src.elements[y]})")

    def __call__(self, x: int) -> int:
        return self.images[x]

    def then(self, g: "Homomorphism") -> "Homomorphism":
        """``g o self``."""
        if g.src != self.dst:
            raise ValueError("not composable")
        return Homomorphism(self.src, g.dst, tuple(g(self(x)) for x in range(len(self.src))),
                            f"{g.name}o{self.name}")


def hom(src, dst, fn, name="") -> Homomorphism:
    return Homomorphism(src, dst, tuple(dst.index(fn(e)) for e in src.elements), name)


def corpus_homomorphisms() -> list:
    """A curated list of homomorphisms between corpus semigroups."""
    c = corpus()
    Z2, Z3, Z4, LZ2, SL2, S3 = (c[n] for n in ("Z2", "Z3", "Z4", "LZ2", "SL2", "S3"))

    def sign(p):
        inv = sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j])
        return str(inv % 2)

    out = [hom(m, m, lambda e: e, f"id_{m.name}") for m in c.values()]
    out += [
        hom(Z4, Z2, lambda e: str(int(e) % 2), "Z4->Z2"),
        hom(Z2, Z4, lambda e: str(2 * int(e)), "Z2->Z4"),
        hom(Z4, Z4, lambda e: str(3 * int(e) % 4), "Z4:neg"),
        hom(Z4, Z4, lambda e: str(2 * int(e) % 4), "Z4:double"),
        hom(Z3, Z3, lambda e: str(2 * int(e) % 3), "Z3:neg"),
        hom(Z2, Z2, lambda e: "0", "Z2:trivial"),
        hom(S3, Z2, lambda e: sign(tuple(int(ch) for ch in e)), "S3->Z2"),
        hom(Z2, S3, lambda e: "012" if e == "0" else "102", "Z2->S3"),
        hom(Z3, S3, lambda e: ["012", "120", "201"][int(e)], "Z3->S3"),
        hom(Z2, SL2, lambda e: "1", "Z2->SL2"),
        hom(SL2, SL2, lambda e: "0", "SL2:zero"),
        hom(LZ2, LZ2, lambda e: {"l0": "l1", "l1": "l0"}[e], "LZ2:swap"),
        hom(LZ2, SL2, lambda e: "1", "LZ2->SL2"),
    ]
    return out


def composable_chains(homs, length: int):
    """All sequences ``f_1, ..., f_length`` with ``f_i.dst == f_{i+1}.src``."""
    chains = [[f] for f in homs]
    for _ in range(length - 1):
        chains = [ch + [g] for ch in chains for g in homs if g.src == ch[-1].dst]
    return chains


# -- the f-bialgebra -------------------------------------------------------------

def _core_mult(M: FiniteSemigroup, A: GradedModule, ring: Ring):
    src, dst = BoxShape.uniform(A, 2, 1), BoxShape.uniform(A, 1, 1)
    one = ring(1)
    return func_map(src, dst, 0, ring, lambda x: {(M.mul(x[0], x[1]),): one}, "mult")


def _core_diag(A: GradedModule, ring: Ring):
    src, dst = BoxShape.uniform(A, 1, 1), BoxShape.uniform(A, 1, 2)
    one = ring(1)
    return func_map(src, dst, 0, ring, lambda x: {(x[0], x[0]): one}, "diag")


def morse_fbialgebra(M: FiniteSemigroup, ring: Ring = INT, max_leaves: int = 4):
    """``(A, alpha)`` with ``A = R[M]`` in degree 0."""
    A = M.module()
    alpha = ForestyMorphism(UD, A, A, -1, ring, max_leaves=max_leaves, label=f"alpha[{M.name}]")
    two, one = MultiIndex((2,)), MultiIndex((1,))
    alpha.set((two, one), _core_mult(M, A, ring))
    alpha.set((one, two), _core_diag(A, ring))
    # one ascending vertex over b columns: delete the last vertical descending tree repeatedly
    for b in range(2, max_leaves + 1):
        alpha.set((two, ones(b)), d_cols_model(alpha, two, ones(b), b))
    for a in range(2, max_leaves + 1):
        alpha.set((ones(a), two), d_rows_model(alpha, ones(a), a, two))
    # the vertex sits in one tree among vertical ones
    for k in multi_indices(max_leaves):
        if sorted(k)[-1] == 2 and sum(k) - len(k) == 1 and len(k) > 1:
            for b in range(1, max_leaves + 1):
                alpha.set((k, ones(b)), v_rows_model(alpha, k, b))
            for a in range(1, max_leaves + 1):
                alpha.set((ones(a), k), v_cols_model(alpha, a, k))
    return A, alpha


def direct_component(M: FiniteSemigroup, k: MultiIndex, l: MultiIndex, x) -> tuple:
    """Read the single-vertex biforest off the grid, without any identification.

    Ascending vertex in tree ``i``: multiply its two leaf rows entrywise.
    Descending vertex in tree ``j``: repeat that column.
    """
    b = len(l)
    rows = [list(x[r * b:(r + 1) * b]) for r in range(sum(k))]
    out_rows, r = [], 0
    for e in k:
        row = rows[r]
        for extra in rows[r + 1:r + e]:
            row = [M.mul(p, q) for p, q in zip(row, extra)]
        out_rows.append(row)
        r += e
    flat = []
    for row in out_rows:
        for c, e in enumerate(l):
            flat.extend([row[c]] * e)
    return tuple(flat)


def morse_pushforward(f: Homomorphism, ring: Ring = INT, max_leaves: int = 4) -> ForestyMorphism:
    """``f`` applied entrywise on every vertical box."""
    A, B = f.src.module(), f.dst.module()
    phi = ForestyMorphism(UD, A, B, 0, ring, max_leaves=max_leaves, label=f"{f.name or 'f'}_*")
    one, img = ring(1), f.images
    for a in range(1, max_leaves + 1):
        for b in range(1, max_leaves + 1):
            src, dst = BoxShape.uniform(A, a, b), BoxShape.uniform(B, a, b)
            phi.set((ones(a), ones(b)), func_map(src, dst, 0, ring, lambda x: {tuple(img[e] for e in x): one}, "push",
                                                      cache=TENSOR_CACHE))
    return phi


def morse_simplex(chain, ring: Ring = INT, max_leaves: int = 4) -> NerveSimplex:
    """Simplex of the chain ``M_0 -> M_1 -> ... -> M_n``.

    Vertex ``j`` is ``R[M_{n-j}]`` so that ``phi_sigma`` runs from the last
    vertex of ``sigma`` to the first; edges are pushforwards of composites and
    all higher maps vanish.
    """
    for f, g in zip(chain, chain[1:]):
        if f.dst != g.src:
            raise ValueError(f"{f.name} and {g.name} are not composable")
    sgs = [chain[0].src] + [f.dst for f in chain]
    n = len(chain)
    objs = []
    for j in range(n + 1):
        A, alpha = morse_fbialgebra(sgs[n - j], ring, max_leaves)
        objs.append(((A,), alpha))
    s = NerveSimplex(UD, objs)
    for sigma in s.faces():
        m = len(sigma) - 1
        lo, hi = n - sigma[-1], n - sigma[0]     # semigroup positions: source lo, target hi
        if m == 1:
            h = chain[lo]
            for f in chain[lo + 1:hi]:
                h = h.then(f)
            s.maps[sigma] = morse_pushforward(h, ring, max_leaves)
        else:
            A, B = objs[sigma[-1]][0][0], objs[sigma[0]][0][0]
            s.maps[sigma] = ForestyMorphism(UD, A, B, m - 1, ring, max_leaves=max_leaves, label="0")
    return s


# -- G x X x H triples ------------------------------------------------------------

class ActionAxiomError(ValueError):
    pass


@dataclass(frozen=True)
class ActionTriple:
    """``G`` acting on ``X`` from the left and ``H`` from the right."""
    G: FiniteSemigroup
    X: tuple
    H: FiniteSemigroup
    left: tuple    # left[g][x] -> x
    right: tuple   # right[x][h] -> x

    def __post_init__(self):
        X = tuple(str(x) for x in self.X)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "left", tuple(tuple(int(c) for c in r) for r in self.left))
        object.__setattr__(self, "right", tuple(tuple(int(c) for c in r) for r in self.right))
        G, H, L, R, n = self.G, self.H, self.left, self.right, len(X)
        if len(L) != len(G) or any(len(r) != n for r in L) or len(R) != n or any(len(r) != len(H) for r in R):
            raise ActionAxiomError("action tables have the wrong shape")
        for g1, g2, x in product(range(len(G)), range(len(G)), range(n)):
            if L[G.mul(g1, g2)][x] != L[g1][L[g2][x]]:
                raise ActionAxiomError("left action is not associative")
        for x, h1, h2 in product(range(n), range(len(H)), range(len(H))):
            if R[x][H.mul(h1, h2)] != R[R[x][h1]][h2]:
                raise ActionAxiomError("right action is not associative")
        for g, x, h in product(range(len(G)), range(n), range(len(H))):
            if R[L[g][x]][h] != L[g][R[x][h]]:
                raise ActionAxiomError("left and right actions do not commute")
        for S, act in ((G, lambda e, x: L[e][x]), (H, lambda e, x: R[x][e])):
            e = S.identity_element()
            if e is not None and any(act(e, x) != x for x in range(n)):
                raise ActionAxiomError("identity element does not act trivially")

    def to_json(self):
        return {"G": self.G.to_json(), "X": list(self.X), "H": self.H.to_json(),
                "left": [list(r) for r in self.left], "right": [list(r) for r in self.right]}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls(FiniteSemigroup.from_json(data["G"]), tuple(data["X"]), FiniteSemigroup.from_json(data["H"]),
                   tuple(tuple(r) for r in data["left"]), tuple(tuple(r) for r in data["right"]))


def trivial_triple() -> ActionTriple:
    one = cyclic(1)
    return ActionTriple(one, ("x",), one, ((0,),), ((0,),))


def translation_triple() -> ActionTriple:
    """``Z/2`` acting on itself by translation, trivial right group."""
    Z2, one = cyclic(2), cyclic(1)
    return ActionTriple(Z2, ("x0", "x1"), one, ((0, 1), (1, 0)), ((0,), (1,)))


def triple_parts(T: ActionTriple):
    """Element index ranges of G, X, H and pt inside ``triple_to_monoid(T)``."""
    g, x, h = len(T.G), len(T.X), len(T.H)
    return {"G": range(0, g), "X": range(g, g + x), "H": range(g + x, g + x + h), "pt": range(g + x + h, g + x + h + 1)}


def triple_to_monoid(T: ActionTriple) -> FiniteSemigroup:
    """``G u X u H u {pt}``: products ``GG, GX, XH, HH`` as given, everything else ``pt``."""
    parts = triple_parts(T)
    g0, x0, h0, pt = parts["G"].start, parts["X"].start, parts["H"].start, parts["pt"].start
    names = ([f"G:{e}" for e in T.G.elements] + [f"X:{e}" for e in T.X] + [f"H:{e}" for e in T.H.elements] + ["pt"])
    n = len(names)

    def part(i):
        for key, r in parts.items():
            if i in r:
                return key

    table = []
    for i in range(n):
        row = []
        for j in range(n):
            pi, pj = part(i), part(j)
            if pi == "G" and pj == "G":
                row.append(g0 + T.G.mul(i - g0, j - g0))
            elif pi == "G" and pj == "X":
                row.append(x0 + T.left[i - g0][j - x0])
            elif pi == "X" and pj == "H":
                row.append(x0 + T.right[i - x0][j - h0])
            elif pi == "H" and pj == "H":
                row.append(h0 + T.H.mul(i - h0, j - h0))
            else:
                row.append(pt)
        table.append(tuple(row))
    return FiniteSemigroup(f"T({T.G.name},{len(T.X)},{T.H.name})", tuple(names), tuple(table))


def extract_bimodule_blocks(T: ActionTriple, ring: Ring = INT, max_leaves: int = 4):
    """Restrict the f-bialgebra of ``triple_to_monoid(T)`` to the G/X/H blocks.

    Returns a bimodule-indexed family ``mu`` over the triple of modules
    ``(R[G], R[X], R[H])``.  Outputs with an entry outside the expected block
    (for instance in ``pt``) are dropped.
    """
    S = triple_to_monoid(T)
    _, alpha = morse_fbialgebra(S, ring, max_leaves)
    parts = triple_parts(T)
    mods = (GradedModule(tuple((f"G:{e}", 0) for e in T.G.elements), "G"),
            GradedModule(tuple((f"X:{e}", 0) for e in T.X), "X"),
            GradedModule(tuple((f"H:{e}", 0) for e in T.H.elements), "H"))
    offset = {mods[0]: parts["G"].start, mods[1]: parts["X"].start, mods[2]: parts["H"].start}
    mu = ForestyMorphism(BIMOD, mods, mods, -1, ring, max_leaves=max_leaves, label=f"mu[{S.name}]")
    for idx in BIMOD.indices(max_leaves):
        full = alpha.component((idx.k, idx.l))
        if full.kind == "zero":
            continue
        src, dst = BIMOD.shapes(idx, mods, mods)
        mu.set(idx, func_map(src, dst, full.degree, ring, _restricted(full, src, dst, offset), "block"))
    return mu


def _restricted(full, src: BoxShape, dst: BoxShape, offset):
    w_in, w_out = src.width, dst.width
    in_off = [offset[src.rows[p // w_in]] for p in range(src.size)]
    out_rows = [(offset[m], len(m)) for m in dst.rows]

    def fn(x):
        y_full = full.apply(tuple(g + o for g, o in zip(x, in_off)))
        out = {}
        for y, c in y_full.items():
            loc = []
            for p, g in enumerate(y):
                o, n = out_rows[p // w_out]
                if not o <= g < o + n:
                    break
                loc.append(g - o)
            else:
                out[tuple(loc)] = c
        return out
    return fn


def block_table(mu: ForestyMorphism, emit_limit: int = 256):
    """Explicit ``(index, [(input names, output names, coeff)])`` for components with few inputs."""
    rows = []
    for idx in mu.system.indices(mu.max_leaves):
        m = mu.component(idx)
        if m.kind == "zero":
            continue
        n = m.src.count()
        if n > emit_limit:
            rows.append((idx, None, n))
            continue
        entries = []
        for x in m.src.basis():
            for y, c in m.apply(x).items():
                entries.append((m.src.names(x), m.dst.names(y), c))
        rows.append((idx, entries, n))
    return rows
