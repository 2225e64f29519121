"""Foresty linear categories: morphism families indexed by forest types.

Four index systems share one composition engine:

* ``UD``: pairs ``(k, l)``; component ``(k, l)`` maps ``(A^n(l))^|k|`` to ``(B^|l|)^n(k)``.
* ``U``: ascending only, ``A^|k| -> B^n(k)`` (a single column).
* ``D``: descending only, ``A^n(l) -> B^|l|`` (a single row).
* ``BIMOD``: ``(k, l, eps, mark)`` over triples of modules; see ``BimodIndex``.

In a composite ``psi o phi`` the first-applied ``phi`` owns the top layers
``(k1, l1)`` and ``psi`` the bottom ``(k0, l0)``, with ``k = k1 # k0`` and
``l = l0 # l1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple, Optional

from .bimultihedron import rho as rho_sign, StratumType
from .gradedalg import (BoxMap, BoxShape, GradedModule, Ring, box_differential, check_zero, hashed_map,
                        random_sparse_map, col_blocks, compare_and_check_zero,
                        compare_maps, compose_maps,
                        grid_differential, identity_map, row_blocks, scale_map, shuffle_col_blocks,
                        shuffle_row_blocks, sum_maps, tensor_blocks, zero_map, DEFAULT_EXHAUSTIVE_LIMIT,
                        DEFAULT_SAMPLES)
from .multiindex import MultiIndex, heartsuit, multi_indices, ones, splittings, tilde, v
from .report import Report, timed


# -- index systems ----------------------------------------------------------

class BimodIndex(NamedTuple):
    """Bimodule index over an ascending type ``k``.

    ``eps = 1``: ``mark`` is the marked leaf (1-based); input rows left of it
    carry the left module, the marked row the middle one, the rest the right
    module.  Output trees before the marked tree are left, the marked tree is
    middle, the rest right.
    ``eps = 0``: ``mark`` is a cut ``t`` in ``0..n(k)``; the first ``t`` trees
    (and their leaves) are left, the rest right.
    """
    k: MultiIndex
    l: MultiIndex
    eps: int
    mark: int

    def __repr__(self):
        return f"({self.k!r}|{self.eps}@{self.mark};{self.l!r})"


def tree_of_leaf(k: MultiIndex, leaf: int) -> int:
    """1-based index of the tree of ``k`` containing the 1-based ``leaf``."""
    total = 0
    for i, e in enumerate(k, start=1):
        total += e
        if leaf <= total:
            return i
    raise ValueError(f"leaf {leaf} out of range for {k}")


class Split(NamedTuple):
    lower: object   # index of the bottom factor (psi)
    upper: object   # index of the top factor (phi)
    k0: MultiIndex
    k1: MultiIndex
    l0: MultiIndex
    l1: MultiIndex


class IndexSystem:
    name = "?"
    arity = 1   # number of modules in an object

    def kl(self, idx):
        raise NotImplementedError

    def v(self, idx) -> int:
        k, l = self.kl(idx)
        return v(k) + v(l)

    def shapes(self, idx, src, dst):
        raise NotImplementedError

    def splits(self, idx):
        raise NotImplementedError

    def sign(self, sp: Split, deg: int) -> int:
        raise NotImplementedError

    def is_identity_index(self, idx) -> bool:
        k, l = self.kl(idx)
        return k.is_vertical() and l.is_vertical()

    def indices(self, max_leaves: int):
        raise NotImplementedError

    def fmt(self, idx) -> str:
        k, l = self.kl(idx)
        return f"{k!r};{l!r}"


def _ud_sign(sp: Split, deg: int) -> int:
    x0, x1, y0, y1 = v(sp.k0), v(sp.k1), v(sp.l0), v(sp.l1)
    return (heartsuit(sp.k1, sp.k0) + heartsuit(sp.l0, sp.l1) + y0 * (x1 + y1) + (x0 + y0) * deg) % 2


@lru_cache(maxsize=None)
def _kl_splits(k: MultiIndex, l: MultiIndex):
    return [(sk, sl) for sk in splittings(k) for sl in splittings(l)]


class UDSystem(IndexSystem):
    name = "ud"

    def kl(self, idx):
        return idx

    def shapes(self, idx, src, dst):
        k, l = idx
        return BoxShape.uniform(src[0], sum(k), len(l)), BoxShape.uniform(dst[0], len(k), sum(l))

    def splits(self, idx):
        k, l = idx
        # l = sharp(l0, l1): l0 is the upper layer of l and belongs to the bottom box
        return [Split((sk.lower, sl.upper), (sk.upper, sl.lower), sk.lower, sk.upper, sl.upper, sl.lower)
                for sk, sl in _kl_splits(k, l)]

    def sign(self, sp, deg):
        return _ud_sign(sp, deg)

    def indices(self, max_leaves):
        return [(k, l) for k in multi_indices(max_leaves) for l in multi_indices(max_leaves)]


class USystem(IndexSystem):
    name = "u"
    _one = MultiIndex((1,))

    def kl(self, idx):
        return idx, self._one

    def shapes(self, idx, src, dst):
        return BoxShape.uniform(src[0], sum(idx), 1), BoxShape.uniform(dst[0], len(idx), 1)

    def splits(self, idx):
        one = self._one
        return [Split(sk.lower, sk.upper, sk.lower, sk.upper, one, one) for sk in splittings(idx)]

    def sign(self, sp, deg):
        return (heartsuit(sp.k1, sp.k0) + v(sp.k0) * deg) % 2

    def is_identity_index(self, idx):
        return idx.is_vertical()

    def indices(self, max_leaves):
        return list(multi_indices(max_leaves))

    def fmt(self, idx):
        return repr(idx)


class DSystem(IndexSystem):
    name = "d"
    _one = MultiIndex((1,))

    def kl(self, idx):
        return self._one, idx

    def shapes(self, idx, src, dst):
        return BoxShape.uniform(src[0], 1, len(idx)), BoxShape.uniform(dst[0], 1, sum(idx))

    def splits(self, idx):
        one = self._one
        return [Split(sl.upper, sl.lower, one, one, sl.upper, sl.lower) for sl in splittings(idx)]

    def sign(self, sp, deg):
        y0, y1 = v(sp.l0), v(sp.l1)
        return (heartsuit(sp.l0, sp.l1) + y0 * (y1 + deg)) % 2

    def is_identity_index(self, idx):
        return idx.is_vertical()

    def indices(self, max_leaves):
        return list(multi_indices(max_leaves))

    def fmt(self, idx):
        return repr(idx)


class BimodSystem(IndexSystem):
    """Objects are triples (left, middle, right) of modules."""
    name = "bimod"
    arity = 3

    def kl(self, idx):
        return idx.k, idx.l

    @staticmethod
    def in_rows(idx, mods):
        left, mid, right = mods
        k = idx.k
        if idx.eps == 1:
            p = idx.mark
            return tuple(left if i < p else mid if i == p else right for i in range(1, sum(k) + 1))
        cut = sum(k[:idx.mark])
        return tuple(left if i <= cut else right for i in range(1, sum(k) + 1))

    @staticmethod
    def out_rows(idx, mods):
        left, mid, right = mods
        n = len(idx.k)
        if idx.eps == 1:
            t = tree_of_leaf(idx.k, idx.mark)
            return tuple(left if i < t else mid if i == t else right for i in range(1, n + 1))
        return tuple(left if i <= idx.mark else right for i in range(1, n + 1))

    def shapes(self, idx, src, dst):
        return (BoxShape(self.in_rows(idx, src), len(idx.l)), BoxShape(self.out_rows(idx, dst), sum(idx.l)))

    def splits(self, idx):
        return _bimod_splits(idx)

    def sign(self, sp, deg):
        return _ud_sign(sp, deg)

    def indices(self, max_leaves):
        return _bimod_indices(max_leaves)

    def fmt(self, idx):
        return repr(idx)


@lru_cache(maxsize=None)
def _bimod_indices(max_leaves):
    out = []
    for k in multi_indices(max_leaves):
        for l in multi_indices(max_leaves):
            out += [BimodIndex(k, l, 1, p) for p in range(1, sum(k) + 1)]
            out += [BimodIndex(k, l, 0, t) for t in range(len(k) + 1)]
    return out


@lru_cache(maxsize=None)
def _bimod_splits(idx):
    """Marker propagation: a marked leaf stays with the top layer and marks its tree below;
    a cut between trees below becomes the cut after the corresponding leaves above."""
    out = []
    for sk, sl in _kl_splits(idx.k, idx.l):
        k0, k1, l0, l1 = sk.lower, sk.upper, sl.upper, sl.lower
        if idx.eps == 1:
            up = BimodIndex(k1, l1, 1, idx.mark)
            low = BimodIndex(k0, l0, 1, tree_of_leaf(k1, idx.mark))
        else:
            low = BimodIndex(k0, l0, 0, idx.mark)
            up = BimodIndex(k1, l1, 0, sum(k0[:idx.mark]))
        out.append(Split(low, up, k0, k1, l0, l1))
    return out


UD, U, D, BIMOD = UDSystem(), USystem(), DSystem(), BimodSystem()
SYSTEMS = {s.name: s for s in (UD, U, D, BIMOD)}


# -- morphisms ----------------------------------------------------------------

class ForestyMorphism:
    """A family of box maps indexed by ``system``, known up to ``max_leaves``.

    ``src`` and ``dst`` are tuples of modules (length ``system.arity``).
    Components not given are zero, unless a ``default`` callable supplies them.
    """

    def __init__(self, system: IndexSystem, src, dst, degree: int, ring: Ring, components=None,
                 max_leaves: int = 4, default=None, label=""):
        if isinstance(src, GradedModule):
            src = (src,)
        if isinstance(dst, GradedModule):
            dst = (dst,)
        if len(src) != system.arity or len(dst) != system.arity:
            raise ValueError(f"{system.name} objects have {system.arity} modules")
        self.system, self.src, self.dst = system, tuple(src), tuple(dst)
        self.degree, self.ring, self.max_leaves = degree, ring, max_leaves
        self.default, self.label = default, label
        self._comps, self._absent = {}, set()
        for idx, m in (components or {}).items():
            self.set(idx, m)

    def within(self, idx) -> bool:
        k, l = self.system.kl(idx)
        return sum(k) <= self.max_leaves and sum(l) <= self.max_leaves

    def shapes(self, idx):
        return self.system.shapes(idx, self.src, self.dst)

    def internal_degree(self, idx) -> int:
        return self.degree + self.system.v(idx)

    def set(self, idx, m: BoxMap):
        s, t = self.shapes(idx)
        if m.src != s or m.dst != t:
            raise ValueError(f"component {self.system.fmt(idx)} has shape {m.src}->{m.dst}, expected {s}->{t}")
        if m.degree != self.internal_degree(idx):
            raise ValueError(f"component {self.system.fmt(idx)} has degree {m.degree}, "
                             f"expected {self.internal_degree(idx)}")
        if m.ring != self.ring:
            raise ValueError("ring mismatch")
        self._comps[idx] = m

    def get(self, idx) -> Optional[BoxMap]:
        """The component, or ``None`` when it is zero by construction."""
        m = self._comps.get(idx)
        if m is not None:
            return m if m.kind != "zero" else None
        if self.default is not None and idx not in self._absent:
            m = self.default(idx)
            if m is not None:
                self._comps[idx] = m
                return m if m.kind != "zero" else None
            self._absent.add(idx)
        return None

    def component(self, idx) -> BoxMap:
        m = self.get(idx)
        if m is not None:
            return m
        s, t = self.shapes(idx)
        return zero_map(s, t, self.internal_degree(idx), self.ring)

    __getitem__ = component

    def explicit(self):
        return dict(self._comps)

    def indices(self):
        return [idx for idx in self.system.indices(self.max_leaves)]

    def support(self):
        return [idx for idx in self.indices() if self.component(idx).kind != "zero"]

    def restrict(self, max_leaves: int) -> "ForestyMorphism":
        out = ForestyMorphism(self.system, self.src, self.dst, self.degree, self.ring,
                              max_leaves=min(max_leaves, self.max_leaves), default=self.default, label=self.label)
        for idx, m in self._comps.items():
            if out.within(idx):
                out._comps[idx] = m
        return out

    def __repr__(self):
        return f"ForestyMorphism[{self.system.name}]({self.label or '?'}, deg {self.degree}, {len(self._comps)} explicit)"


def _check_composable(psi: ForestyMorphism, phi: ForestyMorphism):
    if psi.system is not phi.system:
        raise ValueError("morphisms live in different categories")
    if phi.dst != psi.src:
        raise ValueError("target of the first map is not the source of the second")
    if phi.ring != psi.ring:
        raise ValueError("ring mismatch")


def compose(psi: ForestyMorphism, phi: ForestyMorphism) -> ForestyMorphism:
    """``psi o phi`` with the splitting signs of the category."""
    _check_composable(psi, phi)
    sysm = phi.system
    bound = min(psi.max_leaves, phi.max_leaves)
    deg = psi.degree + phi.degree
    out = ForestyMorphism(sysm, phi.src, psi.dst, deg, phi.ring, max_leaves=bound,
                          label=f"({psi.label}o{phi.label})")
    for idx in sysm.indices(bound):
        terms = []
        for sp in sysm.splits(idx):
            f = phi.get(sp.upper)
            if f is None:
                continue
            g = psi.get(sp.lower)
            if g is None:
                continue
            # the sign uses the degree of phi as a family, i.e. without the v-shift
            s = sysm.sign(sp, phi.degree)
            terms.append((-1 if s else 1, compose_maps(g, f)))
        if terms:
            m = sum_maps(terms)
            if m.kind != "zero":
                out._comps[idx] = m
    return out


def add(*terms) -> ForestyMorphism:
    """Linear combination of ``(coeff, morphism)`` pairs."""
    terms = list(terms)
    f0 = terms[0][1]
    bound = min(f.max_leaves for _, f in terms)
    for _, f in terms:
        if f.system is not f0.system or f.src != f0.src or f.dst != f0.dst or f.degree != f0.degree:
            raise ValueError("cannot add morphisms of different types")
    out = ForestyMorphism(f0.system, f0.src, f0.dst, f0.degree, f0.ring, max_leaves=bound)
    for idx in f0.system.indices(bound):
        parts = [(c, f.get(idx)) for c, f in terms]
        parts = [(c, m) for c, m in parts if m is not None and f0.ring(c)]
        if parts:
            m = sum_maps(parts)
            if m.kind != "zero":
                out._comps[idx] = m
    return out


def scale(c, f: ForestyMorphism) -> ForestyMorphism:
    return add((c, f))


def identity(system: IndexSystem, obj, ring: Ring, max_leaves=4) -> ForestyMorphism:
    if isinstance(obj, GradedModule):
        obj = (obj,)
    obj = tuple(obj)

    def default(idx):
        if system.is_identity_index(idx):
            s, t = system.shapes(idx, obj, obj)
            return identity_map(s, ring)
        return None
    f = ForestyMorphism(system, obj, obj, 0, ring, max_leaves=max_leaves, default=default, label="id")
    for idx in system.indices(max_leaves):
        f.component(idx)
    return f


def differential_object(system: IndexSystem, obj, ds: dict, ring: Ring, max_leaves=4) -> ForestyMorphism:
    """Object whose only structure is the tensor differential on vertical boxes.

    ``ds`` maps each module of ``obj`` to a square-zero degree ``-1`` map on
    one cell.
    """
    if isinstance(obj, GradedModule):
        obj = (obj,)
    obj = tuple(obj)

    def default(idx):
        if system.is_identity_index(idx):
            s, _ = system.shapes(idx, obj, obj)
            return box_differential(s, {m: ds[m] for m in set(s.rows)})
        return None
    f = ForestyMorphism(system, obj, obj, -1, ring, max_leaves=max_leaves, default=default, label="d")
    for idx in system.indices(max_leaves):
        f.component(idx)
    return f


def random_morphism(system: IndexSystem, src, dst, degree: int, ring: Ring, rng, max_leaves=4, support=4,
                    vertical_cells=4, limit=DEFAULT_EXHAUSTIVE_LIMIT) -> ForestyMorphism:
    """Random family: the vertical components on grids of at most ``vertical_cells`` input
    cells, plus ``support`` others anywhere.

    Vertical components compose with everything, so composites of random
    families are far from zero.  Small boxes get explicit tables.
    """
    f = ForestyMorphism(system, src, dst, degree, ring, max_leaves=max_leaves, label="rand")
    idxs = system.indices(max_leaves)
    chosen = [idx for idx in idxs if system.is_identity_index(idx) and f.shapes(idx)[0].size <= vertical_cells]
    rest = [idx for idx in idxs if idx not in set(chosen)]
    chosen += rng.sample(rest, min(support, len(rest)))
    for idx in chosen:
        s, t = f.shapes(idx)
        deg = f.internal_degree(idx)
        if s.count() * t.count() <= limit:
            m = random_sparse_map(s, t, deg, ring, rng)
        else:
            m = hashed_map(s, t, deg, ring, rng.getrandbits(64))
        f.set(idx, m)
    return f


def zero_morphism(system, src, dst, degree, ring, max_leaves=4) -> ForestyMorphism:
    return ForestyMorphism(system, src, dst, degree, ring, max_leaves=max_leaves, label="0")


def hom_differential(beta: ForestyMorphism, phi: ForestyMorphism, alpha: ForestyMorphism) -> ForestyMorphism:
    """``beta o phi - (-1)^deg(phi) phi o alpha``."""
    if alpha.degree != -1 or beta.degree != -1:
        raise ValueError("differentials must have degree -1")
    a = compose(beta, phi)
    b = compose(phi, alpha)
    return add((1, a), (-1 if phi.degree % 2 == 0 else 1, b))


# -- comparing families ---------------------------------------------------------

@dataclass
class CheckOptions:
    max_leaves: int = 4
    limit: int = DEFAULT_EXHAUSTIVE_LIMIT
    samples: int = DEFAULT_SAMPLES
    seed: int = 0


def compare_morphisms(f: ForestyMorphism, g: ForestyMorphism, relation: str, report: Report,
                      opts: CheckOptions = None, where=()):
    opts = opts or CheckOptions()
    bound = min(f.max_leaves, g.max_leaves, opts.max_leaves)
    ok = True
    for idx in f.system.indices(bound):
        if f.get(idx) is None and g.get(idx) is None:
            report.checked += 1
            continue
        a, b = f.component(idx), g.component(idx)
        cmp = compare_maps(a, b, opts.limit, opts.samples, opts.seed)
        ok &= report.record(cmp, relation, tuple(where) + (f.system.fmt(idx),))
    return ok


def check_vanishes(f: ForestyMorphism, relation: str, report: Report, opts: CheckOptions = None, where=()):
    opts = opts or CheckOptions()
    ok = True
    for idx in f.system.indices(min(f.max_leaves, opts.max_leaves)):
        m = f.get(idx)
        if m is None:
            report.checked += 1
            continue
        cmp = check_zero(m, opts.limit, opts.samples, opts.seed)
        ok &= report.record(cmp, relation, tuple(where) + (f.system.fmt(idx),))
    return ok


# -- simplification relations -------------------------------------------------

def positioned(k: MultiIndex):
    """``(i, k_i)`` if ``k`` has exactly one entry > 1 (1-based ``i``), else None."""
    big = [(i, e) for i, e in enumerate(k, start=1) if e > 1]
    return big[0] if len(big) == 1 else None


def v_rows_model(alpha: ForestyMorphism, k: MultiIndex, b: int) -> BoxMap:
    """``id (x) alpha^{(k_i)}_{1_b} (x) id`` under the row identification."""
    i, ki = positioned(k)
    A = alpha.src[0]
    a = len(k)
    l = ones(b)
    core = alpha.component((MultiIndex((ki,)), l))
    src, dst = alpha.shapes((k, l))
    ring = alpha.ring
    fs = [identity_map(BoxShape.uniform(A, i - 1, b), ring), core, identity_map(BoxShape.uniform(A, a - i, b), ring)]
    sizes_in, sizes_out = [i - 1, ki, a - i], [i - 1, 1, a - i]
    keep = [j for j in range(3) if sizes_in[j]]
    return tensor_blocks([fs[j] for j in keep], src, dst,
                         row_blocks(src, [sizes_in[j] for j in keep]), row_blocks(dst, [sizes_out[j] for j in keep]))


def v_cols_model(alpha: ForestyMorphism, a: int, l: MultiIndex) -> BoxMap:
    """``id (x) alpha^{1_a}_{(l_j)} (x) id`` under the column identification."""
    j, lj = positioned(l)
    A = alpha.src[0]
    b = len(l)
    k = ones(a)
    core = alpha.component((k, MultiIndex((lj,))))
    src, dst = alpha.shapes((k, l))
    ring = alpha.ring
    fs = [identity_map(BoxShape.uniform(A, a, j - 1), ring), core, identity_map(BoxShape.uniform(A, a, b - j), ring)]
    w_in, w_out = [j - 1, 1, b - j], [j - 1, lj, b - j]
    keep = [t for t in range(3) if w_in[t]]
    return tensor_blocks([fs[t] for t in keep], src, dst,
                         col_blocks(src, [w_in[t] for t in keep]), col_blocks(dst, [w_out[t] for t in keep]))


def tilde_row(alpha: ForestyMorphism, l: MultiIndex) -> BoxMap:
    """``alpha~^1_l``: one row, ``id`` on entries 1 and ``alpha^1_2`` on entries 2."""
    A = alpha.src[0]
    ring = alpha.ring
    one = MultiIndex((1,))
    fs = [identity_map(BoxShape.uniform(A, 1, 1), ring) if e == 1 else alpha.component((one, MultiIndex((2,))))
          for e in l]
    src, dst = BoxShape.uniform(A, 1, len(l)), BoxShape.uniform(A, 1, sum(l))
    return tensor_blocks(fs, src, dst, col_blocks(src, [1] * len(l)), col_blocks(dst, list(l)))


def tilde_col(alpha: ForestyMorphism, k: MultiIndex) -> BoxMap:
    """``alpha~^k_1``: one column, ``id`` on entries 1 and ``alpha^2_1`` on entries 2."""
    A = alpha.src[0]
    ring = alpha.ring
    one = MultiIndex((1,))
    fs = [identity_map(BoxShape.uniform(A, 1, 1), ring) if e == 1 else alpha.component((MultiIndex((2,)), one))
          for e in k]
    src, dst = BoxShape.uniform(A, sum(k), 1), BoxShape.uniform(A, len(k), 1)
    return tensor_blocks(fs, src, dst, row_blocks(src, list(k)), row_blocks(dst, [1] * len(k)))


def d_rows_model(alpha: ForestyMorphism, k: MultiIndex, i: int, l: MultiIndex) -> BoxMap:
    """Vertical tree ``i`` of ``k`` deleted: ``alpha^{k^}_l (x) alpha~^1_l`` after moving its row last."""
    khat = MultiIndex(k[:i - 1] + k[i:])
    p = sum(k[:i - 1]) + 1       # the row of the deleted tree's only leaf
    src, dst = alpha.shapes((k, l))
    rest = alpha.component((khat, l))
    tail = tilde_row(alpha, l)
    in_blocks = shuffle_row_blocks(src, p - 1, 1, src.a - p)
    out_blocks = shuffle_row_blocks(dst, i - 1, 1, dst.a - i)
    return tensor_blocks([rest, tail], src, dst, in_blocks, out_blocks)


def d_cols_model(alpha: ForestyMorphism, k: MultiIndex, l: MultiIndex, i: int) -> BoxMap:
    """Vertical tree ``i`` of ``l`` deleted, through the transposed identification."""
    lhat = MultiIndex(l[:i - 1] + l[i:])
    q = sum(l[:i - 1]) + 1
    src, dst = alpha.shapes((k, l))
    rest = alpha.component((k, lhat))
    tail = tilde_col(alpha, k)
    in_blocks = shuffle_col_blocks(src, i - 1, 1, src.width - i)
    out_blocks = shuffle_col_blocks(dst, q - 1, 1, dst.width - q)
    return tensor_blocks([rest, tail], src, dst, in_blocks, out_blocks)


def simplification_checks(alpha: ForestyMorphism, report: Report, opts: CheckOptions):
    """Relations T, V (including the vanishing cases) and D for an f-bialgebra."""
    n = opts.max_leaves
    A = alpha.src[0]
    d = alpha.component((ones(1), ones(1)))
    for k in multi_indices(n):
        for l in multi_indices(n):
            m = alpha.component((k, l))
            loc = (f"{k!r};{l!r}",)
            kv, lv = k.is_vertical(), l.is_vertical()
            if kv and lv:
                report.record(compare_maps(m, grid_differential(d, len(k), len(l)), opts.limit, opts.samples,
                                           opts.seed), "T", loc)
                continue
            if kv:
                if len(tilde(l)) >= 2:
                    report.record(check_zero(m, opts.limit, opts.samples, opts.seed), "V-vanish", loc)
                elif len(l) > 1:
                    report.record(compare_maps(m, v_cols_model(alpha, len(k), l), opts.limit, opts.samples,
                                               opts.seed), "V-cols", loc)
            if lv:
                if len(tilde(k)) >= 2:
                    report.record(check_zero(m, opts.limit, opts.samples, opts.seed), "V-vanish", loc)
                elif len(k) > 1:
                    report.record(compare_maps(m, v_rows_model(alpha, k, len(l)), opts.limit, opts.samples,
                                               opts.seed), "V-rows", loc)
            if l.is_almost_vertical() and len(k) >= 2:
                for i, e in enumerate(k, start=1):
                    if e == 1:
                        report.record(compare_maps(m, d_rows_model(alpha, k, i, l), opts.limit, opts.samples,
                                                   opts.seed), "D-rows", loc + (f"i={i}",))
            if k.is_almost_vertical() and len(l) >= 2:
                for i, e in enumerate(l, start=1):
                    if e == 1:
                        report.record(compare_maps(m, d_cols_model(alpha, k, l, i), opts.limit, opts.samples,
                                                   opts.seed), "D-cols", loc + (f"i={i}",))


def check_fbialgebra(alpha: ForestyMorphism, max_leaves=4, opts: CheckOptions = None) -> Report:
    opts = opts or CheckOptions(max_leaves=max_leaves)
    opts.max_leaves = max_leaves
    rep = Report("f-bialgebra")
    with timed(rep):
        if alpha.system is not UD:
            rep.error = "alpha must be a (k,l)-indexed family"
            return rep
        if alpha.degree != -1:
            rep.add("degree", (), f"alpha has degree {alpha.degree}, expected -1")
            return rep
        a = alpha.restrict(max_leaves)
        check_vanishes(compose(a, a), "alpha-alpha", rep, opts)
        simplification_checks(a, rep, opts)
    return rep


def w_rows_model(phi: ForestyMorphism, k: MultiIndex, b: int) -> BoxMap:
    l = ones(b)
    src, dst = phi.shapes((k, l))
    fs = [phi.component((MultiIndex((e,)), l)) for e in k]
    return tensor_blocks(fs, src, dst, row_blocks(src, list(k)), row_blocks(dst, [1] * len(k)))


def w_cols_model(phi: ForestyMorphism, a: int, l: MultiIndex) -> BoxMap:
    k = ones(a)
    src, dst = phi.shapes((k, l))
    fs = [phi.component((k, MultiIndex((e,)))) for e in l]
    return tensor_blocks(fs, src, dst, col_blocks(src, [1] * len(l)), col_blocks(dst, list(l)))


def check_fbialg_morphism(phi: ForestyMorphism, alpha: ForestyMorphism, beta: ForestyMorphism, max_leaves=4,
                          opts: CheckOptions = None) -> Report:
    opts = opts or CheckOptions(max_leaves=max_leaves)
    opts.max_leaves = max_leaves
    rep = Report("f-bialgebra morphism")
    with timed(rep):
        if phi.degree != 0:
            rep.add("degree", (), f"phi has degree {phi.degree}, expected 0")
            return rep
        p, a, b = phi.restrict(max_leaves), alpha.restrict(max_leaves), beta.restrict(max_leaves)
        check_vanishes(hom_differential(b, p, a), "d-phi", rep, opts)
        for k in multi_indices(max_leaves):
            for bb in range(1, max_leaves + 1):
                if len(k) > 1:
                    rep.record(compare_maps(p.component((k, ones(bb))), w_rows_model(p, k, bb), opts.limit,
                                            opts.samples, opts.seed), "W-rows", (f"{k!r};{ones(bb)!r}",))
        for l in multi_indices(max_leaves):
            for aa in range(1, max_leaves + 1):
                if len(l) > 1:
                    rep.record(compare_maps(p.component((ones(aa), l)), w_cols_model(p, aa, l), opts.limit,
                                            opts.samples, opts.seed), "W-cols", (f"{ones(aa)!r};{l!r}",))
    return rep


# -- ascending / descending objects ------------------------------------------

def _positioned_model_single(alpha: ForestyMorphism, idx, along_rows: bool) -> BoxMap:
    """``id (x) alpha^{(m)} (x) id`` on a single column (ascending) or row (descending)."""
    A = alpha.src[0]
    ring = alpha.ring
    i, m = positioned(idx)
    n = len(idx)
    core = alpha.component(MultiIndex((m,)))
    src, dst = alpha.shapes(idx)
    if along_rows:
        fs = [identity_map(BoxShape.uniform(A, i - 1, 1), ring), core, identity_map(BoxShape.uniform(A, n - i, 1), ring)]
        si, so = [i - 1, m, n - i], [i - 1, 1, n - i]
        keep = [t for t in range(3) if si[t]]
        return tensor_blocks([fs[t] for t in keep], src, dst, row_blocks(src, [si[t] for t in keep]),
                             row_blocks(dst, [so[t] for t in keep]))
    fs = [identity_map(BoxShape.uniform(A, 1, i - 1), ring), core, identity_map(BoxShape.uniform(A, 1, n - i), ring)]
    si, so = [i - 1, 1, n - i], [i - 1, m, n - i]
    keep = [t for t in range(3) if si[t]]
    return tensor_blocks([fs[t] for t in keep], src, dst, col_blocks(src, [si[t] for t in keep]),
                         col_blocks(dst, [so[t] for t in keep]))


def _check_one_sided(alpha: ForestyMorphism, system, name, max_leaves, opts) -> Report:
    opts = opts or CheckOptions(max_leaves=max_leaves)
    opts.max_leaves = max_leaves
    rep = Report(name)
    with timed(rep):
        if alpha.system is not system:
            rep.error = f"expected a {system.name}-indexed family"
            return rep
        if alpha.degree != -1:
            rep.add("degree", (), f"alpha has degree {alpha.degree}, expected -1")
            return rep
        a = alpha.restrict(max_leaves)
        check_vanishes(compose(a, a), "alpha-alpha", rep, opts)
        d = a.component(ones(1))
        along_rows = system is U
        for idx in system.indices(max_leaves):
            m = a.component(idx)
            loc = (repr(idx),)
            if idx.is_vertical():
                model = grid_differential(d, len(idx), 1) if along_rows else grid_differential(d, 1, len(idx))
                rep.record(compare_maps(m, model, opts.limit, opts.samples, opts.seed), "vertical", loc)
            elif len(tilde(idx)) >= 2:
                rep.record(check_zero(m, opts.limit, opts.samples, opts.seed), "vanish", loc)
            elif len(idx) > 1:
                rep.record(compare_maps(m, _positioned_model_single(a, idx, along_rows), opts.limit, opts.samples,
                                        opts.seed), "positioned", loc)
    return rep


def check_fAlg_object(alpha: ForestyMorphism, max_leaves=4, opts=None) -> Report:
    return _check_one_sided(alpha, U, "f-algebra", max_leaves, opts)


def check_fCoalg_object(alpha: ForestyMorphism, max_leaves=4, opts=None) -> Report:
    return _check_one_sided(alpha, D, "f-coalgebra", max_leaves, opts)


def check_bimodule_object(mu: ForestyMorphism, max_leaves=4, opts=None) -> Report:
    """Only grading and ``mu o mu = 0``; the bimodule simplification relations are not checked."""
    opts = opts or CheckOptions(max_leaves=max_leaves)
    opts.max_leaves = max_leaves
    rep = Report("u-bimodule")
    with timed(rep):
        if mu.degree != -1:
            rep.add("degree", (), f"mu has degree {mu.degree}, expected -1")
            return rep
        m = mu.restrict(max_leaves)
        check_vanishes(compose(m, m), "mu-mu", rep, opts)
    return rep


# -- restriction to the one-sided categories ------------------------------------

def forget_to_u(phi: ForestyMorphism) -> ForestyMorphism:
    """Components with ``l = (1)``, as an ascending family."""
    one = MultiIndex((1,))
    out = ForestyMorphism(U, phi.src, phi.dst, phi.degree, phi.ring, max_leaves=phi.max_leaves, label=phi.label)
    for k in multi_indices(phi.max_leaves):
        m = phi.component((k, one))
        if m.kind != "zero":
            out.set(k, m)
    return out


def forget_to_d(phi: ForestyMorphism) -> ForestyMorphism:
    one = MultiIndex((1,))
    out = ForestyMorphism(D, phi.src, phi.dst, phi.degree, phi.ring, max_leaves=phi.max_leaves, label=phi.label)
    for l in multi_indices(phi.max_leaves):
        m = phi.component((one, l))
        if m.kind != "zero":
            out.set(l, m)
    return out


# -- dg nerve ---------------------------------------------------------------------

@dataclass
class NerveSimplex:
    """Objects ``(modules, alpha)`` and maps ``phi_sigma: A_{sigma_m} -> A_{sigma_0}`` of degree ``m - 1``."""
    system: IndexSystem
    objects: list
    maps: dict = field(default_factory=dict)

    @property
    def n(self):
        return len(self.objects) - 1

    def alpha(self, j):
        return self.objects[j][1]

    def phi(self, sigma) -> ForestyMorphism:
        sigma = tuple(sigma)
        if len(sigma) == 1:
            return self.alpha(sigma[0])
        if sigma not in self.maps:
            raise KeyError(f"missing phi for {list(sigma)}")
        return self.maps[sigma]

    def faces(self):
        return [s for m in range(2, self.n + 2) for s in combinations(range(self.n + 1), m)]

    def validate(self):
        for sigma in self.faces():
            f = self.phi(sigma)
            m = len(sigma) - 1
            if f.degree != m - 1:
                raise ValueError(f"phi{list(sigma)} has degree {f.degree}, expected {m - 1}")
            if f.src != self.objects[sigma[-1]][1].src or f.dst != self.objects[sigma[0]][1].src:
                raise ValueError(f"phi{list(sigma)} has the wrong source or target")


def unabsorbed_residual(s: NerveSimplex, sigma) -> ForestyMorphism:
    """``sum_i (-1)^i (phi_{d_i sigma} - phi_{<=i} o phi_{>=i}) - d(phi_sigma)``."""
    sigma = tuple(sigma)
    m = len(sigma) - 1
    f = s.phi(sigma)
    terms = [(-1, hom_differential(s.alpha(sigma[0]), f, s.alpha(sigma[-1])))]
    for i in range(1, m):
        sg = (-1) ** i
        terms.append((sg, s.phi(sigma[:i] + sigma[i + 1:])))
        terms.append((-sg, compose(s.phi(sigma[:i + 1]), s.phi(sigma[i:]))))
    return add(*terms)


def absorbed_residual(s: NerveSimplex, sigma) -> ForestyMorphism:
    """Componentwise sum with the gluing orientation signs; the objects' alphas absorb the differential."""
    sigma = tuple(sigma)
    m = len(sigma) - 1
    f = s.phi(sigma)
    sysm = s.system
    bound = min([f.max_leaves] + [s.alpha(j).max_leaves for j in sigma])
    out = ForestyMorphism(sysm, f.src, f.dst, f.degree - 1, f.ring, max_leaves=bound, label="R")
    faces = [((-1) ** i, s.phi(sigma[:i] + sigma[i + 1:])) for i in range(1, m)]
    pieces = [(i, s.phi(sigma[:i + 1]), s.phi(sigma[i:])) for i in range(m + 1)]
    for idx in sysm.indices(bound):
        terms = [(c, g.get(idx)) for c, g in faces]
        terms = [(c, t) for c, t in terms if t is not None]
        for i, lower, upper in pieces:
            for sp in sysm.splits(idx):
                a = upper.get(sp.upper)
                if a is None:
                    continue
                b = lower.get(sp.lower)
                if b is None:
                    continue
                r = rho_sign(StratumType(i, sp.k0, sp.l0), StratumType(m - i, sp.k1, sp.l1))
                terms.append((-1 if r else 1, compose_maps(b, a)))
        terms = [(c, t) for c, t in terms if t.kind != "zero"]
        if terms:
            mm = sum_maps(terms)
            if mm.kind != "zero":
                out._comps[idx] = mm
    return out


def random_simplex(system: IndexSystem, objs, ring: Ring, rng, max_leaves=4, support=3) -> NerveSimplex:
    """Simplex on the objects ``objs`` (tuples of modules) with random structure maps and random
    ``phi_sigma``; no relation is expected to hold."""
    objects = [(o, random_morphism(system, o, o, -1, ring, rng, max_leaves, support)) for o in objs]
    s = NerveSimplex(system, objects)
    for sigma in s.faces():
        s.maps[sigma] = random_morphism(system, objs[sigma[-1]], objs[sigma[0]], len(sigma) - 2, ring, rng,
                                        max_leaves, support)
    return s


def residuals_agree(s: NerveSimplex, sigma, opts: CheckOptions = None, report: Report = None) -> Report:
    """Compare the absorbed and unabsorbed residuals of ``sigma`` as maps."""
    opts = opts or CheckOptions()
    report = report or Report("residuals")
    compare_morphisms(unabsorbed_residual(s, sigma), absorbed_residual(s, sigma), "absorbed=unabsorbed", report,
                      opts, (str(list(sigma)),))
    return report


def check_simplex(s: NerveSimplex, max_leaves=4, opts: CheckOptions = None, objects=True) -> Report:
    """Both forms of the coherence relation for every face of dimension >= 1.

    For ``UD`` simplices the objects must pass the f-bialgebra checks and the
    edges the morphism checks (set ``objects=False`` to skip these).
    """
    opts = opts or CheckOptions(max_leaves=max_leaves)
    opts.max_leaves = max_leaves
    rep = Report(f"{s.system.name} simplex")
    with timed(rep):
        try:
            s.validate()
        except (KeyError, ValueError) as e:
            rep.error = str(e)
            return rep
        if objects and s.system is UD:
            for j in range(s.n + 1):
                rep.merge(check_fbialgebra(s.alpha(j), max_leaves, CheckOptions(max_leaves, opts.limit, opts.samples,
                                                                                 opts.seed)), f"object{j}:")
            for sigma in s.faces():
                if len(sigma) == 2:
                    rep.merge(check_fbialg_morphism(s.phi(sigma), s.alpha(sigma[1]), s.alpha(sigma[0]), max_leaves,
                                                    CheckOptions(max_leaves, opts.limit, opts.samples, opts.seed)),
                              f"edge{list(sigma)}:")
        for sigma in s.faces():
            where = (str(list(sigma)),)
            un = unabsorbed_residual(s, sigma)
            ab = absorbed_residual(s, sigma)
            for idx in s.system.indices(min(max_leaves, un.max_leaves, ab.max_leaves)):
                if un.get(idx) is None and ab.get(idx) is None:
                    rep.checked += 2
                    continue
                eq, zero = compare_and_check_zero(un.component(idx), ab.component(idx), opts.limit, opts.samples,
                                                  opts.seed)
                loc = where + (s.system.fmt(idx),)
                rep.record(eq, "absorbed=unabsorbed", loc)
                rep.record(zero, "R", loc)
    return rep


def fill_inner_horn_2(phi01: ForestyMorphism, phi12: ForestyMorphism):
    """Filler of the inner 2-horn: ``phi02 = phi01 o phi12`` and ``phi012 = 0``."""
    phi02 = compose(phi01, phi12)
    phi02.label = "phi02"
    phi012 = zero_morphism(phi12.system, phi12.src, phi01.dst, 1, phi01.ring,
                           max_leaves=min(phi01.max_leaves, phi12.max_leaves))
    return phi02, phi012


def horn_simplex(obj0, obj1, obj2, phi01, phi12) -> NerveSimplex:
    """``obj_j = (modules, alpha)``; returns the filled 2-simplex."""
    phi02, phi012 = fill_inner_horn_2(phi01, phi12)
    return NerveSimplex(phi01.system, [obj0, obj1, obj2],
                        {(0, 1): phi01, (1, 2): phi12, (0, 2): phi02, (0, 1, 2): phi012})
