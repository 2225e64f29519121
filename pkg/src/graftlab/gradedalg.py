"""Exact graded linear algebra on rectangular tensor grids.

A box space is a grid of tensor factors with ``rows`` rows (each row has its
own graded module) and ``width`` columns, read in row-major order.  Basis
elements are flat tuples of generator indices.  Linear maps are given by
their value on basis elements (``apply``), so spaces far too large to write
down as matrices are still usable; equality is then decided on all inputs
when there are few enough, or on a seeded sample otherwise.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod
from typing import Callable, Optional


# -- rings ------------------------------------------------------------------

class Ring:
    def __init__(self, name: str, p: Optional[int] = None):
        self.name, self.p = name, p

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, Ring) and (self.name, self.p) == (other.name, other.p)

    def __hash__(self):
        return hash((self.name, self.p))

    def __call__(self, c):
        if type(c) is int and self.p is None and self.name == "Z":
            return c
        if self.p is not None:
            if isinstance(c, Fraction):
                if c.denominator % self.p == 0:
                    raise ZeroDivisionError(f"{c} is not defined mod {self.p}")
                return c.numerator * pow(c.denominator, -1, self.p) % self.p
            return int(c) % self.p
        if self.name == "Q":
            return c if type(c) is Fraction else Fraction(c)
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ValueError(f"{c} is not an integer")
            return c.numerator
        return int(c)

    def random(self, rng: random.Random, spread: int = 3):
        if self.p is not None:
            return rng.randrange(self.p)
        if self.name == "Q":
            return Fraction(rng.randint(-spread, spread), rng.randint(1, spread))
        return rng.randint(-spread, spread)


def _is_prime(p):
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


INT = Ring("Z")
RATIONAL = Ring("Q")


def INTMOD(p: int) -> Ring:
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    return Ring(f"Z/{p}", p)


def parse_ring(s: str) -> Ring:
    s = s.strip()
    if s in ("Z", "ZZ", "INT"):
        return INT
    if s in ("Q", "QQ", "RATIONAL"):
        return RATIONAL
    for pre in ("Z/", "INTMOD", "GF"):
        if s.startswith(pre):
            return INTMOD(int(s[len(pre):].strip("()")))
    raise ValueError(f"unknown ring {s!r}")


# -- modules and shapes -----------------------------------------------------

@dataclass(frozen=True)
class GradedModule:
    """Free graded module on named generators."""
    gens: tuple
    name: str = "A"

    def __post_init__(self):
        gens = tuple((str(n), int(d)) for n, d in self.gens)
        if len({n for n, _ in gens}) != len(gens):
            raise ValueError("generator names must be unique")
        object.__setattr__(self, "gens", gens)

    def __len__(self):
        return len(self.gens)

    def deg(self, i: int) -> int:
        return self.gens[i][1]

    def gen_name(self, i: int) -> str:
        return self.gens[i][0]

    def index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.gens):
            if n == name:
                return i
        raise KeyError(name)

    def __repr__(self):
        return f"{self.name}[{', '.join(f'{n}:{d}' for n, d in self.gens)}]"


@dataclass(frozen=True)
class BoxShape:
    """``len(rows)`` rows of width ``width``; row ``i`` has entries in ``rows[i]``."""
    rows: tuple
    width: int

    @classmethod
    def uniform(cls, module: GradedModule, a: int, b: int) -> "BoxShape":
        return cls((module,) * a, b)

    @property
    def a(self):
        return len(self.rows)

    @property
    def size(self):
        return len(self.rows) * self.width

    def module_at(self, pos: int) -> GradedModule:
        return self.rows[pos // self.width]

    @property
    def even(self) -> bool:
        """True when every generator of every row has even degree (all Koszul signs vanish)."""
        try:
            return self._even
        except AttributeError:
            e = all(d % 2 == 0 for m in self.rows for _, d in m.gens)
            object.__setattr__(self, "_even", e)
            return e

    def _tables(self):
        """Per-position generator degrees, and whether they are all zero."""
        try:
            return self._pos_degs, self._all_zero
        except AttributeError:
            w = self.width
            pd = tuple(tuple(d for _, d in self.rows[p // w].gens) for p in range(self.size))
            object.__setattr__(self, "_pos_degs", pd)
            object.__setattr__(self, "_all_zero", all(d == 0 for t in pd for d in t))
            return self._pos_degs, self._all_zero

    def degrees(self, x) -> list[int]:
        pd = self._tables()[0]
        return [pd[p][g] for p, g in enumerate(x)]

    def degree(self, x) -> int:
        pd, zero = self._tables()
        if zero:
            return 0
        return sum(pd[p][g] for p, g in enumerate(x))

    def count(self) -> int:
        return prod(len(m) ** self.width for m in self.rows)

    def basis(self):
        ranges = [range(len(self.rows[p // self.width])) for p in range(self.size)]
        return product(*ranges)

    def random_basis(self, rng: random.Random):
        r = rng.random
        return tuple(int(r() * len(t)) for t in self._tables()[0])

    def sub_rows(self, start: int, stop: int) -> "BoxShape":
        return BoxShape(self.rows[start:stop], self.width)

    def with_width(self, w: int) -> "BoxShape":
        return BoxShape(self.rows, w)

    def names(self, x) -> list[list[str]]:
        w = self.width
        return [[self.rows[r].gen_name(x[r * w + c]) for c in range(w)] for r in range(self.a)]

    def from_names(self, grid) -> tuple:
        if len(grid) != self.a or any(len(row) != self.width for row in grid):
            raise ValueError("grid shape mismatch")
        return tuple(self.rows[r].index(name) for r, row in enumerate(grid) for name in row)

    def __repr__(self):
        mods = {m.name for m in self.rows}
        return f"Box({'/'.join(sorted(mods)) or '-'}; {self.a}x{self.width})"


def stack(*shapes: BoxShape) -> BoxShape:
    ws = {s.width for s in shapes if s.a}
    if len(ws) > 1:
        raise ValueError("cannot stack shapes of different widths")
    w = ws.pop() if ws else shapes[0].width
    return BoxShape(tuple(m for s in shapes for m in s.rows), w)


def side_by_side(*shapes: BoxShape) -> BoxShape:
    rows = {s.rows for s in shapes}
    if len(rows) > 1:
        raise ValueError("cannot place shapes with different row modules side by side")
    return BoxShape(shapes[0].rows, sum(s.width for s in shapes))


# -- Koszul signs for reordering factors ----------------------------------

def koszul_sign(degs, order) -> int:
    """Parity of moving factors into ``order`` (``order[j]`` = source slot of target slot ``j``)."""
    s = 0
    n = len(order)
    odd = [degs[i] % 2 for i in order]
    for a in range(n):
        if not odd[a]:
            continue
        oa = order[a]
        for b in range(a + 1, n):
            if odd[b] and order[b] < oa:
                s += 1
    return s % 2


def transpose_order(a: int, b: int) -> list[int]:
    """Row-major positions listed in column-major order."""
    return [r * b + c for c in range(b) for r in range(a)]


def transpose_sign(shape: BoxShape, x) -> int:
    return koszul_sign(shape.degrees(x), transpose_order(shape.a, shape.width))


def block_order(shape: BoxShape, blocks) -> list[int]:
    """Concatenated row-major positions of each block; a block is (row indices, column indices)."""
    w = shape.width
    return [r * w + c for rows, cols in blocks for r in rows for c in cols]


def block_shapes(shape: BoxShape, blocks) -> list[BoxShape]:
    return [BoxShape(tuple(shape.rows[r] for r in rows), len(cols)) for rows, cols in blocks]


def split_blocks(shape: BoxShape, x, blocks):
    """Identify the box with a tensor product of sub-boxes; returns (pieces, sign)."""
    order = block_order(shape, blocks)
    if sorted(order) != list(range(shape.size)):
        raise ValueError("blocks must partition the grid")
    sign = koszul_sign(shape.degrees(x), order)
    pieces, pos = [], 0
    for rows, cols in blocks:
        n = len(rows) * len(cols)
        pieces.append(tuple(x[order[i]] for i in range(pos, pos + n)))
        pos += n
    return pieces, sign


def join_blocks(shape: BoxShape, pieces, blocks):
    """Inverse of ``split_blocks``; returns (x, sign)."""
    order = block_order(shape, blocks)
    flat = [g for piece in pieces for g in piece]
    x = [None] * shape.size
    for i, p in enumerate(order):
        x[p] = flat[i]
    x = tuple(x)
    return x, koszul_sign(shape.degrees(x), order)


def row_blocks(shape: BoxShape, sizes) -> list:
    if sum(sizes) != shape.a:
        raise ValueError(f"row sizes {sizes} do not add up to {shape.a}")
    out, r = [], 0
    for s in sizes:
        out.append((tuple(range(r, r + s)), tuple(range(shape.width))))
        r += s
    return out


def col_blocks(shape: BoxShape, widths) -> list:
    if sum(widths) != shape.width:
        raise ValueError(f"column widths {widths} do not add up to {shape.width}")
    out, c = [], 0
    for s in widths:
        out.append((tuple(range(shape.a)), tuple(range(c, c + s))))
        c += s
    return out


def shuffle_row_blocks(shape: BoxShape, a1: int, a2: int, a3: int) -> list:
    """``a = a1 + a2 + a3`` regrouped as ``(a1 + a3) | a2``."""
    if a1 + a2 + a3 != shape.a:
        raise ValueError("row sizes do not add up")
    cols = tuple(range(shape.width))
    outer = tuple(range(a1)) + tuple(range(a1 + a2, shape.a))
    return [(outer, cols), (tuple(range(a1, a1 + a2)), cols)]


def shuffle_col_blocks(shape: BoxShape, b1: int, b2: int, b3: int) -> list:
    """``b = b1 + b2 + b3`` regrouped as ``(b1 + b3) | b2``, through the transposition."""
    if b1 + b2 + b3 != shape.width:
        raise ValueError("column widths do not add up")
    rows = tuple(range(shape.a))
    outer = tuple(range(b1)) + tuple(range(b1 + b2, shape.width))
    return [(rows, outer), (rows, tuple(range(b1, b1 + b2)))]


TENSOR_CACHE = 1 << 14


# -- linear maps --------------------------------------------------------------

def _add_into(acc: dict, key, c, ring: Ring):
    """``acc[key] += c``; coefficients are already ring elements, so only Z/p needs reducing."""
    old = acc.get(key)
    v = c if old is None else old + c
    if ring.p is not None:
        v %= ring.p
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class BoxMap:
    """Homogeneous linear map between box spaces, given on basis elements.

    ``kind`` is ``"zero"``, ``"id"`` or ``"fn"``; the first two short-circuit
    composition and sums.
    """

    def __init__(self, src: BoxShape, dst: BoxShape, degree: int, ring: Ring,
                 fn: Optional[Callable] = None, kind: str = "fn", label: str = "", cache: int = 0):
        self.src, self.dst, self.degree, self.ring = src, dst, degree, ring
        self.fn, self.kind, self.label = fn, kind, label
        self._cache = {} if cache else None
        self._cache_cap = cache

    def apply(self, x) -> dict:
        if self.kind == "zero":
            return {}
        if self.kind == "id":
            return {tuple(x): self.ring(1)}
        x = tuple(x)
        if self._cache is None:
            return self.fn(x)
        out = self._cache.get(x)
        if out is None:
            out = self.fn(x)
            if len(self._cache) < self._cache_cap:
                self._cache[x] = out
        return dict(out)

    def apply_vec(self, vec: dict) -> dict:
        out = {}
        for x, c in vec.items():
            for y, d in self.apply(x).items():
                _add_into(out, y, c * d, self.ring)
        return out

    def __call__(self, x):
        return self.apply(x)

    def __repr__(self):
        return f"BoxMap({self.src} -> {self.dst}, deg {self.degree}, {self.kind}{' ' + self.label if self.label else ''})"

    def is_structurally_zero(self) -> bool:
        return self.kind == "zero"


def zero_map(src, dst, degree, ring) -> BoxMap:
    return BoxMap(src, dst, degree, ring, kind="zero")


def identity_map(shape: BoxShape, ring: Ring) -> BoxMap:
    return BoxMap(shape, shape, 0, ring, kind="id")


def sparse_map(src, dst, degree, ring, table: dict, check_degree=True) -> BoxMap:
    """Map from an explicit table ``{x: {y: c}}``; absent inputs go to zero."""
    clean = {}
    for x, out in table.items():
        x = tuple(x)
        row = {}
        for y, c in out.items():
            y = tuple(y)
            c = ring(c)
            if not c:
                continue
            if check_degree and dst.degree(y) - src.degree(x) != degree:
                raise ValueError(f"entry {x}->{y} does not have degree {degree}")
            row[y] = c
        if row:
            clean[x] = row
    m = BoxMap(src, dst, degree, ring, fn=lambda x: dict(clean.get(x, {})), label="sparse")
    m.table = clean
    return m


def func_map(src, dst, degree, ring, fn, label="", cache=0) -> BoxMap:
    """Map given by ``fn(x) -> {y: c}``; ``cache`` memoizes up to that many inputs."""
    return BoxMap(src, dst, degree, ring, fn=fn, label=label, cache=cache)


def _check_compose(g: BoxMap, f: BoxMap):
    if f.dst != g.src:
        raise ValueError(f"shape mismatch: {f.dst} vs {g.src}")
    if f.ring != g.ring:
        raise ValueError("ring mismatch")


def compose_maps(g: BoxMap, f: BoxMap) -> BoxMap:
    """``g o f``; no sign (signs belong to whoever composes)."""
    _check_compose(g, f)
    deg = f.degree + g.degree
    if f.kind == "zero" or g.kind == "zero":
        return zero_map(f.src, g.dst, deg, f.ring)
    if f.kind == "id":
        return g
    if g.kind == "id":
        return f
    ring = f.ring
    return func_map(f.src, g.dst, deg, ring, lambda x: g.apply_vec(f.apply(x)), "compose")


def scale_map(c, f: BoxMap) -> BoxMap:
    c = f.ring(c)
    if not c or f.kind == "zero":
        return zero_map(f.src, f.dst, f.degree, f.ring)
    if c == 1:
        return f
    ring = f.ring
    return func_map(f.src, f.dst, f.degree, ring,
                    lambda x: {y: v for y, d in f.apply(x).items() if (v := ring(c * d))}, "scaled")


def sum_maps(terms, src=None, dst=None, degree=None, ring=None) -> BoxMap:
    """Sum of ``(coeff, map)`` pairs; all maps must share shapes and degree."""
    terms = [(c, m) for c, m in terms if m.kind != "zero"]
    if not terms:
        if src is None:
            raise ValueError("empty sum needs explicit shapes")
        return zero_map(src, dst, degree, ring)
    m0 = terms[0][1]
    for _, m in terms:
        if m.src != m0.src or m.dst != m0.dst:
            raise ValueError("cannot add maps of different shapes")
        if m.degree != m0.degree:
            raise ValueError("cannot add maps of different degrees")
    ring = m0.ring
    terms = [(ring(c), m) for c, m in terms if ring(c)]
    if not terms:
        return zero_map(m0.src, m0.dst, m0.degree, ring)
    if len(terms) == 1 and terms[0][0] == 1:
        return terms[0][1]

    def fn(x):
        out = {}
        for c, m in terms:
            for y, d in m.apply(x).items():
                _add_into(out, y, c * d, ring)
        return out
    return func_map(m0.src, m0.dst, m0.degree, ring, fn, "sum")


def tensor_blocks(fs, src: BoxShape, dst: BoxShape, in_blocks, out_blocks, cache=TENSOR_CACHE) -> BoxMap:
    """The map ``P`` with ``P ~ f_1 (x) ... (x) f_k`` under the block identifications.

    Input is split into blocks (with the reordering sign), ``f_i`` applied to
    block ``i`` with the Koszul rule ``(f (x) g)(x (x) y) = (-1)^{|g||x|} fx (x) gy``,
    and the output blocks are reassembled (with the reordering sign).
    """
    if len(fs) != len(in_blocks) or len(fs) != len(out_blocks):
        raise ValueError("need one block per map")
    in_shapes, out_shapes = block_shapes(src, in_blocks), block_shapes(dst, out_blocks)
    for f, s_in, s_out in zip(fs, in_shapes, out_shapes):
        if f.src != s_in or f.dst != s_out:
            raise ValueError(f"block shape mismatch for {f}: expected {s_in} -> {s_out}")
    ring = fs[0].ring
    deg = sum(f.degree for f in fs)
    if any(f.kind == "zero" for f in fs):
        return zero_map(src, dst, deg, ring)
    in_order, out_order = block_order(src, in_blocks), block_order(dst, out_blocks)
    if sorted(in_order) != list(range(src.size)) or sorted(out_order) != list(range(dst.size)):
        raise ValueError("blocks must partition the grid")
    cuts = [0]
    for sh in in_shapes:
        cuts.append(cuts[-1] + sh.size)
    inv_out = [0] * dst.size
    for i, p in enumerate(out_order):
        inv_out[p] = i
    signed = not (src.even and dst.even)
    one, minus = ring(1), ring(-1)

    def fn(x):
        flat = [x[p] for p in in_order]
        pieces = [tuple(flat[cuts[j]:cuts[j + 1]]) for j in range(len(fs))]
        sign = 0
        if signed:
            sign = koszul_sign(src.degrees(x), in_order)
            for j, f in enumerate(fs):
                if f.degree % 2:
                    sign += sum(in_shapes[i].degree(pieces[i]) for i in range(j))
        partial = {(): minus if sign % 2 else one}
        for f, piece in zip(fs, pieces):
            img = f.apply(piece)
            if not img:
                return {}
            nxt = {}
            for ys, c in partial.items():
                for y, d in img.items():
                    _add_into(nxt, ys + y, c * d, ring)
            partial = nxt
            if not partial:
                return {}
        out = {}
        for ys, c in partial.items():
            y = tuple(ys[i] for i in inv_out)
            if signed and koszul_sign(dst.degrees(y), out_order):
                c = -c
            _add_into(out, y, c, ring)
        return out
    return func_map(src, dst, deg, ring, fn, "tensor", cache=cache)


def tensor_rows(fs) -> BoxMap:
    """Row-stacked tensor product (no reordering sign)."""
    src, dst = stack(*(f.src for f in fs)), stack(*(f.dst for f in fs))
    return tensor_blocks(fs, src, dst, row_blocks(src, [f.src.a for f in fs]),
                         row_blocks(dst, [f.dst.a for f in fs]))


def tensor_cols(fs) -> BoxMap:
    """Side-by-side tensor product through the transposed identification."""
    src, dst = side_by_side(*(f.src for f in fs)), side_by_side(*(f.dst for f in fs))
    return tensor_blocks(fs, src, dst, col_blocks(src, [f.src.width for f in fs]),
                         col_blocks(dst, [f.dst.width for f in fs]))


def transpose_shape(shape: BoxShape) -> BoxShape:
    mods = set(shape.rows)
    if len(mods) != 1:
        raise ValueError("transpose needs a uniform box")
    return BoxShape.uniform(mods.pop(), shape.width, shape.a)


def transpose_element(shape: BoxShape, x):
    """Transposed basis element and its Koszul sign."""
    order = transpose_order(shape.a, shape.width)
    return tuple(x[p] for p in order), transpose_sign(shape, x)


def transpose_map(f: BoxMap) -> BoxMap:
    """Conjugate by the signed transposition on both sides."""
    src, dst = transpose_shape(f.src), transpose_shape(f.dst)
    ring = f.ring

    def fn(xt):
        # xt lives on the transposed source; transposing it back gives an element of f.src
        x, s = transpose_element(src, xt)
        out = {}
        for y, c in f.apply(x).items():
            yt, t = transpose_element(f.dst, y)
            _add_into(out, yt, -c if (s + t) % 2 else c, ring)
        return out
    return func_map(src, dst, f.degree, ring, fn, "transposed")


def box_differential(shape: BoxShape, ds: dict) -> BoxMap:
    """Sum over grid positions (row-major) of ``id (x) .. d .. (x) id`` with Koszul signs.

    ``ds`` maps each row module to its differential, a map on a single cell.
    """
    degs = {d.degree for d in ds.values()}
    if len(degs) != 1:
        raise ValueError("differentials must share a degree")
    for m, d in ds.items():
        if d.src.size != 1 or d.src != d.dst or d.src.rows[0] != m:
            raise ValueError(f"{d} is not an endomorphism of a single {m.name} cell")
    degree = degs.pop()
    ring = next(iter(ds.values())).ring
    odd = degree % 2
    w = shape.width
    cell = [ds[shape.rows[p // w]] for p in range(shape.size)]

    def fn(x):
        out = {}
        pre = 0
        for p in range(len(x)):
            for y1, c in cell[p].apply((x[p],)).items():
                y = x[:p] + y1 + x[p + 1:]
                _add_into(out, y, -c if (odd and pre % 2) else c, ring)
            pre += shape.rows[p // w].deg(x[p])
        return out
    return func_map(shape, shape, degree, ring, fn, "box differential", cache=TENSOR_CACHE)


def grid_differential(d: BoxMap, a: int, b: int) -> BoxMap:
    """``box_differential`` on the uniform ``a x b`` grid."""
    if d.src.size != 1 or d.dst.size != 1 or d.src != d.dst:
        raise ValueError("d must be an endomorphism of a single cell")
    module = d.src.rows[0]
    return box_differential(BoxShape.uniform(module, a, b), {module: d})


# -- comparison ---------------------------------------------------------------

DEFAULT_EXHAUSTIVE_LIMIT = 4096
DEFAULT_SAMPLES = 192


@dataclass
class Comparison:
    equal: bool
    sampled: bool
    checked: int
    witness: object = None
    lhs: object = None
    rhs: object = None


def inputs_for(shape: BoxShape, limit=DEFAULT_EXHAUSTIVE_LIMIT, samples=DEFAULT_SAMPLES, seed=0):
    """All basis elements if there are at most ``limit``, else a seeded sample."""
    n = shape.count()
    if n <= limit:
        return list(shape.basis()), False
    rng = random.Random(f"{seed}:{shape!r}:{n}")
    seen = {}
    for _ in range(samples):
        x = shape.random_basis(rng)
        seen[x] = None
    return list(seen), True


def compare_maps(f: BoxMap, g: BoxMap, limit=DEFAULT_EXHAUSTIVE_LIMIT, samples=DEFAULT_SAMPLES, seed=0) -> Comparison:
    if f.src != g.src or f.dst != g.dst:
        raise ValueError(f"cannot compare {f} with {g}")
    if f.kind == g.kind and f.kind in ("zero", "id"):
        return Comparison(True, False, 0)
    xs, sampled = inputs_for(f.src, limit, samples, seed)
    for x in xs:
        a, b = f.apply(x), g.apply(x)
        if a != b:
            return Comparison(False, sampled, len(xs), x, a, b)
    return Comparison(True, sampled, len(xs))


def compare_and_check_zero(f: BoxMap, g: BoxMap, limit=DEFAULT_EXHAUSTIVE_LIMIT, samples=DEFAULT_SAMPLES,
                           seed=0) -> tuple[Comparison, Comparison]:
    """``(f == g, g == 0)`` evaluating each map once per input."""
    if f.src != g.src or f.dst != g.dst:
        raise ValueError(f"cannot compare {f} with {g}")
    if f.kind == "zero" and g.kind == "zero":
        return Comparison(True, False, 0), Comparison(True, False, 0)
    xs, sampled = inputs_for(f.src, limit, samples, seed)
    eq = zero = None
    for x in xs:
        a, b = f.apply(x), g.apply(x)
        if eq is None and a != b:
            eq = Comparison(False, sampled, len(xs), x, a, b)
        if zero is None and b:
            zero = Comparison(False, sampled, len(xs), x, b, {})
        if eq is not None and zero is not None:
            break
    return eq or Comparison(True, sampled, len(xs)), zero or Comparison(True, sampled, len(xs))


def check_zero(f: BoxMap, limit=DEFAULT_EXHAUSTIVE_LIMIT, samples=DEFAULT_SAMPLES, seed=0) -> Comparison:
    if f.kind == "zero":
        return Comparison(True, False, 0)
    xs, sampled = inputs_for(f.src, limit, samples, seed)
    for x in xs:
        a = f.apply(x)
        if a:
            return Comparison(False, sampled, len(xs), x, a, {})
    return Comparison(True, sampled, len(xs))


def to_matrix(f: BoxMap):
    """Dense matrix (list of rows indexed by output basis) for small shapes."""
    xs, ys = list(f.src.basis()), list(f.dst.basis())
    yi = {y: i for i, y in enumerate(ys)}
    M = [[f.ring(0)] * len(xs) for _ in ys]
    for j, x in enumerate(xs):
        for y, c in f.apply(x).items():
            M[yi[y]][j] = c
    return M


def random_sparse_map(src: BoxShape, dst: BoxShape, degree: int, ring: Ring, rng: random.Random,
                      density=0.5, max_terms=2) -> BoxMap:
    """Random homogeneous map, defined on every input, with small exact coefficients."""
    by_deg = {}
    for y in dst.basis():
        by_deg.setdefault(dst.degree(y), []).append(y)
    table = {}
    for x in src.basis():
        targets = by_deg.get(src.degree(x) + degree, [])
        if not targets or rng.random() > density:
            continue
        row = {}
        for _ in range(rng.randint(1, max_terms)):
            c = ring.random(rng)
            if c:
                row[rng.choice(targets)] = c
        table[x] = row
    return sparse_map(src, dst, degree, ring, table)


def hashed_map(src: BoxShape, dst: BoxShape, degree: int, ring: Ring, seed, density=0.6) -> BoxMap:
    """Pseudo-random map for large spaces: the image of ``x`` is derived from a hash of ``x``."""
    by_deg = {}
    dst_count = dst.count()

    def targets(d, rng):
        if dst_count <= 4096:
            if d not in by_deg:
                by_deg[d] = [y for y in dst.basis() if dst.degree(y) == d]
            return by_deg[d]
        pd, zero = dst._tables()
        if zero:
            return [dst.random_basis(rng)] if d == 0 else []
        r = rng.random
        for _ in range(32):
            y = tuple(int(r() * len(t)) for t in pd)
            if sum(t[g] for t, g in zip(pd, y)) == d:
                return [y]
        return []

    seed = seed if isinstance(seed, int) else int(hashlib.sha256(str(seed).encode()).hexdigest()[:15], 16)

    def fn(x):
        rng = random.Random(hash((seed,) + x))
        if rng.random() > density:
            return {}
        ts = targets(src.degree(x) + degree, rng)
        if not ts:
            return {}
        out = {}
        for _ in range(rng.randint(1, 2)):
            _add_into(out, rng.choice(ts), ring.random(rng), ring)
        return out
    return func_map(src, dst, degree, ring, fn, "hashed", cache=TENSOR_CACHE)
