"""Multi-index combinatorics for forests.

A multi-index ``k = (k_1, ..., k_a)`` records the leaf count of each tree of a
forest.  Gluing a forest of type ``k1`` on top of one of type ``k0`` gives
``sharp(k1, k0)``; the vertices of the glued forest are the union of the
vertices of both layers, and ``heartsuit`` is the parity of that reordering.
"""
from __future__ import annotations

from itertools import accumulate, product
from typing import Iterable, NamedTuple


class MultiIndex(tuple):
    """Nonempty tuple of positive integers."""

    def __new__(cls, entries: Iterable[int] = ()):
        entries = tuple(int(e) for e in entries)
        if not entries:
            raise ValueError("multi-index must have at least one entry")
        if any(e < 1 for e in entries):
            raise ValueError(f"multi-index entries must be >= 1: {entries}")
        return super().__new__(cls, entries)

    def __repr__(self):
        return "(" + ",".join(str(e) for e in self) + ")"

    @property
    def leaves(self) -> int:
        return sum(self)

    @property
    def trees(self) -> int:
        return len(self)

    @property
    def v(self) -> int:
        return sum(self) - len(self)

    def is_vertical(self) -> bool:
        return all(e == 1 for e in self)

    def is_almost_vertical(self) -> bool:
        return not self.is_vertical() and all(e <= 2 for e in self)


def mi(*entries) -> MultiIndex:
    """Shorthand: ``mi(2, 1, 3)`` or ``mi([2, 1, 3])`` or ``mi("2,1,3")``."""
    if len(entries) == 1 and isinstance(entries[0], str):
        return MultiIndex(int(s) for s in entries[0].split(",") if s.strip())
    if len(entries) == 1 and not isinstance(entries[0], int):
        return MultiIndex(entries[0])
    return MultiIndex(entries)


def ones(a: int) -> MultiIndex:
    return MultiIndex((1,) * a)


class Splitting(NamedTuple):
    lower: MultiIndex
    upper: MultiIndex


def leaves(k: MultiIndex) -> int:
    return sum(k)


def trees(k: MultiIndex) -> int:
    return len(k)


def v(k: MultiIndex) -> int:
    return sum(k) - len(k)


def vert_set(k: MultiIndex) -> list[int]:
    ends = set(accumulate(k))
    return [i for i in range(1, sum(k) + 1) if i not in ends]


def tilde(k: MultiIndex) -> tuple[int, ...]:
    """Entries > 1.  May be empty, so returns a plain tuple."""
    return tuple(e for e in k if e > 1)


def n_tilde(k: MultiIndex) -> int:
    return sum(1 for e in k if e > 1)


def v_ge(k: MultiIndex, h: int) -> int:
    if not 1 <= h <= sum(k) + 1:
        raise ValueError(f"h={h} out of range for {k}")
    return sum(1 for i in vert_set(k) if i >= h)


def _check_compatible(k1: MultiIndex, k0: MultiIndex) -> None:
    if sum(k0) != len(k1):
        raise ValueError(f"cannot glue {k1} on top of {k0}: |k0|={sum(k0)} != n(k1)={len(k1)}")


def sharp(k1: MultiIndex, k0: MultiIndex) -> MultiIndex:
    """``k1`` glued on top of ``k0``."""
    _check_compatible(k1, k0)
    out, pos = [], 0
    for size in k0:
        out.append(sum(k1[pos:pos + size]))
        pos += size
    return MultiIndex(out)


def compositions(n: int) -> list[tuple[int, ...]]:
    """All compositions of ``n``, lexicographic."""
    if n == 0:
        return [()]
    return [(first,) + rest for first in range(1, n + 1) for rest in compositions(n - first)]


def splittings(k: MultiIndex) -> list[Splitting]:
    """All ``(lower, upper)`` with ``sharp(upper, lower) == k``, sorted by (lower, upper)."""
    out = []
    for parts in product(*(compositions(e) for e in k)):
        upper = MultiIndex(e for part in parts for e in part)
        lower = MultiIndex(len(part) for part in parts)
        out.append(Splitting(lower, upper))
    out.sort(key=lambda s: (tuple(s.lower), tuple(s.upper)))
    return out


def heartsuit(k1: MultiIndex, k0: MultiIndex) -> int:
    _check_compatible(k1, k0)
    return sum((e - 1) * v_ge(k0, h) for h, e in enumerate(k1, start=1)) % 2


def vertex_layers(k1: MultiIndex, k0: MultiIndex) -> list[tuple[int, str, int]]:
    """Vertices of ``sharp(k1, k0)`` in natural order, tagged by layer.

    Each entry is ``(position, layer, p)`` where ``layer`` is ``"lower"`` or
    ``"upper"`` and ``p`` is the vertex position inside that layer's own
    ``vert_set``.  Upper vertices sit between leaves of one upper tree; lower
    vertices sit at the boundary after upper tree ``j`` for ``j`` in
    ``vert_set(k0)``.
    """
    _check_compatible(k1, k0)
    k = sharp(k1, k0)
    upper = set(vert_set(k1))
    ends1 = list(accumulate(k1))
    lower = {ends1[j - 1]: j for j in vert_set(k0)}
    out = []
    for pos in vert_set(k):
        if pos in upper:
            out.append((pos, "upper", pos))
        else:
            out.append((pos, "lower", lower[pos]))
    return out


def inversions(seq: list) -> int:
    return sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])


def heartsuit_oracle(k1: MultiIndex, k0: MultiIndex) -> int:
    """Parity of the reordering of the glued vertices into (lower..., upper...)."""
    layers = vertex_layers(k1, k0)
    rank = {("lower", p): i for i, p in enumerate(vert_set(k0))}
    offset = len(rank)
    rank.update({("upper", p): offset + i for i, p in enumerate(vert_set(k1))})
    if len(layers) != len(rank):
        raise AssertionError("vertex count mismatch")
    return inversions([rank[(layer, p)] for _, layer, p in layers]) % 2


def multi_indices(max_leaves: int, min_leaves: int = 1):
    """All multi-indices with ``min_leaves <= |k| <= max_leaves``."""
    for n in range(min_leaves, max_leaves + 1):
        for c in compositions(n):
            yield MultiIndex(c)
