"""Stratum types of the grafted-biforest spaces and their signed boundary.

A stratum type ``D = (n, k, l)`` indexes the space of ``n``-grafted biforests
with ascending type ``k`` and descending type ``l``.  For ``n >= 1`` it is
a corner ``I^(n-1) x R^v(k) x R^v(l)``; for ``n = 0`` it is the quotient of
``R^v(k) x R^v(l)`` by vertical translation, which is nonempty only when the
translation acts freely (``symmetry_dim == 1``).

Gluing ``D1`` on top of ``D0`` gives ``(n0+n1, k1#k0, l0#l1)``: the ascending
layers stack with ``k1`` above ``k0``, the descending ones with ``l0`` above
``l1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .forest import symmetry_dim
from .multiindex import MultiIndex, heartsuit, mi, multi_indices, sharp, splittings, v, vert_set, vertex_layers

EMPTY = None


class StratumType(NamedTuple):
    n: int
    k: MultiIndex
    l: MultiIndex

    def __repr__(self):
        return f"({self.n},{self.k!r},{self.l!r})"

    @property
    def x(self):
        return v(self.k)

    @property
    def y(self):
        return v(self.l)


def stype(n, k, l) -> StratumType:
    if n < 0:
        raise ValueError("n must be >= 0")
    return StratumType(int(n), k if isinstance(k, MultiIndex) else mi(k), l if isinstance(l, MultiIndex) else mi(l))


def is_empty(D: StratumType) -> bool:
    return D.n == 0 and symmetry_dim(D.k, D.l) != 1


def stratum_dim(D: StratumType) -> Optional[int]:
    """Dimension, or ``EMPTY`` (``None``)."""
    if is_empty(D):
        return EMPTY
    if D.n == 0:
        return v(D.k) + v(D.l) - 1
    return D.n - 1 + v(D.k) + v(D.l)


def glue(D1: StratumType, D0: StratumType) -> StratumType:
    """``D1`` on top of ``D0``."""
    return StratumType(D0.n + D1.n, sharp(D1.k, D0.k), sharp(D0.l, D1.l))


def type_splittings(D: StratumType) -> list[tuple[StratumType, StratumType]]:
    """Pairs ``(D0, D1)`` of nonempty types with ``glue(D1, D0) == D``."""
    out = []
    for n0 in range(D.n + 1):
        for sk in splittings(D.k):
            for sl in splittings(D.l):
                # l = sharp(l0, l1): l0 is the upper layer, l1 the lower
                D0 = StratumType(n0, sk.lower, sl.upper)
                D1 = StratumType(D.n - n0, sk.upper, sl.lower)
                if not is_empty(D0) and not is_empty(D1):
                    out.append((D0, D1))
    return out


def _check_pair(D0, D1):
    if len(D1.k) != sum(D0.k) or len(D0.l) != sum(D1.l):
        raise ValueError(f"cannot glue {D1} on top of {D0}")


def rho(D0: StratumType, D1: StratumType) -> int:
    """Orientation sign of the gluing map ``J_D0 x J_D1 -> boundary of J_D``."""
    _check_pair(D0, D1)
    x0, y0, x1, y1 = v(D0.k), v(D0.l), v(D1.k), v(D1.l)
    return (heartsuit(D1.k, D0.k) + heartsuit(D0.l, D1.l) + y0 * (x1 + y1)
            + D0.n + 1 + (D1.n + 1) * (x0 + y0)) % 2


def koszul_parity(dims: list[int], perm: list[int]) -> int:
    """Sign of reordering graded atoms: ``perm[j]`` is the source slot of target slot ``j``."""
    s = 0
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                s += dims[perm[a]] * dims[perm[b]]
    return s % 2


def rho_oracle(D0: StratumType, D1: StratumType) -> int:
    """Brute-force orientation sign via an explicit reordering of coordinates.

    Source coordinates of ``J_D`` near the gluing wall, in order:
    ``I^(n0-1), I (the gluing length), I^(n1-1)``, then the vertices of ``k``
    and of ``l`` in their natural order.  Target: the outward normal ``I``,
    then ``J_D0 = I^(n0-1) x R^x0 x R^y0``, then ``J_D1``.  A cube factor
    ``I^(-1)`` stands for the quotient by vertical translation and is an atom
    of odd dimension.
    """
    _check_pair(D0, D1)
    atoms = [("I0",), ("I",), ("I1",)]
    dims = [D0.n - 1, 1, D1.n - 1]
    for _, layer, p in vertex_layers(D1.k, D0.k):
        atoms.append(("k", 0 if layer == "lower" else 1, p))
        dims.append(1)
    for _, layer, p in vertex_layers(D0.l, D1.l):
        # upper l-layer belongs to D0
        atoms.append(("l", 0 if layer == "upper" else 1, p))
        dims.append(1)
    target = [("I",), ("I0",)]
    target += [("k", 0, p) for p in vert_set(D0.k)] + [("l", 0, p) for p in vert_set(D0.l)]
    target += [("I1",)]
    target += [("k", 1, p) for p in vert_set(D1.k)] + [("l", 1, p) for p in vert_set(D1.l)]
    index = {a: i for i, a in enumerate(atoms)}
    perm = [index[a] for a in target]
    return koszul_parity(dims, perm)


# -- boundary --------------------------------------------------------------

class Face(NamedTuple):
    """Inner face ``L_i = 0`` of ``D``; ``removed`` is the set of removed original indices."""
    D: StratumType
    removed: tuple

    def __repr__(self):
        return f"face{list(self.removed)}{self.D!r}"


class Prod(NamedTuple):
    """Product stratum, bottom factor first; ``faces`` lists (factor, removed indices)."""
    factors: tuple
    faces: tuple = ()

    def __repr__(self):
        fs = "".join(f" d{list(r)}@{i}" for i, r in self.faces)
        return "prod(" + ", ".join(repr(F) for F in self.factors) + ")" + fs


class SignedStratum(NamedTuple):
    label: object
    sign: int


def face_type(D: StratumType, i: int) -> StratumType:
    return StratumType(D.n - 1, D.k, D.l)


def boundary(D: StratumType) -> list[SignedStratum]:
    if is_empty(D):
        raise ValueError(f"{D} is empty")
    out = [SignedStratum(Face(D, (i,)), i % 2) for i in range(1, D.n)]
    for D0, D1 in type_splittings(D):
        out.append(SignedStratum(Prod((D0, D1)), rho(D0, D1)))
    return out


def _lift_removed(removed: tuple, i: int) -> tuple:
    """Indices of a further face ``i`` of an already faced type, in original numbering."""
    j = i
    for r in sorted(removed):
        if r <= j:
            j += 1
    return tuple(sorted(removed + (j,)))


@dataclass
class DDReport:
    D: StratumType
    terms: dict = field(default_factory=dict)

    @property
    def offending(self):
        return {lab: c for lab, c in self.terms.items() if c != 0}

    @property
    def passed(self):
        return not self.offending

    @property
    def degenerate(self):
        """Offending triple products whose bottom or top pair glues to an empty type."""
        return {lab: c for lab, c in self.offending.items() if is_degenerate_triple(lab)}

    @property
    def unexplained(self):
        return {lab: c for lab, c in self.offending.items() if not is_degenerate_triple(lab)}

    def lines(self):
        head = "# codim-2 matching: simplicial face pairs, face pushed into a product factor, left-normalized triples"
        out = [head]
        for lab, c in sorted(self.terms.items(), key=lambda t: repr(t[0])):
            tag = "  # empty intermediate gluing" if is_degenerate_triple(lab) else ""
            out.append(f"{c:+d} {lab!r}{tag}")
        out.append("PASS" if self.passed else "FAIL")
        return out


def is_degenerate_triple(label) -> bool:
    """A triple ``(E0, E1, E2)`` where ``E1 # E0`` or ``E2 # E1`` is empty.

    Such a corner has no codim-1 neighbour on one side, so its two
    contributions need not cancel.
    """
    if not isinstance(label, Prod) or len(label.factors) != 3:
        return False
    E0, E1, E2 = label.factors
    return is_empty(glue(E1, E0)) or is_empty(glue(E2, E1))


def _add(terms, label, sign):
    terms[label] = terms.get(label, 0) + 1 if sign % 2 == 0 else terms.get(label, 0) - 1


def _face_boundary(Dface: StratumType, removed: tuple, D: StratumType, sign: int, terms):
    """Boundary of the face of ``D`` with removed indices ``removed`` (codim 1 here)."""
    (i,) = removed
    for j in range(1, Dface.n):
        _add(terms, Face(D, _lift_removed(removed, j)), sign + j)
    for E0, E1 in type_splittings(Dface):
        p = E0.n
        if p < i:
            F0, F1, where, idx = E0, StratumType(E1.n + 1, E1.k, E1.l), 1, i - p
        else:
            F0, F1, where, idx = StratumType(E0.n + 1, E0.k, E0.l), E1, 0, i
        _add(terms, Prod((F0, F1), ((where, (idx,)),)), sign + rho(E0, E1))


def _product_boundary(D0, D1, sign, terms):
    d0 = stratum_dim(D0)
    for factor, F in ((0, D0), (1, D1)):
        extra = 0 if factor == 0 else d0
        for j in range(1, F.n):
            _add(terms, Prod((D0, D1), ((factor, (j,)),)), sign + extra + j)
        for E0, E1 in type_splittings(F):
            triple = (E0, E1, D1) if factor == 0 else (D0, E0, E1)
            _add(terms, Prod(triple), sign + extra + rho(E0, E1))


def check_dd_zero(D: StratumType) -> DDReport:
    d = stratum_dim(D)
    if d is EMPTY:
        raise ValueError(f"{D} is empty")
    if d < 2:
        raise ValueError(f"{D} has dimension {d} < 2")
    terms = {}
    for lab, s in boundary(D):
        if isinstance(lab, Face):
            _face_boundary(face_type(D, lab.removed[0]), lab.removed, D, s, terms)
        else:
            _product_boundary(*lab.factors, s, terms)
    rep = DDReport(D)
    rep.terms = {lab: c for lab, c in terms.items() if c != 0}
    return rep


def stratum_types(max_n: int, max_k: int, max_l: int, max_dim=None, min_dim=None):
    for n in range(max_n + 1):
        for k in multi_indices(max_k):
            for l in multi_indices(max_l):
                D = StratumType(n, k, l)
                d = stratum_dim(D)
                if d is EMPTY:
                    continue
                if max_dim is not None and d > max_dim:
                    continue
                if min_dim is not None and d < min_dim:
                    continue
                yield D
