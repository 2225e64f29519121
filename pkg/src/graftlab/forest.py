"""Heighted ribbon forests and the fiber product of an ascending/descending pair.

Heights are exact ``Fraction`` values; leaves and roots sit at ``+-inf``.
An ascending forest has its leaves at ``+inf`` and roots at ``-inf``; a
descending forest is the other way round.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .multiindex import MultiIndex, tilde

INF = math.inf

ASCENDING = "ascending"
DESCENDING = "descending"


class MalformedForest(ValueError):
    pass


class DegenerateConfiguration(ValueError):
    """Two events at the same height where the caller asked for a generic picture."""


def _q(x):
    if x is None:
        return None
    if isinstance(x, float) and math.isinf(x):
        return x
    return Fraction(x)


@dataclass(frozen=True)
class Forest:
    """Rooted ribbon forest.

    ``edges`` are ``(src, dst)`` pairs oriented from leaves to roots.  Node ids
    are strings; leaves, roots and vertices must be disjoint.  The ribbon
    order on the incoming edges of a vertex is read off from ``leaf_order``.
    """
    leaf_order: tuple
    root_order: tuple
    vertices: frozenset
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "leaf_order", tuple(self.leaf_order))
        object.__setattr__(self, "root_order", tuple(self.root_order))
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        self.validate()

    def validate(self):
        L, R, V = set(self.leaf_order), set(self.root_order), set(self.vertices)
        if len(L) != len(self.leaf_order) or len(R) != len(self.root_order):
            raise MalformedForest("repeated leaf or root id")
        if L & R or L & V or R & V:
            raise MalformedForest("leaves, roots and vertices must be disjoint")
        if not R:
            raise MalformedForest("a forest needs at least one root")
        out_deg = {x: 0 for x in L | V}
        in_deg = {x: 0 for x in V | R}
        for src, dst in self.edges:
            if src not in out_deg or dst not in in_deg:
                raise MalformedForest(f"bad edge {src}->{dst}")
            out_deg[src] += 1
            in_deg[dst] += 1
        for x, d in out_deg.items():
            if d != 1:
                raise MalformedForest(f"{x} has {d} outgoing edges")
        for r in R:
            if in_deg[r] != 1:
                raise MalformedForest(f"root {r} has {in_deg[r]} incoming edges")
        for x in V:
            if in_deg[x] < 2:
                raise MalformedForest(f"vertex {x} has fewer than 2 incoming edges")
        # acyclic: every leaf/vertex reaches a root
        for x in L | V:
            seen, y = set(), x
            while y not in R:
                if y in seen:
                    raise MalformedForest("cycle")
                seen.add(y)
                y = self.out_edge(y)[1]
        # planarity: the leaves of each tree and of each incoming branch are contiguous
        for node in V | R:
            lv = sorted(self.leaf_order.index(x) for x in self.leaves_above(node))
            if lv and lv != list(range(lv[0], lv[-1] + 1)):
                raise MalformedForest(f"leaves above {node} are not contiguous")
        roots_by_leaf = [self.root_of(x) for x in self.leaf_order]
        if [r for i, r in enumerate(roots_by_leaf) if i == 0 or roots_by_leaf[i - 1] != r] != list(self.root_order):
            raise MalformedForest("root order does not match leaf order")

    def out_edge(self, x):
        for e in self.edges:
            if e[0] == x:
                return e
        raise MalformedForest(f"{x} has no outgoing edge")

    def in_edges(self, x):
        """Incoming edges in ribbon order (by leftmost leaf above)."""
        es = [e for e in self.edges if e[1] == x]
        return sorted(es, key=lambda e: min(self.leaf_order.index(y) for y in self.leaves_above(e[0])))

    def leaves_above(self, x):
        if x in self.leaf_order:
            return [x]
        out = []
        for e in self.edges:
            if e[1] == x:
                out.extend(self.leaves_above(e[0]))
        return out

    def root_of(self, x):
        while x not in self.root_order:
            x = self.out_edge(x)[1]
        return x

    def branch_labels(self):
        """Canonical path-from-root label of each edge: (root index, child indices...)."""
        labels = {}

        def walk(node, label):
            for i, e in enumerate(self.in_edges(node)):
                labels[e] = label + (i,)
                walk(e[0], label + (i,))

        for r_idx, r in enumerate(self.root_order):
            (e,) = [e for e in self.edges if e[1] == r]
            labels[e] = (r_idx,)
            walk(e[0], (r_idx,))
        return labels


@dataclass(frozen=True)
class HeightedForest:
    base: Forest
    heights: dict
    polarity: str = ASCENDING

    def __post_init__(self):
        if self.polarity not in (ASCENDING, DESCENDING):
            raise MalformedForest(f"unknown polarity {self.polarity}")
        object.__setattr__(self, "heights", {v: Fraction(h) for v, h in self.heights.items()})
        if set(self.heights) != set(self.base.vertices):
            raise MalformedForest("heights must be given for exactly the vertices")
        for src, dst in self.base.edges:
            a, b = self.height(src), self.height(dst)
            if self.polarity == ASCENDING and not a > b:
                raise MalformedForest(f"ascending forest must decrease along {src}->{dst}")
            if self.polarity == DESCENDING and not a < b:
                raise MalformedForest(f"descending forest must increase along {src}->{dst}")

    def height(self, x):
        if x in self.heights:
            return self.heights[x]
        top, bottom = (INF, -INF) if self.polarity == ASCENDING else (-INF, INF)
        if x in self.base.leaf_order:
            return top
        if x in self.base.root_order:
            return bottom
        raise KeyError(x)

    def edge_interval(self, e):
        a, b = self.height(e[0]), self.height(e[1])
        return (min(a, b), max(a, b))

    def translate(self, t):
        t = Fraction(t)
        return HeightedForest(self.base, {v: h + t for v, h in self.heights.items()}, self.polarity)

    def to_json(self):
        f = self.base
        return {
            "polarity": self.polarity,
            "vertices": [{"id": v, "height": str(self.heights[v])} for v in sorted(f.vertices)],
            "edges": [{"src": s, "dst": d} for s, d in f.edges],
            "leafOrder": list(f.leaf_order),
            "rootOrder": list(f.root_order),
        }

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        base = Forest(
            data["leafOrder"], data["rootOrder"],
            [v["id"] for v in data["vertices"]],
            [(e["src"], e["dst"]) for e in data["edges"]],
        )
        return cls(base, {v["id"]: Fraction(str(v["height"])) for v in data["vertices"]}, data["polarity"])


def forest_type(f) -> MultiIndex:
    base = f.base if isinstance(f, HeightedForest) else f
    counts = {r: 0 for r in base.root_order}
    for x in base.leaf_order:
        counts[base.root_of(x)] += 1
    return MultiIndex(counts[r] for r in base.root_order)


def symmetry_dim(k: MultiIndex, l: MultiIndex) -> int:
    a, b = len(tilde(k)), len(tilde(l))
    if b == 0:
        return a
    if a == 0:
        return b
    return 1


# -- small constructors used by tests, examples and the CLI ------------------

def vertical(n: int, polarity=ASCENDING) -> HeightedForest:
    leaves = [f"x{i}" for i in range(n)]
    roots = [f"r{i}" for i in range(n)]
    return HeightedForest(Forest(leaves, roots, [], list(zip(leaves, roots))), {}, polarity)


def corolla(m: int, height=0, polarity=ASCENDING) -> HeightedForest:
    leaves = [f"x{i}" for i in range(m)]
    edges = [(x, "v") for x in leaves] + [("v", "r")]
    return HeightedForest(Forest(leaves, ["r"], ["v"], edges), {"v": height}, polarity)


def binary(height=0, polarity=ASCENDING) -> HeightedForest:
    return corolla(2, height, polarity)


# -- the fiber product --------------------------------------------------------

@dataclass(frozen=True)
class Strand:
    lo: object
    hi: object
    up_branch: tuple
    down_branch: tuple
    level: Optional[int] = None

    def contains(self, h) -> bool:
        return self.lo < h < self.hi


@dataclass(frozen=True)
class Node:
    height: object
    side: str          # which forest owns the vertex: ascending or descending
    vertex: str
    other_branch: tuple
    strands: tuple     # indices into the strand list


@dataclass
class HenriquesGraph:
    strands: list
    nodes: list
    cut_heights: list = field(default_factory=list)

    def strand_count(self, h) -> int:
        return sum(1 for s in self.strands if s.contains(h))

    def event_heights(self):
        hs = {n.height for n in self.nodes} | set(self.cut_heights)
        return sorted(hs)

    def regular_heights(self):
        """One sample height inside each open interval between events."""
        hs = self.event_heights()
        if not hs:
            return [Fraction(0)]
        out = [hs[0] - 1]
        out += [(a + b) / 2 for a, b in zip(hs, hs[1:])]
        out.append(hs[-1] + 1)
        return out

    def strand_counts(self):
        return [self.strand_count(h) for h in self.regular_heights()]

    def levels(self):
        return sorted({s.level for s in self.strands if s.level is not None})

    def to_json(self):
        def h(x):
            return "inf" if x == INF else "-inf" if x == -INF else str(x)
        return {
            "strands": [{"lo": h(s.lo), "hi": h(s.hi), "up": list(s.up_branch), "down": list(s.down_branch),
                         "level": s.level} for s in self.strands],
            "nodes": [{"height": h(n.height), "side": n.side, "vertex": n.vertex,
                       "otherBranch": list(n.other_branch), "strands": list(n.strands)} for n in self.nodes],
            "cutHeights": [h(x) for x in self.cut_heights],
        }


def _branches(f: HeightedForest):
    labels = f.base.branch_labels()
    return [(labels[e], f.edge_interval(e), e) for e in f.base.edges]


def henriques_graph(U: HeightedForest, D: HeightedForest) -> HenriquesGraph:
    """Fiber product of the two forests over the height line.

    A strand is a pair (ascending edge, descending edge) whose height ranges
    overlap in an open interval.  At each vertex of either forest and each
    branch of the other forest at that height there is one node, joining the
    strands that end or start there.
    """
    if U.polarity != ASCENDING or D.polarity != DESCENDING:
        raise MalformedForest("expected an ascending and a descending forest")
    ub, db = _branches(U), _branches(D)
    strands = []
    for ulab, (ulo, uhi), _ in ub:
        for dlab, (dlo, dhi), _ in db:
            lo, hi = max(ulo, dlo), min(uhi, dhi)
            if lo < hi:
                strands.append(Strand(lo, hi, ulab, dlab))
    nodes = []
    for f, side, own, other in ((U, ASCENDING, ub, db), (D, DESCENDING, db, ub)):
        for v in sorted(f.base.vertices):
            h = f.heights[v]
            own_labels = {lab for lab, _, e in own if v in e}
            for olab, (olo, ohi), _ in other:
                if not olo < h < ohi:
                    continue
                idx = []
                for i, s in enumerate(strands):
                    mine = s.up_branch if side == ASCENDING else s.down_branch
                    theirs = s.down_branch if side == ASCENDING else s.up_branch
                    if theirs == olab and mine in own_labels and (s.lo == h or s.hi == h):
                        idx.append(i)
                nodes.append(Node(h, side, v, olab, tuple(idx)))
    nodes.sort(key=lambda n: (n.height, n.side, n.vertex, n.other_branch))
    return HenriquesGraph(strands, nodes)


@dataclass(frozen=True)
class GraftingLengths:
    L: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "L", tuple(Fraction(x) for x in self.L))
        if any(x < 0 for x in self.L):
            raise ValueError("grafting lengths must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.L) + 1

    def heights(self, offset=0):
        """Grafting heights ``offset, offset+L1, ...``; empty when n <= 1."""
        if not self.L:
            return []
        out = [Fraction(offset)]
        for x in self.L:
            out.append(out[-1] + x)
        return out

    @property
    def total(self):
        return sum(self.L, Fraction(0))


def cut_at_heights(g: HenriquesGraph, heights) -> HenriquesGraph:
    """Cut every strand at each given height and tag strands with a level.

    Level ``i`` is the slab between the ``i``-th and ``i+1``-th cut height
    (level 0 below the first cut).
    """
    hs = [Fraction(h) for h in heights]
    if any(b < a for a, b in zip(hs, hs[1:])):
        raise ValueError("cut heights must be nondecreasing")
    node_hs = {n.height for n in g.nodes}
    for h in hs:
        if h in node_hs:
            raise DegenerateConfiguration(f"cut height {h} coincides with a vertex height")
    distinct = sorted(set(hs))
    strands = []
    for s in g.strands:
        pts = [s.lo] + [h for h in distinct if s.lo < h < s.hi] + [s.hi]
        for lo, hi in zip(pts, pts[1:]):
            level = sum(1 for h in hs if h <= lo) if lo != -INF else 0
            strands.append(Strand(lo, hi, s.up_branch, s.down_branch, level))
    # node strand indices refer to the uncut list; recompute against the new one
    nodes = []
    for n in g.nodes:
        idx = tuple(i for i, s in enumerate(strands)
                    if (s.lo == n.height or s.hi == n.height)
                    and any(s.up_branch == g.strands[j].up_branch and s.down_branch == g.strands[j].down_branch
                            for j in n.strands))
        nodes.append(Node(n.height, n.side, n.vertex, n.other_branch, idx))
    return HenriquesGraph(strands, nodes, g.cut_heights + hs)


def cut_at_levels(g: HenriquesGraph, L: GraftingLengths, offset=0) -> HenriquesGraph:
    if not isinstance(L, GraftingLengths):
        L = GraftingLengths(L)
    hs = L.heights(offset)
    if not hs:
        return HenriquesGraph(list(g.strands), list(g.nodes), list(g.cut_heights))
    return cut_at_heights(g, hs)
