"""JSON formats for modules, box maps, objects, morphisms and simplices.

Multi-indices are plain integer arrays.  A box map is

    {"k": [...], "l": [...], "source": {"module", "a", "b"}, "target": {...},
     "degree": d, "entries": [{"in": [[gen, ...], ...], "out": [[gen, ...], ...], "coeff": c}]}

with grids given row by row and generators by name.  Bimodule components
carry ``eps`` and ``mark`` as well, one-sided ones only ``k`` (ascending) or
``l`` (descending).  The shape of a component is determined by its index;
``source``/``target`` are checked against it when present.

An object is ``{"category", "ring", "module" (or "modules"), "maxLeaves",
"alphaComponents"}``; a morphism adds ``source``/``target`` objects,
``degree`` and ``components``; a simplex is ``{"category", "ring",
"maxLeaves", "objects", "maps": [{"sigma", "components"}]}``.
Coefficients are integers or strings such as ``"-3/2"``.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .foresty_cat import SYSTEMS, UD, BimodIndex, ForestyMorphism, NerveSimplex
from .gradedalg import BoxMap, GradedModule, Ring, parse_ring, sparse_map
from .multiindex import MultiIndex

EMIT_LIMIT = 20000


class MalformedInput(ValueError):
    pass


class EmitTooLarge(ValueError):
    pass


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise MalformedInput(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise MalformedInput(f"{path}: invalid JSON: {e}") from e


def _need(data, key, kind=None):
    if not isinstance(data, dict) or key not in data:
        raise MalformedInput(f"missing field {key!r}")
    val = data[key]
    if kind is not None and not isinstance(val, kind):
        raise MalformedInput(f"field {key!r} has the wrong type")
    return val


def _coeff_to_json(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return int(c)


def _coeff_from_json(c, ring: Ring):
    if isinstance(c, bool) or not isinstance(c, (int, str)):
        raise MalformedInput(f"bad coefficient {c!r}")
    try:
        return ring(Fraction(c) if isinstance(c, str) else c)
    except (ValueError, ZeroDivisionError) as e:
        raise MalformedInput(f"bad coefficient {c!r}: {e}") from e


# -- modules --------------------------------------------------------------------

def module_to_json(m: GradedModule):
    return {"name": m.name, "generators": [[n, d] for n, d in m.gens]}


def module_from_json(data) -> GradedModule:
    """``{"name", "generators": [[name, degree], ...]}``; bare names mean degree 0."""
    gens = []
    for g in _need(data, "generators", list):
        if isinstance(g, str):
            gens.append((g, 0))
        elif isinstance(g, list) and len(g) == 2 and isinstance(g[1], int):
            gens.append((str(g[0]), g[1]))
        else:
            raise MalformedInput(f"bad generator {g!r}")
    if not gens:
        raise MalformedInput("module without generators")
    try:
        return GradedModule(tuple(gens), str(data.get("name", "A")))
    except ValueError as e:
        raise MalformedInput(str(e)) from e


# -- indices ---------------------------------------------------------------------

def _mi(val) -> MultiIndex:
    if not isinstance(val, list) or not val or not all(isinstance(e, int) and e >= 1 for e in val):
        raise MalformedInput(f"bad multi-index {val!r}")
    return MultiIndex(val)


def index_to_json(system, idx) -> dict:
    if system.name == "ud":
        return {"k": list(idx[0]), "l": list(idx[1])}
    if system.name == "u":
        return {"k": list(idx)}
    if system.name == "d":
        return {"l": list(idx)}
    return {"k": list(idx.k), "l": list(idx.l), "eps": idx.eps, "mark": idx.mark}


def index_from_json(system, data):
    if system.name == "ud":
        return (_mi(_need(data, "k")), _mi(_need(data, "l")))
    if system.name == "u":
        return _mi(_need(data, "k"))
    if system.name == "d":
        return _mi(_need(data, "l"))
    idx = BimodIndex(_mi(_need(data, "k")), _mi(_need(data, "l")), _need(data, "eps", int), _need(data, "mark", int))
    if idx not in set(system.indices(max(sum(idx.k), sum(idx.l)))):
        raise MalformedInput(f"bad bimodule index {idx!r}")
    return idx


# -- box maps ---------------------------------------------------------------------

def _grid_to_json(shape, x):
    return shape.names(x)


def _grid_from_json(shape, rows):
    if not isinstance(rows, list) or len(rows) != len(shape.rows):
        raise MalformedInput(f"grid {rows!r} does not have {len(shape.rows)} rows")
    flat = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != shape.width:
            raise MalformedInput(f"grid row {row!r} does not have {shape.width} entries")
        m = shape.rows[r]
        for g in row:
            try:
                flat.append(m.index(str(g)))
            except KeyError:
                raise MalformedInput(f"unknown generator {g!r} of {m.name}") from None
    return tuple(flat)


def _shape_json(shape):
    mods = sorted({m.name for m in shape.rows})
    return {"module": mods[0] if len(mods) == 1 else mods, "a": len(shape.rows), "b": shape.width}


def boxmap_to_json(m: BoxMap, emit_limit=EMIT_LIMIT) -> dict:
    n = m.src.count()
    if n > emit_limit:
        raise EmitTooLarge(f"{m} has {n} inputs (limit {emit_limit})")
    entries = []
    for x in m.src.basis():
        for y, c in sorted(m.apply(x).items()):
            entries.append({"in": _grid_to_json(m.src, x), "out": _grid_to_json(m.dst, y),
                            "coeff": _coeff_to_json(c)})
    return {"source": _shape_json(m.src), "target": _shape_json(m.dst), "degree": m.degree, "entries": entries}


def boxmap_from_json(data, src, dst, degree, ring) -> BoxMap:
    for key, shape in (("source", src), ("target", dst)):
        if key in data:
            s = data[key]
            if s.get("a", len(shape.rows)) != len(shape.rows) or s.get("b", shape.width) != shape.width:
                raise MalformedInput(f"{key} grid {s} does not match the index (expected {_shape_json(shape)})")
    if "degree" in data and data["degree"] != degree:
        raise MalformedInput(f"component degree {data['degree']} != expected {degree}")
    table = {}
    for e in _need(data, "entries", list):
        x = _grid_from_json(src, _need(e, "in"))
        y = _grid_from_json(dst, _need(e, "out"))
        c = _coeff_from_json(_need(e, "coeff"), ring)
        row = table.setdefault(x, {})
        row[y] = ring(row.get(y, 0) + c)
    try:
        return sparse_map(src, dst, degree, ring, table)
    except ValueError as e:
        raise MalformedInput(str(e)) from e


# -- families -----------------------------------------------------------------------

def components_to_json(f: ForestyMorphism, emit_limit=EMIT_LIMIT) -> list:
    out = []
    for idx in f.system.indices(f.max_leaves):
        m = f.get(idx)
        if m is None:
            continue
        d = index_to_json(f.system, idx)
        d.update(boxmap_to_json(m, emit_limit))
        if d["entries"]:
            out.append(d)
    return out


def components_from_json(items, f: ForestyMorphism):
    if not isinstance(items, list):
        raise MalformedInput("components must be a list")
    for item in items:
        idx = index_from_json(f.system, item)
        if not f.within(idx):
            raise MalformedInput(f"component {f.system.fmt(idx)} exceeds maxLeaves {f.max_leaves}")
        src, dst = f.shapes(idx)
        f.set(idx, boxmap_from_json(item, src, dst, f.internal_degree(idx), f.ring))
    return f


def _header(data):
    name = data.get("category", "ud") if isinstance(data, dict) else None
    if name not in SYSTEMS:
        raise MalformedInput(f"unknown category {name!r}")
    try:
        ring = parse_ring(str(_need(data, "ring")))
    except ValueError as e:
        raise MalformedInput(str(e)) from e
    ml = data.get("maxLeaves", 4)
    if not isinstance(ml, int) or ml < 1:
        raise MalformedInput(f"bad maxLeaves {ml!r}")
    return SYSTEMS[name], ring, ml


def _modules(system, data):
    if system.arity == 1:
        return (module_from_json(_need(data, "module")),)
    mods = _need(data, "modules", list)
    if len(mods) != 3:
        raise MalformedInput("bimodule objects need three modules")
    return tuple(module_from_json(m) for m in mods)


def _modules_json(mods):
    if len(mods) == 1:
        return {"module": module_to_json(mods[0])}
    return {"modules": [module_to_json(m) for m in mods]}


def object_to_json(alpha: ForestyMorphism, emit_limit=EMIT_LIMIT) -> dict:
    d = {"category": alpha.system.name, "ring": alpha.ring.name, "maxLeaves": alpha.max_leaves}
    d.update(_modules_json(alpha.src))
    d["alphaComponents"] = components_to_json(alpha, emit_limit)
    return d


def object_from_json(data, system=None, ring=None, max_leaves=None):
    """``(modules, alpha)``."""
    s, r, ml = _header(data) if system is None else (system, ring, max_leaves)
    mods = _modules(s, data)
    alpha = ForestyMorphism(s, mods, mods, -1, r, max_leaves=ml, label="alpha")
    components_from_json(_need(data, "alphaComponents"), alpha)
    return mods, alpha


def morphism_to_json(phi: ForestyMorphism, alpha: ForestyMorphism, beta: ForestyMorphism, emit_limit=EMIT_LIMIT):
    """``phi: (A, alpha) -> (B, beta)``."""
    return {"category": phi.system.name, "ring": phi.ring.name, "maxLeaves": phi.max_leaves,
            "degree": phi.degree, "source": object_to_json(alpha, emit_limit),
            "target": object_to_json(beta, emit_limit), "components": components_to_json(phi, emit_limit)}


def morphism_from_json(data):
    """``(phi, alpha, beta)``."""
    s, r, ml = _header(data)
    deg = _need(data, "degree", int)
    src, alpha = object_from_json(_need(data, "source"), s, r, ml)
    dst, beta = object_from_json(_need(data, "target"), s, r, ml)
    phi = ForestyMorphism(s, src, dst, deg, r, max_leaves=ml, label="phi")
    components_from_json(_need(data, "components"), phi)
    return phi, alpha, beta


def simplex_to_json(sx: NerveSimplex, emit_limit=EMIT_LIMIT) -> dict:
    a0 = sx.alpha(0)
    return {"category": sx.system.name, "ring": a0.ring.name,
            "maxLeaves": min(sx.alpha(j).max_leaves for j in range(sx.n + 1)),
            "objects": [object_to_json(sx.alpha(j), emit_limit) for j in range(sx.n + 1)],
            "maps": [{"sigma": list(sigma), "components": components_to_json(f, emit_limit)}
                     for sigma, f in sorted(sx.maps.items())]}


def simplex_from_json(data) -> NerveSimplex:
    s, r, ml = _header(data)
    objs = [object_from_json(o, s, r, ml) for o in _need(data, "objects", list)]
    if not objs:
        raise MalformedInput("a simplex needs at least one object")
    sx = NerveSimplex(s, objs)
    faces = set(sx.faces())
    for item in _need(data, "maps", list):
        sigma = tuple(_need(item, "sigma", list))
        if sigma not in faces:
            raise MalformedInput(f"sigma {list(sigma)} is not an increasing face of the {sx.n}-simplex")
        f = ForestyMorphism(s, objs[sigma[-1]][0], objs[sigma[0]][0], len(sigma) - 2, r, max_leaves=ml,
                            label=f"phi{list(sigma)}")
        sx.maps[sigma] = components_from_json(_need(item, "components"), f)
    for sigma in faces:
        if sigma not in sx.maps:
            sx.maps[sigma] = ForestyMorphism(s, objs[sigma[-1]][0], objs[sigma[0]][0], len(sigma) - 2, r,
                                             max_leaves=ml, label="0")
    return sx


def emittable_max_leaves(f: ForestyMorphism, emit_limit=EMIT_LIMIT) -> int:
    """Largest bound up to which every nonzero component has at most ``emit_limit`` inputs."""
    best = 0
    for ml in range(1, f.max_leaves + 1):
        if all(f.get(idx) is None or f.component(idx).src.count() <= emit_limit for idx in f.system.indices(ml)):
            best = ml
        else:
            break
    return best


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=1)
