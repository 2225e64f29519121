"""``graftlab`` command line.

Exit codes: 0 pass, 1 a relation is violated, 2 malformed input or usage.
Checks print one ``RELATION (location) detail`` line per violation and a
trailing ``PASS``/``FAIL`` summary; ``--json`` prints the report as JSON.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import bimultihedron as bm
from . import foresty_cat as fc
from . import io
from .gradedalg import DEFAULT_EXHAUSTIVE_LIMIT, DEFAULT_SAMPLES, parse_ring
from .monoid_morse import (ActionAxiomError, ActionTriple, FiniteSemigroup, NotAssociative, block_table, corpus,
                           extract_bimodule_blocks, extras, morse_fbialgebra, translation_triple, trivial_triple)
from .multiindex import MultiIndex, heartsuit, mi, splittings
from .report import Report, timed
from .suites import DEFAULT_SEED, PROFILES, run_suites, suite_table

PASS, FAIL, MALFORMED = 0, 1, 2


class Usage(Exception):
    pass


def _multi(s: str) -> MultiIndex:
    try:
        k = mi(s)
    except ValueError:
        raise Usage(f"bad multi-index {s!r}") from None
    if not k or any(e < 1 for e in k):
        raise Usage(f"bad multi-index {s!r}")
    return k


def _threads():
    try:
        return max(1, int(os.environ.get("GRAFTLAB_THREADS", "1")))
    except ValueError:
        return 1


def _opts(args, max_leaves):
    return fc.CheckOptions(max_leaves, args.limit, args.samples, args.seed)


def _emit(args, reports):
    if isinstance(reports, Report):
        reports = [reports]
    if args.json:
        data = [r.to_json() for r in reports]
        print(json.dumps(data[0] if len(data) == 1 else data, sort_keys=True))
    else:
        for r in reports:
            for line in r.lines():
                print(line)
    if any(r.status == "error" for r in reports):
        return MALFORMED
    return PASS if all(r.passed for r in reports) else FAIL


# -- sign and stratum commands -----------------------------------------------------------

def cmd_heartsuit(args):
    k1, k0 = _multi(args.k1), _multi(args.k0)
    if len(k1) != sum(k0):
        raise Usage(f"k1 has {len(k1)} trees but k0 has {sum(k0)} leaves")
    print(heartsuit(k1, k0))
    return PASS


def cmd_rho(args):
    D0 = bm.stype(args.n0, _multi(args.k0), _multi(args.l0))
    D1 = bm.stype(args.n1, _multi(args.k1), _multi(args.l1))
    for D in (D0, D1):
        if bm.is_empty(D):
            raise Usage(f"{D!r} is empty")
    try:
        r = bm.rho(D0, D1)
    except ValueError as e:
        raise Usage(str(e)) from None
    if args.oracle:
        o = bm.rho_oracle(D0, D1)
        print(f"{r} oracle {o}")
        return PASS if r == o else FAIL
    print(r)
    return PASS


def cmd_strata(args):
    D = bm.stype(args.n, _multi(args.k), _multi(args.l))
    if bm.is_empty(D):
        raise Usage(f"{D!r} is empty")
    for lab, s in bm.boundary(D):
        print(f"{'-' if s % 2 else '+'} {lab!r}")
    if bm.stratum_dim(D) < 2:
        print("PASS")
        return PASS
    rep = bm.check_dd_zero(D)
    for lab, c in sorted(rep.offending.items(), key=lambda t: repr(t[0])):
        print(f"{c:+d} {lab!r}")
    print("PASS" if rep.passed else "FAIL")
    return PASS if rep.passed else FAIL


def cmd_ddzero(args):
    from .suites import dd_sweep
    rep = dd_sweep(args.max_n, args.max_k, args.max_l, args.max_dim, strict=not args.lenient)
    return _emit(args, rep)


def cmd_splittings(args):
    k = _multi(args.k)
    for sp in splittings(k):
        print(f"k0={list(sp.lower)} k1={list(sp.upper)}")
    return PASS


# -- foresty categories ----------------------------------------------------------------------

def cmd_compose(args):
    phi, alpha, _ = io.morphism_from_json(io.load_json(args.phi))
    psi, _, gamma = io.morphism_from_json(io.load_json(args.psi))
    if phi.system is not psi.system or phi.dst != psi.src or phi.ring != psi.ring:
        raise io.MalformedInput("the morphisms are not composable")
    out = fc.compose(psi, phi)
    text = io.dumps(io.morphism_to_json(out, alpha, gamma))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return PASS


def _object_report(alpha, max_leaves, opts):
    sysname = alpha.system.name
    if sysname == "ud":
        return fc.check_fbialgebra(alpha, max_leaves, opts)
    if sysname == "u":
        return fc.check_fAlg_object(alpha, max_leaves, opts)
    if sysname == "d":
        return fc.check_fCoalg_object(alpha, max_leaves, opts)
    return fc.check_bimodule_object(alpha, max_leaves, opts)


def cmd_check_object(args):
    _, alpha = io.object_from_json(io.load_json(args.file))
    ml = min(args.max_leaves or alpha.max_leaves, alpha.max_leaves)
    return _emit(args, _object_report(alpha, ml, _opts(args, ml)))


def cmd_check_morphism(args):
    phi, alpha, beta = io.morphism_from_json(io.load_json(args.file))
    ml = min(args.max_leaves or phi.max_leaves, phi.max_leaves)
    opts = _opts(args, ml)
    if phi.system is fc.UD:
        rep = fc.check_fbialg_morphism(phi, alpha, beta, ml, opts)
    else:
        rep = Report(f"{phi.system.name} morphism")
        with timed(rep):
            fc.check_vanishes(fc.hom_differential(beta, phi, alpha).restrict(ml), "chain-map", rep, opts)
    return _emit(args, rep)


def cmd_check_simplex(args):
    sx = io.simplex_from_json(io.load_json(args.file))
    ml = min([args.max_leaves or 99] + [sx.alpha(j).max_leaves for j in range(sx.n + 1)])
    return _emit(args, fc.check_simplex(sx, ml, _opts(args, ml), objects=not args.skip_objects))


def cmd_fill_horn(args):
    sx = io.simplex_from_json(io.load_json(args.file))
    if sx.n != 2:
        raise io.MalformedInput("fill-horn needs three objects")
    phi02, phi012 = fc.fill_inner_horn_2(sx.maps[(0, 1)], sx.maps[(1, 2)])
    sx.maps[(0, 2)], sx.maps[(0, 1, 2)] = phi02, phi012
    ml = min(sx.alpha(j).max_leaves for j in range(3))
    rep = fc.check_simplex(sx, ml, _opts(args, ml), objects=not args.skip_objects)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(io.dumps(io.simplex_to_json(sx)) + "\n")
    return _emit(args, rep)


# -- monoids ---------------------------------------------------------------------------------

def _semigroup(arg):
    builtin = {**corpus(), **extras()}
    if arg in builtin and not os.path.exists(arg):
        return builtin[arg]
    try:
        return FiniteSemigroup.from_json(io.load_json(arg))
    except NotAssociative as e:
        raise io.MalformedInput(f"not associative: {e}") from e
    except (KeyError, TypeError, ValueError) as e:
        raise io.MalformedInput(f"bad semigroup: {e}") from e


def _triple(arg):
    builtin = {"trivial": trivial_triple, "translation": translation_triple}
    if arg in builtin and not os.path.exists(arg):
        return builtin[arg]()
    try:
        return ActionTriple.from_json(io.load_json(arg))
    except ActionAxiomError as e:
        raise io.MalformedInput(f"action axioms fail: {e}") from e
    except (KeyError, TypeError, ValueError) as e:
        raise io.MalformedInput(f"bad triple: {e}") from e


def cmd_monoid_morse(args):
    M = _semigroup(args.file)
    ring = parse_ring(args.ring)
    _, alpha = morse_fbialgebra(M, ring, args.max_leaves)
    rep = fc.check_fbialgebra(alpha, args.max_leaves, _opts(args, args.max_leaves))
    rep.suite = f"monoid-morse {M.name}"
    if args.emit_object:
        ml = io.emittable_max_leaves(alpha, args.emit_limit)
        with open(args.emit_object, "w") as fh:
            fh.write(io.dumps(io.object_to_json(alpha.restrict(ml), args.emit_limit)) + "\n")
        rep.notes.append(f"object written to {args.emit_object} with maxLeaves {ml}")
    return _emit(args, rep)


def cmd_triple_blocks(args):
    T = _triple(args.file)
    mu = extract_bimodule_blocks(T, parse_ring(args.ring), args.max_leaves)
    rows = block_table(mu, args.emit_limit)
    if args.json:
        out = []
        for idx, entries, n in rows:
            d = io.index_to_json(fc.BIMOD, idx)
            d["inputs"] = n
            d["entries"] = None if entries is None else [{"in": a, "out": b, "coeff": io._coeff_to_json(c)}
                                                         for a, b, c in entries]
            out.append(d)
        print(json.dumps(out, sort_keys=True))
    else:
        for idx, entries, n in rows:
            if entries is None:
                print(f"{idx!r}: {n} inputs (not listed)")
                continue
            print(f"{idx!r}:")
            for a, b, c in entries:
                print(f"  {a} -> {b} x {c}")
    rep = fc.check_bimodule_object(mu, args.max_leaves, _opts(args, args.max_leaves))
    if not args.json:
        for line in rep.lines():
            print(line)
    return PASS if rep.passed else FAIL


# -- selftest ------------------------------------------------------------------------------

def cmd_selftest(args):
    names = args.suite or None
    try:
        reports = run_suites(args.profile, args.seed, names, _threads())
    except KeyError as e:
        raise Usage(str(e)) from None
    code = _emit(args, reports)
    if not args.json:
        total = sum(r.checked for r in reports)
        print(f"{'PASS' if code == PASS else 'FAIL'} selftest[{args.profile}]: {len(reports)} suites, "
              f"{total} relations checked")
    return code


# -- parser ---------------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="graftlab", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured report on stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"sampling seed (default {DEFAULT_SEED})")
    common.add_argument("--limit", type=int, default=DEFAULT_EXHAUSTIVE_LIMIT,
                        help="compare on all inputs up to this many, else sample")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="samples for large comparisons")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, fn, help_):
        q = sub.add_parser(name, parents=[common], help=help_)
        q.set_defaults(fn=fn)
        return q

    q = add("selftest", cmd_selftest, "run the acceptance sweeps")
    q.add_argument("--profile", choices=sorted(PROFILES), default="quick")
    q.add_argument("--suite", action="append", choices=sorted(suite_table()), help="run only this suite")

    q = add("heartsuit", cmd_heartsuit, "vertex-reordering sign of k1 glued on k0")
    q.add_argument("--k1", required=True)
    q.add_argument("--k0", required=True)

    q = add("rho", cmd_rho, "orientation sign of gluing D1 on top of D0")
    for n in ("n0", "n1"):
        q.add_argument(f"--{n}", type=int, required=True)
    for n in ("k0", "l0", "k1", "l1"):
        q.add_argument(f"--{n}", required=True)
    q.add_argument("--oracle", action="store_true", help="also compute the brute-force sign")

    q = add("strata", cmd_strata, "signed boundary of a stratum type")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--k", required=True)
    q.add_argument("--l", required=True)

    q = add("ddzero", cmd_ddzero, "boundary of the boundary vanishes on all types in range")
    q.add_argument("--max-dim", type=int, default=4)
    q.add_argument("--max-n", type=int, default=3)
    q.add_argument("--max-k", type=int, default=3)
    q.add_argument("--max-l", type=int, default=3)
    q.add_argument("--lenient", action="store_true", help="report corners with an empty intermediate gluing as notes")

    q = add("splittings", cmd_splittings, "two-layer decompositions of a multi-index")
    q.add_argument("--k", required=True)

    q = add("compose", cmd_compose, "composite PSI o PHI of two morphism files")
    q.add_argument("phi")
    q.add_argument("psi")
    q.add_argument("--out")

    for name, fn, help_ in (("check-object", cmd_check_object, "check an object file"),
                            ("check-morphism", cmd_check_morphism, "check a morphism file"),
                            ("check-simplex", cmd_check_simplex, "check a simplex file"),
                            ("fill-horn", cmd_fill_horn, "fill an inner 2-horn and check the simplex")):
        q = add(name, fn, help_)
        q.add_argument("file")
        q.add_argument("--max-leaves", type=int)
        if name in ("check-simplex", "fill-horn"):
            q.add_argument("--skip-objects", action="store_true", help="only the coherence relations")
        if name == "fill-horn":
            q.add_argument("--out", help="write the filled simplex here")

    q = add("monoid-morse", cmd_monoid_morse, "f-bialgebra of a finite semigroup (file or built-in name)")
    q.add_argument("file")
    q.add_argument("--max-leaves", type=int, default=4)
    q.add_argument("--ring", default="Z")
    q.add_argument("--emit-object")
    q.add_argument("--emit-limit", type=int, default=io.EMIT_LIMIT)

    q = add("triple-blocks", cmd_triple_blocks, "bimodule blocks of a G x X x H triple (file, trivial, translation)")
    q.add_argument("file")
    q.add_argument("--max-leaves", type=int, default=3)
    q.add_argument("--ring", default="Z")
    q.add_argument("--emit-limit", type=int, default=256)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (Usage, io.MalformedInput) as e:
        print(f"error: {e}", file=sys.stderr)
        return MALFORMED
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return MALFORMED


if __name__ == "__main__":
    sys.exit(main())
