"""Command-line interface: build, verify, analyze, extract, search, feasible, export."""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import prime_power, semifield_load
from .errors import BudgetExceeded, InputError, VerificationFailure
from .groups import CERTIFY_SEED, DENSE_CAP, Subgroup, group_load
from .plane import build_plane, coordinatize_ptr, ideal_checks, plane_load, right_action

EXIT_OK, EXIT_MATH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
BUDGET_ENV = "SOFTPLANES_MAX_ELEMENTS"
DEFAULT_BUDGET = 2_000_000


def _budget_default() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None


def _say(text: str = ""):
    print(text, flush=True)


def _write(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def _manifest(args, inputs, outputs, out_dir: Path, prefix: str):
    from .fileio import write_manifest
    path = out_dir / f"{prefix}.manifest.json"
    write_manifest(path, sys.argv[1:] if args.argv is None else args.argv, inputs, outputs,
                   CERTIFY_SEED, __version__)
    return path


# -- build ------------------------------------------------------------------------

def _parse_alpha(text: str) -> int:
    name, _, e = text.partition("^")
    if name != "frobenius":
        raise InputError(f"--alpha must look like frobenius^e, got {text!r}")
    try:
        return int(e) if e else 1
    except ValueError:
        raise InputError(f"bad exponent in --alpha {text!r}") from None


def _build_recipe(args) -> tuple[str, dict, int]:
    """(kind, params, expected group order) from build arguments."""
    if args.kind == "heisenberg":
        if args.semifield:
            q = semifield_load(args.semifield).order
            return "heisenberg", {"semifield": str(Path(args.semifield).resolve())}, q ** 3
        _need_q(args)
        return "heisenberg", {"q": args.q}, args.q ** 3
    if args.kind == "likeable":
        _need_q(args)
        params = {"q": args.q}
        if args.l:
            params["l"] = str(Path(args.l).resolve())
        return "likeable", params, args.q ** 6
    if args.kind == "decorate":
        _need_q(args)
        e = _parse_alpha(args.alpha)
        m = prime_power(args.q)[1]
        base = args.q ** (3 if args.base == "heisenberg" else 6)
        return "decorate", {"base": args.base, "q": args.q, "e": e}, base * m
    raise InputError(f"unknown construction {args.kind!r}")


def _need_q(args):
    if args.q is None:
        raise InputError(f"build {args.kind} needs --q")
    if prime_power(args.q) is None:
        raise InputError(f"{args.q} is not a prime power")


def cmd_build(args) -> int:
    from .fileio import action_dumps, as_dense, construct, recipe_string, triple_dumps
    kind, params, order = _build_recipe(args)
    if order > args.max_elements:
        raise BudgetExceeded(f"|G| = {order} exceeds --max-elements {args.max_elements}")
    t = construct(kind, {k: str(v) for k, v in params.items()})
    plane = build_plane(t)
    action = right_action(t, plane)
    out = Path(args.out)
    prefix = args.prefix or kind + (f"{args.q}" if args.q else "")
    outputs = []
    if t.G.order <= DENSE_CAP:
        outputs.append(_write(out / f"{prefix}.grp", as_dense(t.G).dumps()))
        header = outputs[-1].name
    else:
        header = recipe_string(kind, **params)
    outputs.append(_write(out / f"{prefix}.triple", triple_dumps(t, header)))
    outputs.append(_write(out / f"{prefix}.plane", plane.dumps()))
    outputs.append(_write(out / f"{prefix}.action", action_dumps(action)))
    inputs = [p for p in (args.semifield, args.l) if p]
    _manifest(args, inputs, outputs, out, prefix)
    _say(f"built {t.name}: |G|={t.G.order} n={t.n} k={t.k}, plane of order {plane.n} "
         f"with {plane.n_points} points")
    for p in outputs:
        _say(f"  wrote {p}")
    return EXIT_OK


# -- verify / analyze ---------------------------------------------------------------

def _load_triple(path):
    """Verified SoftTriple, or a ConditionReport explaining why not."""
    from .fileio import triple_load
    from .soft import ConditionReport, verify_soft_triple, NotSoft
    G, ids, _ = triple_load(path)
    subs = {}
    rep = ConditionReport("certificate")
    for key in ("A", "B", "M"):
        mask = np.zeros(G.order, dtype=bool)
        mask[ids[key]] = True
        try:
            subs[key] = Subgroup(G, mask, verify=True)
        except VerificationFailure as exc:
            rep.add(f"{key} is a subgroup", False, exc.witness, str(exc))
    if rep.checks:
        return None, rep
    try:
        return verify_soft_triple(G, subs["A"], subs["B"], subs["M"], name=Path(path).stem), None
    except NotSoft as exc:
        from .soft import corollary_checks, SoftTriple
        rep = exc.report
        # derived identities still make sense (and give witnesses) on a failed triple
        try:
            probe = SoftTriple(G, subs["A"], subs["B"], subs["M"], 0, 0, rep, name="probe")
            rep = rep.merge(corollary_checks(probe))
        except Exception:  # noqa: BLE001 - best effort diagnostics only
            pass
        rep.title = "certificate"
        return None, rep


def cmd_verify(args) -> int:
    from .soft import full_report
    t, failed = _load_triple(args.triple)
    if t is None:
        _say(failed.format())
        _say("RESULT: FAIL")
        return EXIT_MATH
    rep = full_report(t)
    _say(f"triple {t.name}: |G|={t.G.order} n={t.n} k={t.k}")
    _say(rep.format())
    _say(f"RESULT: {'PASS' if rep.ok else 'FAIL'}")
    return EXIT_OK if rep.ok else EXIT_MATH


def cmd_analyze(args) -> int:
    from .analysis import proposition_battery
    t, failed = _load_triple(args.triple)
    if t is None:
        _say(failed.format())
        return EXIT_MATH
    plane = build_plane(t)
    action = right_action(t, plane)
    ideal = ideal_checks(t, plane, action)
    ptr = coordinatize_ptr(plane)
    ok = ideal.ok
    if args.battery:
        bat = proposition_battery(t, plane, action)
        ok = ok and bat.ok
        if args.json:
            _say(bat.to_json())
            return EXIT_OK if ok else EXIT_MATH
    _say(f"triple {t.name}: |G|={t.G.order} n={t.n} k={t.k}; plane order {plane.n}")
    _say(ideal.format())
    _say(f"[coordinates] flag-aligned ternary ring: {ptr.kind}")
    if args.battery:
        _say(bat.format())
    _say(f"RESULT: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_MATH


# -- extract / search / feasible / export ---------------------------------------------------

def cmd_extract(args) -> int:
    from .converse import extract_soft_triple
    from .fileio import action_from_generators, action_loads, as_dense, triple_dumps
    from .soft import full_report
    plane = plane_load(args.plane)
    gens = action_loads(Path(args.group).read_text())
    H = action_from_generators(plane, gens, args.max_elements, name=Path(args.group).stem)
    res = extract_soft_triple(plane, H)
    t = res.triple
    _say(f"extracted from |H|={t.G.order}: n={t.n} k={t.k}, flag (point {res.flag[0]}, "
         f"line {res.flag[1]}), ideal line {res.ideal_line}, ideal point {res.ideal_point}")
    _say(full_report(t).format())
    _say("isomorphism to the rebuilt plane: verified")
    if args.out:
        out = Path(args.out)
        prefix = args.prefix or "extracted"
        outputs = []
        if t.G.order > DENSE_CAP:
            _say(f"group of order {t.G.order} is too large for a dense file; nothing written")
        else:
            outputs.append(_write(out / f"{prefix}.grp", as_dense(t.G).dumps()))
            outputs.append(_write(out / f"{prefix}.triple", triple_dumps(t, outputs[-1].name)))
            outputs.append(_write(out / f"{prefix}.plane", res.plane.dumps()))
            _write(out / f"{prefix}.map", "POINTS " + " ".join(map(str, res.point_map)) + "\n"
                   + "LINES " + " ".join(map(str, res.line_map)) + "\n")
            outputs.append(out / f"{prefix}.map")
            _manifest(args, [args.plane, args.group], outputs, out, prefix)
            for p in outputs:
                _say(f"  wrote {p}")
    return EXIT_OK


def cmd_search(args) -> int:
    if args.mode == "decorated":
        return _search_decorated(args)
    from .converse import search_soft_triples
    if not args.group:
        raise InputError("search needs --group (or the 'decorated' mode)")
    G = group_load(args.group)
    res = search_soft_triples(G, n=args.n, k=args.k, cap=args.cap, progress_path=args.progress)
    for line in res.log:
        _say(line)
    _say(f"{len(res.canonical)} soft triple(s) up to conjugacy in {G.name} (|G|={G.order})")
    for key in res.canonical:
        A, B, M = key
        _say(f"  A={list(A)} B={list(B)} M={list(M)}")
    return EXIT_OK


def _search_decorated(args) -> int:
    from .fileio import construct
    from .converse import decorated_subgroup_search
    if args.q is None:
        raise InputError("search decorated needs --q")
    t = construct("decorate", {"base": "heisenberg", "q": str(args.q), "e": str(_parse_alpha(args.alpha))})
    if t.G.order > args.max_elements:
        raise BudgetExceeded(f"|G| = {t.G.order} exceeds --max-elements {args.max_elements}")
    ds = decorated_subgroup_search(t)
    _say(f"{t.name}: |G|={t.G.order}, full translation group of order {ds.translation_order}")
    for S, census in ds.rejected:
        _say(f"  subgroup of order {S.order}: not soft, opposite-flag orbits {sorted(census.elements())}")
    for h in ds.hits:
        _say(f"  subgroup of order {h.subgroup.order}: soft{' (base group)' if h.is_base else ''}; "
             f"M normal={h.M_normal} AM normal={h.AM_normal} BM normal={h.BM_normal} "
             f"|Z|={h.center_order} contains translations={h.contains_translations}")
    return EXIT_OK if ds.hits else EXIT_MATH


def cmd_feasible(args) -> int:
    from .converse import order_feasibility
    f = order_feasibility(args.n, assume_M_normal=args.assume_M_normal)
    _say(f.format())
    return EXIT_OK if f.feasible else EXIT_MATH


def cmd_export(args) -> int:
    plane = plane_load(args.plane)
    text = plane.incidence_matrix_text() if args.format == "incidence-matrix" else plane.dumps()
    if args.out:
        out = Path(args.out)
        _write(out, text)
        _manifest(args, [args.plane], [out], out.parent, out.stem)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- entry point ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="softplanes", description=__doc__)
    p.add_argument("--max-elements", type=int, default=None,
                   help=f"element budget for enumerations (env {BUDGET_ENV}, default {DEFAULT_BUDGET})")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a soft triple and its plane")
    b.add_argument("kind", choices=["heisenberg", "likeable", "decorate"])
    b.add_argument("--q", type=int)
    b.add_argument("--semifield", help="semifield table file (heisenberg only)")
    b.add_argument("--l", help="additive map file (likeable only)")
    b.add_argument("--alpha", default="frobenius^1", help="automorphism for decorate")
    b.add_argument("--base", default="heisenberg", choices=["heisenberg", "likeable"])
    b.add_argument("--out", default=".")
    b.add_argument("--prefix")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="certificate for a triple file")
    v.add_argument("triple")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("analyze", help="plane and collineation analysis of a triple")
    a.add_argument("triple")
    a.add_argument("--battery", action="store_true")
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("extract", help="soft triple from a plane and a collineation group")
    e.add_argument("--plane", required=True)
    e.add_argument("--group", required=True, help="action file of point-permutation generators")
    e.add_argument("--out")
    e.add_argument("--prefix")
    e.set_defaults(func=cmd_extract)

    s = sub.add_parser("search", help="search a group (or decorated subgroups) for soft triples")
    s.add_argument("mode", nargs="?", default="group", choices=["group", "decorated"])
    s.add_argument("--group")
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--cap", type=int, default=1024)
    s.add_argument("--progress", help="resumable progress file")
    s.add_argument("--q", type=int)
    s.add_argument("--alpha", default="frobenius^1")
    s.set_defaults(func=cmd_search)

    f = sub.add_parser("feasible", help="arithmetic filters on a plane order")
    f.add_argument("n", type=int)
    f.add_argument("--assume-M-normal", dest="assume_M_normal", action="store_true")
    f.set_defaults(func=cmd_feasible)

    x = sub.add_parser("export", help="re-emit a plane file")
    x.add_argument("--plane", required=True)
    x.add_argument("--format", default="incidence-matrix", choices=["incidence-matrix", "plane"])
    x.add_argument("--out")
    x.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.argv = argv
    try:
        if args.max_elements is None:
            args.max_elements = _budget_default()
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except VerificationFailure as exc:
        wit = f" (witness: {exc.witness})" if exc.witness is not None else ""
        print(f"failure: {exc}{wit}", file=sys.stderr)
        return EXIT_MATH
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
