"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 construction precondition failed
(orbital not self-paired), 4 verification failure, 5 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .errors import (
    AffineFlagError,
    InternalMismatch,
    InvalidParameters,
    NotSelfPaired,
    SizeCapExceeded,
    WitnessError,
)
from .field import field_of_order, is_prime
from .flaggraphs import (
    DEFAULT_FLAG_CAP,
    FlagGraph,
    census_group,
    gamma_Gc,
    gamma_Gc_group,
    graph_from_orbital,
    relation_graph,
    selfpaired_orbital_census,
)
from .geometry import LineRelation, affine_space, flag_label
from .group import (
    DEFAULT_ORBIT_CAP,
    StandardParameters,
    gl1_closure,
    named_group,
    standard_form,
)
from .verification import (
    are_isomorphic,
    check_complete_multipartite,
    design_recover,
    feasibility_check,
    invariants,
    is_arc_transitive,
    predict_valency,
    quotient_analysis,
)

EXIT_OK, EXIT_INVALID, EXIT_PRECONDITION, EXIT_VERIFY, EXIT_CAP = 0, 2, 3, 4, 5

RELATIONS = {
    "plus": LineRelation.INTERSECTING,
    "par": LineRelation.PARALLEL,
    "skew": LineRelation.SKEW,
}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _emit(args, payload: dict, text_lines: list[str]):
    if args.json:
        print(_dump(payload))
    else:
        print("\n".join(text_lines))


# -- graph construction -----------------------------------------------------------------

def _element_of_order(p: int, order: int) -> int:
    if (p - 1) % order:
        raise InvalidParameters(f"F_{p}^x has no element of order {order}")
    return field_of_order(p).omega_pow((p - 1) // order)


def _census_checks(p: int, ell_elt: int) -> int:
    if p < 3 or not is_prime(p):
        raise InvalidParameters(f"p must be an odd prime, got {p}")
    f = field_of_order(p)
    if ell_elt % p == 0:
        raise InvalidParameters("the element l must be nonzero mod p")
    order = f.mult_order(ell_elt % p)
    if order % 2:
        raise InvalidParameters(f"l = {ell_elt} has odd multiplicative order {order}; an even order is required")
    return order


def build_graph(args):
    """(graph, constructing group) for the family named on the command line."""
    fam = args.family
    if fam in RELATIONS:
        _need(args, "n", "q")
        f = field_of_order(args.q)
        g = relation_graph(args.n, f, RELATIONS[fam], cap=args.vertex_cap)
        return g, named_group("AGammaL", n=args.n, q=args.q)
    if fam == "gc":
        _need(args, "q", "t", "e", "s", "r")
        params = StandardParameters(args.t, args.e, args.s)
        return gamma_Gc(args.q, params, args.r, cap=args.orbit_cap), gamma_Gc_group(args.q, params)
    if fam == "census-member":
        _need(args, "p", "ell_order", "index")
        ell_elt = _element_of_order(args.p, args.ell_order)
        _census_checks(args.p, ell_elt)
        G = census_group(args.p, ell_elt)
        members = selfpaired_orbital_census(G, cap=args.orbit_cap)
        if not 0 <= args.index < len(members):
            raise InvalidParameters(f"index must lie in [0, {len(members)})")
        meta = {"family": "census-member",
                "params": {"p": args.p, "l": ell_elt, "index": args.index}}
        return graph_from_orbital(members[args.index], meta), G
    raise InvalidParameters(f"unknown family {fam!r}")


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + m.replace("_", "-") for m in missing)
        raise InvalidParameters(f"family {args.family!r} requires {flags}")


def cmd_build(args) -> int:
    g, _ = build_graph(args)
    meta = g.meta_json()
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(g.to_edgelist())
        with open(args.output + ".meta.json", "w", encoding="utf-8") as fh:
            fh.write(_dump(meta) + "\n")
        if args.json:
            print(_dump(meta))
        else:
            print(f"wrote {g.num_edges} edges to {args.output}; order {meta['order']}, valency {meta['valency']}")
    elif args.json:
        edges = [line.split("\t") for line in g.to_edgelist().splitlines()]
        print(_dump({"meta": meta, "edges": edges}))
    else:
        sys.stdout.write(g.to_edgelist())
        print(json.dumps(meta, sort_keys=True), file=sys.stderr)
    return EXIT_OK


# -- verification -----------------------------------------------------------------------

def _claim(claims, name, expected, actual):
    claims.append({"claim": name, "expected": expected, "actual": actual, "ok": expected == actual})


def _load_graph(args) -> FlagGraph:
    path = args.file
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidParameters(f"cannot read {path}: {exc.strerror}") from None
    meta = {}
    side = path + ".meta.json"
    if os.path.exists(side):
        with open(side, encoding="utf-8") as fh:
            meta = json.load(fh)
    n = args.n if args.n is not None else meta.get("n")
    q = args.q if args.q is not None else meta.get("q")
    if n is None or q is None:
        raise InvalidParameters("graph files need -n/-q or a .meta.json sidecar")
    space = affine_space(n, field_of_order(q))
    return FlagGraph.from_edgelist(text, space, {"family": meta.get("family", "file"),
                                                 "params": meta.get("params", {})})


def verify_report(g: FlagGraph, G=None) -> tuple[dict, list]:
    """Invariants, quotient and design of ``g`` plus the closed-form claims for its family."""
    sp = g.space
    n, q = sp.n, sp.q
    fam = g.meta.get("family")
    inv = invariants(g)
    report = {"meta": g.meta_json(), "invariants": inv.to_json()}
    claims = []
    order = q**n * (q**n - 1) // (q - 1)
    _claim(claims, "order", order, inv.order)
    expected_valency = {
        "plus": (q**n - q) * (q - 1),
        "par": q**n - q,
        "skew": (q**n - q) * (q**n - q * q) // (q - 1),
    }
    if fam in expected_valency:
        _claim(claims, "valency", expected_valency[fam], inv.valency)
    if fam in ("plus", "skew") and expected_valency[fam] > 0:
        _claim(claims, "girth", 3, inv.to_json()["girth"])
        _claim(claims, "diameter", 2, inv.to_json()["diameter"])
    if fam == "par":
        _claim(claims, "components", (q**n - 1) // (q - 1), len(inv.components))
        parts = sorted({check_complete_multipartite(c, g) for c in inv.components})
        report["multipartite"] = [list(x) for x in parts]
        _claim(claims, "component parts", [[q ** (n - 1), q]], report["multipartite"])
    if fam == "gc":
        prm = g.meta["params"]
        pred = predict_valency(q, (prm["t"], prm["e"], prm["s"]), prm["r"])
        report["prediction"] = pred.to_json()
        _claim(claims, "valency (q^2-q) ell_c", pred.valency, inv.valency)
        _claim(claims, "valency i q (q-1)^2/(t s)", pred.closed_form, inv.valency)
        _claim(claims, "connected", True, inv.connected)
    if g.num_edges:
        qr = quotient_analysis(g)
        report["quotient"] = qr.to_json()
        _claim(claims, "quotient complete", True, qr.quotient_complete)
        _claim(claims, "block size", (q**n - 1) // (q - 1), qr.block_size)
        _claim(claims, "multiplicity", q - 1, qr.multiplicity)
        design = design_recover(g, G, qr)
        report["design"] = design.to_json()
        _claim(claims, "design", {"v": q**n, "k": q, "lambda": 1},
               {k: report["design"][k] for k in ("v", "k", "lambda")})
    if G is not None:
        _claim(claims, "arc-transitive", True, is_arc_transitive(g, G))
    report["claims"] = claims
    report["ok"] = all(c["ok"] for c in claims)
    return report, claims


def cmd_verify(args) -> int:
    if args.file:
        g, G = _load_graph(args), None
    elif args.family:
        g, G = build_graph(args)
    else:
        raise InvalidParameters("verify needs a family or --file")
    report, claims = verify_report(g, G)
    lines = [f"{g!r}"]
    for key in ("invariants", "quotient", "design"):
        if key in report:
            lines.append(f"{key}: " + json.dumps(report[key], sort_keys=True))
    for c in claims:
        mark = "ok" if c["ok"] else "FAILED"
        lines.append(f"  [{mark}] {c['claim']}: expected {c['expected']}, got {c['actual']}")
    _emit(args, report, lines)
    return EXIT_OK if report["ok"] else EXIT_VERIFY


# -- census ----------------------------------------------------------------------------

def cmd_census(args) -> int:
    order = _census_checks(args.p, args.c)
    G = census_group(args.p, args.c)
    members = selfpaired_orbital_census(G, cap=args.orbit_cap)
    expected = (args.p - 1) // order + 1
    rows, graphs = [], []
    for k, o in enumerate(members):
        g = graph_from_orbital(o, {"family": "census-member", "params": {"index": k}})
        inv = invariants(g)
        rel = sorted(r.value for r in o.relations())
        rows.append({
            "index": k,
            "seed": [flag_label(o.seed[0]), flag_label(o.seed[1])],
            "size": len(o),
            "relation": rel,
            "order": inv.order,
            "valency": inv.valency,
            "connected": inv.connected,
        })
        if rel != ["parallel"]:
            graphs.append((k, g))
    iso = [[are_isomorphic(a, b) for _, b in graphs] for _, a in graphs]
    payload = {
        "p": args.p,
        "l": args.c % args.p,
        "order_of_l": order,
        "expected_count": expected,
        "count": len(members),
        "orbitals": rows,
        "non_parallel_indices": [k for k, _ in graphs],
        "isomorphism_matrix": iso,
    }
    lines = [f"p={args.p} l={args.c % args.p} |l|={order}: {len(members)} self-paired orbitals "
             f"(expected {expected})"]
    for r in rows:
        lines.append(f"  #{r['index']} {'/'.join(r['relation'])} size={r['size']} order={r['order']} "
                     f"valency={r['valency']} connected={r['connected']}  seed {r['seed'][0]} -> {r['seed'][1]}")
    if iso:
        lines.append("  pairwise isomorphic (non-parallel): " + str(all(all(r) for r in iso)))
    _emit(args, payload, lines)
    return EXIT_OK


# -- standard form ----------------------------------------------------------------------

def _parse_gen(text: str) -> tuple[int, int]:
    try:
        a, k = text.split(",")
        return int(a), int(k)
    except ValueError:
        raise InvalidParameters(f"generator {text!r} is not of the form a,k") from None


def cmd_standard_form(args) -> int:
    f = field_of_order(args.q)
    gens = [_parse_gen(x) for x in args.gen]
    for a, _ in gens:
        f.check(a)
    M = gl1_closure(f, gens, cap=args.element_cap)
    params = standard_form(f, M)
    payload = {"q": args.q, "t": params.t, "e": params.e, "s": params.s, "order": len(M)}
    _emit(args, payload, [f"(t, e, s) = ({params.t}, {params.e}, {params.s}); subgroup order {len(M)}"])
    return EXIT_OK


# -- feasibility -------------------------------------------------------------------------

def cmd_feasible(args) -> int:
    params = {k: v for k, v in (("n", args.n), ("q", args.q), ("d", args.d), ("t", args.t),
                                ("e", args.e), ("s", args.s), ("p", args.p), ("l", args.l))
              if v is not None}
    G = named_group(args.group, **params)
    report = feasibility_check(G).to_json()
    payload = {"group": args.group, "params": params, **report}
    lines = [f"{args.group} {params}: feasible={report['feasible']}"]
    lines += [f"  {k}: {v}" for k, v in sorted(report.items()) if k != "feasible"]
    _emit(args, payload, lines)
    return EXIT_OK


# -- parser --------------------------------------------------------------------------------

def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--orbit-cap", type=_positive, default=DEFAULT_ORBIT_CAP)
    common.add_argument("--element-cap", type=_positive, default=DEFAULT_ORBIT_CAP)
    common.add_argument("--vertex-cap", type=_positive, default=DEFAULT_FLAG_CAP)

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("-n", type=int)
    family.add_argument("-q", type=int)
    for name in ("t", "e", "s", "r", "p", "index"):
        family.add_argument(f"--{name}", type=int)
    family.add_argument("--ell-order", type=int, help="order of l for census members")

    parser = argparse.ArgumentParser(prog="affineflag", description="Flag graphs of affine spaces.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common, family], help="build and export a flag graph")
    b.add_argument("family", choices=["plus", "par", "skew", "gc", "census-member"])
    b.add_argument("-o", "--output", help="edge-list path; meta goes to PATH.meta.json")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", parents=[common, family], help="check a graph against the closed forms")
    v.add_argument("family", nargs="?", choices=["plus", "par", "skew", "gc", "census-member"])
    v.add_argument("--file", help="edge list produced by build")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("census", parents=[common], help="self-paired orbitals of SL(2,p) x| <diag(1,l)>")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--c", type=int, required=True, help="the element l of F_p")
    c.set_defaults(func=cmd_census)

    s = sub.add_parser("standard-form", parents=[common], help="(t, e, s) of a subgroup of GammaL(1,q)")
    s.add_argument("-q", type=int, required=True)
    s.add_argument("--gen", action="append", default=[], help="generator a,k: y -> a*y^(p^k)")
    s.set_defaults(func=cmd_standard_form)

    f = sub.add_parser("feasible", parents=[common], help="check the four feasibility conditions for a catalogued group")
    f.add_argument("--group", required=True,
                   choices=["Translations", "ASL", "AGL", "AGammaL", "AGL1", "AGammaL1",
                            "SL2_semidirect_H", "SL2p_C"])
    f.add_argument("-n", "--n", type=int)
    f.add_argument("-q", "--q", type=int)
    for name in ("d", "t", "e", "s", "p", "l"):
        f.add_argument(f"--{name}", type=int)
    f.set_defaults(func=cmd_feasible)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SizeCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except NotSelfPaired as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (WitnessError, InternalMismatch) as exc:
        witness = getattr(exc, "witness", None)
        print(f"error: {exc}" + (f" (witness: {witness})" if witness is not None else ""), file=sys.stderr)
        return EXIT_VERIFY
    except (AffineFlagError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
