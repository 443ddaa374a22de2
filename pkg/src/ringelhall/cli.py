"""Command-line interface.

Every subcommand prints one JSON document (or CSV / an indented text view) on stdout.
Errors go to stderr as {"error": code, "message": ...} with exit codes
2 (usage), 3 (budget exceeded) and 4 (catalog miss).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction

import numpy as np

from .catalog import CatalogMiss, format_label, get_catalog
from .coeff import LaurentCoeff
from .hallnum import BudgetExceeded, get_calculator
from .quiver import QuiverError, cartan_matrix, is_tame, load_quiver, tame_data

EXIT_USAGE, EXIT_BUDGET, EXIT_MISS = 2, 3, 4

_RESTORE: list = []


class UsageError(Exception):
    pass


def _num(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, LaurentCoeff):
        return str(x)
    return str(x)


def _stringify(obj):
    """Numbers become decimal strings; containers are walked."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer, Fraction, LaurentCoeff)):
        return _num(obj)
    if isinstance(obj, dict):
        return {str(k): _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    return obj


# -- context -------------------------------------------------------------------


def _catalog(args, bound: int | None = None):
    try:
        Q = load_quiver(args.quiver)
    except (QuiverError, OSError) as exc:
        raise UsageError(str(exc)) from exc
    cat = get_catalog(Q, args.q)
    if bound:
        cat.ensure(bound)
    if args.budget_ops is not None:
        # calculators are shared per catalog; main restores the old budget afterwards
        calc = get_calculator(cat)
        _RESTORE.append((calc, calc.budget))
        calc.budget = args.budget_ops
    return cat


def _cls(cat, text: str):
    try:
        return cat.parse(text)
    except (ValueError, KeyError) as exc:
        if isinstance(exc, CatalogMiss):
            raise
        raise UsageError(f"cannot parse module class {text!r}: {exc}") from exc


def _algebra(cat):
    from .hallalg import get_algebra

    return get_algebra(cat)


# -- commands ------------------------------------------------------------------


def cmd_quiver_show(args):
    Q = load_quiver(args.quiver)
    out = {
        "name": Q.name,
        "vertices": [Q.label(i) for i in range(Q.n)],
        "arrows": [[a.name, Q.label(a.source), Q.label(a.target)] for a in Q.arrows],
        "euler_matrix": Q.euler_matrix.tolist(),
        "cartan_matrix": cartan_matrix(Q).tolist(),
    }
    if is_tame(Q):
        td = tame_data(Q)
        out["tame"] = {
            "type": td.type_tag,
            "ell": td.ell,
            "periods": list(td.periods),
            "delta": list(td.delta),
            "regular_simple_dims": [[list(d) for d in tube] for tube in td.regular_simple_dims],
            "extending_vertex": Q.label(td.extending_vertex),
        }
    return out


def cmd_catalog_list(args):
    cat = _catalog(args, args.bound)
    rows = []
    for X in cat.indecomposables(args.bound):
        M = cat.of(X.label)
        rows.append(
            {
                "label": format_label(cat.quiver, X.label),
                "dims": list(X.dims),
                "kind": cat.kind(X.label),
                "end_dim": cat.end_dim(M),
                "aut_order": cat.aut_order(M),
            }
        )
    return rows


def cmd_hall_g(args):
    cat = _catalog(args)
    M, N, L = _cls(cat, args.M), _cls(cat, args.N), _cls(cat, args.L)
    cat.ensure(L.total)
    calc = get_calculator(cat)
    methods = {
        "submodule": calc.hall_number,
        "sequence": calc.hall_number_via_sequences,
        "riedtmann": calc.hall_number_riedtmann,
    }
    if args.method == "all":
        vals = {k: f(M, N, L).value for k, f in methods.items()}
        if len(set(vals.values())) != 1:
            raise RuntimeError(f"methods disagree: {vals}")
        return {"g": next(iter(vals.values())), "methods": vals}
    return {"g": methods[args.method](M, N, L).value}


def cmd_hall_extset(args):
    cat = _catalog(args)
    M, N = _cls(cat, args.M), _cls(cat, args.N)
    es = get_calculator(cat).ext_set(M, N)
    return [{"L": str(L), "g": c.value, "orbit_dim": es.orbit_dims[L]} for L, c in es.members.items()]


def cmd_alg_mul(args):
    cat = _catalog(args)
    alg = _algebra(cat)
    x = alg.u(_cls(cat, args.a))
    for b in args.b:
        x = alg.multiply(x, alg.u(_cls(cat, b)))
    return {"product": x.to_json(), "text": str(x)}


def cmd_alg_delta(args):
    cat = _catalog(args)
    alg = _algebra(cat)
    d = alg.comultiply(alg.u(_cls(cat, args.x)))
    return {"delta": d.to_json(), "text": str(d)}


def cmd_alg_antipode(args):
    cat = _catalog(args)
    alg = _algebra(cat)
    M = _cls(cat, args.x)
    s = alg.antipode(alg.u(M), method=args.method)
    return {"antipode": s.to_json(), "text": str(s)}


def cmd_check_serre(args):
    from .hallalg import serre_suite

    return serre_suite(_algebra(_catalog(args)))


def cmd_check_hopf(args):
    from .hallalg import hopf_suite

    return hopf_suite(_algebra(_catalog(args, args.max_total)), args.max_total)


def cmd_check_lemma412(args):
    from .pbw import PBW

    pb = PBW(_catalog(args))
    res = pb.lemma412_check(args.n, args.n2)
    return dict(res, ok=all(res.values()))


def cmd_check_pbw(args):
    from .pbw import PBW

    cat = _catalog(args)
    pb = PBW(cat)
    if args.gamma:
        gammas = [tuple(int(x) for x in args.gamma.split(","))]
    else:
        top = tuple(2 * d for d in cat.tame.delta)
        from .quiver import subvectors

        gammas = sorted((g for g in subvectors(top) if any(g)), key=lambda g: (sum(g), g))
    spans = pb.singular_spans(tuple(max(g[i] for g in gammas) for i in range(cat.quiver.n)))
    reports = [pb.pbw_rank_check(g, spans) for g in gammas]
    out = {"ok": all(r["ok"] for r in reports), "degrees": [dict(r, degree=list(r["degree"])) for r in reports]}
    if args.show_basis and len(gammas) == 1:
        out["basis"] = [b.label() for b in pb.pbw_basis(gammas[0])]
    return out


def cmd_check_ldelta(args):
    cat = _catalog(args)
    alg = _algebra(cat)
    L = alg.l_delta(args.n)
    out = {
        "n": args.n,
        "dim": L.dim,
        "rank_singular": L.singular.rank,
        "rank_lower": L.lower.rank,
        "direct_sum": L.direct_sum_holds(),
        "basis": [x.to_json() for x in L.basis],
    }
    if args.ell is not None:
        out["ok"] = L.dim == args.ell and out["direct_sum"]
    return out


def cmd_check_orders(args):
    from .orders import order_coherence

    cat = _catalog(args)
    rep = order_coherence(cat, args.max_total, args.chain_bound)
    return {
        "pairs": rep.pairs,
        "ext_true": rep.ext_true,
        "counterexamples": [list(p) for p in rep.counterexamples],
        "hom_true_without_ext_chain": [list(p) for p in rep.unresolved],
        "ok": rep.ok,
        "note": "the hom order is a necessary condition for degeneration, not the degeneration order itself",
    }


def cmd_poly_fit(args):
    from .hallpoly import Triple, fit_hall_polynomial, load_triples

    if args.triples:
        triples = load_triples(args.triples)
    else:
        if not (args.X1 and args.X2 and args.X3):
            raise UsageError("give --triples FILE or all of --X1 --X2 --X3")
        triples = [Triple.parse(args.quiver, args.X1, args.X2, args.X3)]
    samples = [int(x) for x in args.samples.split(",")]
    verify = [int(x) for x in args.verify.split(",")]
    out = []
    for t in triples:
        fit = fit_hall_polynomial(t, samples, verify)
        out.append(dict(fit.to_json(), triple=t.to_json()))
    return out if len(out) > 1 else out[0]


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiver", default="A2", help="built-in name, inline text or quiver file")
    common.add_argument("--q", type=int, default=2, help="field size")
    common.add_argument("--budget-ops", type=int, default=None, help="cap on enumerated objects per count")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")

    p = argparse.ArgumentParser(prog="ringelhall", description="Hall numbers and Ringel-Hall algebras of quivers over finite fields")
    sub = p.add_subparsers(dest="group", required=True)

    g = sub.add_parser("quiver").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("show", parents=[common])
    c.set_defaults(func=cmd_quiver_show)

    g = sub.add_parser("catalog").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("list", parents=[common])
    c.add_argument("--bound", type=int, default=3)
    c.set_defaults(func=cmd_catalog_list)

    g = sub.add_parser("hall").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("g", parents=[common], help="g_{MN}^L with N the submodule and M the quotient")
    c.add_argument("--M", required=True)
    c.add_argument("--N", required=True)
    c.add_argument("--L", required=True)
    c.add_argument("--method", choices=("submodule", "sequence", "riedtmann", "all"), default="submodule")
    c.set_defaults(func=cmd_hall_g)
    c = g.add_parser("extset", parents=[common])
    c.add_argument("--M", required=True)
    c.add_argument("--N", required=True)
    c.set_defaults(func=cmd_hall_extset)

    g = sub.add_parser("alg").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("mul", parents=[common], help="u_a * u_b1 * u_b2 ...")
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True, action="append")
    c.set_defaults(func=cmd_alg_mul)
    c = g.add_parser("delta", parents=[common])
    c.add_argument("--x", required=True)
    c.set_defaults(func=cmd_alg_delta)
    c = g.add_parser("antipode", parents=[common])
    c.add_argument("--x", required=True)
    c.add_argument("--method", choices=("closed", "recursive"), default="closed")
    c.set_defaults(func=cmd_alg_antipode)

    g = sub.add_parser("check").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("serre", parents=[common])
    c.set_defaults(func=cmd_check_serre)
    c = g.add_parser("hopf", parents=[common])
    c.add_argument("--max-total", type=int, default=3)
    c.set_defaults(func=cmd_check_hopf)
    c = g.add_parser("lemma412", parents=[common])
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--n2", type=int, default=1)
    c.set_defaults(func=cmd_check_lemma412)
    c = g.add_parser("pbw", parents=[common])
    c.add_argument("--gamma", default=None, help="comma-separated degree; default: all degrees <= 2 delta")
    c.add_argument("--show-basis", action="store_true")
    c.set_defaults(func=cmd_check_pbw)
    c = g.add_parser("ldelta", parents=[common])
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--ell", type=int, default=None, help="expected dimension")
    c.set_defaults(func=cmd_check_ldelta)
    c = g.add_parser("orders", parents=[common])
    c.add_argument("--max-total", type=int, default=4)
    c.add_argument("--chain-bound", type=int, default=4)
    c.set_defaults(func=cmd_check_orders)

    g = sub.add_parser("poly").add_subparsers(dest="cmd", required=True)
    c = g.add_parser("fit", parents=[common])
    c.add_argument("--triples", default=None, help="JSON file with one triple or a list of triples")
    c.add_argument("--X1")
    c.add_argument("--X2")
    c.add_argument("--X3")
    c.add_argument("--samples", default="2,3,5,7,11,13")
    c.add_argument("--verify", default="17,19")
    c.set_defaults(func=cmd_poly_fit)
    return p


# -- output --------------------------------------------------------------------


def _emit(data, fmt: str, stream) -> None:
    data = _stringify(data)
    if fmt == "json":
        json.dump(data, stream, indent=None, sort_keys=False)
        stream.write("\n")
    elif fmt == "pretty":
        _pretty(data, stream, 0)
    else:
        rows = data if isinstance(data, list) else [data]
        rows = [r if isinstance(r, dict) else {"value": r} for r in rows]
        keys = []
        for r in rows:
            keys += [k for k in r if k not in keys]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
        stream.write(buf.getvalue())


def _pretty(data, stream, indent: int) -> None:
    pad = "  " * indent
    if isinstance(data, dict):
        for k, v in data.items():
            if isinstance(v, (dict, list)) and v:
                stream.write(f"{pad}{k}:\n")
                _pretty(v, stream, indent + 1)
            else:
                stream.write(f"{pad}{k}: {v}\n")
    elif isinstance(data, list):
        for v in data:
            if isinstance(v, (dict, list)):
                stream.write(f"{pad}-\n")
                _pretty(v, stream, indent + 1)
            else:
                stream.write(f"{pad}- {v}\n")
    else:
        stream.write(f"{pad}{data}\n")


def _error(code: str, msg: str) -> None:
    sys.stderr.write(json.dumps({"error": code, "message": msg}) + "\n")


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    random.seed(args.seed)
    np.random.seed(args.seed)
    try:
        data = args.func(args)
    except UsageError as exc:
        _error("usage", str(exc))
        return EXIT_USAGE
    except BudgetExceeded as exc:
        _error("budget", str(exc))
        return EXIT_BUDGET
    except CatalogMiss as exc:
        _error("catalog-miss", str(exc))
        return EXIT_MISS
    except QuiverError as exc:
        _error("usage", str(exc))
        return EXIT_USAGE
    finally:
        while _RESTORE:
            calc, budget = _RESTORE.pop()
            calc.budget = budget
    _emit(data, args.format, stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
