"""Command-line front end: ``fusionkit {analyze,reduce,compare,linking,catalog}``.

Every command prints one JSON document (``schema: 1``).  Group and subgroup
orders are written as decimal strings and elements in cycle notation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import cache
from . import fusion as fusion_mod
from .catalog import STANDARD, from_selector
from .errors import CapacityError, FusionKitError, InputError
from .fusion import (FusionSystem, check_saturation, focal, fusion_from_group, hyperfocal,
                     op_core_F, z_F)
from .fusionops import is_isomorphic, iso_witness_perms
from .linking import mu_kappa_report
from .permgrp import p_part
from .reduction import is_constrained, is_reduced, reduce

SCHEMA = 1


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which here means a capacity error
    def error(self, message):
        raise InputError(message)


def _caps(args) -> dict:
    return {"max_s_order": args.max_s_order, "max_morphisms": args.max_morphisms,
            "max_aut_bruteforce": args.max_aut_bruteforce}


def _prime(entry, p):
    p = p if p is not None else entry.default_p
    if p is None:
        raise InputError(f"{entry.name}: no default prime, pass --p")
    return p


def load_system(entry, p: int, caps: dict, use_cache: bool = True) -> FusionSystem:
    """``F_S(G)`` for a catalog entry, read from or written to the cache."""
    G = entry.group
    key = cache.cache_key("fusion", G, p, caps)
    if use_cache:
        data = cache.load(key)
        if data is not None:
            return cache.fusion_from_json(data, G, p, caps["max_s_order"], name=entry.name)
    F = fusion_from_group(G, p, max_s_order=caps["max_s_order"], name=entry.name)
    if use_cache:
        cache.store(key, cache.fusion_to_json(F))
    return F


# ---------------------------------------------------------------- rendering

def node_json(F: FusionSystem, node: int) -> dict:
    nd = F.L.nodes[node]
    return {"node": int(node), "order": str(nd.order),
            "generators": [str(F.S.perms[g]) for g in nd.generators]}


def class_table(F: FusionSystem) -> list:
    rows = []
    for ci in F.f_classes():
        rows.append({
            "class": ci.class_id,
            "representative": node_json(F, ci.rep),
            "size": len(ci.members),
            "aut_order": str(ci.aut_order),
            "out_order": str(ci.out_order),
            "flags": {"centric": ci.centric, "radical": ci.radical, "essential": ci.essential},
        })
    return rows


def linking_json(rep) -> dict:
    return {
        "out_G": str(rep.out_G),
        "aut_G_S": str(rep.aut_G_S),
        "out_S_F": str(rep.out_S_F),
        "restriction_image": str(rep.restriction_image),
        "restriction_kernel": str(rep.restriction_kernel),
        "E0": [int(x) for x in rep.E0],
        "E0_hat": [int(x) for x in rep.E0_hat],
        "kernel_classes": [{"out_class": int(k.out_class), "representative": k.representative,
                            "g_data": {str(P): v for P, v in sorted(k.g_data.items())},
                            "trivial": k.trivial} for k in rep.kernel_classes],
        "ker_kappa": str(rep.ker_kappa),
        "ker_mu_lower": str(rep.ker_mu_lower),
        "ker_mu_upper": str(rep.ker_mu_upper),
        "kappa_injective": rep.kappa_injective,
        "kappa_surjective": rep.kappa_surjective,
        "mu_injective": rep.mu_injective,
        "kappa": rep.kappa,
        "exact_sequence": rep.exact_sequence,
    }


def _header(entry, p, F: FusionSystem | None = None) -> dict:
    d = {"schema": SCHEMA, "input": {"selector": entry.name, "degree": entry.group.degree,
                                     "order": str(entry.group.order)}, "p": p}
    if F is not None:
        d["order_S"] = str(F.S.n)
    return d


# ---------------------------------------------------------------- commands

def cmd_analyze(args) -> dict:
    entry = from_selector(args.group)
    p = _prime(entry, args.p)
    F = load_system(entry, p, _caps(args), not args.no_cache)
    out = _header(entry, p, F)
    out["classes"] = class_table(F)
    out["focal"] = node_json(F, focal(F))
    out["hyperfocal"] = node_json(F, hyperfocal(F))
    out["O_p"] = node_json(F, op_core_F(F))
    out["Z"] = node_json(F, z_F(F))
    sat = check_saturation(F)
    out["saturated"] = sat.saturated
    rr = is_reduced(F)
    out["reduced"] = rr.reduced
    out["reduced_breakdown"] = rr.as_dict()
    out["constrained"] = is_constrained(F)
    out["essentials"] = [node_json(F, ci.rep) for ci in F.essential_classes()]
    tr = reduce(F)
    out["reduction"] = {"steps": len(tr.steps), "result": tr.as_dict()["result"],
                        "trivial": tr.trivial, "error": tr.error}
    if args.linking:
        out["linking"] = linking_json(mu_kappa_report(entry.group, p, F=F,
                                                      cap=args.max_aut_bruteforce))
    return out


def cmd_reduce(args) -> dict:
    entry = from_selector(args.group)
    p = _prime(entry, args.p)
    F = load_system(entry, p, _caps(args), not args.no_cache)
    out = _header(entry, p, F)
    tr = reduce(F, opprime_first=args.opprime_first)
    if tr.error is not None:
        raise CapacityError(tr.error)
    out["trace"] = tr.as_dict()
    return out


def cmd_compare(args) -> dict:
    ea, eb = from_selector(args.a), from_selector(args.b)
    p = args.p if args.p is not None else (ea.default_p or eb.default_p)
    if p is None:
        raise InputError("pass --p")
    caps = _caps(args)
    Fa = load_system(ea, p, caps, not args.no_cache)
    Fb = load_system(eb, p, caps, not args.no_cache)
    beta = is_isomorphic(Fa, Fb)
    out = {"schema": SCHEMA, "a": _header(ea, p, Fa), "b": _header(eb, p, Fb), "p": p,
           "isomorphic": beta is not None}
    if beta is not None:
        out["witness"] = iso_witness_perms(Fa, Fb, beta)
    return out


def cmd_linking(args) -> dict:
    entry = from_selector(args.group)
    p = _prime(entry, args.p)
    F = load_system(entry, p, _caps(args), not args.no_cache)
    out = _header(entry, p, F)
    out.update(linking_json(mu_kappa_report(entry.group, p, F=F, cap=args.max_aut_bruteforce)))
    return out


def cmd_catalog(args) -> dict:
    items = []
    for sel, p in STANDARD:
        e = from_selector(sel)
        items.append({"selector": sel, "p": p, "degree": e.group.degree,
                      "order": str(e.group.order), "order_S": str(p_part(e.group.order, p))})
    return {"schema": SCHEMA, "entries": items}


COMMANDS = {"analyze": cmd_analyze, "reduce": cmd_reduce, "compare": cmd_compare,
            "linking": cmd_linking, "catalog": cmd_catalog}


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fusionkit", description="Fusion systems of permutation groups.")
    common = _Parser(add_help=False)
    common.add_argument("--p", type=int, default=None, help="the prime")
    common.add_argument("--out", type=Path, default=None, help="write JSON here instead of stdout")
    common.add_argument("--timing", action="store_true", help="add wall-clock seconds to the output")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--max-s-order", type=int, default=512)
    common.add_argument("--max-morphisms", type=int, default=1_000_000)
    common.add_argument("--max-aut-bruteforce", type=int, default=10_000)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    a = sub.add_parser("analyze", parents=[common])
    a.add_argument("--group", required=True, help="selector such as alt:6 or file:path")
    a.add_argument("--linking", action="store_true", help="include the linking report")
    r = sub.add_parser("reduce", parents=[common])
    r.add_argument("--group", required=True)
    r.add_argument("--opprime-first", action="store_true")
    c = sub.add_parser("compare", parents=[common])
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    k = sub.add_parser("linking", parents=[common])
    k.add_argument("--group", required=True)
    sub.add_parser("catalog", parents=[common])
    return ap


def _emit_error(e: Exception, code: int) -> int:
    kind = getattr(e, "kind", "error")
    sys.stderr.write(json.dumps({"schema": SCHEMA, "error": {"kind": kind, "message": str(e),
                                                             "exit_code": code}}) + "\n")
    return code


def main(argv=None) -> int:
    saved = dict(fusion_mod.LIMITS)
    try:
        args = build_parser().parse_args(argv)
        fusion_mod.LIMITS["max_morphisms"] = args.max_morphisms
        t0 = time.perf_counter()
        result = COMMANDS[args.command](args)
        if args.timing:
            result["timing"] = {"seconds": round(time.perf_counter() - t0, 3)}
        text = json.dumps(result, indent=2, sort_keys=True) + "\n"
        if args.out is not None:
            args.out.write_text(text)
        else:
            sys.stdout.write(text)
        return 0
    except FusionKitError as e:
        return _emit_error(e, e.exit_code)
    except OSError as e:
        return _emit_error(InputError(str(e)), 1)
    finally:
        fusion_mod.LIMITS.update(saved)


if __name__ == "__main__":
    sys.exit(main())
