"""Congruences of weak orders and lattices of torsion classes from the command line.

Exit codes: 0 success, 1 a check or validation failed, 2 bad usage.
A lattice argument is a JSON lattice file, the name of a bundled fixture, or
``weak:N`` for the labelled weak order on S_{N+1}.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

import numpy as np

from . import cambrian as camb
from .congruence import (boundary_labels, congruence_closure, forcing_classes,
                         is_congruence_uniform, label_forcing_consistency, quotient)
from .errors import CrossValidationError, LatticeError
from .lattice_io import emit_dot, emit_json, read_document
from .poset_core import (FiniteLattice, LabelledHasse, is_hasse_regular, is_polygonal,
                         is_semidistributive, join_irreducibles, meet_irreducibles)
from .typea_bricks import brick_forcing_poset, count_algebraic_congruences, enumerate_strings
from .weak_order import build_weak_order

DEFAULT_SEED = 20240601


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if isinstance(x, (np.integer, np.bool_)):
        return x.item()
    if isinstance(x, (int, float, str, bool)) or x is None:
        return x
    return str(x)


def _load(spec: str):
    'returns (lattice, labelled or None, highlight or None)'
    if spec.startswith("weak:"):
        try:
            n = int(spec[5:])
        except ValueError:
            raise UsageError(f"bad weak order spec {spec!r}") from None
        W = build_weak_order(n)
        return W.lattice, W, None
    try:
        doc = read_document(spec)
    except FileNotFoundError:
        raise UsageError(f"no such lattice file or fixture: {spec}") from None
    return doc.lattice, doc.labelled, doc.highlight


def _element(L: FiniteLattice, token: str) -> int:
    token = token.strip()
    if token in L._name_index:
        return L.index(token)
    if token.isdigit() and int(token) < L.n_elements:
        return int(token)
    raise UsageError(f"unknown element {token!r}")


def _parse_contract(L, LH, text: str):
    'comma separated items: "u->v" arrows, "ji:x" (arrow leaving x), or labels'
    seeds = []
    for item in filter(None, (t.strip() for t in text.split(","))):
        if "->" in item:
            u, v = item.split("->", 1)
            seeds.append((_element(L, u), _element(L, v)))
        elif item.startswith("ji:"):
            x = _element(L, item[3:])
            if len(L.lower_covers[x]) != 1:
                raise UsageError(f"{item[3:]} is not join-irreducible")
            seeds.append((x, L.lower_covers[x][0]))
        elif LH is not None:
            hits = [c for c in L.covers if str(LH.labels[c]) == item]
            if not hits:
                raise UsageError(f"no arrow carries the label {item!r}")
            seeds.extend(hits)
        else:
            raise UsageError(f"cannot read {item!r} (labels need a labelled lattice)")
    return seeds


def _arrow_names(L, covers):
    return sorted(f"{L.names[u]}->{L.names[v]}" for u, v in covers)


def cmd_weak_order(args, out):
    W = build_weak_order(args.n, force=args.force)
    L = W.lattice
    obj = W if args.labels else L
    if args.dot:
        out.write(emit_dot(obj))
    elif args.json:
        out.write(emit_json(obj, description=f"weak order on S{args.n + 1}"))
    else:
        out.write(f"S{args.n + 1}: {L.n_elements} elements, {len(L.covers)} arrows, "
                  f"{len(join_irreducibles(L))} join-irreducibles, "
                  f"{len(meet_irreducibles(L))} meet-irreducibles\n")
        if args.labels:
            for c in L.covers:
                out.write(f"{L.names[c[0]]} -> {L.names[c[1]]}  {W.labels[c]}\n")
    return 0


def cmd_congruence(args, out):
    L, LH, _ = _load(args.lattice)
    seeds = _parse_contract(L, LH, args.contract)
    theta = congruence_closure(L, seeds)
    report = {"classes": theta.n_classes, "contracted": _arrow_names(L, theta.contracted)}
    if theta.non_cover_seeds:
        report["non_arrow_seeds"] = [f"{L.names[a]}~{L.names[b]}" for a, b in theta.non_cover_seeds]
    if args.report:
        report["forcing_classes"] = len(forcing_classes(L))
        if LH is not None:
            report["contracted_labels"] = sorted({str(LH.labels[c]) for c in theta.contracted})
            report["surviving_labels"] = sorted({str(LH.labels[c]) for c in L.covers} - set(report["contracted_labels"]))
    if args.quotient:
        Q = quotient(L, theta).lattice
        if args.dot:
            out.write(emit_dot(Q))
            return 0
        report["quotient"] = json.loads(emit_json(Q))
    out.write(json.dumps(report, indent=1) + "\n")
    return 0


def cmd_cambrian(args, out):
    try:
        Q = camb.Orientation.parse(args.n, args.orientation)
    except LatticeError as exc:
        raise UsageError(str(exc)) from None
    W = build_weak_order(args.n)
    theta = camb.cambrian_congruence(args.n, Q, W)
    report = {"coxeter_element": Q.coxeter_text(), "quiver": [f"{a}->{b}" for a, b in Q.arrows()],
              "bipartite": Q.bipartite, "quotient_size": theta.n_classes,
              "contracted_arrows": len(theta.contracted)}
    status = 0
    if args.bottoms:
        report["bottoms"] = [str(p) for p in camb.sortable_bottoms(args.n, Q, W)]
    if args.verify:
        res = camb.verify_sublattice(args.n, Q, W)
        report["sublattice"] = res.ok
        if not res:
            op, x, y = res.witness
            report["sublattice_witness"] = [op, W.lattice.names[x], W.lattice.names[y]]
            status = 1
    if args.bicambrian:
        bi = camb.bicambrian(args.n, Q, W)
        reg = is_hasse_regular(quotient(W.lattice, bi).lattice)
        report["bicambrian"] = {"quotient_size": bi.n_classes, "hasse_regular": reg.ok,
                                "degree": reg.detail if reg.ok else None,
                                "degree_histogram": None if reg.ok else reg.witness}
    if args.bottoms and not (args.verify or args.bicambrian) and not args.json:
        out.write("\n".join(report["bottoms"]) + "\n")
        return status
    out.write(json.dumps(_jsonable(report), indent=1) + "\n")
    return status


def cmd_bricks(args, out):
    strings = enumerate_strings(args.n)
    if args.forcing:
        P = brick_forcing_poset(args.n)
        for u, w in P.hasse:
            out.write(f"{u} => {w}\n")
    else:
        for s in strings:
            out.write(f"{s}\n")
    return 0


def cmd_algcon(args, out):
    res = count_algebraic_congruences(args.n)
    out.write(json.dumps({"n": args.n, "ideals": res.count, "distinct_congruences": res.count,
                          "injective": True}, indent=1) + "\n")
    return 0


def _sample_axioms(L, rng, samples):
    'spot-check lattice identities on random triples; returns a failing triple or None'
    J, M = L.join_table, L.meet_table
    for _ in range(samples):
        x, y, z = (rng.randrange(L.n_elements) for _ in range(3))
        if (J[J[x, y], z] != J[x, J[y, z]] or M[M[x, y], z] != M[x, M[y, z]]
                or M[x, J[x, y]] != x or J[x, M[x, y]] != x):
            return (x, y, z)
    return None


def cmd_check(args, out):
    L, LH, _ = _load(args.lattice)
    want = {k for k in ("semidistributive", "polygonal", "regular", "uniform", "labels", "boundary")
            if getattr(args, k) or args.all}
    if not want:
        want = {"semidistributive", "polygonal", "regular", "uniform"}
    report, failed = {"elements": L.n_elements, "arrows": len(L.covers)}, False
    if "semidistributive" in want:
        r = is_semidistributive(L, force=args.force)
        report["semidistributive"] = r.ok
        failed |= not r.ok
        if not r.ok:
            report["semidistributive_witness"] = r.witness
    if "polygonal" in want:
        r = is_polygonal(L)
        report["polygonal"] = r.ok
        failed |= not r.ok
    if "regular" in want:
        r = is_hasse_regular(L)
        report["hasse_regular"] = r.ok
        report["degree" if r.ok else "degree_histogram"] = r.detail if r.ok else r.witness
    if "uniform" in want:
        r = is_congruence_uniform(L, force=args.force)
        report["congruence_uniform"] = r.ok
        failed |= not r.ok
    if LH is not None and "labels" in want:
        r = label_forcing_consistency(LH)
        report["label_consistent"] = r.ok
        failed |= not r.ok
    if LH is not None and "boundary" in want:
        b = boundary_labels(LH)
        report["boundary_labels"] = {"bottom": sorted(map(str, b.bottom)), "top": sorted(map(str, b.top)),
                                     "coincide": b.coincide, "forcing_maximal": b.maximal}
        failed |= not b.ok
    if args.sample:
        bad = _sample_axioms(L, random.Random(args.seed), args.sample)
        report["sampled_identities"] = bad is None
        failed |= bad is not None
    out.write(json.dumps(_jsonable(report), indent=1) + "\n")
    return 1 if failed else 0


def cmd_fixtures(args, out):
    from .verify import verify_fixtures

    outcomes = verify_fixtures()
    if args.json:
        out.write(json.dumps(_jsonable([o.__dict__ for o in outcomes]), indent=1) + "\n")
    else:
        for o in outcomes:
            out.write(f"{'PASS' if o.ok else 'FAIL'}  {o.name}\n")
    return 0 if all(o.ok for o in outcomes) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torslat", description=__doc__.splitlines()[0])
    p.add_argument("--json-diff", action="store_true",
                   help="on failure print a JSON object with the error and its diff")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("weak-order", help="build the weak order on S_{n+1}")
    s.add_argument("n", type=int)
    s.add_argument("--labels", action="store_true", help="include brick labels")
    fmt = s.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true")
    fmt.add_argument("--json", action="store_true")
    s.add_argument("--force", action="store_true", help="ignore the size limit")
    s.set_defaults(func=cmd_weak_order)

    s = sub.add_parser("congruence", help="congruence generated by arrows, labels or join-irreducibles")
    s.add_argument("lattice")
    s.add_argument("--contract", required=True,
                   help='comma separated: "u->v", "ji:x" or label names')
    s.add_argument("--quotient", action="store_true")
    s.add_argument("--report", action="store_true")
    s.add_argument("--dot", action="store_true", help="with --quotient, print the quotient as DOT")
    s.set_defaults(func=cmd_congruence)

    s = sub.add_parser("cambrian", help="Cambrian congruence of an orientation")
    s.add_argument("n", type=int)
    s.add_argument("--orientation", required=True,
                   help="n-1 bits, last bit = edge (1,2); 1 means i <- i+1")
    s.add_argument("--bicambrian", action="store_true")
    s.add_argument("--bottoms", action="store_true")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_cambrian)

    s = sub.add_parser("bricks", help="strings of the doubled A_n quiver")
    s.add_argument("n", type=int)
    s.add_argument("--forcing", action="store_true", help="print the Hasse arrows of the forcing order")
    s.set_defaults(func=cmd_bricks)

    s = sub.add_parser("algcon", help="count algebraic congruences via ideals of paths")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_algcon)

    s = sub.add_parser("check", help="structural checks of a lattice")
    s.add_argument("lattice")
    s.add_argument("--all", action="store_true")
    for flag in ("semidistributive", "polygonal", "regular", "uniform", "labels", "boundary"):
        s.add_argument(f"--{flag}", action="store_true")
    s.add_argument("--sample", type=int, default=0, help="spot-check lattice identities on random triples")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--force", action="store_true")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("fixtures", help="fixture suite")
    s.add_argument("action", choices=["verify"])
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_fixtures)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"torslat: {exc}", file=sys.stderr)
        return 2
    except LatticeError as exc:
        print(f"torslat: {type(exc).__name__}: {exc}", file=sys.stderr)
        if args.json_diff:
            diff = exc.diff if isinstance(exc, CrossValidationError) else getattr(exc, "witness", None)
            out.write(json.dumps(_jsonable({"error": type(exc).__name__, "message": str(exc),
                                            "diff": diff}), indent=1) + "\n")
        return 1
