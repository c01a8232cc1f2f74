"""``chaindiam`` command line.

Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 an Unknown
verdict under ``--strict``.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from .chains import ChainError
from .classifier import diameters
from .corpus import run_corpus
from .dsl import DSLError, format_chain, parse_chain
from .endo import ProgramError, SampleSpec
from .finmon import FiniteMonoid, MonoidError, PairSet, congruence_closure, distance_matrix, end_monoid
from .shiftability import UNKNOWN, describe, shiftable
from .witness import WitnessError, WitnessPair, build_witness, verify_witness

OK, FAILED, BAD_INPUT, UNDECIDED = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _emit(args, data, table: str):
    if args.format == "table":
        print(table)
    else:
        print(json.dumps(data, indent=2))


def _chain(text: str):
    try:
        return parse_chain(text)
    except (DSLError, ChainError) as ex:
        raise InputError(f"cannot parse {text!r}: {ex}") from ex


def _spec(args) -> SampleSpec:
    if args.samples < 1:
        raise InputError("--samples must be positive")
    return SampleSpec(count=args.samples, seed=args.seed)


# --------------------------------------------------------------------------
# subcommands


def cmd_classify(args) -> int:
    reports = [diameters(_chain(t)) for t in args.expr]
    data = [r.to_json() for r in reports]
    rows = "chain\tleft\tright\n" + "\n".join(r.row() for r in reports)
    _emit(args, data[0] if len(data) == 1 else data, rows)
    if args.strict and any(r.right == "unknown" for r in reports):
        return UNDECIDED
    return OK


def cmd_shiftable(args) -> int:
    e = _chain(args.expr)
    v = shiftable(e, args.side)
    data = v.to_json()
    if args.with_witness and v.answer == "Yes" and args.side != "either":
        try:
            data["witness"] = build_witness(e, args.side).to_json()
        except WitnessError as ex:
            data["witness_error"] = str(ex)
    _emit(args, data, describe(v, e))
    return UNDECIDED if args.strict and v.answer == UNKNOWN else OK


def _verification(w: WitnessPair, spec: SampleSpec):
    reports = verify_witness(w, spec)
    return reports, all(r.ok for r in reports)


def cmd_witness(args) -> int:
    e = _chain(args.expr)
    try:
        w = build_witness(e, args.side)
    except WitnessError as ex:
        raise InputError(str(ex)) from ex
    reports, ok = _verification(w, _spec(args))
    data = {"witness": w.to_json(), "verification": [r.to_json() for r in reports], "ok": ok}
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
    text = f"{format_chain(e)} ({args.side}): {w.construction}\n" + "\n".join(str(r) for r in reports)
    _emit(args, data, text)
    return OK if ok else FAILED


def cmd_verify(args) -> int:
    try:
        with open(args.witness) as fh:
            doc = json.load(fh)
        w = WitnessPair.from_json(doc.get("witness", doc))
    except OSError as ex:
        raise InputError(f"cannot read {args.witness}: {ex}") from ex
    except (json.JSONDecodeError, KeyError, DSLError, ChainError, ProgramError) as ex:
        raise InputError(f"not a witness file: {ex}") from ex
    reports, ok = _verification(w, _spec(args))
    data = {"chain": format_chain(w.chain), "side": w.side,
            "verification": [r.to_json() for r in reports], "ok": ok}
    _emit(args, data, "\n".join(str(r) for r in reports))
    return OK if ok else FAILED


def parse_generators(S: FiniteMonoid, text: str, n=None) -> list:
    """Generator list: ``id``, ``cK`` (``cN`` is the top constant), ``m:v1,...,vn``
    for End(n); ``id`` or element indices for a monoid loaded from a table."""
    toks = [t.strip() for t in text.split(",") if t.strip()]
    out, i = [], 0
    while i < len(toks):
        t = toks[i]
        if t == "id":
            out.append(S.identity)
        elif n is not None and t[0] == "c" and (t[1:] in ("N", "n") or t[1:].isdigit()):
            k = n if t[1:] in ("N", "n") else int(t[1:])
            if not 1 <= k <= n:
                raise InputError(f"constant {t} is outside 1..{n}")
            out.append(S.index((k,) * n))
        elif n is not None and t.startswith("m:"):
            vals = [t[2:]] + toks[i + 1: i + n]
            i += n - 1
            try:
                out.append(S.index(tuple(int(v) for v in vals)))
            except (ValueError, KeyError, MonoidError) as ex:
                raise InputError(f"m:{','.join(vals)} is not an order-preserving map of {n}") from ex
        elif n is None and t.isdigit() and int(t) < S.size:
            out.append(int(t))
        else:
            raise InputError(f"unknown generator {t!r}")
        i += 1
    return out


def _num(x):
    return None if math.isinf(x) else int(x)


def cmd_finmon(args) -> int:
    if (args.end is None) == (args.table is None):
        raise InputError("give exactly one of --end N or --table FILE")
    if args.end is not None:
        S, n = end_monoid(args.end), args.end
    else:
        try:
            with open(args.table) as fh:
                S = FiniteMonoid.from_json(json.load(fh))
        except (OSError, json.JSONDecodeError) as ex:
            raise InputError(f"cannot read {args.table}: {ex}") from ex
        n = None
    if args.gens:
        gens = parse_generators(S, args.gens, n)
        U = PairSet.square(gens)
    else:
        gens, U = list(range(S.size)), PairSet.everything()
    D = distance_matrix(S, U, args.side)
    diam = _num(float(D.max())) if S.size else 0
    blocks = congruence_closure(S, U, args.side).blocks()
    def label(i):
        if S.labels is None:
            return i
        lab = S.labels[i]
        return list(lab) if isinstance(lab, (tuple, list)) else lab

    data = {"size": S.size, "side": args.side, "generators": [label(g) for g in gens],
            "diameter": diam if diam is not None else "infinite",
            "universal": len(blocks) == 1, "blocks": [[label(i) for i in b] for b in blocks]}
    if args.matrix:
        data["labels"] = [label(i) for i in range(S.size)]
        data["distances"] = [[_num(float(x)) for x in row] for row in D]
    text = [f"|S| = {S.size}, {args.side} diameter = {data['diameter']}, {len(blocks)} block(s)"]
    if args.matrix:
        for i, row in enumerate(D):
            cells = " ".join("-" if math.isinf(x) else str(int(x)) for x in row)
            text.append(f"{label(i)}: {cells}")
    _emit(args, data, "\n".join(text))
    return OK


def cmd_corpus(args) -> int:
    if args.count < 0:
        raise InputError("--count must be non-negative")
    data = run_corpus(args.count, args.seed, args.depth)
    if args.format == "table":
        lines = [f"{r['expr']}\t{r['normal']}\tmin={r['min']} max={r['max']}\t({r['left']}, {r['right']})"
                 for r in data["terms"]]
        lines.append(f"either: {data['either']}; unknown rate {data['unknown_rate']:.3f}; "
                     f"conflicts {data['conflicts']}")
        print("\n".join(lines))
    else:
        print(json.dumps(data, indent=2))
    return FAILED if data["conflicts"] else OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--samples", type=int, default=1000)
    sampling.add_argument("--seed", type=int, default=42)

    p = argparse.ArgumentParser(prog="chaindiam", description="Diameters of endomorphism monoids of chains.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="left and right diameters of End(C)")
    s.add_argument("expr", nargs="+")
    s.add_argument("--strict", action="store_true", help="exit 3 when the right diameter is unknown")
    s.set_defaults(run=cmd_classify)

    s = sub.add_parser("shiftable", parents=[common], help="min/max/endpoint shiftability with a rule trace")
    s.add_argument("expr")
    s.add_argument("--side", choices=("min", "max", "either"), default="either")
    s.add_argument("--strict", action="store_true", help="exit 3 on Unknown")
    s.add_argument("--with-witness", action="store_true", help="attach a witness to Yes answers")
    s.set_defaults(run=cmd_shiftable)

    s = sub.add_parser("witness", parents=[common, sampling], help="build and verify a shiftability witness")
    s.add_argument("expr")
    s.add_argument("--side", choices=("min", "max"), default="min")
    s.add_argument("--out", help="also write the JSON document here")
    s.set_defaults(run=cmd_witness)

    s = sub.add_parser("verify", parents=[common, sampling], help="re-verify a saved witness")
    s.add_argument("--witness", required=True)
    s.set_defaults(run=cmd_verify)

    s = sub.add_parser("finmon", parents=[common], help="congruences and diameters of a finite monoid")
    s.add_argument("--end", type=int, help="use End(n)")
    s.add_argument("--table", help="JSON monoid table")
    s.add_argument("--gens", help='generators, e.g. "id,c1,cN,m:1,2,2" (default: all of S)')
    s.add_argument("--side", choices=("left", "right"), default="right")
    s.add_argument("--no-matrix", dest="matrix", action="store_false", help="omit the distance matrix")
    s.set_defaults(run=cmd_finmon)

    s = sub.add_parser("corpus", parents=[common], help="random-term regression run")
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--depth", type=int, default=3)
    s.set_defaults(run=cmd_corpus)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (InputError, MonoidError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
