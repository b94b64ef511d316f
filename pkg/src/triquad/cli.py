"""Command-line interface: classify, units, h2, verify, scan."""

from __future__ import annotations

import argparse
import json
import sys

from . import classnumber, harness, theorems, unit_lattice
from .arith import PrimePair
from .errors import PrecisionExhaustedError, ResourceGuardError, TriquadError
from .harness import Config


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="triquad",
        description="Unit groups and 2-class numbers of Q(sqrt2, sqrtp, sqrtq) "
                    "for primes p = 1 mod 8, q = 7 mod 8, by exact arithmetic.")
    ap.add_argument("--precision-bits", type=int, default=256,
                    help="interval-arithmetic margin in bits (64..4096)")
    ap.add_argument("--quad-bound", type=int, default=classnumber.DEFAULT_QUAD_BOUND,
                    help="resource guard for quadratic class-number radicands")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, desc in (("classify", "case classification of a pair as JSON"),
                       ("units", "prescribed fundamental system as JSON"),
                       ("h2", "2-class number report as JSON"),
                       ("verify", "full verification record as JSON")):
        sp = sub.add_parser(name, help=desc)
        sp.add_argument("p", type=int)
        sp.add_argument("q", type=int)

    sp = sub.add_parser("scan", help="verify all valid pairs in a range")
    sp.add_argument("--pmax", type=int, required=True)
    sp.add_argument("--qmax", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", type=str, default=None)
    return ap


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    ap = _build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    config = Config(precision_bits=ns.precision_bits, quad_bound=ns.quad_bound,
                    jobs=getattr(ns, "jobs", 1))
    try:
        if ns.command == "classify":
            tag = theorems.classify_pair(PrimePair(ns.p, ns.q))
            _emit(json.dumps(harness.case_tag_json(tag), indent=2) + "\n", None)
            return 0
        if ns.command == "units":
            pair = PrimePair(ns.p, ns.q)
            tag = theorems.classify_pair(pair)
            words = theorems.unit_generators(tag, pair)
            gens = [{"word": w.render(),
                     "coords": harness._coords_json(unit_lattice.word_embed(w, pair))}
                    for w in words]
            _emit(json.dumps({"pair": {"p": ns.p, "q": ns.q},
                              "generators": gens}, indent=2) + "\n", None)
            return 0
        if ns.command == "h2":
            pair = PrimePair(ns.p, ns.q)
            tag = theorems.classify_pair(pair)
            sat = unit_lattice.saturate(pair)
            h2 = classnumber.subfield_h2_map(pair, config.quad_bound)
            doc = {"pair": {"p": ns.p, "q": ns.q},
                   "h2": {**{str(d): v for d, v in sorted(h2.items())},
                          "K": theorems.predict_h2K(tag, h2)},
                   "m": sat.m,
                   "h2K_kuroda": classnumber.kuroda_h2K(pair, sat.m, h2)}
            _emit(json.dumps(doc, indent=2) + "\n", None)
            return 0
        if ns.command == "verify":
            rec = harness.verify_pair(ns.p, ns.q, config)
            _emit(json.dumps(harness.record_json(rec), indent=2) + "\n", None)
            return {harness.STATUS_VERIFIED: 0,
                    harness.STATUS_MISMATCH: 2,
                    harness.STATUS_PRECISION: 3,
                    harness.STATUS_RESOURCE: 3}[rec.status]
        if ns.command == "scan":
            result = harness.scan_pairs(ns.pmax, ns.qmax, config)
            text = (harness.scan_json(result) if ns.format == "json"
                    else harness.scan_csv(result))
            _emit(text, ns.out)
            return 0
    except (ResourceGuardError, PrecisionExhaustedError) as exc:
        print(f"limit reached: {exc}", file=sys.stderr)
        return 3
    except (TriquadError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 1


if __name__ == "__main__":
    sys.exit(main())
