"""Per-pair verification pipeline, range scanning, and report serialization.

verify_pair runs the whole chain (decompose, classify, prescribed generators,
saturation, class numbers, table checks) and encodes mathematical mismatches
as record status rather than exceptions: detecting them is the point.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import classnumber, octic, theorems, unit_lattice
from .arith import PrimePair, primes_in_range
from .classnumber import ClassNumberReport
from .errors import (InternalInconsistencyError, PrecisionExhaustedError,
                     ResourceGuardError, TriquadError)
from .theorems import CaseTag

STATUS_VERIFIED = "verified"
STATUS_MISMATCH = "theorem-mismatch"
STATUS_PRECISION = "precision-exhausted"
STATUS_RESOURCE = "resource-guard"


@dataclass(frozen=True)
class Config:
    precision_bits: int = octic.DEFAULT_PRECISION
    quad_bound: int = classnumber.DEFAULT_QUAD_BOUND
    jobs: int = 1

    def __post_init__(self):
        if not 64 <= self.precision_bits <= octic.MAX_PRECISION:
            raise TriquadError("precision-bits must lie in [64, 4096]")


@dataclass
class VerificationRecord:
    pair: tuple[int, int]
    status: str
    case_tag: CaseTag | None = None
    report: ClassNumberReport | None = None
    generators: list[tuple[str, dict[str, str]]] = field(default_factory=list)
    fingerprints: list[str] = field(default_factory=list)
    table_failures: list[str] = field(default_factory=list)
    rank_ok: bool | None = None
    resaturation_m: int | None = None
    k5_identity_ok: bool | None = None
    mismatches: list[str] = field(default_factory=list)
    wall_time: float = 0.0


def _rat(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}"


def _coords_json(elem: octic.OcticElem) -> dict[str, str]:
    return {label: _rat(c) for label, c in elem.coords_by_label().items()}


def _fingerprint(elem: octic.OcticElem) -> str:
    payload = ";".join(f"{k}={v}" for k, v in sorted(_coords_json(elem).items()))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def verify_pair(p: int, q: int, config: Config = Config()) -> VerificationRecord:
    """Full verification of one pair; never raises for math mismatches."""
    pair = PrimePair(p, q)  # usage errors do raise
    t0 = time.monotonic()
    rec = VerificationRecord(pair=(p, q), status=STATUS_VERIFIED)
    mism = rec.mismatches
    try:
        tag = theorems.classify_pair(pair)
        rec.case_tag = tag

        words = theorems.unit_generators(tag, pair)
        elems = [unit_lattice.word_embed(w, pair) for w in words]
        for w, e in zip(words, elems):
            nrm = octic.rational_norm(e)
            if nrm not in (1, -1):
                mism.append(f"generator {w.render()} is not a unit (norm {nrm})")
        rec.generators = [(w.render(), _coords_json(e))
                          for w, e in zip(words, elems)]
        rec.fingerprints = [_fingerprint(e) for e in elems]

        rec.rank_ok = unit_lattice.rank_certificate(words, pair,
                                                    config.precision_bits)
        if not rec.rank_ok:
            mism.append("prescribed generators fail the rank certificate")

        sat = unit_lattice.saturate(pair)
        resat = unit_lattice.saturate(pair, list(words))
        rec.resaturation_m = resat.m
        if resat.m != 0:
            mism.append(f"prescribed system is not saturated: {resat.m} more steps")

        h2 = classnumber.subfield_h2_map(pair, config.quad_bound)
        for msg in classnumber.h2_pattern_failures(pair, h2):
            mism.append("quadratic 2-class pattern: " + msg)
        h2_theorem = theorems.predict_h2K(tag, h2)
        h2_kuroda = classnumber.kuroda_h2K(pair, sat.m, h2)
        rec.report = ClassNumberReport(pair, h2, sat.m, h2_theorem, h2_kuroda)
        if h2_theorem != h2_kuroda:
            mism.append(f"theorem h2(K) = {h2_theorem} but Kuroda gives {h2_kuroda}")

        for chk in theorems.verify_norm_tables(pair):
            if not chk.ok:
                rec.table_failures.append(
                    f"{chk.table}:{chk.unit}:{chk.sigma} expected {chk.expected}")
        if rec.table_failures:
            mism.append(f"{len(rec.table_failures)} norm-table rows failed")

        if pair.legendre_pq == -1:
            # h2(K) = h2(k5)/2 across the unramified step K/k5, with
            # h2(k5) = 2^(m5-2) h2(q) h2(2p) h2(2pq); the m5 = 1 value holds
            # in the norm -1 branch, m5 = 2 in the norm +1 branch
            m5 = unit_lattice.k5_unit_index(pair)
            h2_k5 = Fraction((1 << m5) * h2[q] * h2[2 * p] * h2[2 * p * q], 4)
            expected_m5 = 1 if tag.norm_eps2p == -1 else 2
            rec.k5_identity_ok = (m5 == expected_m5 and h2_k5 / 2 == h2_theorem)
            if not rec.k5_identity_ok:
                mism.append(
                    f"intermediate-field identity failed: m5={m5}, h2(k5)={h2_k5}")
    except ResourceGuardError as exc:
        rec.status = STATUS_RESOURCE
        mism.append(str(exc))
    except PrecisionExhaustedError as exc:
        rec.status = STATUS_PRECISION
        mism.append(str(exc))
    except InternalInconsistencyError as exc:
        rec.status = STATUS_MISMATCH
        mism.append(str(exc))
    else:
        if mism:
            rec.status = STATUS_MISMATCH
    rec.wall_time = time.monotonic() - t0
    return rec


def classify_only(p: int, q: int) -> CaseTag:
    """Decompose-and-classify without the class-number machinery."""
    return theorems.classify_pair(PrimePair(p, q))


def valid_pairs(p_max: int, q_max: int) -> list[tuple[int, int]]:
    ps = primes_in_range(p_max, 1, 8)
    qs = primes_in_range(q_max, 7, 8)
    return [(p, q) for p in ps for q in qs]


def _scan_worker(args: tuple[int, int, Config]) -> VerificationRecord:
    p, q, config = args
    return verify_pair(p, q, config)


@dataclass
class ScanResult:
    records: list[VerificationRecord]
    summary: dict


def scan_pairs(p_max: int, q_max: int, config: Config = Config()) -> ScanResult:
    """Verify all valid pairs in range; output in (p, q) lexicographic order
    and deterministic content regardless of the worker count."""
    pairs = valid_pairs(p_max, q_max)
    tasks = [(p, q, config) for p, q in pairs]
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(_scan_worker, tasks, chunksize=1))
    else:
        records = [_scan_worker(t) for t in tasks]
    records.sort(key=lambda r: r.pair)
    by_case: dict[str, int] = {}
    by_status: dict[str, int] = {}
    matrix = {x: {v: 0 for v in ("1", "p", "2p")} for x in ("1", "p", "2p")}
    for r in records:
        by_status[r.status] = by_status.get(r.status, 0) + 1
        if r.case_tag is not None:
            by_case[r.case_tag.case] = by_case.get(r.case_tag.case, 0) + 1
            if r.case_tag.legendre_pq == 1:
                matrix[r.case_tag.x_class][r.case_tag.v_class] += 1
    summary = {"pairs": len(records), "by_case": dict(sorted(by_case.items())),
               "by_status": dict(sorted(by_status.items())),
               "case_matrix": matrix}
    return ScanResult(records, summary)


# -- serialization -----------------------------------------------------------

def case_tag_json(tag: CaseTag) -> dict:
    return {
        "p": tag.pair.p, "q": tag.pair.q,
        "legendre_pq": tag.legendre_pq,
        "norm_eps2p": tag.norm_eps2p,
        "x_class": tag.x_class, "v_class": tag.v_class,
        "case": tag.case,
        "u": tag.u_bit, "v_sign": tag.v_sign,
        "resolution": dict(sorted(tag.resolution.items())),
        "prefix_witnesses": {k: list(v) if v is not None else None
                             for k, v in sorted(tag.prefix_witnesses.items())},
    }


def record_json(rec: VerificationRecord, include_wall_time: bool = True) -> dict:
    out = {
        "pair": {"p": rec.pair[0], "q": rec.pair[1]},
        "case": case_tag_json(rec.case_tag) if rec.case_tag else None,
        "generators": [{"word": w, "coords": c} for w, c in rec.generators],
        "h2": ({**{str(d): v for d, v in sorted(rec.report.h2.items())},
                "K": rec.report.h2K_theorem} if rec.report else None),
        "m": rec.report.m if rec.report else None,
        "status": rec.status,
        "fingerprints": rec.fingerprints,
        "rank_certificate": rec.rank_ok,
        "resaturation_m": rec.resaturation_m,
        "k5_identity": rec.k5_identity_ok,
        "table_failures": rec.table_failures,
        "mismatches": rec.mismatches,
    }
    if include_wall_time:
        out["wall_time_ms"] = round(rec.wall_time * 1000, 3)
    return out


def scan_json(result: ScanResult) -> str:
    doc = {"records": [record_json(r, include_wall_time=False)
                       for r in result.records],
           "summary": result.summary}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


_CSV_FIELDS = ("p", "q", "case", "norm_eps2p", "x_class", "v_class", "u",
               "m", "h2K", "status")


def scan_csv(result: ScanResult) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=_CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in result.records:
        tag = r.case_tag
        w.writerow({
            "p": r.pair[0], "q": r.pair[1],
            "case": tag.case if tag else "",
            "norm_eps2p": tag.norm_eps2p if tag else "",
            "x_class": tag.x_class if tag else "",
            "v_class": tag.v_class if tag else "",
            "u": "" if tag is None or tag.u_bit is None else tag.u_bit,
            "m": r.report.m if r.report else "",
            "h2K": r.report.h2K_theorem if r.report else "",
            "status": r.status,
        })
    return buf.getvalue()
