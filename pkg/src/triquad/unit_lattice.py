"""Formal unit words, square-class linear algebra, and 2-saturation.

The multiplicative group generated by the seven quadratic-subfield
fundamental units (with -1) is saturated by repeatedly replacing a generator
with the square root of a product that turns out to be a square in K; the
number of replacement steps m gives the unit index q(K) = 2^m.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from . import octic
from .arith import PrimePair
from .errors import (InternalInconsistencyError, PrecisionExhaustedError,
                     RootMissingError, TriquadError)
from .octic import OcticElem, embed_quadratic, octic_mul, sqrt_exact
from .quadratic import fundamental_unit

TORSION_ID = "-1"
NONTORSION_IDS = ("e2", "ep", "eq", "e2p", "e2q", "epq", "e2pq")
BASE_UNIT_IDS = (TORSION_ID,) + NONTORSION_IDS

SATURATION_GUARD = 14


def unit_radicand(uid: str, pair) -> int:
    p, q = (pair.p, pair.q) if isinstance(pair, PrimePair) else pair
    return {"e2": 2, "ep": p, "eq": q, "e2p": 2 * p,
            "e2q": 2 * q, "epq": p * q, "e2pq": 2 * p * q}[uid]


class UnitWord:
    """A formal product of base units with dyadic-rational exponents.

    The torsion exponent (key "-1") is kept in {0, 1}. An exact embedding
    into K may be attached; saturation attaches the witnessed root directly
    so that words produced from torsion-carrying squares stay representable.
    """

    __slots__ = ("exponents", "_embedding")

    def __init__(self, exponents: dict[str, Fraction | int],
                 embedding: OcticElem | None = None):
        exps: dict[str, Fraction] = {}
        for uid, e in exponents.items():
            if uid not in BASE_UNIT_IDS:
                raise TriquadError(f"unknown base unit id {uid!r}")
            e = Fraction(e)
            if uid == TORSION_ID:
                if e.denominator != 1:
                    raise TriquadError("torsion exponent must be an integer")
                e = Fraction(e.numerator % 2)
            if e != 0:
                if e.denominator & (e.denominator - 1):
                    raise TriquadError(f"exponent {e} is not dyadic")
                exps[uid] = e
        self.exponents = exps
        self._embedding = embedding

    def __eq__(self, other) -> bool:
        return isinstance(other, UnitWord) and self.exponents == other.exponents

    def __hash__(self):
        return hash(tuple(sorted(self.exponents.items())))

    def __mul__(self, other: "UnitWord") -> "UnitWord":
        exps = dict(self.exponents)
        for uid, e in other.exponents.items():
            exps[uid] = exps.get(uid, Fraction(0)) + e
        return UnitWord(exps)

    def sqrt_word(self) -> "UnitWord":
        """Half every non-torsion exponent; the torsion bit is dropped (the
        witnessed root carries the sign information exactly)."""
        return UnitWord({uid: e / 2 for uid, e in self.exponents.items()
                         if uid != TORSION_ID})

    @property
    def depth(self) -> int:
        """Largest halving depth: log2 of the common exponent denominator."""
        d = 1
        for e in self.exponents.values():
            d = max(d, e.denominator)
        return d.bit_length() - 1

    def exponent(self, uid: str) -> Fraction:
        return self.exponents.get(uid, Fraction(0))

    def render(self) -> str:
        if not self.exponents:
            return "1"
        parts = []
        for uid in BASE_UNIT_IDS:
            e = self.exponents.get(uid)
            if e is None:
                continue
            parts.append(uid if e == 1 else f"{uid}^{e}")
        return " * ".join(parts)

    def __repr__(self):
        return f"UnitWord({self.render()})"


@dataclass(frozen=True)
class SquareClassSpace:
    """F2-subspace of exponent vectors whose products are squares in K."""

    generators: tuple[UnitWord, ...]
    basis: tuple[tuple[int, OcticElem], ...]  # (bit-vector, witness root)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def span(self) -> frozenset[int]:
        s = {0}
        for bv, _ in self.basis:
            s |= {v ^ bv for v in s}
        return frozenset(s)

    def contains(self, vector: int) -> bool:
        return vector in self.span()


@dataclass
class SaturationResult:
    m: int
    words: list[UnitWord]        # the 7 non-torsion fundamental words
    elements: list[OcticElem]    # their exact embeddings


class UnitContext:
    """Per-pair cache of embedded base units and their embedding signs."""

    def __init__(self, pair: PrimePair):
        self.pair = pair
        self.key = (pair.p, pair.q)
        self.units: dict[str, OcticElem] = {
            TORSION_ID: OcticElem.rational(self.key, -1)}
        self.norms: dict[str, int] = {}
        self.quad = {}
        for uid in NONTORSION_IDS:
            fu = fundamental_unit(unit_radicand(uid, pair))
            self.quad[uid] = fu
            self.units[uid] = embed_quadratic(fu.elem, self.key)
            self.norms[uid] = fu.norm
        self.signs = {uid: octic.sign_vector(u) for uid, u in self.units.items()}

    def element_of(self, vector: int, ids: tuple[str, ...] | None = None) -> OcticElem:
        ids = ids or BASE_UNIT_IDS
        prod = OcticElem.one(self.key)
        for i, uid in enumerate(ids):
            if vector >> i & 1:
                prod = octic_mul(prod, self.units[uid])
        return prod


@functools.lru_cache(maxsize=64)
def unit_context(pair: PrimePair) -> UnitContext:
    return UnitContext(pair)


def base_unit_words(pair: PrimePair) -> list[UnitWord]:
    """The eight starting generators: -1 and the seven subfield units."""
    ctx = unit_context(pair)
    out = []
    for uid in BASE_UNIT_IDS:
        out.append(UnitWord({uid: 1}, embedding=ctx.units[uid]))
    return out


def word_embed(word: UnitWord, pair: PrimePair) -> OcticElem:
    """Exact embedding of a formal word into K.

    The integer-exponent part is assembled by exact multiplication; each
    halving step extracts the canonical square root (positive under the
    all-positive embedding). A missing root means the word lies outside E_K.
    """
    if word._embedding is not None:
        return word._embedding
    ctx = unit_context(pair)
    depth = word.depth
    scaled = {uid: e * (1 << depth) for uid, e in word.exponents.items()}
    z = OcticElem.one(ctx.key)
    for uid, e in scaled.items():
        if e.denominator != 1:
            raise InternalInconsistencyError("scaled exponent not integral")
        z = octic_mul(z, ctx.units[uid] ** int(e))
    for level in range(depth):
        xi = sqrt_exact(z)
        if xi is None:
            sub = UnitWord({uid: e / (1 << (depth - level))
                            for uid, e in scaled.items()})
            raise RootMissingError(sub.render())
        z = xi
    word._embedding = z
    return z


def _vector_order(n_gens: int) -> list[int]:
    """All nonzero exponent vectors, smallest support first, then numeric."""
    vs = list(range(1, 1 << n_gens))
    vs.sort(key=lambda v: (bin(v).count("1"), v))
    return vs


def _product_of(gens_elems: list[OcticElem], vector: int, pair_key) -> OcticElem:
    prod = OcticElem.one(pair_key)
    for i, g in enumerate(gens_elems):
        if vector >> i & 1:
            prod = octic_mul(prod, g)
    return prod


def _neg_mask(sign_vec: tuple[int, ...]) -> int:
    m = 0
    for i, s in enumerate(sign_vec):
        if s < 0:
            m |= 1 << i
    return m


def square_class_dimension(pair: PrimePair,
                           generators: list[UnitWord]) -> SquareClassSpace:
    """Subspace of F2-combinations of the generators that are squares in K."""
    ctx = unit_context(pair)
    elems = [word_embed(w, pair) for w in generators]
    neg = [_neg_mask(octic.sign_vector(e)) for e in elems]
    basis: list[tuple[int, OcticElem]] = []
    span = {0}
    for v in _vector_order(len(generators)):
        if v in span:
            continue  # a combination of found squares is itself a square
        s = 0
        for i in range(len(elems)):
            if v >> i & 1:
                s ^= neg[i]
        if s:
            continue  # some embedding negative, not a square
        xi = sqrt_exact(_product_of(elems, v, ctx.key))
        if xi is not None:
            basis.append((v, xi))
            span |= {w ^ v for w in span}
    return SquareClassSpace(tuple(generators), tuple(basis))


def saturate(pair: PrimePair,
             generators: list[UnitWord] | None = None,
             restrict_support: frozenset[int] | None = None) -> SaturationResult:
    """2-saturate the generator set; returns m with q = 2^m.

    Deterministic: products are enumerated smallest-support-first in a fixed
    numeric order and the lowest-indexed odd-exponent non-torsion generator
    is replaced by the witnessed root. restrict_support confines the search
    to a subfield (roots must be supported on the given basis masks), which
    computes the unit index of an intermediate field such as Q(sqrtq, sqrt2p).
    """
    ctx = unit_context(pair)
    if generators is None:
        gens = base_unit_words(pair)
    else:
        gens = list(generators)
        if not any(w.exponents == {TORSION_ID: Fraction(1)} for w in gens):
            gens = [UnitWord({TORSION_ID: 1}, embedding=ctx.units[TORSION_ID])] + gens
    elems = [word_embed(w, pair) for w in gens]
    neg = [_neg_mask(octic.sign_vector(e)) for e in elems]
    m = 0
    while True:
        hit = None
        for v in _vector_order(len(gens)):
            s = 0
            for i in range(len(elems)):
                if v >> i & 1:
                    s ^= neg[i]
            if s:
                continue
            prod = _product_of(elems, v, ctx.key)
            xi = sqrt_exact(prod)
            if xi is None:
                continue
            if restrict_support is not None and not xi.support() <= restrict_support:
                continue
            hit = (v, xi)
            break
        if hit is None:
            non_torsion = [(w, e) for w, e in zip(gens, elems)
                           if w.exponents != {TORSION_ID: Fraction(1)}]
            return SaturationResult(m, [w for w, _ in non_torsion],
                                    [e for _, e in non_torsion])
        v, xi = hit
        combined = UnitWord({})
        for i, w in enumerate(gens):
            if v >> i & 1:
                combined = combined * w
        word = combined.sqrt_word()
        word._embedding = xi
        idx = None
        for i, w in enumerate(gens):
            if v >> i & 1 and w.exponents != {TORSION_ID: Fraction(1)}:
                idx = i
                break
        if idx is None:
            raise InternalInconsistencyError("-1 alone reported as a square")
        gens[idx] = word
        elems[idx] = xi
        neg[idx] = _neg_mask(octic.sign_vector(xi))
        m += 1
        if m > SATURATION_GUARD:
            raise InternalInconsistencyError(
                f"saturation exceeded the index guard 2^{SATURATION_GUARD}")


def k5_unit_index(pair: PrimePair) -> int:
    """Saturation exponent of the biquadratic subfield Q(sqrtq, sqrt2p):
    returns m5 with q(k5) = 2^m5. Basis masks allowed: 1, sqrtq, sqrt2p,
    sqrt2pq, i.e. {0, 0b100, 0b011, 0b111}."""
    ctx = unit_context(pair)
    words = [UnitWord({uid: 1}, embedding=ctx.units[uid])
             for uid in ("eq", "e2p", "e2pq")]
    res = saturate(pair, words, restrict_support=frozenset({0, 0b100, 0b011, 0b111}))
    return res.m


def _exact_exponent_det(words: list[UnitWord]) -> Fraction:
    mat = [[w.exponent(uid) for uid in NONTORSION_IDS] for w in words]
    det = Fraction(1)
    n = len(mat)
    for col in range(n):
        piv = None
        for row in range(col, n):
            if mat[row][col] != 0:
                piv = row
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for row in range(col + 1, n):
            f = mat[row][col] * inv
            if f:
                mat[row] = [a - f * b for a, b in zip(mat[row], mat[col])]
    return det


def rank_certificate(words: list[UnitWord], pair: PrimePair,
                     precision: int = octic.DEFAULT_PRECISION) -> bool:
    """Certify that 7 words are multiplicatively independent.

    True iff the 7x7 matrix of logarithms of conjugate absolute values
    (embeddings 0..6) has certifiably nonzero determinant by interval
    arithmetic. Exactly dependent exponent vectors short-circuit to False.
    """
    from mpmath import iv

    if len(words) != 7:
        raise TriquadError("rank certificate expects exactly 7 words")
    if _exact_exponent_det(words) == 0:
        return False
    elems = [word_embed(w, pair) for w in words]
    bits = precision
    while bits <= 16 * octic.MAX_PRECISION:
        old_prec = iv.prec
        iv.prec = bits + 64
        try:
            mat = []
            for e in elems:
                scale_bits = bits // 2 + e.coord_bit_size() + 8
                row = []
                for emb in range(7):
                    lo, hi = octic._embedding_interval(e, emb, scale_bits)
                    if lo < 0:
                        lo, hi = -hi, -lo
                    if lo <= 0:
                        row = None
                        break
                    val = iv.mpf([lo, hi]) / iv.mpf(2) ** scale_bits
                    row.append(iv.log(val))
                if row is None:
                    break
                mat.append(row)
            if len(mat) == 7:
                det = _interval_det(iv, mat)
                if det is not None and (det.a > 0 or det.b < 0):
                    return True
        finally:
            iv.prec = old_prec
        bits *= 2
    raise PrecisionExhaustedError("rank certificate undecided at precision cap")


def _interval_det(iv, mat):
    """Gaussian elimination determinant; None when a pivot straddles zero."""
    n = len(mat)
    m = [row[:] for row in mat]
    det = iv.mpf(1)
    for col in range(n):
        piv = None
        best = None
        for row in range(col, n):
            x = m[row][col]
            if x.a > 0 or x.b < 0:
                mag = min(abs(x.a), abs(x.b))
                if best is None or mag > best:
                    best, piv = mag, row
        if piv is None:
            return None
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for row in range(col + 1, n):
            f = m[row][col] / m[col][col]
            m[row] = [a - f * b for a, b in zip(m[row], m[col])]
    return det
