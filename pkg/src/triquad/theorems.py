"""Case classification of prime pairs and the prescribed unit systems.

A pair is classified by the Legendre symbol (p/q), the norm of the 2p-unit,
and the square classes of x+1 and v+1 where eps_2pq = x + y sqrt(2pq) and
eps_pq = v + w sqrt(pq). Case "C0" is the (p/q) = -1 family; the (p/q) = +1
families C1..C9 are keyed by the 3x3 grid of (x_class, v_class) over
{1, p, 2p}. The prescribed fundamental system and the closed-form 2-class
number of K follow from the case.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import PrimePair, is_perfect_square
from .errors import InternalInconsistencyError, TriquadError
from .octic import (TAU1, TAU2, TAU3, OcticElem, norm_to_subfield,
                    octic_mul, sqrt_exact)
from .unit_lattice import (NONTORSION_IDS, UnitContext, UnitWord,
                           unit_context)

KIND_UNIT = "1"
KIND_P = "p"
KIND_2P = "2p"

CASE_GRID = {(KIND_UNIT, KIND_UNIT): "C1", (KIND_UNIT, KIND_P): "C2",
             (KIND_UNIT, KIND_2P): "C3", (KIND_P, KIND_UNIT): "C4",
             (KIND_P, KIND_P): "C5", (KIND_P, KIND_2P): "C6",
             (KIND_2P, KIND_UNIT): "C7", (KIND_2P, KIND_P): "C8",
             (KIND_2P, KIND_2P): "C9"}


@dataclass(frozen=True)
class SqrtDecomposition:
    """Exact data of the square root of a base unit.

    kind records which of t+1, p(t+1), 2p(t+1) is the perfect square for the
    unit t + y sqrt(d); the cofactors (c1, c2) satisfy the corresponding
    two-term identity such as 2 = c1^2 - 2pq c2^2. For d = 2p the u_bit is
    set instead: (alpha1^2 - 2p alpha2^2)/2 = (-1)^u.
    """

    radicand: int
    kind: str
    cofactors: tuple[int, int]
    u_bit: int | None = None


def _land_kind(t: int, d: int, factor_plus: int, factor_minus: int) -> tuple[int, int] | None:
    """Test the system t+1 = factor_plus * c1^2, t-1 = factor_minus * c2^2."""
    if (t + 1) % factor_plus or (t - 1) % factor_minus:
        return None
    c1 = is_perfect_square((t + 1) // factor_plus)
    if c1 is None:
        return None
    c2 = is_perfect_square((t - 1) // factor_minus)
    if c2 is None:
        return None
    return c1, c2


def decompose_sqrt_data(pair: PrimePair) -> dict[int, SqrtDecomposition]:
    """Square-root decompositions of eps_q, eps_2q, eps_pq, eps_2pq and,
    when N(eps_2p) = +1, of eps_2p. Exactly one kind must land for each."""
    p, q = pair.p, pair.q
    ctx = unit_context(pair)
    out: dict[int, SqrtDecomposition] = {}

    def unique(radicand: int, systems: list[tuple[str, int, int]],
               t: int, y: int, y_factor: dict[str, int]):
        # these radicands are 2 or 3 mod 4, so the unit coordinates are integers
        landed = []
        for kind, fplus, fminus in systems:
            r = _land_kind(t, radicand, fplus, fminus)
            if r is not None:
                landed.append((kind, r))
        if len(landed) != 1:
            raise InternalInconsistencyError(
                f"{len(landed)} square-class kinds landed for radicand "
                f"{radicand} of pair ({p},{q}); expected exactly one")
        kind, (c1, c2) = landed[0]
        if c1 * c2 * y_factor[kind] != y:
            raise InternalInconsistencyError(
                f"cofactor product mismatch for radicand {radicand}")
        out[radicand] = SqrtDecomposition(radicand, kind, (c1, c2))

    for uid, radicand in (("eq", q), ("e2q", 2 * q)):
        fu = ctx.quad[uid]
        if fu.norm != 1 or fu.elem.denom != 1:
            raise InternalInconsistencyError(f"N(eps_{radicand}) is not +1")
        unique(radicand, [(KIND_UNIT, 1, radicand)],
               fu.elem.a, fu.elem.b, {KIND_UNIT: 1})

    fu = ctx.quad["epq"]
    if fu.norm != 1 or fu.elem.denom != 1:
        raise InternalInconsistencyError("N(eps_pq) is not +1")
    unique(p * q, [(KIND_UNIT, 1, p * q), (KIND_P, p, q), (KIND_2P, 2 * p, 2 * q)],
           fu.elem.a, fu.elem.b, {KIND_UNIT: 1, KIND_P: 1, KIND_2P: 2})

    fu = ctx.quad["e2pq"]
    if fu.norm != 1 or fu.elem.denom != 1:
        raise InternalInconsistencyError("N(eps_2pq) is not +1")
    unique(2 * p * q, [(KIND_UNIT, 1, 2 * p * q), (KIND_P, p, 2 * q), (KIND_2P, 2 * p, q)],
           fu.elem.a, fu.elem.b, {KIND_UNIT: 1, KIND_P: 1, KIND_2P: 1})

    fu = ctx.quad["e2p"]
    if fu.norm == 1:
        t, y = fu.elem.a, fu.elem.b
        c = _land_kind(t, 2 * p, 1, 2 * p)
        if c is not None:
            u = 0
            c1, c2 = c
        else:
            if (t - 1) < 0 or (t + 1) % (2 * p):
                raise InternalInconsistencyError("no u-decomposition for eps_2p")
            c1 = is_perfect_square(t - 1)
            c2 = is_perfect_square((t + 1) // (2 * p))
            if c1 is None or c2 is None:
                raise InternalInconsistencyError("no u-decomposition for eps_2p")
            u = 1
        if c1 * c2 != y:
            raise InternalInconsistencyError("cofactor product mismatch for eps_2p")
        if (c1 * c1 - 2 * p * c2 * c2) != 2 * (-1) ** u:
            raise InternalInconsistencyError("u identity failed for eps_2p")
        out[2 * p] = SqrtDecomposition(2 * p, KIND_UNIT, (c1, c2), u_bit=u)
    return out


def root_from_decomposition(dec: SqrtDecomposition, pair: PrimePair) -> OcticElem:
    """The canonical square root in K encoded by a decomposition."""
    p, q = pair.p, pair.q
    c1, c2 = dec.cofactors
    d = dec.radicand
    h = Fraction(1, 2)
    if d == q:
        coords = {1: c1 * h, 5: c2 * h}
    elif d == 2 * q:
        coords = {1: c1 * h, 4: Fraction(c2)}
    elif d == 2 * p:
        coords = {1: c1 * h, 2: Fraction(c2)}
    elif d == p * q:
        coords = {KIND_UNIT: {1: c1 * h, 7: c2 * h},
                  KIND_P: {3: c1 * h, 5: c2 * h},
                  KIND_2P: {2: Fraction(c1), 4: Fraction(c2)}}[dec.kind]
    elif d == 2 * p * q:
        coords = {KIND_UNIT: {1: c1 * h, 6: Fraction(c2)},
                  KIND_P: {3: c1 * h, 4: Fraction(c2)},
                  KIND_2P: {2: Fraction(c1), 5: c2 * h}}[dec.kind]
    else:
        raise TriquadError(f"no root template for radicand {d}")
    return OcticElem.from_dict((p, q), coords)


class ClassificationContext:
    """Roots of the base units and derived data for one pair."""

    def __init__(self, pair: PrimePair):
        self.pair = pair
        self.ctx: UnitContext = unit_context(pair)
        self.decompositions = decompose_sqrt_data(pair)
        p, q = pair.p, pair.q
        self.roots: dict[str, OcticElem] = {}
        for uid, d in (("eq", q), ("e2q", 2 * q), ("epq", p * q), ("e2pq", 2 * p * q)):
            r = root_from_decomposition(self.decompositions[d], pair)
            if octic_mul(r, r) != self.ctx.units[uid]:
                raise InternalInconsistencyError(f"root template failed for {uid}")
            self.roots[uid] = r
        self.norm_eps2p = self.ctx.norms["e2p"]
        self.u_bit = None
        self.v_sign = None
        if self.norm_eps2p == 1:
            self.u_bit = self.decompositions[2 * p].u_bit
            r = root_from_decomposition(self.decompositions[2 * p], pair)
            if octic_mul(r, r) != self.ctx.units["e2p"]:
                raise InternalInconsistencyError("root template failed for e2p")
            self.roots["e2p"] = r
        else:
            prod = octic_mul(octic_mul(self.ctx.units["e2"], self.ctx.units["ep"]),
                             self.ctx.units["e2p"])
            r = sqrt_exact(prod)
            if r is None:
                raise InternalInconsistencyError(
                    "sqrt(e2 ep e2p) missing although N(eps_2p) = -1")
            self.roots["e2ep2p"] = r
            nrm = norm_to_subfield(TAU2, r)
            e2 = self.ctx.units["e2"]
            if nrm == e2:
                self.v_sign = 0
            elif nrm == -e2:
                self.v_sign = 1
            else:
                raise InternalInconsistencyError(
                    "(1+tau2)-norm of sqrt(e2 ep e2p) is not +-e2")

    def tail_element(self, ids: tuple[str, ...]) -> OcticElem:
        prod = OcticElem.one(self.ctx.key)
        for uid in ids:
            prod = octic_mul(prod, self.roots[uid])
        return prod

    def prefixed(self, elem: OcticElem, a_exp: int, b_exp: int) -> OcticElem:
        if a_exp:
            elem = octic_mul(elem, self.ctx.units["e2"])
        if b_exp:
            elem = octic_mul(elem, self.ctx.units["ep"])
        return elem


@functools.lru_cache(maxsize=64)
def classification_context(pair: PrimePair) -> ClassificationContext:
    return ClassificationContext(pair)


@dataclass(frozen=True)
class CaseTag:
    """Full classification of a pair, with resolution-bit witnesses."""

    pair: PrimePair
    legendre_pq: int
    norm_eps2p: int
    x_class: str
    v_class: str
    case: str
    u_bit: int | None
    v_sign: int | None
    resolution: dict[str, int] = field(default_factory=dict)
    prefix_witnesses: dict[str, tuple[int, int] | None] = field(default_factory=dict)

    @property
    def class_number_exponent(self) -> int:
        """e in h2(K) = 2^(e-4) h2(2p) h2(pq) h2(2pq) for the C1..C9 cases."""
        if self.case == "C0":
            raise TriquadError("exponent only defined for the C1..C9 cases")
        if self.case == "C1":
            if self.norm_eps2p == -1:
                return self.resolution["a"]
            return self.resolution["r"] + self.resolution["r_prime"]
        if "alpha" in self.resolution:
            return self.resolution["alpha"]
        return 0


# tail ids per case for the resolved 8th generator, N(eps_2p) = +1
_PREFIXED_TAILS = {
    "C2": ("e2q", "e2pq", "e2p"),
    "C3": ("e2q", "e2pq", "e2p"),
    "C4": ("eq", "epq", "e2p"),
    "C7": ("eq", "epq", "e2p"),
    "C5": ("eq", "e2q", "epq", "e2pq", "e2p"),
    "C9": ("epq", "e2pq", "e2p"),
}
_BARE_TAILS = {"C6": ("e2q", "epq", "e2pq"), "C8": ("eq", "epq", "e2pq")}


def _designated_candidates(cc: ClassificationContext) -> list[tuple[int, int]]:
    """The two exponent readings of the iff-clause prefix: the proof form
    (a, u) and the statement form (a, a), where a = u + 1 mod 2."""
    u = cc.u_bit
    a = (u + 1) % 2
    return [(a, u), (a, a)]


def _test_candidates(cc: ClassificationContext, tail: OcticElem,
                     candidates: list[tuple[int, int]]) -> tuple[tuple[int, int] | None, int]:
    """Try each (e2, ep) prefix; returns (witness, hit count)."""
    witness = None
    hits = 0
    for a_exp, b_exp in candidates:
        xi = sqrt_exact(cc.prefixed(tail, a_exp, b_exp))
        if xi is not None:
            hits += 1
            if witness is None:
                witness = (a_exp, b_exp)
    return witness, hits


def classify_pair(pair: PrimePair) -> CaseTag:
    """Complete CaseTag with exact K-squareness resolution of every bit."""
    cc = classification_context(pair)
    p, q = pair.p, pair.q
    leg = pair.legendre_pq
    x_class = cc.decompositions[2 * p * q].kind
    v_class = cc.decompositions[p * q].kind
    if leg == -1 and (x_class != KIND_UNIT or v_class != KIND_UNIT):
        raise InternalInconsistencyError(
            f"(p/q) = -1 forces the unit square classes, got ({x_class}, {v_class})")
    case = "C0" if leg == -1 else CASE_GRID[(x_class, v_class)]
    resolution: dict[str, int] = {}
    witnesses: dict[str, tuple[int, int] | None] = {}

    if case == "C0":
        if cc.norm_eps2p == 1:
            cands = _designated_candidates(cc)
            w1, h1 = _test_candidates(cc, cc.tail_element(("eq", "epq", "e2p")), cands)
            w2, h2 = _test_candidates(cc, cc.tail_element(("e2q", "e2pq", "e2p")), cands)
            witnesses["q_pq_2p"] = w1
            witnesses["2q_2pq_2p"] = w2
            if w1 is None or w2 is None or h1 != 1 or h2 != 1:
                raise InternalInconsistencyError(
                    "the two unconditional square equations did not resolve "
                    f"uniquely for ({p},{q}): hits {h1}, {h2}")
            resolution["a"] = w1[0]
    elif case == "C1":
        if cc.norm_eps2p == -1:
            tail = cc.tail_element(("eq", "e2q", "epq", "e2pq"))
            w, h = _test_candidates(cc, tail, [(0, 0)])
            witnesses["q_2q_pq_2pq"] = w
            resolution["a"] = 1 if h else 0
            resolution["b"] = 1 - resolution["a"]
        else:
            cands = _designated_candidates(cc)
            w_r, h_r = _test_candidates(cc, cc.tail_element(("e2q", "e2pq", "e2p")), cands)
            w_rp, h_rp = _test_candidates(cc, cc.tail_element(("eq", "epq", "e2p")), cands)
            witnesses["2q_2pq_2p"] = w_r
            witnesses["q_pq_2p"] = w_rp
            if h_r > 1 or h_rp > 1:
                raise InternalInconsistencyError(
                    "both prefix candidates squared; impossible since eps_p "
                    "is not totally positive")
            resolution.update(r=1 if h_r else 0, s=0 if h_r else 1,
                              r_prime=1 if h_rp else 0, s_prime=0 if h_rp else 1,
                              a=(cc.u_bit + 1) % 2)
    elif case in _BARE_TAILS:
        tail = cc.tail_element(_BARE_TAILS[case])
        w, h = _test_candidates(cc, tail, [(0, 0)])
        witnesses["bare"] = w
        resolution["alpha"] = 1 if h else 0
        resolution["gamma"] = 1 - resolution["alpha"]
    elif cc.norm_eps2p == 1:
        cands = _designated_candidates(cc)
        w, h = _test_candidates(cc, cc.tail_element(_PREFIXED_TAILS[case]), cands)
        witnesses["prefixed"] = w
        if h > 1:
            raise InternalInconsistencyError(
                "both prefix candidates squared; impossible since eps_p "
                "is not totally positive")
        resolution["alpha"] = 1 if h else 0
        resolution["gamma"] = 1 - resolution["alpha"]
        resolution["a"] = (cc.u_bit + 1) % 2

    return CaseTag(pair=pair, legendre_pq=leg, norm_eps2p=cc.norm_eps2p,
                   x_class=x_class, v_class=v_class, case=case,
                   u_bit=cc.u_bit, v_sign=cc.v_sign, resolution=resolution,
                   prefix_witnesses=witnesses)


def _word_from_root(uid: str, cc: ClassificationContext) -> UnitWord:
    return UnitWord({uid: Fraction(1, 2)}, embedding=cc.roots[uid])


def _word_unit(uid: str, cc: ClassificationContext) -> UnitWord:
    return UnitWord({uid: 1}, embedding=cc.ctx.units[uid])


def _deep_root_word(cc: ClassificationContext, half_ids: tuple[str, ...],
                    prefix: tuple[int, int] | None) -> UnitWord:
    """Word for sqrt(e2^A ep^B * prod of sqrt(unit) factors), with its exact
    embedding; raises when the root does not exist in K."""
    elem = cc.tail_element(half_ids)
    exps: dict[str, Fraction] = {uid: Fraction(1, 4) for uid in half_ids}
    if prefix is not None:
        a_exp, b_exp = prefix
        elem = cc.prefixed(elem, a_exp, b_exp)
        if a_exp:
            exps["e2"] = Fraction(a_exp, 2)
        if b_exp:
            exps["ep"] = Fraction(b_exp, 2)
    xi = sqrt_exact(elem)
    if xi is None:
        raise InternalInconsistencyError(
            "theorem-prescribed generator is not a square in K: "
            + UnitWord(exps).render())
    return UnitWord(exps, embedding=xi)


def unit_generators(tag: CaseTag, pair: PrimePair) -> list[UnitWord]:
    """The 7 non-torsion generators prescribed by the applicable theorem,
    each with its exact embedding (torsion -1 is implicit)."""
    cc = classification_context(pair)
    case, res, wit = tag.case, tag.resolution, tag.prefix_witnesses
    e2, ep = _word_unit("e2", cc), _word_unit("ep", cc)
    half = {uid: _word_from_root(uid, cc) for uid in cc.roots
            if uid in NONTORSION_IDS}

    def k1_root() -> UnitWord:
        if tag.norm_eps2p == -1:
            return UnitWord({"e2": Fraction(1, 2), "ep": Fraction(1, 2),
                             "e2p": Fraction(1, 2)}, embedding=cc.roots["e2ep2p"])
        return half["e2p"]

    if case == "C0":
        base = [e2, ep, half["eq"], half["e2q"], half["epq"]]
        if tag.norm_eps2p == -1:
            return base + [k1_root(),
                           _deep_root_word(cc, ("eq", "e2q", "epq", "e2pq"), None)]
        return base + [
            _deep_root_word(cc, ("eq", "epq", "e2p"), wit["q_pq_2p"]),
            _deep_root_word(cc, ("e2q", "e2pq", "e2p"), wit["2q_2pq_2p"])]

    if case == "C1":
        base = [e2, ep, half["eq"], half["e2q"], half["epq"]]
        if tag.norm_eps2p == -1:
            last = (_deep_root_word(cc, ("eq", "e2q", "epq", "e2pq"), None)
                    if res["a"] == 1 else half["e2pq"])
            return base + [k1_root(), last]
        g_r = (_deep_root_word(cc, ("e2q", "e2pq", "e2p"), wit["2q_2pq_2p"])
               if res["r"] == 1 else half["e2pq"])
        g_rp = (_deep_root_word(cc, ("eq", "epq", "e2p"), wit["q_pq_2p"])
                if res["r_prime"] == 1 else half["e2p"])
        return base + [g_rp, g_r]

    if case in ("C2", "C3", "C4", "C5", "C7", "C9"):
        base = [e2, ep, half["eq"], half["e2q"], half["epq"], half["e2pq"]]
        if tag.norm_eps2p == -1:
            return base + [k1_root()]
        last = (_deep_root_word(cc, _PREFIXED_TAILS[case], wit["prefixed"])
                if res["alpha"] == 1 else half["e2p"])
        return base + [last]

    # C6 and C8: one of sqrt(eps_q), sqrt(eps_2q) is carried by the resolved root
    other = "eq" if case == "C6" else "e2q"
    carried = "e2q" if case == "C6" else "eq"
    base = [e2, ep, half[other], half["epq"], half["e2pq"], k1_root()]
    last = (_deep_root_word(cc, _BARE_TAILS[case], None)
            if res["alpha"] == 1 else half[carried])
    return base + [last]


def predict_h2K(tag: CaseTag, h2_subfields: dict[int, int]) -> int:
    """Theorem-side closed form for the 2-class number of K."""
    p, q = tag.pair.p, tag.pair.q
    h2p = h2_subfields[2 * p]
    if tag.case == "C0":
        val = Fraction(h2p, 2) if tag.norm_eps2p == -1 else Fraction(h2p)
    else:
        e = tag.class_number_exponent
        val = Fraction(h2p * h2_subfields[p * q] * h2_subfields[2 * p * q],
                       1 << (4 - e))
    if val.denominator != 1:
        raise InternalInconsistencyError(
            f"theorem class number {val} is not an integer")
    return val.numerator


# -- exact verification of the relative-norm tables --------------------------

_SIGMAS = (("1+tau2", TAU2), ("1+tau1tau2", TAU1 * TAU2),
           ("1+tau1tau3", TAU1 * TAU3), ("1+tau2tau3", TAU2 * TAU3),
           ("1+tau1", TAU1))

# rows keyed by square class of x+1 resp. v+1; entries are symbols:
# integers stand for themselves, "E" for the unit, "-E" for its negative
_TABLE_2PQ = {KIND_UNIT: (1, "-E", "-E", "E", -1),
              KIND_P: (-1, "E", "-E", "-E", -1),
              KIND_2P: (-1, "-E", "E", "-E", 1)}
_TABLE_PQ = {KIND_UNIT: (1, -1, -1, "E", "-E"),
             KIND_P: (-1, 1, -1, "-E", "-E"),
             KIND_2P: (-1, -1, 1, "-E", "E")}

# six relative norms of e2, ep, sqrt(eq), sqrt(e2q) in the fixed order
# 1+tau1, 1+tau2, 1+tau3, 1+tau1tau2, 1+tau1tau3, 1+tau2tau3
_SIGMAS_6 = (("1+tau1", TAU1), ("1+tau2", TAU2), ("1+tau3", TAU3),
             ("1+tau1tau2", TAU1 * TAU2), ("1+tau1tau3", TAU1 * TAU3),
             ("1+tau2tau3", TAU2 * TAU3))
_TABLE_BASE = {"e2": (-1, "E2", "E2", -1, -1, "E2"),
               "ep": ("E2", -1, "E2", -1, "E2", -1),
               "eq": ("-E", "E", 1, "-E", -1, 1),
               "e2q": (-1, "E", 1, -1, "-E", 1)}


@dataclass(frozen=True)
class TableCheck:
    table: str
    unit: str
    sigma: str
    expected: str
    ok: bool


def _expected_elem(symbol, unit: OcticElem, pair_key) -> OcticElem:
    if symbol == "E":
        return unit
    if symbol == "-E":
        return -unit
    if symbol == "E2":
        return octic_mul(unit, unit)
    return OcticElem.rational(pair_key, symbol)


def verify_norm_tables(pair: PrimePair) -> list[TableCheck]:
    """Check every applicable row of the three relative-norm tables exactly."""
    cc = classification_context(pair)
    key = cc.ctx.key
    checks: list[TableCheck] = []

    for uid, row in _TABLE_BASE.items():
        elem = cc.ctx.units[uid] if uid in ("e2", "ep") else cc.roots[uid]
        unit = cc.ctx.units[uid]
        for (name, sigma), symbol in zip(_SIGMAS_6, row):
            got = norm_to_subfield(sigma, elem)
            checks.append(TableCheck("base-units", uid, name, str(symbol),
                                     got == _expected_elem(symbol, unit, key)))

    for uid, table, kind in (("e2pq", _TABLE_2PQ, cc.decompositions[2 * pair.p * pair.q].kind),
                             ("epq", _TABLE_PQ, cc.decompositions[pair.p * pair.q].kind)):
        row = table[kind]
        unit = cc.ctx.units[uid]
        for (name, sigma), symbol in zip(_SIGMAS, row):
            got = norm_to_subfield(sigma, cc.roots[uid])
            checks.append(TableCheck("product-units", uid, name, str(symbol),
                                     got == _expected_elem(symbol, unit, key)))

    if cc.norm_eps2p == 1:
        u = cc.u_bit
        row = ((-1) ** u, "-E", (-1) ** (u + 1), (-1) ** u, (-1) ** (u + 1))
        unit = cc.ctx.units["e2p"]
        for (name, sigma), symbol in zip(_SIGMAS, row):
            got = norm_to_subfield(sigma, cc.roots["e2p"])
            checks.append(TableCheck("half-2p-unit", "e2p", name, str(symbol),
                                     got == _expected_elem(symbol, unit, key)))
    return checks
