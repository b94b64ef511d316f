"""Exact 2-class numbers of real quadratic fields and the Kuroda assembly.

The narrow class number of a fundamental discriminant D > 0 is the number of
cycles of reduced indefinite binary quadratic forms under the reduction
operator; the wide (ideal) class number halves it exactly when the
fundamental unit has norm +1. The 2-class number is the 2-part of the order.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import PrimePair
from .errors import InternalInconsistencyError, ResourceGuardError, TriquadError
from .quadratic import fundamental_unit

DEFAULT_QUAD_BOUND = 10 ** 7


def _divisors(n: int) -> list[int]:
    fac: dict[int, int] = {}
    m = n
    d = 2
    while d * d <= m:
        while m % d == 0:
            fac[d] = fac.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        fac[m] = fac.get(m, 0) + 1
    divs = [1]
    for prime, mult in fac.items():
        divs = [v * prime ** k for v in divs for k in range(mult + 1)]
    return divs


def _is_reduced(a: int, b: int, D: int) -> bool:
    # reduced indefinite form: 0 < b < sqrt(D) and |sqrt(D) - 2|a|| < b
    if b <= 0 or b * b >= D:
        return False
    ta = 2 * abs(a)
    if D >= (ta + b) * (ta + b):
        return False
    if ta <= b:
        return True
    return (ta - b) * (ta - b) < D


def _rho(form: tuple[int, int, int], D: int, rD: int) -> tuple[int, int, int]:
    """Reduction-operator step to the right neighbour of a reduced form."""
    _, b, c = form
    ac = abs(c)
    t = (-b) % (2 * ac)
    bp = t + 2 * ac * ((rD - t) // (2 * ac))
    while bp > rD:
        bp -= 2 * ac
    while bp <= rD - 2 * ac:
        bp += 2 * ac
    cp = (bp * bp - D) // (4 * c)
    return (c, bp, cp)


def narrow_class_number(D: int) -> int:
    """Cycle count of reduced indefinite forms of fundamental discriminant D."""
    if D <= 0 or D % 4 not in (0, 1):
        raise TriquadError(f"not a positive discriminant: {D}")
    rD = math.isqrt(D)
    forms = set()
    b = D & 1
    if b == 0:
        b = 2
    while b <= rD:
        n4 = D - b * b
        if n4 % 4 == 0:
            n = n4 // 4  # forms (a, b, c) with -ac = n
            for a in _divisors(n):
                for aa in (a, -a):
                    if _is_reduced(aa, b, D):
                        forms.add((aa, b, (b * b - D) // (4 * aa)))
        b += 2
    seen: set[tuple[int, int, int]] = set()
    cycles = 0
    for f in forms:
        if f in seen:
            continue
        cycles += 1
        g = f
        while True:
            seen.add(g)
            g = _rho(g, D, rD)
            if g == f:
                break
            if g not in forms:
                raise InternalInconsistencyError(
                    f"reduction step left the reduced set at discriminant {D}")
    return cycles


def _two_part(n: int) -> int:
    return n & -n


@functools.lru_cache(maxsize=None)
def _h2_cached(d: int) -> int:
    D = d if d % 4 == 1 else 4 * d
    h_narrow = narrow_class_number(D)
    if fundamental_unit(d).norm == 1:
        if h_narrow % 2:
            raise InternalInconsistencyError(
                f"narrow class number odd with norm +1 unit at d={d}")
        h_wide = h_narrow // 2
    else:
        h_wide = h_narrow
    return _two_part(h_wide)


def h2_real_quadratic(d: int, bound: int = DEFAULT_QUAD_BOUND) -> int:
    """Exact 2-class number of Q(sqrt d) for squarefree d > 1."""
    if d > bound:
        raise ResourceGuardError(
            f"radicand {d} exceeds the class-number bound {bound}")
    return _h2_cached(d)


_KURODA_POWER = 9  # n (2^(n-1) - 1) for the real degree-8 case


def kuroda_h2K(pair: PrimePair, m: int, h2: dict[int, int]) -> int:
    """h2(K) = 2^(m-9) * prod of the seven subfield 2-class numbers."""
    prod = 1
    for d in pair.radicands:
        prod *= h2[d]
    val = Fraction(prod * (1 << m), 1 << _KURODA_POWER)
    if val.denominator != 1 or val.numerator < 1:
        raise InternalInconsistencyError(
            f"Kuroda formula gave non-integer 2-class number {val} "
            f"for pair ({pair.p},{pair.q})")
    return val.numerator


def subfield_h2_map(pair: PrimePair, bound: int = DEFAULT_QUAD_BOUND) -> dict[int, int]:
    return {d: h2_real_quadratic(d, bound) for d in pair.radicands}


def h2_pattern_failures(pair: PrimePair, h2: dict[int, int]) -> list[str]:
    """Deviations from the quadratic 2-class number pattern, if any."""
    p, q = pair.p, pair.q
    bad = []
    for d in (2, p, q, 2 * q):
        if h2[d] != 1:
            bad.append(f"h2({d}) = {h2[d]}, expected 1")
    if pair.legendre_pq == -1:
        for d in (p * q, 2 * p * q):
            if h2[d] != 2:
                bad.append(f"h2({d}) = {h2[d]}, expected 2")
    else:
        for d in (p * q, 2 * p * q):
            if h2[d] % 4:
                bad.append(f"h2({d}) = {h2[d]}, expected divisible by 4")
    return bad


@dataclass(frozen=True)
class ClassNumberReport:
    pair: PrimePair
    h2: dict[int, int]
    m: int
    h2K_theorem: int
    h2K_kuroda: int

    @property
    def consistent(self) -> bool:
        return self.h2K_theorem == self.h2K_kuroda
