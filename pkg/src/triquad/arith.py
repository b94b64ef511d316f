"""Big-integer primitives: primality, perfect squares, quadratic residues."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import TriquadError

# Deterministic Miller-Rabin witnesses, valid for all n < 3.3 * 10^24
# (Sorenson-Webster), far beyond any value this package touches.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_perfect_square(n: int) -> int | None:
    """Return r with r*r == n if n is a perfect square, else None.

    Exact for arbitrarily large n: integer Newton iteration (math.isqrt)
    followed by an exact check, no floating point anywhere.
    """
    if n < 0:
        raise ValueError("is_perfect_square requires n >= 0")
    r = math.isqrt(n)
    return r if r * r == n else None


def is_prime(n: int) -> bool:
    """Deterministic primality test (Miller-Rabin with a proven witness set)."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, via Euler's criterion."""
    if p <= 2 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"legendre_symbol needs an odd prime modulus, got {p}")
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return -1 if t == p - 1 else 1


def is_squarefree(n: int) -> bool:
    """Trial-division squarefreeness check; only used to validate radicands."""
    if n < 1:
        return False
    if n % 4 == 0:
        return False
    k = 3
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class PrimePair:
    """A pair of primes (p, q) with p = 1 mod 8 and q = 7 mod 8."""

    p: int
    q: int

    def __post_init__(self):
        if not is_prime(self.p) or self.p % 8 != 1:
            raise TriquadError(f"p = {self.p} is not a prime congruent to 1 mod 8")
        if not is_prime(self.q) or self.q % 8 != 7:
            raise TriquadError(f"q = {self.q} is not a prime congruent to 7 mod 8")
        if self.p == self.q:
            raise TriquadError("p and q must be distinct")

    @property
    def radicands(self) -> tuple[int, ...]:
        """The seven quadratic subfield radicands of Q(sqrt2, sqrtp, sqrtq)."""
        p, q = self.p, self.q
        return (2, p, q, 2 * p, 2 * q, p * q, 2 * p * q)

    @property
    def legendre_pq(self) -> int:
        return legendre_symbol(self.p, self.q)


def primes_in_range(limit: int, residue: int, modulus: int) -> list[int]:
    """All primes <= limit congruent to residue mod modulus."""
    return [n for n in range(2, limit + 1)
            if n % modulus == residue and is_prime(n)]
