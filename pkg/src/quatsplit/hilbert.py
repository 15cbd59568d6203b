"""Hilbert symbols over Q and the ramification of H_Q(a, b).

Includes the closed-form tables for H_Q(p, q) with p, q prime: when it is a
matrix algebra and what its reduced discriminant is.  Each table is checked
against the general ``ramified_set`` computation before it returns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InternalInconsistency, InvalidArgument
from .rational import factor, is_prime, legendre, vp

__all__ = [
    "Place",
    "REAL",
    "RamificationData",
    "hilbert_at",
    "ramified_set",
    "split_pq_over_Q",
    "discriminant_pq",
]


@dataclass(frozen=True, order=True)
class Place:
    """A place of Q: a finite prime ``p`` or the real place (``p is None``)."""

    p: int | None = None

    @classmethod
    def finite(cls, p: int) -> Place:
        if not is_prime(p):
            raise InvalidArgument(f"{p} is not prime")
        return cls(p)

    @property
    def is_real(self) -> bool:
        return self.p is None

    def __str__(self):
        return "inf" if self.p is None else str(self.p)


REAL = Place(None)


def _as_place(v) -> Place:
    if isinstance(v, Place):
        return v
    if v in ("inf", "oo", "real", None):
        return REAL
    return Place.finite(int(v))


@dataclass(frozen=True)
class RamificationData:
    ramified: frozenset[Place]
    reduced_discriminant: int

    @property
    def splits(self) -> bool:
        return not self.ramified


def _split_off(n: int, p: int) -> tuple[int, int]:
    k = vp(n, p)
    return k, n // p**k


def hilbert_at(a: int, b: int, v) -> int:
    """Local Hilbert symbol (a, b)_v for nonzero integers; ``v`` a prime or REAL."""
    if a == 0 or b == 0:
        raise InvalidArgument("Hilbert symbol needs nonzero arguments")
    place = _as_place(v)
    if place.is_real:
        return -1 if a < 0 and b < 0 else 1
    p = place.p
    alpha, u = _split_off(a, p)
    beta, w = _split_off(b, p)
    if p != 2:
        sign = -1 if (alpha * beta) % 2 and p % 4 == 3 else 1
        lu = legendre(u, p) if beta % 2 else 1
        lw = legendre(w, p) if alpha % 2 else 1
        return sign * lu * lw

    def eps(x):
        return ((x - 1) // 2) % 2

    def omega(x):
        return ((x * x - 1) // 8) % 2

    e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
    return -1 if e % 2 else 1


def ramified_set(a: int, b: int) -> RamificationData:
    """Ram(H_Q(a, b)): the places where the local symbol is -1.

    Only the real place, 2 and primes dividing ab can ramify.
    """
    if a == 0 or b == 0:
        raise InvalidArgument("Hilbert symbol needs nonzero arguments")
    candidates = {2} | set(factor(a).primes) | set(factor(b).primes)
    places = [REAL] + [Place(p) for p in sorted(candidates)]
    ram = frozenset(v for v in places if hilbert_at(a, b, v) == -1)
    if len(ram) % 2:
        raise InternalInconsistency(f"odd number of ramified places for ({a}, {b}): product formula violated")
    disc = math.prod(v.p for v in ram if not v.is_real)
    return RamificationData(ram, disc)


def _require_primes(p, q):
    for n in (p, q):
        if not is_prime(n):
            raise InvalidArgument(f"{n} is not prime")


def _split_pq_table(p: int, q: int) -> bool:
    if p == q == 2:
        return True
    if p == q:
        return p % 4 == 1
    if q == 2:
        return p % 8 in (1, 7)
    if p == 2:
        return q % 8 in (1, 7)
    return legendre(q, p) == 1 and (p % 4 == 1 or q % 4 == 1)


def split_pq_over_Q(p: int, q: int) -> bool:
    """Whether H_Q(p, q) is a matrix algebra, for primes p and q."""
    _require_primes(p, q)
    table = _split_pq_table(p, q)
    if table != ramified_set(p, q).splits:
        raise InternalInconsistency(f"split table disagrees with local symbols for ({p}, {q})")
    return table


def _discriminant_pq_table(p: int, q: int) -> int:
    if _split_pq_table(p, q):
        return 1
    if q == 2 and p % 8 in (3, 5):
        return 2 * p
    if p == 2 and q % 8 in (3, 5):
        return 2 * q
    if p % 4 == 3 and q % 4 == 3:
        if legendre(q, p) != 1:
            return 2 * p
        return 2 * q
    # one of p, q is 1 mod 4 and (p/q) = -1
    return p * q


def discriminant_pq(p: int, q: int) -> int:
    """Reduced discriminant of H_Q(p, q); 1 when it splits."""
    _require_primes(p, q)
    table = _discriminant_pq_table(p, q)
    direct = ramified_set(p, q).reduced_discriminant
    if table != direct:
        raise InternalInconsistency(f"discriminant table gives {table}, local symbols give {direct} for ({p}, {q})")
    return table
