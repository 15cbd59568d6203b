"""Exact arithmetic over the rational integers.

Primality, factorisation, Fibonacci numbers and the Legendre and rational
biquadratic symbols.  Everything here is a pure function of its arguments.

Primality contract: ``is_prime`` is deterministic for ``n < 2**64`` (fixed
Miller-Rabin bases) and a Baillie-PSW probable-prime test above that.  No
BPSW pseudoprime is known, but none has been ruled out either, so results for
large ``n`` are probabilistic in principle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce

from .errors import InvalidArgument, ResourceLimitExceeded

try:  # gmpy2 only speeds up the big modular powers; the logic is identical.
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = int

__all__ = [
    "Factorization",
    "is_prime",
    "factor",
    "legendre",
    "biquadratic_symbol",
    "biquadratic_symbol_composite",
    "fibonacci",
    "is_square",
    "is_squarefree",
    "squarefree_part",
    "vp",
    "sqrt_mod_prime",
    "divisors",
    "primes_up_to",
]

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)
# Deterministic for n < 3.3e24, which covers 64-bit inputs with room to spare.
_MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

DEFAULT_RHO_BUDGET = 2_000_000
TRIAL_DIVISION_LIMIT = 10_000


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def vp(n: int, p: int) -> int:
    """Exponent of the prime ``p`` in the nonzero integer ``n``."""
    if n == 0:
        raise InvalidArgument("valuation of 0 is infinite")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _miller_rabin(n, d, s, a) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    # n odd positive; used only to pick Lucas parameters.
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas(n) -> bool:
    # Selfridge's method A for (D, P, Q).
    D = 5
    while True:
        j = _jacobi(D, int(n))
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4

    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    inv2 = (n + 1) // 2
    U, V, Qk = _mpz(1), _mpz(P), _mpz(Q % n)
    for bit in bin(int(d))[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    """Primality test; see the module docstring for the exact contract."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 97 * 97:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < 1 << 64:
        return all(_miller_rabin(n, d, s, a) for a in _MR_BASES_64)
    N = _mpz(n)
    if not _miller_rabin(N, _mpz(d), s, 2):
        return False
    if is_square(n):
        return False
    return _strong_lucas(N)


@dataclass(frozen=True)
class Factorization:
    """``sign * prod(p**e for p, e in pairs)`` with strictly increasing primes."""

    sign: int
    pairs: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def value(self) -> int:
        return self.sign * math.prod(p**e for p, e in self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def _rho(n: int, budget: int) -> int:
    # Brent's variant; returns a nontrivial factor of the odd composite n.
    spent = 0
    for c in range(1, 64):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
            spent += r
            if spent > budget:
                raise ResourceLimitExceeded(
                    f"Pollard rho exhausted its budget of {budget} iterations on a {n.bit_length()}-bit cofactor"
                )
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ResourceLimitExceeded(f"Pollard rho found no factor of {n}")


def factor(n: int, budget: int = DEFAULT_RHO_BUDGET) -> Factorization:
    """Complete factorisation: trial division, then Pollard rho.

    Raises ResourceLimitExceeded when a cofactor survives ``budget`` rho
    iterations; never returns an uncertified factor.
    """
    if n == 0:
        raise InvalidArgument("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    found: dict[int, int] = {}

    for p in (2, 3, 5):
        while n % p == 0:
            found[p] = found.get(p, 0) + 1
            n //= p
    p, step = 7, 4
    while p <= TRIAL_DIVISION_LIMIT and p * p <= n:
        while n % p == 0:
            found[p] = found.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step

    stack = [n] if n > 1 else []
    while stack:
        c = stack.pop()
        if c == 1:
            continue
        if is_prime(c):
            found[c] = found.get(c, 0) + 1
            continue
        r = math.isqrt(c)
        if r * r == c:
            stack += [r, r]
            continue
        g = _rho(c, budget)
        stack += [g, c // g]

    return Factorization(sign, tuple(sorted(found.items())))


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factor(n))


def squarefree_part(n: int) -> int:
    """The squarefree integer ``s`` (same sign as n) with ``n = s * t**2``."""
    f = factor(n)
    return f.sign * math.prod(p for p, e in f if e % 2)


def divisors(n: int) -> list[int]:
    """Positive divisors of ``n`` in increasing order."""
    divs = [1]
    for p, e in factor(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


def _require_odd_prime(p: int) -> None:
    if p <= 2 or not is_prime(p):
        raise InvalidArgument(f"{p} is not an odd prime")


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion; ``a`` is reduced mod p first."""
    _require_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    t = pow(_mpz(a), (p - 1) // 2, p)
    return 1 if t == 1 else -1


def biquadratic_symbol(a: int, p: int) -> int:
    """Rational biquadratic symbol (a/p)_4 = a^((p-1)/4) mod p.

    Only defined for p = 1 mod 4 and (a/p) = 1; anything else raises.
    """
    _require_odd_prime(p)
    if p % 4 != 1:
        raise InvalidArgument(f"(a/p)_4 needs p = 1 mod 4, got p = {p}")
    if legendre(a, p) != 1:
        raise InvalidArgument(f"({a}/{p})_4 is undefined: {a} is not a nonzero square mod {p}")
    t = pow(_mpz(a % p), (p - 1) // 4, p)
    if t == 1:
        return 1
    if t == p - 1:
        return -1
    raise AssertionError("quartic residue exponent landed outside {1, -1}")


def biquadratic_symbol_composite(a: int, d: int) -> int:
    """Product of (a/p_j)_4 over the prime factors of the squarefree ``d``.

    This product convention is what the composite symbol means here; every
    prime factor must be 1 mod 4 with (a/p_j) = 1.
    """
    f = factor(d)
    if f.sign < 0 or any(e > 1 for _, e in f):
        raise InvalidArgument(f"{d} is not a positive squarefree integer")
    return reduce(lambda acc, p: acc * biquadratic_symbol(a, p), f.primes, 1)


def _fib_pair(n: int) -> tuple[int, int]:
    a, b = 0, 1
    for bit in bin(n)[2:]:
        c = a * (2 * b - a)
        e = a * a + b * b
        a, b = (e, c + e) if bit == "1" else (c, e)
    return a, b


def fibonacci(n: int) -> int:
    """F_n by fast doubling (F_0 = 0, F_1 = 1)."""
    if n < 0:
        raise InvalidArgument("fibonacci index must be >= 0")
    return _fib_pair(n)[0] if n else 0


def sqrt_mod_prime(a: int, p: int) -> int:
    """Tonelli-Shanks: the smaller root r of r^2 = a (mod p), p an odd prime."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        raise InvalidArgument(f"{a} is not a square modulo {p}")
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)
