import math

import pytest
import sympy

from quatsplit.errors import InvalidArgument, ResourceLimitExceeded
from quatsplit.rational import (
    biquadratic_symbol,
    biquadratic_symbol_composite,
    divisors,
    factor,
    fibonacci,
    is_prime,
    is_square,
    is_squarefree,
    legendre,
    primes_up_to,
    sqrt_mod_prime,
    squarefree_part,
    vp,
)


def test_is_prime_matches_sympy_small():
    for n in range(-5, 20000):
        assert is_prime(n) == sympy.isprime(n), n


@pytest.mark.parametrize(
    "n",
    [
        2**61 - 1,
        2**89 - 1,
        2**127 - 1,
        (2**61 - 1) * (2**89 - 1),
        3215031751,  # strong pseudoprime to bases 2, 3, 5, 7
        3825123056546413051,  # strong pseudoprime to the first nine prime bases
        318665857834031151167461,  # defeats the first twelve prime bases
        2**64 + 13,
        fibonacci(359),
        fibonacci(361),
    ],
)
def test_is_prime_large(n):
    assert is_prime(n) == sympy.isprime(n)


def test_is_prime_above_64_bits_carmichael_and_semiprimes():
    import random

    rng = random.Random(1234)
    # Chernick numbers (6k+1)(12k+1)(18k+1): Carmichael numbers, so Fermat-style tests alone fail
    k, seen = 10**6, 0
    while seen < 5:
        k += 1
        a, b, c = 6 * k + 1, 12 * k + 1, 18 * k + 1
        if sympy.isprime(a) and sympy.isprime(b) and sympy.isprime(c):
            n = a * b * c
            assert n > 2**64
            assert not is_prime(n)
            seen += 1
    for _ in range(200):
        n = rng.getrandbits(90) | 1
        assert is_prime(n) == sympy.isprime(n)
    for _ in range(20):
        p, q = sympy.nextprime(2**40 + rng.getrandbits(39)), sympy.nextprime(2**40 + rng.getrandbits(39))
        assert not is_prime(p * q)


def test_factor_roundtrip():
    for n in list(range(-300, 300)) + [2**64 + 1, 600851475143, 10**18 + 9, -(2**3) * 3**5 * 7]:
        if n == 0:
            continue
        f = factor(n)
        assert f.value() == n
        assert all(sympy.isprime(p) for p in f.primes)
        assert list(f.primes) == sorted(f.primes)


def test_factor_rejects_zero():
    with pytest.raises(InvalidArgument):
        factor(0)


def test_factor_budget_exhausted():
    p, q = 1000000007, 998244353
    with pytest.raises(ResourceLimitExceeded):
        factor(p * q, budget=10)


def test_factor_semiprime_matches_sympy():
    n = 1000000007 * 998244353
    assert dict(factor(n).pairs) == sympy.factorint(n)


def test_small_helpers():
    assert is_square(0) and is_square(49) and not is_square(-4) and not is_square(50)
    assert vp(48, 2) == 4 and vp(-27, 3) == 3 and vp(7, 5) == 0
    assert squarefree_part(72) == 2 and squarefree_part(-50) == -2 and squarefree_part(1) == 1
    assert is_squarefree(30) and not is_squarefree(12) and not is_squarefree(0)
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_up_to(1) == []


def test_legendre_against_sympy():
    for p in primes_up_to(200)[1:]:
        for a in range(-40, 40):
            expected = 0 if a % p == 0 else sympy.legendre_symbol(a % p, p)
            assert legendre(a, p) == expected


def test_legendre_examples():
    assert legendre(5, 7) == -1
    assert legendre(2, 89) == 1
    assert legendre(14, 7) == 0


@pytest.mark.parametrize("p", [2, 9, 1, -7])
def test_legendre_rejects_non_odd_prime(p):
    with pytest.raises(InvalidArgument):
        legendre(3, p)


def test_biquadratic_symbol_examples():
    assert biquadratic_symbol(2, 17) == -1
    assert biquadratic_symbol(4, 13) == -1  # 4^3 = 64 = -1 mod 13
    assert biquadratic_symbol(16, 17) == 1


def test_biquadratic_symbol_definition():
    for p in primes_up_to(300):
        if p % 4 != 1:
            continue
        fourth_powers = {pow(x, 4, p) for x in range(1, p)}
        for a in range(1, p):
            if legendre(a, p) != 1:
                continue
            assert (biquadratic_symbol(a, p) == 1) == (a in fourth_powers)


@pytest.mark.parametrize("a,p", [(3, 7), (3, 17), (0, 13)])
def test_biquadratic_symbol_undefined(a, p):
    with pytest.raises(InvalidArgument):
        biquadratic_symbol(a, p)


def test_biquadratic_symbol_composite_is_product():
    # 29 is a square mod 5 and mod 13
    assert biquadratic_symbol_composite(29, 65) == biquadratic_symbol(29, 5) * biquadratic_symbol(29, 13)
    with pytest.raises(InvalidArgument):
        biquadratic_symbol_composite(29, 45)


def test_fibonacci_small_and_identities():
    seq = [0, 1]
    for _ in range(200):
        seq.append(seq[-1] + seq[-2])
    assert [fibonacci(n) for n in range(len(seq))] == seq
    for n in range(1, 150):
        assert fibonacci(n + 1) * fibonacci(n - 1) - fibonacci(n) ** 2 == (-1) ** n
    assert fibonacci(1000) == sympy.fibonacci(1000)
    with pytest.raises(InvalidArgument):
        fibonacci(-1)


def test_sqrt_mod_prime():
    for p in primes_up_to(400)[1:]:
        for a in range(p):
            if legendre(a, p) == -1:
                with pytest.raises(InvalidArgument):
                    sqrt_mod_prime(a, p)
                continue
            r = sqrt_mod_prime(a, p)
            assert r * r % p == a % p
            assert r <= p - r or r == 0


def test_legendre_large_modulus():
    F = fibonacci(359)
    assert legendre(2, F) == (1 if F % 8 in (1, 7) else -1)
    assert math.gcd(F, 359) == 1
