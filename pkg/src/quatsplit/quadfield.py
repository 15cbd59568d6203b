"""Arithmetic of a quadratic field K = Q(sqrt(d)).

Integers of K are stored in the basis {1, w} where w = sqrt(d), or
w = (1 + sqrt(d))/2 when d = 1 (mod 4); in both cases w^2 = s*w + c with
(s, c) = (0, d) or (1, (d - 1)/4).  Elements of K that need not be integral
use ``FieldElement``, which keeps rational coordinates in the sqrt(d) basis.

Prime ideals are identified by the image of w in the residue field.  For a
split prime the completion K_P is Q_p and w maps to a p-adic root of
t^2 - s*t - c, which is how valuations and residue symbols are computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .errors import InternalInconsistency, InvalidArgument, ResourceLimitExceeded
from .rational import (
    divisors,
    factor,
    is_prime,
    is_square,
    is_squarefree,
    legendre,
    sqrt_mod_prime,
    squarefree_part,
    vp,
)

__all__ = [
    "QuadraticField",
    "QuadraticInteger",
    "FieldElement",
    "SplittingType",
    "PrimeIdeal",
    "FundamentalUnit",
    "D1Decomposition",
    "ExtensionClass",
    "make_field",
    "splitting_type",
    "primes_above",
    "valuation",
    "residue_symbol",
    "local_hilbert_symbol",
    "is_square_in_field",
    "is_odd",
    "fundamental_unit",
    "adjusted_unit",
    "d1_decomposition",
    "classify_extension",
    "factor_ideal",
]

MAX_CF_STEPS = 100_000


@dataclass(frozen=True)
class QuadraticField:
    d: int

    def __post_init__(self):
        if self.d in (0, 1):
            raise InvalidArgument(f"d = {self.d} does not define a quadratic field")
        if not is_squarefree(self.d):
            raise InvalidArgument(f"d = {self.d} is not squarefree")

    @property
    def half_basis(self) -> bool:
        """True when w = (1 + sqrt(d))/2."""
        return self.d % 4 == 1

    @property
    def discriminant(self) -> int:
        return self.d if self.half_basis else 4 * self.d

    @property
    def s(self) -> int:
        return 1 if self.half_basis else 0

    @property
    def c(self) -> int:
        return (self.d - 1) // 4 if self.half_basis else self.d

    def __call__(self, x: int, y: int = 0) -> QuadraticInteger:
        return QuadraticInteger(self, x, y)

    def from_sqrt(self, a: int, b: int) -> QuadraticInteger:
        """The integer a + b*sqrt(d)."""
        return QuadraticInteger(self, a - b * self.s, b * (2 if self.half_basis else 1))

    def from_half(self, u: int, v: int) -> QuadraticInteger:
        """The integer (u + v*sqrt(d))/2; raises if it is not in O_K."""
        return FieldElement(self, Fraction(u, 2), Fraction(v, 2)).to_integer()

    @property
    def omega(self) -> QuadraticInteger:
        return QuadraticInteger(self, 0, 1)

    @property
    def sqrt_d(self) -> QuadraticInteger:
        return self.from_sqrt(0, 1)

    def __str__(self):
        return f"Q(sqrt({self.d}))"


@lru_cache(maxsize=None)
def make_field(d: int) -> QuadraticField:
    return QuadraticField(d)


@dataclass(frozen=True)
class QuadraticInteger:
    """x + y*w in O_K."""

    field: QuadraticField
    x: int
    y: int = 0

    def _coerce(self, other) -> QuadraticInteger:
        if isinstance(other, QuadraticInteger):
            if other.field != self.field:
                raise InvalidArgument("elements live in different fields")
            return other
        if isinstance(other, int):
            return QuadraticInteger(self.field, other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticInteger(self.field, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticInteger(self.field, -self.x, -self.y)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        s, c = self.field.s, self.field.c
        a, b, e, f = self.x, self.y, o.x, o.y
        return QuadraticInteger(self.field, a * e + b * f * c, a * f + b * e + b * f * s)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise InvalidArgument("negative powers leave O_K")
        result, base = QuadraticInteger(self.field, 1, 0), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.x or self.y)

    def norm(self) -> int:
        a, b = self.x, self.y
        return a * a + self.field.s * a * b - self.field.c * b * b

    def trace(self) -> int:
        return 2 * self.x + self.field.s * self.y

    def conjugate(self) -> QuadraticInteger:
        return QuadraticInteger(self.field, self.x + self.field.s * self.y, -self.y)

    def half_coords(self) -> tuple[int, int]:
        """(u, v) with self = (u + v*sqrt(d))/2."""
        if self.field.half_basis:
            return 2 * self.x + self.y, self.y
        return 2 * self.x, 2 * self.y

    def sqrt_coords(self) -> tuple[int, int] | None:
        """(a, b) with self = a + b*sqrt(d), or None if self is not in Z[sqrt(d)]."""
        u, v = self.half_coords()
        if u % 2 or v % 2:
            return None
        return u // 2, v // 2

    @property
    def is_rational(self) -> bool:
        return self.y == 0

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def sign(self) -> int:
        """Sign of the real embedding with sqrt(d) > 0 (d > 0 only)."""
        if self.field.d < 0:
            raise InvalidArgument("no real embedding for d < 0")
        u, v = self.half_coords()
        return _sign_of(u, v, self.field.d)

    def to_field(self) -> FieldElement:
        u, v = self.half_coords()
        return FieldElement(self.field, Fraction(u, 2), Fraction(v, 2))

    def __str__(self):
        u, v = self.half_coords()
        return _format_half(u, v, self.field.d)


def _sign_of(u, v, d) -> int:
    # sign of u + v*sqrt(d), exactly
    if v == 0:
        return (u > 0) - (u < 0)
    if u == 0 or (u > 0) == (v > 0):
        return 1 if v > 0 else -1
    bigger_u = u * u > d * v * v
    return (1 if u > 0 else -1) if bigger_u else (1 if v > 0 else -1)


def _format_half(u, v, d) -> str:
    def lin(a, b):
        if b == 0:
            return str(a)
        coef = "" if abs(b) == 1 else f"{abs(b)}*"
        term = f"{coef}sqrt({d})"
        if a == 0:
            return term if b > 0 else f"-{term}"
        return f"{a}{'+' if b > 0 else '-'}{term}"

    if u % 2 == 0 and v % 2 == 0:
        return lin(u // 2, v // 2)
    return f"({lin(u, v)})/2"


@dataclass(frozen=True)
class FieldElement:
    """a + b*sqrt(d) with rational a, b."""

    field: QuadraticField
    a: Fraction
    b: Fraction = Fraction(0)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, QuadraticInteger):
            return other.to_field()
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, Fraction(other), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        o = self._coerce(other)
        d = self.field.d
        return FieldElement(self.field, self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in K")
        return self * FieldElement(self.field, o.a / n, -o.b / n)

    def __pow__(self, n: int):
        if n < 0:
            return FieldElement(self.field, Fraction(1)) / (self ** (-n))
        result = FieldElement(self.field, Fraction(1))
        for _ in range(n):
            result = result * self
        return result

    def __bool__(self):
        return bool(self.a or self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.field.d * self.b * self.b

    def conjugate(self) -> FieldElement:
        return FieldElement(self.field, self.a, -self.b)

    def denominator(self) -> int:
        return math.lcm(self.a.denominator, self.b.denominator)

    def is_integral(self) -> bool:
        try:
            self.to_integer()
        except InvalidArgument:
            return False
        return True

    def to_integer(self) -> QuadraticInteger:
        u, v = 2 * self.a, 2 * self.b
        if u.denominator != 1 or v.denominator != 1:
            raise InvalidArgument(f"{self} is not an algebraic integer")
        u, v = int(u), int(v)
        K = self.field
        if K.half_basis:
            if (u - v) % 2:
                raise InvalidArgument(f"{self} is not an algebraic integer")
            return QuadraticInteger(K, (u - v) // 2, v)
        if u % 2 or v % 2:
            raise InvalidArgument(f"{self} is not an algebraic integer")
        return QuadraticInteger(K, u // 2, v // 2)

    def sqrt(self) -> FieldElement | None:
        """A square root in K, or None when self is not a square in K."""
        d = self.field.d
        if not self:
            return self
        if self.b == 0:
            r = _rational_sqrt(self.a)
            if r is not None:
                return FieldElement(self.field, r, Fraction(0))
            r = _rational_sqrt(self.a / d)
            if r is not None:
                return FieldElement(self.field, Fraction(0), r)
            return None
        n = _rational_sqrt(self.norm())
        if n is None:
            return None
        for sign in (1, -1):
            s = _rational_sqrt((self.a + sign * n) / 2)
            t = _rational_sqrt((self.a - sign * n) / (2 * d))
            if s is None or t is None:
                continue
            if 2 * s * t != self.b:
                t = -t
            if 2 * s * t == self.b:
                return FieldElement(self.field, s, t)
        return None

    def __str__(self):
        return f"{self.a}+({self.b})*sqrt({self.field.d})"


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    if is_square(q.numerator) and is_square(q.denominator):
        return Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))
    return None


def is_square_in_field(alpha: QuadraticInteger) -> QuadraticInteger | None:
    """A square root of alpha in O_K, or None if alpha is not a square in K."""
    r = alpha.to_field().sqrt()
    return None if r is None else r.to_integer()


class SplittingType(str, Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime of O_K above the rational prime p.

    ``omega_root`` is the image of w in O_K/P = F_p (None for inert P); the
    two ideals above a split prime are tagged "first" (smaller root) and
    "second".
    """

    field: QuadraticField
    p: int
    kind: SplittingType
    tag: str = "n/a"
    omega_root: int | None = None

    @property
    def f(self) -> int:
        return 2 if self.kind is SplittingType.INERT else 1

    @property
    def abs_norm(self) -> int:
        return self.p**self.f

    @property
    def e(self) -> int:
        return 2 if self.kind is SplittingType.RAMIFIED else 1

    @property
    def sqrt_root(self) -> int | None:
        """Image r of sqrt(d) in F_p, so r^2 = d (mod p); odd p only."""
        if self.omega_root is None or self.p == 2:
            return None
        return (2 * self.omega_root - self.field.s) % self.p

    def conjugate(self) -> PrimeIdeal:
        if self.kind is not SplittingType.SPLIT:
            return self
        other = [P for P in primes_above(self.p, self.field) if P != self]
        return other[0]

    def __str__(self):
        if self.kind is SplittingType.SPLIT:
            return f"P{self.p}" + ("'" if self.tag == "second" else "")
        return f"P{self.p}"


def splitting_type(p: int, K: QuadraticField) -> SplittingType:
    if not is_prime(p):
        raise InvalidArgument(f"{p} is not prime")
    d = K.d
    if p == 2:
        if d % 8 == 1:
            return SplittingType.SPLIT
        if d % 8 == 5:
            return SplittingType.INERT
        return SplittingType.RAMIFIED
    if K.discriminant % p == 0:
        return SplittingType.RAMIFIED
    return SplittingType.SPLIT if legendre(d, p) == 1 else SplittingType.INERT


def _omega_roots_mod_p(p: int, K: QuadraticField) -> list[int]:
    s, c = K.s, K.c
    if p == 2:
        return sorted(t for t in (0, 1) if (t * t - s * t - c) % 2 == 0)
    r = sqrt_mod_prime(s * s + 4 * c, p)
    inv2 = pow(2, -1, p)
    return sorted({(s + r) * inv2 % p, (s - r) * inv2 % p})


@lru_cache(maxsize=8192)
def primes_above(p: int, K: QuadraticField) -> tuple[PrimeIdeal, ...]:
    kind = splitting_type(p, K)
    if kind is SplittingType.INERT:
        return (PrimeIdeal(K, p, kind),)
    roots = _omega_roots_mod_p(p, K)
    if kind is SplittingType.RAMIFIED:
        return (PrimeIdeal(K, p, kind, "n/a", roots[0]),)
    return (
        PrimeIdeal(K, p, kind, "first", roots[0]),
        PrimeIdeal(K, p, kind, "second", roots[1]),
    )


def _lift_omega_root(P: PrimeIdeal, k: int) -> int:
    """Root of t^2 - s*t - c modulo p^k lifting P.omega_root (P split)."""
    s, c = P.field.s, P.field.c
    mod = P.p**k
    r = P.omega_root
    while (r * r - s * r - c) % mod:
        r = (r - (r * r - s * r - c) * pow(2 * r - s, -1, mod)) % mod
    return r


def _padic_image(alpha: QuadraticInteger, P: PrimeIdeal, k: int) -> int:
    return (alpha.x + alpha.y * _lift_omega_root(P, k)) % P.p**k


def valuation(alpha: QuadraticInteger, P: PrimeIdeal) -> int:
    """v_P(alpha) for nonzero alpha in O_K."""
    if not alpha:
        raise InvalidArgument("valuation of 0 is infinite")
    p = P.p
    if P.kind is SplittingType.INERT:
        return min(vp(t, p) for t in (alpha.x, alpha.y) if t)
    n = vp(alpha.norm(), p)
    if P.kind is SplittingType.RAMIFIED or n == 0:
        return n
    t = _padic_image(alpha, P, n + 1)
    if t == 0:
        raise InternalInconsistency(f"v_P({alpha}) exceeds v_p(N) = {n}")
    return vp(t, p)


def _field_valuation(x: FieldElement, P: PrimeIdeal) -> int:
    den = x.denominator()
    num = (x * den).to_integer()
    return valuation(num, P) - P.e * vp(den, P.p)


def is_odd(alpha: QuadraticInteger) -> bool:
    """True when no prime ideal above 2 divides alpha."""
    return all(valuation(alpha, P) == 0 for P in primes_above(2, alpha.field))


def _mod_p(q: Fraction, p: int) -> int:
    if q.denominator % p == 0:
        raise InternalInconsistency(f"{q} is not p-integral at p = {p}")
    return q.numerator * pow(q.denominator, -1, p) % p


def _unit_character(u: FieldElement, P: PrimeIdeal) -> int:
    # quadratic character of the residue of a P-unit; P inert or ramified, p odd
    p = P.p
    if P.kind is SplittingType.INERT:
        return legendre(_mod_p(u.norm(), p), p)
    # ramified: sqrt(d) lies in P, so u = a (mod P)
    return legendre(_mod_p(u.a, p), p)


def _split_unit_part(alpha: QuadraticInteger, P: PrimeIdeal, k: int) -> int:
    # alpha = p^k * unit in Z_p; return the unit mod p
    t = _padic_image(alpha, P, k + 1)
    return (t // P.p**k) % P.p


def _uniformizer(P: PrimeIdeal) -> FieldElement:
    if P.kind is SplittingType.RAMIFIED:
        return P.field.sqrt_d.to_field()
    return FieldElement(P.field, Fraction(P.p))


def _require_odd(P: PrimeIdeal) -> None:
    if P.p == 2:
        raise InvalidArgument("residue symbols are only implemented at odd primes")


def residue_symbol(alpha: QuadraticInteger, P: PrimeIdeal) -> int:
    """Quadratic residue symbol (alpha/P) for odd P: splitting of P in K(sqrt(alpha)).

    +1 split, -1 inert, 0 ramified (odd valuation).
    """
    _require_odd(P)
    if not alpha:
        raise InvalidArgument("(0/P) is undefined")
    if is_square_in_field(alpha) is not None:
        return 1
    k = valuation(alpha, P)
    if k % 2:
        return 0
    if P.kind is SplittingType.SPLIT:
        return legendre(_split_unit_part(alpha, P, k), P.p)
    return _unit_character(alpha.to_field() / _uniformizer(P) ** k, P)


def local_hilbert_symbol(alpha: QuadraticInteger, beta: QuadraticInteger, P: PrimeIdeal) -> int:
    """Hilbert symbol (alpha, beta)_P at an odd prime ideal, via the tame symbol.

    (a, b)_P = chi((-1)^(va*vb) * a^vb / b^va) with chi the quadratic
    character of O_K/P.
    """
    _require_odd(P)
    if not alpha or not beta:
        raise InvalidArgument("Hilbert symbol of 0 is undefined")
    va, vb = valuation(alpha, P), valuation(beta, P)
    q = P.abs_norm
    sign = -1 if (va * vb) % 2 and q % 4 == 3 else 1
    if P.kind is SplittingType.SPLIT:
        p = P.p
        ua, ub = _split_unit_part(alpha, P, va), _split_unit_part(beta, P, vb)
        chi_a, chi_b = legendre(ua, p), legendre(ub, p)
    else:
        pi = _uniformizer(P)
        chi_a = _unit_character(alpha.to_field() / pi**va, P)
        chi_b = _unit_character(beta.to_field() / pi**vb, P)
    return sign * chi_a**vb * chi_b**va


@dataclass(frozen=True)
class FundamentalUnit:
    unit: QuadraticInteger
    norm: int
    in_z_sqrt_d: bool


def _cf_quadratic(P: int, Q: int, D: int):
    # partial quotients of (P + sqrt(D))/Q, Q | D - P^2, Q > 0
    r = math.isqrt(D)
    while True:
        a = (P + r) // Q
        yield a
        P = a * Q - P
        Q = (D - P * P) // Q


@lru_cache(maxsize=None)
def fundamental_unit(K: QuadraticField, max_steps: int = MAX_CF_STEPS) -> FundamentalUnit:
    """Fundamental unit eps_d > 1 of a real quadratic field.

    Walks the convergents h/k of w; the first h - k*conj(w) of norm +-1 is
    eps_d.
    """
    if K.d <= 1:
        raise InvalidArgument("fundamental units are only defined for real quadratic fields")
    s = K.s
    P0, Q0 = (1, 2) if K.half_basis else (0, 1)
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    for step, a in enumerate(_cf_quadratic(P0, Q0, K.d)):
        if step >= max_steps:
            raise ResourceLimitExceeded(f"continued fraction of w exceeded {max_steps} steps for d = {K.d}")
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        eps = QuadraticInteger(K, h - k * s, k)
        n = eps.norm()
        if abs(n) == 1 and eps.sign() > 0 and eps != K(1):
            return FundamentalUnit(eps, n, eps.sqrt_coords() is not None)
    raise AssertionError("unreachable")


def adjusted_unit(K: QuadraticField) -> QuadraticInteger:
    """eps_d^3 when d = 5 (mod 8) and eps_d is not in Z[sqrt(d)]; eps_d otherwise."""
    fu = fundamental_unit(K)
    if K.d % 8 == 5 and not fu.in_z_sqrt_d:
        return fu.unit**3
    return fu.unit


@dataclass(frozen=True)
class D1Decomposition:
    d1: int
    d2: int
    y1: int
    y2: int
    x_odd: bool

    @property
    def parity_case(self) -> str:
        return "x odd" if self.x_odd else "x even"


def d1_decomposition(K: QuadraticField) -> D1Decomposition:
    """The unique d1 | d attached to a norm +1 adjusted unit x + y*sqrt(d).

    x odd: x + 1 = 2*d1*y1^2, x - 1 = 2*d2*y2^2 and d1*eps = (y1*d1 + y2*sqrt(d))^2.
    x even: x + 1 = d1*y1^2, x - 1 = d2*y2^2 and 2*d1*eps = (y1*d1 + y2*sqrt(d))^2.
    """
    eps = adjusted_unit(K)
    if eps.norm() != 1:
        raise InvalidArgument(f"the fundamental unit of {K} has norm -1")
    x, y = eps.sqrt_coords()
    d = K.d
    x_odd = x % 2 == 1
    scale = 2 if x_odd else 1
    found = []
    for d1 in divisors(d):
        d2 = d // d1
        a, b = x + 1, x - 1
        if a % (scale * d1) or b % (scale * d2):
            continue
        s1, s2 = a // (scale * d1), b // (scale * d2)
        if not (is_square(s1) and is_square(s2)):
            continue
        y1, y2 = math.isqrt(s1), math.isqrt(s2)
        root = K.from_sqrt(y1 * d1, y2)
        target = eps * (d1 if x_odd else 2 * d1)
        if root * root != target:
            continue
        found.append(D1Decomposition(d1, d2, y1, y2, x_odd))
    if len(found) != 1:
        raise InternalInconsistency(f"expected exactly one d1 for d = {d}, found {len(found)}")
    return found[0]


@dataclass(frozen=True)
class ExtensionClass:
    """Shape of K(sqrt(alpha))/Q: "biquadratic" (with d1), "cyclic-quartic", "generic",
    or "trivial" (d1 = 1) when alpha is already a square in K."""

    kind: str
    d1: int | None = None


def classify_extension(alpha: QuadraticInteger) -> ExtensionClass:
    if not alpha:
        raise InvalidArgument("alpha must be nonzero")
    if is_square_in_field(alpha) is not None:
        return ExtensionClass("trivial", 1)
    N = alpha.norm()
    if is_square(N):
        # alpha * (Tr(alpha) + 2n) = (alpha + n)^2, so alpha = d1 mod squares
        n = math.isqrt(N)
        c = alpha.trace() + 2 * n
        if c == 0:
            c = alpha.trace() - 2 * n
        return ExtensionClass("biquadratic", squarefree_part(c))
    if is_square(alpha.field.d * N):
        return ExtensionClass("cyclic-quartic")
    return ExtensionClass("generic")


def factor_ideal(alpha: QuadraticInteger) -> list[tuple[PrimeIdeal, int]]:
    """Prime ideal factorisation of (alpha), as (P, v_P(alpha)) pairs."""
    out = []
    for p in factor(alpha.norm()).primes:
        for P in primes_above(p, alpha.field):
            v = valuation(alpha, P)
            if v:
                out.append((P, v))
    return out
