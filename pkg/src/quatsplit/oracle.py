"""Brute-force checks that do not rely on any symbol formula.

``local_solvable_bruteforce`` decides whether z^2 = a x^2 + b y^2 has a
nontrivial p-adic solution by exhaustive search modulo a power of p.  A
primitive solution has a unit coordinate, which can be scaled to 1.  With
that coordinate fixed, Hensel's lemma in that single variable needs

    v_p(F) > 2 * v_p(dF/d(var))

so the search modulo p^N with N = 2*(v_p(2) + v_p(coefficient)) + 1 (plus a
safety margin) is exact: every hit lifts, and every p-adic solution reduces
to a hit.

``conic_point_search`` hunts for (x, y) in K x K with alpha x^2 + m y^2 = 1.
Finding one proves the algebra splits; not finding one proves nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidArgument
from .quadfield import QuadraticField, QuadraticInteger
from .rational import is_prime, is_square, vp

__all__ = [
    "ConicPoint",
    "CrossCheckReport",
    "local_solvable_bruteforce",
    "conic_point_search",
    "cross_check",
    "MAX_PRIME",
    "MAX_COEFFICIENT",
    "MAX_HEIGHT",
]

MAX_PRIME = 50
MAX_COEFFICIENT = 100
MAX_HEIGHT = 200


def _squares_mod(mod: int) -> set[int]:
    return {z * z % mod for z in range(mod)}


def _search_case(fixed: int, free: int, p: int, margin: int, a_fixed_is_z: bool) -> bool:
    # a_fixed_is_z: z = 1, need fixed*x^2 + free*y^2 = 1 solvable; searched as
    # a set lookup over one variable.  Otherwise the coefficient `fixed`
    # multiplies the variable pinned to 1: fixed + free*t^2 = z^2.
    two = 1 if p == 2 else 0
    if a_fixed_is_z:
        N = 2 * two + 1 + margin
        mod = p**N
        values = {free * y * y % mod for y in range(mod)}
        return any((1 - fixed * x * x) % mod in values for x in range(mod))
    N = 2 * (two + vp(fixed, p)) + 1 + margin
    mod = p**N
    sq = _squares_mod(mod)
    return any((fixed + free * t * t) % mod in sq for t in range(mod))


def local_solvable_bruteforce(a: int, b: int, p: int, margin: int = 0) -> int:
    """+1 if a x^2 + b y^2 = z^2 has a nontrivial solution over Q_p, else -1.

    Exhaustive; guarded to p <= 50 and |a|, |b| <= 100.
    """
    if a == 0 or b == 0:
        raise InvalidArgument("coefficients must be nonzero")
    if not is_prime(p) or p > MAX_PRIME:
        raise InvalidArgument(f"p must be a prime <= {MAX_PRIME}, got {p}")
    if max(abs(a), abs(b)) > MAX_COEFFICIENT:
        raise InvalidArgument(f"|a|, |b| must be <= {MAX_COEFFICIENT}")
    found = (
        _search_case(a, b, p, margin, a_fixed_is_z=True)  # z = 1
        or _search_case(a, b, p, margin, a_fixed_is_z=False)  # x = 1
        or _search_case(b, a, p, margin, a_fixed_is_z=False)  # y = 1
    )
    return 1 if found else -1


@dataclass(frozen=True)
class ConicPoint:
    """x = (x1 + x2 sqrt(d))/w, y = (y1 + y2 sqrt(d))/w with alpha x^2 + m y^2 = 1."""

    x1: int
    x2: int
    y1: int
    y2: int
    w: int

    def check(self, alpha: QuadraticInteger, m: int) -> bool:
        K = alpha.field
        x = K.from_sqrt(self.x1, self.x2)
        y = K.from_sqrt(self.y1, self.y2)
        return alpha * x * x + m * y * y == K(self.w * self.w)

    def as_dict(self) -> dict:
        return {"x1": self.x1, "x2": self.x2, "y1": self.y1, "y2": self.y2, "w": self.w}


def _isqrt_exact(n: int) -> int | None:
    return math.isqrt(n) if is_square(n) else None


def _integral_sqrt(X1: int, X2: int, d: int) -> tuple[int, int] | None:
    # (x1 + x2 sqrt d)^2 = X1 + X2 sqrt d with integer x1, x2
    n = _isqrt_exact(X1 * X1 - d * X2 * X2)
    if n is None:
        return None
    for sign in (1, -1):
        s2, t2 = X1 + sign * n, X1 - sign * n
        if s2 % 2 or t2 % (2 * d):
            continue
        s, t = _isqrt_exact(s2 // 2), _isqrt_exact(t2 // (2 * d))
        if s is None or t is None:
            continue
        if 2 * s * t != X2:
            t = -t
        if 2 * s * t == X2:
            return s, t
    return None


def _levels(height: int):
    # (w, y1, y2) ordered by max(w, |y1|, |y2|), then lexicographically
    for h in range(1, height + 1):
        for w in range(1, h + 1):
            for y1 in range(-h, h + 1):
                for y2 in range(-h, h + 1):
                    if max(w, abs(y1), abs(y2)) == h:
                        yield w, y1, y2


def conic_point_search(alpha: QuadraticInteger, m: int, height: int) -> ConicPoint | None:
    """First point of alpha x^2 + m y^2 = 1 with all coordinates bounded by ``height``."""
    if height < 1 or height > MAX_HEIGHT:
        raise InvalidArgument(f"height must be in 1..{MAX_HEIGHT}")
    if not alpha or m == 0:
        raise InvalidArgument("alpha and m must be nonzero")
    K: QuadraticField = alpha.field
    d = K.d
    u, v = alpha.half_coords()
    two_n = 2 * alpha.norm()
    for w, y1, y2 in _levels(height):
        # alpha x'^2 = w^2 - m y'^2 with x' = x1 + x2 sqrt d
        R1 = w * w - m * (y1 * y1 + d * y2 * y2)
        R2 = -2 * m * y1 * y2
        # x'^2 = R * conj(alpha) / N(alpha), conj(alpha) = (u - v sqrt d)/2
        S1 = R1 * u - d * R2 * v
        S2 = R2 * u - R1 * v
        if S1 % two_n or S2 % two_n:
            continue
        root = _integral_sqrt(S1 // two_n, S2 // two_n, d)
        if root is None:
            continue
        x1, x2 = root
        if max(abs(x1), abs(x2)) > height:
            continue
        pt = ConicPoint(x1, x2, y1, y2, w)
        if not pt.check(alpha, m):
            raise AssertionError(f"conic point {pt} fails verification")
        return pt
    return None


@dataclass
class CrossCheckReport:
    agree: bool
    verdicts: tuple[str, ...]
    corroborated: bool = False
    differences: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "agree": self.agree,
            "verdicts": list(self.verdicts),
            "corroborated": self.corroborated,
            "differences": self.differences,
        }


def cross_check(first, second=None, point: ConicPoint | None = None) -> CrossCheckReport:
    """Compare two Decisions on the same (K, alpha, m); optionally attach a conic point."""
    decisions = [x for x in (first, second) if x is not None]
    verdicts = tuple(x.verdict.value for x in decisions)
    agree = len(set(verdicts)) <= 1
    diffs: list[str] = []
    if not agree:
        for dec in decisions:
            diffs.append(f"{dec.rule}: {dec.verdict.value}")
            diffs.extend(f"  {c}" for c in dec.evidence)
    corroborated = point is not None and all(v == "split" for v in verdicts)
    if point is not None and not corroborated:
        agree = False
        diffs.append(f"conic point {point.as_dict()} found although a verdict says division")
    return CrossCheckReport(agree, verdicts, corroborated, diffs)
