"""Split/division decisions for H_K(alpha, m) over K = Q(sqrt(d)).

Every entry point returns a ``Decision``: the verdict, the name of the
criterion that produced it, and the symbol evaluations it rested on.  The
general criterion works from the factorisation of m/gcd(m, d) into primes
inert in K (the q's) and split in K (the r's), plus the set I of prime
ideals of degree one where alpha has odd valuation:

    split  <=>  (N(alpha)/q) = (alpha/Q) = 1 for every q,
                (N(alpha)/r) = (alpha/R) = 1 for every r,
                (m/N(P)) = 1 for every odd P in I.

``global_symbol_path`` reaches the same verdict a different way, evaluating
the local Hilbert symbol (alpha, m)_P at every candidate prime ideal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import (
    ClassificationMismatch,
    HypothesisViolation,
    InapplicableRule,
    InternalInconsistency,
    InvalidArgument,
)
from .hilbert import ramified_set, split_pq_over_Q
from .quadfield import (
    PrimeIdeal,
    QuadraticField,
    QuadraticInteger,
    SplittingType,
    adjusted_unit,
    classify_extension,
    d1_decomposition,
    factor_ideal,
    fundamental_unit,
    is_odd,
    is_square_in_field,
    local_hilbert_symbol,
    primes_above,
    residue_symbol,
    splitting_type,
    valuation,
)
from .rational import (
    biquadratic_symbol,
    biquadratic_symbol_composite,
    factor,
    is_prime,
    is_square,
    legendre,
    squarefree_part,
)

__all__ = [
    "Mode",
    "Verdict",
    "Condition",
    "Hypotheses",
    "MDecomposition",
    "Decision",
    "QuarticCyclicParams",
    "check_hypotheses",
    "m_decomposition",
    "odd_valuation_set",
    "decide_general",
    "decide_rational_alpha",
    "decide_biquadratic",
    "decide_quartic_cyclic",
    "decide_unit_norm_neg",
    "decide_unit_norm_pos",
    "decide_pq",
    "global_symbol_path",
    "decide",
]


class Mode(str, Enum):
    H = "H"  # alpha odd in O_K
    H_HAT = "Hhat"  # d != 1 mod 8 instead


class Verdict(str, Enum):
    SPLIT = "split"
    DIVISION = "division"


@dataclass(frozen=True)
class Condition:
    """One evaluated symbol condition: ``value`` must equal ``required``."""

    label: str
    value: int
    required: int = 1

    @property
    def holds(self) -> bool:
        return self.value == self.required

    def __str__(self):
        mark = "ok" if self.holds else "FAIL"
        return f"{self.label} = {self.value} [{mark}]"

    def as_dict(self) -> dict:
        return {"label": self.label, "value": self.value, "required": self.required, "holds": self.holds}


@dataclass(frozen=True)
class Hypotheses:
    mode: Mode
    checks: tuple[tuple[str, bool], ...]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed in self.checks)

    def failures(self) -> list[str]:
        return [name for name, passed in self.checks if not passed]


@dataclass(frozen=True)
class MDecomposition:
    m_over_gcd: int
    q_list: tuple[int, ...]
    r_list: tuple[int, ...]

    @property
    def lam(self) -> int:
        return 1 if self.q_list else 0

    @property
    def gamma(self) -> int:
        return 1 if self.r_list else 0

    @property
    def t(self) -> int:
        return len(self.q_list)

    @property
    def s(self) -> int:
        return len(self.r_list)


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    rule: str
    evidence: tuple[Condition, ...] = ()
    ramified_hint: frozenset[int] | None = None
    notes: tuple[str, ...] = ()

    @property
    def splits(self) -> bool:
        return self.verdict is Verdict.SPLIT

    def as_dict(self) -> dict:
        out = {
            "verdict": self.verdict.value,
            "rule": self.rule,
            "evidence": [c.as_dict() for c in self.evidence],
        }
        if self.ramified_hint is not None:
            out["ramified_hint"] = sorted(self.ramified_hint)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


@dataclass(frozen=True)
class QuarticCyclicParams:
    """a, b, c with a^2 = d (b^2 + c^2); K(sqrt(alpha)) = Q(sqrt(a + b sqrt(d)))."""

    a: int
    b: int
    c: int


def _from_conditions(rule: str, conditions, notes=()) -> Decision:
    conditions = tuple(conditions)
    verdict = Verdict.SPLIT if all(c.holds for c in conditions) else Verdict.DIVISION
    return Decision(verdict, rule, conditions, notes=tuple(notes))


def _as_element(alpha, K: QuadraticField) -> QuadraticInteger:
    if isinstance(alpha, int):
        return K(alpha)
    if alpha.field != K:
        raise InvalidArgument("alpha does not belong to K")
    return alpha


def check_hypotheses(alpha: QuadraticInteger, m: int, K: QuadraticField, mode: Mode = Mode.H) -> Hypotheses:
    """Evaluate hypotheses (H) or (H-hat); failures are reported, not raised."""
    mode = Mode(mode)
    alpha = _as_element(alpha, K)
    checks: list[tuple[str, bool]] = [("alpha != 0", bool(alpha)), ("m > 0", m > 0)]
    checks.append(("m = 1 mod 4", m % 4 == 1))
    m_sqfree = m > 0 and all(e == 1 for _, e in factor(m))
    checks.append(("m squarefree", m_sqfree))
    checks.append(("m != d", m != K.d))
    if mode is Mode.H:
        checks.append(("alpha odd", bool(alpha) and is_odd(alpha)))
    else:
        checks.append(("d != 1 mod 8", K.d % 8 != 1))
    coprime = bool(alpha) and m > 0
    if coprime:
        for p in factor(m).primes:
            if any(valuation(alpha, P) for P in primes_above(p, K)):
                coprime = False
                break
    checks.append(("alpha, m coprime", coprime))
    return Hypotheses(mode, tuple(checks))


def _require(hyp: Hypotheses) -> None:
    if not hyp.ok:
        raise HypothesisViolation(f"hypotheses ({hyp.mode.value}) fail: {', '.join(hyp.failures())}", hyp)


def m_decomposition(m: int, K: QuadraticField) -> MDecomposition:
    """Split m/gcd(m, d) into primes inert in K (q's) and split in K (r's)."""
    if m <= 0 or m % 4 != 1:
        raise InvalidArgument(f"m must be positive and 1 mod 4, got {m}")
    f = factor(m)
    if any(e > 1 for _, e in f):
        raise InvalidArgument(f"m = {m} is not squarefree")
    g = math.gcd(m, K.d)
    rest = m // g
    q_list, r_list = [], []
    for p in factor(rest).primes:
        if legendre(K.d, p) == -1:
            q_list.append(p)
        else:
            r_list.append(p)
    return MDecomposition(rest, tuple(q_list), tuple(r_list))


def odd_valuation_set(alpha, K: QuadraticField | None = None) -> tuple[tuple[PrimeIdeal, int], ...]:
    """The set I: prime ideals of degree one where alpha has odd valuation."""
    if K is not None:
        alpha = _as_element(alpha, K)
    return tuple((P, v) for P, v in factor_ideal(alpha) if P.f == 1 and v % 2)


def _general_conditions(alpha: QuadraticInteger, m: int, K: QuadraticField):
    dec = m_decomposition(m, K)
    N = alpha.norm()
    conds: list[Condition] = []
    for q in dec.q_list:
        (Q,) = primes_above(q, K)
        conds.append(Condition(f"(N(alpha)/{q})", legendre(N, q)))
        conds.append(Condition(f"(alpha/{Q})", residue_symbol(alpha, Q)))
    for r in dec.r_list:
        R = primes_above(r, K)[0]
        conds.append(Condition(f"(N(alpha)/{r})", legendre(N, r)))
        conds.append(Condition(f"(alpha/{R})", residue_symbol(alpha, R)))
    notes = []
    for P, v in odd_valuation_set(alpha):
        if P.p == 2:
            # only possible under H-hat; the symbol there is fixed by the product formula
            notes.append(f"{P} in I skipped: its local symbol is the product of the odd ones")
            continue
        conds.append(Condition(f"({m}/N({P}))", legendre(m, P.p)))
    return conds, notes


def decide_general(alpha, m: int, K: QuadraticField, mode: Mode = Mode.H) -> Decision:
    """Criterion for alpha in O_K and squarefree m = 1 mod 4 under (H) or (H-hat)."""
    alpha = _as_element(alpha, K)
    _require(check_hypotheses(alpha, m, K, mode))
    conds, notes = _general_conditions(alpha, m, K)
    return _from_conditions("general", conds, notes)


def global_symbol_path(alpha, m: int, K: QuadraticField, mode: Mode = Mode.H) -> frozenset[PrimeIdeal]:
    """Ram(H_K(alpha, m)) among finite primes, from local Hilbert symbols.

    Odd primes dividing 2 N(alpha) m disc(K) are evaluated with the tame
    symbol; every other odd prime is unramified in both K(sqrt(alpha)) and
    K(sqrt(m)) with unit arguments, so its symbol is 1.  Real places give 1
    since m > 0.  The prime above 2 (unique under H-hat) is completed by the
    product formula.
    """
    alpha = _as_element(alpha, K)
    hyp = check_hypotheses(alpha, m, K, mode)
    _require(hyp)
    mK = K(m)
    primes = set(factor(alpha.norm()).primes) | set(factor(m).primes) | set(factor(K.discriminant).primes)
    ram = set()
    for p in sorted(primes - {2}):
        for P in primes_above(p, K):
            if local_hilbert_symbol(alpha, mK, P) == -1:
                ram.add(P)
    above2 = primes_above(2, K)
    if len(ram) % 2:
        if len(above2) != 1 or Mode(mode) is Mode.H:
            raise InternalInconsistency(f"odd count of ramified odd primes for ({alpha}, {m}) in {K}")
        ram.add(above2[0])
    return frozenset(ram)


def _is_plain_square(n: int) -> bool:
    return n > 0 and is_square(n)


def decide_rational_alpha(alpha: int, m: int, K: QuadraticField) -> Decision:
    """Criterion for rational alpha and prime m under (H-hat).

    Branches: alpha a square; -alpha a square; alpha = +-delta t^2 with
    delta > 1 squarefree.  When -alpha is a square the algebra is
    H_K(-1, m), which splits for every prime m = 1 mod 4; that case is
    reported under the second branch whatever (d/m) is.
    """
    if not isinstance(alpha, int):
        if not alpha.is_rational:
            raise InvalidArgument("alpha must be a rational integer")
        alpha = alpha.x
    if not is_prime(m):
        raise InvalidArgument(f"m = {m} must be prime")
    _require(check_hypotheses(K(alpha), m, K, Mode.H_HAT))
    d = K.d
    dm = legendre(d, m)
    if _is_plain_square(alpha):
        return Decision(Verdict.SPLIT, "rational-alpha:1", (Condition("alpha is a square", 1),))
    if _is_plain_square(-alpha):
        conds = (Condition("-alpha is a square", 1), Condition(f"({d}/{m})", dm))
        notes = ()
        if dm == -1:
            notes = ("(d/m) = -1 also splits: (-1/m) = 1 for m = 1 mod 4",)
        return Decision(Verdict.SPLIT, "rational-alpha:2", conds, notes=notes)
    delta = abs(squarefree_part(alpha))
    conds = []
    for ell in factor(delta).primes:
        if splitting_type(ell, K) is SplittingType.SPLIT:
            conds.append(Condition(f"({ell}/{m})", legendre(ell, m)))
    if dm != 1:
        conds.append(Condition(f"({d}/{m}) != 1", 1))
    else:
        conds.append(Condition(f"({alpha}/{m})", legendre(alpha, m)))
    return _from_conditions("rational-alpha:3", conds)


def decide_biquadratic(alpha, m: int, K: QuadraticField, mode: Mode = Mode.H) -> Decision:
    """Criterion when K(sqrt(alpha)) = Q(sqrt(d), sqrt(d1)) is biquadratic."""
    alpha = _as_element(alpha, K)
    _require(check_hypotheses(alpha, m, K, mode))
    ext = classify_extension(alpha)
    if ext.kind not in ("biquadratic", "trivial"):
        raise ClassificationMismatch(f"K(sqrt({alpha})) is {ext.kind}, not biquadratic")
    d1 = ext.d1
    dec = m_decomposition(m, K)
    conds = [Condition(f"({d1}/{r})", legendre(d1, r)) for r in dec.r_list]
    for p in factor(d1).primes:
        if p == 2 or K.d % p == 0 or legendre(K.d, p) != 1:
            continue
        conds.append(Condition(f"({m}/{p})", legendre(m, p)))
    return _from_conditions(f"biquadratic(d1={d1})", conds)


def decide_quartic_cyclic(params: QuarticCyclicParams, alpha, m: int, K: QuadraticField) -> Decision:
    """Criterion when K(sqrt(alpha)) = Q(sqrt(a + b sqrt(d))) is cyclic quartic."""
    alpha = _as_element(alpha, K)
    a, b, c = params.a, params.b, params.c
    d = K.d
    if a * a != d * (b * b + c * c):
        raise InvalidArgument(f"a^2 != d (b^2 + c^2) for (a, b, c) = ({a}, {b}, {c})")
    if d % 4 != 1:
        raise InapplicableRule("cyclic quartic criterion needs d = 1 mod 4")
    if a <= 0 or math.gcd(a, b) != 1:
        # a rational factor or sign in front of a + b sqrt(d) changes the answer
        # and the symbol product does not see it
        raise InapplicableRule(f"(a, b, c) = ({a}, {b}, {c}) is not normalised: need a > 0 and gcd(a, b) = 1")
    _require(check_hypotheses(alpha, m, K, Mode.H))
    ext = classify_extension(alpha)
    if ext.kind != "cyclic-quartic":
        raise ClassificationMismatch(f"K(sqrt({alpha})) is {ext.kind}, not cyclic quartic")
    gen = K.from_sqrt(a, b)
    if is_square_in_field(alpha * gen) is None:
        raise ClassificationMismatch(f"K(sqrt({alpha})) != K(sqrt({gen}))")
    dec = m_decomposition(m, K)
    conds = [Condition("lambda", dec.lam, 0)]
    for r in dec.r_list:
        try:
            quartic = biquadratic_symbol_composite(r, d)
        except InvalidArgument as exc:
            raise InapplicableRule(f"(r/d)_4 undefined for r = {r}: {exc}") from exc
        sign = -1 if ((r - 1) * (d - 1) // 8) % 2 else 1
        value = sign * legendre(2, r) ** (b % 2) * quartic
        conds.append(Condition(f"(-1)^((r-1)(d-1)/8) (2/{r})^{b} ({r}/{d})_4", value))
    for P, _ in odd_valuation_set(alpha):
        if P.p != 2:
            conds.append(Condition(f"({m}/N({P}))", legendre(m, P.p)))
    return _from_conditions("quartic-cyclic", conds)


def decide_unit_norm_neg(K: QuadraticField, m: int) -> Decision:
    """Criterion for alpha = eps_d of norm -1, d a product of primes = 1 mod 4, m prime."""
    fu = fundamental_unit(K)
    if fu.norm != -1:
        raise InapplicableRule(f"N(eps_{K.d}) = +1")
    d = K.d
    dprimes = factor(d).primes
    if any(p % 4 != 1 for p in dprimes):
        raise InapplicableRule(f"some prime factor of d = {d} is not 1 mod 4")
    if not is_prime(m) or m % 4 != 1:
        raise InapplicableRule(f"m = {m} is not a prime = 1 mod 4")
    _require(check_hypotheses(fu.unit, m, K, Mode.H))
    dec = m_decomposition(m, K)
    if not dec.gamma:
        raise InapplicableRule("gamma = 0")
    conds = []
    for r in dec.r_list:
        for p in dprimes:
            if legendre(p, r) != 1:
                raise InapplicableRule(f"({p}/{r}) != 1")
        conds.append(Condition(f"{r} mod 4", r % 4, 1))
        value = biquadratic_symbol_composite(r, d) * biquadratic_symbol(d, r)
        conds.append(Condition(f"({r}/{d})_4 ({d}/{r})_4", value))
    return _from_conditions("unit-norm-neg", conds)


def decide_unit_norm_pos(K: QuadraticField, m: int) -> Decision:
    """Criterion for alpha = eps_d of norm +1, via the d1 attached to the adjusted unit."""
    eps = adjusted_unit(K)
    if eps.norm() != 1:
        raise InapplicableRule(f"N(eps_{K.d}) = -1")
    _require(check_hypotheses(eps, m, K, Mode.H))
    dec = m_decomposition(m, K)
    if not dec.gamma:
        raise InapplicableRule("gamma = 0")
    dd = d1_decomposition(K)
    conds = []
    for r in dec.r_list:
        if dd.x_odd:
            conds.append(Condition(f"({dd.d1}/{r})", legendre(dd.d1, r)))
        else:
            conds.append(Condition(f"(2/{r}) ({dd.d1}/{r})", legendre(2, r) * legendre(dd.d1, r)))
    return _from_conditions(f"unit-norm-pos(d1={dd.d1}, {dd.parity_case})", conds)


def _disc_symbol(K: QuadraticField, p: int) -> int:
    return legendre(K.discriminant, p)


def _pq_cases(p: int, q: int, K: QuadraticField) -> tuple[str | None, list[Condition]]:
    d = K.d
    d1mod8 = d % 8 == 1
    ev: list[Condition] = []
    if p != q and p > 2 and q > 2 and (p % 4 == 1 or q % 4 == 1):
        pq = legendre(p, q)
        dp, dq = _disc_symbol(K, p), _disc_symbol(K, q)
        ev += [Condition(f"({p}/{q})", pq, -1), Condition(f"(D/{p})", dp), Condition(f"(D/{q})", dq)]
        if pq == -1 and (dp == 1 or dq == 1):
            return "pq-case-1", ev
        return None, ev
    for odd, two in ((p, q), (q, p)):
        if two == 2 and odd > 2 and odd % 8 in (3, 5):
            dp = _disc_symbol(K, odd)
            ev += [Condition(f"(D/{odd})", dp), Condition("d = 1 mod 8", int(d1mod8))]
            if dp == 1 or d1mod8:
                return "pq-case-2", ev
            return None, ev
    if p > 2 and q > 2 and p % 4 == 3 and q % 4 == 3:
        for x, y in ((p, q), (q, p)):
            s = legendre(y, x)
            dx = _disc_symbol(K, x)
            ev += [Condition(f"({y}/{x}) != 1", int(s != 1)), Condition(f"(D/{x})", dx)]
            if s != 1 and (dx == 1 or d1mod8):
                return "pq-case-3", ev
    return None, ev


def decide_pq(p: int, q: int, K: QuadraticField) -> Decision:
    """Classification of H_K(p, q) for positive primes p, q."""
    if not (p > 0 and q > 0 and is_prime(p) and is_prime(q)):
        raise InvalidArgument("p and q must be positive primes")
    case, ev = _pq_cases(p, q, K)
    over_q = split_pq_over_Q(p, q)
    if case is None:
        return Decision(Verdict.SPLIT, "pq-split", tuple(ev), notes=(f"H_Q({p},{q}) splits: {over_q}",))
    if over_q:
        raise InternalInconsistency(f"H_Q({p},{q}) splits but {case} claims division over {K}")
    ram = ramified_set(p, q).ramified
    hint = frozenset(v.p for v in ram if not v.is_real and splitting_type(v.p, K) is SplittingType.SPLIT)
    return Decision(Verdict.DIVISION, case, tuple(ev), ramified_hint=hint)


def decide(alpha, m: int, K: QuadraticField, mode: Mode = Mode.H) -> Decision:
    """Dispatch to the most specific criterion that applies, else the general one."""
    alpha = _as_element(alpha, K)
    if alpha.is_rational and alpha.x > 0 and is_prime(alpha.x) and is_prime(m):
        return decide_pq(alpha.x, m, K)
    if K.d > 1 and alpha == fundamental_unit(K).unit:
        for rule in (decide_unit_norm_neg, decide_unit_norm_pos):
            try:
                return rule(K, m)
            except InapplicableRule:
                pass
    if alpha.is_rational and is_prime(m) and Mode(mode) is Mode.H_HAT:
        try:
            return decide_rational_alpha(alpha.x, m, K)
        except HypothesisViolation:
            pass
    if classify_extension(alpha).kind in ("biquadratic", "trivial"):
        try:
            return decide_biquadratic(alpha, m, K, mode)
        except HypothesisViolation:
            pass
    return decide_general(alpha, m, K, mode)
