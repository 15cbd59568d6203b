"""Survey of H_K(eps_p, F_p) over K = Q(sqrt(p)) for prime Fibonacci numbers F_p.

When F_p is prime and p > 5, the algebra splits exactly when p falls in one
of four congruence classes:

    1. p = 1 (mod 12)
    2. p = 17 (mod 24)
    3. p = 3 (mod 4), p^2 = 1 (mod 5) and (2/F_p) = 1
    4. p = 3 (mod 4) and p^2 = 4 (mod 5)

``survey`` walks the primes up to a ceiling, tests F_p for primality and
records which class (if any) each prime index lands in.  Records are
appended to a line-delimited JSON store so long runs can be resumed.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .engine import decide_general, decide_unit_norm_neg, decide_unit_norm_pos
from .errors import InapplicableRule, InvalidArgument, QuatsplitError
from .quadfield import adjusted_unit, make_field
from .rational import biquadratic_symbol, fibonacci, is_prime, legendre, primes_up_to

__all__ = [
    "FibRecord",
    "SCHEMA",
    "DEFAULT_CEILING",
    "STORE_ENV",
    "classify_condition",
    "fib_congruences_check",
    "lemma51_check",
    "lemma52_check",
    "engine_verdict",
    "survey_one",
    "survey",
    "load_store",
    "condition_lists",
    "StoreError",
]

SCHEMA = "quatsplit.fibsurvey/1"
DEFAULT_CEILING = 10_000
STORE_ENV = "QUATSPLIT_STORE"


class StoreError(QuatsplitError, OSError):
    """The survey store could not be read or written."""

    def __init__(self, message: str, p: int | None = None):
        super().__init__(message)
        self.p = p


@dataclass(frozen=True)
class FibRecord:
    p: int
    digits: int
    fp_prime: bool
    condition: int | None
    verdict: str  # "split", "division" or "n/a" (F_p composite)
    elapsed_ms: float = 0.0

    @property
    def F_p(self) -> int:
        return fibonacci(self.p)

    def to_json(self) -> str:
        cond = "none" if self.condition is None else self.condition
        payload = {
            "p": self.p,
            "digits": self.digits,
            "fp_prime": self.fp_prime,
            "condition": cond,
            "verdict": self.verdict,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, line: str) -> FibRecord:
        raw = json.loads(line)
        cond = raw["condition"]
        return cls(
            p=int(raw["p"]),
            digits=int(raw["digits"]),
            fp_prime=bool(raw["fp_prime"]),
            condition=None if cond == "none" else int(cond),
            verdict=raw["verdict"],
            elapsed_ms=float(raw.get("elapsed_ms", 0.0)),
        )


def _require_index(p: int) -> None:
    if p <= 5 or not is_prime(p):
        raise InvalidArgument(f"p must be a prime > 5, got {p}")


def classify_condition(p: int, F_p: int | None = None) -> int | None:
    """Which of the four split classes p belongs to, or None (division)."""
    _require_index(p)
    if F_p is None:
        F_p = fibonacci(p)
    if p % 12 == 1:
        cond = 1
    elif p % 24 == 17:
        cond = 2
    elif p % 4 == 3 and p * p % 5 == 4:
        cond = 4
    elif p % 4 == 3 and p * p % 5 == 1 and legendre(2, F_p) == 1:
        cond = 3
    else:
        cond = None
    hits = [p % 12 == 1, p % 24 == 17, p % 4 == 3 and p * p % 5 == 1 and cond == 3, p % 4 == 3 and p * p % 5 == 4]
    if sum(hits) > 1:
        raise AssertionError(f"conditions overlap at p = {p}")
    return cond


def fib_congruences_check(p: int) -> bool:
    """F_p = 1 (mod 4) and F_p = (p/5) (mod p)."""
    _require_index(p)
    F = fibonacci(p)
    return F % 4 == 1 and F % p == legendre(p, 5) % p


def lemma51_check(p: int) -> bool:
    """(F_p/p) = 1 for p = 1 (mod 4); (F_p/p) = (p/5) for p = 3 (mod 4)."""
    _require_index(p)
    lhs = legendre(fibonacci(p), p)
    return lhs == (1 if p % 4 == 1 else legendre(p, 5))


def lemma52_check(p: int) -> bool | None:
    """(F_p/p)_4 (p/F_p)_4 against 1 (p = 1 mod 3) or (2/p); None when F_p is composite."""
    _require_index(p)
    if p % 4 != 1:
        raise InvalidArgument(f"p must be 1 mod 4, got {p}")
    F = fibonacci(p)
    if not is_prime(F):
        return None
    product = biquadratic_symbol(F % p, p) * biquadratic_symbol(p % F, F)
    expected = 1 if p % 3 == 1 else legendre(2, p)
    return product == expected


def engine_verdict(p: int) -> str:
    """Verdict for H_K(eps_p, F_p) from the general decision machinery, not the congruences."""
    _require_index(p)
    F = fibonacci(p)
    if not is_prime(F):
        raise InvalidArgument(f"F_{p} is composite")
    K = make_field(p)
    for rule in (decide_unit_norm_neg, decide_unit_norm_pos):
        try:
            return rule(K, F).verdict.value
        except InapplicableRule:
            pass
    return decide_general(adjusted_unit(K), F, K).verdict.value


def survey_one(p: int) -> FibRecord:
    start = time.perf_counter()
    F = fibonacci(p)
    prime = is_prime(F)
    cond, verdict = None, "n/a"
    if prime:
        cond = classify_condition(p, F)
        verdict = "division" if cond is None else "split"
    elapsed = (time.perf_counter() - start) * 1000
    return FibRecord(p, len(str(F)), prime, cond, verdict, elapsed)


def default_store() -> Path | None:
    value = os.environ.get(STORE_ENV)
    return Path(value) if value else None


def load_store(path: Path) -> dict[int, FibRecord]:
    path = Path(path)
    if not path.exists():
        return {}
    records: dict[int, FibRecord] = {}
    try:
        with path.open() as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise StoreError(f"cannot read store {path}: {exc}") from exc
    if not lines:
        return {}
    header = json.loads(lines[0])
    if header.get("schema") != SCHEMA:
        raise StoreError(f"{path}: unexpected schema header {lines[0]!r}")
    for line in lines[1:]:
        if line.strip():
            rec = FibRecord.from_json(line)
            records[rec.p] = rec
    return records


def survey(
    p_max: int,
    resume: bool = False,
    store: Path | str | None = None,
    workers: int | None = None,
    ceiling: int = DEFAULT_CEILING,
) -> list[FibRecord]:
    """Records for every prime 5 < p <= p_max, in increasing p.

    With ``store`` set, new records are appended as they complete; with
    ``resume`` also set, indices already in the store are not recomputed.
    """
    if p_max > ceiling:
        raise InvalidArgument(f"p_max = {p_max} exceeds the ceiling {ceiling}")
    store = Path(store) if store is not None else None
    existing: dict[int, FibRecord] = {}
    if store is not None and resume:
        existing = load_store(store)
    todo = [p for p in primes_up_to(p_max) if p > 5 and p not in existing]

    fh = None
    if store is not None:
        try:
            fresh = not (resume and store.exists() and store.stat().st_size)
            fh = store.open("w" if fresh else "a")
            if fresh:
                fh.write(json.dumps({"schema": SCHEMA}) + "\n")
        except OSError as exc:
            raise StoreError(f"cannot open store {store}: {exc}") from exc

    workers = workers or 1
    results: dict[int, FibRecord] = dict(existing)
    try:
        if workers > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                stream = pool.map(survey_one, todo, chunksize=4)
                _drain(stream, results, fh)
        else:
            _drain(map(survey_one, todo), results, fh)
    finally:
        if fh is not None:
            fh.close()
    return [results[p] for p in sorted(results) if p <= p_max]


def _drain(stream, results: dict[int, FibRecord], fh) -> None:
    # single writer: records are serialised here, in p order
    for rec in stream:
        results[rec.p] = rec
        if fh is not None:
            try:
                fh.write(rec.to_json() + "\n")
                fh.flush()
            except OSError as exc:
                raise StoreError(f"failed writing record for p = {rec.p}: {exc}", rec.p) from exc


def condition_lists(records) -> dict[int | None, list[int]]:
    """Prime-F_p indices grouped by condition (None = division)."""
    out: dict[int | None, list[int]] = {1: [], 2: [], 3: [], 4: [], None: []}
    for rec in records:
        if rec.fp_prime:
            out[rec.condition].append(rec.p)
    return out
