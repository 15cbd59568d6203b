"""Command-line interface.

Every command prints one JSON envelope on stdout:

    {"schema": ..., "command": ..., "inputs": {...}, "result": {...}, "evidence": [...]}

``--format human`` renders the same envelope as a table.  Exit codes:
0 split / ok, 2 invalid input, 3 division, 4 inapplicable rule or failed
hypotheses, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import engine, fibsurvey, oracle
from .errors import HypothesisViolation, InapplicableRule, InvalidArgument, QuatsplitError
from .hilbert import hilbert_at
from .quadfield import (
    QuadraticField,
    QuadraticInteger,
    fundamental_unit,
    make_field,
    primes_above,
    residue_symbol,
    valuation,
)
from .rational import biquadratic_symbol, legendre

SCHEMA = "quatsplit.cli/1"

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DIVISION = 3
EXIT_INAPPLICABLE = 4
EXIT_IO = 5

ALPHA_HELP = (
    "element of O_K written A+B*sqrt(D) (D must equal -d) or A+B*w, where w = sqrt(d), "
    "or (1+sqrt(d))/2 when d = 1 mod 4; whitespace is ignored, either term may be omitted"
)

_TERM = re.compile(r"([+-]?)(\d*)\*?(sqrt\((-?\d+)\)|w)?")


def parse_alpha(text: str, K: QuadraticField) -> QuadraticInteger:
    """Parse ``A+B*sqrt(D)`` or ``A+B*w`` into an element of K."""
    if re.search(r"[\w)]\s+[\w(]", text):
        raise InvalidArgument(f"cannot parse alpha {text!r}: missing operator")
    s = re.sub(r"\s+", "", text)
    if not s:
        raise InvalidArgument("empty alpha")
    rational, sqrt_part, w_part = 0, 0, 0
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (pos and not m.group(1)):
            raise InvalidArgument(f"cannot parse alpha {text!r} at {s[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        digits, unit = m.group(2), m.group(3)
        if not digits and not unit:
            raise InvalidArgument(f"cannot parse alpha {text!r}")
        coef = sign * (int(digits) if digits else 1)
        if unit is None:
            rational += coef
        elif unit == "w":
            w_part += coef
        else:
            if int(m.group(4)) != K.d:
                raise InvalidArgument(f"alpha uses sqrt({m.group(4)}) but d = {K.d}")
            sqrt_part += coef
        pos = m.end()
    return K.from_sqrt(rational, sqrt_part) + K(0, w_part)


def _envelope(command: str, inputs: dict, result: dict, evidence: list | None = None) -> dict:
    return {"schema": SCHEMA, "command": command, "inputs": inputs, "result": result, "evidence": evidence or []}


def _render_human(env: dict) -> str:
    rows = [("command", env["command"])]
    rows += [(f"input.{k}", json.dumps(v)) for k, v in env["inputs"].items()]
    rows += [(f"result.{k}", json.dumps(v)) for k, v in env["result"].items()]
    for item in env["evidence"]:
        if isinstance(item, dict) and "label" in item:
            mark = "ok" if item.get("holds") else "FAIL"
            rows.append(("evidence", f"{item['label']} = {item['value']} (need {item['required']}) [{mark}]"))
        else:
            rows.append(("evidence", json.dumps(item)))
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def _field(args) -> QuadraticField:
    return make_field(args.d)


# --- symbol -------------------------------------------------------------------


def _prime_arg(args) -> int:
    if args.p is None:
        raise InvalidArgument("-p is required")
    try:
        return int(args.p)
    except ValueError as exc:
        raise InvalidArgument(f"-p must be an integer here, got {args.p!r}") from exc


def cmd_symbol(args) -> tuple[dict, int]:
    kind = args.kind
    if kind != "hilbert":
        if kind != "residue-K" and args.a is None:
            raise InvalidArgument(f"{kind} needs -a")
        args.p = _prime_arg(args)
    if kind == "legendre":
        value = legendre(args.a, args.p)
        return _envelope("symbol legendre", {"a": args.a, "p": args.p}, {"value": value}), EXIT_OK
    if kind == "biquadratic":
        value = biquadratic_symbol(args.a, args.p)
        return _envelope("symbol biquadratic", {"a": args.a, "p": args.p}, {"value": value}), EXIT_OK
    if kind == "hilbert":
        if args.b is None:
            raise InvalidArgument("hilbert needs -b")
        if args.a is None:
            raise InvalidArgument("hilbert needs -a")
        place = "inf" if str(args.p) in ("inf", "oo", "real") else _prime_arg(args)
        value = hilbert_at(args.a, args.b, place)
        return _envelope("symbol hilbert", {"a": args.a, "b": args.b, "p": place}, {"value": value}), EXIT_OK
    # residue-K
    if args.d is None or args.alpha is None:
        raise InvalidArgument("residue-K needs -d and --alpha")
    K = _field(args)
    alpha = parse_alpha(args.alpha, K)
    ideals = primes_above(args.p, K)
    if args.ideal >= len(ideals):
        raise InvalidArgument(f"{args.p} has only {len(ideals)} prime(s) above it in {K}")
    P = ideals[args.ideal]
    result = {
        "value": residue_symbol(alpha, P),
        "ideal": str(P),
        "splitting": P.kind.value,
        "residue_degree": P.f,
        "valuation": valuation(alpha, P),
    }
    inputs = {"d": args.d, "alpha": str(alpha), "p": args.p, "ideal": args.ideal}
    return _envelope("symbol residue-K", inputs, result), EXIT_OK


# --- decide -------------------------------------------------------------------


def _decision_envelope(command: str, inputs: dict, dec: engine.Decision, extra: dict | None = None):
    payload = dec.as_dict()
    evidence = payload.pop("evidence")
    if extra:
        payload.update(extra)
    code = EXIT_OK if dec.splits else EXIT_DIVISION
    return _envelope(command, inputs, payload, evidence), code


def cmd_decide(args) -> tuple[dict, int]:
    kind = args.kind
    K = _field(args)
    mode = engine.Mode(args.mode)
    if kind == "pq":
        if args.p is None or args.q is None:
            raise InvalidArgument("decide pq needs -p and -q")
        dec = engine.decide_pq(args.p, args.q, K)
        return _decision_envelope("decide pq", {"d": args.d, "p": args.p, "q": args.q}, dec)
    if args.m is None:
        raise InvalidArgument(f"decide {kind} needs -m")
    if kind == "unit":
        fu = fundamental_unit(K)
        rule = engine.decide_unit_norm_neg if fu.norm == -1 else engine.decide_unit_norm_pos
        extra = {"unit": str(fu.unit), "unit_norm": fu.norm}
        try:
            dec = rule(K, args.m)
        except InapplicableRule as exc:
            # the unit theorems do not cover this m; the general criterion does
            dec = engine.decide_general(fu.unit, args.m, K)
            extra["fallback"] = str(exc)
        return _decision_envelope("decide unit", {"d": args.d, "m": args.m}, dec, extra)
    if args.alpha is None:
        raise InvalidArgument(f"decide {kind} needs --alpha")
    alpha = parse_alpha(args.alpha, K)
    inputs = {"d": args.d, "alpha": str(alpha), "m": args.m}
    if kind == "general":
        inputs["mode"] = mode.value
        return _decision_envelope("decide general", inputs, engine.decide_general(alpha, args.m, K, mode))
    if kind == "rational-alpha":
        return _decision_envelope("decide rational-alpha", inputs, engine.decide_rational_alpha(alpha, args.m, K))
    if kind == "biquadratic":
        inputs["mode"] = mode.value
        return _decision_envelope("decide biquadratic", inputs, engine.decide_biquadratic(alpha, args.m, K, mode))
    # quartic
    if not args.abc:
        raise InvalidArgument("decide quartic needs --abc a,b,c")
    try:
        a, b, c = (int(t) for t in args.abc.split(","))
    except ValueError as exc:
        raise InvalidArgument(f"--abc must be three integers, got {args.abc!r}") from exc
    inputs["abc"] = [a, b, c]
    dec = engine.decide_quartic_cyclic(engine.QuarticCyclicParams(a, b, c), alpha, args.m, K)
    return _decision_envelope("decide quartic", inputs, dec)


# --- oracle -------------------------------------------------------------------


def cmd_oracle(args) -> tuple[dict, int]:
    if args.kind == "local":
        if None in (args.a, args.b, args.p):
            raise InvalidArgument("oracle local needs -a, -b and -p")
        value = oracle.local_solvable_bruteforce(args.a, args.b, args.p)
        inputs = {"a": args.a, "b": args.b, "p": args.p}
        return _envelope("oracle local", inputs, {"value": value, "solvable": value == 1}), EXIT_OK
    if None in (args.d, args.alpha, args.m):
        raise InvalidArgument("oracle conic needs -d, --alpha and -m")
    K = _field(args)
    alpha = parse_alpha(args.alpha, K)
    pt = oracle.conic_point_search(alpha, args.m, args.height)
    inputs = {"d": args.d, "alpha": str(alpha), "m": args.m, "height": args.height}
    if pt is None:
        result = {"found": False, "note": "no point up to this height; this does not prove division"}
    else:
        x = K.from_sqrt(pt.x1, pt.x2)
        y = K.from_sqrt(pt.y1, pt.y2)
        result = {
            "found": True,
            "x": _over(str(x), pt.w),
            "y": _over(str(y), pt.w),
            "point": pt.as_dict(),
        }
    return _envelope("oracle conic", inputs, result), EXIT_OK


def _over(num: str, w: int) -> str:
    if w == 1:
        return num
    return f"({num})/{w}"


# --- fib ----------------------------------------------------------------------


def cmd_fib(args) -> tuple[dict, int]:
    store = args.store or fibsurvey.default_store()
    try:
        records = fibsurvey.survey(args.max_p, resume=args.resume, store=store, workers=args.workers)
    except (OSError, fibsurvey.StoreError) as exc:
        raise _IOFailure(str(exc)) from exc
    lists = fibsurvey.condition_lists(records)
    inputs = {"max_p": args.max_p, "resume": args.resume, "store": str(store) if store else None}
    if args.list is not None:
        key = None if args.list == 0 else args.list
        inputs["list"] = args.list
        return _envelope("fib", inputs, {"condition": args.list or "none", "p": lists[key]}), EXIT_OK
    result = {
        "records": len(records),
        "fp_prime": sum(r.fp_prime for r in records),
        "lists": {("none" if k is None else str(k)): v for k, v in lists.items()},
    }
    return _envelope("fib", inputs, result), EXIT_OK


class _IOFailure(Exception):
    pass


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quatsplit", description="Quaternion algebras over quadratic fields.")
    parser.add_argument("--format", choices=("json", "human"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    sym = sub.add_parser("symbol", help="Legendre, biquadratic, Hilbert and residue symbols")
    sym.add_argument("kind", choices=("legendre", "biquadratic", "hilbert", "residue-K"))
    sym.add_argument("-a", type=int)
    sym.add_argument("-b", type=int)
    sym.add_argument("-p", help="prime (or 'inf' for the real place of a Hilbert symbol)")
    sym.add_argument("-d", type=int)
    sym.add_argument("--alpha", help=ALPHA_HELP)
    sym.add_argument("--ideal", type=int, default=0, help="which prime above p (0 or 1) for residue-K")

    dec = sub.add_parser("decide", help="split or division", epilog=f"alpha grammar: {ALPHA_HELP}")
    dec.add_argument("kind", choices=("general", "pq", "unit", "rational-alpha", "biquadratic", "quartic"))
    dec.add_argument("-d", type=int, required=True)
    dec.add_argument("--alpha", help=ALPHA_HELP)
    dec.add_argument("-m", type=int)
    dec.add_argument("-p", type=int)
    dec.add_argument("-q", type=int)
    dec.add_argument("--mode", choices=("H", "Hhat"), default="H")
    dec.add_argument("--abc", help="a,b,c with a^2 = d(b^2 + c^2), for quartic")

    orc = sub.add_parser("oracle", help="brute-force checks")
    orc.add_argument("kind", choices=("conic", "local"))
    orc.add_argument("-a", type=int)
    orc.add_argument("-b", type=int)
    orc.add_argument("-p", type=int)
    orc.add_argument("-d", type=int)
    orc.add_argument("--alpha", help=ALPHA_HELP)
    orc.add_argument("-m", type=int)
    orc.add_argument("--height", type=int, default=20)

    fib = sub.add_parser("fib", help="prime Fibonacci survey")
    fib.add_argument("--max-p", type=int, default=1000)
    fib.add_argument("--resume", action="store_true")
    fib.add_argument("--store", help=f"line-delimited JSON store (default: ${fibsurvey.STORE_ENV})")
    fib.add_argument("--list", type=int, choices=(0, 1, 2, 3, 4), help="print one condition list (0 = none)")
    fib.add_argument("--workers", type=int, default=1)
    return parser


_COMMANDS = {"symbol": cmd_symbol, "decide": cmd_decide, "oracle": cmd_oracle, "fib": cmd_fib}


def _execute(args) -> tuple[dict | None, int]:
    try:
        return _COMMANDS[args.command](args)
    except (HypothesisViolation, InapplicableRule) as exc:
        print(f"quatsplit: {exc}", file=sys.stderr)
        return None, EXIT_INAPPLICABLE
    except _IOFailure as exc:
        print(f"quatsplit: {exc}", file=sys.stderr)
        return None, EXIT_IO
    except (QuatsplitError, ValueError) as exc:
        print(f"quatsplit: {exc}", file=sys.stderr)
        return None, EXIT_INVALID


def run(argv=None) -> tuple[dict | None, int]:
    """Parse and execute; returns (envelope, exit code).  The envelope is None on error."""
    return _execute(build_parser().parse_args(argv))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    env, code = _execute(args)
    if env is not None:
        print(_render_human(env) if args.format == "human" else json.dumps(env, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
