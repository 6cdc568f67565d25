"""Command line front end: ``critbase <command> ...``.

Every command produces a list of flat records whose values are strings, so the
text, CSV and JSON renderings carry identical values.  Exit status is 0 for a
resolved answer, 2 when a search hit its depth limit and 1 on bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction

import mpmath

from . import critical
from .critical import CriticalResult, DomainError, Membership, Status
from .expand import Alphabet, critical_base_of_sequence, enumerate_expansions, is_unique
from .numeric import Interval, NoSignChange, QuadExt, render_exact
from .words import AdmissibleSeq, EventuallyPeriodicWord

EXIT_OK, EXIT_INPUT, EXIT_DEPTH = 0, 1, 2

TABLE_COLUMNS = ["m", "N", "h", "d_period", "p_prime", "p_double_prime", "p", "P", "in_C"]


class InputError(ValueError):
    pass


# -- parsing ------------------------------------------------------------------

def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {text!r}") from None


def parse_digits(text: str) -> tuple[Fraction, ...]:
    text = text.strip()
    if text in ("", "-"):
        return ()
    return tuple(parse_rational(t) for t in text.split(","))


def parse_word(pre: str, per: str) -> EventuallyPeriodicWord:
    period = parse_digits(per)
    if not period:
        raise InputError("the period must not be empty")
    return EventuallyPeriodicWord(parse_digits(pre), period)


def parse_alphabet(text: str) -> Alphabet:
    digits = parse_digits(text)
    if len(digits) < 2:
        raise InputError("an alphabet needs at least two digits")
    return Alphabet(digits)


def parse_h(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text in ("", "-"):
        return ()
    try:
        h = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise InputError(f"h must be a comma separated list of positive integers: {text!r}") from None
    if any(x < 1 for x in h):
        raise InputError("h entries must be positive")
    return h


# -- rendering ----------------------------------------------------------------

def fmt_number(x, digits: int) -> str:
    """Decimal rendering with ``digits`` significant digits."""
    with mpmath.workdps(digits + 10):
        if isinstance(x, QuadExt):
            v = x.to_mpf()
        else:
            x = Fraction(x)
            v = mpmath.mpf(x.numerator) / x.denominator
        return mpmath.nstr(v, digits, strip_zeros=False)


def fmt_value(x, digits: int) -> str:
    if x is None:
        return ""
    if isinstance(x, Interval):
        if x.is_exact:
            return fmt_number(x.exact, digits)
        return fmt_number((x.lo + x.hi) / 2, digits)
    return fmt_number(x, digits)


def fmt_exact(x) -> str:
    """Symbolic form when the value is known exactly, else empty."""
    if isinstance(x, Interval):
        return render_exact(x.exact) if x.is_exact else ""
    if x is None:
        return ""
    return render_exact(x)


def fmt_bracket(x: Interval | None, digits: int) -> str:
    if x is None:
        return ""
    return f"{fmt_number(x.lo, digits)}..{fmt_number(x.hi, digits)}"


def period_bits(d: AdmissibleSeq) -> str:
    if d.word is None:
        return ""
    w = d.word
    pre = "".join(str(b) for b in w.pre)
    return pre + "(" + "".join(str(b) for b in w.per) + ")"


def critical_record(r: CriticalResult, digits: int) -> dict[str, str]:
    rec = {
        "m": render_exact(r.m),
        "N": str(r.d.N),
        "h": ",".join(str(x) for x in r.d.h),
        "d_period": period_bits(r.d),
        "p_prime": fmt_value(r.p_prime, digits),
        "p_double_prime": fmt_value(r.p_double_prime, digits),
        "p": fmt_value(r.p, digits),
        "P": fmt_value(r.P, digits),
        "in_C": r.in_C.value,
        "status": r.status.value,
        "d_kind": r.d.kind.value,
        "p_exact": fmt_exact(r.p),
        "P_exact": fmt_exact(r.P),
        "p_enclosure": fmt_bracket(r.p, digits),
    }
    if r.status is Status.DEPTH_LIMITED:
        rec["m_bracket"] = fmt_bracket(r.bracket, digits)
    if r.small_m:
        rec["warning"] = "m below 2"
    return rec


def interval_fields(prefix: str, iv: Interval, digits: int) -> dict[str, str]:
    return {prefix: fmt_value(iv, digits), prefix + "_exact": fmt_exact(iv)}


def render(rows: list[dict[str, str]], fmt: str, columns: list[str] | None = None) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if fmt == "csv":
        if columns is None:
            columns = []
            for row in rows:
                columns += [k for k in row if k not in columns]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for row in rows:
            w.writerow(row)
        return buf.getvalue()
    blocks = ["\n".join(f"{k}: {v}" for k, v in row.items()) for row in rows]
    return "\n\n".join(blocks) + "\n"


def parse_rendered(text: str, fmt: str) -> list[dict[str, str]]:
    """Inverse of :func:`render`."""
    if fmt == "json":
        return json.loads(text)
    if fmt == "csv":
        return list(csv.DictReader(io.StringIO(text)))
    rows = []
    for block in text.strip("\n").split("\n\n"):
        rows.append(dict(line.split(": ", 1) if ": " in line else (line.rstrip(":"), "")
                         for line in block.splitlines()))
    return rows


# -- commands -----------------------------------------------------------------

def _status(results) -> int:
    return EXIT_DEPTH if any(r.status is Status.DEPTH_LIMITED for r in results) else EXIT_OK


def cmd_critical(args):
    r = critical.p_m(parse_rational(args.m), args.tol, args.max_depth, allow_small=args.allow_small_m)
    return [critical_record(r, args.digits)], _status([r]), None


def cmd_g(args):
    A = parse_alphabet(args.alphabet)
    if A.J != 3:
        raise InputError("g needs exactly three digits")
    r = critical.ternary_G(A, args.tol, args.max_depth)
    return [critical_record(r, args.digits)], _status([r]), None


def cmd_table(args):
    lo, hi = args.m_lo, args.m_hi
    if not (2 <= lo <= hi):
        raise InputError("need 2 <= m_lo <= m_hi")
    results = critical.table(lo, hi, args.tol, args.max_depth)
    return [critical_record(r, args.digits) for r in results], _status(results), TABLE_COLUMNS


def cmd_curve(args):
    step = parse_rational(args.step)
    if step <= 0:
        raise InputError("step must be positive")
    results = critical.curve(parse_rational(args.m_lo), parse_rational(args.m_hi), step,
                             args.tol, args.max_depth, allow_small=args.allow_small_m)
    rows = []
    for r in results:
        rows.append({
            "m": render_exact(r.m),
            "p": fmt_value(r.p, args.digits),
            "P": fmt_value(r.P, args.digits),
            "d_period": period_bits(r.d),
            "h": ",".join(str(x) for x in r.d.h),
            "status": r.status.value,
        })
    return rows, _status(results), ["m", "p", "P", "d_period", "h", "status"]


def cmd_unique(args):
    q = parse_rational(args.base)
    rep = is_unique(parse_word(args.preperiod, args.period), q, parse_alphabet(args.alphabet))
    rec = {k: (str(v).lower() if isinstance(v, bool) else str(v)) for k, v in rep.as_record().items()}
    return [rec], EXIT_OK, None


def cmd_qc(args):
    A = parse_alphabet(args.alphabet)
    c = parse_word(args.preperiod, args.period)
    cb = critical_base_of_sequence(c, A, args.tol)
    rec = interval_fields("qc", cb.value, args.digits)
    rec["roots"] = ";".join(fmt_value(x, args.digits) for x in cb.distinct_roots())
    return [rec], EXIT_OK, None


def cmd_interval(args):
    h = parse_h(args.h)
    d = AdmissibleSeq.finite(h) if h else AdmissibleSeq.zero()
    ci = critical.component_interval(d, args.tol)
    rec = {"d_period": period_bits(d), "h": ",".join(map(str, h))}
    rec.update(interval_fields("m_d", ci.m_d, args.digits))
    rec.update(interval_fields("mu_d", ci.mu_d, args.digits))
    rec.update(interval_fields("M_d", ci.M_d, args.digits))
    return [rec], EXIT_OK, None


def cmd_expansions(args):
    A = parse_alphabet(args.alphabet)
    x, q = parse_rational(args.x), parse_rational(args.q)
    if q <= 1:
        raise InputError("the base must exceed 1")
    found = enumerate_expansions(x, q, A, args.depth, args.cap)
    rows = [{"index": str(i), "prefix": ",".join(render_exact(a) for a in p)} for i, p in enumerate(found.prefixes)]
    if found.overflow:
        logging.getLogger(__name__).warning("more than %d prefixes; output truncated", args.cap)
    return rows, EXIT_OK, ["index", "prefix"]


def cmd_cantor(args):
    m = parse_rational(args.m)
    answer = critical.in_cantor(m, args.max_depth)
    code = EXIT_DEPTH if answer is Membership.DEPTH_LIMITED else EXIT_OK
    return [{"m": render_exact(m), "in_C": answer.value}], code, None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default="text")
    common.add_argument("--digits", type=int, default=12, help="significant digits in numeric fields")
    common.add_argument("--tol", type=parse_rational, default=critical.DEFAULT_TOL, help="root enclosure width")
    common.add_argument("--max-depth", type=int, default=critical.MAX_DEPTH, help="stages of the h search")
    common.add_argument("--allow-small-m", action="store_true", help="accept (1+sqrt5)/2 <= m < 2")

    p = _Parser(prog="critbase", description="Critical bases of unique expansions over ternary alphabets.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("critical", parents=[common], help="p_m for the alphabet {0,1,m}")
    s.add_argument("m")
    s.set_defaults(func=cmd_critical)

    s = sub.add_parser("table", parents=[common], help="one row per integer m")
    s.add_argument("m_lo", type=int)
    s.add_argument("m_hi", type=int)
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("unique", parents=[common], help="is a sequence the unique expansion of its value")
    s.add_argument("base")
    s.add_argument("alphabet", help="comma separated digits, e.g. 0,1,3")
    s.add_argument("preperiod", help="comma separated digits, '-' for none")
    s.add_argument("period")
    s.set_defaults(func=cmd_unique)

    s = sub.add_parser("qc", parents=[common], help="critical base of one sequence")
    s.add_argument("alphabet")
    s.add_argument("preperiod")
    s.add_argument("period")
    s.set_defaults(func=cmd_qc)

    s = sub.add_parser("interval", parents=[common], help="component [m_d, M_d) with its minimum point mu_d")
    s.add_argument("h", help="comma separated h_1..h_N; '-' or '' for d = 0^inf")
    s.set_defaults(func=cmd_interval)

    s = sub.add_parser("curve", parents=[common], help="p_m and P_m sampled on a grid")
    s.add_argument("m_lo")
    s.add_argument("m_hi")
    s.add_argument("step")
    s.set_defaults(func=cmd_curve)

    s = sub.add_parser("expansions", parents=[common], help="prefixes of all expansions of x")
    s.add_argument("x")
    s.add_argument("q")
    s.add_argument("alphabet")
    s.add_argument("--depth", type=int, default=12)
    s.add_argument("--cap", type=int, default=64)
    s.set_defaults(func=cmd_expansions)

    s = sub.add_parser("cantor", parents=[common], help="is m in the set where p_m = P_m")
    s.add_argument("m")
    s.set_defaults(func=cmd_cantor)

    s = sub.add_parser("g", parents=[common], help="generalized golden ratio of a three-digit alphabet")
    s.add_argument("alphabet")
    s.set_defaults(func=cmd_g)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        rows, code, columns = args.func(args)
    except (InputError, DomainError, NoSignChange, ValueError) as exc:
        print(f"critbase: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(render(rows, args.format, columns))
    return code


if __name__ == "__main__":
    sys.exit(main())
