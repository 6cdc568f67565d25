"""Expansions in a non-integer base q over a finite alphabet a_1 < ... < a_J.

Uniqueness is decided with the lexicographic criterion: an expansion (c_i) of
x is the only one iff for every n

    sum_i (c_{n+i} - a_1) q^-i < a_{j+1} - a_j   whenever c_n = a_j < a_J,
    sum_i (a_J - c_{n+i}) q^-i < a_j - a_{j-1}   whenever c_n = a_j > a_1.

For an eventually periodic word only finitely many (digit, tail) pairs occur,
and each condition is a polynomial sign test in q.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .numeric import (
    Interval,
    QuadExt,
    as_fraction,
    bisect,
    eval_pi_closed,
    float_root,
    interval_max,
    pi_polys,
    poly_add,
    poly_float_scaled,
    poly_mul,
    poly_scale,
    poly_sign,
    poly_sub,
    quad_sign,
)
from .words import EventuallyPeriodicWord, constant

DEFAULT_TOL = Fraction(1, 10**12)


@dataclass(frozen=True)
class Alphabet:
    digits: tuple[Fraction, ...]

    def __init__(self, digits: Iterable):
        ds = tuple(sorted({as_fraction(d) for d in digits}))
        if len(ds) < 2:
            raise ValueError("an alphabet needs at least two distinct digits")
        object.__setattr__(self, "digits", ds)

    @classmethod
    def parse(cls, text: str) -> "Alphabet":
        return cls(part for part in text.split(",") if part.strip())

    @classmethod
    def ternary(cls, m) -> "Alphabet":
        return cls((0, 1, m))

    @property
    def J(self) -> int:
        return len(self.digits)

    @property
    def low(self) -> Fraction:
        return self.digits[0]

    @property
    def high(self) -> Fraction:
        return self.digits[-1]

    def gap_up(self, j: int) -> Fraction:
        return self.digits[j + 1] - self.digits[j]

    def gap_down(self, j: int) -> Fraction:
        return self.digits[j] - self.digits[j - 1]

    def index(self, digit) -> int:
        return self.digits.index(as_fraction(digit))

    def conjugate(self) -> "Alphabet":
        s = self.low + self.high
        return Alphabet(s - a for a in self.digits)

    def __contains__(self, digit) -> bool:
        try:
            return as_fraction(digit) in self.digits
        except TypeError:
            return False

    def __str__(self):
        return "{" + ",".join(str(d) for d in self.digits) + "}"


def q_max(A: Alphabet) -> Fraction:
    """Largest base in which every x of the natural interval has an expansion."""
    widest = max(A.digits[j] - A.digits[j - 1] for j in range(1, A.J))
    return 1 + (A.high - A.low) / widest


def _check_word(c: EventuallyPeriodicWord, A: Alphabet):
    for d in c.digits():
        if d not in A:
            raise ValueError(f"digit {d} is not in the alphabet {A}")


def _check_base(q, A: Alphabet):
    if not (q > 1 and q <= q_max(A)):
        raise ValueError(f"base {float(q):.6g} outside (1, {q_max(A)}]")


# ---------------------------------------------------------------------------
# uniqueness

UPPER = 1  # first family: c_n = a_j < a_J
LOWER = 2  # second family: c_n = a_j > a_1


@dataclass(frozen=True)
class Condition:
    n: int                 # 1-based position of the digit c_n
    digit: Fraction
    family: int            # UPPER or LOWER
    tail: EventuallyPeriodicWord
    gap: Fraction

    def poly(self, A: Alphabet):
        """Polynomial g with: condition holds at q  <=>  g(q) < 0."""
        N, D = pi_polys(self.tail)
        q_minus_1 = [Fraction(-1), Fraction(1)]
        if self.family == UPPER:
            # (q-1) N - (a_1 + gap (q-1)) D
            return poly_sub(poly_mul(q_minus_1, N), poly_mul(poly_add([A.low], poly_scale(q_minus_1, self.gap)), D))
        # a_J D - (q-1) N - gap (q-1) D
        return poly_sub(poly_scale(D, A.high), poly_add(poly_mul(q_minus_1, N), poly_scale(poly_mul(q_minus_1, D), self.gap)))

    def excess(self, q, A: Alphabet):
        """Left side minus right side, exactly; the condition holds iff this is < 0."""
        s = eval_pi_closed(self.tail, q)
        if self.family == UPPER:
            return s - A.low / (q - 1) - self.gap
        return A.high / (q - 1) - s - self.gap


def conditions(c: EventuallyPeriodicWord, A: Alphabet) -> list[Condition]:
    """The distinct uniqueness conditions attached to an eventually periodic word."""
    out, seen = [], set()
    for n in range(1, c.n_tails + 1):
        digit = as_fraction(c[n - 1])
        j = A.index(digit)
        tail = c.shift(n)
        if j < A.J - 1:
            key = (digit, UPPER, tail)
            if key not in seen:
                seen.add(key)
                out.append(Condition(n, digit, UPPER, tail, A.gap_up(j)))
        if j > 0:
            key = (digit, LOWER, tail)
            if key not in seen:
                seen.add(key)
                out.append(Condition(n, digit, LOWER, tail, A.gap_down(j)))
    return out


@dataclass(frozen=True)
class ExpansionReport:
    unique: bool
    first_violation: Condition | None = None

    def __post_init__(self):
        assert (self.first_violation is None) == self.unique

    def as_record(self) -> dict:
        rec = {"unique": self.unique}
        if self.first_violation is not None:
            v = self.first_violation
            rec.update(
                violation_n=v.n,
                violation_digit=str(v.digit),
                violation_condition=v.family,
            )
        return rec


def is_unique(c: EventuallyPeriodicWord, q, A: Alphabet) -> ExpansionReport:
    """Decide exactly whether ``c`` is the only expansion of pi_q(c) over ``A``."""
    if not isinstance(q, QuadExt):
        q = as_fraction(q)
    _check_word(c, A)
    if c.is_constant() and next(iter(c.digits())) in (A.low, A.high):
        if not q > 1:
            raise ValueError("the base must exceed 1")
        return ExpansionReport(True)  # trivial sequences are unique in every base
    _check_base(q, A)
    for cond in conditions(c, A):
        if poly_sign(cond.poly(A), q) >= 0:
            return ExpansionReport(False, cond)
    return ExpansionReport(True)


def is_unique_ternary(c: EventuallyPeriodicWord, q, m) -> bool:
    """The four specialised conditions for the alphabet {0, 1, m}, evaluated directly."""
    m = as_fraction(m)
    if not isinstance(q, QuadExt):
        q = as_fraction(q)
    _check_base(q, Alphabet.ternary(m))
    for n in range(1, c.n_tails + 1):
        digit = c[n - 1]
        s = eval_pi_closed(c.shift(n), q)
        if digit == 0:
            ok = s < 1
        elif digit == 1:
            ok = s < m - 1 and s > m / (q - 1) - 1
        elif digit == m:
            ok = s > m / (q - 1) - (m - 1)
        else:
            raise ValueError(f"digit {digit} not in {{0,1,{m}}}")
        if not ok:
            return False
    return True


# ---------------------------------------------------------------------------
# critical base of a single sequence

@dataclass(frozen=True)
class ConditionRoot:
    condition: Condition
    root: Interval      # the condition holds exactly for q > root


@dataclass(frozen=True)
class CriticalBase:
    value: Interval
    roots: list[ConditionRoot] = field(default_factory=list)

    def distinct_roots(self) -> list[Interval]:
        """Binding thresholds above 1, one per distinct value."""
        out: list[Interval] = []
        for r in sorted(self.roots, key=lambda r: r.root.lo):
            if r.root.hi <= 1 or r.root.exact == 1:
                continue
            if out and r.root.lo <= out[-1].hi:
                continue
            out.append(r.root)
        return out


def condition_root(cond: Condition, A: Alphabet, tol=DEFAULT_TOL) -> Interval:
    """Threshold base q_alpha of one condition, clamped to [1, Q_A]."""
    Q = q_max(A)
    g = cond.poly(A)
    sign = lambda q: poly_sign(g, q)  # noqa: E731
    if all(x == A.low for x in cond.tail.digits()) and cond.family == UPPER:
        return Interval.point(1)
    if all(x == A.high for x in cond.tail.digits()) and cond.family == LOWER:
        return Interval.point(1)
    if sign(Q) >= 0:
        return Interval.point(Q)
    lo = 1 + as_fraction(tol) / 1000
    if sign(lo) < 0:
        return Interval(Fraction(1), lo)
    guess = float_root(lambda x: poly_float_scaled(g, x), float(lo), float(Q))
    return bisect(sign, lo, Q, tol, guess)


def critical_base_of_sequence(c: EventuallyPeriodicWord, A: Alphabet, tol=DEFAULT_TOL) -> CriticalBase:
    """Base above which ``c`` is univoque and below which it is not."""
    _check_word(c, A)
    roots = [ConditionRoot(cond, condition_root(cond, A, tol)) for cond in conditions(c, A)]
    value = Interval.point(1)
    for r in roots:
        value = interval_max(value, r.root)
    return CriticalBase(value, roots)


# ---------------------------------------------------------------------------
# quasi-greedy / quasi-lazy expansions

def _base(q):
    return q if isinstance(q, QuadExt) else as_fraction(q)


def quasi_greedy(x, q, A: Alphabet, n_digits: int) -> list[Fraction]:
    """First digits of the lexicographically largest infinite expansion of x."""
    q = _base(q)
    x = x if isinstance(x, QuadExt) else as_fraction(x)
    floor = A.low / (q - 1)
    if not (floor < x <= A.high / (q - 1)):
        raise ValueError("x outside (a_1/(q-1), a_J/(q-1)]")
    out = []
    r = x
    for _ in range(n_digits):
        qr = q * r
        for a in reversed(A.digits):
            nxt = qr - a
            if quad_sign(nxt - floor) > 0:
                break
        else:  # pragma: no cover - impossible for x in range
            raise ArithmeticError("no admissible digit")
        out.append(a)
        r = nxt
    return out


def quasi_lazy(x, q, A: Alphabet, n_digits: int) -> list[Fraction]:
    """Conjugate of the quasi-greedy expansion of the mirrored point on the conjugate alphabet."""
    q = _base(q)
    x = x if isinstance(x, QuadExt) else as_fraction(x)
    s = A.low + A.high
    if not (A.low / (q - 1) <= x < A.high / (q - 1)):
        raise ValueError("x outside [a_1/(q-1), a_J/(q-1))")
    mirrored = s / (q - 1) - x
    return [s - a for a in quasi_greedy(mirrored, q, A.conjugate(), n_digits)]


def _tail_conditions_hold(c: EventuallyPeriodicWord, q, A: Alphabet, family: int) -> bool:
    for n in range(1, c.n_tails + 1):
        j = A.index(c[n - 1])
        tail = c.shift(n)
        s = eval_pi_closed(tail, q)
        if family == UPPER and j < A.J - 1:
            if quad_sign(s - A.low / (q - 1) - A.gap_up(j)) > 0:
                return False
        if family == LOWER and j > 0:
            if quad_sign(A.high / (q - 1) - s - A.gap_down(j)) > 0:
                return False
    return True


def is_quasi_greedy_word(c: EventuallyPeriodicWord, q, A: Alphabet) -> bool:
    """Non-strict upper-family inequalities: the characterization of quasi-greedy expansions."""
    return _tail_conditions_hold(c, _base(q), A, UPPER)


def is_quasi_lazy_word(c: EventuallyPeriodicWord, q, A: Alphabet) -> bool:
    return _tail_conditions_hold(c, _base(q), A, LOWER)


# ---------------------------------------------------------------------------
# brute-force enumeration

@dataclass
class Enumeration:
    prefixes: list[tuple[Fraction, ...]]
    overflow: bool = False

    def __len__(self):
        return len(self.prefixes)


def enumerate_expansions(x, q, A: Alphabet, depth: int, cap: int = 64) -> Enumeration:
    """All length-``depth`` prefixes of expansions of x, by depth-first branch and bound.

    After choosing c_1..c_n the residual r = q^n (x - sum c_i q^-i) must stay in
    [a_1/(q-1), a_J/(q-1)].  Children are visited in decreasing digit order, so
    the first prefix found is the greedy one.  At most ``cap`` prefixes are kept.
    """
    if depth < 1 or cap < 1:
        raise ValueError("depth and cap must be positive")
    q = as_fraction(q)
    x = as_fraction(x)
    lo, hi = A.low / (q - 1), A.high / (q - 1)
    result = Enumeration([])
    if not (lo <= x <= hi):
        return result
    stack: list[tuple[tuple, Fraction]] = [((), x)]
    while stack:
        prefix, r = stack.pop()
        if len(prefix) == depth:
            if len(result.prefixes) == cap:
                result.overflow = True
                break
            result.prefixes.append(prefix)
            continue
        qr = q * r
        for a in A.digits:  # pushed ascending so the largest digit is popped first
            nxt = qr - a
            if lo <= nxt <= hi:
                stack.append((prefix + (a,), nxt))
    return result


def unique_by_enumeration(c: EventuallyPeriodicWord, q, A: Alphabet, depth: int = 20, cap: int = 8) -> bool:
    """Oracle: exactly one prefix survives, and it is the prefix of c."""
    x = eval_pi_closed(c, as_fraction(q))
    found = enumerate_expansions(x, q, A, depth, cap)
    return len(found) == 1 and found.prefixes[0] == tuple(as_fraction(d) for d in c.prefix(depth))


def trivial(A: Alphabet) -> tuple[EventuallyPeriodicWord, EventuallyPeriodicWord]:
    return constant(A.low), constant(A.high)
