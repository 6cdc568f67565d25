"""Critical bases p_m for the ternary alphabets {0, 1, m}.

For an admissible d != 1^inf let delta, delta' be d, d' with 1 -> m and 0 -> 1.
Then p'_m, p''_m are defined by

    pi_{p'}(delta) = m - 1,      pi_{p''}(m - delta') = 1,

p_m = max(p'_m, p''_m), and P_m = 1 + sqrt(m/(m-1)).  The sequence d attached to m
is the lexicographically largest admissible d with pi_{P_m}(delta) <= m - 1;
it is found by a greedy search over the h-parameters.  All comparisons with
P_m are exact in Q(sqrt(m/(m-1))).
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .expand import Alphabet
from .numeric import (
    Interval,
    NoSignChange,
    QuadExt,
    as_fraction,
    bisect,
    float_root,
    identify_quadratic_root,
    interval_max,
    pi_polys,
    poly_root,
    poly_scale,
    poly_sign,
    poly_sub,
    quad,
    rational_bracket,
)
from .words import (
    AdmissibleSeq,
    EventuallyPeriodicWord,
    HSpec,
    Kind,
    Tail,
    block_lengths,
    derived,
    materialize,
)

log = logging.getLogger(__name__)

DEFAULT_TOL = Fraction(1, 10**12)
MAX_DEPTH = 64
MAX_WORD_LENGTH = 4096
H_GUARD = 2**63
M_SOLVER_HI = Fraction(2**16)


class DomainError(ValueError):
    pass


class Membership(enum.Enum):
    YES = "yes"
    NO = "no"
    DEPTH_LIMITED = "depth-limited"


def is_at_least_golden(m: Fraction) -> bool:
    """m >= (1+sqrt5)/2, decided exactly."""
    return m > 0 and m * m - m - 1 >= 0


def check_m(m, allow_small: bool = False) -> Fraction:
    m = as_fraction(m)
    if m >= 2:
        return m
    if allow_small and is_at_least_golden(m):
        log.warning("m = %s < 2: results rely on the extension down to the golden ratio", m)
        return m
    if allow_small:
        raise DomainError(f"m = {m} is below (1+sqrt(5))/2")
    raise DomainError(f"m = {m} is below 2 (pass allow_small for m >= (1+sqrt(5))/2)")


def big_P(m) -> QuadExt | Fraction:
    """P_m = 1 + sqrt(m/(m-1)), exactly."""
    m = as_fraction(m)
    if m <= 1:
        raise DomainError("P_m needs m > 1")
    return quad(1, 1, m / (m - 1))


def delta_of(word: EventuallyPeriodicWord, m) -> EventuallyPeriodicWord:
    """Substitute 1 -> m, 0 -> 1."""
    m = as_fraction(m)
    return word.map(lambda b: m if b == 1 else Fraction(1))


def conjugate_word(word: EventuallyPeriodicWord, m) -> EventuallyPeriodicWord:
    m = as_fraction(m)
    return word.map(lambda c: m - c)


@dataclass(frozen=True)
class DeltaPair:
    delta: EventuallyPeriodicWord
    delta_prime: EventuallyPeriodicWord

    @classmethod
    def of(cls, d: AdmissibleSeq, m) -> "DeltaPair":
        return cls(delta_of(d.word, m), delta_of(derived(d), m))


# ---------------------------------------------------------------------------
# the two defining equations as polynomials in q

def _p_prime_poly(d_word, m):
    """Polynomial with the sign of pi_q(delta) - (m - 1)."""
    N, D = pi_polys(delta_of(d_word, m))
    return poly_sub(N, poly_scale(D, m - 1))


def _p_double_prime_poly(dprime_word, m):
    """Polynomial with the sign of pi_q(m - delta') - 1."""
    N, D = pi_polys(conjugate_word(delta_of(dprime_word, m), m))
    return poly_sub(N, D)


def _pi_float(word, q: float) -> float:
    s = len(word.pre)
    total, scale = 0.0, 1.0
    for c in word.pre:
        scale /= q
        total += scale * float(c)
    per_sum, pscale = 0.0, 1.0
    for c in word.per:
        pscale /= q
        per_sum += pscale * float(c)
    return total + scale * per_sum / (1.0 - pscale)


def _resolvable(d: AdmissibleSeq):
    if d.kind is Kind.INFINITE_PREFIX:
        raise ValueError("d is only known up to a prefix")
    if d.is_one:
        raise ValueError("d = 1^inf is excluded")


def p_prime(d: AdmissibleSeq, m, tol=DEFAULT_TOL, exact: bool = False) -> Interval:
    """The q > 1 with pi_q(delta) = m - 1."""
    _resolvable(d)
    m = as_fraction(m)
    poly = _p_prime_poly(d.word, m)
    # 1/(m-1) <= p' - 1 <= 1 + 1/(m-1)
    lo = 1 + 1 / (2 * (m - 1))
    hi = (2 * m - 1) / (m - 1)
    return poly_root(poly, lo, hi, tol, exact=exact)


def p_double_prime(d: AdmissibleSeq, m, tol=DEFAULT_TOL, exact: bool = False) -> Interval:
    """The q > 1 with pi_q(m - delta') = 1."""
    _resolvable(d)
    m = as_fraction(m)
    poly = _p_double_prime_poly(derived(d), m)
    hi = max(m, Fraction(2))
    lo = Fraction(1) + as_fraction(tol) / 1000
    while poly_sign(poly, lo) <= 0:
        lo = 1 + (lo - 1) / 1000
    return poly_root(poly, lo, hi, tol, exact=exact)


# ---------------------------------------------------------------------------
# greedy search for the admissible sequence attached to m

class _TooLong(Exception):
    pass


class _Search:
    """Suitability tests pi_{P_m}(delta) <= m - 1 at one fixed m."""

    def __init__(self, m: Fraction, max_length: int = MAX_WORD_LENGTH):
        self.m = m
        self.P = big_P(m)
        self.max_length = max_length
        self._cache: dict[HSpec, int] = {}

    def excess_sign(self, spec: HSpec) -> int:
        """Sign of pi_{P_m}(delta) - (m - 1) for the sequence described by ``spec``."""
        if spec in self._cache:
            return self._cache[spec]
        if block_lengths(spec.h)[-1] > self.max_length:
            raise _TooLong(spec)
        s = poly_sign(_p_prime_poly(materialize(spec), self.m), self.P)
        self._cache[spec] = s
        return s

    def suitable(self, spec: HSpec) -> bool:
        return self.excess_sign(spec) <= 0

    def ones(self, h) -> HSpec:
        return HSpec(tuple(h), Tail.ONES_TAIL)

    def maximize_h(self, prefix: tuple[int, ...]) -> int:
        ok = lambda x: self.suitable(self.ones(prefix + (x,)))  # noqa: E731
        lo, hi = 1, 2
        while ok(hi):
            lo, hi = hi, hi * 2
            if hi > H_GUARD:
                raise RuntimeError("h grows without bound: d = 1^inf would be needed")
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ok(mid):
                lo = mid
            else:
                hi = mid
        return lo

    def run(self, max_depth: int) -> AdmissibleSeq:
        first = self.excess_sign(self.ones(()))  # 1 1 1 ... i.e. d = 10^inf
        if first > 0:
            return AdmissibleSeq.zero()
        if first == 0:
            return AdmissibleSeq.ones_tail(())
        h: tuple[int, ...] = ()
        try:
            for _ in range(max_depth):
                h = h + (self.maximize_h(h),)
                if self.suitable(HSpec(h, Tail.PURE_PERIODIC)):
                    return AdmissibleSeq.finite(h)
                if self.excess_sign(self.ones(h)) == 0:
                    return AdmissibleSeq.ones_tail(h)
        except _TooLong:
            log.info("search at m=%s stopped: block length limit reached at h=%s", self.m, h)
        return AdmissibleSeq.prefix(h)


def maximize_h(prefix, m, max_length: int = MAX_WORD_LENGTH) -> int:
    """Largest h_j with h_1..h_{j-1} h_j 1^inf suitable."""
    search = _Search(as_fraction(m), max_length)
    prefix = tuple(prefix)
    if not search.suitable(search.ones(prefix)):
        raise ValueError(f"{prefix} followed by 1^inf is not suitable at m = {m}")
    return search.maximize_h(prefix)


def suitability_sign(d: AdmissibleSeq, m) -> int:
    """Sign of pi_{P_m}(delta) - (m - 1)."""
    _resolvable(d)
    m = as_fraction(m)
    return poly_sign(_p_prime_poly(d.word, m), big_P(m))


def sequence_for_m(m, max_depth: int = MAX_DEPTH, allow_small: bool = False,
                   max_length: int = MAX_WORD_LENGTH) -> AdmissibleSeq:
    """Lexicographically largest admissible d with pi_{P_m}(delta) <= m - 1."""
    m = check_m(m, allow_small)
    return _Search(m, max_length).run(max_depth)


# ---------------------------------------------------------------------------
# component intervals

def _sign_p_prime_minus_P(d_word, m: Fraction) -> int:
    # p' > P  <=>  pi_P(delta) > m - 1, since pi_q(delta) decreases in q
    return poly_sign(_p_prime_poly(d_word, m), big_P(m))


def _sign_p_double_prime_minus_P(dprime_word, m: Fraction) -> int:
    return poly_sign(_p_double_prime_poly(dprime_word, m), big_P(m))


def _compare_p_prime_p_double_prime(d: AdmissibleSeq, m: Fraction) -> int:
    """Exact sign of p'_m - p''_m, by bracketing p'' ever more tightly."""
    poly_a = _p_prime_poly(d.word, m)
    for digits in (20, 60, 200):
        b = p_double_prime(d, m, Fraction(1, 10**digits))
        if b.is_exact:
            return poly_sign(poly_a, b.exact)
        s_lo, s_hi = poly_sign(poly_a, b.lo), poly_sign(poly_a, b.hi)
        # p' > q  <=>  pi_q(delta) > m - 1
        if s_lo > 0 and s_hi > 0:
            return 1
        if s_lo < 0 and s_hi < 0:
            return -1
    found = identify_quadratic_root(_p_double_prime_poly(derived(d), m), b)
    if found is not None:
        return poly_sign(poly_a, found)
    log.warning("p' and p'' agree to 200 digits at m=%s without an exact form; treating as equal", m)
    return 0


def _float_m_functions(d: AdmissibleSeq):
    dw, dpw = d.word, None if d.kind is Kind.INFINITE_PREFIX else derived(d)

    def P(m):
        return 1.0 + math.sqrt(m / (m - 1.0))

    def f_low(m):
        return _pi_float(delta_of(dw, Fraction(m)), P(m)) - (m - 1.0)

    def f_high(m):
        delta_prime = delta_of(dpw, Fraction(m))
        return _pi_float(conjugate_word(delta_prime, Fraction(m)), P(m)) - 1.0

    return f_low, f_high


def _solve_in_m(sign, tol, float_fn=None) -> Interval:
    lo, hi = Fraction(3, 2), M_SOLVER_HI
    s_lo = sign(lo)
    while sign(hi) == s_lo:
        hi *= 2
        if hi > 2**64:
            raise NoSignChange("no sign change in m")
    guess = float_root(float_fn, float(lo), float(min(hi, 2**40))) if float_fn else None
    return bisect(sign, lo, hi, tol, guess)


def m_lower(d: AdmissibleSeq, tol=DEFAULT_TOL) -> Interval:
    """m_d: the zero of m -> p'_m - P_m."""
    _resolvable(d)
    f_low, _ = _float_m_functions(d)
    return _solve_in_m(lambda m: _sign_p_prime_minus_P(d.word, m), tol, f_low)


def m_upper(d: AdmissibleSeq, tol=DEFAULT_TOL) -> Interval:
    """M_d: the zero of m -> p''_m - P_m."""
    _resolvable(d)
    _, f_high = _float_m_functions(d)
    dpw = derived(d)
    return _solve_in_m(lambda m: _sign_p_double_prime_minus_P(dpw, m), tol, f_high)


def m_middle(d: AdmissibleSeq, tol=DEFAULT_TOL) -> Interval:
    """mu_d: the zero of m -> p'_m - p''_m."""
    _resolvable(d)
    dw, dpw = d.word, derived(d)

    def f_mid(m):
        fm = Fraction(m)
        delta, conj = delta_of(dw, fm), conjugate_word(delta_of(dpw, fm), fm)
        a = float_root(lambda q: _pi_float(delta, q) - (m - 1.0), 1.0 + 1.0 / (2.0 * (m - 1.0)), (2.0 * m - 1.0) / (m - 1.0))
        b = float_root(lambda q: _pi_float(conj, q) - 1.0, 1.0 + 1e-12, max(m, 2.0))
        return math.nan if a is None or b is None else a - b

    return _solve_in_m(lambda m: _compare_p_prime_p_double_prime(d, m), tol, f_mid)


@dataclass(frozen=True)
class ComponentInterval:
    d: AdmissibleSeq
    m_d: Interval
    mu_d: Interval
    M_d: Interval

    def contains(self, m) -> bool:
        return in_component(self.d, m)


def in_component(d: AdmissibleSeq, m) -> bool:
    """m in [m_d, M_d), decided exactly without locating the end points."""
    _resolvable(d)
    m = as_fraction(m)
    return _sign_p_prime_minus_P(d.word, m) <= 0 and _sign_p_double_prime_minus_P(derived(d), m) < 0


def component_interval(d: AdmissibleSeq, tol=DEFAULT_TOL, with_mu: bool = True) -> ComponentInterval:
    _resolvable(d)
    lo = m_lower(d, tol)
    if d.kind is Kind.INFINITE_RESOLVED:  # the component collapses to a point of C
        return ComponentInterval(d, lo, lo, lo)
    hi = m_upper(d, tol)
    mu = m_middle(d, tol) if with_mu else None
    return ComponentInterval(d, lo, mu, hi)


# ---------------------------------------------------------------------------
# p_m and Cantor membership

class Status(enum.Enum):
    RESOLVED = "resolved"
    DEPTH_LIMITED = "depth-limited"


@dataclass
class CriticalResult:
    m: Fraction
    d: AdmissibleSeq
    p_prime: Interval | None
    p_double_prime: Interval | None
    p: Interval
    P: QuadExt | Fraction
    in_C: Membership
    status: Status
    small_m: bool = False
    bracket: Interval | None = None       # enclosure of m's component when depth-limited
    notes: list[str] = field(default_factory=list)

    @property
    def delta_prime(self) -> EventuallyPeriodicWord:
        return delta_of(derived(self.d), self.m)

    @property
    def p_is_two(self) -> bool:
        return self.p.is_exact and self.p.exact == 2


def _membership(d: AdmissibleSeq, m: Fraction) -> Membership:
    if d.kind is Kind.INFINITE_PREFIX:
        return Membership.DEPTH_LIMITED
    if d.kind is Kind.INFINITE_RESOLVED:
        return Membership.YES
    # m is in [m_d, M_d); it lies in C only at the left end point m = m_d
    if suitability_sign(d, m) == 0:
        return Membership.YES
    return Membership.NO


def p_m(m, tol=DEFAULT_TOL, max_depth: int = MAX_DEPTH, allow_small: bool = False,
        exact: bool = False, max_length: int = MAX_WORD_LENGTH) -> CriticalResult:
    """Critical base of {0, 1, m}."""
    m = check_m(m, allow_small)
    d = _Search(m, max_length).run(max_depth)
    P = big_P(m)
    P_lo, P_hi = rational_bracket(P, Fraction(1, 10**30)) if isinstance(P, QuadExt) else (P, P)
    if d.kind is Kind.INFINITE_PREFIX:
        lower = AdmissibleSeq.ones_tail(d.h)
        known = p_prime(lower, m, tol)
        p = Interval(min(max(Fraction(2), known.lo), P_lo), P_hi)
        try:
            bracket = Interval(m_lower(lower, tol).lo, m_lower(AdmissibleSeq.finite(d.h), tol).hi)
        except NoSignChange:  # pragma: no cover
            bracket = None
        return CriticalResult(m, d, None, None, p, P, Membership.DEPTH_LIMITED, Status.DEPTH_LIMITED,
                              small_m=m < 2, bracket=bracket,
                              notes=[f"search stopped after h={d.h}"])
    a = p_prime(d, m, tol, exact)
    b = p_double_prime(d, m, tol, exact)
    if d.kind is Kind.INFINITE_RESOLVED:
        p = Interval(P_lo, P_hi, P)
    else:
        p = interval_max(a, b)
    return CriticalResult(m, d, a, b, p, P, _membership(d, m), Status.RESOLVED, small_m=m < 2)


def in_cantor(m, max_depth: int = MAX_DEPTH, max_length: int = MAX_WORD_LENGTH) -> Membership:
    m = check_m(m)
    return _membership(_Search(m, max_length).run(max_depth), m)


def normalize_ternary(A: Alphabet) -> Fraction:
    """m such that A is equivalent to {0, 1, m} under translation, scaling and conjugation."""
    if A.J != 3:
        raise ValueError("a ternary alphabet is required")
    a1, a2, a3 = A.digits
    m = max((a3 - a1) / (a2 - a1), (a3 - a1) / (a3 - a2))
    assert m >= 2
    return m


def ternary_G(A: Alphabet, tol=DEFAULT_TOL, max_depth: int = MAX_DEPTH, exact: bool = False) -> CriticalResult:
    """Generalized golden ratio of a three-letter alphabet."""
    return p_m(normalize_ternary(A), tol, max_depth, exact=exact)


# ---------------------------------------------------------------------------
# tables and curves

def table(m_lo: int, m_hi: int, tol=DEFAULT_TOL, max_depth: int = MAX_DEPTH) -> list[CriticalResult]:
    if not (2 <= m_lo <= m_hi):
        raise ValueError("need 2 <= m_lo <= m_hi")
    return [p_m(m, tol, max_depth) for m in range(m_lo, m_hi + 1)]


def curve(m_lo, m_hi, step, tol=DEFAULT_TOL, max_depth: int = MAX_DEPTH, allow_small: bool = False) -> list[CriticalResult]:
    m_lo, m_hi, step = as_fraction(m_lo), as_fraction(m_hi), as_fraction(step)
    if step <= 0:
        raise ValueError("step must be positive")
    out = []
    m = m_lo
    while m <= m_hi:
        out.append(p_m(m, tol, max_depth, allow_small=allow_small))
        m += step
    return out
