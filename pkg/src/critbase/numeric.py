"""Exact arithmetic in real quadratic fields and validated monotone root finding.

Values are either :class:`fractions.Fraction` or :class:`QuadExt` (``a + b*sqrt(r)``
with ``r`` a squarefree integer).  Every sign decision is exact.  Polynomials
are plain lists of coefficients in ascending degree; :func:`poly_sign`
evaluates their sign at a rational or quadratic point with integer-only
arithmetic, which is what the hot loops of the solvers use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import mpmath
from scipy.optimize import brentq


class NoSignChange(ValueError):
    """Raised by :func:`bisect` when the bracket does not straddle a zero."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} to an exact rational")


_TRIAL_LIMIT = 5000


@lru_cache(maxsize=4096)
def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (k, s) with n = k*k*s and s not a perfect square.

    s is squarefree whenever n has no repeated prime factor above the
    trial-division limit; sign tests only need s to be a non-square.
    """
    if n <= 0:
        raise ValueError("radicand must be positive")
    k, s = 1, 1
    p = 2
    # trial division up to the cube root leaves at most two prime factors
    while p * p * p <= n and p < _TRIAL_LIMIT:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            s *= p
        p += 1 if p == 2 else 2
    r = math.isqrt(n)
    if r * r == n:
        k *= r
    else:
        s *= n
    return k, s


class QuadExt:
    """The real number ``a + b*sqrt(r)`` with rational ``a``, ``b`` and squarefree ``r > 1``.

    Use :func:`quad` to build values; it collapses to a ``Fraction`` when the
    radical part vanishes.
    """

    __slots__ = ("a", "b", "r")

    def __init__(self, a: Fraction, b: Fraction, r: int):
        self.a = a
        self.b = b
        self.r = r

    # -- construction helpers -------------------------------------------------
    def _lift(self, other):
        if isinstance(other, QuadExt):
            if other.r != self.r:
                raise ValueError(f"mixed radicals sqrt({self.r}) and sqrt({other.r})")
            return other.a, other.b
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return _make(self.a + o[0], self.b + o[1], self.r)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.r)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return _make(self.a - o[0], self.b - o[1], self.r)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return _make(o[0] - self.a, o[1] - self.b, self.r)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        c, d = o
        return _make(self.a * c + self.b * d * self.r, self.a * d + self.b * c, self.r)

    __rmul__ = __mul__

    def inverse(self):
        norm = self.a * self.a - self.b * self.b * self.r
        # norm != 0 because r is not a rational square
        return _make(self.a / norm, -self.b / norm, self.r)

    def __truediv__(self, other):
        if isinstance(other, QuadExt):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            return _make(self.a / other, self.b / other, self.r)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * Fraction(other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result: QuadExt | Fraction = Fraction(1)
        base = self
        while n:
            if n & 1:
                result = base * result
            base = base * base
            n >>= 1
        return result

    # -- order ----------------------------------------------------------------
    def sign(self) -> int:
        return quad_sign(self)

    def _cmp(self, other) -> int:
        diff = self - other
        return diff.sign() if isinstance(diff, QuadExt) else (diff > 0) - (diff < 0)

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return (self.a, self.b, self.r) == (other.a, other.b, other.r)
        return False  # a canonical QuadExt is irrational

    def __hash__(self):
        return hash((self.a, self.b, self.r))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.r)

    def to_mpf(self):
        return mpmath.mpf(self.a.numerator) / self.a.denominator + (
            mpmath.mpf(self.b.numerator) / self.b.denominator
        ) * mpmath.sqrt(self.r)

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, {self.r})"

    def __str__(self):
        return render_exact(self)


def _make(a: Fraction, b: Fraction, r: int):
    if b == 0:
        return a
    return QuadExt(a, b, r)


def quad(a, b, r):
    """``a + b*sqrt(r)`` for rationals a, b and r > 0, in canonical form."""
    a, b, r = as_fraction(a), as_fraction(b), as_fraction(r)
    if r <= 0:
        raise ValueError("radicand must be positive")
    if b == 0:
        return a
    # sqrt(p/q) = sqrt(p*q)/q
    k, s = _squarefree_split(r.numerator * r.denominator)
    b = b * k / r.denominator
    if s == 1:
        return a + b
    return QuadExt(a, b, s)


def quad_sign(x) -> int:
    """Exact sign (-1, 0, 1) of a rational or of ``a + b*sqrt(r)``."""
    if not isinstance(x, QuadExt):
        return (x > 0) - (x < 0)
    sa = (x.a > 0) - (x.a < 0)
    sb = (x.b > 0) - (x.b < 0)
    if sa >= 0 and sb >= 0:
        return 1 if (sa or sb) else 0
    if sa <= 0 and sb <= 0:
        return -1
    # opposite signs: compare a^2 with b^2 r
    lhs = x.a * x.a
    rhs = x.b * x.b * x.r
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


def sqrt_of(r):
    return quad(0, 1, r)


def render_exact(x) -> str:
    """Symbolic rendering such as ``(3+sqrt(33))/4`` or ``1+sqrt(2)``."""
    if not isinstance(x, QuadExt):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    den = math.lcm(x.a.denominator, x.b.denominator)
    A = int(x.a * den)
    B = int(x.b * den)
    rad = f"sqrt({x.r})" if abs(B) == 1 else f"{abs(B)}*sqrt({x.r})"
    if A == 0:
        body = rad if B > 0 else "-" + rad
    else:
        body = f"{A}{'+' if B > 0 else '-'}{rad}"
    if den == 1:
        return body
    return f"({body})/{den}"


def to_float(x) -> float:
    if isinstance(x, Interval):
        return float(x.mid)
    return float(x)


# ---------------------------------------------------------------------------
# polynomials (ascending coefficient lists over Fraction)

def poly_trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(p, q):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def poly_scale(p, c):
    return [c * a for a in p]


def poly_sub(p, q):
    return poly_add(p, poly_scale(q, -1))


def poly_mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_shift(p, k: int):
    """Multiply by q**k."""
    return [Fraction(0)] * k + list(p)


def _integer_coeffs(p) -> list[int]:
    p = poly_trim(p)
    if not p:
        return []
    den = 1
    for c in p:
        den = math.lcm(den, Fraction(c).denominator)
    return [int(Fraction(c) * den) for c in p]


def poly_sign(p, x) -> int:
    """Exact sign of the polynomial ``p`` at a rational or quadratic point ``x``."""
    c = _integer_coeffs(p)
    if not c:
        return 0
    deg = len(c) - 1
    if isinstance(x, QuadExt):
        # x = (A + B sqrt(R)) / C, C > 0; evaluate C**deg * p(x) in Z[sqrt R]
        C = math.lcm(x.a.denominator, x.b.denominator)
        A = int(x.a * C)
        B = int(x.b * C)
        R = x.r
        X, Y = c[deg], 0
        cp = 1
        for k in range(deg - 1, -1, -1):
            cp *= C
            X, Y = X * A + Y * B * R + c[k] * cp, X * B + Y * A
        return quad_sign(QuadExt(Fraction(X), Fraction(Y), R)) if Y else (X > 0) - (X < 0)
    x = Fraction(x)
    u, v = x.numerator, x.denominator
    acc = c[deg]
    vp = 1
    for k in range(deg - 1, -1, -1):
        vp *= v
        acc = acc * u + c[k] * vp
    return (acc > 0) - (acc < 0)


def poly_eval(p, x):
    """Exact value of ``p`` at ``x`` (Fraction or QuadExt)."""
    acc = Fraction(0)
    for a in reversed(poly_trim(p)):
        acc = acc * x + a
    return acc


def poly_float_scaled(p, x: float) -> float:
    """``p(x) / x**deg`` in floating point; finite for x > 1 at any degree."""
    p = poly_trim(p)
    if not p:
        return 0.0
    inv = 1.0 / x
    acc = 0.0
    for a in p:  # ascending: a_0 ends up multiplied by x**-deg
        acc = acc * inv + float(a)
    return acc


# ---------------------------------------------------------------------------
# intervals and bisection

@dataclass(frozen=True)
class Interval:
    """Closed rational interval ``[lo, hi]``; ``exact`` holds the value when it is known exactly."""

    lo: Fraction
    hi: Fraction
    exact: object = None

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x):
        if isinstance(x, QuadExt):
            lo, hi = rational_bracket(x, Fraction(1, 10**30))
            return cls(lo, hi, x)
        x = Fraction(x)
        return cls(x, x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def __float__(self):
        if self.exact is not None:
            return float(self.exact)
        return float(self.mid)

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __repr__(self):
        if self.exact is not None:
            return f"Interval(exact={render_exact(self.exact)})"
        return f"Interval({float(self.lo):.15g}, {float(self.hi):.15g})"


def interval_max(u: Interval, v: Interval) -> Interval:
    """Enclosure of max of two enclosed values."""
    if u.is_exact and v.is_exact:
        return u if u.exact >= v.exact else v
    if u.lo > v.hi:
        return u
    if v.lo > u.hi:
        return v
    return Interval(max(u.lo, v.lo), max(u.hi, v.hi))


def rational_bracket(x: QuadExt, tol: Fraction) -> tuple[Fraction, Fraction]:
    """Rational lo < x < hi with hi - lo <= tol."""
    f = Fraction(float(x))
    step = max(tol, abs(f) * Fraction(1, 2**40) + Fraction(1, 2**60))
    lo, hi = f - step, f + step
    while not (lo < x):
        step *= 2
        lo = f - step
    while not (x < hi):
        step *= 2
        hi = f + step
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if mid < x:
            lo = mid
        else:
            hi = mid
    return lo, hi


def simplest_rational(lo: Fraction, hi: Fraction, max_den: int = 10**6) -> Fraction | None:
    cand = ((lo + hi) / 2).limit_denominator(max_den)
    if lo <= cand <= hi:
        return cand
    return None


def bisect(sign, lo, hi, tol, guess: float | None = None) -> Interval:
    """Bracket the unique zero of a monotone function known through its exact sign.

    ``sign(x)`` must return -1, 0 or 1 for rational ``x``.  The returned interval
    has width <= tol and both endpoints keep the signs of the original bracket
    ends.  If a zero is hit exactly (or a small-denominator rational in the final
    interval is verified to be a zero) it is stored in ``exact``.  ``guess`` is a
    floating-point estimate; it is only used after an exact bracket check.
    """
    lo, hi, tol = as_fraction(lo), as_fraction(hi), as_fraction(tol)
    s_lo, s_hi = sign(lo), sign(hi)
    if s_lo == 0:
        return Interval(lo, lo, lo)
    if s_hi == 0:
        return Interval(hi, hi, hi)
    if s_lo == s_hi:
        raise NoSignChange(f"no sign change on [{float(lo)}, {float(hi)}]")
    if guess is not None and math.isfinite(guess) and float(lo) < guess < float(hi):
        g = Fraction(guess)
        # a tol-wide bracket first; when tol is below float accuracy, a float-wide one
        for rad in dict.fromkeys((tol / 4, max(tol / 4, abs(g) * Fraction(1, 2**44)))):
            a = max(lo, g - rad)
            b = min(hi, g + rad)
            sa = sign(a)
            if sa == 0:
                return Interval(a, a, a)
            sb = sign(b)
            if sb == 0:
                return Interval(b, b, b)
            if sa == s_lo and sb == s_hi:
                lo, hi = a, b
                break
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s = sign(mid)
        if s == 0:
            return Interval(mid, mid, mid)
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    cand = simplest_rational(lo, hi)
    if cand is not None and sign(cand) == 0:
        return Interval.point(cand)
    return Interval(lo, hi)


def float_root(f, lo: float, hi: float) -> float | None:
    """Floating-point root of ``f`` on [lo, hi], or None if brentq cannot be applied."""
    try:
        flo, fhi = f(lo), f(hi)
        if not (math.isfinite(flo) and math.isfinite(fhi)) or flo * fhi > 0:
            return None
        return brentq(f, lo, hi, xtol=1e-15, rtol=4 * 2.0**-52, maxiter=200)
    except (ValueError, OverflowError, ZeroDivisionError, RuntimeError):
        return None


def poly_root(p, lo, hi, tol, *, exact: bool = False) -> Interval:
    """Isolate the zero of ``p`` on a bracket where ``p`` changes sign exactly once.

    With ``exact=True`` a quadratic closed form is searched for (integer relation
    on a high-precision approximation) and accepted only if it is verified to be
    an exact zero.
    """
    lo, hi = as_fraction(lo), as_fraction(hi)
    guess = float_root(lambda x: poly_float_scaled(p, x), float(lo), float(hi)) if lo > 0 else None
    iv = bisect(lambda x: poly_sign(p, x), lo, hi, tol, guess)
    if exact and not iv.is_exact:
        found = identify_quadratic_root(p, iv)
        if found is not None:
            return Interval.point(found)
    return iv


def identify_quadratic_root(p, iv: Interval, digits: int = 60):
    """Try to recognise the zero of ``p`` inside ``iv`` as a rational or quadratic irrational."""
    sign = lambda x: poly_sign(p, x)  # noqa: E731
    fine = bisect(sign, iv.lo, iv.hi, Fraction(1, 10**digits))
    if fine.is_exact:
        return fine.exact
    with mpmath.workdps(digits):
        x = mpmath.mpf(fine.mid.numerator) / fine.mid.denominator
        rel = mpmath.findpoly(x, 2, maxcoeff=10**6)
    if not rel:
        return None
    rel = [int(c) for c in rel]
    if len(rel) == 2:
        cands = [Fraction(-rel[1], rel[0])]
    else:
        a, b, c = rel
        disc = b * b - 4 * a * c
        if disc < 0:
            return None
        cands = [quad(Fraction(-b, 2 * a), Fraction(s, 2 * a), disc) for s in (1, -1)]
    for cand in cands:
        if fine.lo <= cand <= fine.hi and poly_sign(p, cand) == 0:
            return cand
    return None


# ---------------------------------------------------------------------------
# pi_q of eventually periodic words

def pi_polys(w):
    """Polynomials (N, D) in q with pi_q(w) = N(q) / D(q) and D > 0 for q > 1.

    With preperiod u (length s) and period v (length t):
    N = U(q) (q^t - 1) + V(q),  D = q^s (q^t - 1),
    where U, V are the digit strings read as base-q integers.
    """
    pre, per = tuple(w.pre), tuple(w.per)
    s, t = len(pre), len(per)
    U = [Fraction(pre[s - 1 - k]) for k in range(s)]  # ascending
    V = [Fraction(per[t - 1 - k]) for k in range(t)]
    qt_minus_1 = [Fraction(-1)] + [Fraction(0)] * (t - 1) + [Fraction(1)]
    N = poly_add(poly_mul(U, qt_minus_1), V)
    D = poly_shift(qt_minus_1, s)
    return N, D


def eval_pi_closed(w, q):
    """Exact value of sum_i w_i q^-i for an eventually periodic word ``w`` and q > 1."""
    if not q > 1:
        raise ValueError("base must exceed 1")
    if not isinstance(q, QuadExt):
        q = as_fraction(q)
    total = Fraction(0)
    qinv = 1 / q
    scale = Fraction(1)
    for c in w.pre:
        scale = scale * qinv
        total = total + scale * c
    period_sum = Fraction(0)
    pscale = Fraction(1)
    for c in w.per:
        pscale = pscale * qinv
        period_sum = period_sum + pscale * c
    return total + scale * period_sum / (1 - pscale)


def eval_pi_truncated(w, q, n_terms: int):
    """Partial sum of the first ``n_terms`` digits (used as an independent check)."""
    q = as_fraction(q) if not isinstance(q, QuadExt) else q
    total = Fraction(0)
    scale = Fraction(1)
    for i in range(n_terms):
        scale = scale / q
        total = total + scale * w[i]
    return total
