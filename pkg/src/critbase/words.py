"""Eventually periodic words, the recursive blocks S_h(j, .) and admissible sequences.

A binary sequence ``d`` is admissible when ``0 d2 d3 ... <= shift^n(d) <= d`` for
every ``n``.  Apart from ``0^inf`` every admissible sequence is described by a
sequence of positive integers ``h`` through the blocks

    S(0,1) = 1,  S(0,0) = 0,
    S(j,1) = S(j-1,1)^h_j S(j-1,0),
    S(j,0) = S(j-1,1)^(h_j - 1) S(j-1,0).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence


# ---------------------------------------------------------------------------
# eventually periodic words

def _primitive_root(per: tuple) -> tuple:
    n = len(per)
    for t in range(1, n + 1):
        if n % t == 0 and per[:t] * (n // t) == per:
            return per[:t]
    return per


@dataclass(frozen=True)
class EventuallyPeriodicWord:
    """The infinite word ``pre · per per per ...`` in normalized form.

    Normalization makes ``per`` primitive and ``pre`` as short as possible, so
    two instances are equal iff they denote the same infinite word.
    """

    pre: tuple
    per: tuple

    def __init__(self, pre: Iterable = (), per: Iterable = (0,)):
        pre, per = tuple(pre), tuple(per)
        if not per:
            raise ValueError("period must be nonempty")
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            per = (pre[-1],) + per[:-1]
            pre = pre[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)

    @classmethod
    def parse(cls, text: str) -> "EventuallyPeriodicWord":
        """Parse ``"110(10)"``-style notation with single-character digits."""
        text = text.replace(" ", "")
        if "(" in text:
            head, _, rest = text.partition("(")
            body = rest.rstrip(")")
        else:
            head, body = "", text
        return cls(tuple(int(ch) for ch in head), tuple(int(ch) for ch in body))

    def __getitem__(self, i: int):
        """Digit at 0-based position ``i``."""
        s = len(self.pre)
        if i < s:
            return self.pre[i]
        return self.per[(i - s) % len(self.per)]

    def prefix(self, n: int) -> tuple:
        s = len(self.pre)
        if n <= s:
            return self.pre[:n]
        t = len(self.per)
        k = n - s
        return self.pre + self.per * (k // t) + self.per[: k % t]

    def shift(self, n: int = 1) -> "EventuallyPeriodicWord":
        s = len(self.pre)
        if n <= s:
            return EventuallyPeriodicWord(self.pre[n:], self.per)
        k = (n - s) % len(self.per)
        return EventuallyPeriodicWord((), self.per[k:] + self.per[:k])

    def prepend(self, block: Sequence) -> "EventuallyPeriodicWord":
        return EventuallyPeriodicWord(tuple(block) + self.pre, self.per)

    def map(self, f: Callable) -> "EventuallyPeriodicWord":
        """Digitwise substitution."""
        return EventuallyPeriodicWord(tuple(map(f, self.pre)), tuple(map(f, self.per)))

    def substitute(self, table: dict) -> "EventuallyPeriodicWord":
        return self.map(table.__getitem__)

    @property
    def n_tails(self) -> int:
        """Number of distinct shifts (including the word itself)."""
        return len(self.pre) + len(self.per)

    def tails(self) -> Iterator[tuple[int, "EventuallyPeriodicWord"]]:
        """Yield ``(n, shift^n(w))`` for n = 0 .. n_tails - 1; later shifts repeat these."""
        for n in range(self.n_tails):
            yield n, self.shift(n)

    def digits(self) -> set:
        return set(self.pre) | set(self.per)

    def is_constant(self) -> bool:
        return not self.pre and len(self.per) == 1

    def __str__(self):
        def fmt(block):
            if all(isinstance(c, int) and 0 <= c <= 9 for c in block):
                return "".join(map(str, block))
            return ",".join(map(str, block))

        return f"{fmt(self.pre)}({fmt(self.per)})"

    def __repr__(self):
        return f"EventuallyPeriodicWord({str(self)!r})"


EPW = EventuallyPeriodicWord


def constant(digit) -> EventuallyPeriodicWord:
    return EventuallyPeriodicWord((), (digit,))


def compare_window(u: EventuallyPeriodicWord, v: EventuallyPeriodicWord) -> int:
    """Prefix length after which two eventually periodic words agree forever if they agree so far."""
    return max(len(u.pre), len(v.pre)) + math.lcm(len(u.per), len(v.per)) + 1


def compare(u: EventuallyPeriodicWord, v: EventuallyPeriodicWord) -> int:
    """Lexicographic comparison: -1, 0 or 1."""
    if u == v:
        return 0
    n = compare_window(u, v)
    a, b = u.prefix(n), v.prefix(n)
    return -1 if a < b else 1


# ---------------------------------------------------------------------------
# blocks S_h(j, bit)

def build_block(h: Sequence[int], j: int, bit: int) -> tuple:
    """The block S_h(j, bit) as a tuple of 0/1."""
    if j < 0 or j > len(h):
        raise ValueError(f"block index j={j} needs h_1..h_j but only {len(h)} entries given")
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    one, zero = (1,), (0,)
    for i in range(j):
        hi = h[i]
        if hi < 1:
            raise ValueError("h entries must be positive integers")
        one, zero = one * hi + zero, one * (hi - 1) + zero
    return one if bit else zero


def block_lengths(h: Sequence[int]) -> list[int]:
    """[l_0, l_1, ..., l_N] where l_j = |S(j,1)|."""
    ell = [1]
    zero_len = 1
    for hj in h:
        one_len = ell[-1]
        ell.append(hj * one_len + zero_len)
        zero_len = (hj - 1) * one_len + zero_len
    return ell


def bits(block: Iterable[int]) -> str:
    return "".join(map(str, block))


# ---------------------------------------------------------------------------
# parameterization of admissible sequences

class Tail(enum.Enum):
    PURE_PERIODIC = "pure-periodic"   # d = S(N,1)^inf
    ONES_TAIL = "ones-tail"           # h_1..h_N 1 1 1 ...: d = S(N,1) S(N,0)^inf
    PREFIX = "prefix"                 # d only known to begin with S(N,1)


@dataclass(frozen=True)
class HSpec:
    h: tuple[int, ...]
    tail: Tail

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(int(x) for x in self.h))
        if any(x < 1 for x in self.h):
            raise ValueError("h entries must be positive integers")

    @property
    def N(self) -> int:
        return len(self.h)

    def canonical(self) -> "HSpec":
        """Drop trailing 1s from a ones-tail spec (they do not change the sequence)."""
        if self.tail is not Tail.ONES_TAIL:
            return self
        h = self.h
        while h and h[-1] == 1:
            h = h[:-1]
        return HSpec(h, self.tail)

    def __str__(self):
        body = ",".join(map(str, self.h))
        suffix = {Tail.PURE_PERIODIC: "", Tail.ONES_TAIL: ";1^inf", Tail.PREFIX: ";..."}[self.tail]
        return f"({body}{suffix})"


def materialize(spec: HSpec) -> EventuallyPeriodicWord:
    if spec.tail is Tail.PURE_PERIODIC:
        return EventuallyPeriodicWord((), build_block(spec.h, spec.N, 1))
    if spec.tail is Tail.ONES_TAIL:
        return EventuallyPeriodicWord(build_block(spec.h, spec.N, 1), build_block(spec.h, spec.N, 0))
    raise ValueError("a prefix-only spec has no closed form")


class Kind(enum.Enum):
    ZERO = "zero"
    FINITE = "finite"
    INFINITE_RESOLVED = "infinite"
    INFINITE_PREFIX = "infinite-prefix"


@dataclass(frozen=True)
class AdmissibleSeq:
    kind: Kind
    spec: HSpec | None = None
    word: EventuallyPeriodicWord | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.word is None and self.kind is not Kind.INFINITE_PREFIX:
            w = constant(0) if self.kind is Kind.ZERO else materialize(self.spec)
            object.__setattr__(self, "word", w)

    @classmethod
    def zero(cls) -> "AdmissibleSeq":
        return cls(Kind.ZERO)

    @classmethod
    def finite(cls, h: Sequence[int]) -> "AdmissibleSeq":
        return cls(Kind.FINITE, HSpec(tuple(h), Tail.PURE_PERIODIC))

    @classmethod
    def ones_tail(cls, h: Sequence[int]) -> "AdmissibleSeq":
        return cls(Kind.INFINITE_RESOLVED, HSpec(tuple(h), Tail.ONES_TAIL).canonical())

    @classmethod
    def prefix(cls, h: Sequence[int]) -> "AdmissibleSeq":
        return cls(Kind.INFINITE_PREFIX, HSpec(tuple(h), Tail.PREFIX))

    @property
    def h(self) -> tuple[int, ...]:
        return self.spec.h if self.spec else ()

    @property
    def N(self) -> int:
        return len(self.h)

    @property
    def is_one(self) -> bool:
        """True for d = 1^inf."""
        return self.kind is Kind.FINITE and self.N == 0

    @property
    def is_finite_type(self) -> bool:
        return self.kind is Kind.FINITE

    def label(self) -> str:
        if self.kind is Kind.ZERO:
            return "0^inf"
        if self.word is None:
            return f"S{self.spec}..."
        return str(self.word)

    def __str__(self):
        return self.label()


# ---------------------------------------------------------------------------
# admissibility and classification

def _is_binary(w: EventuallyPeriodicWord) -> bool:
    return w.digits() <= {0, 1}


def is_admissible(w: EventuallyPeriodicWord) -> bool:
    """Exact test of ``0 d2 d3 ... <= shift^n(d) <= d`` for all n >= 0."""
    if not _is_binary(w):
        return False
    lower = w.shift(1).prepend((0,))
    for _, tail in w.tails():
        if compare(tail, w) > 0 or compare(tail, lower) < 0:
            return False
    return True


class ClassifyError(RuntimeError):
    pass


def _renormalize(w: EventuallyPeriodicWord, h: int) -> EventuallyPeriodicWord:
    """Read ``w`` as blocks 1^h 0 (-> 1) and 1^(h-1) 0 (-> 0)."""
    if 0 not in w.per:
        raise ClassifyError("word ends in 1^inf but is not 1^inf: not admissible")
    k = w.per.index(0)
    pre = w.pre + w.per[: k + 1]
    per = w.per[k + 1:] + w.per[: k + 1]

    def tokens(block):
        out, run = [], 0
        for c in block:
            if c == 1:
                run += 1
                continue
            if run == h:
                out.append(1)
            elif run == h - 1:
                out.append(0)
            else:
                raise ClassifyError(f"run of {run} ones does not fit h={h}: not admissible")
            run = 0
        return tuple(out)

    return EventuallyPeriodicWord(tokens(pre), tokens(per))


ONE = constant(1)
ZERO = constant(0)
ONE_ZERO = EventuallyPeriodicWord((1,), (0,))


def classify(w: EventuallyPeriodicWord, max_depth: int = 64) -> AdmissibleSeq:
    """Recover the h-parameters of an admissible eventually periodic word.

    Each level reads the current word as a sequence of blocks S(j,1), S(j,0); the
    count of leading S(j,1) blocks is h_{j+1}.  Stops at 1^inf (finite type) or
    at 10^inf (all further h are 1).
    """
    if w == ZERO:
        return AdmissibleSeq(Kind.ZERO, word=w)
    if w[0] != 1:
        raise ClassifyError("admissible words other than 0^inf start with 1")
    h: list[int] = []
    cur = w
    for _ in range(max_depth + 1):
        if cur == ONE:
            return AdmissibleSeq(Kind.FINITE, HSpec(tuple(h), Tail.PURE_PERIODIC), word=w)
        if cur == ONE_ZERO:
            return AdmissibleSeq(Kind.INFINITE_RESOLVED, HSpec(tuple(h), Tail.ONES_TAIL), word=w)
        run = 0
        while cur[run] == 1:
            run += 1
        h.append(run)
        cur = _renormalize(cur, run)
    raise ClassifyError(f"classification did not terminate within {max_depth} levels")


# ---------------------------------------------------------------------------
# derived sequence and successor

def derived(d: AdmissibleSeq) -> EventuallyPeriodicWord:
    """The sequence d' used to define delta'."""
    if d.kind is Kind.INFINITE_PREFIX:
        raise ValueError("derived sequence needs a fully resolved d")
    if d.is_one:
        raise ValueError("d = 1^inf has no derived sequence")
    if d.kind is Kind.FINITE:
        ell = block_lengths(d.h)
        return d.word.shift(1 + ell[-1] - ell[-2])
    return d.word.shift(1)


def successor(d: AdmissibleSeq) -> AdmissibleSeq:
    """Smallest admissible sequence strictly above a finite-type d."""
    if d.kind is not Kind.FINITE:
        raise ValueError("successor is defined for finite-type sequences")
    if d.is_one:
        raise ValueError("d = 1^inf has no successor")
    h = d.h[:-1] + (d.h[-1] + 1,)
    out = AdmissibleSeq.ones_tail(h)
    assert out.word == d.word.prepend(build_block(d.h, d.N - 1, 1))
    return out


# ---------------------------------------------------------------------------
# enumeration helpers

def h_sequences(max_entry: int, max_len: int, min_len: int = 0) -> Iterator[tuple[int, ...]]:
    """All h with entries in 1..max_entry and length in min_len..max_len."""
    import itertools

    for n in range(min_len, max_len + 1):
        yield from itertools.product(range(1, max_entry + 1), repeat=n)


def compositions_up_to(total: int) -> Iterator[tuple[int, ...]]:
    """All h with sum(h) <= total, including the empty one."""
    def rec(prefix, remaining):
        yield prefix
        for x in range(1, remaining + 1):
            yield from rec(prefix + (x,), remaining - x)

    yield from rec((), total)


def binary_words(length: int) -> Iterator[tuple[int, ...]]:
    for n in range(2**length):
        yield tuple((n >> (length - 1 - i)) & 1 for i in range(length))


def eventually_periodic_binary(max_pre: int, max_per: int) -> Iterator[EventuallyPeriodicWord]:
    """Distinct normalized binary words with |pre| <= max_pre, |per| <= max_per."""
    seen = set()
    for t in range(1, max_per + 1):
        for per in binary_words(t):
            if _primitive_root(per) != per:
                continue
            for s in range(0, max_pre + 1):
                for pre in binary_words(s):
                    w = EventuallyPeriodicWord(pre, per)
                    if w not in seen:
                        seen.add(w)
                        yield w
