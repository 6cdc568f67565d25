import itertools
import random
from fractions import Fraction as F

import pytest

from critbase.critical import big_P
from critbase.expand import (
    Alphabet,
    critical_base_of_sequence,
    enumerate_expansions,
    is_quasi_greedy_word,
    is_quasi_lazy_word,
    is_unique,
    is_unique_ternary,
    q_max,
    quasi_greedy,
    quasi_lazy,
    unique_by_enumeration,
)
from critbase.numeric import eval_pi_closed, quad
from critbase.words import EventuallyPeriodicWord as W, compare

A013 = Alphabet.parse("0,1,3")
C31 = W((), (3, 1))
P3_EXACT = quad(F(3, 4), F(1, 4), 33)  # (3+sqrt(33))/4


def random_word(rng, digits, max_pre=3, max_per=4):
    pre = tuple(rng.choice(digits) for _ in range(rng.randint(0, max_pre)))
    per = tuple(rng.choice(digits) for _ in range(rng.randint(1, max_per)))
    return W(pre, per)


def random_base(rng, A):
    Q = q_max(A)
    return 1 + (Q - 1) * F(rng.randint(1, 400), 400)


def ternary_words(m, max_per):
    seen = set()
    for k in range(1, max_per + 1):
        for per in itertools.product((F(0), F(1), F(m)), repeat=k):
            w = W((), per)
            if w not in seen:
                seen.add(w)
                yield w


# -- alphabets ---------------------------------------------------------------------------

def test_q_max_examples():
    assert q_max(Alphabet.parse("0,1")) == 2
    assert q_max(A013) == F(5, 2)
    for m in (2, F(5, 2), 3, 7):
        assert q_max(Alphabet.ternary(m)) == (2 * F(m) - 1) / (F(m) - 1)


def test_q_max_at_most_size():
    rng = random.Random(5)
    for _ in range(100):
        digits = sorted({F(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(rng.randint(2, 6))})
        if len(digits) < 2:
            continue
        A = Alphabet(digits)
        assert 1 < q_max(A) <= A.J
        assert A.conjugate().conjugate() == A


# -- uniqueness ------------------------------------------------------------------------------

def test_is_unique_examples():
    for A in (A013, Alphabet.parse("0,1"), Alphabet.parse("-1,1/2,4")):
        for q in (F(11, 10), q_max(A)):
            assert is_unique(W((), (A.high,)), q, A).unique
            assert is_unique(W((), (A.low,)), q, A).unique
    assert is_unique(C31, F(11, 5), A013).unique
    rep = is_unique(C31, F(21, 10), A013)
    assert not rep.unique and rep.first_violation is not None
    assert is_unique(W((), (1,)), F(11, 5), Alphabet.parse("0,1")).unique


def test_is_unique_rejects_bad_base():
    with pytest.raises(ValueError):
        is_unique(C31, F(13, 5), A013)
    with pytest.raises(ValueError):
        is_unique(C31, 1, A013)


def test_uniqueness_transition_is_exact():
    assert not is_unique(C31, P3_EXACT, A013).unique  # the critical base itself fails a strict inequality
    assert is_unique(C31, P3_EXACT + F(1, 10**30), A013).unique
    assert not is_unique(C31, P3_EXACT - F(1, 10**30), A013).unique


def test_general_path_matches_ternary_fast_path():
    rng = random.Random(11)
    for _ in range(200):
        m = rng.choice([2, F(5, 2), 3, 4, F(17, 3), 9])
        A = Alphabet.ternary(m)
        c = random_word(rng, [F(0), F(1), F(m)])
        q = random_base(rng, A)
        assert is_unique(c, q, A).unique == is_unique_ternary(c, q, m), (c, q, m)


def test_matches_enumeration_oracle():
    rng = random.Random(23)
    for _ in range(100):
        m = rng.choice([2, F(5, 2), 3, 4, 9])
        A = Alphabet.ternary(m)
        c = random_word(rng, [F(0), F(1), F(m)])
        q = random_base(rng, A)
        assert is_unique(c, q, A).unique == unique_by_enumeration(c, q, A), (c, q, m)


def test_no_nontrivial_univoque_words_up_to_base_two():
    for m in (2, 3, 5):
        A = Alphabet.ternary(m)
        trivial = {W((), (F(0),)), W((), (F(m),))}
        for q in (F(3, 2), F(19, 10), F(2)):
            passing = {w for w in ternary_words(m, 6) if is_unique(w, q, A).unique}
            assert passing == trivial, (m, q)


def test_univoque_words_at_upper_bound_avoid_zero_after_nonzero():
    for m in (2, 3, 5):
        A = Alphabet.ternary(m)
        P = big_P(m)
        hits = 0
        for w in ternary_words(m, 6):
            if is_unique(w, P, A).unique:
                window = [w[i] for i in range(len(w.pre) + 2 * len(w.per) + 1)]
                assert all(not (a != 0 and b == 0) for a, b in zip(window, window[1:])), (m, w)
                hits += 1
        assert hits >= 2


def test_binary_tail_bound():
    # words over {a, b} whose tails after each a do not exceed the word itself
    rng = random.Random(3)
    tested = 0
    for a, b in ((F(0), F(1)), (F(1), F(3)), (F(-1), F(2))):
        for k in range(1, 7):
            for per in itertools.product((a, b), repeat=k):
                for pre in ((), (b,), (a,), (b, a)):
                    c = W(pre, per)
                    q = 1 + F(rng.randint(5, 30), 10)
                    s = eval_pi_closed(c, q)
                    if s > b - a:
                        continue
                    zeros = [n for n in range(1, c.n_tails + 2) if c[n - 1] == a]
                    if not all(compare(c.shift(n), c) <= 0 for n in zeros):
                        continue
                    for n in zeros:
                        assert eval_pi_closed(c.shift(n), q) <= s
                    tested += 1
    assert tested > 50


def test_conjugate_alphabet_gives_same_critical_base():
    rng = random.Random(7)
    for _ in range(20):
        m = rng.choice([2, 3, F(7, 2)])
        A = Alphabet.ternary(m)
        c = random_word(rng, [F(0), F(1), F(m)], 2, 3)
        conj = c.map(lambda x: m - x)
        u = critical_base_of_sequence(c, A).value
        v = critical_base_of_sequence(conj, A.conjugate()).value
        assert abs(float(u.mid) - float(v.mid)) < 1e-11


# -- critical base of one sequence -----------------------------------------------------------

def test_critical_base_example():
    cb = critical_base_of_sequence(C31, A013)
    assert abs(float(cb.value.mid) - 2.18614) < 5e-6
    assert cb.value.width <= F(1, 10**12)
    roots = [float(r.mid) for r in cb.distinct_roots()]
    for expected in (1.61803, 1.73205, 2.18614):
        assert any(abs(r - expected) < 5e-6 for r in roots)
    assert cb.value.lo < P3_EXACT < cb.value.hi


def test_critical_base_of_trivial_sequences():
    for A in (A013, Alphabet.parse("0,1"), Alphabet.parse("2,5,6")):
        for c in (W((), (A.low,)), W((), (A.high,))):
            cb = critical_base_of_sequence(c, A)
            assert cb.value.is_exact and cb.value.exact == 1


def test_critical_base_separates_unique_from_not():
    rng = random.Random(17)
    for _ in range(30):
        m = rng.choice([2, 3, 5])
        A = Alphabet.ternary(m)
        c = random_word(rng, [F(0), F(1), F(m)], 2, 3)
        v = critical_base_of_sequence(c, A).value
        Q = q_max(A)
        if v.hi + F(1, 10**6) < Q:
            assert is_unique(c, v.hi + F(1, 10**6), A).unique
        if v.lo - F(1, 10**6) > 1:
            assert not is_unique(c, v.lo - F(1, 10**6), A).unique


# -- quasi-greedy and quasi-lazy ----------------------------------------------------------------

def test_quasi_greedy_examples():
    q = F(11, 5)
    assert quasi_greedy(3 / (q - 1), q, A013, 10) == [3] * 10
    digits = quasi_greedy(F(2), P3_EXACT, A013, 12)
    assert digits == [3, 1] * 6


def test_quasi_greedy_dominates_enumeration():
    A = Alphabet.parse("0,1")
    q, x = F(3, 2), F(1)
    qg = tuple(quasi_greedy(x, q, A, 20))
    found = enumerate_expansions(x, q, A, 20, cap=4096)
    assert qg in found.prefixes
    assert_no_larger_infinite_branch(qg, found, A)


def assert_no_larger_infinite_branch(qg, found, A):
    # anything above the quasi-greedy prefix must be a finite expansion: a_1 forever after the split
    for p in found.prefixes:
        if p > qg:
            k = next(i for i in range(len(p)) if p[i] != qg[i])
            assert all(d == A.low for d in p[k + 1:]), (p, qg)


def test_quasi_greedy_random_against_enumeration():
    rng = random.Random(29)
    for _ in range(40):
        m = rng.choice([2, 3])
        A = Alphabet.ternary(m)
        q = random_base(rng, A)
        x = (A.high / (q - 1)) * F(rng.randint(1, 99), 100)
        qg = tuple(quasi_greedy(x, q, A, 10))
        found = enumerate_expansions(x, q, A, 10, cap=100000)
        if found.overflow:
            continue
        assert qg in found.prefixes
        assert_no_larger_infinite_branch(qg, found, A)


def test_quasi_lazy_examples():
    q = F(11, 5)
    assert quasi_lazy(F(0), q, A013, 8) == [0] * 8


def test_quasi_lazy_duality():
    rng = random.Random(31)
    for _ in range(100):
        digits = sorted({F(rng.randint(0, 12), rng.randint(1, 3)) for _ in range(3)})
        if len(digits) < 2:
            continue
        A = Alphabet(digits)
        q = random_base(rng, A)
        lo, hi = A.low / (q - 1), A.high / (q - 1)
        x = lo + (hi - lo) * F(rng.randint(0, 99), 100)
        s = A.low + A.high
        mirrored = s / (q - 1) - x
        expected = [s - a for a in quasi_greedy(mirrored, q, A.conjugate(), 15)]
        assert quasi_lazy(x, q, A, 15) == expected


def test_characterization_of_quasi_greedy_words():
    rng = random.Random(37)
    checked = 0
    for _ in range(300):
        m = rng.choice([2, 3, F(7, 2)])
        A = Alphabet.ternary(m)
        c = random_word(rng, [F(0), F(1), F(m)])
        if c.per == (A.low,):
            continue  # not an infinite expansion
        q = random_base(rng, A)
        K = len(c.pre) + len(c.per) + 1
        x = eval_pi_closed(c, q)
        agrees = quasi_greedy(x, q, A, K) == [c[i] for i in range(K)]
        assert agrees == is_quasi_greedy_word(c, q, A), (c, q, m)
        checked += agrees
    assert checked > 20


def test_characterization_of_quasi_lazy_words():
    rng = random.Random(41)
    checked = 0
    for _ in range(300):
        m = rng.choice([2, 3, F(7, 2)])
        A = Alphabet.ternary(m)
        c = random_word(rng, [F(0), F(1), F(m)])
        if c.per == (A.high,):
            continue
        q = random_base(rng, A)
        K = len(c.pre) + len(c.per) + 1
        x = eval_pi_closed(c, q)
        agrees = quasi_lazy(x, q, A, K) == [c[i] for i in range(K)]
        assert agrees == is_quasi_lazy_word(c, q, A), (c, q, m)
        checked += agrees
    assert checked > 20


def test_quasi_greedy_monotone():
    rng = random.Random(43)
    A = Alphabet.ternary(3)
    for _ in range(100):
        q1 = random_base(rng, A)
        q2 = random_base(rng, A)
        p, q = max(q1, q2), min(q1, q2)
        top = A.high / (p - 1)
        x1, x2 = top * F(rng.randint(1, 100), 100), top * F(rng.randint(1, 100), 100)
        x, y = max(x1, x2), min(x1, x2)
        assert quasi_greedy(x, p, A, 15) >= quasi_greedy(y, q, A, 15)


def test_quasi_greedy_range_checks():
    with pytest.raises(ValueError):
        quasi_greedy(F(0), F(2), A013, 3)
    with pytest.raises(ValueError):
        quasi_lazy(F(3), F(2), A013, 3)


# -- enumeration ----------------------------------------------------------------------------------

def test_enumeration_examples():
    q = F(21, 10)
    top = enumerate_expansions(3 / (q - 1), q, A013, 12)
    assert top.prefixes == [(3,) * 12]
    assert len(enumerate_expansions(eval_pi_closed(C31, q), q, A013, 12)) >= 2
    q = F(23, 10)
    found = enumerate_expansions(eval_pi_closed(C31, q), q, A013, 12)
    assert found.prefixes == [tuple(C31[i] for i in range(12))]


def test_enumeration_cap_and_order():
    A = Alphabet.parse("0,1")
    found = enumerate_expansions(F(1), F(11, 10), A, 12, cap=5)
    assert len(found) == 5 and found.overflow
    assert found.prefixes == sorted(found.prefixes, reverse=True)
    with pytest.raises(ValueError):
        enumerate_expansions(F(1), F(3, 2), A, 0)
