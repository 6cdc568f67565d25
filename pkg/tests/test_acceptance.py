"""End-to-end acceptance checks, one test per criterion.

Each test prints a PASS/FAIL line (collected in the terminal summary).
"""
import random
import subprocess
import sys
import time
from fractions import Fraction as F
from pathlib import Path

from conftest import criterion
from critbase import cli
from critbase.critical import (
    Kind,
    Status,
    big_P,
    component_interval,
    in_component,
    p_m,
    sequence_for_m,
)
from critbase.expand import Alphabet, critical_base_of_sequence, is_unique, q_max, unique_by_enumeration
from critbase.words import AdmissibleSeq, EventuallyPeriodicWord as W, compare, compositions_up_to

TESTS = Path(__file__).parent

EXCEPTIONAL = {5: (2, 2), 9: (3, 1), 130: (7, 1), 258: (8, 1), 2051: (11, 1), 4099: (12, 1)}


def word_of(h):
    """(1^h1 0 ...)^inf spelled out from the table's closed forms."""
    if len(h) == 1:
        return W((), (1,) * h[0] + (0,))
    a, b = h
    if h == (2, 2):
        return W((), (1, 1, 0, 1, 1, 0, 1, 0))
    assert b == 1
    return W((), (1,) * a + (0,) + (1,) * (a - 1) + (0,))


def test_criterion_1_example_critical_base(capsys):
    with criterion(1, "qc 0,1,3 - 3,1 = 2.18614, roots 1.61803 and 1.73205, < 1 s") as info:
        t0 = time.perf_counter()
        code = cli.main(["qc", "0,1,3", "-", "3,1", "--format", "json"])
        elapsed = time.perf_counter() - t0
        rec = cli.parse_rendered(capsys.readouterr().out, "json")[0]
        assert code == 0
        assert abs(float(rec["qc"]) - 2.18614) <= 5e-6
        roots = [float(x) for x in rec["roots"].split(";")]
        for want in (1.61803, 1.73205):
            assert any(abs(r - want) <= 5e-6 for r in roots), roots
        assert elapsed < 1, elapsed
        info.append(f"{elapsed:.2f} s")


def test_criterion_2_sequence_table():
    # checked as stated: N = 1 and h1 = floor(log2 m) away from the six listed values.
    # This statement is contradicted by the ordering of components (see test_critical for
    # the behaviour that is pinned instead), so the criterion is expected to fail.
    with criterion(2, "N = 1, h1 = floor(log2 m) on [2, 8192] except six listed m, < 60 s") as info:
        t0 = time.perf_counter()
        wrong = []
        for m in range(2, 8193):
            d = sequence_for_m(m)
            if m in EXCEPTIONAL:
                ok = d == AdmissibleSeq.finite(EXCEPTIONAL[m]) and d.word == word_of(EXCEPTIONAL[m])
            else:
                h1 = m.bit_length() - 1
                ok = d.kind is Kind.FINITE and d.h == (h1,) and d.word == word_of((h1,))
            if not ok:
                wrong.append(m)
        elapsed = time.perf_counter() - t0
        info.append(f"{elapsed:.1f} s")
        assert sequence_for_m(32772) == AdmissibleSeq.finite((15, 1))
        assert elapsed < 60, elapsed
        assert not wrong, f"{len(wrong)} values differ: {wrong}"


def test_criterion_3_powers_of_two():
    with criterion(3, "p_m = 2 exactly at powers of two, > 2 + 1e-9 otherwise on [2, 64]"):
        for m in (2, 4, 8, 16, 32):
            r = p_m(m)
            assert r.p.is_exact and r.p.exact == 2, m
        for m in range(2, 65):
            if m & (m - 1):
                r = p_m(m)
                assert r.p.lo > 2 + F(1, 10**9), m


def test_criterion_4_smallest_point_of_cantor_set():
    with criterion(4, "component of 0^inf: m = 1.618034, M = 2.324718, mu = 2 exactly"):
        ci = component_interval(AdmissibleSeq.zero())
        plastic = 1.324717957244746  # real root of x^3 = x + 1
        assert abs(float(ci.M_d.mid) - (1 + plastic)) <= 1e-6
        assert abs(float(ci.M_d.mid) - 2.324718) <= 1e-6
        assert abs(float(ci.m_d.mid) - 1.618034) <= 1e-6
        assert ci.mu_d.is_exact and ci.mu_d.exact == 2


def test_criterion_5_derived_sequence_threshold():
    with criterion(5, "critical base of delta' equals p_m; uniqueness flips across p_m, < 10 s") as info:
        t0 = time.perf_counter()
        eps = F(1, 10**6)
        for m in (F(5, 2), F(3), F(7, 2), F(5), F(9)):
            r = p_m(m)
            assert r.status is Status.RESOLVED
            A = Alphabet.ternary(m)
            dp = r.delta_prime
            qc = critical_base_of_sequence(dp, A).value
            assert abs(qc.mid - r.p.mid) <= F(1, 10**9), m
            assert not is_unique(dp, r.p.lo - eps, A).unique, m
            assert is_unique(dp, r.p.hi + eps, A).unique, m
        elapsed = time.perf_counter() - t0
        assert elapsed < 10, elapsed
        info.append(f"{elapsed:.2f} s")


def test_criterion_6_enumeration_oracle():
    with criterion(6, "is_unique agrees with depth-20 enumeration on 200 random cases, < 60 s") as info:
        rng = random.Random(20)
        t0 = time.perf_counter()
        disagreements = []
        n_unique = 0
        for _ in range(200):
            m = rng.choice([F(2), F(5, 2), F(3), F(7, 2), F(4), F(9)])
            A = Alphabet.ternary(m)
            digits = [F(0), F(1), m]
            pre = tuple(rng.choice(digits) for _ in range(rng.randint(0, 3)))
            per = tuple(rng.choice(digits) for _ in range(rng.randint(1, 4)))
            c = W(pre, per)
            q = 1 + (q_max(A) - 1) * F(rng.randint(1, 400), 400)
            fast = is_unique(c, q, A).unique
            n_unique += fast
            if fast != unique_by_enumeration(c, q, A, depth=20):
                disagreements.append((c, q, m))
        elapsed = time.perf_counter() - t0
        assert not disagreements, disagreements[:5]
        assert elapsed < 60, elapsed
        info.append(f"{n_unique} unique / {200 - n_unique} not, {elapsed:.1f} s")


def test_criterion_7_partition():
    with criterion(7, "components for sum(h) <= 6 disjoint and ordered; 0.01 grid on [2, 6] covered once") as info:
        catalogue = [AdmissibleSeq.zero()] + [AdmissibleSeq.finite(h) for h in compositions_up_to(6) if h]
        catalogue.sort(key=lambda d: [d.word[i] for i in range(80)])
        comps = [component_interval(d, with_mu=False) for d in catalogue]
        for a, b in zip(comps, comps[1:]):
            assert compare(a.d.word, b.d.word) < 0
            assert a.m_d.hi < a.M_d.lo < a.M_d.hi < b.m_d.lo

        resolved = limited = 0
        for k in range(401):
            m = 2 + F(k, 100)
            r = p_m(m)
            if r.status is Status.DEPTH_LIMITED:
                assert r.bracket.lo <= m <= r.bracket.hi and r.bracket.hi - r.bracket.lo < F(2, 100), m
                limited += 1
                continue
            resolved += 1
            own = r.d
            if own.kind is not Kind.INFINITE_RESOLVED:
                assert in_component(own, m), m
            hits = 1
            for c in comps:
                if c.d == own:
                    continue
                if m < c.m_d.lo or m >= c.M_d.hi:
                    continue
                hits += in_component(c.d, m)
            assert hits == 1, (m, own.label())
        info.append(f"{resolved} resolved, {limited} depth-limited")


def test_criterion_8_word_suites():
    with criterion(8, "word combinatorics suites, < 30 s") as info:
        t0 = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                               str(TESTS / "test_words.py")], capture_output=True, text=True)
        elapsed = time.perf_counter() - t0
        assert proc.returncode == 0, proc.stdout[-2000:]
        assert elapsed < 30, elapsed
        info.append(proc.stdout.strip().splitlines()[-1])


def test_criterion_9_quadratic_identities():
    with criterion(9, "P_m identities hold exactly at 50 random rational m in (1, 100]"):
        rng = random.Random(9)
        for _ in range(50):
            m = 1 + F(rng.randint(1, 99 * 997), 997)
            P = big_P(m)
            assert (P - 1) ** 2 == m / (m - 1)
            assert m / P + (m / (P - 1) - 1) / P == m - 1
            assert (m - 1) * P - m == m / (P - 1) - 1
