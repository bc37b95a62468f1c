import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import raw_letters
from grouplaws import divis as D
from grouplaws.word import Word, parse, reduce, serialize


def d_z_oracle(n):
    return next(m for m in range(2, abs(n) + 3) if n % m)


@given(st.integers(-10**6, 10**6).filter(bool))
def test_d_z_matches_scan(n):
    assert D.d_z(n) == d_z_oracle(n)


def test_d_z_zero_and_table():
    assert D.d_z(0) == math.inf
    table = D.d_z_table(5000)
    assert all(table[n] == d_z_oracle(n) for n in range(1, 5001))


@pytest.mark.parametrize("x", [2, 10, 30, 100, 1000])
def test_lcm_and_psi(x):
    assert D.lcm_upto(x) == math.lcm(*range(1, x + 1))
    assert D.chebyshev_psi(x) == pytest.approx(math.log(D.lcm_upto(x)), rel=1e-12)
    # lcm(1..x) is divisible by every m <= x, so D_Z exceeds x
    assert D.d_z(D.lcm_upto(x)) > x


def test_chebyshev_small_values():
    assert D.chebyshev_theta(10) == pytest.approx(math.log(2 * 3 * 5 * 7))
    assert D.chebyshev_psi(10) == pytest.approx(math.log(2520))
    assert D.chebyshev_theta(1) == 0.0
    assert list(D.primes_upto(30)) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("text,value", [("a", 2), ("aa", 3), ("abAB", 3), ("a" * 12, 5), ("a" * 6, 4)])
def test_known_values(text, value):
    w = parse(text)
    assert D.d_f2(w, 6).value == value
    assert D.d_f2(w, 6, "subgroup").value == value


def test_empty_word_is_a_law_everywhere():
    assert D.d_f2(Word(), 5).value == "> 5"
    assert not D.d_f2(Word(), 5, "subgroup").finite


def test_witness_moves_the_point():
    from grouplaws import perm as P
    from grouplaws.perm import Perm
    r = D.d_f2(parse("abAB"), 5)
    m, s, t, k = r.witness
    img = P.evaluate(parse("abAB"), [Perm(s), Perm(t)])
    assert m == r.value and img[k] != k


@pytest.mark.parametrize("length", range(1, 5))
def test_dual_oracles_agree(length):
    for w in D.reduced_words(length):
        assert D.d_f2(w, 5).value == D.d_f2(w, 5, "subgroup").value, serialize(w)


def test_reduced_word_counts():
    # 4 * 3^(l-1) reduced words of length l
    for ell in range(1, 6):
        ws = list(D.reduced_words(ell))
        assert len(ws) == 4 * 3 ** (ell - 1)
        assert len(set(ws)) == len(ws)


def test_class_representatives_partition_words():
    for ell in range(1, 6):
        reps = D.class_representatives(ell)
        union = set()
        for r in reps:
            cls = D.symmetry_class(r)
            assert not (cls & union)
            union |= cls
        assert union == set(D.reduced_words(ell))


@given(raw_letters(7).map(reduce).filter(bool))
def test_value_is_symmetry_invariant(w):
    v = D.d_f2(w, 5, "subgroup").value
    for u in list(D.symmetry_class(w))[:6]:
        assert D.d_f2(u, 5, "subgroup").value == v


def test_orbit_sizes():
    s = np.array([[1, 0, 2, 3], [1, 2, 3, 0]])
    t = np.array([[0, 1, 3, 2], [0, 1, 2, 3]])
    assert D.orbit_sizes(s, t).tolist() == [[2, 2, 2, 2], [4, 4, 4, 4]]


def test_profile_small():
    rows = D.d_f2_profile(5, 5, "subgroup")
    assert [r.value for r in rows] == [2, 3, 3, 3, 3]
    for r in rows:
        assert r.value <= r.length / 2 + 2
        assert r.value <= r.length + 1
        assert len(r.word) <= r.length
        assert len(r.length_word) == r.length
    assert all(a.value <= b.value for a, b in zip(rows, rows[1:]))
    assert D.profile_csv(rows).splitlines()[0] == "length,D,word,D_exact_length,word_exact_length"


def test_profile_limits():
    with pytest.raises(ValueError):
        D.d_f2_profile(9)
    with pytest.raises(ValueError):
        D.d_f2_profile(3, 7)
