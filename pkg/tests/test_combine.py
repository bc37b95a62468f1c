import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import raw_letters
from grouplaws import perm as P
from grouplaws.combine import CombineError, combine, power_closure, powers_of_a
from grouplaws.evaluate import evaluate
from grouplaws.perm import PermBatch
from grouplaws.word import Comm, Gen, Lit, Word, flatten, parse, reduce, serialize


def killed_pairs(w, n):
    """Set of (i, j) indices into Sym(n) with w(s_i, t_j) = 1."""
    G = P.all_perms(n)
    be = PermBatch(n)
    out = set()
    for i, s in enumerate(G):
        val = np.broadcast_to(evaluate(w, [s, G], be), G.shape)
        out |= {(i, j) for j in np.flatnonzero(be.identity_mask(val))}
    return out


def test_single_word_examples():
    t = combine([parse("aa")])
    assert serialize(flatten(t.output)) == "aabAAB"
    assert t.nominal_output_length == 6
    assert serialize(flatten(combine([parse("bbb")]).output)) == "bbbaBBBA"


def test_equal_inputs_collapse():
    t = combine([parse("a"), parse("a")])
    assert serialize(flatten(t.output)) == "abAB"
    assert t.collapse_events == 1


def test_distinct_commutators_do_not_collapse():
    # [ab, a] and [BA, a] differ even though the inputs are mutually inverse
    t = combine([parse("ab"), parse("BA")])
    assert t.collapse_events == 0


def test_rejects_empty_and_trivial():
    with pytest.raises(CombineError):
        combine([])
    with pytest.raises(CombineError):
        combine([Word()])
    with pytest.raises(CombineError):
        combine([Comm(Gen(0), Gen(0))])


nonempty = raw_letters(8).map(reduce).filter(bool)


@given(st.lists(nonempty, min_size=1, max_size=6))
def test_output_nontrivial_and_within_bounds(ws):
    t = combine(ws)
    assert flatten(t.output)
    L = max(len(w) for w in ws)
    assert t.nominal_output_length <= 16 * len(ws) ** 2 * L
    assert t.nominal_output_length <= t.sharp_bound


@given(st.lists(nonempty, min_size=1, max_size=4))
def test_trivializes_union_on_sym3(ws):
    out = killed_pairs(combine(ws).output, 3)
    for w in ws:
        assert killed_pairs(Lit(w), 3) <= out


def test_power_closure_dedup_and_orders():
    w1, w2 = parse("ab"), parse("a")
    assert power_closure([w1, w2], [1, 2]) == [parse("ab"), parse("abab"), parse("a"), parse("aa")]
    assert power_closure([w1, w2], [{2, 4}, {1, 2}]) == [parse("abab"), parse("abababab"), parse("a"), parse("aa")]
    assert power_closure([w2, parse("aa")], [1, 2]) == [parse("a"), parse("aa"), parse("aaaa")]
    # per-word orders {2} and {1, 2} on [a, a^2] collapse to two words
    assert power_closure([w2, parse("aa")], [{2}, {1, 2}]) == [parse("aa"), parse("aaaa")]
    with pytest.raises(ValueError):
        power_closure([w1], [0])
    with pytest.raises(ValueError):
        power_closure([w1, w2], [[1]])


def test_powers_of_a():
    assert [serialize(w) for w in powers_of_a([1, 3])] == ["a", "aaa"]
