import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import raw_letters
from grouplaws import perm as P
from grouplaws.evaluate import Fingerprinter, MissingGenerator, SL2Mod, evaluate, power, provably_nontrivial
from grouplaws.perm import Perm, PermBatch
from grouplaws.word import Comm, Concat, Gen, Inv, Lit, Pow, Subst, flatten, reduce, standard_images

leaf = st.one_of(st.sampled_from([Gen(0), Gen(1)]), raw_letters(6).map(lambda xs: Lit(reduce(xs))))


def _extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda t: Comm(*t)),
        st.lists(children, min_size=1, max_size=3).map(lambda xs: Concat(tuple(xs))),
        children.map(Inv),
        st.tuples(children, st.integers(1, 5)).map(lambda t: Pow(*t)),
        st.tuples(children, children, children).map(lambda t: Subst(t[0], (t[1], t[2]))),
    )


exprs = st.recursive(leaf, _extend, max_leaves=8)


def flat_eval(w, s, t):
    acc = Perm.identity(s.degree)
    for x in w.letters:
        g = s if abs(x) == 1 else t
        acc = acc * (g if x > 0 else ~g)
    return acc


@given(exprs, st.permutations(range(5)), st.permutations(range(5)))
def test_tree_matches_flat_evaluation(e, s, t):
    s, t = Perm(tuple(s)), Perm(tuple(t))
    w = flatten(e)
    assert P.evaluate(e, [s, t]) == flat_eval(w, s, t)
    assert P.evaluate(e, [s, t], absorb=False) == P.evaluate(e, [s, t])


@given(exprs)
def test_absorption_is_exact_on_batches(e):
    n = 4
    G = P.all_perms(n)
    be = PermBatch(n)
    a = np.array([1, 0, 3, 2])
    x = np.broadcast_to(evaluate(e, [a, G], be, absorb=True), G.shape)
    y = np.broadcast_to(evaluate(e, [a, G], be, absorb=False), G.shape)
    assert (x == y).all()


def test_power_square_and_multiply():
    g = SL2Mod(101)
    x = (1, 2, 0, 1)
    assert power(g, x, 0) == g.identity()
    assert power(g, x, 5) == (1, 10, 0, 1)
    assert power(g, x, -1) == g.inv(x)


def test_missing_generator():
    with pytest.raises(MissingGenerator):
        evaluate(Comm(Gen(0), Gen(2)), {0: Perm.identity(2)}, P._SinglePerm(2))


@given(raw_letters(40))
def test_fingerprint_detects_nonempty_words(letters):
    w = reduce(letters)
    assert provably_nontrivial(Lit(w)) == bool(w)


def test_fingerprint_basis_is_free_on_short_words():
    # standard images are a free basis of rank 4, so small distinct words in
    # 4 letters have distinct fingerprints
    fp = Fingerprinter()
    seen = {}
    from itertools import product
    for k in range(4):
        for letters in product([1, -1, 2, -2, 3, -3, 4, -4], repeat=k):
            w = reduce(letters, 4)
            key = fp(Lit(w))
            assert seen.setdefault(key, w) == w


def test_subst_into_standard_images_is_injective_on_samples():
    fp = Fingerprinter()
    a, b = Gen(0), Gen(1)
    e1 = Subst(Comm(Gen(2), Gen(3)), standard_images())
    e2 = Subst(Comm(Gen(3), Gen(2)), standard_images())
    assert fp(e1) != fp(e2)
    assert fp(Comm(a, b)) == fp(Lit(reduce([1, 2, -1, -2])))
