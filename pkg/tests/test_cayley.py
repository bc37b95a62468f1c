import itertools
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from grouplaws import perm as P
from grouplaws.cayley import (
    WalkOperator,
    build_cayley,
    check_gap_inequality,
    diameter,
    distances_from,
    mixing_bound,
    second_eigenvalue_power,
    spectral_gap,
    symmetric_closure,
    target_mask,
    walk_distribution,
    walk_table,
)
from grouplaws.perm import Perm


def sym_gens(n):
    return [Perm.parse("(0 1)", n), Perm.from_cycles([list(range(n))], n)]


def test_symmetric_closure_contains_inverses():
    S = symmetric_closure([Perm.parse("(0 1 2)", 3)])
    assert set(S) == {Perm.parse("(0 1 2)", 3), Perm.parse("(0 2 1)", 3)}
    assert all(not s.is_identity for s in S)


def test_sym3_graph():
    g = build_cayley(sym_gens(3))
    assert g.order == 6
    assert diameter(g) == 2
    assert spectral_gap(WalkOperator(g)) == pytest.approx(1 / 3)


def test_cyclic_group_diameter():
    g = build_cayley([Perm.from_cycles([range(5)], 5)])
    assert g.order == 5 and diameter(g) == 2


def test_distances_by_brute_force_bfs_sym4():
    gens = sym_gens(4)
    g = build_cayley(gens)
    S = symmetric_closure(gens)
    dist = {Perm.identity(4): 0}
    frontier = [Perm.identity(4)]
    while frontier:
        nxt = []
        for x in frontier:
            for s in S:
                y = x * s
                if y not in dist:
                    dist[y] = dist[x] + 1
                    nxt.append(y)
        frontier = nxt
    d = distances_from(g)
    assert {Perm(e): int(d[i]) for i, e in enumerate(g.elements)} == dist


def test_operator_is_symmetric_and_stochastic():
    g = build_cayley(sym_gens(4))
    M = WalkOperator(g).matrix()
    assert np.allclose(M, M.T)
    assert np.allclose(M.sum(axis=0), 1.0)
    assert np.linalg.eigvalsh(M).min() >= -1e-12


def test_power_iteration_matches_dense_solve():
    for gens in (sym_gens(4), [Perm.parse("(0 1 2)", 5), Perm.parse("(0 1 2 3 4)", 5)]):
        op = WalkOperator(build_cayley(gens))
        assert second_eigenvalue_power(op) == pytest.approx(1 - spectral_gap(op), abs=1e-6)


def test_gap_inequality_on_every_generating_pair_of_sym3():
    G = [Perm(tuple(r)) for r in P.all_perms(3).tolist()]
    count = 0
    for s, t in itertools.product(G, G):
        if P.subgroup_order([s, t]) != 6:
            continue
        rep = check_gap_inequality(build_cayley([s, t]))
        assert rep.holds
        count += 1
    assert count == 18


def test_gap_inequality_random_pairs_sym4():
    rng = random.Random(3)
    for _ in range(30):
        s, t = (Perm(tuple(rng.sample(range(4), 4))) for _ in range(2))
        if P.subgroup_order([s, t]) == 1:
            continue
        assert check_gap_inequality(build_cayley([s, t])).holds


def test_mixing_bound_values():
    assert mixing_bound(4, 3, 24) == 279
    with pytest.raises(ValueError):
        mixing_bound(0, 1, 1)


def test_walk_mass_on_four_cycles_at_mixing_bound():
    g = build_cayley(sym_gens(4))
    mask = target_mask(g, lambda p: p.cycle_type == (4,))
    alpha = mask.mean()
    assert alpha == pytest.approx(6 / 24)
    T = mixing_bound(g.s_size, diameter(g), g.order)
    p = walk_distribution(WalkOperator(g), T)
    assert p.sum() == pytest.approx(1.0, abs=1e-12)
    assert p[mask].sum() >= alpha / 2 - 1e-9


def test_walk_table_monotone_tv():
    g = build_cayley(sym_gens(3))
    rows = walk_table(g, target_mask(g, lambda p: p.order == 3), 40)
    tvs = [tv for _, tv, _ in rows]
    assert tvs[0] == pytest.approx(5 / 6)
    # a lazy reversible walk never increases total variation from a point mass
    assert all(b <= a + 1e-15 for a, b in zip(tvs, tvs[1:]))
    assert rows[-1][2] == pytest.approx(1 / 3, abs=1e-3)


@given(st.integers(0, 60))
def test_walk_preserves_mass(steps):
    g = build_cayley([Perm.parse("(0 1)", 4), Perm.parse("(1 2 3)", 4)])
    p = walk_distribution(WalkOperator(g), steps)
    assert p.sum() == pytest.approx(1.0, abs=1e-12)
    assert (p >= 0).all()
