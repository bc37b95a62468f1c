"""Cayley graphs of small permutation groups and the lazy random walk on them."""

from __future__ import annotations

import csv
import io
import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .perm import Perm, SubgroupOverflow, _check_degree, invert

SPECTRAL_TOL = 1e-9
STOCHASTIC_TOL = 1e-12
DENSE_CAP = 2000


@dataclass(frozen=True)
class CayleyGraph:
    """Elements in BFS discovery order from the identity.

    ``adjacency[h, s]`` is the index of ``elements[h] * gens[s]``.
    """

    gens: tuple[Perm, ...]
    elements: tuple[tuple[int, ...], ...]
    adjacency: np.ndarray

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def s_size(self) -> int:
        return len(self.gens)

    def index(self, p: Perm) -> int:
        return self.elements.index(p.images)


def symmetric_closure(gens: Sequence[Perm]) -> tuple[Perm, ...]:
    """``gens`` followed by the inverses not already present."""
    out: list[Perm] = []
    for g in list(gens) + [invert(g) for g in gens]:
        if g not in out:
            out.append(g)
    return tuple(out)


def build_cayley(gens: Sequence[Perm], cap: int = 50_000) -> CayleyGraph:
    _check_degree(*gens)
    S = symmetric_closure(gens)
    n = S[0].degree
    simgs = [s.images for s in S]
    start = tuple(range(n))
    index = {start: 0}
    elements = [start]
    queue = deque([start])
    while queue:
        h = queue.popleft()
        for s in simgs:
            k = tuple(s[x] for x in h)
            if k not in index:
                if len(elements) >= cap:
                    raise SubgroupOverflow(cap)
                index[k] = len(elements)
                elements.append(k)
                queue.append(k)
    adj = np.empty((len(elements), len(S)), dtype=np.int64)
    for i, h in enumerate(elements):
        for j, s in enumerate(simgs):
            adj[i, j] = index[tuple(s[x] for x in h)]
    adj.setflags(write=False)
    return CayleyGraph(S, tuple(elements), adj)


def distances_from(g: CayleyGraph, source: int = 0) -> np.ndarray:
    dist = np.full(g.order, -1, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source])
    d = 0
    while frontier.size:
        d += 1
        nxt = np.unique(g.adjacency[frontier].ravel())
        nxt = nxt[dist[nxt] < 0]
        dist[nxt] = d
        frontier = nxt
    return dist


def diameter(g: CayleyGraph) -> int:
    """Eccentricity of the identity (Cayley graphs are vertex-transitive)."""
    return int(distances_from(g, 0).max())


@dataclass(frozen=True)
class WalkOperator:
    """Lazy walk: stay with probability 1/2, else step by a uniform element of S."""

    graph: CayleyGraph
    laziness: float = 0.5

    @property
    def step_weight(self) -> float:
        return (1 - self.laziness) / self.graph.s_size

    def step(self, p: np.ndarray) -> np.ndarray:
        out = self.laziness * p
        w = self.step_weight
        for s in range(self.graph.s_size):
            out += w * np.bincount(self.graph.adjacency[:, s], weights=p, minlength=self.graph.order)
        return out

    def matrix(self) -> np.ndarray:
        N = self.graph.order
        if N > DENSE_CAP:
            raise SubgroupOverflow(DENSE_CAP)
        M = np.eye(N) * self.laziness
        cols = np.arange(N)
        for s in range(self.graph.s_size):
            np.add.at(M, (self.graph.adjacency[:, s], cols), self.step_weight)
        return M


def point_mass(g: CayleyGraph) -> np.ndarray:
    p = np.zeros(g.order)
    p[0] = 1.0
    return p


def walk_distribution(op: WalkOperator, steps: int) -> np.ndarray:
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    p = point_mass(op.graph)
    for _ in range(steps):
        p = op.step(p)
    return p


def spectral_gap(op: WalkOperator, cap: int = DENSE_CAP) -> float:
    """``1 - lambda_1`` from a dense symmetric eigensolve."""
    if op.graph.order > cap:
        raise SubgroupOverflow(cap)
    if op.graph.order == 1:
        return 1.0
    ev = np.linalg.eigvalsh(op.matrix())[::-1]
    if abs(ev[0] - 1) > SPECTRAL_TOL or ev[1] > 1 - SPECTRAL_TOL:
        raise ArithmeticError("eigenvalue 1 is not simple; graph disconnected?")
    return float(1 - ev[1])


def second_eigenvalue_power(op: WalkOperator, iters: int = 200_000, tol: float = 1e-15, seed: int = 0) -> float:
    """``lambda_1`` by power iteration on the complement of the constants.

    The operator is positive semi-definite, so the dominant eigenvalue there
    is lambda_1 itself.
    """
    N = op.graph.order
    if N == 1:
        return 0.0
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(N)
    x -= x.mean()
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(iters):
        y = op.step(x)
        y -= y.mean()
        new = float(x @ y)
        nrm = np.linalg.norm(y)
        if nrm == 0:
            return 0.0
        x = y / nrm
        if abs(new - lam) < tol:
            lam = new
            break
        lam = new
    return lam


def mixing_bound(s_size: int, diam: int, group_order: int) -> int:
    """Walk length after which a set of density alpha holds mass >= alpha/2."""
    if min(s_size, diam, group_order) <= 0:
        raise ValueError("inputs must be positive")
    return math.ceil(2 * s_size * diam**2 * math.log(2 * group_order))


@dataclass(frozen=True)
class GapReport:
    gap: float
    bound: float
    holds: bool
    s_size: int
    diameter: int
    order: int


def check_gap_inequality(g: CayleyGraph) -> GapReport:
    op = WalkOperator(g)
    gap = spectral_gap(op)
    d = diameter(g)
    bound = 1 / (2 * g.s_size * d**2) if d else 1.0
    return GapReport(gap, bound, gap >= bound - SPECTRAL_TOL, g.s_size, d, g.order)


def target_mask(g: CayleyGraph, predicate) -> np.ndarray:
    return np.array([bool(predicate(Perm(e))) for e in g.elements])


def walk_table(g: CayleyGraph, mask: np.ndarray, steps: int) -> list[tuple[int, float, float]]:
    """(step, total variation to uniform, mass on the target set) rows."""
    op = WalkOperator(g)
    p = point_mass(g)
    u = 1 / g.order
    rows = []
    for t in range(steps + 1):
        rows.append((t, 0.5 * float(np.abs(p - u).sum()), float(p[mask].sum())))
        p = op.step(p)
    return rows


def walk_table_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "tv_distance", "target_mass"])
    for t, tv, m in rows:
        w.writerow([t, repr(tv), repr(m)])
    return buf.getvalue()
