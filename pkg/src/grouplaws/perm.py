"""Permutations of {0, ..., n-1}, batched word evaluation and subgroup tools.

Products act left to right: ``p * q`` applies ``p`` first, so
``(p * q)[x] == q[p[x]]``.  The value of a word ``uv`` at a pair of
permutations is the value of ``u`` followed by the value of ``v``.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import evaluate as _ev
from .word import Word, WordExpr, as_expr

MAX_CLOSURE_DEGREE = 8
MAX_ARITH_DEGREE = 12


class DegreeMismatch(ValueError):
    pass


class SubgroupOverflow(RuntimeError):
    def __init__(self, cap: int):
        super().__init__(f"generated subgroup exceeds {cap} elements")
        self.cap = cap


class CycleType(tuple):
    """Cycle lengths in decreasing order, fixed points included."""

    def __new__(cls, parts: Iterable[int]):
        return super().__new__(cls, sorted(parts, reverse=True))

    @property
    def order(self) -> int:
        return math.lcm(*self) if self else 1

    @property
    def degree(self) -> int:
        return sum(self)


@dataclass(frozen=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(imgs) != list(range(len(imgs))) or not imgs:
            raise ValueError(f"not a permutation of 0..n-1: {self.images}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int | None = None) -> Perm:
        cycles = [list(c) for c in cycles]
        pts = [x for c in cycles for x in c]
        if len(pts) != len(set(pts)):
            raise ValueError("cycles are not disjoint")
        if n is None:
            n = max(pts, default=-1) + 1
        img = list(range(n))
        for c in cycles:
            for x, y in zip(c, c[1:] + c[:1]):
                img[x] = y
        return cls(tuple(img))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> Perm:
        """Cycle notation ``"(0 1 2)(3 4)"`` or one-line ``"[1,2,0,4,3]"``."""
        text = text.strip()
        if text.startswith("["):
            return cls(tuple(int(x) for x in re.findall(r"-?\d+", text)))
        if text in ("", "()"):
            return cls.identity(n or 1)
        if not re.fullmatch(r"(\(\s*\d+(?:[\s,]+\d+)*\s*\)\s*)+", text):
            raise ValueError(f"cannot parse permutation {text!r}")
        cycles = [list(map(int, re.findall(r"\d+", c))) for c in re.findall(r"\(([^)]*)\)", text)]
        return cls.from_cycles(cycles, n)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __len__(self):
        return len(self.images)

    def __getitem__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: Perm) -> Perm:
        return compose(self, other)

    def __invert__(self) -> Perm:
        return invert(self)

    def __pow__(self, k: int) -> Perm:
        return _ev.power(_SinglePerm(self.degree), self, k)

    def __str__(self) -> str:
        cyc = [c for c in self.cycles if len(c) > 1]
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"

    def one_line(self) -> str:
        return "[" + ",".join(map(str, self.images)) + "]"

    @cached_property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        seen = [False] * self.degree
        out = []
        for s in range(self.degree):
            if seen[s]:
                continue
            c = [s]
            seen[s] = True
            x = self.images[s]
            while x != s:
                c.append(x)
                seen[x] = True
                x = self.images[x]
            out.append(tuple(c))
        return tuple(out)

    @cached_property
    def cycle_type(self) -> CycleType:
        return CycleType(len(c) for c in self.cycles)

    @cached_property
    def order(self) -> int:
        return self.cycle_type.order

    @property
    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    @cached_property
    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles) % 2 else 1


def _check_degree(*ps: Perm) -> int:
    degs = {p.degree for p in ps}
    if len(degs) != 1:
        raise DegreeMismatch(f"degree mismatch: {sorted(degs)}")
    return degs.pop()


def compose(p: Perm, q: Perm) -> Perm:
    _check_degree(p, q)
    return Perm(tuple(q.images[x] for x in p.images))


def invert(p: Perm) -> Perm:
    inv = [0] * p.degree
    for i, x in enumerate(p.images):
        inv[x] = i
    return Perm(tuple(inv))


def order(p: Perm) -> int:
    return p.order


def cycle_type(p: Perm) -> CycleType:
    return p.cycle_type


def is_k_cycle(p: Perm, k: int) -> bool:
    ct = p.cycle_type
    if k == 1:
        return p.is_identity
    return ct[0] == k and all(x == 1 for x in ct[1:])


def has_regular_cycle(p: Perm) -> bool:
    return p.order in p.cycle_type


# ---------------------------------------------------------------------------
# evaluation backends


class _SinglePerm:
    def __init__(self, n: int | None = None):
        self.n = n

    def identity(self):
        return Perm.identity(self.n)

    def mul(self, x, y):
        return compose(x, y)

    def inv(self, x):
        return invert(x)

    def is_identity(self, x):
        return x.is_identity


class PermBatch:
    """Backend over numpy arrays of shape ``(..., n)`` holding image lists."""

    def __init__(self, n: int):
        self.n = n
        self.dtype = np.intp
        self._id = np.arange(n, dtype=self.dtype)

    def identity(self):
        return self._id

    def mul(self, x, y):
        if y.ndim == 1:
            return y[x]
        if x.ndim == 1:
            return y[..., x]
        if x.shape != y.shape:
            x, y = np.broadcast_arrays(x, y)
        return np.take_along_axis(y, x, axis=-1)

    def inv(self, x):
        if x.ndim == 1:
            out = np.empty_like(x)
            out[x] = self._id
            return out
        out = np.empty_like(x)
        np.put_along_axis(out, x, np.broadcast_to(self._id, x.shape), axis=-1)
        return out

    def is_identity(self, x) -> bool:
        return bool((x == self._id).all())

    def identity_mask(self, x) -> np.ndarray:
        return (x == self._id).all(axis=-1)


def evaluate(e: WordExpr | Word, assignment, absorb: bool = True) -> Perm:
    """Value of a word or expression at permutations.

    ``assignment`` maps generator index to :class:`Perm` (dict or sequence).
    """
    e = as_expr(e)
    if isinstance(assignment, dict):
        perms = dict(assignment)
    else:
        perms = dict(enumerate(assignment))
    n = _check_degree(*perms.values())
    be = PermBatch(n)
    vals = {i: np.asarray(p.images, dtype=be.dtype) for i, p in perms.items()}
    out = _ev.evaluate(e, vals, be, absorb=absorb)
    return Perm(tuple(np.broadcast_to(out, (n,)).tolist()))


# ---------------------------------------------------------------------------
# enumeration helpers


@lru_cache(maxsize=None)
def all_perms(n: int) -> np.ndarray:
    """All of Sym(n) as an ``(n!, n)`` array, lexicographic order."""
    if n > 10:
        raise ValueError("refusing to enumerate Sym(n) for n > 10")
    arr = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def perm_signs(n: int) -> np.ndarray:
    arr = all_perms(n)
    # parity from inversion count
    inv = np.zeros(len(arr), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            inv += arr[:, i] > arr[:, j]
    return np.where(inv % 2 == 0, 1, -1)


def partitions(n: int) -> list[tuple[int, ...]]:
    """Partitions of n, parts decreasing, in reverse lexicographic order."""
    out = []

    def rec(rest, cap, acc):
        if rest == 0:
            out.append(tuple(acc))
            return
        for k in range(min(rest, cap), 0, -1):
            acc.append(k)
            rec(rest - k, k, acc)
            acc.pop()

    rec(n, n, [])
    return out


def conjugacy_class_reps(n: int) -> list[Perm]:
    """One permutation per cycle type, cycles laid out on consecutive points."""
    if n > MAX_ARITH_DEGREE:
        raise ValueError(f"degree {n} above {MAX_ARITH_DEGREE}")
    reps = []
    for part in partitions(n):
        cycles, start = [], 0
        for k in part:
            cycles.append(list(range(start, start + k)))
            start += k
        reps.append(Perm.from_cycles(cycles, n))
    return reps


def class_size(ct: Sequence[int]) -> int:
    n = sum(ct)
    size = math.factorial(n)
    for k, m in _multiplicities(ct).items():
        size //= k**m * math.factorial(m)
    return size


def _multiplicities(ct):
    out: dict[int, int] = {}
    for k in ct:
        out[k] = out.get(k, 0) + 1
    return out


# ---------------------------------------------------------------------------
# orbits, blocks, closure, classification


def orbits(gens: Sequence[Perm]) -> list[list[int]]:
    if not gens:
        raise ValueError("need at least one generator")
    n = _check_degree(*gens)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x, y in enumerate(g.images):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return sorted(groups.values())


def _block_from_seed(gens: Sequence[Perm], n: int, x: int) -> list[list[int]]:
    """Finest block system in which 0 and x share a block."""
    parent = list(range(n))

    def find(y):
        while parent[y] != y:
            parent[y] = parent[parent[y]]
            y = parent[y]
        return y

    def union(u, v):
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[max(ru, rv)] = min(ru, rv)
        return True

    union(0, x)
    pending = [(0, x)]
    while pending:
        u, v = pending.pop()
        for g in gens:
            gu, gv = g.images[u], g.images[v]
            if union(gu, gv):
                pending.append((gu, gv))
    groups: dict[int, list[int]] = {}
    for y in range(n):
        groups.setdefault(find(y), []).append(y)
    return sorted(groups.values())


def minimal_block_system(gens: Sequence[Perm]) -> list[list[int]] | None:
    """First nontrivial block system found over seeds {0, x}, or None."""
    n = _check_degree(*gens)
    if len(orbits(gens)) != 1:
        raise ValueError("action is intransitive")
    for x in range(1, n):
        blocks = _block_from_seed(gens, n, x)
        if len(blocks) > 1:
            return blocks
    return None


def generate_subgroup(gens: Sequence[Perm], cap: int = 50_000) -> set[Perm]:
    """Breadth-first closure of ``gens``; raises :class:`SubgroupOverflow`."""
    n = _check_degree(*gens)
    gimgs = [g.images for g in gens]
    start = tuple(range(n))
    seen = {start}
    queue = deque([start])
    while queue:
        h = queue.popleft()
        for g in gimgs:
            k = tuple(g[x] for x in h)
            if k not in seen:
                seen.add(k)
                if len(seen) > cap:
                    raise SubgroupOverflow(cap)
                queue.append(k)
    return {Perm(t) for t in seen}


def subgroup_order(gens: Sequence[Perm], cap: int = 50_000) -> int:
    n = _check_degree(*gens)
    gimgs = [g.images for g in gens]
    start = tuple(range(n))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gimgs:
                k = tuple([g[x] for x in h])
                if k not in seen:
                    seen.add(k)
                    nxt.append(k)
        if len(seen) > cap:
            raise SubgroupOverflow(cap)
        frontier = nxt
    return len(seen)


def _small_primes(limit: int) -> list[int]:
    return [p for p in range(2, limit + 1) if all(p % d for d in range(2, int(p**0.5) + 1))]


def jordan_witness(gens: Sequence[Perm], budget: int = 400) -> Perm | None:
    """An element of <gens> having a power that is a single p-cycle, p <= n-3.

    For a primitive group such an element proves Alt(n) <= <gens> (Jordan).
    Searches the first ``budget`` elements in breadth-first order.
    """
    n = _check_degree(*gens)
    primes = _small_primes(n - 3)
    if not primes:
        return None
    gimgs = [g.images for g in gens]
    start = tuple(range(n))
    seen = {start}
    queue = deque([start])
    while queue and len(seen) <= budget:
        h = queue.popleft()
        ct = Perm(h).cycle_type
        for p in primes:
            if ct.count(p) == 1 and all(c % p for c in ct if c != p):
                return Perm(h)
        for g in gimgs:
            k = tuple(g[x] for x in h)
            if k not in seen:
                seen.add(k)
                queue.append(k)
    return None


def sym_or_alt(gens: Sequence[Perm], cap: int = 50_000) -> str | None:
    """``"sym"``/``"alt"`` when <gens> is all of Sym(n)/Alt(n), else None.

    Alt(1) and Alt(2) are trivial and reported as ``None`` unless the group
    is also the whole symmetric group.
    """
    n = _check_degree(*gens)
    odd = any(g.sign < 0 for g in gens)
    if n == 1:
        return "sym"
    if len(orbits(gens)) != 1:
        return None
    if n >= 4 and minimal_block_system(gens) is not None:
        return None
    if jordan_witness(gens) is not None:
        return "sym" if odd else "alt"
    order = subgroup_order(gens, cap)
    full = math.factorial(n)
    if order == full:
        return "sym"
    if order * 2 == full and n >= 3:
        return "alt"
    return None


CASE_LABELS = (
    "full_sym",
    "alt",
    "intransitive",
    "imprimitive",
    "product_action_suspect",
    "small",
    "unknown",
)


@dataclass
class SubgroupReport:
    degree: int
    orbits: list[list[int]]
    blocks: list[list[int]] | None
    order: int | None
    case: str
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "orbits": self.orbits,
            "blocks": self.blocks,
            "order": self.order,
            "case": self.case,
            "notes": self.notes,
        }


def _product_action_shape(n: int) -> bool:
    """Whether n = C(r, k)^s with s >= 2, the degree shape of case iv."""
    for s in range(2, n.bit_length() + 1):
        root = round(n ** (1 / s))
        for base in (root - 1, root, root + 1):
            if base >= 2 and base**s == n:
                return True
    return False


def classify(gens: Sequence[Perm], max_degree: int = MAX_CLOSURE_DEGREE, cap: int = 50_000) -> SubgroupReport:
    """Desk-scale version of the Sym(X) subgroup case split."""
    n = _check_degree(*gens)
    if n > max_degree:
        raise ValueError(f"degree {n} above configured max {max_degree}")
    orb = orbits(gens)
    if len(orb) > 1:
        return SubgroupReport(n, orb, None, None, "intransitive")
    blocks = minimal_block_system(gens) if n > 1 else None
    if blocks is not None:
        return SubgroupReport(n, orb, blocks, None, "imprimitive")
    try:
        order = subgroup_order(gens, cap)
    except SubgroupOverflow:
        kind = None
        if jordan_witness(gens) is not None:
            kind = "sym" if any(g.sign < 0 for g in gens) else "alt"
        if kind == "sym":
            return SubgroupReport(n, orb, None, math.factorial(n), "full_sym", ["Jordan witness"])
        if kind == "alt":
            return SubgroupReport(n, orb, None, math.factorial(n) // 2, "alt", ["Jordan witness"])
        label = "product_action_suspect" if _product_action_shape(n) else "unknown"
        return SubgroupReport(n, orb, None, None, label, [f"closure exceeded {cap}"])
    full = math.factorial(n)
    if order == full:
        return SubgroupReport(n, orb, None, order, "full_sym")
    if 2 * order == full and n >= 3:
        return SubgroupReport(n, orb, None, order, "alt")
    return SubgroupReport(n, orb, None, order, "small", ["primitive; exact order recorded"])
