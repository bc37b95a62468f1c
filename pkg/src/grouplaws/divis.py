"""Divisibility functions of Z and F2, and the Chebyshev functions."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from . import perm as P
from .evaluate import evaluate
from .perm import PermBatch
from .symlaw import CLASS_REDUCED_MAX, EXHAUSTIVE_MAX, verify_sym
from .word import Lit, Word, inverse, serialize

SIEVE_CAP = 10**8
SUBGROUP_ORACLE_MAX = 6
PROFILE_MAX_LENGTH = 8


# ---------------------------------------------------------------------------
# Z


def d_z(n: int) -> int | float:
    """Smallest m >= 2 not dividing n; ``math.inf`` for n = 0."""
    if n < 0:
        n = -n
    if n == 0:
        return math.inf
    m = 2
    while n % m == 0:
        m += 1
    return m


def d_z_table(limit: int) -> np.ndarray:
    """``d_z(n)`` for n = 0..limit by sieving (entry 0 unused)."""
    n = np.arange(limit + 1, dtype=np.int64)
    out = np.zeros(limit + 1, dtype=np.int64)
    open_ = np.ones(limit + 1, dtype=bool)
    open_[0] = False
    m = 2
    while open_.any():
        hit = open_ & (n % m != 0)
        out[hit] = m
        open_ &= ~hit
        m += 1
    return out


@lru_cache(maxsize=8)
def primes_upto(x: int) -> np.ndarray:
    if x > SIEVE_CAP:
        raise ValueError(f"sieve cap is {SIEVE_CAP}")
    if x < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(x + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(x) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve)


def chebyshev_theta(x: float) -> float:
    """Sum of log p over primes p <= x."""
    return float(np.log(primes_upto(int(x)).astype(float)).sum())


def chebyshev_psi(x: float) -> float:
    """Sum of log p over prime powers p^k <= x."""
    x = int(x)
    total = 0.0
    for p in primes_upto(x).tolist():
        k = 0
        pk = p
        while pk <= x:
            k += 1
            pk *= p
        total += k * math.log(p)
    return total


def lcm_upto(x: int) -> int:
    """lcm(1, ..., x) as an exact integer."""
    out = 1
    for p in primes_upto(int(x)).tolist():
        pk = p
        while pk * p <= x:
            pk *= p
        out *= pk
    return out


# ---------------------------------------------------------------------------
# F2


@dataclass(frozen=True)
class DivisibilityResult:
    word: Word
    value: int | str  # "> n_max" when w is a law of every Sym(n), n <= n_max
    witness: tuple | None  # (degree, sigma, tau, moved point)
    oracle: str

    @property
    def finite(self) -> bool:
        return isinstance(self.value, int)

    def to_json(self) -> dict:
        w = None
        if self.witness is not None:
            m, s, t, k = self.witness
            w = {"degree": m, "sigma": list(s), "tau": list(t), "point": k}
        return {"word": serialize(self.word), "value": self.value, "witness": w, "oracle": self.oracle}


def _infinite(n_max: int) -> str:
    return f"> {n_max}"


def d_f2_law_oracle(w: Word, n_max: int, jobs: int = 1) -> DivisibilityResult:
    """Least n <= n_max such that w is not a law of Sym(n)."""
    if n_max > CLASS_REDUCED_MAX:
        raise ValueError(f"law oracle needs n_max <= {CLASS_REDUCED_MAX}")
    if not w:
        return DivisibilityResult(w, _infinite(n_max), None, "law_oracle")
    for n in range(2, n_max + 1):
        mode = "exhaustive" if n <= EXHAUSTIVE_MAX else "class_reduced"
        out = verify_sym(w, n, mode, jobs)
        if out.status == "counterexample":
            s, t = out.witness
            k = next(x for x, y in enumerate(out.value) if x != y)
            return DivisibilityResult(w, n, (n, tuple(s), tuple(t), k), "law_oracle")
    return DivisibilityResult(w, _infinite(n_max), None, "law_oracle")


@lru_cache(maxsize=None)
def _all_pairs(m: int) -> tuple[np.ndarray, np.ndarray]:
    G = P.all_perms(m)
    N = len(G)
    return np.repeat(G, N, axis=0), np.tile(G, (N, 1))


def orbit_sizes(sigma: np.ndarray, tau: np.ndarray) -> np.ndarray:
    """For each row and point, the size of its orbit under <sigma, tau>."""
    rows, m = sigma.shape
    label = np.broadcast_to(np.arange(m), (rows, m)).copy()
    for _ in range(m):
        new = np.minimum(label, np.minimum(np.take_along_axis(label, sigma, 1), np.take_along_axis(label, tau, 1)))
        if (new == label).all():
            break
        label = new
    same = label[:, :, None] == label[:, None, :]
    return same.sum(axis=2)


def d_f2_subgroup_oracle(w: Word, n_max: int) -> DivisibilityResult:
    """Min index of a point stabilizer in <sigma, tau> excluding w, over degrees <= n_max."""
    if n_max > SUBGROUP_ORACLE_MAX:
        raise ValueError(f"subgroup oracle needs n_max <= {SUBGROUP_ORACLE_MAX}")
    if not w:
        return DivisibilityResult(w, _infinite(n_max), None, "subgroup_oracle")
    best = None
    for m in range(1, n_max + 1):
        S, T = _all_pairs(m)
        val = np.broadcast_to(evaluate(Lit(w), [S, T], PermBatch(m), absorb=False), S.shape)
        moved = val != np.arange(m)
        if not moved.any():
            continue
        sizes = np.where(moved, orbit_sizes(S, T), np.iinfo(np.int64).max)
        flat = int(np.argmin(sizes))
        r, k = divmod(flat, m)
        v = int(sizes[r, k])
        if best is None or v < best[0]:
            best = (v, (m, tuple(S[r].tolist()), tuple(T[r].tolist()), k))
    if best is None:
        return DivisibilityResult(w, _infinite(n_max), None, "subgroup_oracle")
    return DivisibilityResult(w, best[0], best[1], "subgroup_oracle")


def d_f2(w: Word, n_max: int = 6, oracle: str = "law") -> DivisibilityResult:
    if oracle == "law":
        return d_f2_law_oracle(w, n_max)
    if oracle == "subgroup":
        return d_f2_subgroup_oracle(w, n_max)
    raise ValueError(f"unknown oracle {oracle!r}")


# ---------------------------------------------------------------------------
# profile over short words

_LETTERS = (1, -1, 2, -2)


def reduced_words(length: int) -> Iterator[Word]:
    """All reduced words of the given length, in lexicographic order on (a, A, b, B)."""
    def rec(prefix):
        if len(prefix) == length:
            yield Word(tuple(prefix))
            return
        for x in _LETTERS:
            if prefix and prefix[-1] == -x:
                continue
            prefix.append(x)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


def rotate(w: Word) -> Word | None:
    """First letter moved to the end, or None if that is not reduced."""
    if len(w) < 2:
        return w
    if w.letters[-1] == -w.letters[0]:
        return None
    return Word(w.letters[1:] + w.letters[:1])


_AUTOS = (
    {1: 2, 2: 1},  # swap a, b
    {1: -1, 2: 2},  # invert a
    {1: 1, 2: -2},  # invert b
)


def apply_auto(w: Word, auto: dict[int, int]) -> Word:
    out = []
    for x in w.letters:
        y = auto[abs(x)]
        out.append(y if x > 0 else -y)
    return Word(tuple(out))


def symmetry_class(w: Word) -> set[Word]:
    """Words of the same length reachable from w by rotation, inversion and
    signed generator permutations; all share the value of D."""
    seen = {w}
    stack = [w]
    while stack:
        u = stack.pop()
        nbrs = [inverse(u)] + [apply_auto(u, a) for a in _AUTOS]
        r = rotate(u)
        if r is not None:
            nbrs.append(r)
        for v in nbrs:
            if len(v) == len(w) and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def class_representatives(length: int) -> list[Word]:
    reps = []
    done: set[Word] = set()
    for w in reduced_words(length):
        if w in done:
            continue
        cls = symmetry_class(w)
        done |= cls
        reps.append(w)
    return reps


@dataclass
class ProfileRow:
    """``value`` is D_F2(length): the max of D over words of length <= length.

    ``length_value`` is the max over words of exactly this length.
    """

    length: int
    value: int | str
    word: Word
    length_value: int | str
    length_word: Word
    words_checked: int

    @property
    def finite(self) -> bool:
        return isinstance(self.value, int)


def _key(v) -> float:
    return v if isinstance(v, int) else math.inf


def d_f2_profile(L: int, n_max: int = 6, oracle: str = "law") -> list[ProfileRow]:
    """D_F2(l) for l = 1..L, exact, with an extremal word for each."""
    if L > PROFILE_MAX_LENGTH:
        raise ValueError(f"profile needs L <= {PROFILE_MAX_LENGTH}")
    if n_max > SUBGROUP_ORACLE_MAX:
        raise ValueError(f"profile needs n_max <= {SUBGROUP_ORACLE_MAX}")
    rows = []
    overall = None
    for ell in range(1, L + 1):
        reps = class_representatives(ell)
        best = None
        for w in reps:
            r = d_f2(w, n_max, oracle)
            if best is None or _key(r.value) > _key(best.value):
                best = r
        if overall is None or _key(best.value) > _key(overall.value):
            overall = best
        rows.append(ProfileRow(ell, overall.value, overall.word, best.value, best.word, len(reps)))
    return rows


def profile_csv(rows: list[ProfileRow]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["length", "D", "word", "D_exact_length", "word_exact_length"])
    for r in rows:
        wr.writerow([r.length, r.value, serialize(r.word), r.length_value, serialize(r.length_word)])
    return buf.getvalue()


def exact_length_monotone(rows: list[ProfileRow]) -> bool:
    """Whether the exact-length maxima happen to be nondecreasing (reported, not assumed)."""
    keys = [_key(r.length_value) for r in rows]
    return all(x <= y for x, y in zip(keys, keys[1:]))
