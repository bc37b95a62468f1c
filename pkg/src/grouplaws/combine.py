"""Merge trivializing words into one non-trivial word by nested commutators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .evaluate import Fingerprinter
from .word import (
    DEFAULT_FLATTEN_CAP,
    Comm,
    Gen,
    Lit,
    SizeError,
    Word,
    WordExpr,
    as_expr,
    flatten,
    inverse,
    is_generator_power,
    nominal_length,
    power,
    reduce,
)


class CombineError(ValueError):
    pass


@dataclass(frozen=True)
class CombineTrace:
    output: WordExpr
    m: int
    max_input_length: int
    nominal_output_length: int
    collapse_events: int

    @property
    def bound(self) -> int:
        return 16 * self.m**2 * self.max_input_length

    @property
    def sharp_bound(self) -> int:
        if self.m == 1:
            return 4 * self.max_input_length
        return 4 ** (math.floor(math.log2(self.m - 1)) + 2) * self.max_input_length


class _Combiner:
    def __init__(self, rank: int, flatten_cap: int):
        self.rank = rank
        self.cap = flatten_cap
        self.fp = Fingerprinter()
        self.collapses = 0

    def same_up_to_inverse(self, x: WordExpr, y: WordExpr) -> bool:
        fx, fy = self.fp(x), self.fp(y)
        if fx != fy and fx != self.fp.inverse(fy):
            return False
        # images agree; settle exactly when the words are small enough
        try:
            wx, wy = flatten(x, self.rank, self.cap), flatten(y, self.rank, self.cap)
        except SizeError:
            return True
        return wx == wy or wx == inverse(wy)

    def z_for(self, v: WordExpr) -> int:
        """Smallest generator index of which ``v`` is not a power."""
        if isinstance(v, Lit):
            p = is_generator_power(v.word)
            return 1 if p == 0 else 0
        for i in range(self.rank):
            # [v, x_i] != 1 exactly when v is not a power of x_i
            if not self.fp.is_identity(self.fp(Comm(v, Gen(i)))):
                return i
        w = flatten(v, self.rank, self.cap)
        return 1 if is_generator_power(w) == 0 else 0

    def run(self, ws: Sequence[WordExpr]) -> WordExpr:
        if len(ws) == 1:
            v = ws[0]
            return Comm(v, Gen(self.z_for(v)))
        half = len(ws) // 2
        left, right = self.run(ws[:half]), self.run(ws[half:])
        if self.same_up_to_inverse(left, right):
            self.collapses += 1
            return left
        return Comm(left, right)


def combine(words: Iterable[Word | WordExpr], rank: int | None = None,
            flatten_cap: int = DEFAULT_FLATTEN_CAP) -> CombineTrace:
    """A non-trivial word killing every tuple killed by one of ``words``.

    Inputs must be non-trivial.  Plain :class:`Word` inputs are checked for
    reducedness and non-emptiness directly; expression inputs are checked
    through their free-group fingerprint.
    """
    items = list(words)
    if not items:
        raise CombineError("combine needs at least one word")
    ranks = {w.rank for w in items if isinstance(w, Word)}
    if rank is None:
        rank = max(ranks | {2})
    if rank < 2:
        raise CombineError("rank must be at least 2")
    exprs = []
    fp = Fingerprinter()
    for w in items:
        if isinstance(w, Word) and not w:
            raise CombineError("empty input word")
        e = as_expr(w)
        if not isinstance(w, Word) and fp.is_identity(fp(e)):
            try:
                if not flatten(e, rank, flatten_cap):
                    raise CombineError("trivial input expression")
            except SizeError:
                raise CombineError("input expression could not be shown non-trivial")
        exprs.append(e)
    c = _Combiner(rank, flatten_cap)
    out = c.run(exprs)
    if c.fp.is_identity(c.fp(out)):
        # the fingerprint map is not injective mod p; fall back to flattening
        if not flatten(out, rank, flatten_cap):
            raise CombineError("combined word is trivial")
    lengths = [nominal_length(e) for e in exprs]
    return CombineTrace(out, len(exprs), max(lengths), nominal_length(out), c.collapses)


def power_closure(words: Sequence[Word], orders) -> list[Word]:
    """Powers ``w^k`` of each word, deduplicated as reduced words.

    ``orders`` is either one collection of exponents applied to every word,
    or a sequence parallel to ``words`` giving each word its own exponents.
    """
    words = list(words)
    orders = list(orders)
    if orders and all(isinstance(k, int) for k in orders):
        per_word = [orders] * len(words)
    else:
        if len(orders) != len(words):
            raise ValueError("per-word orders must match the word list")
        per_word = [[k] if isinstance(k, int) else sorted(k) for k in orders]
    out: list[Word] = []
    seen: set[Word] = set()
    for w, ks in zip(words, per_word):
        for k in ks:
            if k <= 0:
                raise ValueError("exponent must be positive")
            p = power(w, k)
            if p not in seen:
                seen.add(p)
                out.append(p)
    return out


def powers_of_a(exponents: Iterable[int], rank: int = 2) -> list[Word]:
    return [reduce([1] * k, rank) for k in exponents]
