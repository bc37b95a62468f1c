"""Tree evaluation of word expressions in a concrete group.

A group backend supplies ``identity()``, ``mul(x, y)`` (the value of the word
``xy``), ``inv(x)`` and ``is_identity(x)``.  Backends working on numpy arrays
may hold a whole batch of elements in one value and rely on broadcasting, so
that subtrees depending only on an unbatched generator are computed once.

With ``absorb=True`` a commutator or power whose argument is already the
identity (for every batch entry) short-circuits to the identity.  This is
exact algebra, not an approximation.
"""

from __future__ import annotations

from typing import Any, Protocol, Sequence

from .word import Comm, Concat, Gen, Inv, Lit, Pow, Subst, WordExpr, generators_used


class GroupBackend(Protocol):
    def identity(self) -> Any: ...
    def mul(self, x, y) -> Any: ...
    def inv(self, x) -> Any: ...
    def is_identity(self, x) -> bool: ...


def power(group, x, k: int):
    if k < 0:
        x, k = group.inv(x), -k
    result = None
    base = x
    while k:
        if k & 1:
            result = base if result is None else group.mul(result, base)
        k >>= 1
        if k:
            base = group.mul(base, base)
    return group.identity() if result is None else result


class MissingGenerator(KeyError):
    pass


def evaluate(e: WordExpr, values: Sequence, group, absorb: bool = True):
    """Value of ``e`` with generator ``i`` mapped to ``values[i]``."""
    if isinstance(values, dict):
        need = generators_used(e)
        missing = need - set(values)
        if missing:
            raise MissingGenerator(f"no value for generators {sorted(missing)}")
        values = [values.get(i) for i in range(max(need, default=-1) + 1)]
    return _Context(group, list(values), absorb).ev(e)


class _Context:
    def __init__(self, group, values, absorb):
        self.group = group
        self.values = values
        self.absorb = absorb
        self.memo: dict[int, tuple] = {}
        self.gen_powers: dict[tuple[int, int], Any] = {}

    def value(self, i):
        if i >= len(self.values) or self.values[i] is None:
            raise MissingGenerator(f"no value for generator {i}")
        return self.values[i]

    def trivial(self, x) -> bool:
        return self.absorb and self.group.is_identity(x)

    def gen_power(self, i, k):
        key = (i, k)
        if key not in self.gen_powers:
            self.gen_powers[key] = power(self.group, self.value(i), k)
        return self.gen_powers[key]

    def ev(self, e: WordExpr):
        key = id(e)
        hit = self.memo.get(key)
        if hit is not None and hit[0] is e:
            return hit[1]
        g = self.group
        if isinstance(e, Gen):
            r = self.value(e.index)
        elif isinstance(e, Lit):
            r = None
            for i, k in e.word.runs:
                x = self.gen_power(i, k)
                r = x if r is None else g.mul(r, x)
            if r is None:
                r = g.identity()
        elif isinstance(e, Concat):
            r = None
            for p in e.parts:
                x = self.ev(p)
                if self.trivial(x):
                    continue
                r = x if r is None else g.mul(r, x)
            if r is None:
                r = g.identity()
        elif isinstance(e, Inv):
            x = self.ev(e.body)
            r = x if self.trivial(x) else g.inv(x)
        elif isinstance(e, Pow):
            x = self.ev(e.base)
            r = x if self.trivial(x) else power(g, x, e.exp)
        elif isinstance(e, Comm):
            x = self.ev(e.left)
            if self.trivial(x):
                r = g.identity()
            else:
                y = self.ev(e.right)
                if self.trivial(y):
                    r = g.identity()
                else:
                    r = g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y)))
        elif isinstance(e, Subst):
            images = [self.ev(im) for im in e.images]
            r = _Context(g, images, self.absorb).ev(e.body)
        else:
            raise TypeError(type(e).__name__)
        # keep e alive so its id cannot be recycled while memoized
        self.memo[key] = (e, r)
        return r


# ---------------------------------------------------------------------------
# exact non-triviality in the free group

# a -> [[1,2],[0,1]], b -> [[1,0],[2,1]] generate a free subgroup of SL2(Z)
# (Sanov); x_i -> b^i a b^-i (i < 4) is a free basis of rank 4 inside it.
# Reducing mod a prime is a homomorphism, so a non-identity image proves the
# word is non-trivial, and distinct images prove two words are distinct.
FINGERPRINT_PRIMES = (2**61 - 1, 2**31 - 1)


class SL2Mod:
    def __init__(self, p: int):
        self.p = p

    def identity(self):
        return (1, 0, 0, 1)

    def mul(self, x, y):
        p = self.p
        a, b, c, d = x
        e, f, g, h = y
        return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)

    def inv(self, x):
        a, b, c, d = x
        p = self.p
        return (d, (-b) % p, (-c) % p, a)

    def is_identity(self, x):
        return x == (1, 0, 0, 1)

    def basis(self):
        A = (1, 2, 0, 1)
        B = (1, 0, 2, 1)
        out, conj = [], self.identity()
        for _ in range(4):
            out.append(self.mul(self.mul(conj, A), self.inv(conj)))
            conj = self.mul(conj, B)
        return out


class Fingerprinter:
    """Images of expressions under the fixed free-group homomorphisms."""

    def __init__(self):
        self.groups = [SL2Mod(p) for p in FINGERPRINT_PRIMES]
        self.contexts = [_Context(g, g.basis(), False) for g in self.groups]

    def __call__(self, e: WordExpr) -> tuple:
        return tuple(ctx.ev(e) for ctx in self.contexts)

    def inverse(self, fp: tuple) -> tuple:
        return tuple(g.inv(x) for g, x in zip(self.groups, fp))

    def is_identity(self, fp: tuple) -> bool:
        return all(g.is_identity(x) for g, x in zip(self.groups, fp))


def provably_nontrivial(e: WordExpr) -> bool:
    fp = Fingerprinter()
    return not fp.is_identity(fp(e))
