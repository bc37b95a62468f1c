"""Free-group words of rank 2..4 and expression trees over them.

Letters are stored as signed integers: generator ``i`` is ``i + 1`` and its
inverse is ``-(i + 1)``.  Text form uses ``a b c d`` for generators and
``A B C D`` for their inverses, so ``"abAB"`` is the commutator ``[a, b]``.

Constructed laws get long fast (10^4 to beyond 10^12 letters), so they are
kept as :class:`WordExpr` trees and only flattened on demand.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence, Union

MAX_RANK = 4
ALPHABET = "abcd"
MAX_EXPONENT = 2**63 - 1
DEFAULT_FLATTEN_CAP = 5_000_000


class SizeError(ValueError):
    """Raised when a construction exceeds an explicit size limit."""


class Generator(NamedTuple):
    index: int
    sign: int = 1

    def letter(self) -> int:
        return self.sign * (self.index + 1)

    def __str__(self) -> str:
        ch = ALPHABET[self.index]
        return ch if self.sign > 0 else ch.upper()


def _as_letter(g) -> int:
    if isinstance(g, Generator):
        if g.sign not in (1, -1):
            raise ValueError(f"bad generator sign {g.sign}")
        return g.letter()
    g = int(g)
    if g == 0:
        raise ValueError("0 is not a letter")
    return g


def _free_reduce(letters: Iterable[int]) -> list[int]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


@dataclass(frozen=True)
class Word:
    """A freely reduced word.  Build with :func:`reduce` or :func:`parse`."""

    letters: tuple[int, ...] = ()
    rank: int = 2

    def __post_init__(self):
        if not 2 <= self.rank <= MAX_RANK:
            raise ValueError(f"rank must be in 2..{MAX_RANK}, got {self.rank}")
        prev = 0
        for x in self.letters:
            if x == 0 or abs(x) > self.rank:
                raise ValueError(f"letter {x} outside rank {self.rank}")
            if x == -prev:
                raise ValueError("word is not freely reduced")
            prev = x

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __str__(self) -> str:
        return serialize(self)

    def __repr__(self) -> str:
        return f"Word({serialize(self)!r}, rank={self.rank})"

    def __mul__(self, other: Word) -> Word:
        return concat(self, other)

    def __invert__(self) -> Word:
        return inverse(self)

    def __pow__(self, e: int) -> Word:
        return power(self, e)

    def generators(self) -> list[Generator]:
        return [Generator(abs(x) - 1, 1 if x > 0 else -1) for x in self.letters]

    @cached_property
    def runs(self) -> tuple[tuple[int, int], ...]:
        """Run-length form ``((generator index, signed exponent), ...)``."""
        out: list[list[int]] = []
        for x in self.letters:
            g, s = abs(x) - 1, (1 if x > 0 else -1)
            if out and out[-1][0] == g:
                out[-1][1] += s
            else:
                out.append([g, s])
        return tuple((g, e) for g, e in out)


def reduce(letters: Sequence, rank: int = 2) -> Word:
    """Freely reduce a sequence of :class:`Generator` (or signed ints)."""
    return Word(tuple(_free_reduce(_as_letter(g) for g in letters)), rank)


def _check_ranks(*words: Word) -> int:
    ranks = {w.rank for w in words}
    if len(ranks) != 1:
        raise ValueError(f"rank mismatch: {sorted(ranks)}")
    return ranks.pop()


def concat(u: Word, v: Word) -> Word:
    rank = _check_ranks(u, v)
    a, b = u.letters, v.letters
    k = 0
    while k < len(a) and k < len(b) and a[-1 - k] == -b[k]:
        k += 1
    return Word(a[: len(a) - k] + b[k:], rank)


def inverse(w: Word) -> Word:
    return Word(tuple(-x for x in reversed(w.letters)), w.rank)


def cyclic_split(w: Word) -> tuple[Word, Word]:
    """Write ``w = u c u^-1`` with ``c`` cyclically reduced; return ``(u, c)``."""
    a = w.letters
    i, j = 0, len(a) - 1
    while i < j and a[i] == -a[j]:
        i += 1
        j -= 1
    return Word(a[:i], w.rank), Word(a[i : j + 1], w.rank)


def power(w: Word, e: int) -> Word:
    if e < 0:
        raise ValueError("power() takes a nonnegative exponent; invert first")
    if e > MAX_EXPONENT:
        raise SizeError(f"exponent {e} exceeds 64-bit limit")
    if e == 0 or not w:
        return Word((), w.rank)
    u, c = cyclic_split(w)
    return Word(u.letters + c.letters * e + inverse(u).letters, w.rank)


def commutator(u: Word, v: Word) -> Word:
    return concat(concat(u, v), concat(inverse(u), inverse(v)))


def is_generator_power(w: Word) -> int | None:
    """Index ``i`` if every letter of ``w`` is ``x_i^{+-1}``, else ``None``."""
    if not w:
        raise ValueError("empty word")
    idx = {abs(x) for x in w.letters}
    return idx.pop() - 1 if len(idx) == 1 else None


def parse(text: str, rank: int | None = None) -> Word:
    letters = []
    for ch in text.strip():
        k = ALPHABET.find(ch.lower())
        if k < 0:
            raise ValueError(f"invalid character {ch!r} in word {text!r}")
        letters.append((k + 1) if ch.islower() else -(k + 1))
    if rank is None:
        rank = max([2] + [abs(x) for x in letters])
    return reduce(letters, rank)


def serialize(w: Word) -> str:
    return "".join(
        ALPHABET[x - 1] if x > 0 else ALPHABET[-x - 1].upper() for x in w.letters
    )


def letter_word(index: int, rank: int = 2) -> Word:
    return Word((index + 1,), rank)


def standard_images() -> tuple[Word, ...]:
    """``a, bab^-1, b^2ab^-2, b^3ab^-3``: a free basis of rank 4 inside F2."""
    return tuple(parse("b" * i + "a" + "B" * i) for i in range(4))


# ---------------------------------------------------------------------------
# expression trees


class WordExpr:
    """Base class of expression nodes.  Nodes are immutable and may be shared."""

    __slots__ = ()

    def __mul__(self, other: WordExpr) -> WordExpr:
        return Concat((self, other))

    def __invert__(self) -> WordExpr:
        return Inv(self)

    def __pow__(self, k: int) -> WordExpr:
        return Pow(self, k)


@dataclass(frozen=True, eq=True, repr=False)
class Gen(WordExpr):
    index: int

    def __post_init__(self):
        if not 0 <= self.index < MAX_RANK:
            raise ValueError(f"generator index {self.index} out of range")

    def __repr__(self):
        return f"Gen({ALPHABET[self.index]})"


@dataclass(frozen=True, eq=True, repr=False)
class Lit(WordExpr):
    """A literal reduced word (serialized as a plain string)."""

    word: Word

    def __repr__(self):
        return f"Lit({serialize(self.word)!r})"


@dataclass(frozen=True, eq=True)
class Concat(WordExpr):
    parts: tuple[WordExpr, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True, eq=True)
class Inv(WordExpr):
    body: WordExpr


@dataclass(frozen=True, eq=True)
class Pow(WordExpr):
    base: WordExpr
    exp: int

    def __post_init__(self):
        if self.exp < 1:
            raise ValueError("Pow exponent must be positive")
        if self.exp > MAX_EXPONENT:
            raise SizeError(f"exponent {self.exp} exceeds 64-bit limit")


@dataclass(frozen=True, eq=True)
class Comm(WordExpr):
    left: WordExpr
    right: WordExpr


@dataclass(frozen=True, eq=True)
class Subst(WordExpr):
    """Evaluate ``body`` with its generator ``i`` replaced by ``images[i]``."""

    body: WordExpr
    images: tuple[WordExpr, ...] = field(default=())

    def __post_init__(self):
        imgs = tuple(Lit(x) if isinstance(x, Word) else x for x in self.images)
        object.__setattr__(self, "images", imgs)
        if not 1 <= len(imgs) <= MAX_RANK:
            raise ValueError("Subst needs 1..4 images")
        need = max(generators_used(self.body), default=-1) + 1
        if need > len(imgs):
            raise ValueError(f"Subst body uses {need} generators, {len(imgs)} images")


def as_expr(x: Union[WordExpr, Word, str]) -> WordExpr:
    if isinstance(x, WordExpr):
        return x
    if isinstance(x, Word):
        return Lit(x)
    if isinstance(x, str):
        return Lit(parse(x))
    raise TypeError(f"cannot make an expression from {type(x).__name__}")


def gen(name: str) -> Gen:
    return Gen(ALPHABET.index(name))


def children(e: WordExpr) -> tuple[WordExpr, ...]:
    if isinstance(e, Concat):
        return e.parts
    if isinstance(e, Inv):
        return (e.body,)
    if isinstance(e, Pow):
        return (e.base,)
    if isinstance(e, Comm):
        return (e.left, e.right)
    if isinstance(e, Subst):
        return (e.body,) + e.images
    return ()


def _postorder(e: WordExpr):
    """Distinct nodes (by identity), children before parents."""
    seen: set[int] = set()
    out = []
    stack = [(e, False)]
    while stack:
        node, done = stack.pop()
        if done:
            out.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for c in reversed(children(node)):
            if id(c) not in seen:
                stack.append((c, False))
    return out


def generators_used(e: WordExpr) -> set[int]:
    """Generator indices the expression reads from its evaluation context."""
    used: dict[int, set[int]] = {}
    for node in _postorder(e):
        if isinstance(node, Gen):
            s = {node.index}
        elif isinstance(node, Lit):
            s = {abs(x) - 1 for x in node.word.letters}
        elif isinstance(node, Subst):
            s = set().union(*(used[id(im)] for im in node.images))
        else:
            s = set().union(*(used[id(c)] for c in children(node)))
        used[id(node)] = s
    return used[id(e)]


def letter_counts(e: WordExpr) -> tuple[int, ...]:
    """Nominal number of occurrences of each of the 4 generators."""
    counts: dict[int, tuple[int, ...]] = {}
    zero = (0,) * MAX_RANK
    for node in _postorder(e):
        if isinstance(node, Gen):
            c = tuple(int(i == node.index) for i in range(MAX_RANK))
        elif isinstance(node, Lit):
            c = [0] * MAX_RANK
            for x in node.word.letters:
                c[abs(x) - 1] += 1
            c = tuple(c)
        elif isinstance(node, Concat):
            c = zero
            for p in node.parts:
                c = tuple(x + y for x, y in zip(c, counts[id(p)]))
        elif isinstance(node, Inv):
            c = counts[id(node.body)]
        elif isinstance(node, Pow):
            c = tuple(node.exp * x for x in counts[id(node.base)])
        elif isinstance(node, Comm):
            c = tuple(
                2 * x + 2 * y
                for x, y in zip(counts[id(node.left)], counts[id(node.right)])
            )
        elif isinstance(node, Subst):
            body = counts[id(node.body)]
            c = zero
            for g, im in enumerate(node.images):
                c = tuple(x + body[g] * y for x, y in zip(c, counts[id(im)]))
        else:
            raise TypeError(type(node).__name__)
        counts[id(node)] = c
    return counts[id(e)]


def nominal_length(e: WordExpr) -> int:
    """Length of the expression written out without any free cancellation."""
    return sum(letter_counts(e))


def flatten(e: WordExpr, rank: int | None = None, cap: int = DEFAULT_FLATTEN_CAP) -> Word:
    """Reduced word equal to ``e`` in the free group.

    Raises :class:`SizeError` when the nominal length exceeds ``cap``.
    """
    n = nominal_length(e)
    if n > cap:
        raise SizeError(f"nominal length {n} exceeds flatten cap {cap}")
    if rank is None:
        rank = max(2, max(generators_used(e), default=0) + 1)
    return Word(tuple(_flat(e, {})), rank)


def _flat(e: WordExpr, memo: dict) -> list[int]:
    key = id(e)
    if key in memo:
        return memo[key]
    if isinstance(e, Gen):
        out = [e.index + 1]
    elif isinstance(e, Lit):
        out = list(e.word.letters)
    elif isinstance(e, Concat):
        out = []
        for p in e.parts:
            out = _join(out, _flat(p, memo))
    elif isinstance(e, Inv):
        out = [-x for x in reversed(_flat(e.body, memo))]
    elif isinstance(e, Pow):
        w = _flat(e.base, memo)
        i, j = 0, len(w) - 1
        while i < j and w[i] == -w[j]:
            i += 1
            j -= 1
        out = w[:i] + w[i : j + 1] * e.exp + w[j + 1 :] if w else []
    elif isinstance(e, Comm):
        u, v = _flat(e.left, memo), _flat(e.right, memo)
        ui = [-x for x in reversed(u)]
        vi = [-x for x in reversed(v)]
        out = _join(_join(_join(u, v), ui), vi)
    elif isinstance(e, Subst):
        imgs = [_flat(im, memo) for im in e.images]
        inv_imgs = [[-x for x in reversed(w)] for w in imgs]
        # images live in the outer context; the body's memo must not leak out
        body = _flat(e.body, {})
        out = []
        for x in body:
            for y in imgs[x - 1] if x > 0 else inv_imgs[-x - 1]:
                if out and out[-1] == -y:
                    out.pop()
                else:
                    out.append(y)
    else:
        raise TypeError(type(e).__name__)
    memo[key] = out
    return out


def _join(u: list[int], v: list[int]) -> list[int]:
    k = 0
    while k < len(u) and k < len(v) and u[-1 - k] == -v[k]:
        k += 1
    return u[: len(u) - k] + v[k:]


# ---------------------------------------------------------------------------
# JSON


def to_json(e: WordExpr):
    if isinstance(e, Gen):
        return {"gen": ALPHABET[e.index]}
    if isinstance(e, Lit):
        return serialize(e.word)
    if isinstance(e, Concat):
        return {"concat": [to_json(p) for p in e.parts]}
    if isinstance(e, Inv):
        return {"inv": to_json(e.body)}
    if isinstance(e, Pow):
        return {"pow": {"base": to_json(e.base), "exp": e.exp}}
    if isinstance(e, Comm):
        return {"comm": [to_json(e.left), to_json(e.right)]}
    if isinstance(e, Subst):
        return {"subst": {"body": to_json(e.body), "images": [to_json(i) for i in e.images]}}
    raise TypeError(type(e).__name__)


def from_json(obj) -> WordExpr:
    """Inverse of :func:`to_json`.  Identical subtrees are shared again."""
    cache: dict[tuple, WordExpr] = {}

    def intern(key, make):
        if key not in cache:
            cache[key] = make()
        return cache[key]

    def build(o):
        if isinstance(o, str):
            return intern(("lit", o), lambda: Lit(parse(o)))
        if "gen" in o:
            return intern(("gen", o["gen"]), lambda: gen(o["gen"]))
        if "inv" in o:
            b = build(o["inv"])
            return intern(("inv", id(b)), lambda: Inv(b))
        if "concat" in o:
            ps = tuple(build(p) for p in o["concat"])
            return intern(("concat",) + tuple(map(id, ps)), lambda: Concat(ps))
        if "pow" in o:
            b, k = build(o["pow"]["base"]), int(o["pow"]["exp"])
            return intern(("pow", id(b), k), lambda: Pow(b, k))
        if "comm" in o:
            left, right = (build(x) for x in o["comm"])
            return intern(("comm", id(left), id(right)), lambda: Comm(left, right))
        if "subst" in o:
            body = build(o["subst"]["body"])
            ims = tuple(build(i) for i in o["subst"]["images"])
            return intern(("subst", id(body)) + tuple(map(id, ims)), lambda: Subst(body, ims))
        raise ValueError(f"unknown expression node {sorted(o)}")

    return build(obj)


def dumps(e: WordExpr) -> str:
    return json.dumps(to_json(e), sort_keys=True, separators=(",", ":"))


def loads(text: str) -> WordExpr:
    return from_json(json.loads(text))
