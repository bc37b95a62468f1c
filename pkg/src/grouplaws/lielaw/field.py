"""Finite fields F_q with table arithmetic, and polynomials over them.

An element of F_q (q = p^s) is an int in ``range(q)`` whose base-p digits are
the coefficients of its residue polynomial, constant term first.  Polynomials
over F_q are coefficient lists, constant term first, with no trailing zeros
(the zero polynomial is ``[]``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

FIELD_CAP = 512


class FieldError(ValueError):
    pass


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def prime_power(q: int) -> tuple[int, int]:
    """(p, s) with q = p^s."""
    for p in range(2, q + 1):
        if q % p == 0:
            s, r = 0, q
            while r % p == 0:
                r //= p
                s += 1
            if r != 1 or not is_prime(p):
                break
            return p, s
    raise FieldError(f"{q} is not a prime power")


# ---------------------------------------------------------------------------
# polynomials over the prime field, used only to build the modulus


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _prime_mod(a: list[int], b: list[int], p: int) -> list[int]:
    a = list(a)
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        f = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
        _trim(a)
        if not a:
            break
    return a


def monic_polys(p: int, d: int):
    """Monic degree-d polynomials over F_p in increasing integer-code order."""
    for tail in itertools.product(range(p), repeat=d):
        yield list(reversed(tail)) + [1]


def is_irreducible_prime(f: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(f)//2."""
    d = len(f) - 1
    for e in range(1, d // 2 + 1):
        for g in monic_polys(p, e):
            if not _prime_mod(f, g, p):
                return False
    return d >= 1


@lru_cache(maxsize=None)
def find_irreducible(p: int, s: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree s over F_p, coefficients constant first.

    Order is lexicographic on (c_{s-1}, ..., c_0), i.e. by the integer
    sum c_i p^i.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if s < 1 or p**s > FIELD_CAP:
        raise FieldError(f"need 1 <= s and p^s <= {FIELD_CAP}")
    for f in monic_polys(p, s):
        if is_irreducible_prime(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# ---------------------------------------------------------------------------
# the field


@dataclass(frozen=True)
class Fq:
    q: int
    p: int = field(init=False)
    s: int = field(init=False)
    modulus: tuple[int, ...] = field(init=False)
    ADD: np.ndarray = field(init=False, repr=False, compare=False)
    MUL: np.ndarray = field(init=False, repr=False, compare=False)
    NEG: np.ndarray = field(init=False, repr=False, compare=False)
    INV: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 2 <= self.q <= FIELD_CAP:
            raise FieldError(f"field size must be in [2, {FIELD_CAP}]")
        p, s = prime_power(self.q)
        mod = find_irreducible(p, s)
        set_ = object.__setattr__
        set_(self, "p", p)
        set_(self, "s", s)
        set_(self, "modulus", mod)
        q = self.q
        digits = np.array([[(x // p**i) % p for i in range(s)] for x in range(q)], dtype=np.int64)
        weights = p ** np.arange(s)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        neg = ((-digits) % p) @ weights
        mul = np.zeros((q, q), dtype=np.int64)
        for x in range(q):
            for y in range(x, q):
                mul[x, y] = mul[y, x] = self._mul_slow(digits[x], digits[y], mod) @ weights
        inv = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            inv[x] = int(np.flatnonzero(mul[x] == 1)[0])
        for name, arr in (("ADD", add), ("MUL", mul), ("NEG", neg), ("INV", inv)):
            arr.setflags(write=False)
            set_(self, name, arr)

    def _mul_slow(self, a, b, mod) -> np.ndarray:
        p, s = self.p, self.s
        prod = [0] * (2 * s - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + int(x) * int(y)) % p
        r = _prime_mod(_trim(prod), list(mod), p)
        return np.array(r + [0] * (s - len(r)), dtype=np.int64)

    @property
    def is_prime(self) -> bool:
        return self.s == 1

    def add(self, x: int, y: int) -> int:
        return int(self.ADD[x, y])

    def sub(self, x: int, y: int) -> int:
        return int(self.ADD[x, self.NEG[y]])

    def neg(self, x: int) -> int:
        return int(self.NEG[x])

    def mul(self, x: int, y: int) -> int:
        return int(self.MUL[x, y])

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.INV[x])

    def pow(self, x: int, k: int) -> int:
        if k < 0:
            x, k = self.inv(x), -k
        r = 1
        while k:
            if k & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            k >>= 1
        return r

    def digits(self, x: int) -> list[int]:
        """Coefficient array of x's residue polynomial (constant term first)."""
        return [(x // self.p**i) % self.p for i in range(self.s)]

    def from_digits(self, ds) -> int:
        return sum(int(d) * self.p**i for i, d in enumerate(ds))

    def to_json(self, x: int):
        return x if self.s == 1 else self.digits(x)

    def from_json(self, v) -> int:
        return int(v) if not isinstance(v, list) else self.from_digits(v)

    # polynomial arithmetic over F_q

    def poly_trim(self, a) -> list[int]:
        return _trim(list(a))

    def poly_add(self, a, b) -> list[int]:
        n = max(len(a), len(b))
        a = list(a) + [0] * (n - len(a))
        b = list(b) + [0] * (n - len(b))
        return _trim([self.add(x, y) for x, y in zip(a, b)])

    def poly_sub(self, a, b) -> list[int]:
        return self.poly_add(a, [self.neg(y) for y in b])

    def poly_scale(self, a, c: int) -> list[int]:
        return _trim([self.mul(x, c) for x in a])

    def poly_mul(self, a, b) -> list[int]:
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = self.add(out[i + j], self.mul(x, y))
        return _trim(out)

    def poly_divmod(self, a, b) -> tuple[list[int], list[int]]:
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        a = list(a)
        quot = [0] * max(len(a) - len(b) + 1, 0)
        inv_lead = self.inv(b[-1])
        while len(a) >= len(b):
            f = self.mul(a[-1], inv_lead)
            shift = len(a) - len(b)
            quot[shift] = f
            for i, c in enumerate(b):
                a[shift + i] = self.sub(a[shift + i], self.mul(f, c))
            _trim(a)
        return _trim(quot), a

    def poly_mod(self, a, b) -> list[int]:
        return self.poly_divmod(a, b)[1]

    def poly_monic(self, a) -> list[int]:
        return self.poly_scale(a, self.inv(a[-1])) if a else []

    def poly_gcd(self, a, b) -> list[int]:
        a, b = _trim(list(a)), _trim(list(b))
        while b:
            a, b = b, self.poly_mod(a, b)
        return self.poly_monic(a)

    def poly_powmod(self, a, k: int, m) -> list[int]:
        result = [1]
        base = self.poly_mod(a, m)
        while k:
            if k & 1:
                result = self.poly_mod(self.poly_mul(result, base), m)
            base = self.poly_mod(self.poly_mul(base, base), m)
            k >>= 1
        return self.poly_mod(result, m)

    def poly_eval_matrix(self, f, A: np.ndarray) -> np.ndarray:
        """f(A) by Horner's rule."""
        n = A.shape[0]
        out = np.zeros((n, n), dtype=np.int64)
        eye = np.eye(n, dtype=np.int64)
        for c in reversed(f):
            out = mat_mul(self, out, A)
            out = mat_add(self, out, eye * c if c else np.zeros_like(eye))
        return out


@lru_cache(maxsize=None)
def get_field(q: int) -> Fq:
    return Fq(q)


# ---------------------------------------------------------------------------
# batched matrix arithmetic


def mat_add(F: Fq, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if F.is_prime:
        return (A + B) % F.p
    return F.ADD[A, B]


def mat_mul(F: Fq, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Product of (..., n, n) arrays of field elements, with broadcasting."""
    if F.is_prime:
        return np.matmul(A, B) % F.p
    terms = F.MUL[A[..., :, :, None], B[..., None, :, :]]  # (..., i, k, j)
    out = terms[..., 0, :]
    for k in range(1, terms.shape[-2]):
        out = F.ADD[out, terms[..., k, :]]
    return out
