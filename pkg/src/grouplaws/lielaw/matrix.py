"""Matrices over F_q: characteristic polynomials, factor degrees, GL/PGL enumeration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .field import Fq, get_field, mat_mul

MAX_MATRIX_DEGREE = 6
ENUM_CAP = 1_000_000
CODE_CAP = 1 << 22


class MatrixScaleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# characteristic polynomial


def hessenberg(F: Fq, A) -> list[list[int]]:
    """Upper Hessenberg matrix similar to A (elimination below the subdiagonal)."""
    H = [list(map(int, row)) for row in np.asarray(A)]
    n = len(H)
    for c in range(n - 2):
        piv = next((r for r in range(c + 1, n) if H[r][c]), None)
        if piv is None:
            continue
        if piv != c + 1:
            # swap rows and the matching columns (a similarity)
            H[piv], H[c + 1] = H[c + 1], H[piv]
            for row in H:
                row[piv], row[c + 1] = row[c + 1], row[piv]
        inv = F.inv(H[c + 1][c])
        for r in range(c + 2, n):
            f = F.mul(H[r][c], inv)
            if not f:
                continue
            # row_r -= f row_{c+1}; then col_{c+1} += f col_r
            H[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(H[r], H[c + 1])]
            for row in H:
                row[c + 1] = F.add(row[c + 1], F.mul(f, row[r]))
    return H


def charpoly(F: Fq, A) -> list[int]:
    """det(tI - A), monic, coefficients constant term first."""
    H = hessenberg(F, A)
    n = len(H)
    polys: list[list[int]] = [[1]]  # p_0 = 1
    for k in range(1, n + 1):
        # p_k = (t - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}
        pk = F.poly_mul([F.neg(H[k - 1][k - 1]), 1], polys[k - 1])
        prod = 1
        for i in range(k - 1, 0, -1):
            prod = F.mul(prod, H[i][i - 1])
            if not prod:
                break
            coef = F.mul(H[i - 1][k - 1], prod)
            pk = F.poly_sub(pk, F.poly_scale(polys[i - 1], coef))
        polys.append(pk)
    return polys[n]


def irreducible_factor_degrees(F: Fq, f) -> set[int]:
    """Distinct degrees of the irreducible factors of f.

    g_d = gcd(x^(q^d) - x, f) is the product of the distinct irreducible
    factors of f whose degree divides d, each taken once.  So
    deg g_d = sum over e | d of e * N_e, where N_e counts distinct factors of
    degree e, and N_d follows from the smaller N_e.  Repeated factors need no
    separate treatment.
    """
    f = F.poly_monic(F.poly_trim(f))
    n = len(f) - 1
    if n < 1:
        return set()
    counts: dict[int, int] = {}
    h = [0, 1]  # x, then x^(q^d) mod f
    for d in range(1, n + 1):
        h = F.poly_powmod(h, F.q, f)
        g = F.poly_gcd(F.poly_sub(h, [0, 1]), f)
        lower = sum(e * counts[e] for e in counts if d % e == 0)
        nd = (len(g) - 1 - lower) // d
        if nd:
            counts[d] = nd
    return set(counts)


# ---------------------------------------------------------------------------
# enumeration


def gl_order(n: int, q: int) -> int:
    return math.prod(q**n - q**i for i in range(n))


def _vectors(F: Fq, n: int) -> np.ndarray:
    """All of F_q^n, lexicographic."""
    idx = np.indices((F.q,) * n).reshape(n, -1).T
    return idx.astype(np.int64)


def enumerate_gl(n: int, q: int, cap: int = ENUM_CAP) -> np.ndarray:
    """All of GL_n(q) as an (N, n, n) array, row by row with span pruning."""
    if n > MAX_MATRIX_DEGREE:
        raise MatrixScaleError(f"n must be <= {MAX_MATRIX_DEGREE}")
    N = gl_order(n, q)
    if N > cap:
        raise MatrixScaleError(f"|GL_{n}({q})| = {N} exceeds cap {cap}")
    F = get_field(q)
    vecs = _vectors(F, n)
    codes = vecs @ (q ** np.arange(n)[::-1])
    scal = np.arange(q)
    out: list[np.ndarray] = []

    def span_codes(rows: list[np.ndarray]) -> set[int]:
        span = np.zeros((1, n), dtype=np.int64)
        for r in rows:
            multiples = F.MUL[scal[:, None], r[None, :]]  # (q, n)
            span = F.ADD[span[:, None, :], multiples[None, :, :]].reshape(-1, n)
        return set((span @ (q ** np.arange(n)[::-1])).tolist())

    def rec(rows: list[np.ndarray]):
        if len(rows) == n:
            out.append(np.stack(rows))
            return
        excluded = span_codes(rows)
        for v, c in zip(vecs, codes.tolist()):
            if c not in excluded:
                rec(rows + [v])

    rec([])
    arr = np.stack(out) if out else np.zeros((0, n, n), dtype=np.int64)
    assert len(arr) == N
    return arr


# ---------------------------------------------------------------------------
# group backend


def canonical_projective(F: Fq, X: np.ndarray) -> np.ndarray:
    """Scale each matrix so its first nonzero entry (row-major) is 1."""
    flat = X.reshape(X.shape[:-2] + (-1,))
    first = np.argmax(flat != 0, axis=-1)
    lead = np.take_along_axis(flat, first[..., None], axis=-1)
    scale = F.INV[lead]
    return F.MUL[flat, scale].reshape(X.shape)


@dataclass
class MatrixGroup:
    """GL_n(q) or PGL_n(q) with all elements enumerated."""

    n: int
    q: int
    projective: bool
    F: Fq
    elements: np.ndarray  # (N, n, n)
    inverses: np.ndarray  # (N, n, n)
    index: np.ndarray  # code -> element index, -1 if absent

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def name(self) -> str:
        return f"{'PGL' if self.projective else 'GL'}_{self.n}({self.q})"

    def encode(self, X: np.ndarray) -> np.ndarray:
        w = self.q ** np.arange(self.n * self.n)[::-1]
        return X.reshape(X.shape[:-2] + (-1,)) @ w

    # backend protocol

    def identity(self):
        return np.eye(self.n, dtype=np.int64)

    def mul(self, x, y):
        z = mat_mul(self.F, x, y)
        return canonical_projective(self.F, z) if self.projective else z

    def inv(self, x):
        return self.inverses[self.index[self.encode(x)]]

    def is_identity(self, x) -> bool:
        return bool((x == self.identity()).all())

    def identity_mask(self, x) -> np.ndarray:
        return (x == self.identity()).all(axis=(-2, -1))

    def element_json(self, X) -> list:
        return [[self.F.to_json(int(v)) for v in row] for row in np.asarray(X)]


@lru_cache(maxsize=None)
def matrix_group(n: int, q: int, projective: bool = False, cap: int = ENUM_CAP) -> MatrixGroup:
    if q ** (n * n) > CODE_CAP:
        raise MatrixScaleError(f"q^(n^2) = {q ** (n * n)} exceeds lookup cap {CODE_CAP}")
    F = get_field(q)
    els = enumerate_gl(n, q, cap)
    if projective:
        els = np.unique(canonical_projective(F, els), axis=0)
    N = len(els)
    w = q ** np.arange(n * n)[::-1]
    codes = els.reshape(N, -1) @ w
    index = np.full(q ** (n * n), -1, dtype=np.int64)
    index[codes] = np.arange(N)
    # x^-1 = x^(N-1) by Lagrange
    mul = (lambda x, y: canonical_projective(F, mat_mul(F, x, y))) if projective else (lambda x, y: mat_mul(F, x, y))
    result = np.broadcast_to(np.eye(n, dtype=np.int64), els.shape).copy()
    base, k = els, N - 1
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    for arr in (els, result, index):
        arr.setflags(write=False)
    return MatrixGroup(n, q, projective, F, els, result, index)
