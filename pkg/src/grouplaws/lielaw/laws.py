"""Exponent sets and verified laws for GL_n(q) and PGL_n(q)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..certificate import GroupSpec, LawCertificate, Outcome, VerifyMode, reduced_length_or_none
from ..combine import combine, powers_of_a
from ..evaluate import power
from ..verify import chunked, sampled_blocks, sweep
from ..word import Word, WordExpr, as_expr, nominal_length
from .field import get_field
from .matrix import MAX_MATRIX_DEGREE, MatrixScaleError, charpoly, irreducible_factor_degrees, matrix_group

EXHAUSTIVE_PAIR_CAP = 2 * 10**8
CHUNK = 8192
PGL_RULE = "k/(q-1) when the degree set has >= 2 elements; no unipotent factor"


def unipotent_exponent(n: int) -> int:
    """ceil(log2 n)."""
    return (n - 1).bit_length()


def degree_sets(n: int) -> list[tuple[int, ...]]:
    """Nonempty sets of distinct degrees with sum <= n."""
    out = []
    for r in range(1, n + 1):
        for c in itertools.combinations(range(1, n + 1), r):
            if sum(c) <= n:
                out.append(c)
    return out


def k_of(degrees, q: int) -> int:
    return math.prod(q**j - 1 for j in degrees)


@dataclass(frozen=True)
class ExponentSet:
    n: int
    q: int
    p: int
    sets: tuple[tuple[int, ...], ...]
    ks: tuple[int, ...]  # sorted, deduplicated
    unipotent_factor: int

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(sorted({self.unipotent_factor * k for k in self.ks}))

    @property
    def max_set_size(self) -> int:
        return max(len(s) for s in self.sets)

    def audit(self) -> dict:
        n = self.n
        count_bound = math.exp(math.sqrt(2) * math.sqrt(n) * math.log(n)) if n > 1 else 1.0
        return {
            "set_size_ok": self.max_set_size <= math.sqrt(2 * n),
            "k_le_qn": all(k <= self.q**n for k in self.ks),
            "count_ok": len(self.ks) <= count_bound,
            "count": len(self.ks),
            "count_bound": count_bound,
        }


def exponent_set(n: int, q: int) -> ExponentSet:
    if not 1 <= n <= MAX_MATRIX_DEGREE:
        raise MatrixScaleError(f"n must be in [1, {MAX_MATRIX_DEGREE}]")
    F = get_field(q)
    sets = tuple(degree_sets(n))
    ks = tuple(sorted({k_of(s, q) for s in sets}))
    return ExponentSet(n, q, F.p, sets, ks, F.p ** unipotent_exponent(n))


def pgl_exponents(n: int, q: int) -> list[int]:
    out = set()
    for s in degree_sets(n):
        k = k_of(s, q)
        out.add(k // (q - 1) if len(s) >= 2 else k)
    return sorted(out)


def degree_set_of(F, A) -> tuple[int, ...]:
    return tuple(sorted(irreducible_factor_degrees(F, charpoly(F, A))))


def order_invariant(n: int, q: int) -> tuple[int, list]:
    """Check A^(p^e k) = 1 with k from A's own degree set, for all A in GL_n(q).

    Returns (elements checked, failures).
    """
    G = matrix_group(n, q)
    F = G.F
    e = F.p ** unipotent_exponent(n)
    bad = []
    cache: dict[tuple, int] = {}
    for A in G.elements:
        ds = degree_set_of(F, A)
        k = cache.setdefault(ds, k_of(ds, q))
        if not G.is_identity(power(G, A, e * k)):
            bad.append((G.element_json(A), ds))
    return G.order, bad


# ---------------------------------------------------------------------------
# verification


def verify_matrix_law(e: WordExpr | Word, spec: GroupSpec, mode: VerifyMode | None = None, jobs: int = 1,
                      absorb: bool = True) -> Outcome:
    if spec.kind not in ("gl", "pgl"):
        raise ValueError(f"not a matrix group: {spec}")
    mode = mode or VerifyMode("exhaustive")
    if mode.kind == "none":
        return Outcome("unverified")
    if mode.kind == "class_reduced":
        raise MatrixScaleError("class-reduced verification is only implemented for Sym(n)")
    e = as_expr(e)
    G = matrix_group(spec.n, spec.q, spec.kind == "pgl")
    if mode.kind == "exhaustive":
        if G.order**2 > EXHAUSTIVE_PAIR_CAP:
            raise MatrixScaleError(f"{G.order**2} pairs exceed cap {EXHAUSTIVE_PAIR_CAP}")
        blocks = (blk for a in G.elements for blk in chunked(a, G.elements, CHUNK))
    else:
        blocks = sampled_blocks(lambda rng: G.elements[rng.integers(G.order)], mode.seed or 0, mode.trials or 0)
    checked, bad = sweep(e, G, blocks, jobs=jobs, absorb=absorb)
    if bad is None:
        return Outcome("verified", checked)
    a, b, v = bad
    return Outcome("counterexample", checked, [G.element_json(a), G.element_json(b)], G.element_json(v))


def _gl_product_bound(n: int, q: int, p: int) -> float:
    return 16 * math.exp(2 * math.sqrt(2) * math.sqrt(n) * math.log(n)) * (2 * p ** unipotent_exponent(n) * q**n + 2)


def pgl_bound(n: int, q: int) -> float:
    return 48 * math.exp(2 * math.sqrt(2) * math.sqrt(n) * math.log(n)) * q ** (n - 1)


def _law_certificate(exps: list[int], spec: GroupSpec, mode, jobs, details) -> LawCertificate:
    trace = combine(powers_of_a(exps))
    law = trace.output
    nominal = nominal_length(law)
    details = dict(details, exponents=exps, m=trace.m, collapses=trace.collapse_events,
                   bound_16m2=trace.bound, within_16m2=nominal <= trace.bound)
    if isinstance(mode, str):
        mode = VerifyMode.parse(mode)
    mode = mode or VerifyMode("exhaustive")
    outcome = verify_matrix_law(law, spec, mode, jobs)
    return LawCertificate(law, spec, "lie", mode, outcome, nominal, reduced_length_or_none(law), None, details)


def gl_law(n: int, q: int, mode: VerifyMode | str | None = None, jobs: int = 1) -> LawCertificate:
    es = exponent_set(n, q)
    exps = list(es.exponents)
    product = _gl_product_bound(n, q, es.p)
    cert = _law_certificate(exps, GroupSpec("gl", n, q), mode, jobs, {
        "degree_sets": [list(s) for s in es.sets],
        "ks": list(es.ks),
        "unipotent_factor": es.unipotent_factor,
        "product_bound": product,
        "bound_48q5n": 48 * q ** (5 * n),
        "audit": es.audit(),
    })
    cert.details["within_product_bound"] = cert.nominal_length <= product
    return cert


def pgl_law(n: int, q: int, mode: VerifyMode | str | None = None, jobs: int = 1) -> LawCertificate:
    """Law from the refined exponents; a counterexample is a legitimate outcome."""
    exps = pgl_exponents(n, q)
    bound = pgl_bound(n, q)
    cert = _law_certificate(exps, GroupSpec("pgl", n, q), mode, jobs, {
        "division_rule": PGL_RULE,
        "pgl_bound": bound,
    })
    cert.details["within_pgl_bound"] = cert.nominal_length <= bound
    cert.details["uncovered_elements"] = uncovered_elements(matrix_group(n, q, True), exps)
    return cert


def uncovered_elements(G, exps) -> int:
    """Elements A with A^k != 1 for every exponent k."""
    alive = np.ones(G.order, dtype=bool)
    for k in exps:
        alive &= ~G.identity_mask(power(G, G.elements, k))
    return int(alive.sum())


@dataclass(frozen=True)
class LieBoundReport:
    r: int
    q: int
    bound: int  # 48 q^(155 r)
    log10_bound: float

    def text(self) -> str:
        return f"48*{self.q}^{155 * self.r} (about 10^{self.log10_bound:.1f})"


def lie_rank_bound_report(r: int, q: int) -> LieBoundReport:
    if r < 1 or q < 2:
        raise ValueError("need r >= 1 and q >= 2")
    return LieBoundReport(r, q, 48 * q ** (155 * r), math.log10(48) + 155 * r * math.log10(q))
