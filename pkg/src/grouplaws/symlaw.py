"""Laws for Sym(n): Landau law, randomized cycle-word law and the recursive assembly."""

from __future__ import annotations

import csv
import io
import json
import math
import random
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from . import perm as P
from .cayley import build_cayley, diameter, mixing_bound
from .certificate import GroupSpec, LawCertificate, Outcome, VerifyMode, reduced_length_or_none
from .combine import combine, power_closure, powers_of_a
from .evaluate import Fingerprinter
from .perm import Perm, PermBatch
from .verify import chunked, sampled_blocks, sweep
from .word import (
    Comm,
    Gen,
    Lit,
    Pow,
    Subst,
    Word,
    WordExpr,
    as_expr,
    flatten,
    nominal_length,
    reduce,
    standard_images,
)

DEFAULT_SEED = 0xC0FFEE
EXHAUSTIVE_MAX = 6
CLASS_REDUCED_MAX = 9
SAMPLED_MAX = 12
RANDOM_MAX = 7
CHUNK = 8192


class ScaleError(ValueError):
    pass


class CoverageFailure(RuntimeError):
    def __init__(self, k: int, pair: tuple[Perm, Perm]):
        super().__init__(f"coverage_failure: no hit for pair ({pair[0]}, {pair[1]}) in Sym({k})")
        self.k = k
        self.pair = pair


# ---------------------------------------------------------------------------
# Landau function


@lru_cache(maxsize=None)
def landau_g(n: int) -> int:
    """Largest element order in Sym(n)."""
    if not 0 <= n <= 200:
        raise ValueError("landau_g needs 0 <= n <= 200")
    # best[s]: max product of prime powers (distinct primes) with sum <= s
    best = [1] * (n + 1)
    for p in range(2, n + 1):
        if any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            continue
        new = best[:]
        pk = p
        while pk <= n:
            for s in range(pk, n + 1):
                cand = best[s - pk] * pk
                if cand > new[s]:
                    new[s] = cand
            pk *= p
        best = new
    return best[n]


# ---------------------------------------------------------------------------
# verification


def default_mode(n: int) -> VerifyMode:
    if n <= EXHAUSTIVE_MAX:
        return VerifyMode("exhaustive")
    if n <= CLASS_REDUCED_MAX:
        return VerifyMode("class_reduced")
    if n <= SAMPLED_MAX:
        return VerifyMode("sampled", DEFAULT_SEED, 10_000)
    return VerifyMode("none")


def _even(perms: np.ndarray, n: int) -> np.ndarray:
    return perms[P.perm_signs(n) == 1]


def _pair_json(a, b, val) -> tuple[list, list]:
    return [np.asarray(a).tolist(), np.asarray(b).tolist()], np.asarray(val).tolist()


def verify_sym(e: WordExpr | Word, n: int, mode: VerifyMode | str = "exhaustive", jobs: int = 1,
               alt: bool = False, absorb: bool = True) -> Outcome:
    """Check ``e(s, t) = 1`` over pairs of Sym(n) (or Alt(n) with ``alt``).

    Class-reduced mode fixes ``s`` to one representative per cycle type and
    lets ``t`` range over the whole group.  Since ``e(s^g, t^g) = e(s, t)^g``
    this covers every pair.
    """
    e = as_expr(e)
    if isinstance(mode, str):
        mode = VerifyMode.parse(mode)
    if mode.kind == "none":
        return Outcome("unverified")
    limit = {"exhaustive": EXHAUSTIVE_MAX, "class_reduced": CLASS_REDUCED_MAX, "sampled": SAMPLED_MAX}[mode.kind]
    if n > limit:
        raise ScaleError(f"{mode.kind} verification needs n <= {limit}, got {n}")
    be = PermBatch(n)
    if mode.kind == "sampled":
        def sample(rng):
            p = rng.permutation(n)
            if alt and n >= 2 and Perm(tuple(p.tolist())).sign < 0:
                p[[0, 1]] = p[[1, 0]]
            return p
        blocks = sampled_blocks(sample, mode.seed or 0, mode.trials or 0)
    else:
        group = P.all_perms(n)
        if alt:
            group = _even(group, n)
        if mode.kind == "exhaustive":
            lefts = list(group)
        else:
            lefts = [np.asarray(r.images, dtype=np.intp) for r in P.conjugacy_class_reps(n)
                     if not alt or r.sign > 0]
        blocks = (blk for a in lefts for blk in chunked(a, group, CHUNK))
    checked, bad = sweep(e, be, blocks, jobs=jobs, absorb=absorb)
    if bad is None:
        return Outcome("verified", checked)
    w, v = _pair_json(*bad)
    return Outcome("counterexample", checked, w, v)


# ---------------------------------------------------------------------------
# generating pairs of Sym(k) / Alt(k)


@dataclass(frozen=True)
class PairSet:
    """Pairs (sigma, tau) of Sym(k), sigma a class representative."""

    k: int
    sigma: np.ndarray  # (P, k)
    tau: np.ndarray  # (P, k)
    kind: tuple[str, ...]  # "sym" or "alt" per pair

    def __len__(self):
        return len(self.kind)


@lru_cache(maxsize=None)
def generating_pairs(k: int) -> PairSet:
    """Class-representative pairs generating Sym(k) or a nontrivial Alt(k)."""
    if k > RANDOM_MAX:
        raise ScaleError(f"generating pair enumeration needs k <= {RANDOM_MAX}")
    sig, tau, kind = [], [], []
    if k >= 2:
        allp = P.all_perms(k)
        for r in P.conjugacy_class_reps(k):
            for t in allp:
                tp = Perm(tuple(t.tolist()))
                label = P.sym_or_alt([r, tp])
                if label is None or (label == "alt" and k < 3):
                    continue
                sig.append(r.images)
                tau.append(tp.images)
                kind.append(label)
    shape = (len(kind), k)
    s = np.array(sig, dtype=np.intp).reshape(shape)
    t = np.array(tau, dtype=np.intp).reshape(shape)
    s.setflags(write=False)
    t.setflags(write=False)
    return PairSet(k, s, t, tuple(kind))


def verify_symgen(e: WordExpr | Word, n: int, jobs: int = 1, absorb: bool = True) -> Outcome:
    """Check ``e`` on every class-representative pair generating Sym(k)/Alt(k), k <= n."""
    e = as_expr(e)
    checked = 0
    for k in range(2, n + 1):
        ps = generating_pairs(k)
        if not len(ps):
            continue
        be = PermBatch(k)
        keys = [tuple(r) for r in ps.sigma.tolist()]
        blocks = []
        start = 0
        for i in range(1, len(keys) + 1):
            if i == len(keys) or keys[i] != keys[start]:
                blocks.extend(chunked(ps.sigma[start], ps.tau[start:i], CHUNK))
                start = i
        c, bad = sweep(e, be, blocks, jobs=jobs, absorb=absorb)
        checked += c
        if bad is not None:
            w, v = _pair_json(*bad)
            return Outcome("counterexample", checked, w, v)
    return Outcome("verified", checked)


def verify_law(e: WordExpr | Word, spec: GroupSpec, mode: VerifyMode | str | None = None, jobs: int = 1) -> Outcome:
    """Dispatch on the group kind."""
    if isinstance(mode, str):
        mode = VerifyMode.parse(mode)
    if spec.kind in ("sym", "alt"):
        return verify_sym(e, spec.n, mode or default_mode(spec.n), jobs, alt=spec.kind == "alt")
    if spec.kind == "symgen":
        if mode is not None and mode.kind == "none":
            return Outcome("unverified")
        return verify_symgen(e, spec.n, jobs)
    from .lielaw.laws import verify_matrix_law

    return verify_matrix_law(e, spec, mode, jobs)


def _certificate(law: WordExpr, spec: GroupSpec, method: str, mode: VerifyMode | None, jobs: int,
                 seed=None, details=None) -> LawCertificate:
    if mode is None:
        mode = default_mode(spec.n) if spec.kind != "symgen" else VerifyMode("class_reduced")
    outcome = verify_law(law, spec, mode, jobs)
    return LawCertificate(law, spec, method, mode, outcome, nominal_length(law),
                          reduced_length_or_none(law), seed, details or {})


# ---------------------------------------------------------------------------
# Landau and order laws


def order_law(max_order: int, mode: VerifyMode | str | None = "none", n: int | None = None,
              jobs: int = 1) -> LawCertificate:
    """combine(a, a^2, ..., a^max_order); verified on Sym(n) when ``n`` is given."""
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    trace = combine(powers_of_a(range(1, max_order + 1)))
    spec = GroupSpec("sym", n if n is not None else 1)
    if isinstance(mode, str):
        mode = VerifyMode.parse(mode)
    if n is None:
        mode = VerifyMode("none")
    details = {"max_order": max_order, "m": trace.m, "collapses": trace.collapse_events}
    return _certificate(trace.output, spec, "order", mode, jobs, details=details)


def landau_law(n: int, mode: VerifyMode | str | None = None, jobs: int = 1) -> LawCertificate:
    if n < 2:
        raise ValueError("landau_law needs n >= 2")
    if isinstance(mode, str):
        mode = VerifyMode.parse(mode)
    g = landau_g(n)
    trace = combine(powers_of_a(range(1, g + 1)))
    details = {"g": g, "bound": 16 * g**3, "collapses": trace.collapse_events}
    return _certificate(trace.output, GroupSpec("sym", n), "landau", mode, jobs, details=details)


# ---------------------------------------------------------------------------
# randomized cycle words


@dataclass(frozen=True)
class RandomSearchConfig:
    seed: int = DEFAULT_SEED
    walk_length: int | None = None  # None: mixing bound of the pair's Cayley graph
    pool_budget: int = 16  # candidate words per attempt
    max_attempts: int = 200
    target_rule: str = "long_cycle"  # or "low_order"

    def __post_init__(self):
        if self.target_rule not in ("long_cycle", "low_order"):
            raise ValueError(f"unknown target rule {self.target_rule!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class Cover:
    k: int
    sigma: tuple[int, ...]
    tau: tuple[int, ...]
    kind: str
    word: int
    hit_order: int


@dataclass
class CycleWords:
    words: list[Word]
    cover: list[Cover]
    walk_lengths: dict[int, list[int]] = field(default_factory=dict)

    def orders(self) -> list[list[int]]:
        out = [set() for _ in self.words]
        for c in self.cover:
            out[c.word].add(c.hit_order)
        return [sorted(s) for s in out]


_STEPS = (1, -1, 2, -2)


def lazy_walk_word(rng: random.Random, length: int) -> Word:
    """Lazy simple random walk on F2 from the identity, as a reduced word."""
    out: list[int] = []
    for _ in range(length):
        r = rng.getrandbits(3)
        if r < 4:
            continue
        x = _STEPS[r - 4]
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return Word(tuple(out))


def _point_periods(res: np.ndarray) -> np.ndarray:
    """For each row and point, the length of its cycle."""
    rows, k = res.shape
    ident = np.arange(k)
    per = np.zeros((rows, k), dtype=np.int64)
    cur = np.broadcast_to(ident, (rows, k)).copy()
    for t in range(1, k + 1):
        cur = np.take_along_axis(res, cur, axis=1)
        per[(cur == ident) & (per == 0)] = t
    return per


def _hits(res: np.ndarray, kinds: np.ndarray, rule: str) -> tuple[np.ndarray, np.ndarray]:
    """(hit mask, order of each element) for a batch of Sym(k) elements."""
    k = res.shape[1]
    per = _point_periods(res)
    order = np.lcm.reduce(per, axis=1)
    if rule == "low_order":
        return (order > 1) & (order <= k), order
    want = np.where((kinds == "alt") & (k % 2 == 0), k - 1, k)
    cnt = (per == want[:, None]).sum(axis=1)
    fixed = (per == 1).sum(axis=1)
    return (cnt == want) & (fixed == k - want), order


def _eval_word_batch(w: Word, sigma: np.ndarray, tau: np.ndarray) -> np.ndarray:
    k = sigma.shape[1]
    from .evaluate import evaluate

    out = evaluate(Lit(w), [sigma, tau], PermBatch(k), absorb=False)
    return np.broadcast_to(out, sigma.shape)


def random_cycle_words(n: int, cfg: RandomSearchConfig | None = None) -> CycleWords:
    """Words from the lazy walk until every generating pair of Sym(k), k <= n, has a hit."""
    cfg = cfg or RandomSearchConfig()
    if n > RANDOM_MAX:
        raise ScaleError(f"random search needs n <= {RANDOM_MAX}")
    result = CycleWords([], [])
    index: dict[Word, int] = {}
    for k in range(2, n + 1):
        ps = generating_pairs(k)
        if not len(ps):
            continue
        kinds = np.array(ps.kind)
        open_ = np.ones(len(ps), dtype=bool)
        rng = random.Random(cfg.seed ^ k)
        lengths: list[int] = []
        walk_cache: dict[int, int] = {}

        def absorb(w: Word) -> None:
            idx = np.flatnonzero(open_)
            res = _eval_word_batch(w, ps.sigma[idx], ps.tau[idx])
            hit, order = _hits(res, kinds[idx], cfg.target_rule)
            if not hit.any():
                return
            if w not in index:
                index[w] = len(result.words)
                result.words.append(w)
            wi = index[w]
            for j in np.flatnonzero(hit):
                p = idx[j]
                result.cover.append(Cover(k, tuple(ps.sigma[p].tolist()), tuple(ps.tau[p].tolist()),
                                          ps.kind[p], wi, int(order[j])))
            open_[idx[hit]] = False

        for w in list(result.words):
            absorb(w)
        attempts = 0
        while open_.any():
            if attempts >= cfg.max_attempts:
                p = int(np.flatnonzero(open_)[0])
                raise CoverageFailure(k, (Perm(tuple(ps.sigma[p].tolist())), Perm(tuple(ps.tau[p].tolist()))))
            attempts += 1
            p = int(np.flatnonzero(open_)[0])
            if cfg.walk_length is not None:
                length = cfg.walk_length
            else:
                if p not in walk_cache:
                    g = build_cayley([Perm(tuple(ps.sigma[p].tolist())), Perm(tuple(ps.tau[p].tolist()))])
                    walk_cache[p] = mixing_bound(g.s_size, diameter(g), g.order)
                length = walk_cache[p]
            lengths.append(length)
            for _ in range(cfg.pool_budget):
                w = lazy_walk_word(rng, length)
                if w:
                    absorb(w)
                if not open_.any():
                    break
        result.walk_lengths[k] = lengths
    return result


def _power_terms(cw: CycleWords) -> list[WordExpr]:
    """w^h for every covering word and each hit order, deduplicated as reduced words."""
    terms: list[WordExpr] = []
    seen: set[Word] = set()
    for w, hs in zip(cw.words, cw.orders()):
        for h, p in zip(hs, power_closure([w], [hs])):
            if p in seen or not p:
                continue
            seen.add(p)
            terms.append(Lit(w) if h == 1 else Pow(Lit(w), h))
    return terms


def random_law(n: int, cfg: RandomSearchConfig | None = None, jobs: int = 1,
               mode: VerifyMode | str | None = None) -> LawCertificate:
    cfg = cfg or RandomSearchConfig()
    cw = random_cycle_words(n, cfg)
    terms = _power_terms(cw)
    if not terms:
        # nothing to kill; any non-trivial word will do
        terms = [Lit(Word((1,)))]
    trace = combine(terms)
    if isinstance(mode, str):
        mode = VerifyMode.parse(mode)
    details = {
        "config": asdict(cfg),
        "words": len(cw.words),
        "terms": len(terms),
        "pairs_covered": len(cw.cover),
        "hit_orders": cw.orders(),
        "walk_lengths": {str(k): v for k, v in cw.walk_lengths.items()},
        "collapses": trace.collapse_events,
    }
    return _certificate(trace.output, GroupSpec("symgen", max(n, 1)), "random",
                        mode or VerifyMode("class_reduced"), jobs, seed=cfg.seed, details=details)


# ---------------------------------------------------------------------------
# recursive assembly


def y_word(x_i: WordExpr | Word, x_j: WordExpr | Word) -> WordExpr:
    """x_i([x_j, c], [x_j, d]) pulled back to two letters via the standard images."""
    x_i, x_j = as_expr(x_i), as_expr(x_j)
    fp = Fingerprinter()
    for x in (x_i, x_j):
        if fp.is_identity(fp(x)) and not flatten(x):
            raise ValueError("y_word needs non-trivial inputs")
    inner = Subst(x_i, (Comm(x_j, Gen(2)), Comm(x_j, Gen(3))))
    return Subst(inner, standard_images())


def recursion_indices(n: int) -> list[tuple[int, int]]:
    """(i, j) with 1 <= i, j < log2(n) and 2^(i+j) < 4n, all strict."""
    top = [i for i in range(1, n.bit_length() + 1) if 2**i < n]
    return [(i, j) for i in top for j in top if 2 ** (i + j) < 4 * n]


def base_law() -> WordExpr:
    """a^2, the shortest law of Sym(2)."""
    return Lit(reduce([1, 1]))


def _order_bound(n: int, order_bound: int | None, c1: float | None) -> int:
    if order_bound is not None:
        return order_bound
    if c1 is not None:
        return max(1, math.floor(math.exp(c1 * math.log(n) ** 2)))
    return landau_g(n)


def recursive_law(n: int, cfg: RandomSearchConfig | None = None, mode: VerifyMode | str | None = None,
                  v_method: str = "auto", order_bound: int | None = None, c1: float | None = None,
                  jobs: int = 1, _memo: dict | None = None) -> LawCertificate:
    """combine({v, v'} + {y_ij}) with x_i the recursive law of Sym(2^i).

    ``v_method`` picks v: ``random`` (n <= 7), ``landau``, or ``auto``
    (random when feasible).  ``order_bound`` / ``c1`` set the order bound M
    of v' (default g(n)).
    """
    if n < 2:
        raise ValueError("recursive_law needs n >= 2")
    cfg = cfg or RandomSearchConfig()
    if isinstance(mode, str):
        mode = VerifyMode.parse(mode)
    memo = _memo if _memo is not None else {}
    spec = GroupSpec("sym", n)
    if n == 2:
        return _certificate(base_law(), spec, "recursive", mode, jobs, details={"base": True})
    method = v_method if v_method != "auto" else ("random" if n <= RANDOM_MAX else "landau")

    def x(i: int) -> WordExpr:
        key = (2**i, v_method)
        if key not in memo:
            memo[key] = recursive_law(2**i, cfg, VerifyMode("none"), v_method, None, None, jobs, memo).law
        return memo[key]

    if method == "random":
        v = random_law(n, cfg, jobs, VerifyMode("none")).law
    elif method == "landau":
        v = landau_law(n, VerifyMode("none")).law
    else:
        raise ValueError(f"unknown v_method {v_method!r}")
    M = _order_bound(n, order_bound, c1)
    v2 = order_law(M).law
    idx = recursion_indices(n)
    ys = [y_word(x(i), x(j)) for i, j in idx]
    trace = combine([v, v2] + ys)
    details = {
        "v_method": method,
        "order_bound": M,
        "indices": [list(p) for p in idx],
        "component_lengths": [nominal_length(e) for e in [v, v2] + ys],
        "collapses": trace.collapse_events,
    }
    return _certificate(trace.output, spec, "recursive", mode, jobs,
                        seed=cfg.seed if method == "random" else None, details=details)


# ---------------------------------------------------------------------------
# witness families for the subgroup case split


def witness_pairs(n: int) -> dict[str, list[tuple[Perm, Perm]]]:
    """Hand-built pairs of Sym(n) (n even, >= 4) landing in each case."""
    if n < 4 or n % 2:
        raise ValueError("witness families need even n >= 4")
    h = n // 2
    cyc = Perm.from_cycles([list(range(n))], n)
    out: dict[str, list[tuple[Perm, Perm]]] = {}
    out["full_sym"] = [(Perm.from_cycles([[0, 1]], n), cyc),
                       (Perm.from_cycles([[0, 1]], n), Perm.from_cycles([list(range(1, n))], n))]
    out["alt"] = [(Perm.from_cycles([[0, 1, 2]], n), Perm.from_cycles([list(range(1, n))], n))]
    out["intransitive"] = [
        (Perm.from_cycles([[0, 1], [h, h + 1]], n), Perm.from_cycles([list(range(h)), list(range(h, n))], n)),
        (Perm.from_cycles([[0, 1]], n), Perm.from_cycles([list(range(n - 1))], n)),
    ]
    swap = Perm.from_cycles([[i, i + h] for i in range(h)], n)
    shift = Perm.from_cycles([list(range(0, n, 2)), list(range(1, n, 2))], n)
    out["imprimitive"] = [
        (Perm.from_cycles([[0, 1]], n), shift),  # blocks {2i, 2i+1}
        (Perm.from_cycles([list(range(h)), [h, h + 1]], n), swap),  # two blocks of size h
    ]
    return out


# ---------------------------------------------------------------------------
# exponent inequality and length tables


@dataclass
class InequalityReport:
    m_lo: int
    m_hi: int
    checked: int
    violations: list[tuple[int, int, int]]
    threshold: int | None  # every m >= threshold in range is violation-free

    def to_json(self) -> dict:
        return {"m_lo": self.m_lo, "m_hi": self.m_hi, "checked": self.checked,
                "violations": [list(v) for v in self.violations], "threshold": self.threshold}


def admissible(i: int, j: int, m: int) -> bool:
    return 1 <= i < m and 1 <= j < m and i + j <= m + 1


def check_exponent_inequality(m_lo: int, m_hi: int) -> InequalityReport:
    """Every (i, j, m) with i, j < m, i + j <= m + 1 and i^4 + j^4 > m^4 - m^2.

    For fixed m and i the left side grows with j, so only the largest
    admissible j can be the first violation; all violating j are listed.
    """
    if not 1 <= m_lo <= m_hi <= 10**4:
        raise ValueError("need 1 <= m_lo <= m_hi <= 10^4")
    violations = []
    checked = 0
    last_bad = None
    for m in range(m_lo, m_hi + 1):
        rhs = m**4 - m**2
        for i in range(1, m):
            jmax = min(m - 1, m + 1 - i)
            checked += jmax
            if i**4 + jmax**4 <= rhs:
                continue
            for j in range(jmax, 0, -1):
                if i**4 + j**4 <= rhs:
                    break
                violations.append((i, j, m))
                last_bad = m
    threshold = m_lo if last_bad is None else last_bad + 1
    return InequalityReport(m_lo, m_hi, checked, sorted(violations, key=lambda v: (v[2], v[0], v[1])),
                            threshold if threshold <= m_hi else None)


@dataclass
class AlphaRow:
    n: int
    method: str
    nominal: int
    reduced: int | None
    mode: str
    verified: bool


def alpha_table(n_max: int, cfg: RandomSearchConfig | None = None, jobs: int = 1,
                methods: tuple[str, ...] = ("landau", "recursive")) -> list[AlphaRow]:
    """Length of each verified construction for n = 2..n_max."""
    if not 2 <= n_max <= 8:
        raise ValueError("alpha_table needs 2 <= n_max <= 8")
    rows = []
    memo: dict = {}
    for n in range(2, n_max + 1):
        for method in methods:
            if method == "landau":
                cert = landau_law(n, jobs=jobs)
            elif method == "recursive":
                cert = recursive_law(n, cfg, jobs=jobs, _memo=memo)
            elif method == "base" and n == 2:
                cert = _certificate(base_law(), GroupSpec("sym", 2), "given", None, jobs)
            else:
                continue
            rows.append(AlphaRow(n, cert.method, cert.nominal_length, cert.reduced_length,
                                 cert.mode.kind, cert.verified))
    return rows


def alpha_csv(rows: list[AlphaRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "method", "nominal", "reduced", "mode", "verified"])
    for r in rows:
        w.writerow([r.n, r.method, r.nominal, "" if r.reduced is None else r.reduced, r.mode, r.verified])
    return buf.getvalue()


def alpha_json(rows: list[AlphaRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=1) + "\n"
