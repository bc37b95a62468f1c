"""Pair sweeps: evaluate a law on blocks of (a, batch of b) and stop at the first failure."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator

import numpy as np

from .evaluate import evaluate
from .word import WordExpr

# (value for a, batch of values for b); b has a leading batch axis
Block = tuple[np.ndarray, np.ndarray]


def _check_block(expr: WordExpr, backend, block: Block, absorb: bool):
    a, bs = block
    out = evaluate(expr, [a, bs], backend, absorb=absorb)
    if backend.is_identity(out):
        return len(bs), None
    mask = np.broadcast_to(backend.identity_mask(out), (len(bs),))
    j = int(np.argmin(mask))
    val = out if np.ndim(out) < np.ndim(bs) else out[j]
    aj = a[j] if np.ndim(a) == np.ndim(bs) else a
    return len(bs), (aj, bs[j], val)


def sweep(expr: WordExpr, backend, blocks: Iterable[Block], jobs: int = 1, absorb: bool = True):
    """(pairs checked, first failing ``(a, b, value)`` or None).

    With ``jobs > 1`` blocks are evaluated on a thread pool; numpy releases
    the GIL inside the heavy indexing.  The reported failure is the first in
    block order either way, so results do not depend on ``jobs``.
    """
    checked = 0
    if jobs <= 1:
        for block in blocks:
            k, bad = _check_block(expr, backend, block, absorb)
            checked += k
            if bad is not None:
                return checked, bad
        return checked, None
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        for k, bad in pool.map(lambda b: _check_block(expr, backend, b, absorb), blocks):
            checked += k
            if bad is not None:
                return checked, bad
    return checked, None


def chunked(a: np.ndarray, bs: np.ndarray, size: int) -> Iterator[Block]:
    for start in range(0, len(bs), size):
        yield a, bs[start:start + size]


def sampled_blocks(sample: Callable[[np.random.Generator], np.ndarray], seed: int, trials: int,
                   chunk: int = 4096) -> Iterator[Block]:
    """Random (a, b) pairs in chunks, both sides batched."""
    rng = np.random.default_rng(seed)
    left = trials
    while left > 0:
        k = min(chunk, left)
        a = np.stack([sample(rng) for _ in range(k)])
        b = np.stack([sample(rng) for _ in range(k)])
        yield a, b
        left -= k
