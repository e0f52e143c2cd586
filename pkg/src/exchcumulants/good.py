"""
Root-of-unity expansion of cumulants, evaluated in exact cyclotomic arithmetic.

With a primitive ``n``-th root ``w`` and the sum of copies
``X^w = sum_k w**k X^(k)``, the ``n``-th cumulant is ``phi(X_1^w ... X_n^w) / n``.
Expanding the product gives one term per map ``g: [n] -> [n]``; grouping the
maps by kernel yields weights ``F(pi)`` in ``Z[w]`` and

    K_n = (1/n) sum_pi F(pi) phi_pi.

The weights are obtained by brute-force enumeration of all ``n**n`` maps,
independently of any Moebius function, which is what makes this an oracle for
the lattice formulas in :mod:`exchcumulants.engine`.
"""
from __future__ import annotations

import itertools
import math
import threading
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import DomainError, OracleError, SizeLimitError
from .partitions import SetPartition, enumerate_partitions, mobius_full, mobius_to_top
from .rings import MAX_CYCLOTOMIC_ORDER, CycloElement
from .systems import ExchangeabilitySystem

GOOD_CAP = 7


def _rgs(labels) -> tuple[int, ...]:
    seen: dict = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


def _count_maps(m: int, n: int, first: int | None = None) -> dict[tuple, list[int]]:
    """Histogram of ``sum(g) mod n`` per kernel over maps ``g: [m] -> [n]``
    (restricted to ``g(1) = first`` when given)."""
    counts: dict[tuple, list[int]] = {}
    heads = range(1, n + 1) if first is None else (first,)
    for head in heads:
        for tail in itertools.product(range(1, n + 1), repeat=m - 1):
            g = (head,) + tail
            row = counts.get(r := _rgs(g))
            if row is None:
                row = counts[r] = [0] * n
            row[sum(g) % n] += 1
    return counts


def _merge(parts, n):
    total: dict[tuple, list[int]] = {}
    for part in parts:
        for r, row in part.items():
            acc = total.setdefault(r, [0] * n)
            for e, c in enumerate(row):
                acc[e] += c
    return total


def _check_order(n: int):
    if not 1 <= n <= GOOD_CAP:
        raise SizeLimitError(f"the root-of-unity oracle is capped at n <= {GOOD_CAP}, got {n}")


_WEIGHTS: dict[int, dict[SetPartition, CycloElement]] = {}
_WEIGHTS_LOCK = threading.Lock()


def _compute_weights(n: int, jobs: int) -> dict[SetPartition, CycloElement]:
    if jobs > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            counts = _merge(pool.map(_count_maps, [n] * n, [n] * n, range(1, n + 1)), n)
    else:
        counts = _count_maps(n, n)
    weights = {SetPartition.from_rgs(r): CycloElement(n, row) for r, row in counts.items()}
    for pi, mu in mobius_to_top(n).items():
        if weights.get(pi) != n * mu:
            raise OracleError(f"F({pi}) = {weights.get(pi)!r}, expected {n * mu}")
    for m in range(1, n):
        for r, row in _count_maps(m, n).items():
            if CycloElement(n, row) != 0:
                raise OracleError(f"subword weight of {r} (length {m} < {n}) does not vanish")
    return weights


def good_weights(n: int, jobs: int = 1) -> dict[SetPartition, CycloElement]:
    """``{pi: F(pi)}`` with ``F(pi) = sum_{ker g = pi} w**(g(1)+...+g(n))``.

    Side checks performed on the way: ``F(pi) = n mu(pi, 1_n)`` for every
    ``pi``, and the weights of every shorter subword vanish.  Raises
    :class:`OracleError` if either fails.  Results do not depend on ``jobs``.
    """
    _check_order(n)
    weights = _WEIGHTS.get(n)
    if weights is None:
        weights = _compute_weights(n, max(jobs, 1))
        with _WEIGHTS_LOCK:
            weights = _WEIGHTS.setdefault(n, weights)
    return weights


def _resolve(total: CycloElement, what: str):
    try:
        return total.base_value()
    except ArithmeticError:
        raise OracleError(f"{what}: cyclotomic residue {total!r} is not zero") from None


def good_expansion(system: ExchangeabilitySystem, word: Sequence[str], jobs: int = 1) -> CycloElement:
    """``phi(X_1^w ... X_n^w) = sum_pi F(pi) phi_pi`` as an element of the
    cyclotomic extension of the system's ring."""
    word = tuple(word)
    n = len(word)
    weights = good_weights(n, jobs)
    total = CycloElement.scalar(n, 0)
    for pi, f in weights.items():
        total = total + f.scale(system.phi(word, pi))
    return total


def good_cumulant(system: ExchangeabilitySystem, word: Sequence[str], jobs: int = 1):
    """``K_n`` through the root-of-unity expansion."""
    word = tuple(word)
    total = good_expansion(system, word, jobs)
    return Fraction(1, len(word)) * _resolve(total, f"K_{len(word)}{word}")


# -- partitioned version -----------------------------------------------------------


@lru_cache(maxsize=None)
def partitioned_weights(pi: SetPartition) -> tuple[int, dict[SetPartition, CycloElement]]:
    """Weights of the block-wise root-of-unity expansion of ``K_pi``.

    Each block ``B`` uses its own copies and a primitive ``|B|``-th root
    ``w_B = w_L**(L/|B|)`` with ``L`` the lcm of the block sizes.  Returns
    ``(L, {sigma: W(sigma)})``; checks ``W(sigma) = prod|B| mu(sigma, pi)``.
    """
    sizes = pi.block_sizes()
    order = math.lcm(*sizes)
    if order > MAX_CYCLOTOMIC_ORDER:
        raise SizeLimitError(f"lcm of block sizes {order} exceeds {MAX_CYCLOTOMIC_ORDER}")
    if math.prod(b**b for b in sizes) > GOOD_CAP**GOOD_CAP:
        raise SizeLimitError(f"partitioned expansion of {pi} is too large")
    owner = [pi.rgs[i] for i in range(pi.n)]
    step = [order // sizes[owner[i]] for i in range(pi.n)]
    ranges = [range(1, sizes[owner[i]] + 1) for i in range(pi.n)]
    counts: dict[tuple, list[int]] = {}
    for g in itertools.product(*ranges):
        r = _rgs(zip(owner, g))
        row = counts.get(r)
        if row is None:
            row = counts[r] = [0] * order
        row[sum(s * k for s, k in zip(step, g)) % order] += 1
    weights = {SetPartition.from_rgs(r): CycloElement(order, row) for r, row in counts.items()}
    scale = math.prod(sizes)
    for sigma, w in weights.items():
        if w != scale * mobius_full(sigma, pi):
            raise OracleError(f"W({sigma}) under {pi} = {w!r}, expected {scale * mobius_full(sigma, pi)}")
    return order, weights


def good_partitioned(system: ExchangeabilitySystem, word: Sequence[str], pi: SetPartition):
    """``K_pi`` through the block-wise root-of-unity expansion."""
    word = tuple(word)
    if pi.n != len(word):
        raise DomainError(f"word of length {len(word)} with a partition of {pi.n}")
    order, weights = partitioned_weights(pi)
    total = CycloElement.scalar(order, 0)
    for sigma, w in weights.items():
        total = total + w.scale(system.phi(word, sigma))
    return Fraction(1, math.prod(pi.block_sizes())) * _resolve(total, f"K_{pi}{word}")


def check_weights(n: int) -> list[tuple[SetPartition, CycloElement, int]]:
    """``(pi, F(pi), n mu(pi, 1_n))`` for every ``pi`` in ``Pi_n``.

    ``F`` is recomputed from the raw map enumeration, without the side
    assertions of :func:`good_weights`, so callers can inspect mismatches.
    """
    _check_order(n)
    raw = {SetPartition.from_rgs(r): CycloElement(n, row) for r, row in _count_maps(n, n).items()}
    top = SetPartition.one(n)
    return [(pi, raw.get(pi, CycloElement.scalar(n, 0)), n * mobius_full(pi, top)) for pi in enumerate_partitions(n)]


def subword_weights(m: int, n: int) -> dict[SetPartition, CycloElement]:
    """Kernel-grouped weights of maps ``[m] -> [n]``; all zero when ``m < n``."""
    return {SetPartition.from_rgs(r): CycloElement(n, row) for r, row in _count_maps(m, n).items()}
