"""
Set partitions of ``{1, ..., n}`` and the lattices built from them.

A :class:`SetPartition` is stored in canonical form: every block is sorted
ascending and the blocks are sorted by their minimum.  The restricted growth
string (RGS) of a partition labels each element by the index of its block, so
``{{1,3},{2,4}}`` has RGS ``0101``.  Enumerations run in RGS lexicographic
order.

Three lattices are supported: the full partition lattice, the noncrossing
partitions and the interval partitions, each with its own Moebius function.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, OrderError, SizeLimitError

#: Default hard cap on the ground-set size for enumerations (Bell(10) = 115975).
DEFAULT_CAP = 10

Block = tuple[int, ...]


class SetPartition:
    """A partition of ``{1, ..., n}`` in canonical form.

    Parameters
    ----------
    blocks : iterable of iterables of int
        The blocks.  They must be non-empty, pairwise disjoint and cover
        ``1..n``; order within and between blocks is irrelevant.
    n : int, optional
        Ground-set size.  Inferred from the blocks when omitted.

    The refinement order is available both as :meth:`refines` and through the
    comparison operators, in the same spirit as :class:`frozenset`:
    ``pi <= sigma`` means every block of ``pi`` lies inside a block of
    ``sigma``.
    """

    __slots__ = ("n", "blocks", "rgs", "_hash")

    def __init__(self, blocks: Iterable[Iterable[int]], n: int | None = None):
        blks = [tuple(sorted(b)) for b in blocks]
        if any(len(b) == 0 for b in blks):
            raise DomainError("blocks must be non-empty")
        elements = sorted(itertools.chain.from_iterable(blks))
        if n is None:
            n = len(elements)
        if elements != list(range(1, n + 1)):
            raise DomainError(f"blocks do not partition {{1..{n}}}: {blks}")
        blks.sort(key=lambda b: b[0])
        rgs = [0] * n
        for label, b in enumerate(blks):
            for i in b:
                rgs[i - 1] = label
        self._set(n, tuple(blks), tuple(rgs))

    def _set(self, n, blocks, rgs):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "rgs", rgs)
        object.__setattr__(self, "_hash", hash(rgs))

    def __setattr__(self, name, value):
        raise AttributeError("SetPartition is immutable")

    @classmethod
    def _from_rgs(cls, rgs: Sequence[int]) -> SetPartition:
        # rgs must already be a valid restricted growth string
        k = max(rgs) + 1 if rgs else 0
        blocks = [[] for _ in range(k)]
        for i, label in enumerate(rgs, start=1):
            blocks[label].append(i)
        self = cls.__new__(cls)
        self._set(len(rgs), tuple(tuple(b) for b in blocks), tuple(rgs))
        return self

    @classmethod
    def from_rgs(cls, rgs: str | Sequence[int]) -> SetPartition:
        """Build a partition from an RGS, given as a digit string or a sequence."""
        labels = [int(c) for c in rgs]
        return kernel(labels)

    @classmethod
    def from_json(cls, data) -> SetPartition:
        """Inverse of :meth:`to_json`."""
        return cls(data)

    @classmethod
    def one(cls, n: int) -> SetPartition:
        """The maximal partition with a single block."""
        return cls._from_rgs((0,) * n)

    @classmethod
    def zero(cls, n: int) -> SetPartition:
        """The minimal partition into singletons."""
        return cls._from_rgs(tuple(range(n)))

    # -- basic protocol -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, SetPartition):
            return NotImplemented
        return self.rgs == other.rgs

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __repr__(self):
        return f"SetPartition({self})"

    def __str__(self):
        inner = ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)
        return "{" + inner + "}"

    def __le__(self, other):
        return self.refines(other)

    def __lt__(self, other):
        return self != other and self.refines(other)

    def __ge__(self, other):
        return other.refines(self)

    def __gt__(self, other):
        return self != other and other.refines(self)

    def to_rgs_string(self) -> str:
        """RGS as a digit string; only meaningful for ``n <= 10``."""
        return "".join(map(str, self.rgs))

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def block_of(self, i: int) -> Block:
        return self.blocks[self.rgs[i - 1]]

    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    # -- lattice operations ---------------------------------------------------

    def _check_same_n(self, other):
        if self.n != other.n:
            raise DomainError(f"ground sets differ: {self.n} != {other.n}")

    def refines(self, other: SetPartition) -> bool:
        """True if every block of ``self`` lies inside a block of ``other``."""
        self._check_same_n(other)
        lab = other.rgs
        return all(len({lab[i - 1] for i in b}) == 1 for b in self.blocks)

    def meet(self, other: SetPartition) -> SetPartition:
        self._check_same_n(other)
        return kernel(list(zip(self.rgs, other.rgs)))

    def join(self, other: SetPartition) -> SetPartition:
        self._check_same_n(other)
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for part in (self, other):
            for b in part.blocks:
                r = find(b[0] - 1)
                for i in b[1:]:
                    s = find(i - 1)
                    if s != r:
                        parent[s] = r
        return kernel([find(i) for i in range(self.n)])

    def restrict(self, positions: Sequence[int]) -> SetPartition:
        """Restriction to ``positions`` (1-based), relabelled to ``1..len(positions)``."""
        return kernel([self.rgs[i - 1] for i in positions])

    # -- classification -------------------------------------------------------

    def is_noncrossing(self) -> bool:
        last = {}
        for i, lab in enumerate(self.rgs):
            last[lab] = i
        stack = []
        for i, lab in enumerate(self.rgs):
            if stack and stack[-1] == lab:
                continue
            if lab in stack:
                while stack[-1] != lab:
                    if last[stack.pop()] > i:
                        return False
            else:
                stack.append(lab)
        return True

    def is_interval(self) -> bool:
        return all(b[-1] - b[0] + 1 == len(b) for b in self.blocks)

    def is_connected(self) -> bool:
        return len(connected_components(self)) <= 1

    def is_irreducible(self) -> bool:
        if self.n == 0:
            return True
        comps = connected_components(self)
        return any(1 in _support(c) and self.n in _support(c) for c in comps)


def _support(fragment: Sequence[Block]) -> set[int]:
    return set(itertools.chain.from_iterable(fragment))


def blocks_cross(a: Block, b: Block) -> bool:
    """True if the two (disjoint, sorted) blocks interleave as ``a b a b``."""
    merged = sorted([(x, 0) for x in a] + [(x, 1) for x in b])
    changes = sum(1 for u, v in zip(merged, merged[1:]) if u[1] != v[1])
    return changes >= 3


def kernel(word: Sequence) -> SetPartition:
    """Partition of positions ``1..n`` into level sets of ``word``."""
    if len(word) == 0:
        raise DomainError("kernel of an empty word")
    seen = {}
    rgs = []
    for x in word:
        if x not in seen:
            seen[x] = len(seen)
        rgs.append(seen[x])
    return SetPartition._from_rgs(rgs)


# -- enumeration ----------------------------------------------------------------


def _check_size(n: int, cap: int | None):
    cap = DEFAULT_CAP if cap is None else cap
    if n < 1:
        raise SizeLimitError(f"ground-set size must be positive, got {n}")
    if n > cap:
        raise SizeLimitError(f"n={n} exceeds the enumeration cap {cap}")


def _rgs_iter(n: int) -> Iterator[tuple[int, ...]]:
    rgs = [0] * n

    def rec(i, top):
        if i == n:
            yield tuple(rgs)
            return
        for v in range(top + 2):
            rgs[i] = v
            yield from rec(i + 1, max(top, v))

    yield from rec(1, 0)


@lru_cache(maxsize=None)
def _all_partitions(n: int) -> tuple[SetPartition, ...]:
    return tuple(SetPartition._from_rgs(r) for r in _rgs_iter(n))


def enumerate_partitions(n: int, cap: int | None = None) -> tuple[SetPartition, ...]:
    """All partitions of ``[n]`` in RGS lexicographic order."""
    _check_size(n, cap)
    return _all_partitions(n)


def enumerate_noncrossing(n: int, cap: int | None = None) -> tuple[SetPartition, ...]:
    return tuple(p for p in enumerate_partitions(n, cap) if p.is_noncrossing())


def enumerate_interval(n: int, cap: int | None = None) -> tuple[SetPartition, ...]:
    return tuple(p for p in enumerate_partitions(n, cap) if p.is_interval())


def enumerate_connected(n: int, cap: int | None = None) -> tuple[SetPartition, ...]:
    return tuple(p for p in enumerate_partitions(n, cap) if p.is_connected())


def set_partitions(elements: Sequence) -> Iterator[list[list]]:
    """All partitions of an arbitrary finite sequence, as lists of lists."""
    elements = list(elements)
    if not elements:
        yield []
        return
    for rgs in _rgs_iter(len(elements)):
        blocks = [[] for _ in range(max(rgs) + 1)]
        for x, lab in zip(elements, rgs):
            blocks[lab].append(x)
        yield blocks


@lru_cache(maxsize=4096)
def refinements(pi: SetPartition) -> tuple[SetPartition, ...]:
    """All ``sigma <= pi``, i.e. the interval ``[0, pi]`` of the full lattice."""
    per_block = [list(set_partitions(b)) for b in pi.blocks]
    out = []
    for choice in itertools.product(*per_block):
        out.append(SetPartition(itertools.chain.from_iterable(choice), n=pi.n))
    return tuple(out)


def coarsenings(sigma: SetPartition, pi: SetPartition | None = None) -> Iterator[SetPartition]:
    """All ``tau`` with ``sigma <= tau`` (and ``tau <= pi`` when given)."""
    if pi is None:
        groups = [list(range(len(sigma)))]
    else:
        if not sigma.refines(pi):
            raise OrderError(f"{sigma} does not refine {pi}")
        groups = [[] for _ in pi.blocks]
        for k, b in enumerate(sigma.blocks):
            groups[pi.rgs[b[0] - 1]].append(k)
    per_group = [list(set_partitions(g)) for g in groups]
    for choice in itertools.product(*per_group):
        merged = [
            tuple(itertools.chain.from_iterable(sigma.blocks[k] for k in grp))
            for grp in itertools.chain.from_iterable(choice)
        ]
        yield SetPartition(merged, n=sigma.n)


# -- structure ------------------------------------------------------------------


@lru_cache(maxsize=65536)
def connected_components(pi: SetPartition) -> tuple[tuple[Block, ...], ...]:
    """Connected components of the crossing graph on the blocks of ``pi``.

    Each component is a tuple of blocks; components are ordered by their
    smallest element.
    """
    k = len(pi.blocks)
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in itertools.combinations(range(k), 2):
        if blocks_cross(pi.blocks[i], pi.blocks[j]):
            parent[find(j)] = find(i)
    comps: dict[int, list[Block]] = {}
    for i in range(k):
        comps.setdefault(find(i), []).append(pi.blocks[i])
    return tuple(sorted((tuple(c) for c in comps.values()), key=lambda c: c[0][0]))


def noncrossing_closure(pi: SetPartition) -> SetPartition:
    """Merge every connected component into a single block."""
    return SetPartition(
        [itertools.chain.from_iterable(c) for c in connected_components(pi)], n=pi.n
    )


def irreducible_factors(pi: SetPartition) -> tuple[tuple[Block, ...], ...]:
    """Split ``pi`` at every cut point no block straddles."""
    factors: list[list[Block]] = []
    reach = 0
    for b in pi.blocks:
        if factors and b[0] < reach:
            factors[-1].append(b)
        else:
            factors.append([b])
        reach = max(reach, b[-1])
    return tuple(tuple(f) for f in factors)


def interval_closure(pi: SetPartition) -> SetPartition:
    return SetPartition(
        [itertools.chain.from_iterable(f) for f in irreducible_factors(pi)], n=pi.n
    )


def inner_outer_blocks(pi: SetPartition) -> dict[Block, str]:
    """Label each block of a noncrossing partition ``"inner"`` or ``"outer"``."""
    if not pi.is_noncrossing():
        raise DomainError(f"{pi} is not noncrossing")
    out = {}
    for b in pi.blocks:
        lo, hi = b[0], b[-1]
        inner = any(
            c is not b and c[0] < lo and c[-1] > hi for c in pi.blocks
        )
        out[b] = "inner" if inner else "outer"
    return out


def reduced_crossings(pi: SetPartition, degrees: Sequence[int] | None = None) -> int:
    """Left reduced crossing number.

    For blocks ``A`` before ``B`` (ordered by minima) this counts pairs
    ``a in A``, ``b in B`` with ``min(B) < a < b``.  With ``degrees`` given
    (one per position) each pair is weighted by ``degrees[a] * degrees[b]``.
    """
    total = 0
    blocks = pi.blocks
    for i, a_blk in enumerate(blocks):
        for b_blk in blocks[i + 1:]:
            start = b_blk[0]
            for a in a_blk:
                if a <= start:
                    continue
                for b in b_blk:
                    if b > a:
                        total += 1 if degrees is None else degrees[a - 1] * degrees[b - 1]
    return total


# -- Moebius functions ------------------------------------------------------------


def mobius_full(sigma: SetPartition, pi: SetPartition) -> int:
    """Moebius function of the full partition lattice (closed form)."""
    if not sigma.refines(pi):
        raise OrderError(f"{sigma} does not refine {pi}")
    counts = [0] * len(pi.blocks)
    for b in sigma.blocks:
        counts[pi.rgs[b[0] - 1]] += 1
    value = 1
    for k in counts:
        value *= (-1) ** (k - 1) * math.factorial(k - 1)
    return value


def _sublattice_mobius(sigma, pi, member) -> int:
    if not sigma.refines(pi):
        raise OrderError(f"{sigma} does not refine {pi}")
    if not (member(sigma) and member(pi)):
        raise DomainError(f"{sigma} or {pi} is not in the sublattice")
    return _sub_mu(sigma, pi, member)


@lru_cache(maxsize=None)
def _sub_mu(sigma, pi, member) -> int:
    if sigma == pi:
        return 1
    return -sum(
        _sub_mu(sigma, tau, member)
        for tau in coarsenings(sigma, pi)
        if tau != pi and member(tau)
    )


def _is_nc(p):
    return p.is_noncrossing()


def _is_int(p):
    return p.is_interval()


def mobius_nc(sigma: SetPartition, pi: SetPartition) -> int:
    """Moebius function of the noncrossing lattice, by the defining recursion."""
    return _sublattice_mobius(sigma, pi, _is_nc)


def mobius_interval(sigma: SetPartition, pi: SetPartition) -> int:
    """Moebius function of the interval-partition lattice, by the defining recursion."""
    return _sublattice_mobius(sigma, pi, _is_int)


LATTICES = {
    "full": (enumerate_partitions, mobius_full),
    "nc": (enumerate_noncrossing, mobius_nc),
    "interval": (enumerate_interval, mobius_interval),
}


def lattice(name: str):
    """Return ``(enumerator, mobius)`` for ``"full"``, ``"nc"`` or ``"interval"``."""
    try:
        return LATTICES[name]
    except KeyError:
        raise DomainError(f"unknown lattice {name!r}") from None


@lru_cache(maxsize=None)
def mobius_to_top(n: int, name: str = "full") -> dict[SetPartition, int]:
    """``{pi: mu(pi, 1_n)}`` over the named lattice."""
    enum, mu = lattice(name)
    top = SetPartition.one(n)
    return {p: mu(p, top) for p in enum(n)}


def mobius_matrix(elements: Sequence, leq) -> list[list[int]]:
    """Invert the zeta matrix of a finite poset by back substitution.

    ``elements`` must be listed along a linear extension of ``leq`` (every
    element after all elements below it).  Returns ``mu`` as a dense integer
    matrix indexed like ``elements``.
    """
    m = len(elements)
    zeta = [[1 if leq(elements[i], elements[j]) else 0 for j in range(m)] for i in range(m)]
    for i in range(m):
        for j in range(i):
            if zeta[i][j]:
                raise DomainError("elements are not in a linear extension order")
    mu = [[0] * m for _ in range(m)]
    # solve zeta @ mu = I column by column; zeta is upper unitriangular
    for j in range(m):
        for i in range(j, -1, -1):
            acc = 1 if i == j else 0
            for k in range(i + 1, j + 1):
                if zeta[i][k]:
                    acc -= mu[k][j]
            mu[i][j] = acc
    return mu


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)
