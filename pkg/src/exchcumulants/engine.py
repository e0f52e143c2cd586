"""
Cumulants of exchangeability systems and the identities relating them to
moments.

Everything here works over any commutative ring the systems produce
(rationals, moment polynomials, dual pairs, matrices): only addition, integer
multiples and products are used, plus division by ``n`` where a formula asks
for it.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DomainError
from .moments import FunctionMoments, MomentSource
from .partitions import (
    SetPartition,
    enumerate_connected,
    enumerate_partitions,
    lattice,
    mobius_full,
    mobius_to_top,
    refinements,
    set_partitions,
)
from .systems import (
    ExchangeabilitySystem,
    MixtureSystem,
    TensorSystem,
    block_word,
    product,
)


def _sum(values: Iterable, zero=0):
    total = zero
    for v in values:
        total = total + v
    return total


# -- Moebius inversion ------------------------------------------------------------


@dataclass
class CumulantTable:
    """Partitioned cumulants ``K_pi`` of one word, for every ``pi`` in ``Pi_n``."""

    word: tuple
    entries: dict[SetPartition, object]
    ring: str = "scalar"

    @property
    def n(self) -> int:
        return len(self.word)

    def __getitem__(self, pi: SetPartition):
        return self.entries[pi]

    def __iter__(self):
        return iter(self.entries.items())

    def top(self):
        return self.entries[SetPartition.one(self.n)]


def cumulant(system: ExchangeabilitySystem, word: Sequence[str], cap: int | None = None):
    """``K_n = sum_pi phi_pi mu(pi, 1_n)``."""
    word = tuple(word)
    if not word:
        raise DomainError("cumulant of the empty word")
    enumerate_partitions(len(word), cap)
    return _sum(c * system.phi(word, pi) for pi, c in mobius_to_top(len(word)).items())


def cumulant_partitioned(system: ExchangeabilitySystem, word: Sequence[str], pi: SetPartition):
    """``K_pi = sum_{sigma <= pi} phi_sigma mu(sigma, pi)``."""
    word = tuple(word)
    if pi.n != len(word):
        raise DomainError(f"word of length {len(word)} with a partition of {pi.n}")
    return _sum(mobius_full(s, pi) * system.phi(word, s) for s in refinements(pi))


def cumulant_table(system: ExchangeabilitySystem, word: Sequence[str], cap: int | None = None) -> CumulantTable:
    word = tuple(word)
    parts = enumerate_partitions(len(word), cap)
    return CumulantTable(word, {pi: cumulant_partitioned(system, word, pi) for pi in parts}, system.ring)


def moment_from_cumulants(table: CumulantTable, sigma: SetPartition):
    """``phi_sigma = sum_{pi <= sigma} K_pi``."""
    return _sum(table[pi] for pi in refinements(sigma))


# -- grouped words and the product formula ----------------------------------------


@dataclass(frozen=True)
class GroupedWord:
    """A flat word cut into consecutive groups of sizes ``sizes``."""

    word: tuple
    sizes: tuple

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        object.__setattr__(self, "sizes", tuple(self.sizes))
        if any(s < 1 for s in self.sizes) or sum(self.sizes) != len(self.word):
            raise DomainError(f"group sizes {self.sizes} do not cut a word of length {len(self.word)}")

    @property
    def m(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return len(self.word)

    def groups(self) -> list[tuple[int, ...]]:
        out, start = [], 1
        for s in self.sizes:
            out.append(tuple(range(start, start + s)))
            start += s
        return out

    def inflate(self, pi: SetPartition) -> SetPartition:
        """The partition of ``[n]`` obtained by replacing each group index by its positions."""
        if pi.n != self.m:
            raise DomainError(f"partition of {pi.n} for {self.m} groups")
        g = self.groups()
        return SetPartition([itertools.chain.from_iterable(g[i - 1] for i in b) for b in pi.blocks], n=self.n)

    @property
    def base(self) -> SetPartition:
        """The interval partition whose blocks are the groups."""
        return self.inflate(SetPartition.zero(self.m))


def indecomposable_partitions(grouped: GroupedWord, pi: SetPartition | None = None) -> list[SetPartition]:
    """All ``sigma`` in ``Pi_n`` with ``sigma v base == inflate(pi)``."""
    if pi is None:
        pi = SetPartition.one(grouped.m)
    target = grouped.inflate(pi)
    base = grouped.base
    return [s for s in refinements(target) if s.join(base) == target]


def product_cumulant(system: ExchangeabilitySystem, grouped: GroupedWord, pi: SetPartition | None = None):
    """Both sides of the product formula for cumulants with products as entries.

    Returns ``(lhs, rhs)`` where ``lhs`` is ``K_pi`` of the group products,
    computed from the group-level partitioned moments ``phi_{rho~}``, and
    ``rhs`` is the sum of flat ``K_sigma`` over indecomposable ``sigma``.
    """
    if pi is None:
        pi = SetPartition.one(grouped.m)
    lhs = _sum(mobius_full(r, pi) * system.phi(grouped.word, grouped.inflate(r)) for r in refinements(pi))
    rhs = _sum(cumulant_partitioned(system, grouped.word, s) for s in indecomposable_partitions(grouped, pi))
    return lhs, rhs


def compositions(n: int) -> Iterable[tuple[int, ...]]:
    """All ordered group-size tuples summing to ``n``."""
    for cuts in itertools.product((False, True), repeat=n - 1):
        sizes, run = [], 1
        for c in cuts:
            if c:
                sizes.append(run)
                run = 1
            else:
                run += 1
        sizes.append(run)
        yield tuple(sizes)


# -- recursion, identity removal ---------------------------------------------------


def recursion_moment(system: ExchangeabilitySystem, word: Sequence[str]):
    """``phi(X_1...X_n) = sum_{A containing 1} sum_{pi in Pi([n] - A)} K_{pi + {A}}``."""
    word = tuple(word)
    n = len(word)
    total = 0
    rest = range(2, n + 1)
    for k in range(n):
        for others in itertools.combinations(rest, k):
            a = (1,) + others
            remaining = [i for i in rest if i not in others]
            for blocks in set_partitions(remaining):
                sigma = SetPartition([a, *blocks], n=n)
                total = total + cumulant_partitioned(system, word, sigma)
    return total


def classical_recursion(moments: Sequence) -> list:
    """Univariate classical cumulants from ``m_1, m_2, ...``:
    ``k_n = m_n - sum_{k<n} C(n-1, k-1) k_k m_{n-k}``."""
    m = [Fraction(1)] + list(moments)
    kappa = [None]
    for n in range(1, len(m)):
        acc = m[n]
        for k in range(1, n):
            acc = acc - math.comb(n - 1, k - 1) * kappa[k] * m[n - k]
        kappa.append(acc)
    return kappa[1:]


def remove_identity_check(system: ExchangeabilitySystem, word: Sequence[str], pi: SetPartition):
    """``(K_pi(word), expected)`` for a word containing unit letters.

    A unit in a block of size two or more forces ``K_pi = 0``; units that are
    singletons may be dropped together with their positions.
    """
    word = tuple(word)
    lhs = cumulant_partitioned(system, word, pi)
    units = [i for i, x in enumerate(word, start=1) if x in system.units]
    if any(len(pi.block_of(i)) > 1 for i in units):
        return lhs, 0
    keep = [i for i in range(1, len(word) + 1) if i not in units]
    if not keep:
        return lhs, system.one
    return lhs, cumulant_partitioned(system, block_word(word, keep), pi.restrict(keep))


# -- lattice transforms of plain moment sources -------------------------------------


def lattice_cumulant(source: MomentSource, word: Sequence[str], name: str = "full"):
    """``sum_{pi in L_n} mu_L(pi, 1) prod_B m(word|B)`` for ``L`` full, nc or interval."""
    word = tuple(word)
    return _sum(
        c * product(source(block_word(word, b)) for b in pi.blocks)
        for pi, c in mobius_to_top(len(word), name).items()
    )


def lattice_moment(cumulants: MomentSource, word: Sequence[str], name: str = "full"):
    """Inverse of :func:`lattice_cumulant`: ``sum_{pi in L_n} prod_B k(word|B)``."""
    word = tuple(word)
    enum, _ = lattice(name)
    return _sum(product(cumulants(block_word(word, b)) for b in pi.blocks) for pi in enum(len(word)))


def univariate_cumulants(moments: Sequence, name: str = "full") -> list:
    src = _univariate(moments)
    return [lattice_cumulant(src, ("x",) * n, name) for n in range(1, len(moments) + 1)]


def univariate_moments(cumulants: Sequence, name: str = "full") -> list:
    src = _univariate(cumulants)
    return [lattice_moment(src, ("x",) * n, name) for n in range(1, len(cumulants) + 1)]


def _univariate(seq):
    seq = list(seq)
    return FunctionMoments(lambda w: seq[len(w) - 1])


def free_from_classical(moments: Sequence) -> list:
    """Free cumulants as sums of classical ``kappa_pi`` over connected partitions."""
    kappa = classical_recursion(moments)
    return [
        _sum(product(kappa[len(b) - 1] for b in pi.blocks) for pi in enumerate_connected(n))
        for n in range(1, len(moments) + 1)
    ]


# -- mixtures ---------------------------------------------------------------------


def classical_joint_cumulant(expect, k: int):
    """Classical joint cumulant of ``k`` variables given ``expect(subset)``,
    the expectation of the product over a tuple of indices ``0..k-1``."""
    return _sum(
        c * product(expect(tuple(i - 1 for i in b)) for b in pi.blocks)
        for pi, c in mobius_to_top(k).items()
    )


def brillinger(mixture: MixtureSystem, word: Sequence[str]):
    """Classical cumulant of a mixture as cumulants of conditional cumulants.

    For each ``pi`` the conditional cumulants ``k(word|B | theta)`` are random
    variables on the finite mixing space; their joint classical cumulant under
    the state probabilities is summed over ``pi``.
    """
    word = tuple(word)
    conditional = [TensorSystem(m, units=mixture.units) for _, m in mixture.states]
    probs = mixture.probabilities
    total = 0
    for pi in enumerate_partitions(len(word)):
        values = [[cumulant(s, block_word(word, b)) for b in pi.blocks] for s in conditional]

        def expect(idx, values=values):
            return _sum(p * product(v[j] for j in idx) for p, v in zip(probs, values))

        total = total + classical_joint_cumulant(expect, len(pi))
    return total


def mixture_classical_cumulant(mixture: MixtureSystem, word: Sequence[str]):
    """Classical joint cumulant computed directly from the unconditional moments."""
    return cumulant(TensorSystem(mixture.unconditional_moments(), units=mixture.units), word)


def conditional_average(mixture: MixtureSystem, word: Sequence[str], pi: SetPartition):
    """``sum_theta p_theta prod_B k(word|B | theta)``, the mixture's own ``K_pi``."""
    word = tuple(word)
    return _sum(
        p * product(cumulant(TensorSystem(m), block_word(word, b)) for b in pi.blocks)
        for p, m in mixture.states
    )


# -- independence audits ----------------------------------------------------------


@dataclass
class AuditReport:
    word: tuple
    split: frozenset
    entries: list = field(default_factory=list)

    @property
    def nonzero(self) -> list:
        return [(pi, v) for pi, v in self.entries if v != 0]

    @property
    def ok(self) -> bool:
        return not self.nonzero


def mixed_partitions(n: int, split: Iterable[int]) -> list[SetPartition]:
    """Partitions of ``[n]`` with a block meeting both ``split`` and its complement."""
    split = frozenset(split)
    if not split or not split < frozenset(range(1, n + 1)):
        raise DomainError("split must be a nonempty proper subset of positions")
    return [
        pi for pi in enumerate_partitions(n)
        if any(split & set(b) and set(b) - split for b in pi.blocks)
    ]


def mixed_cumulant_audit(system: ExchangeabilitySystem, word: Sequence[str], split: Iterable[int]) -> AuditReport:
    word = tuple(word)
    split = frozenset(split)
    report = AuditReport(word, split)
    for pi in mixed_partitions(len(word), split):
        report.entries.append((pi, cumulant_partitioned(system, word, pi)))
    return report


def joint_moments(system: ExchangeabilitySystem, families: Mapping[str, object], part=None) -> MomentSource:
    """Joint moments of letters from mutually independent families.

    Letters of one family share copy index; different families get different
    copies, so the system's own product rule supplies every mixed moment.
    ``part`` optionally post-processes each value (e.g. a dual-pair component).
    """
    def value(w):
        v = system.phi(w, _family_kernel(w, families))
        return part(v) if part else v

    return FunctionMoments(value)


def _family_kernel(word, families):
    try:
        labels = [families[x] for x in word]
    except KeyError as exc:
        raise DomainError(f"letter {exc.args[0]!r} has no family") from None
    seen: dict = {}
    return SetPartition.from_rgs([seen.setdefault(l, len(seen)) for l in labels])


def multilinear_cumulant(system: ExchangeabilitySystem, word: Sequence[str], pi: SetPartition,
                         combos: Mapping[str, Sequence[tuple[object, str]]]):
    """``K_pi`` of a word whose letters are linear combinations, expanded
    multilinearly inside ``system`` (unit letters stay units of the system)."""
    word = tuple(word)
    choices = [combos.get(x, [(1, x)]) for x in word]
    total = 0
    for pick in itertools.product(*choices):
        coeff = product((Fraction(c) for c, _ in pick), Fraction(1))
        total = total + coeff * cumulant_partitioned(system, tuple(x for _, x in pick), pi)
    return total


def linear_moments(source: MomentSource, combos: Mapping[str, Sequence[tuple[object, str]]], units=("1",)) -> MomentSource:
    """Moments of letters defined as linear combinations of other letters.

    ``combos = {"s": [(1, "x"), (1, "y")]}`` makes ``s = x + y``; a term with a
    unit letter shifts by a constant.  Letters not in ``combos`` pass through.
    """
    units = frozenset(units)

    def value(w):
        choices = [combos.get(x, [(1, x)]) for x in w]
        total = 0
        for pick in itertools.product(*choices):
            coeff = product((Fraction(c) for c, _ in pick), Fraction(1))
            letters = tuple(x for _, x in pick if x not in units)
            total = total + coeff * source(letters)
        return total

    return FunctionMoments(value)
