"""
Exchangeability systems.

An exchangeability system supplies *partitioned expectations*: for an ordered
word ``X_1 ... X_n`` and a partition ``pi`` of its positions, ``phi(word, pi)``
is the expectation of ``X_1^(h(1)) ... X_n^(h(n))`` for any copy assignment
``h`` whose kernel is ``pi``.  Copies are never materialised; each system
encodes the combinatorial rule of its product construction.

Words are sequences of variable names.  Letters listed in ``units`` (by
default ``"1"``) stand for the identity and are removed, together with their
positions in ``pi``, before the rule is applied.
"""
from __future__ import annotations

import itertools
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from operator import mul
from typing import Iterable, Mapping, Sequence

from .errors import DomainError
from .moments import FunctionMoments, MomentSource
from .partitions import (
    SetPartition,
    inner_outer_blocks,
    mobius_to_top,
    reduced_crossings,
    refinements,
)
from .rings import DualPair, MatrixScalar

Word = tuple[str, ...]


@dataclass(frozen=True)
class Variable:
    """Metadata for a named variable: grading degree and unit flag."""

    name: str
    degree: int | None = None
    is_unit: bool = False

    def __post_init__(self):
        if self.degree not in (None, 0, 1):
            raise DomainError(f"degree must be 0 or 1, got {self.degree}")
        if self.is_unit and self.degree not in (None, 0):
            raise DomainError("the unit letter has degree 0")


def product(values: Iterable, one=Fraction(1)):
    values = list(values)
    if not values:
        return one
    return reduce(mul, values)


def block_word(word: Sequence, block: Iterable[int]) -> Word:
    return tuple(word[i - 1] for i in block)


@lru_cache(maxsize=8192)
def nc_refinements(pi: SetPartition) -> tuple[SetPartition, ...]:
    """Noncrossing partitions below ``pi``."""
    return tuple(s for s in refinements(pi) if s.is_noncrossing())


@lru_cache(maxsize=8192)
def interval_refinements(pi: SetPartition) -> tuple[SetPartition, ...]:
    """Interval partitions below ``pi``."""
    return tuple(s for s in refinements(pi) if s.is_interval())


class ExchangeabilitySystem(ABC):
    """Abstract supplier of partitioned expectations."""

    #: descriptor of the scalar ring the expectations live in
    ring = "scalar"

    def __init__(self, units: Iterable[str] = ("1",)):
        self.units = frozenset(units)
        self._memo: dict = {}
        self._lock = threading.Lock()

    @property
    def one(self):
        return Fraction(1)

    def _cached(self, key, compute):
        try:
            return self._memo[key]
        except KeyError:
            pass
        value = compute()
        with self._lock:
            return self._memo.setdefault(key, value)

    def phi(self, word: Sequence[str], pi: SetPartition | None = None):
        """Partitioned expectation; ``pi`` defaults to the one-block partition."""
        word = tuple(word)
        if not word:
            return self.one
        if pi is None:
            pi = SetPartition.one(len(word))
        if pi.n != len(word):
            raise DomainError(f"word of length {len(word)} with a partition of {pi.n}")
        keep = [i for i, x in enumerate(word, start=1) if x not in self.units]
        if len(keep) < len(word):
            if not keep:
                return self.one
            word = block_word(word, keep)
            pi = pi.restrict(keep)
        return self._cached(("phi", word, pi), lambda: self._phi(word, pi))

    def moment(self, word: Sequence[str]):
        """Ordinary expectation of the product ``X_1 ... X_n``."""
        return self.phi(word)

    @abstractmethod
    def _phi(self, word: Word, pi: SetPartition):
        """Partitioned expectation of a unit-free, non-empty word."""


class TensorSystem(ExchangeabilitySystem):
    """Classical (tensor) independence: partitioned moments are block products."""

    def __init__(self, moments: MomentSource, **kw):
        super().__init__(**kw)
        self.moments = moments

    def _phi(self, word, pi):
        return product(self.moments(block_word(word, b)) for b in pi.blocks)


class MixtureSystem(ExchangeabilitySystem):
    """Finite de Finetti mixture: i.i.d. copies conditionally on a latent state.

    Parameters
    ----------
    states : sequence of ``(probability, MomentSource)``
        Probabilities must be non-negative rationals summing to one.
    """

    def __init__(self, states: Sequence[tuple[object, MomentSource]], **kw):
        super().__init__(**kw)
        if not states:
            raise DomainError("a mixture needs at least one state")
        self.states = [(Fraction(p), m) for p, m in states]
        if any(p < 0 for p, _ in self.states):
            raise DomainError("state probabilities must be non-negative")
        if sum(p for p, _ in self.states) != 1:
            raise DomainError("state probabilities must sum to 1")

    @property
    def probabilities(self) -> list[Fraction]:
        return [p for p, _ in self.states]

    def conditional_system(self, index: int) -> TensorSystem:
        return TensorSystem(self.states[index][1], units=self.units)

    def unconditional_moments(self) -> MomentSource:
        return FunctionMoments(lambda w: sum(p * m(w) for p, m in self.states))

    def _phi(self, word, pi):
        words = [block_word(word, b) for b in pi.blocks]
        return sum(p * product(m(w) for w in words) for p, m in self.states)


class FreeSystem(ExchangeabilitySystem):
    """Free independence (reduced free product of copies).

    Partitioned moments are sums over noncrossing refinements of products of
    free cumulants, which are obtained from the moments by Moebius inversion
    on the noncrossing lattice.  Works over any commutative moment ring.
    """

    def __init__(self, moments: MomentSource, **kw):
        super().__init__(**kw)
        self.moments = moments

    def free_cumulant(self, word: Word):
        word = tuple(word)
        return self._cached(("kappa", word), lambda: self._free_cumulant(word))

    def _free_cumulant(self, word):
        mu = mobius_to_top(len(word), "nc")
        return sum(
            c * product(self.moments(block_word(word, b)) for b in sigma.blocks)
            for sigma, c in mu.items()
        )

    def _phi(self, word, pi):
        return sum(
            product((self.free_cumulant(block_word(word, b)) for b in sigma.blocks), self.one)
            for sigma in nc_refinements(pi)
        )

    def direct_phi(self, word: Word, pi: SetPartition):
        """Block-moment product, valid for noncrossing ``pi`` only."""
        if not pi.is_noncrossing():
            raise DomainError(f"{pi} has a crossing")
        return product((self.moments(block_word(word, b)) for b in pi.blocks), self.one)


class BooleanSystem(ExchangeabilitySystem):
    """Boolean independence (regular free product of copies)."""

    def __init__(self, moments: MomentSource, **kw):
        super().__init__(**kw)
        self.moments = moments

    def boolean_cumulant(self, word: Word):
        word = tuple(word)
        return self._cached(("beta", word), lambda: self._boolean_cumulant(word))

    def _boolean_cumulant(self, word):
        mu = mobius_to_top(len(word), "interval")
        return sum(
            c * product(self.moments(block_word(word, b)) for b in sigma.blocks)
            for sigma, c in mu.items()
        )

    def _phi(self, word, pi):
        return sum(
            product(self.boolean_cumulant(block_word(word, b)) for b in sigma.blocks)
            for sigma in interval_refinements(pi)
        )

    def runs_phi(self, word: Sequence[str], pi: SetPartition):
        """Direct product rule: one factor per maximal run of consecutive
        positions sharing a block."""
        word = tuple(word)
        runs = []
        for i, lab in enumerate(pi.rgs):
            if runs and pi.rgs[i - 1] == lab:
                runs[-1].append(word[i])
            else:
                runs.append([word[i]])
        return product(self.moments(tuple(r)) for r in runs)


class CFreeSystem(ExchangeabilitySystem):
    """Conditionally free product for a pair of states ``(phi, psi)``.

    For a noncrossing ``sigma`` the partitioned cumulant is the product of
    c-free cumulants over the outer blocks and of ``psi``-free cumulants over
    the inner blocks; crossing partitions contribute nothing.
    """

    def __init__(self, phi_moments: MomentSource, psi_moments: MomentSource, **kw):
        super().__init__(**kw)
        self.phi_moments = phi_moments
        self.psi = FreeSystem(psi_moments, units=self.units)

    def psi_free_cumulant(self, word: Word):
        return self.psi.free_cumulant(word)

    def cfree_cumulant(self, word: Word):
        word = tuple(word)
        return self._cached(("cfree", word), lambda: self._cfree_cumulant(word))

    def _cfree_cumulant(self, word):
        n = len(word)
        top = SetPartition.one(n)
        rest = [
            self.partition_cumulant(word, sigma)
            for sigma in mobius_to_top(n, "nc")
            if sigma != top
        ]
        return self.phi_moments(word) - sum(rest)

    def partition_cumulant(self, word: Word, sigma: SetPartition):
        """``K_sigma`` for noncrossing ``sigma``; zero for crossing ones."""
        if not sigma.is_noncrossing():
            return 0
        factors = []
        for b, kind in inner_outer_blocks(sigma).items():
            w = block_word(word, b)
            factors.append(self.cfree_cumulant(w) if kind == "outer" else self.psi_free_cumulant(w))
        return product(factors)

    def _phi(self, word, pi):
        return sum(self.partition_cumulant(word, sigma) for sigma in nc_refinements(pi))


class GradedSystem(ExchangeabilitySystem):
    """Z/2-graded independence (graded tensor product of copies).

    ``phi_pi = (-1)**w * prod_B m(B)`` where ``w`` is the reduced crossing
    count of ``pi`` weighted by the degrees of the two letters of each
    counted pair.  A block of odd total degree has expectation zero.
    """

    def __init__(self, moments: MomentSource, degrees: Mapping[str, int], **kw):
        super().__init__(**kw)
        self.moments = moments
        self.degrees = dict(degrees)
        for name, d in self.degrees.items():
            if d not in (0, 1):
                raise DomainError(f"degree of {name!r} must be 0 or 1")

    def degree(self, name: str) -> int:
        try:
            return self.degrees[name]
        except KeyError:
            raise DomainError(f"missing degree for variable {name!r}") from None

    def block_moment(self, w: Word):
        if sum(self.degree(x) for x in w) % 2:
            return Fraction(0)
        return self.moments(w)

    def _phi(self, word, pi):
        degs = [self.degree(x) for x in word]
        values = [self.block_moment(block_word(word, b)) for b in pi.blocks]
        if any(v == 0 for v in values):
            return Fraction(0)
        sign = -1 if reduced_crossings(pi, degs) % 2 else 1
        return sign * product(values)


class TypeBSystem(FreeSystem):
    """Free independence of type B, valued in the dual-pair ring.

    Each word has a pair moment ``(alpha(w), beta(w))``; cumulants are the
    noncrossing Moebius inversion of these pairs under dual-pair
    multiplication.
    """

    ring = "dual"

    def __init__(self, alpha: MomentSource, beta: MomentSource, **kw):
        self.alpha = alpha
        self.beta = beta
        pair = FunctionMoments(lambda w: DualPair(alpha(w), beta(w)))
        super().__init__(pair, **kw)

    @property
    def one(self):
        return DualPair(Fraction(1), Fraction(0))

    def head_system(self) -> FreeSystem:
        return FreeSystem(self.alpha, units=self.units)


class MatrixLift(ExchangeabilitySystem):
    """Matrices with entries from a base system, with entrywise expectation.

    Parameters
    ----------
    base : ExchangeabilitySystem
    matrices : mapping
        ``{name: d x d nested sequence of base variable names}``.  The entry
        ``"0"`` (or ``None``) denotes the zero variable.
    """

    ring = "matrix"

    def __init__(self, base: ExchangeabilitySystem, matrices: Mapping[str, Sequence[Sequence]], **kw):
        super().__init__(**kw)
        self.base = base
        self.matrices = {k: tuple(tuple(r) for r in v) for k, v in matrices.items()}
        dims = {len(m) for m in self.matrices.values()}
        if len(dims) > 1 or any(len(r) != len(m) for m in self.matrices.values() for r in m):
            raise DomainError("matrix variables must share one square dimension")
        self.d = dims.pop() if dims else 1

    @property
    def one(self):
        return MatrixScalar.identity(self.d, Fraction(1), Fraction(0))

    def entry(self, name: str, i: int, j: int):
        try:
            return self.matrices[name][i][j]
        except KeyError:
            raise DomainError(f"unknown matrix variable {name!r}") from None

    def paths(self, word: Word, i: int, j: int):
        """Threaded entry words ``X1[i,i1] X2[i1,i2] ... Xn[i_{n-1},j]``."""
        n = len(word)
        for mid in itertools.product(range(self.d), repeat=n - 1):
            idx = (i,) + mid + (j,)
            yield tuple(self.entry(word[k], idx[k], idx[k + 1]) for k in range(n))

    def _entry_sum(self, word, pi, i, j):
        total = 0
        for path in self.paths(word, i, j):
            if any(x in (None, "0") for x in path):
                continue
            total = total + self.base.phi(path, pi)
        return total

    def _phi(self, word, pi):
        return MatrixScalar(
            [[self._entry_sum(word, pi, i, j) for j in range(self.d)] for i in range(self.d)]
        )

    def trace_system(self) -> TraceState:
        return TraceState(self)


class TraceState(ExchangeabilitySystem):
    """Normalised trace of a :class:`MatrixLift`: scalar valued."""

    def __init__(self, lift: MatrixLift):
        super().__init__(units=lift.units)
        self.lift = lift

    @property
    def one(self):
        return self.lift.base.one

    def _phi(self, word, pi):
        return Fraction(1, self.lift.d) * self.lift.phi(word, pi).trace()
