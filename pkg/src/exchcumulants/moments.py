"""
Moment sources: callables mapping an ordered word of variable names to its
expectation.

The empty word always has expectation one.  Sources never see unit letters;
the exchangeability systems strip those before asking.
"""
from __future__ import annotations

import random
import threading
from fractions import Fraction
from typing import Mapping

from .errors import DomainError, UnboundMomentError
from .rings import MomentPoly, parse_rational

Word = tuple[str, ...]


class MomentSource:
    """Base class; subclasses implement :meth:`value` for non-empty words."""

    tag = ""

    def __call__(self, word) -> object:
        word = tuple(word)
        if not word:
            return Fraction(1)
        return self.value(word)

    def value(self, word: Word):
        raise NotImplementedError


class Moments(MomentSource):
    """Explicit table of rational moments.

    Parameters
    ----------
    values : mapping
        ``{word: value}``; words are tuples (or strings of one-letter names),
        values anything :func:`parse_rational` accepts.
    default : optional
        Returned for unbound words.  When ``None``, an unbound word raises
        :class:`UnboundMomentError`.
    """

    def __init__(self, values: Mapping | None = None, default=None, tag: str = ""):
        self.values = {_as_word(w): parse_rational(v) for w, v in (values or {}).items()}
        self.default = None if default is None else parse_rational(default)
        self.tag = tag

    def value(self, word):
        try:
            return self.values[word]
        except KeyError:
            if self.default is None:
                raise UnboundMomentError(word, self.tag) from None
            return self.default

    @classmethod
    def univariate(cls, moments, name: str = "x", **kw) -> Moments:
        """Moments ``m_1, m_2, ...`` of a single variable."""
        return cls({(name,) * k: m for k, m in enumerate(moments, start=1)}, **kw)


class SymbolicMoments(MomentSource):
    """Every word is its own polynomial atom."""

    def __init__(self, tag: str = ""):
        self.tag = tag

    def value(self, word):
        return MomentPoly.atom(word, self.tag)


class RandomMoments(MomentSource):
    """Small random rationals drawn deterministically from ``(seed, tag, word)``.

    Numerators are uniform in ``[-9, 9]`` and denominators in ``[1, 9]``.
    The value of a word does not depend on the order of queries.
    """

    def __init__(self, seed: int = 0, tag: str = ""):
        self.seed = seed
        self.tag = tag
        self._cache: dict[Word, Fraction] = {}
        self._lock = threading.Lock()

    def value(self, word):
        v = self._cache.get(word)
        if v is None:
            rng = random.Random(f"{self.seed}|{self.tag}|{' '.join(word)}")
            v = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            with self._lock:
                self._cache.setdefault(word, v)
        return v


class ZeroMoments(MomentSource):
    """Every non-empty word has expectation zero (a point mass at the origin)."""

    def value(self, word):
        return Fraction(0)


class FunctionMoments(MomentSource):
    """Wrap a plain function ``word -> value``."""

    def __init__(self, func, tag: str = ""):
        self.func = func
        self.tag = tag

    def value(self, word):
        return self.func(word)


def _as_word(w) -> Word:
    if isinstance(w, str):
        if " " in w or "," in w:
            raise DomainError(f"ambiguous word string {w!r}; use a tuple")
        return tuple(w)
    return tuple(w)
