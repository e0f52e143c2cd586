"""
Exact scalar domains.

Every expectation in the package takes values in one of these rings:

* :class:`fractions.Fraction` for plain rationals,
* :class:`MomentPoly`, commutative polynomials in symbolic moment atoms,
* :class:`DualPair`, pairs ``(a, b)`` with ``(a, b)(c, d) = (ac, ad + cb)``,
* :class:`MatrixScalar`, small square matrices over any of the above,
* :class:`CycloElement`, residues modulo a cyclotomic polynomial with
  coefficients in any of the above.  The class of ``x`` is a primitive root
  of unity of the given order.

All of them are immutable, interoperate with ``int`` and ``Fraction`` and
compare equal to ``0`` exactly when they vanish.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, NamedTuple

from .errors import DomainError, UnboundMomentError

RATIONAL_TYPES = (int, Fraction)


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            raise DomainError(f"not a rational: {text!r}") from None
    raise DomainError(f"not a rational: {text!r}")


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def is_zero(x) -> bool:
    return x == 0


# -- cyclotomic arithmetic ---------------------------------------------------------

MAX_CYCLOTOMIC_ORDER = 12


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # coefficient lists are low degree first; den is monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the ``n``-th cyclotomic polynomial, low degree first."""
    if not 1 <= n <= MAX_CYCLOTOMIC_ORDER:
        raise DomainError(f"cyclotomic order must be in 1..{MAX_CYCLOTOMIC_ORDER}, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def _reduce(coeffs: list, phi: tuple[int, ...]) -> list:
    d = len(phi) - 1
    c = list(coeffs)
    for k in range(len(c) - 1, d - 1, -1):
        t = c[k]
        if t == 0:
            continue
        c[k] = 0
        for i in range(d):
            if phi[i]:
                c[k - d + i] = c[k - d + i] - t * phi[i]
    c = c[:d] + [0] * (d - len(c))
    return c


class CycloElement:
    """Residue class modulo the cyclotomic polynomial of ``order``.

    ``coeffs`` may have any length; it is reduced on construction to
    ``euler_phi(order)`` coefficients with respect to the power basis
    ``1, w, w**2, ...`` of the primitive root ``w``.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable = ()):
        phi = cyclotomic_polynomial(order)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(_reduce(list(coeffs), phi)))

    def __setattr__(self, name, value):
        raise AttributeError("CycloElement is immutable")

    @classmethod
    def root(cls, order: int) -> CycloElement:
        """The primitive root of unity of the given order."""
        return cls(order, [0, 1])

    @classmethod
    def root_power(cls, order: int, k: int) -> CycloElement:
        return cls(order, [0] * (k % order) + [1])

    @classmethod
    def scalar(cls, order: int, value) -> CycloElement:
        return cls(order, [value])

    def _coerce(self, other):
        if isinstance(other, CycloElement):
            if other.order != self.order:
                raise DomainError(f"order mismatch: {self.order} != {other.order}")
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return CycloElement(self.order, (self.coeffs[0] + other,) + self.coeffs[1:])
        return CycloElement(self.order, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElement(self.order, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.scale(other)
        prod = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                if b == 0:
                    continue
                prod[i + j] = prod[i + j] + a * b
        return CycloElement(self.order, prod)

    def __rmul__(self, other):
        return CycloElement(self.order, [other * a for a in self.coeffs])

    def scale(self, value) -> CycloElement:
        """Multiply every coefficient by a base-ring scalar."""
        return CycloElement(self.order, [a * value for a in self.coeffs])

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative powers are not supported")
        result = CycloElement.scalar(self.order, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, CycloElement):
            return self.order == other.order and all(
                a == b for a, b in zip(self.coeffs, other.coeffs)
            )
        if isinstance(other, (int, Fraction, MomentPoly, DualPair, MatrixScalar)):
            return self.coeffs[0] == other and all(a == 0 for a in self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"CycloElement({self.order}, {list(self.coeffs)})"

    def in_base_ring(self) -> bool:
        return all(a == 0 for a in self.coeffs[1:])

    def base_value(self):
        """The constant coefficient, provided the element lies in the base ring."""
        if not self.in_base_ring():
            raise ArithmeticError(f"{self!r} has a nonzero cyclotomic part")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        w = cmath.exp(2j * math.pi / self.order)
        return sum(complex(float(a)) * w**k for k, a in enumerate(self.coeffs))


def root_power_sum(n: int, m: int) -> CycloElement:
    """Exact ``sum_{k=1..n} w**(m k)`` for a primitive ``n``-th root ``w``."""
    w_m = CycloElement.root(n) ** (m % n)
    total = CycloElement.scalar(n, 0)
    term = CycloElement.scalar(n, 1)
    for _ in range(n):
        term = term * w_m
        total = total + term
    expected = n if m % n == 0 else 0
    if total != expected:
        raise ArithmeticError(f"root power sum ({n}, {m}) evaluated to {total!r}")
    return total


# -- moment polynomials --------------------------------------------------------------


class Atom(NamedTuple):
    """A symbolic moment: the expectation of an ordered word, optionally tagged."""

    word: tuple[str, ...]
    tag: str = ""

    def __str__(self):
        return f"{self.tag or 'm'}({','.join(self.word)})"


Monomial = tuple  # sorted tuple of Atoms, repeated for powers


class MomentPoly:
    """Sparse commutative polynomial in moment atoms with rational coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(mono)] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MomentPoly is immutable")

    @classmethod
    def _raw(cls, terms: dict) -> MomentPoly:
        self = cls.__new__(cls)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", None)
        return self

    @classmethod
    def atom(cls, word: Iterable[str], tag: str = "") -> MomentPoly:
        word = tuple(word)
        if not word:
            return cls.constant(1)
        return cls._raw({(Atom(word, tag),): Fraction(1)})

    @classmethod
    def constant(cls, value) -> MomentPoly:
        return cls({(): value})

    @staticmethod
    def lift(value) -> MomentPoly | None:
        if isinstance(value, MomentPoly):
            return value
        if isinstance(value, RATIONAL_TYPES):
            return MomentPoly.constant(value)
        return None

    def __add__(self, other):
        o = MomentPoly.lift(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for mono, c in o.terms.items():
            s = terms.get(mono, 0) + c
            if s:
                terms[mono] = s
            else:
                terms.pop(mono, None)
        return MomentPoly._raw(terms)

    __radd__ = __add__

    def __neg__(self):
        return MomentPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = MomentPoly.lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RATIONAL_TYPES):
            if other == 0:
                return MomentPoly._raw({})
            f = Fraction(other)
            return MomentPoly._raw({m: c * f for m, c in self.terms.items()})
        if not isinstance(other, MomentPoly):
            return NotImplemented
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(sorted(m1 + m2)) if m1 and m2 else (m1 or m2)
                s = terms.get(mono, 0) + c1 * c2
                if s:
                    terms[mono] = s
                else:
                    terms.pop(mono, None)
        return MomentPoly._raw(terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = MomentPoly.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        o = MomentPoly.lift(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def atoms(self) -> set[Atom]:
        return {a for mono in self.terms for a in mono}

    def substitute(self, bindings: Mapping | Callable) -> Fraction:
        """Evaluate with every atom bound to a rational.

        ``bindings`` is a mapping keyed by :class:`Atom` (or by the bare word
        tuple for untagged atoms), or a callable taking an Atom.
        """
        if callable(bindings):
            lookup = bindings
        else:
            def lookup(a):
                if a in bindings:
                    return bindings[a]
                if not a.tag and a.word in bindings:
                    return bindings[a.word]
                raise UnboundMomentError(a.word, a.tag)
        total = Fraction(0)
        for mono, c in self.terms.items():
            val = c
            for a in mono:
                val *= Fraction(lookup(a))
            total += val
        return total

    def __repr__(self):
        return f"MomentPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=lambda m: (len(m), m)):
            c = self.terms[mono]
            body = _format_monomial(mono)
            if not body:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{format_rational(c)}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list:
        """``[[coeff, [atom, ...]], ...]`` with atoms as word arrays."""
        out = []
        for mono in sorted(self.terms, key=lambda m: (len(m), m)):
            atoms = [list(a.word) if not a.tag else {"tag": a.tag, "word": list(a.word)}
                     for a in mono]
            out.append([format_rational(self.terms[mono]), atoms])
        return out

    @classmethod
    def from_json(cls, data) -> MomentPoly:
        terms: dict = {}
        for coeff, atoms in data:
            mono = []
            for a in atoms:
                if isinstance(a, dict):
                    mono.append(Atom(tuple(a["word"]), a.get("tag", "")))
                else:
                    mono.append(Atom(tuple(a)))
            key = tuple(sorted(mono))
            terms[key] = terms.get(key, 0) + parse_rational(coeff)
        return cls(terms)


def _format_monomial(mono: Monomial) -> str:
    pieces = []
    i = 0
    while i < len(mono):
        j = i
        while j < len(mono) and mono[j] == mono[i]:
            j += 1
        pieces.append(str(mono[i]) + (f"^{j - i}" if j - i > 1 else ""))
        i = j
    return "*".join(pieces)


# -- dual pairs -------------------------------------------------------------------------


class DualPair:
    """Element ``(head, tangent)`` of the ring with ``(a,b)(c,d) = (ac, ad + cb)``."""

    __slots__ = ("head", "tangent")

    def __init__(self, head, tangent=0):
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "tangent", tangent)

    def __setattr__(self, name, value):
        raise AttributeError("DualPair is immutable")

    @staticmethod
    def _pair(other):
        if isinstance(other, DualPair):
            return other
        if isinstance(other, (int, Fraction, MomentPoly)):
            return DualPair(other, 0)
        return None

    def __add__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return DualPair(self.head + o.head, self.tangent + o.tangent)

    __radd__ = __add__

    def __neg__(self):
        return DualPair(-self.head, -self.tangent)

    def __sub__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return DualPair(self.head - o.head, self.tangent - o.tangent)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, DualPair):
            return DualPair(
                self.head * other.head,
                self.head * other.tangent + other.head * self.tangent,
            )
        if isinstance(other, (int, Fraction, MomentPoly)):
            return DualPair(self.head * other, self.tangent * other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return self.head == o.head and self.tangent == o.tangent

    def __hash__(self):
        return hash((self.head, self.tangent))

    def __repr__(self):
        return f"DualPair({self.head!r}, {self.tangent!r})"

    def __str__(self):
        return f"({self.head}, {self.tangent})"


# -- matrices -------------------------------------------------------------------------------


class MatrixScalar:
    """Immutable ``d x d`` matrix over an exact ring."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        if any(len(r) != len(rows) for r in rows):
            raise DomainError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixScalar is immutable")

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, d: int, one=1, zero=0) -> MatrixScalar:
        return cls([[one if i == j else zero for j in range(d)] for i in range(d)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other):
        if isinstance(other, MatrixScalar):
            if other.dim != self.dim:
                raise DomainError("dimension mismatch")
            return MatrixScalar(
                [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
            )
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return MatrixScalar([[-a for a in r] for r in self.rows])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, MatrixScalar):
            d = self.dim
            return MatrixScalar(
                [[sum((self.rows[i][k] * other.rows[k][j] for k in range(d)), 0)
                  for j in range(d)] for i in range(d)]
            )
        if isinstance(other, (int, Fraction, MomentPoly)):
            return MatrixScalar([[a * other for a in r] for r in self.rows])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, MomentPoly)):
            return MatrixScalar([[other * a for a in r] for r in self.rows])
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, MatrixScalar):
            return self.rows == other.rows or all(
                a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s)
            )
        if isinstance(other, int) and other == 0:
            return all(a == 0 for r in self.rows for a in r)
        return NotImplemented

    def __hash__(self):
        return hash(self.rows)

    def trace(self):
        return sum((self.rows[i][i] for i in range(self.dim)), 0)

    def __repr__(self):
        return f"MatrixScalar({[list(r) for r in self.rows]!r})"


def to_json_value(x):
    """JSON-friendly encoding of a ring scalar."""
    if isinstance(x, (int, Fraction)):
        return format_rational(x)
    if isinstance(x, MomentPoly):
        return {"poly": x.to_json()}
    if isinstance(x, DualPair):
        return {"dual": [to_json_value(x.head), to_json_value(x.tangent)]}
    if isinstance(x, MatrixScalar):
        return {"matrix": [[to_json_value(a) for a in r] for r in x.rows]}
    raise DomainError(f"cannot serialise {type(x).__name__}")


def from_json_value(data):
    """Inverse of :func:`to_json_value`."""
    if isinstance(data, (str, int)):
        return parse_rational(data)
    if "poly" in data:
        return MomentPoly.from_json(data["poly"])
    if "dual" in data:
        return DualPair(*(from_json_value(v) for v in data["dual"]))
    if "matrix" in data:
        return MatrixScalar([[from_json_value(a) for a in r] for r in data["matrix"]])
    raise DomainError(f"cannot parse scalar {data!r}")


def format_value(x) -> str:
    """Human-readable single-line rendering of a ring scalar."""
    if isinstance(x, (int, Fraction)):
        return format_rational(x)
    if isinstance(x, MatrixScalar):
        return "[" + "; ".join(", ".join(format_value(a) for a in r) for r in x.rows) + "]"
    return str(x)
