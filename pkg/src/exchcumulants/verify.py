"""
Identity suites run by ``exchcumulants verify``.

Each suite yields :class:`Case` records in a fixed order.  Moments are seeded
random rationals (or symbolic atoms with ``symbolic=True``), so a given
``(suite, systems, n, seed)`` always produces the same report.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from . import engine
from .errors import DomainError
from .good import good_cumulant, good_partitioned
from .moments import MomentSource, RandomMoments, SymbolicMoments, ZeroMoments
from .partitions import (
    SetPartition,
    enumerate_partitions,
    mobius_to_top,
)
from .rings import format_value
from .systems import (
    BooleanSystem,
    CFreeSystem,
    ExchangeabilitySystem,
    FreeSystem,
    GradedSystem,
    MixtureSystem,
    TensorSystem,
    TypeBSystem,
)

SYSTEM_NAMES = ("tensor", "mixture", "free", "boolean", "cfree", "graded", "typeb")
LETTERS = ("x", "y")
GRADED_DEGREES = {"x": 1, "y": 0, "a": 1, "b": 1, "c": 0, "d": 1, "e": 1, "f": 0}


@dataclass(frozen=True)
class Case:
    suite: str
    system: str
    word: tuple
    pi: SetPartition | None
    ok: bool
    detail: str = ""

    def line(self) -> str:
        pi = "-" if self.pi is None else self.pi.to_rgs_string()
        word = "".join(self.word) if all(len(x) == 1 for x in self.word) else ",".join(self.word)
        text = f"{'PASS' if self.ok else 'FAIL'} {self.suite} {self.system} {word or '-'} {pi}"
        return f"{text} {self.detail}".rstrip()


def make_source(seed: int, tag: str, symbolic: bool) -> MomentSource:
    return SymbolicMoments(tag) if symbolic else RandomMoments(seed, tag)


def make_system(name: str, seed: int = 0, symbolic: bool = False) -> ExchangeabilitySystem:
    src = lambda tag: make_source(seed, tag, symbolic)  # noqa: E731
    if name == "tensor":
        return TensorSystem(src(""))
    if name == "mixture":
        return MixtureSystem([(Fraction(1, 3), src("s0")), (Fraction(2, 3), src("s1"))])
    if name == "free":
        return FreeSystem(src(""))
    if name == "boolean":
        return BooleanSystem(src(""))
    if name == "cfree":
        return CFreeSystem(src(""), src("psi"))
    if name == "graded":
        return GradedSystem(src(""), GRADED_DEGREES)
    if name == "typeb":
        return TypeBSystem(src(""), src("beta"))
    raise DomainError(f"unknown system {name!r}")


def sample_words(n: int, seed: int) -> list[tuple[str, ...]]:
    """Words of length ``n``: a power, an alternating word and a seeded random one."""
    words = [("x",) * n, tuple(LETTERS[i % 2] for i in range(n))]
    rng = random.Random(f"{seed}|words|{n}")
    words.append(tuple(rng.choice(LETTERS) for _ in range(n)))
    out = []
    for w in words:
        if w not in out:
            out.append(w)
    return out


def _case(suite, system, word, pi, lhs, rhs) -> Case:
    ok = lhs == rhs
    detail = "" if ok else f"lhs={format_value(lhs)} rhs={format_value(rhs)}"
    return Case(suite, system, tuple(word), pi, ok, detail)


def _systems(names, seed, symbolic):
    for name in names:
        yield name, make_system(name, seed, symbolic)


def suite_good(names, n_range, seed, symbolic=False, jobs=1) -> Iterator[Case]:
    for name, sys in _systems(names, seed, symbolic):
        for n in n_range:
            for w in sample_words(n, seed):
                yield _case("good", name, w, None, good_cumulant(sys, w, jobs), engine.cumulant(sys, w))
                if n <= 5:
                    for pi in enumerate_partitions(n):
                        yield _case(
                            "good", name, w, pi,
                            good_partitioned(sys, w, pi), engine.cumulant_partitioned(sys, w, pi),
                        )


def suite_product(names, n_range, seed, symbolic=False, jobs=1) -> Iterator[Case]:
    for name, sys in _systems(names, seed, symbolic):
        for n in n_range:
            for w in sample_words(n, seed)[1:2]:
                for sizes in engine.compositions(n):
                    grouped = engine.GroupedWord(w, sizes)
                    lhs, rhs = engine.product_cumulant(sys, grouped)
                    yield _case("product", name, w, grouped.base, lhs, rhs)


def suite_recursion(names, n_range, seed, symbolic=False, jobs=1) -> Iterator[Case]:
    for name, sys in _systems(names, seed, symbolic):
        for n in n_range:
            for w in sample_words(n, seed):
                yield _case("recursion", name, w, None, engine.recursion_moment(sys, w), sys.phi(w))


def suite_roundtrip(names, n_range, seed, symbolic=False, jobs=1) -> Iterator[Case]:
    for name, sys in _systems(names, seed, symbolic):
        for n in n_range:
            for w in sample_words(n, seed)[:2]:
                table = engine.cumulant_table(sys, w)
                for sigma in enumerate_partitions(n):
                    yield _case(
                        "roundtrip", name, w, sigma,
                        engine.moment_from_cumulants(table, sigma), sys.phi(w, sigma),
                    )


def suite_brillinger(names, n_range, seed, symbolic=False, jobs=1) -> Iterator[Case]:
    mixtures = {
        "mixture2": MixtureSystem([
            (Fraction(1, 3), make_source(seed, "s0", symbolic)),
            (Fraction(2, 3), make_source(seed, "s1", symbolic)),
        ]),
        "mixture3": MixtureSystem([
            (Fraction(1, 2), make_source(seed, "t0", symbolic)),
            (Fraction(1, 3), make_source(seed, "t1", symbolic)),
            (Fraction(1, 6), make_source(seed, "t2", symbolic)),
        ]),
    }
    for name, mix in mixtures.items():
        for n in n_range:
            for w in sample_words(n, seed):
                yield _case(
                    "brillinger", name, w, None,
                    engine.brillinger(mix, w), engine.mixture_classical_cumulant(mix, w),
                )
                for pi in enumerate_partitions(n):
                    yield _case(
                        "brillinger", name, w, pi,
                        engine.conditional_average(mix, w, pi), engine.cumulant_partitioned(mix, w, pi),
                    )


def suite_remarkable(names, n_range, seed, symbolic=False, jobs=1) -> Iterator[Case]:
    sys = FreeSystem(make_source(seed, "", symbolic))
    for n in n_range:
        for w in sample_words(n, seed):
            nc = sum(c * sys.phi(w, pi) for pi, c in mobius_to_top(n, "nc").items())
            full = sum(c * sys.phi(w, pi) for pi, c in mobius_to_top(n, "full").items())
            yield _case("remarkable", "free", w, None, nc, full)


VANISHING_RULES: dict[str, tuple[str, Callable[[SetPartition], bool]]] = {
    "free": ("crossing", lambda p: not p.is_noncrossing()),
    "boolean": ("non-interval", lambda p: not p.is_interval()),
    "cfree": ("crossing", lambda p: not p.is_noncrossing()),
    "typeb": ("crossing", lambda p: not p.is_noncrossing()),
}

INDEPENDENCE_SYSTEMS = ("tensor", "free", "boolean", "cfree", "graded")


def independent_pair(name: str, seed: int, symbolic: bool) -> ExchangeabilitySystem:
    """A system on letters ``x, y`` that are independent in its own sense."""
    sys = make_system(name, seed, symbolic)
    fam = {"x": 0, "y": 1}
    joint = engine.joint_moments(sys, fam)
    if name == "tensor":
        return TensorSystem(joint)
    if name == "free":
        return FreeSystem(joint)
    if name == "boolean":
        return BooleanSystem(joint)
    if name == "graded":
        return GradedSystem(joint, GRADED_DEGREES)
    if name == "cfree":
        return CFreeSystem(joint, engine.joint_moments(sys.psi, fam))
    raise DomainError(f"no independence construction for {name!r}")


def suite_vanishing(names, n_range, seed, symbolic=False, jobs=1) -> Iterator[Case]:
    for name, sys in _systems(names, seed, symbolic):
        rule = VANISHING_RULES.get(name)
        if rule is None:
            continue
        label, applies = rule
        for n in n_range:
            for w in sample_words(n, seed)[:2]:
                for pi in enumerate_partitions(n):
                    if applies(pi):
                        yield _case(f"vanishing[{label}]", name, w, pi,
                                    engine.cumulant_partitioned(sys, w, pi), 0)
    for name in names:
        if name not in INDEPENDENCE_SYSTEMS:
            continue
        sys = independent_pair(name, seed, symbolic)
        for n in n_range:
            if n < 2:
                continue
            w = tuple(LETTERS[i % 2] for i in range(n))
            split = [i for i, x in enumerate(w, start=1) if x == "x"]
            for pi, value in engine.mixed_cumulant_audit(sys, w, split).entries:
                yield _case("vanishing[mixed]", name, w, pi, value, 0)


def suite_degenerate(names, n_range, seed, symbolic=False, jobs=1) -> Iterator[Case]:
    src = make_source(seed, "", symbolic)
    pairs = {
        "cfree=free": (CFreeSystem(src, src), FreeSystem(src), None),
        "cfree=boolean": (CFreeSystem(src, ZeroMoments()), BooleanSystem(src), None),
        "typeb=free": (TypeBSystem(src, ZeroMoments()), FreeSystem(src), lambda v: v.head),
        "graded=tensor": (GradedSystem(src, {x: 0 for x in LETTERS}), TensorSystem(src), None),
        "mixture=tensor": (MixtureSystem([(1, src)]), TensorSystem(src), None),
    }
    for label, (a, b, proj) in pairs.items():
        for n in n_range:
            for w in sample_words(n, seed)[:2]:
                for pi in enumerate_partitions(n):
                    lhs = a.phi(w, pi)
                    yield _case("degenerate", label, w, pi, proj(lhs) if proj else lhs, b.phi(w, pi))


SUITES = {
    "good": suite_good,
    "product": suite_product,
    "recursion": suite_recursion,
    "roundtrip": suite_roundtrip,
    "brillinger": suite_brillinger,
    "remarkable": suite_remarkable,
    "vanishing": suite_vanishing,
    "degenerate": suite_degenerate,
}

PRODUCT_SYSTEMS = ("tensor", "free")


def run(suite: str, systems: Sequence[str] | None, n_range: Sequence[int], seed: int = 0,
        symbolic: bool = False, jobs: int = 1) -> list[Case]:
    """Run one suite (or ``"all"``) and return its cases in order."""
    names = list(systems or SYSTEM_NAMES)
    for s in names:
        if s not in SYSTEM_NAMES:
            raise DomainError(f"unknown system {s!r}")
    chosen = list(SUITES) if suite == "all" else [suite]
    cases: list[Case] = []
    for s in chosen:
        if s not in SUITES:
            raise DomainError(f"unknown suite {s!r}; expected one of {', '.join(SUITES)}, all")
        suite_names = names
        if s == "product" and systems is None:
            suite_names = list(PRODUCT_SYSTEMS)
        cases.extend(SUITES[s](suite_names, list(n_range), seed, symbolic, jobs))
    return cases


def remarkable_sums(n: int, source: MomentSource) -> tuple:
    """NC-Moebius and full-Moebius sums of the free partitioned moments of ``x^n``."""
    sys = FreeSystem(source)
    w = ("x",) * n
    nc = sum(c * sys.phi(w, pi) for pi, c in mobius_to_top(n, "nc").items())
    full = sum(c * sys.phi(w, pi) for pi, c in mobius_to_top(n, "full").items())
    return nc, full

