from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exchcumulants import engine
from exchcumulants.errors import DomainError
from exchcumulants.moments import FunctionMoments, Moments, RandomMoments, SymbolicMoments
from exchcumulants.partitions import (
    SetPartition,
    connected_components,
    enumerate_partitions,
    refinements,
)
from exchcumulants.rings import MomentPoly
from exchcumulants.systems import (
    BooleanSystem,
    FreeSystem,
    GradedSystem,
    MixtureSystem,
    TensorSystem,
    block_word,
)
from exchcumulants.verify import SYSTEM_NAMES, independent_pair, make_system

P = SetPartition
m = lambda *w: MomentPoly.atom(w)  # noqa: E731


# -- cumulants and tables ------------------------------------------------------------------


def test_cumulant_examples():
    tensor = TensorSystem(SymbolicMoments())
    assert engine.cumulant(tensor, "xx") == m("x", "x") - m("x") ** 2
    free = FreeSystem(Moments.univariate([0, 1, 0, 2]))
    assert engine.cumulant(free, "xxxx") == 0
    for name in SYSTEM_NAMES:
        system = make_system(name, 4)
        assert engine.cumulant(system, "y") == system.phi("y")
    with pytest.raises(DomainError):
        engine.cumulant(tensor, "")


def test_partitioned_examples():
    tensor = TensorSystem(SymbolicMoments())
    word = tuple("abcd")
    k = lambda *w: engine.cumulant(tensor, w)  # noqa: E731
    assert engine.cumulant_partitioned(tensor, word, P.zero(4)) == m("a") * m("b") * m("c") * m("d")
    table = engine.cumulant_table(tensor, word)
    assert table.top() == engine.cumulant(tensor, word)
    for pi in enumerate_partitions(4):
        expected = 1
        for b in pi.blocks:
            expected = expected * k(*block_word(word, b))
        assert table[pi] == expected


def test_moment_reconstruction_examples():
    tensor = TensorSystem(SymbolicMoments())
    word = tuple("abc")
    table = engine.cumulant_table(tensor, word)
    assert sum(v for _, v in table) == tensor.phi(word)
    assert engine.moment_from_cumulants(table, P.zero(3)) == m("a") * m("b") * m("c")


@pytest.mark.parametrize("name", SYSTEM_NAMES)
def test_roundtrip_random_words(name):
    system = make_system(name, 8)
    table = engine.cumulant_table(system, "xyyx")
    for sigma in enumerate_partitions(4):
        assert engine.moment_from_cumulants(table, sigma) == system.phi("xyyx", sigma)


# -- product formula ---------------------------------------------------------------------


def test_grouped_word():
    g = engine.GroupedWord("abcde", (2, 1, 2))
    assert g.base == P([[1, 2], [3], [4, 5]])
    assert g.inflate(P([[1, 3], [2]])) == P([[1, 2, 4, 5], [3]])
    with pytest.raises(DomainError):
        engine.GroupedWord("abc", (2, 2))


def test_indecomposable_examples():
    g = engine.GroupedWord("abc", (2, 1))
    found = set(engine.indecomposable_partitions(g))
    assert found == {P.one(3), P([[1, 3], [2]]), P([[1], [2, 3]])}
    single = engine.GroupedWord("abcd", (4,))
    assert set(engine.indecomposable_partitions(single)) == set(enumerate_partitions(4))
    g = engine.GroupedWord("abcd", (2, 2))
    assert set(engine.indecomposable_partitions(g, P.zero(2))) == set(refinements(g.base))


@pytest.mark.parametrize("sizes", [(1, 2), (2, 1), (1, 1, 1), (2, 2), (1, 3), (2, 1, 1)])
def test_indecomposable_matches_join_filter(sizes):
    g = engine.GroupedWord("abcd"[: sum(sizes)], sizes)
    for pi in enumerate_partitions(g.m):
        target = g.inflate(pi)
        brute = {s for s in enumerate_partitions(g.n) if s.join(g.base) == target}
        assert set(engine.indecomposable_partitions(g, pi)) == brute


def test_product_single_group():
    tensor = TensorSystem(SymbolicMoments())
    lhs, rhs = engine.product_cumulant(tensor, engine.GroupedWord("abc", (3,)))
    assert lhs == rhs == m("a", "b", "c")


@pytest.mark.parametrize("name", ["tensor", "free", "boolean", "cfree", "graded"])
@pytest.mark.parametrize("sizes", [(2, 2), (1, 2, 1), (2, 1, 1)])
def test_product_partitioned(name, sizes):
    system = make_system(name, 9)
    g = engine.GroupedWord("xyyx", sizes)
    for pi in enumerate_partitions(g.m):
        lhs, rhs = engine.product_cumulant(system, g, pi)
        assert lhs == rhs


def test_compositions():
    assert list(engine.compositions(1)) == [(1,)]
    assert sorted(engine.compositions(3)) == sorted([(3,), (2, 1), (1, 2), (1, 1, 1)])
    assert len(list(engine.compositions(6))) == 32


# -- recursion ---------------------------------------------------------------------------


def test_recursion_examples():
    tensor = TensorSystem(SymbolicMoments())
    assert engine.recursion_moment(tensor, "x") == m("x")
    k2 = engine.cumulant(tensor, "xx")
    assert engine.recursion_moment(tensor, "xx") == k2 + m("x") * m("x")


def test_classical_recursion_examples():
    assert engine.classical_recursion([0, 1, 0, 3, 0, 15]) == [0, 1, 0, 0, 0, 0]
    assert engine.classical_recursion([1] * 5) == [1, 0, 0, 0, 0]
    m1, m2, m3 = m("x"), m("x", "x"), m("x", "x", "x")
    assert engine.classical_recursion([m1, m2, m3])[2] == m3 - 3 * m1 * m2 + 2 * m1**3


@pytest.mark.parametrize("n", range(1, 9))
def test_classical_recursion_matches_lattice(n):
    src = RandomMoments(n, "uni")
    moments = [src(("x",) * k) for k in range(1, n + 1)]
    tensor = TensorSystem(src)
    assert engine.classical_recursion(moments)[-1] == engine.cumulant(tensor, ("x",) * n)


# -- identity removal --------------------------------------------------------------------


def test_remove_identity_examples():
    tensor = TensorSystem(SymbolicMoments())
    lhs, rhs = engine.remove_identity_check(tensor, ("x", "1", "y"), P([[1, 3], [2]]))
    assert lhs == rhs == engine.cumulant(tensor, "xy")
    lhs, rhs = engine.remove_identity_check(tensor, ("x", "1"), P.one(2))
    assert lhs == rhs == 0
    lhs, rhs = engine.remove_identity_check(tensor, ("1",), P.one(1))
    assert lhs == rhs == 1


@pytest.mark.parametrize("name", SYSTEM_NAMES)
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_remove_identity_all_systems(name, data):
    n = data.draw(st.integers(1, 5))
    word = tuple(data.draw(st.lists(st.sampled_from(["x", "y", "1"]), min_size=n, max_size=n)))
    pi = data.draw(st.sampled_from(enumerate_partitions(n)))
    lhs, rhs = engine.remove_identity_check(make_system(name, 10), word, pi)
    assert lhs == rhs


# -- lattice transforms ---------------------------------------------------------------


def test_univariate_transforms():
    assert engine.univariate_cumulants([0, 1, 0, 3], "full") == [0, 1, 0, 0]
    assert engine.univariate_cumulants([0, 1, 0, 2, 0, 5], "nc") == [0, 1, 0, 0, 0, 0]
    b = engine.univariate_cumulants([m("x"), m("x", "x")], "interval")
    assert b[1] == m("x", "x") - m("x") ** 2
    for lat in ("full", "nc", "interval"):
        moments = [Fraction(k, k + 1) for k in range(1, 7)]
        assert engine.univariate_moments(engine.univariate_cumulants(moments, lat), lat) == moments


def test_free_from_classical_examples():
    kappa = engine.classical_recursion([0, 1, 0, 3])
    assert engine.free_from_classical([0, 1, 0, 3]) == [0, 1, 0, 1]
    assert engine.free_from_classical([0, 1])[1] == kappa[1]


# -- mixtures ------------------------------------------------------------------------


def test_brillinger_deterministic_mixture():
    mix = MixtureSystem([(Fraction(1, 2), Moments.univariate([0, 0])), (Fraction(1, 2), Moments.univariate([1, 1]))])
    assert engine.brillinger(mix, "xx") == Fraction(1, 4)
    assert engine.mixture_classical_cumulant(mix, "xx") == Fraction(1, 4)


def test_brillinger_single_state():
    src = RandomMoments(21)
    mix = MixtureSystem([(1, src)])
    for w in ("x", "xy", "xyx", "xxyy"):
        assert engine.brillinger(mix, w) == engine.cumulant(TensorSystem(src), w)


@pytest.mark.parametrize("seed", range(3))
def test_mixture_cumulants_are_averaged_conditional_cumulants(seed):
    mix = MixtureSystem([(Fraction(1, 5), RandomMoments(seed, "a")), (Fraction(4, 5), RandomMoments(seed, "b"))])
    for pi in enumerate_partitions(4):
        assert engine.conditional_average(mix, "xyxy", pi) == engine.cumulant_partitioned(mix, "xyxy", pi)


# -- independence ------------------------------------------------------------------------


def test_audit_examples():
    bound = Moments({("x",): 2, ("y",): 3, ("x", "y"): 6})
    report = engine.mixed_cumulant_audit(TensorSystem(bound), "xy", [1])
    assert report.ok and [pi for pi, _ in report.entries] == [P.one(2)]
    with pytest.raises(DomainError):
        engine.mixed_partitions(3, [1, 2, 3])


@pytest.mark.parametrize("name", ["tensor", "free", "boolean", "cfree", "graded"])
@pytest.mark.parametrize("word", ["xyxy", "xxyy", "xyyxy"])
def test_mixed_cumulants_vanish(name, word):
    system = independent_pair(name, 12, False)
    split = [i for i, x in enumerate(word, start=1) if x == "x"]
    report = engine.mixed_cumulant_audit(system, word, split)
    assert report.entries and report.ok, report.nonzero


def test_mixed_cumulants_detect_dependence():
    """The audit is not vacuous: generic joint moments give nonzero mixed cumulants."""
    report = engine.mixed_cumulant_audit(FreeSystem(RandomMoments(3)), "xyxy", [1, 3])
    assert not report.ok


@pytest.mark.parametrize("kind", [TensorSystem, FreeSystem, BooleanSystem])
def test_additivity(kind):
    base = kind(RandomMoments(14))
    joint = engine.joint_moments(base, {"x": 0, "y": 1})
    summed = kind(engine.linear_moments(joint, {"s": [(1, "x"), (1, "y")]}))
    pure = kind(joint)
    for n in range(1, 5):
        assert engine.cumulant(summed, "s" * n) == engine.cumulant(pure, "x" * n) + engine.cumulant(pure, "y" * n)


@pytest.mark.parametrize("name", ["tensor", "free", "boolean", "cfree", "graded"])
def test_affine_invariance_in_system(name):
    system = make_system(name, 15)
    lam = Fraction(-3, 2)
    shift = {"s": [(1, "y"), (Fraction(5, 7), "1")]}
    scale = {"s": [(lam, "y")]}
    for n in range(2, 5):
        for pi in enumerate_partitions(n):
            base = engine.cumulant_partitioned(system, "y" * n, pi)
            if all(len(b) > 1 for b in pi.blocks):
                assert engine.multilinear_cumulant(system, "s" * n, pi, shift) == base
            assert engine.multilinear_cumulant(system, "s" * n, pi, scale) == lam**n * base


@pytest.mark.parametrize("name", ["tensor", "free", "cfree"])
def test_affine_invariance_of_shifted_moments(name):
    """Unital products: rebuilding the system on the moments of ``x + c``
    gives the same cumulants as ``x`` (beyond the first)."""
    system = make_system(name, 15)
    cls = type(system)
    combos = {"s": [(1, "x"), (Fraction(5, 7), "1")]}
    if name == "cfree":
        shifted = cls(engine.linear_moments(system.phi_moments, combos),
                      engine.linear_moments(system.psi.moments, combos))
    else:
        shifted = cls(engine.linear_moments(system.moments, combos))
    for n in range(2, 5):
        for pi in enumerate_partitions(n):
            if all(len(b) > 1 for b in pi.blocks):
                assert engine.cumulant_partitioned(shifted, "s" * n, pi) == engine.cumulant_partitioned(
                    system, "x" * n, pi)


def test_boolean_product_depends_on_generator():
    """The regular free product is defined through the generator, so taking
    ``x + c`` as generator changes the higher boolean cumulants."""
    src = Moments.univariate([1, 2, 5])
    shifted = BooleanSystem(engine.linear_moments(src, {"s": [(1, "x"), (1, "1")]}))
    original = BooleanSystem(src)
    assert engine.cumulant(shifted, "ss") == engine.cumulant(original, "xx")
    assert engine.cumulant(shifted, "sss") != engine.cumulant(original, "xxx")


def _component_product(system, word, pi, value):
    out = 1
    for comp in connected_components(pi):
        support = sorted(i for b in comp for i in b)
        sub = SetPartition([[support.index(i) + 1 for i in b] for b in comp])
        out = out * value(system, block_word(word, support), sub)
    return out


@pytest.mark.parametrize("system", [
    TensorSystem(RandomMoments(16)),
    FreeSystem(RandomMoments(16)),
    GradedSystem(RandomMoments(16), {"x": 1, "y": 1, "z": 0}),
], ids=["tensor", "free", "graded"])
@pytest.mark.parametrize("n", range(1, 6))
def test_factorisation_over_connected_components(system, n):
    word = tuple("xyzxy"[:n])
    phi = lambda s, w, p: s.phi(w, p)  # noqa: E731
    for pi in enumerate_partitions(n):
        assert system.phi(word, pi) == _component_product(system, word, pi, phi)
        assert engine.cumulant_partitioned(system, word, pi) == _component_product(
            system, word, pi, engine.cumulant_partitioned)


def test_linear_moments_passthrough():
    src = FunctionMoments(lambda w: len(w))
    lin = engine.linear_moments(src, {"s": [(2, "x"), (1, "1")]})
    # s s = 4 xx + 2 x + 2 x + 1
    assert lin(("s", "s")) == 4 * 2 + 2 * 1 + 2 * 1 + 1
    assert lin(("y",)) == 1
