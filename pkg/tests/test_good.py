import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exchcumulants import engine, good
from exchcumulants.errors import DomainError, SizeLimitError
from exchcumulants.moments import SymbolicMoments
from exchcumulants.partitions import SetPartition, enumerate_partitions, mobius_full
from exchcumulants.rings import CycloElement
from exchcumulants.systems import TensorSystem
from exchcumulants.verify import SYSTEM_NAMES, make_system

P = SetPartition


def test_weights_order_two():
    w = good.good_weights(2)
    assert w[P.zero(2)] == -2
    assert w[P.one(2)] == 2


@pytest.mark.parametrize("n", range(1, 7))
def test_weights_are_n_times_mobius(n):
    for pi, f, expected in good.check_weights(n):
        assert f == expected
        assert f.in_base_ring()


@pytest.mark.parametrize("n", range(2, 6))
def test_shorter_words_vanish(n):
    for m in range(1, n):
        assert all(w == 0 for w in good.subword_weights(m, n).values())


def test_weights_same_for_any_jobs():
    good._WEIGHTS.pop(5, None)
    serial = good._compute_weights(5, 1)
    parallel = good._compute_weights(5, 3)
    assert serial == parallel


def test_size_limits():
    with pytest.raises(SizeLimitError):
        good.good_weights(8)
    with pytest.raises(SizeLimitError):
        good.partitioned_weights(P([[1, 2, 3, 4, 5], [6, 7, 8, 9, 10, 11, 12]]))
    tensor = TensorSystem(SymbolicMoments())
    with pytest.raises(DomainError):
        good.good_partitioned(tensor, "xy", P.one(3))


def test_expansion_is_rational():
    tensor = TensorSystem(SymbolicMoments())
    total = good.good_expansion(tensor, "xyz")
    assert isinstance(total, CycloElement)
    assert Fraction(1, 3) * total.base_value() == engine.cumulant(tensor, "xyz")


@pytest.mark.parametrize("pi", [P([[1, 2], [3, 4]]), P([[1, 3], [2]]), P([[1, 2, 3], [4, 5]])])
def test_partitioned_weights_examples(pi):
    order, weights = good.partitioned_weights(pi)
    sizes = pi.block_sizes()
    assert order == math.lcm(*sizes)
    assert all(w == math.prod(sizes) * mobius_full(s, pi) for s, w in weights.items())


def test_partitioned_extremes():
    tensor = TensorSystem(SymbolicMoments())
    word = tuple("abc")
    assert good.good_partitioned(tensor, word, P.zero(3)) == tensor.phi(word, P.zero(3))
    assert good.good_partitioned(tensor, word, P.one(3)) == good.good_cumulant(tensor, word)


def test_symbolic_tensor_agreement():
    tensor = TensorSystem(SymbolicMoments())
    for n in range(1, 6):
        word = tuple("abcde"[:n])
        assert good.good_cumulant(tensor, word) == engine.cumulant(tensor, word)


@pytest.mark.parametrize("name", SYSTEM_NAMES)
@settings(max_examples=10, deadline=None)
@given(data=st.data())
def test_good_matches_mobius(name, data):
    n = data.draw(st.integers(1, 5))
    word = tuple(data.draw(st.lists(st.sampled_from("xy"), min_size=n, max_size=n)))
    pi = data.draw(st.sampled_from(enumerate_partitions(n)))
    system = make_system(name, data.draw(st.integers(0, 50)))
    assert good.good_cumulant(system, word) == engine.cumulant(system, word)
    assert good.good_partitioned(system, word, pi) == engine.cumulant_partitioned(system, word, pi)
