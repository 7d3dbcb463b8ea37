import time

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from umemura import combinatorics as cb
from umemura.ring import A, B


def test_index_sets():
    assert cb.index_set(0, 1).elements == (2,)
    assert cb.index_set(1, 1).elements == (1, 3)
    assert cb.index_set(3, 2).elements == (1, 2, 3, 5, 7)
    with pytest.raises(ValueError):
        cb.index_set(-1, 0)


def test_subset_weights():
    w = cb.subset_weight(0, 2, {2})
    assert (w.d, w.c) == (3, 1)
    w = cb.subset_weight(2, 1, {1})
    assert (w.d, w.c) == (5, 0)
    w = cb.subset_weight(4, 3, ())
    assert (w.d, w.c) == (1, 0)
    with pytest.raises(ValueError):
        cb.subset_weight(1, 1, {2})


def test_chains():
    assert cb.chain(A, 2).bar_value == A + 1
    assert cb.chain(A, 4).chain_value == (A + 1) * (A + 9)
    assert cb.chain(A, 3).chain_value == A * (A + 4)
    assert cb.chain_product(B, {1, 3}) == B * B * (B + 4)
    for k in range(1, 5):
        assert cb.odd_square_chain(A, k) == cb.chain_value(A, 2 * k)


def test_frobenius_examples():
    assert cb.frobenius_to_partition(cb.FrobeniusSymbol((1,), (0,))) == cb.Partition((2,))
    assert cb.frobenius_to_partition(cb.FrobeniusSymbol((2, 1), (1, 0))) == cb.Partition((3, 3))
    assert cb.gl_dim(cb.Partition((2,)), 2) == 3
    with pytest.raises(ValueError):
        cb.gl_dim(cb.Partition((1, 1, 1)), 2)


def test_product_weight_is_not_gl_dimension():
    # the product weight and the Weyl dimension disagree (kept as a comparison)
    assert cb.weight_d((1, 2), (1, 2)) == 1
    assert cb.gl_dim(cb.Partition((3, 3)), 3) == 10


def test_frobenius_roundtrip_exhaustive():
    for size in range(13):
        for p in cb.partitions(size):
            assert cb.frobenius_to_partition(cb.partition_to_frobenius(p)) == p


def test_b_lambda_examples():
    assert cb.b_lambda((2,), (), 2) == 8
    assert cb.b_lambda((1,), (1,), 1) == -8
    assert cb.b_lambda((1, 2), (1,), 1) == 24
    assert cb.b_lambda((1, 2), (1,), 2) == -24
    assert cb.split_b((2,), (), 2) == 8
    assert cb.split_b((1, 2), (1,), 2) == -24


def test_lemma3_anchors():
    assert sum(cb.b_lambda((2,), (), l) for l in (2,)) == 8
    assert sum(cb.b_lambda((1, 2), (1,), l) for l in (1, 2)) == 0


def test_integrality_up_to_ten():
    # every subset weight over [n;m] with n+m <= 10 is an integer
    t0 = time.perf_counter()
    count = 0
    for n in range(11):
        for m in range(11 - n):
            s = cb.index_set(n, m)
            for subset in s.subsets():
                cb.weight_d(s.elements, subset)
                count += 1
    assert count > 10_000
    assert time.perf_counter() - t0 < 10


@st.composite
def split_cases(draw):
    n = draw(st.integers(0, 4))
    m = draw(st.integers(0, 4 - n))
    elems = cb.index_set(n, m).elements
    I = tuple(e for e in elems if draw(st.booleans()))
    J = tuple(e for e in elems if draw(st.booleans()))
    return I, J


@given(split_cases())
def test_b_lambda_splits_on_intersection(case):
    I, J = case
    for l in set(I) & set(J):
        if l != 1:
            assert cb.split_b(I, J, l) + cb.split_b(J, I, l) == cb.b_lambda(I, J, l)


@given(split_cases(), st.integers(-50, 50), st.integers(1, 7))
def test_partial_fraction_expansion(case, num, den):
    I, J = case
    x = mpq(num, den)
    try:
        lhs = cb.two_product(I, J, x)
        rhs = cb.partial_fraction_rhs(I, J, x)
    except ZeroDivisionError:
        return
    assert lhs == rhs


@given(st.integers(0, 6), st.integers(0, 6), st.data())
def test_weight_symmetric_under_complement_swap(n, m, data):
    # d(I) only depends on the unordered pair (I, complement) through |i+j|/|i-j|
    elems = cb.index_set(n, m).elements
    I = tuple(e for e in elems if data.draw(st.booleans()))
    rest = tuple(e for e in elems if e not in I)
    assert cb.weight_d(elems, I) == cb.weight_d(elems, rest)
