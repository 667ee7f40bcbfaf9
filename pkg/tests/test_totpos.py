import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import leibniz_det, positive_fractions

from thetapos.linalg import DimensionError, RatMatrix
from thetapos.totpos import (
    DecompositionError,
    PositiveParams,
    UnipotentUpper,
    elementary_o,
    elementary_u,
    is_totally_positive,
    is_unipotent_positive,
    param_F,
    proximality_check,
    reduced_word_of_longest,
    sample_totally_positive,
    sample_word_params,
    sl3_transition,
    whitney_factor,
    whitney_factor_sl2,
    word_transition,
)
from thetapos.weyl import enumerate_reduced_words, type_A

F = Fraction


def test_elementary_u_examples():
    assert elementary_u(1, 0, 2) == RatMatrix.identity(2)
    assert elementary_u(1, 7, 2) == RatMatrix([[1, 7], [0, 1]])
    assert elementary_u(2, 5, 3) == RatMatrix([[1, 0, 0], [0, 1, 5], [0, 0, 1]])
    with pytest.raises(IndexError):
        elementary_u(3, 1, 3)
    with pytest.raises(IndexError):
        elementary_u(0, 1, 3)


def test_total_positivity_examples():
    assert is_totally_positive(RatMatrix([[1, 1], [1, 2]]))
    assert not is_totally_positive(RatMatrix.identity(2))
    u = param_F(PositiveParams((1, 2, 1), (1, 1, 1)), 3)
    assert is_totally_positive(u @ u.T)
    with pytest.raises(DimensionError):
        is_totally_positive(RatMatrix([[1, 2, 3]]))


def test_unipotent_positivity_examples():
    assert is_unipotent_positive(RatMatrix([[1, 2, 1], [0, 1, 1], [0, 0, 1]]))
    assert not is_unipotent_positive(elementary_u(1, 1, 3))
    assert not is_unipotent_positive(RatMatrix.identity(3))
    with pytest.raises(ValueError):
        UnipotentUpper([[1, 0], [1, 1]])


def test_param_examples():
    a, b, c = F(2), F(3), F(5)
    assert param_F(PositiveParams((1, 2, 1), (a, b, c)), 3) == RatMatrix([[1, a + c, a * b], [0, 1, b], [0, 0, 1]])
    cp, bp, ap = F(7), F(11), F(13)
    assert param_F(PositiveParams((2, 1, 2), (cp, bp, ap)), 3) == RatMatrix([[1, bp, bp * ap], [0, 1, cp + ap], [0, 0, 1]])
    assert param_F(PositiveParams((), ()), 3) == RatMatrix.identity(3)
    with pytest.raises(ValueError):
        param_F(PositiveParams((1, 1), (1, 1)), 3)


def test_sl3_transition_examples():
    assert sl3_transition(1, 1, 1) == (F(1, 2), F(2), F(1, 2))
    assert sl3_transition(2, 0, 3) == (0, 5, 0)
    assert sl3_transition(1, 2, 3) == (F(3, 2), F(4), F(1, 2))
    with pytest.raises(ZeroDivisionError):
        sl3_transition(1, 1, -1)


def test_word_transition_examples():
    out = word_transition(PositiveParams((1, 2, 1), (1, 1, 1)), (2, 1, 2), 3)
    assert out == PositiveParams((2, 1, 2), (F(1, 2), F(2), F(1, 2)))
    same = PositiveParams((1, 2, 1), (3, 4, 5))
    assert word_transition(same, (1, 2, 1), 3) == same


def test_all_a3_word_pairs_at_unit_values():
    words = [w.letters for w in enumerate_reduced_words(type_A(3), reduced_word_of_longest(4))]
    for src in words:
        p = PositiveParams(src, (1,) * 6)
        image = param_F(p, 4)
        for dst in words:
            assert param_F(word_transition(p, dst, 4), 4) == image


def test_whitney_examples():
    s, t = F(2, 3), F(5, 7)
    r = 1 + s * t
    f = whitney_factor(RatMatrix([[r, s], [t, 1]]))
    assert f.lower == elementary_o(1, t / r, 2)
    assert f.diag == RatMatrix.diag([r, 1 / r])
    assert f.upper == elementary_u(1, s / r, 2)
    assert whitney_factor_sl2(s, t) == f

    ident = whitney_factor(RatMatrix.identity(3))
    assert (ident.lower, ident.diag, ident.upper) == (RatMatrix.identity(3),) * 3

    with pytest.raises(DecompositionError):
        whitney_factor(RatMatrix([[0, 1], [1, 0]]))


def test_whitney_recovers_constructed_factors():
    rng = random.Random(5)
    word = reduced_word_of_longest(3).letters
    u = param_F(sample_word_params(word, rng), 3)
    o = param_F(sample_word_params(word, rng), 3).T
    d = RatMatrix.diag([F(2), F(3, 4), F(5)])
    f = whitney_factor(o @ d @ u)
    assert (f.lower, f.diag, f.upper) == (o, d, u)


def test_proximality_examples():
    assert proximality_check(RatMatrix.diag([1, 2, 3]))
    assert not proximality_check(RatMatrix.identity(2))
    assert not proximality_check(RatMatrix.diag([-1, 2]))
    assert proximality_check(sample_totally_positive(3, random.Random(0)))


def test_mirrored_cone():
    p = PositiveParams((1, 2, 1), (1, 2, 3))
    m = param_F(p, 3, mirrored=True)
    assert is_unipotent_positive(m, mirrored=True)
    assert not is_unipotent_positive(m)


# property tests

words_n = st.sampled_from([3, 4]).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(positive_fractions, min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
)


@settings(max_examples=40, deadline=None)
@given(words_n)
def test_positive_params_give_positive_unipotents(data):
    n, values = data
    p = PositiveParams(reduced_word_of_longest(n).letters, values)
    u = param_F(p, n)
    assert is_unipotent_positive(u)
    # brute force over every non-forced minor with an independent determinant
    for k in range(1, n + 1):
        for rows in combinations(range(n), k):
            for cols in combinations(range(n), k):
                if all(r <= c for r, c in zip(rows, cols)):
                    assert leibniz_det(u.submatrix(rows, cols).tolist()) > 0


@settings(max_examples=40, deadline=None)
@given(words_n, st.data())
def test_a_zero_parameter_leaves_the_open_cell(data, draw):
    n, values = data
    i = draw.draw(st.integers(0, len(values) - 1))
    values[i] = F(0)
    assert not is_unipotent_positive(param_F(PositiveParams(reduced_word_of_longest(n).letters, values), n))


@settings(max_examples=40, deadline=None)
@given(words_n, st.data())
def test_unipotent_semigroup_closure(data, draw):
    n, values = data
    k = len(values)
    other = draw.draw(st.lists(positive_fractions, min_size=k, max_size=k))
    word = reduced_word_of_longest(n).letters
    u1 = param_F(PositiveParams(word, values), n)
    u2 = param_F(PositiveParams(word, other), n)
    assert is_unipotent_positive(u1 @ u2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_tp_semigroup_closure(seed):
    rng = random.Random(seed)
    n = rng.choice((2, 3, 4))
    g, h = sample_totally_positive(n, rng), sample_totally_positive(n, rng)
    assert is_totally_positive(g) and is_totally_positive(h) and is_totally_positive(g @ h)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([3, 4]))
def test_word_transitions_between_any_two_words(seed, n):
    rng = random.Random(seed)
    words = [w.letters for w in enumerate_reduced_words(type_A(n - 1), reduced_word_of_longest(n))]
    src, dst = rng.choice(words), rng.choice(words)
    p = sample_word_params(src, rng)
    out = word_transition(p, dst, n)
    assert out.word == dst and out.is_positive
    assert param_F(out, n) == param_F(p, n)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_whitney_round_trip_and_positive_diagonal(seed):
    rng = random.Random(seed)
    g = sample_totally_positive(rng.choice((2, 3, 4)), rng)
    f = whitney_factor(g)
    assert f.product() == g
    assert all(f.diag[i, i] > 0 for i in range(g.rows))
    assert is_unipotent_positive(f.upper) and is_unipotent_positive(f.lower.T)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_totally_positive_matrices_are_proximal(seed):
    rng = random.Random(seed)
    assert proximality_check(sample_totally_positive(rng.choice((3, 4)), rng))
