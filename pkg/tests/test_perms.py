import itertools

import pytest
from hypothesis import given, strategies as st

from atparity.errors import InvalidInput
from atparity.perms import (
    Permutation,
    all_images,
    compose,
    cycle_sign,
    cyclic,
    inverse,
    inversion_sign,
    lex_rank,
    lex_unrank,
    sign,
    symmetric_group,
)

P = Permutation.from_one_line


def perms_of(n):
    return st.permutations(list(range(n))).map(lambda xs: Permutation(tuple(xs)))


same_order_pair = st.integers(1, 8).flatmap(lambda n: st.tuples(perms_of(n), perms_of(n)))


@pytest.mark.parametrize(
    "mapping, expected",
    [((1, 2, 3, 4), 1), ((2, 1, 3), -1), ((2, 3, 4, 5, 1), 1)],
)
def test_sign_examples(mapping, expected):
    assert sign(P(mapping)) == expected


def test_compose_examples():
    pi = P((3, 1, 2))
    assert compose(pi, Permutation.identity(3)) == pi
    assert compose(P((2, 1, 3)), P((2, 1, 3))).is_identity()
    assert compose(P((2, 3, 1)), P((2, 3, 1))) == P((3, 1, 2))


def test_compose_is_right_to_left():
    pi, rho = P((2, 3, 1, 4)), P((1, 2, 4, 3))
    c = compose(pi, rho)
    assert all(c(i) == pi(rho(i)) for i in range(1, 5))


def test_compose_order_mismatch():
    with pytest.raises(InvalidInput):
        compose(P((1, 2)), P((1, 2, 3)))


def test_inverse_examples():
    assert inverse(Permutation.identity(4)).is_identity()
    assert inverse(P((2, 3, 1))) == P((3, 1, 2))
    assert inverse(P((2, 1))) == P((2, 1))


def test_cyclic_examples():
    assert cyclic(3, 1) == P((2, 3, 1))
    assert cyclic(5, 5).is_identity()
    assert sign(cyclic(5, 1)) == 1
    assert cyclic(4, -1) == inverse(cyclic(4, 1))
    with pytest.raises(InvalidInput):
        cyclic(0, 1)


def test_invalid_mappings():
    with pytest.raises(InvalidInput):
        P((1, 1, 2))
    with pytest.raises(InvalidInput):
        P((0, 1))


@given(same_order_pair)
def test_sign_multiplicative(pair):
    pi, rho = pair
    assert sign(compose(pi, rho)) == sign(pi) * sign(rho)


@given(st.integers(1, 9).flatmap(perms_of))
def test_inverse_properties(pi):
    assert compose(pi, inverse(pi)).is_identity()
    assert sign(inverse(pi)) == sign(pi)


@given(st.integers(0, 6).map(lambda m: 2 * m + 1), st.integers(-50, 50))
def test_odd_cycles_are_even(n, k):
    assert sign(cyclic(n, k)) == 1


@pytest.mark.parametrize("n", range(1, 7))
def test_inversion_and_cycle_signs_agree(n):
    for p in all_images(n):
        assert inversion_sign(p) == cycle_sign(p)


def test_symmetric_group_is_lexicographic():
    listed = [p.mapping for p in symmetric_group(4)]
    assert listed == sorted(listed)
    assert len(set(listed)) == 24


@pytest.mark.parametrize("n", [1, 3, 5])
def test_lex_rank_roundtrip(n):
    for r, p in enumerate(symmetric_group(n)):
        assert lex_rank(p) == r
        assert lex_unrank(n, r) == p


def test_str_is_one_based():
    assert str(P((2, 3, 1))) == "(2,3,1)"
    assert P((2, 3, 1)).mapping == (2, 3, 1)
