import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from atparity import latin, sums
from atparity.errors import InvalidInput, ResourceCapExceeded
from atparity.exact_matrix import IntMatrix
from atparity.polyoracle import (
    SquareFreePoly,
    coeff_pipeline,
    full_coefficient,
    matrix_poly,
    prop42_check,
    prop42_lhs,
    prop42_trials,
    sf_multiply,
    theorem41_coeff,
)


def sign_n(n):
    return -1 if (n * (n - 1) // 2) % 2 else 1


def sparse_poly(n):
    bits = n * n
    return st.dictionaries(
        st.integers(0, (1 << bits) - 1), st.integers(-5, 5).filter(bool), max_size=12
    ).map(lambda d: SquareFreePoly(n, d))


# ---------------------------------------------------------------- examples


def test_matrix_poly_examples():
    d2 = matrix_poly(2, "determinant")
    # X11 X22 -> bits 0 and 3; X12 X21 -> bits 1 and 2
    assert d2.terms == {0b1001: 1, 0b0110: -1}
    p3 = matrix_poly(3, "permanent")
    assert len(p3.terms) == 6 and set(p3.terms.values()) == {1}
    d3 = matrix_poly(3, "determinant")
    assert sorted(d3.terms.values()) == [-1, -1, -1, 1, 1, 1]
    with pytest.raises(InvalidInput):
        matrix_poly(3, "pfaffian")


def test_multiply_examples():
    d2, p2 = matrix_poly(2, "determinant"), matrix_poly(2, "permanent")
    assert sf_multiply(d2, d2).terms == {0b1111: -2}
    assert sf_multiply(p2, p2).terms == {0b1111: 2}
    assert sf_multiply(d2, SquareFreePoly.one(2)) == d2
    assert full_coefficient(SquareFreePoly.zero(3)) == 0
    assert full_coefficient(sf_multiply(p2, p2)) == 2
    assert sign_n(2) * full_coefficient(sf_multiply(d2, d2)) == 2


def test_multiply_drops_overlaps():
    P = SquareFreePoly(2, {0b0001: 3})
    assert sf_multiply(P, P) == SquareFreePoly.zero(2)
    with pytest.raises(InvalidInput):
        sf_multiply(P, SquareFreePoly.one(3))


def test_json_round_trip():
    P = matrix_poly(3, "determinant")
    d = P.to_json()
    assert [m for m, _ in d["terms"]] == sorted(P.terms)
    assert SquareFreePoly.from_json(d) == P


@settings(max_examples=60, deadline=None)
@given(sparse_poly(3), sparse_poly(3), sparse_poly(3))
def test_multiply_associative_commutative(P, Q, R):
    assert sf_multiply(P, Q) == sf_multiply(Q, P)
    assert sf_multiply(sf_multiply(P, Q), R) == sf_multiply(P, sf_multiply(Q, R))


# ---------------------------------------------------------------- pipeline


@pytest.mark.parametrize("mode, value", [("per_n", 12), ("det_n", 0), ("per_det", 12)])
def test_pipeline_n3(mode, value):
    assert coeff_pipeline(3, mode) == value


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_pipeline_matches_enumeration(n):
    cs = latin.count_summary(n)
    assert coeff_pipeline(n, "per_n") == cs.total
    assert sign_n(n) * coeff_pipeline(n, "det_n") == cs.even_minus_odd
    if n % 2:
        assert coeff_pipeline(n, "per_det") == sign_n(n) * math.factorial(n) * math.factorial(n - 1) * cs.at


def test_pipeline_matches_alternating_sums():
    for n in (1, 2, 3, 4):
        assert coeff_pipeline(n, "det_n") == sums.det_power_sum(n).raw_sum
    assert coeff_pipeline(3, "per_det") == sums.per_det_sum(3).raw_sum


def test_factor_order_is_irrelevant():
    per, det = matrix_poly(3, "permanent"), matrix_poly(3, "determinant")
    orders = [[per, det, det], [det, per, det], [det, det, per]]
    values = set()
    for fs in orders:
        acc = SquareFreePoly.one(3)
        for f in fs:
            acc = acc * f
        values.add(full_coefficient(acc))
    assert values == {12}


def test_pipeline_errors():
    with pytest.raises(InvalidInput):
        coeff_pipeline(4, "per_det")
    with pytest.raises(InvalidInput):
        coeff_pipeline(3, "bogus")
    with pytest.raises(ResourceCapExceeded):
        coeff_pipeline(5, "per_n")
    with pytest.raises(ResourceCapExceeded):
        coeff_pipeline(6, "per_n", extended=True)


# ---------------------------------------------------------------- tuple sums


def test_tuple_coefficient_values():
    assert theorem41_coeff(1) == 1
    C = theorem41_coeff(3)
    assert C == 24
    cs = latin.count_summary(3)
    assert sign_n(3) * C // (6 * 4) == cs.at * cs.r_diff == -1


def test_tuple_coefficient_negative_control():
    # without the square-free filter the signs cancel and the Latin square content is lost
    assert theorem41_coeff(3, square_free=False) == 0


def test_tuple_coefficient_errors():
    with pytest.raises(InvalidInput):
        theorem41_coeff(2)
    with pytest.raises(ResourceCapExceeded):
        theorem41_coeff(5)


def test_tuple_identity_fixed_cases():
    rep = prop42_check([IntMatrix.identity(3)] * 3)
    assert rep.computed["lhs"] == rep.expected["lhs"] == 2
    rep = prop42_check([IntMatrix.ones(3)] * 3)
    assert rep.computed["lhs"] == rep.expected["lhs"] == 0


def test_tuple_identity_n1():
    assert prop42_lhs([IntMatrix.of([[7]])]) == 7
    assert prop42_check([IntMatrix.of([[7]])]).status == "pass"


def test_tuple_identity_mixed_matrices():
    rng = random.Random(99)
    for _ in range(5):
        mats = [IntMatrix.of([[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]) for _ in range(3)]
        assert prop42_check(mats).status == "pass"


def test_tuple_identity_wrong_r_diff_fails():
    assert prop42_check([IntMatrix.identity(3)] * 3, r_diff=2).status == "fail"


def test_tuple_identity_errors():
    with pytest.raises(InvalidInput):
        prop42_lhs([IntMatrix.identity(2)] * 2)
    with pytest.raises(InvalidInput):
        prop42_lhs([IntMatrix.identity(3)] * 2 + [IntMatrix.identity(2)])


def test_tuple_identity_trials_seeded():
    a = prop42_trials(3, trials=20, seed=5)
    b = prop42_trials(3, trials=20, seed=5)
    assert a.status == "pass"
    assert a.details == b.details
    assert len(a.details) == 22
