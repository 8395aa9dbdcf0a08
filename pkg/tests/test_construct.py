import math

import pytest

from algebra import FieldContext, GroupSpec
from construct import (
    b_d,
    cm_constant,
    egz_cyclic,
    eta,
    eta_exponent,
    exact_sidon_set,
    extremal_sequence_s2m,
    gao_formula,
    kemnitz,
    moment_curve,
    moment_curve_bounds,
    moment_curve_point,
    s4_lower_sequence,
    s4_upper,
    sidon_basis,
    sidon_d4,
    sidon_trivial_bound,
    sidon_upper_bound,
    z3_egz_upper,
)
from errors import FieldError, ParameterError
from zerosum import find_zero_sum_subsequence, is_sidon_set, is_zero_free_set

MOMENT_CURVE_CASES = [(1, 3), (2, 2), (2, 3), (3, 2)]


def test_sidon_basis():
    output = sidon_basis(3)
    assert output.size == 4
    assert [x.coords for x in output.payload] == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert output.validate()


def test_sidon_set_of_size_six():
    output = sidon_d4()
    assert output.size == 6
    assert output.validate()
    assert output.size == sidon_upper_bound(4).floor


@pytest.mark.parametrize("m, k", MOMENT_CURVE_CASES)
def test_moment_curve_is_zero_free(m, k):
    output = moment_curve(m, k)
    assert output.spec == GroupSpec.elementary(2, m * k)
    assert output.size == 2**k
    assert len(set(output.payload)) == 2**k
    for r in range(2, 2 * m + 1, 2):
        assert is_zero_free_set(output.spec, output.payload, r).is_zero_free
    assert output.validate()


@pytest.mark.parametrize("m, k", MOMENT_CURVE_CASES)
def test_extremal_sequence(m, k):
    output = extremal_sequence_s2m(m, k)
    assert output.is_sequence
    assert output.size == 2**k + 2 * m - 2
    assert find_zero_sum_subsequence(output.payload, 2 * m) is None
    assert output.validate()
    assert moment_curve_bounds(m, k) == (2**k, output.size + 1)


def test_moment_curve_point_blocks():
    ctx = FieldContext.default(3)
    # x = 2: x^3 = x + 1 modulo x^3 + x + 1
    assert moment_curve_point(ctx, 2, 2) == (0, 1, 0, 1, 1, 0)
    assert moment_curve_point(ctx, 2, 0) == (0,) * 6


def test_moment_curve_with_other_modulus():
    ctx = FieldContext.from_hex(3, "d")  # x^3 + x^2 + 1
    output = moment_curve(2, 3, ctx)
    assert output.validate()
    assert "0xd" in output.notes[0]
    with pytest.raises(ParameterError):
        moment_curve(2, 4, ctx)
    with pytest.raises(FieldError):
        FieldContext.from_hex(3, "9")


def test_s4_lower_sequences():
    for d, s4 in [(1, 5), (2, 6), (3, 7), (4, 9)]:
        output = s4_lower_sequence(d)
        assert output.size + 1 == s4
        assert output.validate()
    assert [x.coords for x in exact_sidon_set(2)] == [(0, 0), (0, 1), (1, 0)]


def test_s4_lower_sequence_needs_a_sidon_set():
    spec = GroupSpec.parse("Z2^5")
    with pytest.raises(ParameterError):
        s4_lower_sequence(5)
    basis = sidon_basis(5).payload
    output = s4_lower_sequence(5, basis)
    assert output.size == len(basis) + 2
    assert output.validate()
    not_sidon = basis + (spec.element((1, 1, 0, 0, 0)),)
    assert not is_sidon_set(spec, not_sidon)
    with pytest.raises(ParameterError):
        s4_lower_sequence(5, not_sidon)


def test_b_d_values():
    assert [b_d(d) for d in range(1, 5)] == [1, 2, 3, 5]
    assert [s4_upper(d) for d in range(1, 5)] == [5, 6, 7, 9]


@pytest.mark.parametrize("d", range(1, 40))
def test_sidon_bound_floor_is_exact(d):
    bound = sidon_upper_bound(d)
    # the floor must be the largest integer f with (2f - 1)^2 <= 2^(d+3) - 7
    f = bound.floor
    assert (2 * f - 1) ** 2 <= 2 ** (d + 3) - 7 < (2 * f + 1) ** 2
    assert b_d(d) == f - 1
    assert abs(bound.value - (math.sqrt(2 ** (d + 1) - 1.75) + 0.5)) < 1e-9 * bound.value


def test_trivial_sidon_bound():
    assert sidon_trivial_bound(4) == 6
    assert sidon_trivial_bound(1) == 2
    with pytest.raises(ParameterError):
        sidon_trivial_bound(0)


def test_cm_values():
    c3 = cm_constant(3)
    assert c3.product == 60
    assert c3.below("3.9149")
    assert not c3.below("3.9148")
    c4 = cm_constant(4)
    assert c4.product == 3288
    assert c4.below("7.5724")
    assert not c4.below("7.5723")
    assert c4.lambda_check()
    assert c4.coarse_check()


def test_cm_rows():
    table = cm_constant(4)
    assert table.rows()[0][:3] == (2, 0, 3)
    assert [n for _, _, _, n in table.rows()][-1] == table.N[4]
    with pytest.raises(ParameterError):
        cm_constant(1)


def test_eta():
    assert eta() == pytest.approx(2.7551, abs=1e-4)
    assert eta_exponent() > 1.084
    assert z3_egz_upper(2) == pytest.approx(2 * eta() ** 2 + 1)
    assert z3_egz_upper(2) >= 9


def test_gao_formula():
    value = gao_formula(2, 2, 2)
    assert value.value == 6
    assert value.proved
    assert not gao_formula(2, 1, 3).proved
    assert gao_formula(6, 5, 2).conjectured
    assert not gao_formula(6, 5, 2).proved
    assert egz_cyclic(5) == 9
    assert kemnitz(3) == 9
    with pytest.raises(ParameterError):
        gao_formula(1, 1, 1)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_moment_curve_of_two_powers_is_sidon(k):
    output = moment_curve(2, k)
    assert output.size == 2**k
    assert is_sidon_set(output.spec, output.payload)


@pytest.mark.parametrize("m", range(2, 13))
def test_cm_lambda_check_holds(m):
    assert cm_constant(m).lambda_check()
