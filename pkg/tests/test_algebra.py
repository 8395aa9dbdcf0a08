import itertools
import random

import numpy as np
import pytest

from algebra import (
    FieldContext,
    GroupElement,
    GroupSpec,
    clmul,
    enumerate_elements,
    field_add,
    field_inv,
    field_mul,
    field_pow,
    group_add,
    group_index,
    group_neg,
    group_scale,
    group_sum,
    is_irreducible,
    least_irreducible,
)
from config import override_settings
from errors import CapExceededError, FieldError, GroupSpecError


def test_least_irreducible_table():
    assert [least_irreducible(k) for k in range(1, 6)] == [0b10, 0b111, 0b1011, 0b10011, 0b100101]


def test_reducible_polynomials():
    assert not is_irreducible(0b101)  # (x+1)^2
    assert not is_irreducible(0b10001)  # (x+1)^4
    assert is_irreducible(0x11B)


def test_clmul_is_carry_less():
    assert clmul(0b11, 0b11) == 0b101


def test_aes_field_product():
    ctx = FieldContext(8, 0x11B)
    assert field_mul(ctx, ctx.element(0x57), ctx.element(0x83)).value == 0xC1


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        FieldContext(2, 0b101)
    with pytest.raises(FieldError):
        FieldContext(3, 0b111)
    with pytest.raises(FieldError):
        FieldContext.from_hex(2, "zz")


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_field_axioms_exhaustive(k):
    ctx = FieldContext.default(k)
    elements = list(ctx.elements())
    for a, b in itertools.product(elements, repeat=2):
        assert field_mul(ctx, a, b) == field_mul(ctx, b, a)
        assert field_add(ctx, a, b) == field_add(ctx, b, a)
    for a, b, c in itertools.product(elements, repeat=3):
        assert field_mul(ctx, field_mul(ctx, a, b), c) == field_mul(ctx, a, field_mul(ctx, b, c))
        assert field_mul(ctx, a, field_add(ctx, b, c)) == field_add(
            ctx, field_mul(ctx, a, b), field_mul(ctx, a, c)
        )
    for a in elements[1:]:
        assert field_mul(ctx, a, field_inv(ctx, a)) == ctx.one
        assert field_pow(ctx, a, ctx.size - 1) == ctx.one


def test_zero_power_conventions():
    ctx = FieldContext.default(3)
    assert field_pow(ctx, ctx.zero, 0) == ctx.one
    assert field_pow(ctx, ctx.zero, 3) == ctx.zero
    with pytest.raises(FieldError):
        field_inv(ctx, ctx.zero)
    with pytest.raises(FieldError):
        ctx.element(8)


def test_parse_and_format_groups():
    assert str(GroupSpec.parse("Z2^3")) == "Z2^3"
    assert GroupSpec.parse("z2 x Z4").moduli == (2, 4)
    assert GroupSpec.parse("Z2×Z2×Z3").moduli == (2, 2, 3)
    assert str(GroupSpec((2,))) == "Z2"
    assert str(GroupSpec((2, 4))) == "Z2xZ4"
    spec = GroupSpec.parse("Z2xZ4")
    assert (spec.order, spec.exponent, spec.rank) == (8, 4, 2)
    assert not spec.is_elementary
    assert GroupSpec.parse("Z3^2").is_elementary
    assert not GroupSpec.parse("Z4^2").is_elementary


@pytest.mark.parametrize("text", ["", "Z1", "Z2^0", "G2", "Z2+Z3"])
def test_bad_group_text(text):
    with pytest.raises(GroupSpecError):
        GroupSpec.parse(text)


def test_element_validation():
    spec = GroupSpec.parse("Z3^2")
    with pytest.raises(GroupSpecError):
        spec.element((3, 0))
    with pytest.raises(GroupSpecError):
        spec.element((1,))


def test_binary_packing_and_index():
    spec = GroupSpec.parse("Z2^3")
    x = spec.element((1, 0, 1))
    assert x.packed == 0b101
    assert spec.index(x) == 5
    assert spec.from_index(5) == x
    assert group_add(spec, x, spec.element((0, 1, 1))).coords == (1, 1, 0)
    assert group_neg(spec, x) == x


def test_mixed_radix_order():
    spec = GroupSpec.parse("Z2xZ3")
    coords = [x.coords for x in enumerate_elements(spec)]
    assert coords == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    assert all(spec.index(spec.from_index(i)) == i for i in range(spec.order))


def test_group_operations():
    spec = GroupSpec.parse("Z4xZ3")
    a = spec.element((3, 2))
    assert group_neg(spec, a).coords == (1, 1)
    assert group_scale(spec, a, 2).coords == (2, 1)
    assert group_scale(spec, a, -1) == group_neg(spec, a)
    assert group_sum(spec, [a, a, a, a]).coords == (0, 2)
    assert group_sum(spec, []) == spec.identity


def test_element_cap():
    override_settings(element_cap=8)
    with pytest.raises(CapExceededError) as info:
        list(enumerate_elements(GroupSpec.parse("Z2^4")))
    assert info.value.details["limit"] == 8
    assert len(list(enumerate_elements(GroupSpec.parse("Z2^4"), cap=16))) == 16


def test_group_index_matches_group_add():
    spec = GroupSpec.parse("Z2xZ4")
    index = group_index(spec)
    for a, b in itertools.product(range(spec.order), repeat=2):
        expected = group_add(spec, spec.from_index(a), spec.from_index(b))
        assert index.add(a, b) == spec.index(expected)
    perm = index.translate(3, -2)
    assert sorted(perm.tolist()) == list(range(spec.order))
    assert np.array_equal(index.neg[index.neg], np.arange(spec.order))


def test_cube_of_x_in_gf8():
    ctx = FieldContext(3, 0b1011)
    x, x_squared = ctx.element(0b010), ctx.element(0b100)
    assert field_mul(ctx, x, x_squared) == ctx.element(0b011)
    assert field_pow(ctx, x, 3) == ctx.element(0b011)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_frobenius_exhaustive(k):
    ctx = FieldContext.default(k)
    for a, b in itertools.product(ctx.elements(), repeat=2):
        total = field_add(ctx, a, b)
        assert field_mul(ctx, total, total) == field_add(ctx, field_mul(ctx, a, a), field_mul(ctx, b, b))


@pytest.mark.parametrize("k", [5, 8, 11, 16])
def test_frobenius_random(k):
    ctx = FieldContext.default(k)
    rng = random.Random(k)
    for _ in range(500):
        a, b = ctx.element(rng.randrange(ctx.size)), ctx.element(rng.randrange(ctx.size))
        assert field_pow(ctx, field_add(ctx, a, b), 2) == field_add(
            ctx, field_pow(ctx, a, 2), field_pow(ctx, b, 2)
        )


@pytest.mark.parametrize("d", [1, 5, 17, 32, 64])
def test_packed_and_coordinate_addition_agree(d):
    spec = GroupSpec.elementary(2, d)
    rng = random.Random(d)
    for _ in range(200):
        a = spec.from_packed(rng.getrandbits(d))
        b = spec.from_packed(rng.getrandbits(d))
        packed = group_add(spec, a, b)
        plain = group_add(spec, GroupElement(a.coords), GroupElement(b.coords))
        assert packed == plain
        assert packed.packed == plain.packed == a.packed ^ b.packed
        assert spec.index(packed) == spec.index(GroupElement(plain.coords))


@pytest.mark.parametrize(
    "text", ["Z2", "Z7", "Z2^3", "Z2xZ4", "Z3^2", "Z4xZ4", "Z2xZ4xZ8", "Z3^5", "Z2^8", "Z16^2"]
)
def test_group_axioms_exhaustive(text):
    spec = GroupSpec.parse(text)
    elements = list(enumerate_elements(spec))
    table = np.empty((spec.order, spec.order), dtype=np.int64)
    for a, b in itertools.product(elements, repeat=2):
        table[spec.index(a), spec.index(b)] = spec.index(group_add(spec, a, b))
    zero = spec.index(spec.identity)
    assert np.array_equal(table[zero], np.arange(spec.order))
    assert np.array_equal(table, table.T)
    for a in elements:
        assert table[spec.index(a), spec.index(group_neg(spec, a))] == zero
    # (a + b) + c == a + (b + c) for every c, all pairs at once
    for c in range(spec.order):
        assert np.array_equal(table[table, c], table[:, table[:, c]])
