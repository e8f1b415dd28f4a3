from __future__ import annotations

import math
from fractions import Fraction

import pytest

from nilmatch.errors import DomainError, InversionOfZero, PrecisionLoss, ZeroInput
from nilmatch.padic import (
    INFINITY,
    FieldContext,
    PadicNumber,
    ac,
    field_power_coset_reps,
    iter_window,
    legendre,
    nonsquare_unit,
    ord_,
    parse_element,
    residue,
    residue_power_coset_reps,
)

C7 = FieldContext(7)
C5 = FieldContext(5)


def num(x, ctx=C7):
    return PadicNumber.from_rational(x, ctx)


def test_context_rejects_bad_p():
    with pytest.raises(DomainError):
        FieldContext(2)
    with pytest.raises(DomainError):
        FieldContext(9)
    with pytest.raises(DomainError):
        FieldContext(5, 0)


def test_extension_uses_smallest_irreducible():
    ctx = FieldContext(3, 2)
    assert ctx.q == 9
    assert ctx.irreducible_poly == (1, 0, 1)  # x^2 + 1
    with pytest.raises(DomainError):
        FieldContext(3, 2, irreducible_poly=(2, 0, 1))  # x^2 - 1 is reducible


def test_ord_examples():
    assert ord_(PadicNumber.uniformizer(C7)) == 1
    assert ord_(PadicNumber.one(C7)) == 0
    assert ord_(PadicNumber.zero(C7)) == INFINITY


def test_ac_examples():
    assert ac(PadicNumber.zero(C7)).is_zero()
    assert ac(PadicNumber.uniformizer(C7)) == residue(1, C7)
    assert ac(num(7 + 49)) == residue(1, C7)
    assert ac(num(Fraction(3, 7))) == residue(3, C7)


def test_arithmetic_examples():
    assert (num(1) + num(-1)).is_zero()
    pi = PadicNumber.uniformizer(C7)
    sq = pi * pi
    assert sq.valuation == 2 and ac(sq) == residue(1, C7)
    prod = num(1 + 7) * num(1 - 7)
    assert prod.valuation == 0 and prod == num(1 - 49)


def test_inverse_of_zero():
    with pytest.raises(InversionOfZero):
        PadicNumber.zero(C7).inv()


def test_cancellation_loses_precision():
    x = PadicNumber.from_digits(0, [1, 2, 3], C7)
    y = PadicNumber.from_digits(0, [1, 2, 3], C7)
    d = x - y
    assert d.is_zero() and not d.is_exact
    with pytest.raises(PrecisionLoss):
        d.inv()


def test_truncated_product_precision():
    x = PadicNumber.from_digits(1, [3, 1], C7)
    y = PadicNumber.from_digits(0, [2, 5, 6], C7)
    z = x * y
    assert z.valuation == 1 and z.relprec == 2
    assert ac(z) == residue(6, C7)


def test_legendre_examples():
    assert legendre(residue(1, C7)) == 1
    assert legendre(residue(3, C7)) == -1
    assert legendre(residue(4, C5)) == 1
    with pytest.raises(ZeroInput):
        legendre(residue(0, C7))


def test_residue_coset_reps_examples():
    assert [u.value for u in residue_power_coset_reps(1, C7)] == [1]
    assert len(residue_power_coset_reps(3, C7)) == 3
    assert [u.value for u in residue_power_coset_reps(3, C5)] == [1]


@pytest.mark.parametrize("p,k", [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (7, 2)])
@pytest.mark.parametrize("m", [1, 2, 3, 4, 6])
def test_residue_coset_reps_index(p, k, m):
    ctx = FieldContext(p, k)
    reps = residue_power_coset_reps(m, ctx)
    rf = ctx.residue_field
    image = {rf.pow(u, m) for u in rf.units()}
    assert len(reps) == (ctx.q - 1) // len(image) == math.gcd(m, ctx.q - 1)
    cosets = {frozenset(rf.mul(u.value, h) for h in image) for u in reps}
    assert len(cosets) == len(reps)


def test_field_coset_reps_examples():
    assert len(field_power_coset_reps(3, C7)) == 9
    assert [str(x) for x in field_power_coset_reps(3, C5)] == [str(num(1, C5)), str(num(5, C5)), str(num(25, C5))]
    eps = nonsquare_unit(C7)
    reps = field_power_coset_reps(2, C7)
    assert reps == [num(1), eps, num(7), eps * num(7)]


def _same_mth_class(u: PadicNumber, v: PadicNumber, m: int) -> bool:
    if (u.valuation - v.valuation) % m:
        return False
    ctx = u.ctx
    t = ac(u) * ac(v).inv()
    rf = ctx.residue_field
    return t.value in {rf.pow(w, m) for w in rf.units()}


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_field_coset_reps_pairwise_distinct(m):
    for ctx in (C5, C7, FieldContext(13)):
        reps = field_power_coset_reps(m, ctx)
        for i, u in enumerate(reps):
            for v in reps[i + 1:]:
                assert not _same_mth_class(u, v, m)


def test_nonsquare_is_smallest():
    assert nonsquare_unit(C7) == num(3)
    assert nonsquare_unit(C5) == num(2)
    assert nonsquare_unit(FieldContext(13)) == num(2)


def test_parse_element():
    assert parse_element("pi", C7) == num(7)
    assert parse_element("-eps*pi^2", C7) == num(-3 * 49)
    assert parse_element("1+pi", C7) == num(8)
    assert parse_element("2/3-pi^2", C7) == num(Fraction(2, 3) - 49)
    assert parse_element("pi^-1", C7) == num(Fraction(1, 7))
    with pytest.raises(ValueError):
        parse_element("x", C7)


def test_json_round_trip():
    for x in (num(Fraction(-5, 49)), PadicNumber.from_digits(2, [3, 0, 1], C7), PadicNumber.zero_to(4, C7)):
        y = PadicNumber.from_json(x.to_json(), C7)
        assert y.to_json() == x.to_json()


def test_string_form():
    assert str(num(7 + 2 * 49)) == "7^1 * (1 + 2*7)"
    assert str(PadicNumber.from_digits(0, [1, 2], C7)) == "7^0 * (1 + 2*7 + O(7^2))"


def test_window_enumeration():
    items = list(iter_window(C5, (0, 1), 2))
    assert len(items) == 1 + 2 * 4 * 5
    assert len(list(iter_window(C5, (-1, 1), 1, ring_only=True))) == 1 + 2 * 4


def test_extension_field_arithmetic():
    ctx = FieldContext(3, 2)
    rf = ctx.residue_field
    # every unit of F_9 has multiplicative order dividing 8
    for u in rf.units():
        assert rf.pow(u, 8) == 1
    x = PadicNumber.from_exact([1, 1], ctx)
    assert (x * x.inv()) == PadicNumber.one(ctx)
    assert legendre(ac(nonsquare_unit(ctx))) == -1
