from __future__ import annotations

import math

import pytest

from nilmatch.denefpas.evaluate import DPStructure, Truth, bind, evaluate
from nilmatch.denefpas.formulas import (
    build_phi_lm,
    divisors,
    matrix_assignment,
    nilpotency_formula,
    psi,
)
from nilmatch.denefpas.parser import parse
from nilmatch.denefpas.syntax import (
    RF,
    VF,
    Z,
    And,
    Exists,
    Forall,
    Not,
    Or,
    Var,
    free_vars,
    show,
)
from nilmatch.errors import DPSyntaxError, InvalidDivisor, SortError, UnassignedVariable
from nilmatch.orbits import is_nilpotent, labels, representative
from nilmatch.padic import FieldContext, PadicNumber, ac, parse_element, residue

C5, C7 = FieldContext(5), FieldContext(7)


def test_parse_examples():
    f = parse("exists y:RF. y*y = ac(x)")
    assert isinstance(f, Exists) and f.var == Var("y", RF)
    assert free_vars(f) == {Var("x", VF)}
    g = parse("ord(x) + ord(x) = 2")
    assert free_vars(g) == {Var("x", VF)}
    with pytest.raises(SortError):
        parse("x * n = 1", {"n": "Z"})
    with pytest.raises(SortError):
        parse("n * n = 1", {"n": "Z"})
    with pytest.raises(SortError):
        parse("ord(x) ~3 ac(x)")


def test_syntax_error_position():
    with pytest.raises(DPSyntaxError) as err:
        parse("exists y:RF. y = ")
    assert err.value.position == len("exists y:RF. y = ")
    with pytest.raises(DPSyntaxError) as err:
        parse("x = 1 )")
    assert err.value.position == 6


@pytest.mark.parametrize(
    "text",
    [
        "exists y:RF. y * y = ac(x)",
        "forall n:Z. ord(x) <= n or not n ~3 0",
        "ac(x - 1) = ac(x) + 1 and ord(x * x) = ord(x) + ord(x)",
        "exists y1:RF, y2:RF. not y1 = y2 and y1 * ac(d1) = y2",
        "∃ x:VF. ¬ (x = 0) ∧ ord(x) ≤ 3",
    ],
)
def test_show_parse_round_trip(text):
    f = parse(text)
    assert parse(show(f)) == f


def test_psi_examples():
    assert evaluate(psi(3, 3), DPStructure(C7)).value is Truth.TRUE
    assert evaluate(psi(1, 3), DPStructure(C5)).value is Truth.TRUE
    assert evaluate(psi(3, 3), DPStructure(C5)).value is Truth.FALSE


def test_psi_exactly_one_small():
    for ctx in (C5, C7):
        for m in (2, 3, 4):
            hits = [l for l in divisors(m) if evaluate(psi(l, m), DPStructure(ctx)).value is Truth.TRUE]
            assert hits == [math.gcd(m, ctx.q - 1)]


def test_units_formula_ring_mode():
    f = parse("exists x2:VF. x2 * x1 = 1")
    s = DPStructure(C7, ring_mode=True)
    pi = parse_element("pi", C7)
    res = evaluate(f, s, bind(f, x1=pi))
    assert res.value is Truth.FALSE and "vf-bounded" in res.flags and not res.exact
    res = evaluate(f, s, bind(f, x1=parse_element("1+pi", C7)))
    assert res.value is Truth.TRUE


def test_phi_lm_shape():
    phi = build_phi_lm(3, 3)
    assert isinstance(phi, And)
    distinct = [a for a in phi.args if isinstance(a, Not) and isinstance(a.arg, Exists)]
    assert len(distinct) == 3
    cover = [a for a in phi.args if isinstance(a, Forall)]
    assert len(cover) == 1 and isinstance(cover[0].body, Or) and len(cover[0].body.args) == 3
    one = build_phi_lm(1, 3)
    assert not any(isinstance(a, Not) and isinstance(a.arg, Exists) for a in getattr(one, "args", ()))
    with pytest.raises(InvalidDivisor):
        build_phi_lm(2, 3)


def test_phi_lm_at_constants_and_perturbation():
    for ctx, m in ((C7, 3), (C7, 2), (C5, 4), (FieldContext(3, 2), 4)):
        s = DPStructure(ctx, m=m)
        ell = s.ell
        phi = build_phi_lm(ell, m)
        ys = [Var(f"y{i + 1}", RF) for i in range(ell)]
        env = {y: ac(c) for y, c in zip(ys, s.constants)}
        assert evaluate(phi, s, env).value is Truth.TRUE
        assert all(c == PadicNumber.one(ctx) for c in s.constants[ell:])
        if ell >= 2:
            # replace y2 by an element of y1's coset
            cube = residue(2, ctx) if ctx.k == 1 else env[ys[0]]
            bad = dict(env)
            bad[ys[1]] = env[ys[0]] * cube**m
            assert evaluate(phi, s, bad).value is Truth.FALSE


def test_coset_constants_in_formula():
    s = DPStructure(C7, m=3)
    f = parse("exists z:RF. ac(d2) = ac(d1) * z * z * z")
    assert evaluate(f, s).value is Truth.FALSE
    f = parse("exists z:RF. ac(d1) = z * z * z")
    assert evaluate(f, s).value is Truth.TRUE


def _jordan(ctx, parts):
    n = sum(parts)
    m = [[PadicNumber.from_rational(0, ctx)] * n for _ in range(n)]
    s = 0
    for part in parts:
        for k in range(part - 1):
            m[s + k][s + k + 1] = PadicNumber.from_rational(1, ctx)
        s += part
    return m


def test_nilpotency_formula():
    f = nilpotency_formula(3)
    s = DPStructure(C7)
    res = evaluate(f, s, matrix_assignment(_jordan(C7, (3,))))
    assert res.value is Truth.TRUE and res.exact
    diag = [[PadicNumber.from_rational(x, C7) for x in row] for row in ([1, 0, 0], [0, -1, 0], [0, 0, 0])]
    assert evaluate(f, s, matrix_assignment(diag)).value is Truth.FALSE
    g = nilpotency_formula(2, "sp")
    for lab in labels("sp", 2, C5):
        X = representative(lab)
        assert evaluate(g, DPStructure(C5), matrix_assignment(X.entries)).value is Truth.TRUE
        assert is_nilpotent(X)


def test_ord_of_zero_flag_and_unassigned():
    f = parse("ord(x) <= 3")
    res = evaluate(f, DPStructure(C7), bind(f, x=0))
    assert res.value is Truth.FALSE and "ord-of-zero" in res.flags
    with pytest.raises(UnassignedVariable):
        evaluate(f, DPStructure(C7), {})
    with pytest.raises(UnassignedVariable):
        evaluate(parse("ac(d2) = 1"), DPStructure(C7, m=1))


def test_z_quantifiers():
    s = DPStructure(C7)
    f = parse("exists n:Z. n + n = 6")
    res = evaluate(f, s)
    assert res.value is Truth.TRUE and "z-window" in res.flags
    # true only past the window: the widened window disagrees
    g = parse("exists n:Z. 20 <= n")
    assert evaluate(g, s).value is Truth.UNBOUNDED
    h = parse("forall n:Z. n ~2 0 or n + 1 ~2 0")
    assert evaluate(h, s).value is Truth.TRUE


def test_rf_quantifier_exact():
    f = parse("forall y:RF. exists z:RF. z * y = 1 or y = 0")
    res = evaluate(f, DPStructure(FieldContext(3, 2)))
    assert res.value is Truth.TRUE and res.exact
