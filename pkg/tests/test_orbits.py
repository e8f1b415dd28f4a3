from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

import oracles
from nilmatch.errors import DomainError, InvalidTuple, NotAdmissible, NotRegular
from nilmatch.orbits import (
    LieMatrix,
    OrbitLabel,
    SLDatum,
    is_nilpotent,
    labels,
    orbit_dimension,
    orbit_dimension_of,
    representative,
    sl_labels,
    sp_labels,
    weyl_discriminant_valuation,
)
from nilmatch.padic import FieldContext, PadicNumber, field_power_coset_reps
from nilmatch.partitions import Partition, enumerate_partitions, transpose
from nilmatch.quadforms import enumerate_tuples

P = Partition.of
C5, C7 = FieldContext(5), FieldContext(7)


def mat(ctx, rows, algebra="sl"):
    return LieMatrix(tuple(tuple(PadicNumber.from_rational(x, ctx) for x in r) for r in rows), algebra)


def ints(X: LieMatrix):
    return [[x.exact[0] for x in row] for row in X.entries]


def test_sl_label_counts():
    assert len(sl_labels(3, C7)) == 11
    assert len(sl_labels(3, C5)) == 5
    assert len(sl_labels(2, C5)) == 5


@pytest.mark.parametrize("q", [(5, 1), (7, 1), (3, 2), (11, 1), (13, 1)])
def test_sl_label_count_formula(q):
    ctx = FieldContext(*q)
    for n in range(2, 6):
        want = sum(len(field_power_coset_reps(lam.gcd(), ctx)) for lam in enumerate_partitions(n))
        formula = sum(lam.gcd() * math.gcd(lam.gcd(), ctx.q - 1) for lam in enumerate_partitions(n))
        assert len(sl_labels(n, ctx)) == want == formula


def test_sp_label_counts():
    assert len(sp_labels(2, C5)) == 16
    by_lam = {}
    for lab in sp_labels(1, C5):
        by_lam[lab.lam] = by_lam.get(lab.lam, 0) + 1
    assert by_lam == {P(2): 4, P(1, 1): 1}
    for n in (1, 2, 3):
        assert sum(lab.lam == P(*[1] * (2 * n)) for lab in sp_labels(n, C7)) == 1


def test_sl_representative_examples():
    for lab in sl_labels(3, C7):
        X = representative(lab)
        d = lab.d().exact[0]
        if lab.lam == P(3):
            assert ints(X) == [[0, 1, 0], [0, 0, d], [0, 0, 0]]
        elif lab.lam == P(2, 1):
            assert ints(X) == [[0, 1, 0], [0, 0, 0], [0, 0, 0]]
        else:
            assert ints(X) == [[0] * 3] * 3


def test_sp_representative_examples():
    for lab in sp_labels(2, C5):
        if lab.lam == P(4):
            a = representative(lab)[(1, 3)].exact[0]
            assert ints(representative(lab)) == [[0, 1, 0, 0], [0, 0, 0, a], [0, 0, 0, 0], [0, 0, -1, 0]]
        if lab.lam == P(1, 1, 1, 1):
            assert ints(representative(lab)) == [[0] * 4] * 4
    for lab in sp_labels(1, C5):
        if lab.lam == P(2):
            X = ints(representative(lab))
            assert X[0][0] == X[1][0] == X[1][1] == 0 and X[0][1] != 0
            assert is_nilpotent(representative(lab))


@pytest.mark.parametrize("ctx", [C5, C7, FieldContext(3, 2), FieldContext(11)], ids=["q5", "q7", "q9", "q11"])
def test_representatives_nilpotent_and_in_algebra(ctx):
    for n in (2, 3, 4):
        for lab in sl_labels(n, ctx):
            X = representative(lab)
            assert is_nilpotent(X)
    for n in (1, 2, 3):
        for lab in sp_labels(n, ctx):
            X = representative(lab)  # LieMatrix validates sp membership
            assert is_nilpotent(X)


def test_non_nilpotent():
    assert not is_nilpotent(mat(C7, [[1, 0, 0], [0, -1, 0], [0, 0, 0]]))


def test_membership_checks():
    with pytest.raises(DomainError):
        mat(C7, [[1, 0], [0, 0]])
    with pytest.raises(DomainError):
        mat(C7, [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]], "sp")


def test_label_validation():
    with pytest.raises(DomainError):
        OrbitLabel("sl", 3, P(3), SLDatum(3, 0), C7)
    with pytest.raises(NotAdmissible):
        OrbitLabel("sp", 2, P(3, 1), enumerate_tuples(P(2, 2), C5)[0], C5)
    with pytest.raises(InvalidTuple):
        OrbitLabel("sp", 2, P(4), enumerate_tuples(P(2, 2), C5)[0], C5)


def test_label_json_round_trip():
    for alg, n in (("sl", 3), ("sl", 4), ("sp", 2), ("sp", 3)):
        for lab in labels(alg, n, C7):
            assert OrbitLabel.from_json(lab.to_json(), C7) == lab


def test_label_strings():
    labs = [str(lab) for lab in sl_labels(3, C5)]
    assert labs == ["sl3 (3) [1]", "sl3 (3) [5]", "sl3 (3) [25]", "sl3 (2,1)", "sl3 (1,1,1)"]


def test_dimension_examples():
    zero = sl_labels(3, C7)[-1]
    assert orbit_dimension(zero) == 0
    assert orbit_dimension_of("sl", P(3)) == 6
    assert orbit_dimension_of("sp", P(4)) == 8


def test_dimension_independent_of_datum():
    for alg, n in (("sl", 3), ("sl", 4), ("sp", 2), ("sp", 3)):
        dims = {}
        for lab in labels(alg, n, C7):
            dims.setdefault(lab.lam, set()).add(orbit_dimension(lab))
        assert all(len(v) == 1 for v in dims.values())


@pytest.mark.parametrize("n", range(2, 7))
def test_sl_dimension_transpose_formula(n):
    for lam in enumerate_partitions(n):
        formula = n * n - sum(c * c for c in transpose(lam).parts)
        assert orbit_dimension_of("sl", lam) == formula


def test_sl_dimension_float_oracle():
    for n in range(2, 6):
        basis = oracles.sl_basis_float(n)
        for lam in enumerate_partitions(n):
            assert orbit_dimension_of("sl", lam) == oracles.ad_rank_float(oracles.jordan_float(lam.parts), basis)


def test_weyl_discriminant_examples():
    assert weyl_discriminant_valuation(mat(C7, [[1, 0], [0, -1]])) == 0
    ctx = C7
    x = [1, 7, -8]
    X = mat(ctx, [[x[0], 0, 0], [0, x[1], 0], [0, 0, x[2]]])
    direct = 0
    for i in range(3):
        for j in range(3):
            if i != j:
                direct += PadicNumber.from_rational(x[i] - x[j], ctx).valuation
    assert weyl_discriminant_valuation(X) == direct
    with pytest.raises(NotRegular):
        weyl_discriminant_valuation(mat(ctx, [[1, 0, 0], [0, 1, 0], [0, 0, -2]]))


def test_weyl_discriminant_scaling():
    rng = random.Random(3)
    ctx = C5
    for alg, n, dim, rank in (("sl", 3, 8, 2), ("sl", 4, 15, 3), ("sp", 2, 10, 2), ("sp", 3, 21, 3)):
        for _ in range(20):
            while True:
                if alg == "sl":
                    d = [Fraction(rng.randint(-30, 30)) for _ in range(n - 1)]
                    d.append(-sum(d))
                    full = d
                else:
                    d = [Fraction(rng.randint(-30, 30)) for _ in range(n)]
                    full = d + [-c for c in d]
                size = len(full)
                rows = [[full[i] if i == j else 0 for j in range(size)] for i in range(size)]
                X = mat(ctx, rows, alg)
                try:
                    base = weyl_discriminant_valuation(X)
                except NotRegular:
                    continue
                break
            scaled = mat(ctx, [[c * 5 for c in r] for r in rows], alg)
            assert weyl_discriminant_valuation(scaled) - base == dim - rank
