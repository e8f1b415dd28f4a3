"""Formulas used for the orbit parametrizations: coset representatives and nilpotency."""

from __future__ import annotations

import itertools

from ..errors import DomainError, InvalidDivisor
from .syntax import RF, VF, Add, Eq, Exists, Forall, Lit, Mul, Not, Var, conj, disj, exists, power


def _m_power_multiple(x: Var, y: Var, m: int) -> Exists:
    """exists z:RF. x = y * z^m"""
    z = Var("z", RF)
    return Exists(z, Eq(x, Mul(y, power(z, m), RF)))


def build_phi_lm(ell: int, m: int):
    """y_1..y_ell are nonzero representatives of distinct m-th power classes of F_q^x
    that together cover F_q^x.

    The nonzero conjuncts keep 0 from posing as an extra class; without them
    0 would count as "distinct" from every unit.
    """
    if ell < 1 or m < 1 or m % ell:
        raise InvalidDivisor(f"{ell} does not divide {m}")
    ys = [Var(f"y{i}", RF) for i in range(1, ell + 1)]
    zero = Lit(0, RF)
    nonzero = [Not(Eq(y, zero)) for y in ys]
    distinct = [Not(_m_power_multiple(ys[i], ys[j], m)) for i, j in itertools.combinations(range(ell), 2)]
    x = Var("x", RF)
    cover = Forall(x, disj(*(_m_power_multiple(x, y, m) for y in ys)))
    return conj(*nonzero, *distinct, cover)


def psi(ell: int, m: int):
    """exists y_1..y_ell:RF. phi_{ell,m}(y_1, ..., y_ell)"""
    return exists([Var(f"y{i}", RF) for i in range(1, ell + 1)], build_phi_lm(ell, m))


def divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def matrix_vars(size: int) -> list[list[Var]]:
    return [[Var(f"x{i + 1}_{j + 1}", VF) for j in range(size)] for i in range(size)]


def nilpotency_formula(n: int, algebra: str = "sl"):
    """X^N = 0 entrywise for a generic N x N matrix of VF variables.

    N is n for sl_n and 2n for sp_2n.  Entries of the powers are built as a
    shared term DAG, so the printed form grows quickly with N.
    """
    if n < 1 or (algebra == "sl" and n < 2):
        raise DomainError("matrix size too small")
    size = n if algebra == "sl" else 2 * n
    X = matrix_vars(size)
    P = X
    for _ in range(size - 1):
        P = [
            [_sum([Mul(P[i][k], X[k][j], VF) for k in range(size)]) for j in range(size)]
            for i in range(size)
        ]
    zero = Lit(0, VF)
    return conj(*(Eq(P[i][j], zero) for i in range(size) for j in range(size)))


def _sum(terms):
    out = terms[0]
    for t in terms[1:]:
        out = Add(out, t, VF)
    return out


def matrix_assignment(entries) -> dict:
    """Bind the x{i}_{j} variables to the entries of a square matrix."""
    size = len(entries)
    X = matrix_vars(size)
    return {X[i][j]: entries[i][j] for i in range(size) for j in range(size)}
