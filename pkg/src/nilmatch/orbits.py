"""Nilpotent orbits labelled by partitions: labels, representatives, dimensions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import linalg
from .building import RootDatum
from .errors import DomainError, InvalidTuple, NotAdmissible, NotRegular, PrecisionLoss
from .padic import FieldContext, PadicNumber, residue_power_coset_reps
from .partitions import Partition, enumerate_partitions, is_symplectic_admissible, multiplicity
from .quadforms import QTuple, enumerate_tuples, minimal_representative


@dataclass(frozen=True)
class SLDatum:
    """d = p^j * lift(u_i), u_i the i-th residue coset representative for m = gcd(lambda)."""

    j: int
    i: int

    def value(self, m: int, ctx: FieldContext) -> PadicNumber:
        u = residue_power_coset_reps(m, ctx)[self.i]
        return PadicNumber.uniformizer(ctx) ** self.j * PadicNumber.lift(u)

    def to_json(self) -> dict:
        return {"j": self.j, "i": self.i}


@dataclass(frozen=True)
class OrbitLabel:
    algebra: str  # "sl" or "sp"
    n: int  # sl_n, or sp_2n
    lam: Partition
    datum: SLDatum | QTuple
    ctx: FieldContext = field(compare=False, repr=False)

    def __post_init__(self):
        if self.algebra == "sl":
            if self.lam.n != self.n:
                raise DomainError(f"{self.lam} is not a partition of {self.n}")
            m = self.lam.gcd()
            if not (0 <= self.datum.j < m and 0 <= self.datum.i < len(residue_power_coset_reps(m, self.ctx))):
                raise DomainError(f"datum {self.datum} is not a canonical coset representative")
        elif self.algebra == "sp":
            if self.lam.n != 2 * self.n:
                raise DomainError(f"{self.lam} is not a partition of {2 * self.n}")
            if not is_symplectic_admissible(self.lam):
                raise NotAdmissible(f"{self.lam} has an odd part of odd multiplicity")
            if self.datum.lam != self.lam:
                raise InvalidTuple("quadratic-form tuple belongs to another partition")
        else:
            raise DomainError(f"unknown algebra {self.algebra!r}")

    @property
    def size(self) -> int:
        return self.n if self.algebra == "sl" else 2 * self.n

    def d(self) -> PadicNumber:
        return self.datum.value(self.lam.gcd(), self.ctx)

    def datum_str(self) -> str:
        if self.algebra == "sl":
            if self.lam.gcd() == 1:
                return ""
            return str(self.d().exact[0] if self.ctx.k == 1 else self.d())
        return ", ".join(f"Q{i}={c}" for i, c in self.datum.classes if c.dim)

    def __str__(self):
        tail = self.datum_str()
        return f"{self.algebra}{self.size} {self.lam}" + (f" [{tail}]" if tail else "")

    def to_json(self) -> dict:
        return {"alg": self.algebra, "n": self.n, "lambda": self.lam.to_json(), "datum": self.datum.to_json()}

    @classmethod
    def from_json(cls, data: dict, ctx: FieldContext) -> OrbitLabel:
        lam = Partition(tuple(data["lambda"]))
        alg = data["alg"]
        n = data.get("n", lam.n if alg == "sl" else lam.n // 2)
        if alg == "sl":
            datum = SLDatum(**data.get("datum", {"j": 0, "i": 0}))
        else:
            datum = QTuple.from_json(lam, data.get("datum", {}))
        return cls(alg, n, lam, datum, ctx)


# --- labels ----------------------------------------------------------------


def sl_labels(n: int, ctx: FieldContext) -> list[OrbitLabel]:
    if n < 2:
        raise DomainError("sl_n needs n >= 2")
    out = []
    for lam in enumerate_partitions(n):
        m = lam.gcd()
        ell = len(residue_power_coset_reps(m, ctx))
        for j in range(m):
            for i in range(ell):
                out.append(OrbitLabel("sl", n, lam, SLDatum(j, i), ctx))
    return out


def sp_labels(n: int, ctx: FieldContext) -> list[OrbitLabel]:
    if n < 1:
        raise DomainError("sp_2n needs n >= 1")
    out = []
    for lam in enumerate_partitions(2 * n):
        if is_symplectic_admissible(lam):
            out.extend(OrbitLabel("sp", n, lam, t, ctx) for t in enumerate_tuples(lam, ctx))
    return out


def labels(algebra: str, n: int, ctx: FieldContext) -> list[OrbitLabel]:
    return sl_labels(n, ctx) if algebra == "sl" else sp_labels(n, ctx)


# --- matrices ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LieMatrix:
    entries: tuple[tuple[PadicNumber, ...], ...]
    algebra: str

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        size = len(rows)
        if any(len(r) != size for r in rows):
            raise ValueError("matrix must be square")
        if self.algebra == "sl":
            if not sum(rows[i][i] for i in range(size)) == 0:
                raise DomainError("sl element must have trace 0")
        elif self.algebra == "sp":
            if size % 2 or not _is_sp(rows):
                raise DomainError("matrix is not in sp_2n")
        else:
            raise DomainError(f"unknown algebra {self.algebra!r}")

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r][c]

    def render(self) -> str:
        return "\n".join(" ".join(_entry_str(x) for x in row) for row in self.entries)

    def to_json(self) -> list[list[dict]]:
        return [[x.to_json() for x in row] for row in self.entries]


def _entry_str(x: PadicNumber) -> str:
    if x.is_exact and x.ctx.k == 1:
        return str(x.exact[0])
    return "0" if x.is_zero() else str(x)


def _is_sp(rows) -> bool:
    # X = [[A, B], [C, D]] lies in sp iff D = -A^T, B = B^T, C = C^T
    n = len(rows) // 2
    for i in range(n):
        for j in range(n):
            if not rows[n + i][n + j] == -rows[j][i]:
                return False
            if not rows[i][n + j] == rows[j][n + i] or not rows[n + i][j] == rows[n + j][i]:
                return False
    return True


def _jordan_positions(lam: Partition) -> list[int]:
    """0-based indices i with a 1 at (i, i+1) in J_lambda."""
    out, start = [], 0
    for part in lam.parts:
        out.extend(range(start, start + part - 1))
        start += part
    return out


def _sl_matrix(lam: Partition, d, zero, one) -> list[list]:
    n = lam.n
    m = [[zero] * n for _ in range(n)]
    for i in _jordan_positions(lam):
        m[i][i + 1] = d if i + 1 == n - 1 else one
    return m


def sl_representative(label: OrbitLabel) -> LieMatrix:
    """X_d = J_lambda D(d) with D(d) = diag(1, ..., 1, d)."""
    ctx = label.ctx
    m = _sl_matrix(label.lam, label.d(), PadicNumber.zero(ctx), PadicNumber.one(ctx))
    return LieMatrix(tuple(map(tuple, m)), "sl")


def _sp_matrix(lam: Partition, forms: dict[int, list[list]], zero, one) -> list[list]:
    size = lam.n
    n = size // 2
    X = [[zero] * size for _ in range(size)]
    s = 0
    for j in sorted({x for x in lam.parts}):
        mj = multiplicity(lam, j)
        d = j * mj // 2
        if j % 2:
            # blocks J_j on the p-span, -J_j^T on the q-span
            for start in range(0, d, j):
                for k in range(start, start + j - 1):
                    X[s + k][s + k + 1] = one
                    X[n + s + k + 1][n + s + k] = -one
        else:
            N = j // 2
            for k in range(d - mj):
                X[s + k][s + k + mj] = one
                X[n + s + k + mj][n + s + k] = -one
            Q = forms[j]
            sign = one if N % 2 == 0 else -one
            off = mj * (N - 1)
            for a in range(mj):
                for b in range(mj):
                    X[s + off + a][n + s + off + b] = sign * Q[a][b]
        s += d
    return X


def sp_representative(label: OrbitLabel) -> LieMatrix:
    """Block representative on the V(j) decomposition of the symplectic basis."""
    ctx = label.ctx
    forms = {}
    for i, c in label.datum.classes:
        if c.dim != multiplicity(label.lam, i):
            raise InvalidTuple(f"Q{i} has dimension {c.dim}, expected {multiplicity(label.lam, i)}")
        forms[i] = minimal_representative(c, ctx)
    m = _sp_matrix(label.lam, forms, PadicNumber.zero(ctx), PadicNumber.one(ctx))
    return LieMatrix(tuple(map(tuple, m)), "sp")


def representative(label: OrbitLabel) -> LieMatrix:
    return sl_representative(label) if label.algebra == "sl" else sp_representative(label)


def _matmul(a, b, zero):
    n = len(a)
    return [
        [sum((a[i][k] * b[k][j] for k in range(n) if not a[i][k].is_zero()), zero) for j in range(n)]
        for i in range(n)
    ]


def is_nilpotent(X: LieMatrix) -> bool:
    """X^size == 0, certified on the stored truncations."""
    m = [list(r) for r in X.entries]
    zero = PadicNumber.zero(m[0][0].ctx)
    power = m
    for _ in range(X.size - 1):
        power = _matmul(power, m, zero)
    entries = [e for row in power for e in row]
    if any(not e.is_zero() for e in entries):
        return False
    if any(not e.is_exact for e in entries):
        raise PrecisionLoss("X^n vanishes only to the working precision")
    return True


# --- dimension ------------------------------------------------------------------


def lie_basis(algebra: str, n: int) -> list[list[list[Fraction]]]:
    """A basis of sl_n or sp_2n as rational matrices."""
    z = Fraction(0)
    out = []

    def unit(size, cells):
        m = [[z] * size for _ in range(size)]
        for r, c, v in cells:
            m[r][c] = Fraction(v)
        return m

    if algebra == "sl":
        for i in range(n):
            for j in range(n):
                if i != j:
                    out.append(unit(n, [(i, j, 1)]))
        for i in range(n - 1):
            out.append(unit(n, [(i, i, 1), (i + 1, i + 1, -1)]))
        return out
    size = 2 * n
    for i in range(n):
        for j in range(n):
            out.append(unit(size, [(i, j, 1), (n + j, n + i, -1)]))
    for i in range(n):
        for j in range(i, n):
            cells_b = [(i, n + j, 1)] + ([(j, n + i, 1)] if i != j else [])
            cells_c = [(n + i, j, 1)] + ([(n + j, i, 1)] if i != j else [])
            out.append(unit(size, cells_b))
            out.append(unit(size, cells_c))
    return out


def rational_representative(algebra: str, lam: Partition) -> list[list[Fraction]]:
    """The representative with its datum specialised to 1 (identity forms)."""
    z, o = Fraction(0), Fraction(1)
    if algebra == "sl":
        return _sl_matrix(lam, o, z, o)
    forms = {}
    for j in set(lam.parts):
        if j % 2 == 0:
            mj = multiplicity(lam, j)
            forms[j] = [[o if a == b else z for b in range(mj)] for a in range(mj)]
    return _sp_matrix(lam, forms, z, o)


def _bracket(x, y):
    xy, yx = linalg.matmul(x, y), linalg.matmul(y, x)
    return [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(xy, yx)]


def orbit_dimension_of(algebra: str, lam: Partition) -> int:
    """rank of ad X on g, exact over Q."""
    X = rational_representative(algebra, lam)
    n = lam.n if algebra == "sl" else lam.n // 2
    rows = [[e for row in _bracket(X, Y) for e in row] for Y in lie_basis(algebra, n)]
    return linalg.rank(rows)


def orbit_dimension(label: OrbitLabel) -> int:
    return orbit_dimension_of(label.algebra, label.lam)


# --- Weyl discriminant ------------------------------------------------------------


def weyl_discriminant_valuation(X: LieMatrix) -> int:
    """Sum over all roots of ord(alpha(X)) for a regular semisimple diagonal X."""
    size = X.size
    if any(not X[r, c].is_zero() for r in range(size) for c in range(size) if r != c):
        raise DomainError("X must be diagonal")
    n = size if X.algebra == "sl" else size // 2
    rd = RootDatum.for_algebra(X.algebra, n)
    diag = [X[i, i] for i in range(n)]
    total = 0
    for a in rd.roots:
        val = sum((x * c for x, c in zip(diag, a) if c), PadicNumber.zero(X[0, 0].ctx))
        if val.is_zero():
            raise NotRegular(f"root {a} vanishes on X")
        total += val.valuation
    return int(total)


def dimension_strata(items, key: Callable = orbit_dimension) -> dict[int, list]:
    """Group labels (or results) by orbit dimension, largest first."""
    out: dict[int, list] = {}
    for it in items:
        out.setdefault(key(it), []).append(it)
    return dict(sorted(out.items(), reverse=True))
