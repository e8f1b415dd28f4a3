"""Nondegenerate quadratic forms over the local field, classified by invariants.

Square classes of F^x are tagged ``1``, ``eps``, ``pi``, ``eps*pi`` where
``eps`` is the fixed non-square unit of :mod:`nilmatch.padic`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import DegenerateForm, InternalInvariantError, InvalidTuple, NoMatch, NotAdmissible, ZeroArgument
from .padic import FieldContext, PadicNumber, ac, legendre, nonsquare_unit
from .partitions import Partition, is_symplectic_admissible, multiplicity

SQUARE_CLASSES = ("1", "eps", "pi", "eps*pi")
_CLASS_BITS = {"1": (0, 0), "eps": (0, 1), "pi": (1, 0), "eps*pi": (1, 1)}
_BITS_CLASS = {v: k for k, v in _CLASS_BITS.items()}


def square_class(x: PadicNumber) -> str:
    if x.is_zero():
        raise DegenerateForm("0 has no square class")
    return _BITS_CLASS[(int(x.valuation) % 2, 0 if legendre(ac(x)) == 1 else 1)]


def class_mul(*tags: str) -> str:
    v = s = 0
    for t in tags:
        a, b = _CLASS_BITS[t]
        v ^= a
        s ^= b
    return _BITS_CLASS[(v, s)]


def minus_one_class(ctx: FieldContext) -> str:
    return square_class(PadicNumber.from_rational(-1, ctx))


def tag_value(tag: str, ctx: FieldContext) -> PadicNumber:
    v, s = _CLASS_BITS[tag]
    x = PadicNumber.uniformizer(ctx) if v else PadicNumber.one(ctx)
    return x * nonsquare_unit(ctx) if s else x


def hilbert_symbol(a: PadicNumber, b: PadicNumber) -> int:
    """Tame Hilbert symbol (a, b) for odd residue characteristic."""
    if a.is_zero() or b.is_zero():
        raise ZeroArgument("Hilbert symbol of 0")
    alpha, beta = int(a.valuation), int(b.valuation)
    minus_one = PadicNumber.from_rational(-1, a.ctx)
    sign = legendre(ac(minus_one)) ** ((alpha * beta) % 2)
    return sign * legendre(ac(a)) ** (beta % 2) * legendre(ac(b)) ** (alpha % 2)


@lru_cache(maxsize=None)
def _hilbert_tags(t1: str, t2: str, p: int, k: int) -> int:
    ctx = FieldContext(p, k, precision=4)
    return hilbert_symbol(tag_value(t1, ctx), tag_value(t2, ctx))


def hilbert_tags(t1: str, t2: str, ctx: FieldContext) -> int:
    return _hilbert_tags(t1, t2, ctx.p, ctx.k)


@dataclass(frozen=True, eq=False)
class DiagonalForm:
    entries: tuple[PadicNumber, ...]
    ctx: FieldContext

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if any(e.is_zero() for e in self.entries):
            raise DegenerateForm("diagonal form has a zero entry")

    @classmethod
    def from_tags(cls, tags: Sequence[str], ctx: FieldContext) -> DiagonalForm:
        return cls(tuple(tag_value(t, ctx) for t in tags), ctx)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def tags(self) -> tuple[str, ...]:
        return tuple(square_class(e) for e in self.entries)


def _disc_tags(tags: Sequence[str]) -> str:
    return class_mul("1", *tags)


def _hasse_tags(tags: Sequence[str], ctx: FieldContext) -> int:
    h = 1
    for i, j in itertools.combinations(range(len(tags)), 2):
        h *= hilbert_tags(tags[i], tags[j], ctx)
    return h


def discriminant(f: DiagonalForm) -> str:
    """Square class of the product of the diagonal entries."""
    return _disc_tags(f.tags())


def hasse(f: DiagonalForm) -> int:
    """Product of (a_i, a_j) over i < j."""
    h = 1
    for a, b in itertools.combinations(f.entries, 2):
        h *= hilbert_symbol(a, b)
    return h


def diagonalize(gram: Sequence[Sequence[PadicNumber]], ctx: FieldContext) -> DiagonalForm:
    """Orthogonal basis by pivoting on an entry of least valuation.

    When the least valuation only occurs off the diagonal at (i, j), e_i is
    replaced by e_i + e_j, whose norm a_ii + 2a_ij + a_jj keeps that valuation.
    """
    a = [list(row) for row in gram]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("Gram matrix must be square")
    diag: list[PadicNumber] = []
    while a:
        m = len(a)
        best = None
        for i in range(m):
            for j in range(i, m):
                x = a[i][j]
                if x.is_zero():
                    continue
                key = (x.valuation, 0 if i == j else 1)
                if best is None or key < best[0]:
                    best = (key, i, j)
        if best is None:
            raise DegenerateForm("Gram matrix is degenerate")
        _, i, j = best
        if i != j:
            for r in range(m):
                a[i][r] = a[i][r] + a[j][r]
            for r in range(m):
                a[r][i] = a[r][i] + a[r][j]
        d = a[i][i]
        if d.is_zero():
            raise DegenerateForm("Gram matrix is degenerate")
        diag.append(d)
        rest = [r for r in range(m) if r != i]
        d_inv = d.inv()
        a = [[a[r][c] - a[r][i] * a[i][c] * d_inv for c in rest] for r in rest]
    return DiagonalForm(tuple(diag), ctx)


# --- classes ------------------------------------------------------------------


@dataclass(frozen=True)
class QFormClass:
    dim: int
    disc: str
    hasse: int
    witt_index: int
    aniso: tuple[str, ...]

    def __post_init__(self):
        if 2 * self.witt_index + len(self.aniso) != self.dim:
            raise ValueError("2 * witt_index + dim(aniso) must equal dim")
        if len(self.aniso) > 4:
            raise ValueError("anisotropic kernel has dimension at most 4")

    @property
    def aniso_tag(self) -> str:
        return "<" + ",".join(self.aniso) + ">" if self.aniso else "0"

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "disc": self.disc,
            "hasse": self.hasse,
            "witt": self.witt_index,
            "aniso": self.aniso_tag,
        }

    @classmethod
    def from_json(cls, data: dict) -> QFormClass:
        tag = data["aniso"]
        aniso = () if tag == "0" else tuple(tag.strip("<>").split(","))
        return cls(data["dim"], data["disc"], data["hasse"], data["witt"], aniso)

    def __str__(self):
        return f"H^{self.witt_index}+{self.aniso_tag}"


def anisotropic_table(ctx: FieldContext) -> list[tuple[str, ...]]:
    """The 15 anisotropic representatives, as diagonal square-class tags."""
    neg = minus_one_class(ctx)
    alpha = "eps" if neg == "1" else "1"
    units = ("1", "eps")
    rows: list[tuple[str, ...]] = [("1",), ("eps",), ("pi",), ("eps*pi",)]
    rows.append(("1", alpha))
    rows.append(("pi", class_mul(alpha, "pi")))
    for t, t2 in itertools.product(units, units):
        rows.append((t, class_mul(t2, "pi")))
    for t in units:
        rows.append((class_mul(alpha, t), "pi", class_mul(alpha, "pi")))
    for t in units:
        rows.append(("1", alpha, class_mul(t, "pi")))
    rows.append(("1", class_mul(neg, "eps"), class_mul(neg, "pi"), "eps*pi"))
    return rows


def _class_tags(witt_index: int, aniso: Sequence[str], ctx: FieldContext) -> tuple[str, ...]:
    # q0 is isometric to diag(1, -1)
    return ("1", minus_one_class(ctx)) * witt_index + tuple(aniso)


def make_class(witt_index: int, aniso: Sequence[str], ctx: FieldContext) -> QFormClass:
    tags = _class_tags(witt_index, aniso, ctx)
    return QFormClass(len(tags), _disc_tags(tags), _hasse_tags(tags, ctx), witt_index, tuple(aniso))


@lru_cache(maxsize=None)
def _enumerate_classes(dim: int, p: int, k: int) -> tuple[QFormClass, ...]:
    ctx = FieldContext(p, k, precision=4)
    if dim == 0:
        return (QFormClass(0, "1", 1, 0, ()),)
    kernels = [()] + anisotropic_table(ctx)
    out = []
    for aniso in kernels:
        rest = dim - len(aniso)
        if rest >= 0 and rest % 2 == 0:
            out.append(make_class(rest // 2, aniso, ctx))
    return tuple(out)


def enumerate_classes(dim: int, ctx: FieldContext) -> list[QFormClass]:
    if dim < 0:
        raise ValueError("dim must be >= 0")
    return list(_enumerate_classes(dim, ctx.p, ctx.k))


def classify_tags(tags: Sequence[str], ctx: FieldContext) -> QFormClass:
    dim = len(tags)
    if dim == 0:
        return enumerate_classes(0, ctx)[0]
    disc, h = _disc_tags(tags), _hasse_tags(tags, ctx)
    hits = [c for c in enumerate_classes(dim, ctx) if c.disc == disc and c.hasse == h]
    if not hits:
        raise NoMatch(f"no class with dim={dim}, disc={disc}, hasse={h}")
    if len(hits) > 1:
        raise InternalInvariantError(f"ambiguous classification: {hits}")
    return hits[0]


def witt_decompose(form, ctx: FieldContext | None = None) -> QFormClass:
    """Class of a DiagonalForm or a symmetric Gram matrix of PadicNumbers."""
    if not isinstance(form, DiagonalForm):
        if ctx is None:
            ctx = form[0][0].ctx
        form = diagonalize(form, ctx)
    return classify_tags(form.tags(), form.ctx)


def minimal_representative(c: QFormClass, ctx: FieldContext) -> list[list[PadicNumber]]:
    """q0^m (+) the Table-1 diagonal, as an exact matrix."""
    zero, one = PadicNumber.zero(ctx), PadicNumber.one(ctx)
    n = c.dim
    m = [[zero] * n for _ in range(n)]
    for i in range(c.witt_index):
        m[2 * i][2 * i + 1] = one
        m[2 * i + 1][2 * i] = one
    base = 2 * c.witt_index
    for i, tag in enumerate(c.aniso):
        m[base + i][base + i] = tag_value(tag, ctx)
    return m


@dataclass(frozen=True)
class QTuple:
    """Quadratic-form classes indexed by the even part sizes 2, 4, ..., 2n."""

    lam: Partition
    classes: tuple[tuple[int, QFormClass], ...]

    def __post_init__(self):
        for i, c in self.classes:
            if i % 2 or c.dim != multiplicity(self.lam, i):
                raise InvalidTuple(f"class for i={i} has dim {c.dim}, expected m_{i} = {multiplicity(self.lam, i)}")

    def __getitem__(self, i: int) -> QFormClass:
        return dict(self.classes)[i]

    def to_json(self) -> dict:
        return {str(i): c.to_json() for i, c in self.classes}

    @classmethod
    def from_json(cls, lam: Partition, data: dict) -> QTuple:
        classes = tuple(sorted((int(i), QFormClass.from_json(c)) for i, c in data.items()))
        full = dict(classes)
        for i in range(2, lam.n + 1, 2):
            full.setdefault(i, QFormClass(0, "1", 1, 0, ()))
        return cls(lam, tuple(sorted(full.items())))


def enumerate_tuples(lam: Partition, ctx: FieldContext) -> list[QTuple]:
    if not is_symplectic_admissible(lam):
        raise NotAdmissible(f"{lam} has an odd part of odd multiplicity")
    evens = list(range(2, lam.n + 1, 2))
    choices = [enumerate_classes(multiplicity(lam, i), ctx) for i in evens]
    return [QTuple(lam, tuple(zip(evens, combo))) for combo in itertools.product(*choices)]
