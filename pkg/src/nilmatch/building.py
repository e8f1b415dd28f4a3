"""The standard apartment of SL_n (type A) and Sp_2n (type C) and its Moy-Prasad lattices.

Points are exact rational vectors.  Type-A points live in the sum-zero
hyperplane of Q^n, a point x acting as ``diag(t^x1, ..., t^xn)``; type-C points
are arbitrary vectors in Q^n, acting as ``diag(t^x, t^-x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg
from .errors import EmptySubspace, InternalInvariantError, NotInLattice
from .padic import FieldContext, ResidueElement, ac, residue

Root = tuple[int, ...]
# ("root", alpha) or ("h", i)
Coordinate = tuple


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def root_name(alpha: Root) -> str:
    """``e1-e2``, ``2e2``, ``-e1-e2`` ..."""
    parts = []
    for i, c in enumerate(alpha):
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = "" if abs(c) == 1 else str(abs(c))
        parts.append(f"{sign}{mag}e{i + 1}")
    return "".join(parts) or "0"


def parse_root(text: str, n: int) -> Root:
    import re

    coeffs = [0] * n
    s = text.replace(" ", "")
    pos = 0
    for m in re.finditer(r"([+-]?)(\d*)e(\d+)", s):
        if m.start() != pos:
            raise ValueError(f"cannot parse root {text!r}")
        pos = m.end()
        c = int(m.group(2) or 1) * (-1 if m.group(1) == "-" else 1)
        i = int(m.group(3)) - 1
        if not 0 <= i < n:
            raise ValueError(f"root index out of range in {text!r}")
        coeffs[i] += c
    if pos != len(s) or not any(coeffs):
        raise ValueError(f"cannot parse root {text!r}")
    return tuple(coeffs)


def evaluate_root(alpha: Root, x: Sequence[Fraction]) -> Fraction:
    return sum((c * xi for c, xi in zip(alpha, x) if c), Fraction(0))


@dataclass(frozen=True)
class ApartmentPoint:
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_frac(c) for c in self.coords))

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]


@dataclass(frozen=True)
class RootDatum:
    """Root system of sl_n ("A", n) or sp_2n ("C", n) with its matrix coordinates."""

    type: str
    n: int

    def __post_init__(self):
        if self.type not in ("A", "C"):
            raise ValueError("type must be 'A' or 'C'")
        if self.n < (2 if self.type == "A" else 1):
            raise ValueError("rank too small")

    @classmethod
    def for_algebra(cls, algebra: str, n: int) -> RootDatum:
        return cls("A", n) if algebra == "sl" else cls("C", n)

    @property
    def algebra(self) -> str:
        return "sl" if self.type == "A" else "sp"

    @property
    def size(self) -> int:
        """Size of the matrices in the standard representation."""
        return self.n if self.type == "A" else 2 * self.n

    @property
    def rank(self) -> int:
        return self.n - 1 if self.type == "A" else self.n

    @property
    def dim(self) -> int:
        return self.rank + len(self.roots)

    def _unit(self, i: int, c: int = 1) -> list[int]:
        v = [0] * self.n
        v[i] = c
        return v

    @cached_property
    def roots(self) -> tuple[Root, ...]:
        n = self.n
        out = []
        for i in range(n):
            for j in range(n):
                if i != j:
                    v = self._unit(i)
                    v[j] = -1
                    out.append(tuple(v))
        if self.type == "C":
            for i in range(n):
                for j in range(i + 1, n):
                    v = self._unit(i)
                    v[j] = 1
                    out.append(tuple(v))
                    out.append(tuple(-c for c in v))
                out.append(tuple(self._unit(i, 2)))
                out.append(tuple(self._unit(i, -2)))
        return tuple(out)

    @cached_property
    def simple_roots(self) -> tuple[Root, ...]:
        out = []
        for i in range(self.n - 1):
            v = self._unit(i)
            v[i + 1] = -1
            out.append(tuple(v))
        if self.type == "C":
            out.append(tuple(self._unit(self.n - 1, 2)))
        return tuple(out)

    @cached_property
    def highest_root(self) -> Root:
        if self.type == "A":
            v = self._unit(0)
            v[-1] -= 1
            return tuple(v)
        return tuple(self._unit(0, 2))

    @cached_property
    def coordinate_map(self) -> dict[Coordinate, tuple[tuple[int, int, int], ...]]:
        """Coordinate -> ((row, col, sign), ...) in the standard representation.

        Cartan coordinate i is the diagonal entry (i, i); for type A the last
        diagonal entry is minus the sum of the others.
        """
        n = self.n
        out: dict[Coordinate, tuple[tuple[int, int, int], ...]] = {}
        for i in range(self.rank):
            if self.type == "A":
                out[("h", i)] = ((i, i, 1),)
            else:
                out[("h", i)] = ((i, i, 1), (n + i, n + i, -1))
        for a in self.roots:
            nz = [(i, c) for i, c in enumerate(a) if c]
            if self.type == "A":
                (i, _), (j, _) = sorted(nz, key=lambda t: -t[1])
                pos = ((i, j, 1),)
            elif len(nz) == 2 and nz[0][1] * nz[1][1] < 0:
                (i, _), (j, _) = sorted(nz, key=lambda t: -t[1])
                pos = ((i, j, 1), (n + j, n + i, -1))
            elif len(nz) == 2:
                (i, c), (j, _) = nz
                pos = ((i, n + j, 1), (j, n + i, 1)) if c > 0 else ((n + i, j, 1), (n + j, i, 1))
            else:
                (i, c), = nz
                pos = ((i, n + i, 1),) if c > 0 else ((n + i, i, 1),)
            out[("root", a)] = pos
        return out

    @cached_property
    def position_index(self) -> dict[tuple[int, int], Coordinate]:
        idx = {}
        for c, positions in self.coordinate_map.items():
            for r, col, _ in positions:
                idx[(r, col)] = c
        return idx

    def coordinate_at(self, row: int, col: int) -> Coordinate | None:
        """Coordinate governing a matrix entry (diagonal entries are Cartan)."""
        if row == col:
            return ("h", 0)  # any Cartan coordinate carries the same bounds
        return self.position_index.get((row, col))

    # points -------------------------------------------------------------

    def point(self, coords: Iterable) -> ApartmentPoint:
        x = ApartmentPoint(tuple(coords))
        if len(x) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(x)}")
        if self.type == "A" and sum(x.coords) != 0:
            raise ValueError("type-A coordinates must sum to zero")
        return x

    def point_from_simple(self, values: Sequence) -> ApartmentPoint:
        """The unique point with the given values of the simple roots."""
        rows = [list(a) for a in self.simple_roots]
        rhs = [_frac(v) for v in values]
        if self.type == "A":
            rows.append([1] * self.n)
            rhs.append(Fraction(0))
        return self.point(linalg.solve_square(rows, rhs))

    def origin(self) -> ApartmentPoint:
        return self.point([0] * self.n)

    def barycenter(self) -> ApartmentPoint:
        """Barycenter of the fundamental alcove."""
        if self.type == "A":
            # vertices: 0 and the fundamental coweights, all with theta = 1
            verts = [[Fraction(0)] * self.n]
            for k in range(1, self.n):
                verts.append([Fraction(self.n - k, self.n)] * k + [Fraction(-k, self.n)] * (self.n - k))
        else:
            verts = [[Fraction(1, 2)] * k + [Fraction(0)] * (self.n - k) for k in range(self.n + 1)]
        m = len(verts)
        return self.point([sum(v[i] for v in verts) / m for i in range(self.n)])


# --- facets ------------------------------------------------------------------


def phi_x(x: ApartmentPoint, rd: RootDatum) -> frozenset[Root]:
    """Roots taking an integer value at x."""
    return frozenset(a for a in rd.roots if evaluate_root(a, x.coords).denominator == 1)


def facet_dimension(x: ApartmentPoint, rd: RootDatum) -> int:
    walls = [list(a) for a in phi_x(x, rd)]
    return rd.rank - (linalg.rank(walls) if walls else 0)


def reduce_to_alcove(x: ApartmentPoint, rd: RootDatum) -> tuple[ApartmentPoint, list[str]]:
    """Move x into the closed fundamental alcove by affine reflections.

    Each step reflects across a wall the point lies strictly on the wrong side
    of; the word lists the reflections applied (``s0`` is the affine one).
    """
    c = list(x.coords)
    word: list[str] = []
    theta = rd.highest_root
    for _ in range(10_000):
        moved = False
        for k, a in enumerate(rd.simple_roots):
            if evaluate_root(a, c) < 0:
                if rd.type == "C" and k == rd.n - 1:
                    c[k] = -c[k]
                else:
                    c[k], c[k + 1] = c[k + 1], c[k]
                word.append(f"s{k + 1}")
                moved = True
                break
        if moved:
            continue
        t = evaluate_root(theta, c)
        if t > 1:
            if rd.type == "A":
                c[0] -= t - 1
                c[-1] += t - 1
            else:
                c[0] = 1 - c[0]
            word.append("s0")
            continue
        return rd.point(c), word
    raise InternalInvariantError("alcove reduction did not terminate")


# --- affine subspaces -----------------------------------------------------------


@dataclass(frozen=True)
class AffineSubspace:
    """Intersection of hyperplanes alpha(x) = -n."""

    rd: RootDatum
    constraints: tuple[tuple[Root, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple((tuple(a), int(k)) for a, k in self.constraints))
        if self.solve() is None:
            raise EmptySubspace(f"inconsistent constraints: {self.describe()}")

    def _system(self) -> tuple[list[list[int]], list[Fraction]]:
        rows = [list(a) for a, _ in self.constraints]
        rhs = [Fraction(-k) for _, k in self.constraints]
        if self.rd.type == "A":
            rows.append([1] * self.rd.n)
            rhs.append(Fraction(0))
        return rows, rhs

    def solve(self) -> list[Fraction] | None:
        """Least-norm point, or None when empty."""
        rows, rhs = self._system()
        return linalg.least_norm_solution(rows, rhs, self.rd.n)

    def direction_basis(self) -> list[list[Fraction]]:
        rows, _ = self._system()
        return linalg.nullspace(rows, self.rd.n)

    @property
    def dimension(self) -> int:
        return len(self.direction_basis())

    def contains(self, x: ApartmentPoint) -> bool:
        return all(evaluate_root(a, x.coords) == -k for a, k in self.constraints)

    def integral_roots(self) -> frozenset[Root]:
        """Roots that are constant and integral on the whole subspace."""
        base = self.solve()
        dirs = self.direction_basis()
        out = set()
        for a in self.rd.roots:
            if all(evaluate_root(a, d) == 0 for d in dirs) and evaluate_root(a, base).denominator == 1:
                out.add(a)
        return frozenset(out)

    def describe(self) -> str:
        if not self.constraints:
            return "A"
        terms = []
        for a, k in self.constraints:
            name = root_name(a)
            terms.append(f"H_{{{name}{'+' if k > 0 else '-'}{abs(k)}}}" if k else f"H_{{{name}}}")
        return " ∩ ".join(terms)

    def to_json(self) -> list[dict]:
        return [{"root": root_name(a), "offset": k} for a, k in self.constraints]


# --- lattices ------------------------------------------------------------------


@dataclass(frozen=True)
class MoyPrasadLattice:
    """Entrywise exponents: coordinate c of g_x lies in P^bounds[c]."""

    rd: RootDatum
    point: ApartmentPoint
    bounds: dict = field(hash=False)
    plus_bounds: dict = field(hash=False)

    def matrix(self, plus: bool = False) -> list[list[int | None]]:
        b = self.plus_bounds if plus else self.bounds
        size = self.rd.size
        out = []
        for r in range(size):
            row = []
            for c in range(size):
                coord = self.rd.coordinate_at(r, c)
                row.append(None if coord is None else b[coord])
            out.append(row)
        return out

    def symbols(self, plus: bool = False) -> list[list[str]]:
        return [[lattice_symbol(e) for e in row] for row in self.matrix(plus)]

    def render(self, plus: bool = False) -> str:
        return "\n".join(" ".join(row) for row in self.symbols(plus))

    def jumping(self) -> list[Coordinate]:
        return [c for c in self.rd.coordinate_map if self.bounds[c] < self.plus_bounds[c]]

    def to_json(self) -> dict:
        return {
            "point": self.point.to_json(),
            "bounds": self.matrix(False),
            "plus_bounds": self.matrix(True),
        }


def lattice_symbol(e: int | None) -> str:
    """Exponent -> ``O``, ``P``, ``P^2``, ``P^-1``; ``0`` for a coordinate-free entry."""
    if e is None:
        return "0"
    if e == 0:
        return "O"
    if e == 1:
        return "P"
    return f"P^{e}"


def moy_prasad(x: ApartmentPoint, rd: RootDatum) -> MoyPrasadLattice:
    bounds, plus = {}, {}
    for c in rd.coordinate_map:
        if c[0] == "h":
            bounds[c], plus[c] = 0, 1
        else:
            t = evaluate_root(c[1], x.coords)
            bounds[c] = -math.floor(t)
            plus[c] = 1 - math.ceil(t)
    return MoyPrasadLattice(rd, x, bounds, plus)


def quotient_dimension(lat: MoyPrasadLattice) -> int:
    return len(lat.jumping())


# --- residue quotient ------------------------------------------------------------


@dataclass(frozen=True)
class ResidueQuotientElement:
    lattice: MoyPrasadLattice
    values: dict = field(hash=False)
    ctx: FieldContext = field(repr=False)

    def matrix(self) -> list[list[ResidueElement]]:
        """The element as a matrix over the residue field."""
        rd = self.lattice.rd
        size = rd.size
        zero = residue(0, self.ctx)
        m = [[zero] * size for _ in range(size)]
        for c, val in self.values.items():
            for r, col, sign in rd.coordinate_map[c]:
                m[r][col] = val if sign > 0 else -val
        if rd.type == "A":
            m[size - 1][size - 1] = -sum((m[i][i] for i in range(size - 1)), zero)
        return m

    def render(self) -> str:
        return "\n".join(" ".join(str(e) for e in row) for row in self.matrix())

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values.values())

    def to_json(self) -> list[list[int]]:
        return [[e.signed() if self.ctx.k == 1 else e.value for e in row] for row in self.matrix()]


def residue_project(X, lat: MoyPrasadLattice) -> ResidueQuotientElement:
    """Image of X (a LieMatrix or a square list of PadicNumbers) in g_x / g_x^+."""
    entries = getattr(X, "entries", X)
    rd = lat.rd
    ctx = None
    for r, row in enumerate(entries):
        for c, val in enumerate(row):
            ctx = val.ctx
            coord = rd.coordinate_at(r, c)
            if coord is None:
                if not val.is_zero():
                    raise NotInLattice((r + 1, c + 1), val.valuation, "zero")
                continue
            b = lat.bounds[coord]
            if val.valuation < b:
                raise NotInLattice((r + 1, c + 1), val.valuation, b)
    values = {}
    for coord in lat.jumping():
        r, c, sign = rd.coordinate_map[coord][0]
        val = entries[r][c]
        b = lat.bounds[coord]
        if val.is_zero() or val.valuation > b:
            values[coord] = residue(0, ctx)
        else:
            values[coord] = ac(val) if sign > 0 else -ac(val)
    return ResidueQuotientElement(lat, values, ctx)


def _mat_mul_residue(a, b, zero):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), zero) for j in range(n)] for i in range(n)]


def is_degenerate(v: ResidueQuotientElement) -> bool:
    """True iff the residue matrix of v is nilpotent."""
    m = v.matrix()
    size = len(m)
    zero = residue(0, v.ctx)
    power = m
    for _ in range(size - 1):
        power = _mat_mul_residue(power, m, zero)
    return all(e.is_zero() for row in power for e in row)


# --- svg --------------------------------------------------------------------------


def _plane_coords(rd: RootDatum, x: Sequence[Fraction]) -> tuple[float, float]:
    if rd.type == "A":
        x1, x2, x3 = (float(c) for c in x)
        return (x1 - x2) / math.sqrt(2), (x1 + x2 - 2 * x3) / math.sqrt(6)
    return float(x[0]), float(x[1])


def apartment_svg(rd: RootDatum, points: dict[str, ApartmentPoint] | None = None, extent: int = 2) -> str:
    """Rank-2 apartment with root hyperplanes and labelled points."""
    if rd.rank != 2:
        raise ValueError("SVG rendering is only available in rank 2")
    size, scale = 480, 480 / (2 * extent + 1)
    half = extent + 0.5

    def to_px(u: float, v: float) -> tuple[float, float]:
        return size / 2 + u * scale, size / 2 - v * scale

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white" stroke="black"/>',
    ]
    positive = [a for a in rd.roots if next(c for c in a if c) > 0]
    for a in positive:
        # gradient of the root in the orthonormal plane coordinates
        if rd.type == "A":
            basis = [((1, -1, 0), math.sqrt(2)), ((1, 1, -2), math.sqrt(6))]
            g = [float(evaluate_root(a, b)) / norm for b, norm in basis]
        else:
            g = [float(a[0]), float(a[1])]
        for k in range(-3 * extent, 3 * extent + 1):
            seg = _clip_line(g, k, half)
            if seg is None:
                continue
            (u1, v1), (u2, v2) = seg
            (px1, py1), (px2, py2) = to_px(u1, v1), to_px(u2, v2)
            style = 'stroke="#3355aa" stroke-width="1.5"' if k == 0 else 'stroke="#999" stroke-dasharray="4 3"'
            lines.append(f'<line x1="{px1:.2f}" y1="{py1:.2f}" x2="{px2:.2f}" y2="{py2:.2f}" {style}/>')
    for label, pt in (points or {}).items():
        px, py = to_px(*_plane_coords(rd, pt.coords))
        lines.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="4" fill="#cc2222"/>')
        lines.append(f'<text x="{px + 6:.2f}" y="{py - 6:.2f}" font-size="12">{label}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _clip_line(g: Sequence[float], k: int, half: float):
    """Segment of {g.u = k} inside the square [-half, half]^2, if any."""
    gu, gv = g
    pts = []
    for u in (-half, half):
        if abs(gv) > 1e-12:
            v = (k - gu * u) / gv
            if -half <= v <= half:
                pts.append((u, v))
    for v in (-half, half):
        if abs(gu) > 1e-12:
            u = (k - gv * v) / gu
            if -half <= u <= half:
                pts.append((u, v))
    uniq = []
    for p in pts:
        if all(abs(p[0] - q[0]) + abs(p[1] - q[1]) > 1e-9 for q in uniq):
            uniq.append(p)
    return (uniq[0], uniq[1]) if len(uniq) >= 2 else None
