"""Matching partition labels with (facet, degenerate element) pairs.

For each label we build the affine subspace H cut out by the representative's
nonzero entries, pick a point in a maximal facet of H, and project the
representative into the quotient of the Moy-Prasad lattices at that point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .building import (
    AffineSubspace,
    ApartmentPoint,
    MoyPrasadLattice,
    ResidueQuotientElement,
    RootDatum,
    evaluate_root,
    facet_dimension,
    is_degenerate,
    moy_prasad,
    phi_x,
    reduce_to_alcove,
    residue_project,
)
from .errors import InternalInvariantError, InvalidTuple, NilmatchError
from .orbits import OrbitLabel, LieMatrix, is_nilpotent, labels, orbit_dimension, representative
from .padic import FieldContext, PadicNumber, is_prime
from .partitions import Partition, multiplicity
from .quadforms import QTuple


def i_lambda(lam: Partition) -> set[int]:
    """Positions i (1-based) with a nonzero (i, i+1) entry in J_lambda."""
    cuts, acc = set(), 0
    for part in lam.parts:
        acc += part
        cuts.add(acc)
    return set(range(1, lam.n + 1)) - cuts


def _simple(i: int, n: int) -> tuple[int, ...]:
    """alpha_i = e_i - e_{i+1}, 1-based."""
    v = [0] * n
    v[i - 1], v[i] = 1, -1
    return tuple(v)


def h_subspace_sl(lam: Partition, d: PadicNumber) -> AffineSubspace:
    n = lam.n
    rd = RootDatum("A", n)
    cons = []
    for i in sorted(i_lambda(lam)):
        # d_{i+1} is d only in the last position
        offset = int(d.valuation) if i + 1 == n else 0
        cons.append((_simple(i, n), offset))
    return AffineSubspace(rd, tuple(cons))


def h_subspace_sp(lam: Partition, qbar: QTuple) -> AffineSubspace:
    if qbar.lam != lam:
        raise InvalidTuple("quadratic-form tuple belongs to another partition")
    n = lam.n // 2
    rd = RootDatum("C", n)
    forms = dict(qbar.classes)
    cons: list[tuple[tuple[int, ...], int]] = []

    def root(*terms: tuple[int, int]) -> tuple[int, ...]:
        v = [0] * n
        for idx, c in terms:
            if not 1 <= idx <= n:
                raise InvalidTuple(f"basis index {idx} outside 1..{n}")
            v[idx - 1] += c
        return tuple(v)

    s = 0
    for j in sorted(set(lam.parts)):
        mj = multiplicity(lam, j)
        d = j * mj // 2
        if j % 2:
            for k in range(1, d + 1):
                if k % j:
                    cons.append((root((s + k, 1), (s + k + 1, -1)), 0))
        else:
            M = (j // 2 - 1) * mj
            c = forms[j]
            for k in range(1, M + 1):
                cons.append((root((s + k, 1), (s + k + mj, -1)), 0))
            for i in range(1, c.witt_index + 1):
                cons.append((root((s + M + 2 * i - 1, 1), (s + M + 2 * i, 1)), 0))
            for i in range(2 * c.witt_index + 1, mj + 1):
                tag = c.aniso[i - 2 * c.witt_index - 1]
                cons.append((root((s + M + i, 2)), 1 if "pi" in tag else 0))
        s += d
    seen: dict[tuple[int, ...], int] = {}
    for a, k in cons:
        if seen.setdefault(a, k) != k:
            raise InvalidTuple(f"index collision on root {a}")
    return AffineSubspace(rd, tuple(cons))


def h_subspace(label: OrbitLabel) -> AffineSubspace:
    if label.algebra == "sl":
        return h_subspace_sl(label.lam, label.d())
    return h_subspace_sp(label.lam, label.datum)


def _next_prime(m: int) -> int:
    m += 1
    while not is_prime(m):
        m += 1
    return m


def maximal_facet_point(H: AffineSubspace, rd: RootDatum | None = None) -> ApartmentPoint:
    """A point of H lying on no walls other than those containing all of H.

    The full apartment gives the barycenter of the fundamental alcove.
    Otherwise start at the least-norm point of H and move along the k-th
    direction basis vector by 1/M^k for a prime M, enlarging M until no
    extra root value becomes integral.
    """
    rd = rd or H.rd
    if not H.constraints:
        return rd.barycenter()
    base = H.solve()
    dirs = H.direction_basis()
    target = H.integral_roots()
    if not dirs:
        return rd.point(base)
    bound = max((abs(k) for _, k in H.constraints), default=0)
    M = _next_prime(4 * (rd.n + 2) * (1 + bound))
    for _ in range(100):
        x = list(base)
        for k, dvec in enumerate(dirs, start=1):
            step = Fraction(1, M**k)
            x = [xi + step * di for xi, di in zip(x, dvec)]
        pt = rd.point(x)
        if phi_x(pt, rd) == target:
            return pt
        M = _next_prime(M)
    raise InternalInvariantError("could not find a generic point of H")


@dataclass
class MatchResult:
    label: OrbitLabel
    representative: LieMatrix
    subspace: AffineSubspace
    point: ApartmentPoint
    facet_point: ApartmentPoint
    word: list[str]
    lattice: MoyPrasadLattice
    v: ResidueQuotientElement
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "label": self.label.to_json(),
            "subspace": self.subspace.to_json(),
            "point": self.point.to_json(),
            "facet_point": self.facet_point.to_json(),
            "reflections": self.word,
            "lattice": self.lattice.render(),
            "plus_lattice": self.lattice.render(plus=True),
            "v": self.v.to_json(),
            "checks": self.checks,
        }

    def render(self) -> str:
        return "\n".join(
            [
                f"label: {self.label}",
                f"H: {self.subspace.describe()}",
                f"point: {self.point}   alcove point: {self.facet_point}",
                "g_x:",
                self.lattice.render(),
                "g_x+:",
                self.lattice.render(plus=True),
                "v:",
                self.v.render(),
                "checks: " + ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in self.checks.items()),
            ]
        )


def match(label: OrbitLabel) -> MatchResult:
    """Forward matching of one label; NotInLattice here would be a bug."""
    rd = RootDatum.for_algebra(label.algebra, label.n)
    X = representative(label)
    H = h_subspace(label)
    x = maximal_facet_point(H, rd)
    reduced, word = reduce_to_alcove(x, rd)
    # the lattice is taken at x itself; the reduced point is reported only
    lat = moy_prasad(x, rd)
    v = residue_project(X, lat)
    checks = {
        "in_subspace": H.contains(x),
        "maximal_facet": facet_dimension(x, rd) == H.dimension and phi_x(x, rd) == H.integral_roots(),
        "in_lattice": True,
        "degenerate": is_degenerate(v),
        "nilpotent": is_nilpotent(X),
        "alcove": len(phi_x(reduced, rd)) == len(phi_x(x, rd)),
    }
    return MatchResult(label, X, H, x, reduced, word, lat, v, checks)


@dataclass
class MatchReport:
    results: list[MatchResult]
    failures: list[tuple[OrbitLabel, str]]

    @property
    def ok(self) -> bool:
        return not self.failures and all(r.ok for r in self.results)

    def strata(self) -> dict[int, list[MatchResult]]:
        out: dict[int, list[MatchResult]] = {}
        for r in self.results:
            out.setdefault(orbit_dimension(r.label), []).append(r)
        return dict(sorted(out.items(), reverse=True))


def match_all(algebra: str, n: int, ctx: FieldContext) -> MatchReport:
    results, failures = [], []
    for label in labels(algebra, n, ctx):
        try:
            res = match(label)
        except NilmatchError as exc:
            failures.append((label, f"{type(exc).__name__}: {exc}"))
            continue
        results.append(res)
        if not res.ok:
            bad = [k for k, v in res.checks.items() if not v]
            failures.append((label, "failed checks: " + ", ".join(bad)))
    return MatchReport(results, failures)


def describe_point(x: ApartmentPoint, rd: RootDatum) -> str:
    """Simple-root values, e.g. ``a1=1, a2=0``."""
    return ", ".join(f"a{i + 1}={evaluate_root(a, x.coords)}" for i, a in enumerate(rd.simple_roots))
