"""Worked examples for sl_3 and sp_4, checked against embedded golden files.

Each ``repro_*`` function recomputes the example, renders it in the golden
text format and reports whether the rendering is byte-identical to the
stored file.  Field-dependent entries (``ac(d)``, ``ac(a)``) are written
symbolically after checking, for every datum, that the computed residue
sits in that position.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass, field
from importlib import resources

from .building import MoyPrasadLattice, RootDatum, moy_prasad
from .errors import InternalInvariantError
from .matching import match
from .orbits import OrbitLabel, labels
from .padic import FieldContext, ac
from .partitions import Partition


def golden_text(name: str) -> str:
    return resources.files("nilmatch.golden").joinpath(f"{name}.txt").read_text(encoding="utf-8")


@dataclass
class ReproResult:
    name: str
    text: str
    golden: str
    instances: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.text == self.golden

    def diff(self) -> str:
        return "".join(
            difflib.unified_diff(
                self.golden.splitlines(True), self.text.splitlines(True), "golden", "computed"
            )
        )

    def to_json(self) -> dict:
        return {"example": self.name, "golden_match": self.ok, "text": self.text, "instances": self.instances}


def _rows(cells) -> str:
    return " / ".join(" ".join(row) for row in cells)


def _lattice_lines(lat: MoyPrasadLattice) -> list[str]:
    return [f"g: {_rows(lat.symbols())}", f"g+: {_rows(lat.symbols(plus=True))}"]


def _residue_cells(v) -> list[list[str]]:
    return [[str(e) for e in row] for row in v.matrix()]


def _symbolic(cells: list[list[str]], pos: tuple[int, int], expected: str, symbol: str) -> list[list[str]]:
    r, c = pos
    if cells[r][c] != expected:
        raise InternalInvariantError(f"entry {pos} is {cells[r][c]}, expected {expected}")
    out = [list(row) for row in cells]
    out[r][c] = symbol
    return out


def repro_sl3(ctx: FieldContext) -> ReproResult:
    rd = RootDatum("A", 3)
    by_lam: dict[tuple[int, ...], list[OrbitLabel]] = {}
    for lab in labels("sl", 3, ctx):
        by_lam.setdefault(lab.lam.parts, []).append(lab)

    zero_res = match(by_lam[(1, 1, 1)][0])
    sub_res = match(by_lam[(2, 1)][0])
    regular = [match(lab) for lab in by_lam[(3,)]]

    # facets F3, F4, F5 hold the regular orbits with val(d) = 0, 1, 2
    by_val: dict[int, object] = {}
    for res in regular:
        by_val.setdefault(int(res.label.d().valuation), res)
    if sorted(by_val) != [0, 1, 2]:
        raise InternalInvariantError(f"unexpected valuations of d: {sorted(by_val)}")
    facets = [zero_res.facet_point, sub_res.facet_point] + [by_val[b].facet_point for b in (0, 1, 2)]

    lines = ["# sl3 facets F1..F5: g_F ; g_F+"]
    for i, x in enumerate(facets, start=1):
        lines.append(f"F{i}")
        lines.extend(_lattice_lines(moy_prasad(x, rd)))
    lines.append("# images in V_F")
    lines.append(f"v(1,1,1): {_rows(_residue_cells(zero_res.v))}")
    lines.append(f"v(2,1): {_rows(_residue_cells(sub_res.v))}")

    templates, instances = set(), []
    for res in regular:
        d = res.label.d()
        acd = ac(d)
        cells = _symbolic(_residue_cells(res.v), (1, 2), str(acd), "ac(d)")
        templates.add(_rows(cells))
        instances.append(
            {
                "d": res.label.datum_str(),
                "val": int(d.valuation),
                "ac": str(acd),
                "facet": f"F{int(d.valuation) + 3}",
                "v": res.v.to_json(),
            }
        )
    if len(templates) != 1:
        raise InternalInvariantError(f"v_d differs across d: {sorted(templates)}")
    lines.append(f"v(3): {templates.pop()}")
    return ReproResult("sl3", "\n".join(lines) + "\n", golden_text("sl3"), instances)


def repro_sp4(ctx: FieldContext) -> ReproResult:
    lam = Partition((4,))
    results = [match(lab) for lab in labels("sp", 2, ctx) if lab.lam == lam]
    if len(results) != 4:
        raise InternalInvariantError(f"expected 4 classes for (4), got {len(results)}")

    groups: dict[int, list] = {0: [], 1: []}
    h_lines, x_templates, v_templates, instances = set(), set(), set(), []
    for res in results:
        c = res.label.datum[4]
        tag = c.aniso[0]
        val = 1 if "pi" in tag else 0
        groups[val].append(res)
        want = "H_{e1-e2} ∩ H_{2e2" + (f"+{val}" if val else "") + "}"
        if res.subspace.describe() != want:
            raise InternalInvariantError(f"H for a={tag}: {res.subspace.describe()}")
        h_lines.add("H_{e1-e2} ∩ H_{2e2+val(a)}")
        a = res.representative[(1, 3)]
        x_cells = [[("a" if (r, col) == (1, 3) else _plain(e)) for col, e in enumerate(row)]
                   for r, row in enumerate(res.representative.entries)]
        x_templates.add(_rows(x_cells))
        v_cells = _symbolic(_residue_cells(res.v), (1, 3), str(ac(a)), "ac(a)")
        v_templates.add(_rows(v_cells))
        instances.append(
            {"a": tag, "val": val, "point": res.point.to_json(), "ac": str(ac(a)), "v": res.v.to_json()}
        )
    if len(h_lines) != 1 or len(x_templates) != 1 or len(v_templates) != 1:
        raise InternalInvariantError("sp4 data differs across a")

    lines = ["# sp4, lambda = (4), Q4 = <a>", f"H: {h_lines.pop()}"]
    for val, heading in ((0, "a in {1, eps}"), (1, "a in {pi, eps*pi}")):
        pts = {str(r.point) for r in groups[val]}
        lats = {tuple(_lattice_lines(r.lattice)) for r in groups[val]}
        if len(groups[val]) != 2 or len(pts) != 1 or len(lats) != 1:
            raise InternalInvariantError(f"facet data differs within val(a) = {val}")
        lines += [heading, f"point: {pts.pop()}", *lats.pop()]
    lines.append(f"X(a): {x_templates.pop()}")
    lines.append(f"v(a): {v_templates.pop()}")
    return ReproResult("sp4", "\n".join(lines) + "\n", golden_text("sp4"), instances)


def _plain(x) -> str:
    if not x.is_exact:
        raise InternalInvariantError("representative entry is not exact")
    return str(x.exact[0])


EXAMPLES = {"sl3": repro_sl3, "sp4": repro_sp4}
