from __future__ import annotations

import math
from dataclasses import replace

import pytest

from nilmatch.padic import FieldContext
from nilmatch.repro import golden_text, repro_sl3, repro_sp4

CONTEXTS = [FieldContext(3), FieldContext(5), FieldContext(7), FieldContext(13), FieldContext(3, 2)]
IDS = ["q3", "q5", "q7", "q13", "q9"]


@pytest.mark.parametrize("ctx", CONTEXTS, ids=IDS)
def test_sl3_golden(ctx):
    res = repro_sl3(ctx)
    assert res.ok, res.diff()
    assert len(res.instances) == 3 * math.gcd(3, ctx.q - 1)
    assert {i["facet"] for i in res.instances} == {"F3", "F4", "F5"}
    for inst in res.instances:
        assert inst["v"][1][2] != 0


@pytest.mark.parametrize("ctx", CONTEXTS, ids=IDS)
def test_sp4_golden(ctx):
    res = repro_sp4(ctx)
    assert res.ok, res.diff()
    assert sorted(i["a"] for i in res.instances) == sorted(["1", "eps", "pi", "eps*pi"])
    points = {i["a"]: i["point"] for i in res.instances}
    assert points["1"] == points["eps"] == ["0", "0"]
    assert points["pi"] == points["eps*pi"] == ["-1/2", "-1/2"]


def test_sl3_nine_classes_at_p7():
    res = repro_sl3(FieldContext(7))
    assert len(res.instances) == 9
    assert sorted(i["val"] for i in res.instances) == [0, 0, 0, 1, 1, 1, 2, 2, 2]


def test_golden_mismatch_is_reported():
    res = repro_sl3(FieldContext(7))
    broken = replace(res, golden=res.golden.replace("F5\ng: O O P^-1", "F5\ng: O O O"))
    assert not broken.ok and "-g: O O O" in broken.diff()


def test_golden_files_embedded():
    assert golden_text("sl3").startswith("# sl3")
    assert "X(a)" in golden_text("sp4")
