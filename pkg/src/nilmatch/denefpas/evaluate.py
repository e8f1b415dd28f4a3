"""Three-valued evaluation of Denef-Pas formulas in (F, p, d_1, ..., d_m).

Residue-field quantifiers range over all of F_q and are exact.  Value-group
quantifiers range over a finite window and are cross-checked against the
window widened by ``Z_EXTENSION`` on both sides; a disagreement yields
UNBOUNDED.  Valued-field quantifiers range over truncated balls from
:func:`nilmatch.padic.iter_window` and the result is flagged as bounded.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from ..errors import SortError, UnassignedVariable
from ..padic import (
    INFINITY,
    FieldContext,
    PadicNumber,
    ResidueElement,
    ac,
    iter_window,
    residue,
    residue_power_coset_reps,
)
from .syntax import (
    RF,
    VF,
    Z,
    Ac,
    Add,
    And,
    Bottom,
    Cong,
    Const,
    Eq,
    Exists,
    Forall,
    Le,
    Lit,
    Mul,
    Neg,
    Not,
    Or,
    Ord,
    Sub,
    Top,
    Var,
    free_vars,
    miniscope,
)

Z_EXTENSION = 8


class Truth(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNBOUNDED = "unbounded"

    def __invert__(self) -> Truth:
        if self is Truth.TRUE:
            return Truth.FALSE
        if self is Truth.FALSE:
            return Truth.TRUE
        return self

    @classmethod
    def of(cls, b: bool) -> Truth:
        return cls.TRUE if b else cls.FALSE


@dataclass(frozen=True)
class DPStructure:
    """The field with coset constants and the quantifier windows.

    For ``m`` constants, the first ``gcd(m, q - 1)`` are units whose angular
    components represent the m-th power classes of F_q^x; the rest are 1.
    """

    ctx: FieldContext
    m: int = 0
    vf_window: tuple[int, int] = (-2, 2)
    vf_digits: int = 2
    z_window: tuple[int, int] = (-16, 16)
    ring_mode: bool = False
    constants: tuple[PadicNumber, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("m must be >= 0")
        if self.vf_window[0] > self.vf_window[1] or self.z_window[0] > self.z_window[1]:
            raise ValueError("empty quantifier window")
        if self.m and not self.constants:
            reps = residue_power_coset_reps(self.m, self.ctx)
            consts = [PadicNumber.lift(u) for u in reps]
            consts += [PadicNumber.one(self.ctx)] * (self.m - len(consts))
            object.__setattr__(self, "constants", tuple(consts))
        if len(self.constants) != self.m:
            raise ValueError("wrong number of constants")
        if self.m:
            self._verify_constants()

    @property
    def ell(self) -> int:
        return math.gcd(self.m, self.ctx.q - 1) if self.m else 0

    def _verify_constants(self):
        from .formulas import build_phi_lm

        ell = self.ell
        phi = build_phi_lm(ell, self.m)
        env = {Var(f"y{i + 1}", RF): ac(self.constants[i]) for i in range(ell)}
        if evaluate(phi, self, env).value is not Truth.TRUE:
            raise ValueError("constants do not represent the m-th power classes")


@dataclass(frozen=True)
class EvalResult:
    value: Truth
    exact: bool
    flags: frozenset[str]

    def to_json(self) -> dict:
        return {"result": self.value.value, "exact": self.exact, "flags": sorted(self.flags)}


class _Evaluator:
    def __init__(self, s: DPStructure):
        self.s = s
        self.ctx = s.ctx
        self.flags: set[str] = set()
        self.fv_cache: dict = {}
        self.memo: dict = {}
        self.rf = [residue(v, self.ctx) for v in self.ctx.residue_field.elements()]
        self._vf_domain: list[PadicNumber] | None = None

    # terms ------------------------------------------------------------

    def term(self, t, env, cache):
        key = id(t)
        hit = cache.get(key)
        if hit is not None:
            return hit[1]
        val = self._term(t, env, cache)
        cache[key] = (t, val)
        return val

    def _term(self, t, env, cache):
        if isinstance(t, Var):
            try:
                return env[t]
            except KeyError:
                raise UnassignedVariable(t.name) from None
        if isinstance(t, Lit):
            if t.sort == Z:
                return t.value
            if t.sort == RF:
                return residue(t.value % self.ctx.p, self.ctx)
            return PadicNumber.from_rational(t.value, self.ctx)
        if isinstance(t, Const):
            if not 1 <= t.index <= self.s.m:
                raise UnassignedVariable(t.name)
            return self.s.constants[t.index - 1]
        if isinstance(t, Ord):
            x = self.term(t.arg, env, cache)
            if x.is_zero():
                self.flags.add("ord-of-zero")
                return INFINITY
            return int(x.valuation)
        if isinstance(t, Ac):
            return ac(self.term(t.arg, env, cache))
        if isinstance(t, Neg):
            return -self.term(t.arg, env, cache)
        a = self.term(t.left, env, cache)
        b = self.term(t.right, env, cache)
        if isinstance(t, Add):
            return a + b
        if isinstance(t, Sub):
            return a - b
        if isinstance(t, Mul):
            if t.sort == Z:
                raise SortError("multiplication in the Z sort")
            return a * b
        raise TypeError(f"not a term: {t!r}")

    # formulas ----------------------------------------------------------

    def formula(self, f, env) -> Truth:
        if isinstance(f, (Exists, Forall)) and f.var.sort in (RF, Z):
            fv = free_vars(f, self.fv_cache)
            if all(v.sort != VF for v in fv):
                key = (id(f), tuple(sorted(((v.name, v.sort), env[v]) for v in fv if v in env)))
                hit = self.memo.get(key)
                if hit is None:
                    hit = self._formula(f, env)
                    self.memo[key] = hit
                return hit
        return self._formula(f, env)

    def _formula(self, f, env) -> Truth:
        if isinstance(f, Top):
            return Truth.TRUE
        if isinstance(f, Bottom):
            return Truth.FALSE
        if isinstance(f, (Eq, Le, Cong)):
            return self.atom(f, env)
        if isinstance(f, Not):
            return ~self.formula(f.arg, env)
        if isinstance(f, And):
            out = Truth.TRUE
            for a in f.args:
                r = self.formula(a, env)
                if r is Truth.FALSE:
                    return r
                if r is Truth.UNBOUNDED:
                    out = r
            return out
        if isinstance(f, Or):
            out = Truth.FALSE
            for a in f.args:
                r = self.formula(a, env)
                if r is Truth.TRUE:
                    return r
                if r is Truth.UNBOUNDED:
                    out = r
            return out
        if isinstance(f, (Exists, Forall)):
            return self.quantifier(f, env)
        raise TypeError(f"not a formula: {f!r}")

    def atom(self, f, env) -> Truth:
        cache: dict = {}
        a = self.term(f.left, env, cache)
        b = self.term(f.right, env, cache)
        if isinstance(f, Eq):
            return Truth.of(a == b)
        if a == INFINITY or b == INFINITY:
            # comparisons with ord(0) follow the +infinity convention
            if isinstance(f, Cong):
                return Truth.of(a == b)
            return Truth.of(a <= b)
        if isinstance(f, Le):
            return Truth.of(a <= b)
        return Truth.of((a - b) % f.modulus == 0)

    def _domain(self, sort: str, window=None):
        if sort == RF:
            return self.rf
        if sort == Z:
            lo, hi = window or self.s.z_window
            return range(lo, hi + 1)
        if self._vf_domain is None:
            self._vf_domain = list(
                iter_window(self.ctx, self.s.vf_window, self.s.vf_digits, ring_only=self.s.ring_mode)
            )
        return self._vf_domain

    def _scan(self, f, env, domain) -> Truth:
        want = Truth.TRUE if isinstance(f, Exists) else Truth.FALSE
        out = ~want
        for val in domain:
            inner = dict(env)
            inner[f.var] = val
            r = self.formula(f.body, inner)
            if r is want:
                return want
            if r is Truth.UNBOUNDED:
                out = r
        return out

    def quantifier(self, f, env) -> Truth:
        sort = f.var.sort
        if sort == VF:
            self.flags.add("vf-bounded")
            if self.s.ring_mode:
                self.flags.add("ring-mode")
        if sort != Z:
            return self._scan(f, env, self._domain(sort))
        self.flags.add("z-window")
        lo, hi = self.s.z_window
        base = self._scan(f, env, self._domain(Z))
        wide = self._scan(f, env, self._domain(Z, (lo - Z_EXTENSION, hi + Z_EXTENSION)))
        if base is not wide:
            self.flags.add("z-window-unstable")
            return Truth.UNBOUNDED
        return base


def _coerce_assignment(assignment: dict, ctx: FieldContext) -> dict:
    env = {}
    for var, val in (assignment or {}).items():
        if isinstance(var, str):
            raise TypeError("assignment keys must be Var objects (use bind())")
        if var.sort == VF and not isinstance(val, PadicNumber):
            val = PadicNumber.from_rational(val, ctx)
        elif var.sort == RF and not isinstance(val, ResidueElement):
            val = residue(int(val) % ctx.q, ctx)
        elif var.sort == Z and not isinstance(val, int):
            raise SortError(f"{var.name} needs an integer value")
        env[var] = val
    return env


def bind(f, **values) -> dict:
    """Assignment for the free variables of f by name."""
    by_name = {v.name: v for v in free_vars(f)}
    out = {}
    for name, val in values.items():
        if name not in by_name:
            raise KeyError(f"{name} is not free in the formula")
        out[by_name[name]] = val
    return out


def evaluate(f, s: DPStructure, assignment: dict | None = None, scope: bool = True) -> EvalResult:
    """Evaluate f; ``scope`` enables miniscoping before the search."""
    env = _coerce_assignment(assignment or {}, s.ctx)
    missing = [v.name for v in free_vars(f) if v not in env]
    if missing:
        raise UnassignedVariable(sorted(missing)[0])
    ev = _Evaluator(s)
    g = miniscope(f) if scope else f
    value = ev.formula(g, env)
    exact = not ({"vf-bounded", "z-window"} & ev.flags)
    return EvalResult(value, exact, frozenset(ev.flags))
