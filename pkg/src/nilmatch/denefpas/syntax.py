"""Abstract syntax of three-sorted Denef-Pas formulas.

Sorts: ``VF`` (valued field), ``RF`` (residue field), ``Z`` (value group).
Terms carry their sort; formulas are built from atoms, connectives and
sorted quantifiers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

VF, RF, Z = "VF", "RF", "Z"
SORTS = (VF, RF, Z)


# --- terms ------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str
    sort: str


@dataclass(frozen=True)
class Lit:
    value: int
    sort: str


@dataclass(frozen=True)
class Const:
    """Coset constant d_i (valued-field sort)."""

    index: int
    sort: str = VF

    @property
    def name(self) -> str:
        return f"d{self.index}"


@dataclass(frozen=True)
class Add:
    left: Term
    right: Term
    sort: str


@dataclass(frozen=True)
class Sub:
    left: Term
    right: Term
    sort: str


@dataclass(frozen=True)
class Neg:
    arg: Term
    sort: str


@dataclass(frozen=True)
class Mul:
    left: Term
    right: Term
    sort: str


@dataclass(frozen=True)
class Ord:
    arg: Term
    sort: str = Z


@dataclass(frozen=True)
class Ac:
    arg: Term
    sort: str = RF


Term = Union[Var, Lit, Const, Add, Sub, Neg, Mul, Ord, Ac]


# --- formulas ------------------------------------------------------------------


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Le:
    left: Term
    right: Term


@dataclass(frozen=True)
class Cong:
    """left = right mod d, Z sort."""

    left: Term
    right: Term
    modulus: int


@dataclass(frozen=True)
class Not:
    arg: Formula


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Exists:
    var: Var
    body: Formula


@dataclass(frozen=True)
class Forall:
    var: Var
    body: Formula


Formula = Union[Top, Bottom, Eq, Le, Cong, Not, And, Or, Exists, Forall]
ATOMS = (Top, Bottom, Eq, Le, Cong)


def conj(*args: Formula) -> Formula:
    flat = []
    for a in args:
        flat.extend(a.args if isinstance(a, And) else (a,))
    if not flat:
        return Top()
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*args: Formula) -> Formula:
    flat = []
    for a in args:
        flat.extend(a.args if isinstance(a, Or) else (a,))
    if not flat:
        return Bottom()
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def exists(vars_: list[Var], body: Formula) -> Formula:
    for v in reversed(vars_):
        body = Exists(v, body)
    return body


def forall(vars_: list[Var], body: Formula) -> Formula:
    for v in reversed(vars_):
        body = Forall(v, body)
    return body


def power(t: Term, e: int) -> Term:
    if e < 1:
        raise ValueError("exponent must be >= 1")
    out = t
    for _ in range(e - 1):
        out = Mul(out, t, t.sort)
    return out


# --- traversal ------------------------------------------------------------------


def children(node) -> tuple:
    if isinstance(node, (Var, Lit, Const, Top, Bottom)):
        return ()
    if isinstance(node, (Neg, Ord, Ac)):
        return (node.arg,)
    if isinstance(node, Not):
        return (node.arg,)
    if isinstance(node, (And, Or)):
        return node.args
    if isinstance(node, (Exists, Forall)):
        return (node.body,)
    return (node.left, node.right)


def iter_nodes(node) -> Iterator:
    stack = [node]
    seen = set()
    while stack:
        cur = stack.pop()
        if id(cur) in seen:
            continue
        seen.add(id(cur))
        yield cur
        stack.extend(children(cur))


def free_vars(node, _cache: dict | None = None) -> frozenset[Var]:
    """Free variables; shared subterms are visited once via the id cache."""
    cache = {} if _cache is None else _cache
    key = id(node)
    if key in cache:
        return cache[key][1]
    if isinstance(node, Var):
        out = frozenset((node,))
    elif isinstance(node, (Exists, Forall)):
        out = free_vars(node.body, cache) - {node.var}
    else:
        out = frozenset().union(*(free_vars(c, cache) for c in children(node)))
    cache[key] = (node, out)  # keep node alive so ids stay unique
    return out


def has_quantifier(f) -> bool:
    return any(isinstance(n, (Exists, Forall)) for n in iter_nodes(f))


def quantifier_sorts(f) -> set[str]:
    return {n.var.sort for n in iter_nodes(f) if isinstance(n, (Exists, Forall))}


# --- printing ------------------------------------------------------------------

_PREC = {Add: 1, Sub: 1, Mul: 2, Neg: 3}


def show_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Lit):
        return str(t.value)
    if isinstance(t, Ord):
        return f"ord({show_term(t.arg)})"
    if isinstance(t, Ac):
        return f"ac({show_term(t.arg)})"
    if isinstance(t, Neg):
        # "-3" reads back as a literal, so a negated literal keeps its parentheses
        if isinstance(t.arg, Lit):
            return f"-({t.arg.value})"
        return f"-{_wrap(t.arg, 3, show_term(t.arg))}"
    op = {Add: "+", Sub: "-", Mul: "*"}[type(t)]
    p = _PREC[type(t)]
    left = _wrap(t.left, p, show_term(t.left))
    # right operand binds tighter for the left-associative - and *
    right = _wrap(t.right, p + 1, show_term(t.right))
    return f"{left} {op} {right}"


def _wrap(t, prec: int, s: str) -> str:
    tp = _PREC.get(type(t), 4)
    return f"({s})" if tp < prec else s


_FPREC = {Or: 1, And: 2, Not: 3}


def show(f: Formula) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Eq):
        return f"{show_term(f.left)} = {show_term(f.right)}"
    if isinstance(f, Le):
        return f"{show_term(f.left)} <= {show_term(f.right)}"
    if isinstance(f, Cong):
        return f"{show_term(f.left)} ~{f.modulus} {show_term(f.right)}"
    if isinstance(f, Not):
        return f"not {_fwrap(f.arg, 3)}"
    if isinstance(f, And):
        return " and ".join(_fwrap(a, 3) for a in f.args)
    if isinstance(f, Or):
        return " or ".join(_fwrap(a, 2) for a in f.args)
    q = "exists" if isinstance(f, Exists) else "forall"
    return f"{q} {f.var.name}:{f.var.sort}. {show(f.body)}"


def _fwrap(f: Formula, prec: int) -> str:
    s = show(f)
    if isinstance(f, (Exists, Forall)):
        return f"({s})"
    fp = _FPREC.get(type(f), 4)
    return f"({s})" if fp < prec else s


# --- transformations ------------------------------------------------------------


def nnf(f: Formula) -> Formula:
    """Negation normal form: negations only directly above atoms."""
    if isinstance(f, Not):
        g = f.arg
        if isinstance(g, Not):
            return nnf(g.arg)
        if isinstance(g, Top):
            return Bottom()
        if isinstance(g, Bottom):
            return Top()
        if isinstance(g, And):
            return disj(*(nnf(Not(a)) for a in g.args))
        if isinstance(g, Or):
            return conj(*(nnf(Not(a)) for a in g.args))
        if isinstance(g, Exists):
            return Forall(g.var, nnf(Not(g.body)))
        if isinstance(g, Forall):
            return Exists(g.var, nnf(Not(g.body)))
        return f
    if isinstance(f, And):
        return conj(*(nnf(a) for a in f.args))
    if isinstance(f, Or):
        return disj(*(nnf(a) for a in f.args))
    if isinstance(f, Exists):
        return Exists(f.var, nnf(f.body))
    if isinstance(f, Forall):
        return Forall(f.var, nnf(f.body))
    return f


def miniscope(f: Formula) -> Formula:
    """Pull conjuncts (disjuncts) not mentioning v out of exists v (forall v).

    ``exists v. A and B(v)`` becomes ``A and exists v. B(v)``, which is
    equivalent over a nonempty domain and lets nested existentials prune early.
    """
    if isinstance(f, Not):
        return Not(miniscope(f.arg))
    if isinstance(f, And):
        return conj(*(miniscope(a) for a in f.args))
    if isinstance(f, Or):
        return disj(*(miniscope(a) for a in f.args))
    if isinstance(f, (Exists, Forall)):
        body = miniscope(f.body)
        split = And if isinstance(f, Exists) else Or
        join = conj if isinstance(f, Exists) else disj
        parts = body.args if isinstance(body, split) else (body,)
        outside = [a for a in parts if f.var not in free_vars(a)]
        inside = [a for a in parts if f.var in free_vars(a)]
        if not inside:
            return join(*outside) if outside else body
        inner = type(f)(f.var, join(*inside))
        return join(*outside, inner) if outside else inner
    return f
