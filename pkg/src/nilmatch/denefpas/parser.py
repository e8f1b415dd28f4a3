"""Surface syntax for Denef-Pas formulas.

Grammar (EBNF)::

    formula  = quant | disj ;
    quant    = ("exists" | "forall") binder { "," binder } "." formula ;
    binder   = IDENT ":" ("VF" | "RF" | "Z") ;
    disj     = conj { "or" conj } ;
    conj     = unary { "and" unary } ;
    unary    = "not" unary | quant | "true" | "false" | atom | "(" formula ")" ;
    atom     = term rel term ;
    rel      = "=" | "!=" | "<=" | "<" | ">=" | ">" | "~" INT ;
    term     = prod { ("+" | "-") prod } ;
    prod     = neg { "*" neg } ;
    neg      = "-" INT | "-" neg | pow ;
    pow      = primary [ "^" INT ] ;
    primary  = INT | IDENT | "ord" "(" term ")" | "ac" "(" term ")" | "(" term ")" ;

``d1, d2, ...`` are the coset constants.  ``x^3`` abbreviates ``x * x * x``.
Free variables get their sort from context (``ac(x)`` makes x a VF variable);
anything still undetermined defaults to VF.  The symbols ``∃ ∀ ∧ ∨ ¬ ≤`` are
accepted as synonyms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import DPSyntaxError, SortError
from .syntax import (
    RF,
    SORTS,
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
    power,
)

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<cong>~\s*\d+)"
    r"|(?P<op><=|>=|!=|[=<>+\-*^().,:]|[∃∀∧∨¬≤≥≠]))"
)
_SYNONYM = {"∃": "exists", "∀": "forall", "∧": "and", "∨": "or", "¬": "not", "≤": "<=", "≥": ">=", "≠": "!="}
_KEYWORDS = {"exists", "forall", "and", "or", "not", "true", "false", "ord", "ac"}
_CONST = re.compile(r"d([1-9]\d*)$")


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    toks, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise DPSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos, text)
        start = m.start(m.lastgroup)
        kind, val = m.lastgroup, m.group(m.lastgroup)
        if kind == "op" and val in _SYNONYM:
            val = _SYNONYM[val]
            kind = "ident" if val.isalpha() else "op"
        if kind == "cong":
            val = val.replace(" ", "")
        toks.append(_Tok(kind, val, start))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


# raw (untyped) trees: ("var", name) ("lit", n) ("const", i) ("add"/"sub"/"mul", l, r)
# ("neg", t) ("ord", t) ("ac", t); formulas ("eq"/"le"/"cong"...)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str):
        raise DPSyntaxError(msg, self.cur.pos, self.text)

    def accept(self, text: str) -> bool:
        if self.cur.text == text and self.cur.kind in ("op", "ident"):
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.error(f"expected {text!r}, found {self.cur.text or 'end of input'!r}")

    def parse(self):
        f = self.formula()
        if self.cur.kind != "eof":
            self.error(f"unexpected {self.cur.text!r}")
        return f

    def formula(self):
        if self.cur.text in ("exists", "forall") and self.cur.kind == "ident":
            return self.quant()
        return self.disj()

    def quant(self):
        q = self.cur.text
        self.i += 1
        binders = [self.binder()]
        while self.accept(","):
            binders.append(self.binder())
        self.expect(".")
        body = self.formula()
        for name, sort in reversed(binders):
            body = (q, name, sort, body)
        return body

    def binder(self):
        if self.cur.kind != "ident" or self.cur.text in _KEYWORDS:
            self.error("expected a variable name")
        name = self.cur.text
        if _CONST.match(name):
            self.error(f"{name} is a constant symbol and cannot be bound")
        self.i += 1
        self.expect(":")
        sort = self.cur.text
        if sort not in SORTS:
            self.error(f"unknown sort {sort!r}")
        self.i += 1
        return name, sort

    def disj(self):
        items = [self.conj()]
        while self.accept("or"):
            items.append(self.conj())
        return items[0] if len(items) == 1 else ("or", tuple(items))

    def conj(self):
        items = [self.unary()]
        while self.accept("and"):
            items.append(self.unary())
        return items[0] if len(items) == 1 else ("and", tuple(items))

    def unary(self):
        if self.accept("not"):
            return ("not", self.unary())
        if self.cur.kind == "ident" and self.cur.text in ("exists", "forall"):
            return self.quant()
        if self.accept("true"):
            return ("true",)
        if self.accept("false"):
            return ("false",)
        if self.cur.text == "(":
            save = self.i
            try:
                return self.atom()
            except DPSyntaxError:
                self.i = save
            self.expect("(")
            f = self.formula()
            self.expect(")")
            return f
        return self.atom()

    def atom(self):
        left = self.term()
        tok = self.cur
        if tok.kind == "cong":
            self.i += 1
            d = int(tok.text[1:])
            if d < 2:
                self.error("congruence modulus must be >= 2")
            return ("cong", left, self.term(), d)
        if tok.kind == "op" and tok.text in ("=", "!=", "<=", "<", ">=", ">"):
            self.i += 1
            return (tok.text, left, self.term())
        self.error(f"expected a relation, found {tok.text or 'end of input'!r}")

    def term(self):
        left = self.prod()
        while self.cur.kind == "op" and self.cur.text in "+-":
            op = "add" if self.cur.text == "+" else "sub"
            self.i += 1
            left = (op, left, self.prod())
        return left

    def prod(self):
        left = self.neg()
        while self.accept("*"):
            left = ("mul", left, self.neg())
        return left

    def neg(self):
        if self.accept("-"):
            if self.cur.kind == "int":
                v = int(self.cur.text)
                self.i += 1
                return self.pow_suffix(("lit", -v))
            return ("neg", self.neg())
        return self.pow_suffix(self.primary())

    def pow_suffix(self, base):
        if self.accept("^"):
            if self.cur.kind != "int":
                self.error("exponent must be an integer literal")
            e = int(self.cur.text)
            if e < 1:
                self.error("exponent must be >= 1")
            self.i += 1
            return ("pow", base, e)
        return base

    def primary(self):
        tok = self.cur
        if tok.kind == "int":
            self.i += 1
            return ("lit", int(tok.text))
        if tok.kind == "ident" and tok.text in ("ord", "ac"):
            self.i += 1
            self.expect("(")
            t = self.term()
            self.expect(")")
            return (tok.text, t)
        if tok.kind == "ident" and tok.text not in _KEYWORDS:
            self.i += 1
            m = _CONST.match(tok.text)
            return ("const", int(m.group(1))) if m else ("var", tok.text)
        if self.accept("("):
            t = self.term()
            self.expect(")")
            return t
        self.error(f"expected a term, found {tok.text or 'end of input'!r}")


# --- sort elaboration ------------------------------------------------------------


def _show_raw(t) -> str:
    tag = t[0]
    if tag == "var":
        return t[1]
    if tag == "lit":
        return str(t[1])
    if tag == "const":
        return f"d{t[1]}"
    if tag in ("ord", "ac"):
        return f"{tag}({_show_raw(t[1])})"
    if tag == "neg":
        return f"-{_show_raw(t[1])}"
    if tag == "pow":
        return f"{_show_raw(t[1])}^{t[2]}"
    op = {"add": "+", "sub": "-", "mul": "*"}[tag]
    return f"({_show_raw(t[1])} {op} {_show_raw(t[2])})"


class _Elaborator:
    def __init__(self, free: dict[str, str]):
        self.free = dict(free)
        self.changed = False

    def sort_of(self, t, env) -> str | None:
        tag = t[0]
        if tag == "var":
            return env.get(t[1], self.free.get(t[1]))
        if tag == "const":
            return VF
        if tag == "ord":
            return Z
        if tag == "ac":
            return RF
        if tag == "lit":
            return None
        if tag in ("neg", "pow"):
            return self.sort_of(t[1], env)
        return self.sort_of(t[1], env) or self.sort_of(t[2], env)

    def term(self, t, sort: str, env):
        tag = t[0]
        if tag == "var":
            name = t[1]
            have = env.get(name)
            if have is None:
                have = self.free.get(name)
                if have is None:
                    self.free[name] = have = sort
                    self.changed = True
            if have != sort:
                raise SortError(f"variable {name} has sort {have}, used as {sort}")
            return Var(name, sort)
        if tag == "lit":
            return Lit(t[1], sort)
        if tag == "const":
            if sort != VF:
                raise SortError(f"constant d{t[1]} is VF, used as {sort}")
            return Const(t[1])
        if tag == "ord":
            if sort != Z:
                raise SortError(f"{_show_raw(t)} has sort Z, used as {sort}")
            return Ord(self.term(t[1], VF, env))
        if tag == "ac":
            if sort != RF:
                raise SortError(f"{_show_raw(t)} has sort RF, used as {sort}")
            return Ac(self.term(t[1], VF, env))
        if tag == "neg":
            return Neg(self.term(t[1], sort, env), sort)
        if tag in ("mul", "pow") and sort == Z:
            raise SortError(f"no multiplication in the Z sort: {_show_raw(t)}")
        if tag == "pow":
            return power(self.term(t[1], sort, env), t[2])
        cls = {"add": Add, "sub": Sub, "mul": Mul}[tag]
        return cls(self.term(t[1], sort, env), self.term(t[2], sort, env), sort)

    def formula(self, f, env, final: bool):
        tag = f[0]
        if tag == "true":
            return Top()
        if tag == "false":
            return Bottom()
        if tag == "not":
            return Not(self.formula(f[1], env, final))
        if tag in ("and", "or"):
            cls = And if tag == "and" else Or
            return cls(tuple(self.formula(a, env, final) for a in f[1]))
        if tag in ("exists", "forall"):
            _, name, sort, body = f
            inner = dict(env)
            inner[name] = sort
            cls = Exists if tag == "exists" else Forall
            return cls(Var(name, sort), self.formula(body, inner, final))
        if tag == "cong":
            _, l, r, d = f
            return Cong(self.term(l, Z, env), self.term(r, Z, env), d)
        _, l, r = f
        if tag in ("<=", "<", ">=", ">"):
            a, b = self.term(l, Z, env), self.term(r, Z, env)
            one = Lit(1, Z)
            return {
                "<=": lambda: Le(a, b),
                "<": lambda: Le(Add(a, one, Z), b),
                ">=": lambda: Le(b, a),
                ">": lambda: Le(Add(b, one, Z), a),
            }[tag]()
        sort = self.sort_of(l, env) or self.sort_of(r, env)
        if sort is None:
            if not final:
                return None
            sort = VF
        eq = Eq(self.term(l, sort, env), self.term(r, sort, env))
        return Not(eq) if tag == "!=" else eq


def parse(text: str, sorts: dict[str, str] | None = None):
    """Parse and sort-check a formula.  ``sorts`` pins the sorts of free variables."""
    raw = _Parser(text).parse()
    el = _Elaborator(sorts or {})
    # propagate sorts through atoms until nothing changes, then default to VF
    for _ in range(100):
        el.changed = False
        el.formula(raw, {}, final=False)
        if not el.changed:
            break
    return el.formula(raw, {}, final=True)


def parse_term(text: str, sort: str, sorts: dict[str, str] | None = None):
    p = _Parser(text)
    raw = p.term()
    if p.cur.kind != "eof":
        p.error(f"unexpected {p.cur.text!r}")
    return _Elaborator(sorts or {}).term(raw, sort, {})
