"""Type and term syntax.

Types::

    T ::= X | I | B | T * T | T -o T | T & T | forall X. T | ( T )

``-o`` associates to the right and binds loosest; ``*`` and ``&`` bind
tighter than ``-o`` and associate to the left.

Terms::

    t ::= x | tt | ff | not | unit | \\x:T. t | \\x,y:T. t | t u | t * u
        | let x*y = t in u | <t,u> | fst t | snd t | /\\X. t | t {T} | ( t )
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class ParseError(Exception):
    def __init__(self, msg, line, col):
        super().__init__(f"{line}:{col}: {msg}")
        self.line, self.col = line, col


# -- type AST -------------------------------------------------------------

class Type:
    def free_vars(self) -> frozenset:
        raise NotImplementedError


@dataclass(frozen=True)
class TVar(Type):
    name: str

    def free_vars(self):
        return frozenset({self.name})

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class TUnit(Type):
    def free_vars(self):
        return frozenset()

    def __str__(self):
        return "I"


@dataclass(frozen=True)
class TBool(Type):
    def free_vars(self):
        return frozenset()

    def __str__(self):
        return "B"


@dataclass(frozen=True)
class TBin(Type):
    op: str  # "*", "-o", "&"
    left: Type
    right: Type

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class TForall(Type):
    var: str
    body: Type

    def free_vars(self):
        return self.body.free_vars() - {self.var}

    def __str__(self):
        return f"(forall {self.var}. {self.body})"


def show_type(t: Type) -> str:
    """``str`` without the outermost parentheses."""
    s = str(t)
    return s[1:-1] if isinstance(t, (TBin, TForall)) else s


def Tensor(a, b):
    return TBin("*", a, b)


def Lolli(a, b):
    return TBin("-o", a, b)


def With(a, b):
    return TBin("&", a, b)


def subst_type(t: Type, var: str, by: Type) -> Type:
    if isinstance(t, TVar):
        return by if t.name == var else t
    if isinstance(t, TBin):
        return TBin(t.op, subst_type(t.left, var, by), subst_type(t.right, var, by))
    if isinstance(t, TForall):
        if t.var == var:
            return t
        if t.var in by.free_vars():
            fresh = t.var + "'"
            while fresh in by.free_vars() or fresh in t.body.free_vars():
                fresh += "'"
            body = subst_type(t.body, t.var, TVar(fresh))
            return TForall(fresh, subst_type(body, var, by))
        return TForall(t.var, subst_type(t.body, var, by))
    return t


def alpha_eq(a: Type, b: Type, env=None) -> bool:
    # env: bound-variable correspondence in both directions
    fwd, bwd = env or ({}, {})
    if isinstance(a, TVar) and isinstance(b, TVar):
        if a.name in fwd or b.name in bwd:
            return fwd.get(a.name) == b.name and bwd.get(b.name) == a.name
        return a.name == b.name
    if isinstance(a, TBin) and isinstance(b, TBin):
        return (a.op == b.op and alpha_eq(a.left, b.left, (fwd, bwd))
                and alpha_eq(a.right, b.right, (fwd, bwd)))
    if isinstance(a, TForall) and isinstance(b, TForall):
        return alpha_eq(a.body, b.body, ({**fwd, a.var: b.var}, {**bwd, b.var: a.var}))
    return type(a) is type(b) and not isinstance(a, (TVar, TBin, TForall))


def occurrences(t: Type, var: str, path=()):
    """Paths (L/R tags) of the occurrences of ``var`` in ``t``, in order."""
    if isinstance(t, TVar):
        return [path] if t.name == var else []
    if isinstance(t, TBin):
        return occurrences(t.left, var, path + ("L",)) + occurrences(t.right, var, path + ("R",))
    return []


def occurrence_polarity(t: Type, path) -> int:
    """+1 for a positive occurrence, -1 for a negative one."""
    sign = 1
    for tag in path:
        if isinstance(t, TBin):
            if t.op == "-o" and tag == "L":
                sign = -sign
            t = t.left if tag == "L" else t.right
    return sign


# -- term AST -------------------------------------------------------------

class Term:
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Const(Term):
    name: str  # tt, ff, not, unit


@dataclass(frozen=True)
class Lam(Term):
    var: str
    ty: Type
    body: Term


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Pair(Term):  # tensor pair t * u
    left: Term
    right: Term


@dataclass(frozen=True)
class LetPair(Term):
    x: str
    y: str
    bound: Term
    body: Term


@dataclass(frozen=True)
class WithPair(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Proj(Term):
    which: str  # fst | snd
    arg: Term


@dataclass(frozen=True)
class TLam(Term):
    var: str
    body: Term


@dataclass(frozen=True)
class TApp(Term):
    fn: Term
    ty: Type


# -- lexer ----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<sym>-o|/\\|\\|[().,:*&<>{}=])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

KEYWORDS = {"forall", "let", "in", "fst", "snd"}


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src: str) -> list:
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col)
        text = m.group()
        if m.lastgroup != "ws":
            out.append(Tok(m.lastgroup, text, line, col))
        for ch in text:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    out.append(Tok("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, src):
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg):
        t = self.tok
        raise ParseError(msg + (f", found {t.text!r}" if t.text else ", found end of input"), t.line, t.col)

    def at(self, text):
        return self.tok.text == text and self.tok.kind != "eof"

    def eat(self, text):
        if not self.at(text):
            self.error(f"expected {text!r}")
        self.i += 1

    def ident(self):
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.error("expected an identifier")
        self.i += 1
        return t.text

    def done(self):
        if self.tok.kind != "eof":
            self.error("trailing input")

    # types
    def type_(self):
        if self.at("forall"):
            self.i += 1
            v = self.ident()
            self.eat(".")
            return TForall(v, self.type_())
        left = self.type_product()
        if self.at("-o"):
            self.i += 1
            return Lolli(left, self.type_())
        return left

    def type_product(self):
        t = self.type_atom()
        while self.at("*") or self.at("&"):
            op = self.tok.text
            self.i += 1
            t = TBin(op, t, self.type_atom())
        return t

    def type_atom(self):
        if self.at("("):
            self.i += 1
            t = self.type_()
            self.eat(")")
            return t
        if self.at("forall"):
            return self.type_()
        name = self.ident()
        if name == "I":
            return TUnit()
        if name == "B":
            return TBool()
        return TVar(name)

    # terms
    def term(self):
        if self.at("\\"):
            self.i += 1
            names = [self.ident()]
            while self.at(","):
                self.i += 1
                names.append(self.ident())
            self.eat(":")
            ty = self.type_()
            self.eat(".")
            body = self.term()
            for n in reversed(names):
                body = Lam(n, ty, body)
            return body
        if self.at("/\\"):
            self.i += 1
            v = self.ident()
            self.eat(".")
            return TLam(v, self.term())
        if self.at("let"):
            self.i += 1
            x = self.ident()
            self.eat("*")
            y = self.ident()
            self.eat("=")
            bound = self.term()
            self.eat("in")
            return LetPair(x, y, bound, self.term())
        t = self.term_app()
        if self.at("*"):
            self.i += 1
            return Pair(t, self.term())
        return t

    def term_app(self):
        t = self.term_atom()
        while True:
            if self.at("{"):
                self.i += 1
                ty = self.type_()
                self.eat("}")
                t = TApp(t, ty)
            elif self._starts_atom():
                t = App(t, self.term_atom())
            else:
                return t

    def _starts_atom(self):
        tk = self.tok
        if tk.kind == "ident":
            return tk.text not in {"in"}
        return tk.text in {"(", "<", "\\", "/\\"} and tk.kind != "eof"

    def term_atom(self):
        if self.at("("):
            self.i += 1
            t = self.term()
            self.eat(")")
            return t
        if self.at("<"):
            self.i += 1
            a = self.term()
            self.eat(",")
            b = self.term()
            self.eat(">")
            return WithPair(a, b)
        if self.at("\\") or self.at("/\\"):
            return self.term()
        if self.at("fst") or self.at("snd"):
            which = self.tok.text
            self.i += 1
            return Proj(which, self.term_atom())
        if self.at("let"):
            return self.term()
        name = self.ident()
        if name in {"tt", "ff", "not", "unit"}:
            return Const(name)
        return Var(name)


def parse_type(src: str) -> Type:
    p = _Parser(src)
    t = p.type_()
    p.done()
    return t


def parse_term(src: str) -> Term:
    p = _Parser(src)
    t = p.term()
    p.done()
    return t
