r"""ASCII concrete syntax for types and terms.

Types: ``i``, ``o``, ``a -> b`` (right associative).

Terms, loosest to tightest::

    A <=> B        sugar for (A => B) /\ (B => A)
    A => B         right associative
    A \/ B
    A /\ B
    ~A
    t = u
    f a b          application
    atoms          names, top, bot, (t), and the bare constants
                   not, imp, and, or, forall[T], exists[T], eq[T]

Binders ``\x:T. t``, ``forall x:T. A`` and ``exists x:T. A`` extend as far
to the right as possible.
"""

from __future__ import annotations

import re
from typing import Mapping

from .kernel import (
    AND,
    BOT,
    IMP,
    IOTA,
    NOT,
    O,
    OR,
    TOP,
    App,
    Arrow,
    Const,
    KernelError,
    Lam,
    SimpleType,
    Term,
    TypeMismatch,
    Var,
    app,
    conj,
    constants,
    disj,
    eq,
    eq_const,
    exists_const,
    forall_const,
    iff,
    imp,
    substitute,
)


class ParseError(KernelError):
    def __init__(self, message: str, position: int = 0, expected: tuple[str, ...] = ()) -> None:
        detail = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at position {position}{detail}")
        self.position = position
        self.expected = expected


class UnknownConstant(ParseError):
    pass


KEYWORDS = frozenset({"forall", "exists", "top", "bot", "not", "imp", "and", "or", "eq"})

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_TOKEN = re.compile(
    r"\s*(?:(?P<sym><=>|=>|->|/\\|\\/|\\|[.:()\[\]=~])|(?P<id>[A-Za-z_][A-Za-z0-9_']*))"
)


def is_identifier(name: str) -> bool:
    return bool(_IDENT.fullmatch(name)) and name not in KEYWORDS


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.group("sym") or m.group("id"), m.start(m.lastindex)))
        pos = m.end()
    tokens.append(("<eof>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, signature: Mapping[str, SimpleType],
                 variables: Mapping[str, SimpleType]) -> None:
        self.tokens = _tokenize(text)
        self.i = 0
        self.signature = signature
        self.variables = variables
        self.scope: list[Var] = []

    # token helpers
    @property
    def peek(self) -> str:
        return self.tokens[self.i][0]

    @property
    def pos(self) -> int:
        return self.tokens[self.i][1]

    def advance(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.peek != tok:
            raise ParseError(f"unexpected {self.peek!r}", self.pos, (repr(tok),))
        self.advance()

    def ident(self) -> str:
        tok = self.peek
        if not is_identifier(tok):
            raise ParseError(f"unexpected {tok!r}", self.pos, ("identifier",))
        self.advance()
        return tok

    def finish(self) -> None:
        if self.peek != "<eof>":
            raise ParseError(f"unexpected {self.peek!r}", self.pos, ("end of input",))

    # types
    def type_(self) -> SimpleType:
        left = self.type_atom()
        if self.peek == "->":
            self.advance()
            return Arrow(left, self.type_())
        return left

    def type_atom(self) -> SimpleType:
        tok = self.peek
        if tok == "i":
            self.advance()
            return IOTA
        if tok == "o":
            self.advance()
            return O
        if tok == "(":
            self.advance()
            ty = self.type_()
            self.expect(")")
            return ty
        raise ParseError(f"unexpected {tok!r}", self.pos, ("'i'", "'o'", "'('"))

    # terms
    def term(self) -> Term:
        left = self.imp_expr()
        if self.peek == "<=>":
            self.advance()
            return self._binop(iff, left, self.term())
        return left

    def _binop(self, build, a: Term, b: Term) -> Term:
        if a.type != O or b.type != O:
            raise TypeMismatch("connectives take formulas")
        return build(a, b)

    def imp_expr(self) -> Term:
        left = self.or_expr()
        if self.peek == "=>":
            self.advance()
            return self._binop(imp, left, self.imp_expr())
        return left

    def or_expr(self) -> Term:
        left = self.and_expr()
        if self.peek == "\\/":
            self.advance()
            return self._binop(disj, left, self.or_expr())
        return left

    def and_expr(self) -> Term:
        left = self.not_expr()
        if self.peek == "/\\":
            self.advance()
            return self._binop(conj, left, self.and_expr())
        return left

    def not_expr(self) -> Term:
        if self.peek == "~":
            self.advance()
            body = self.not_expr()
            return App(NOT, body)
        return self.eq_expr()

    def eq_expr(self) -> Term:
        left = self.app_expr()
        if self.peek == "=":
            self.advance()
            right = self.app_expr()
            if left.type != right.type:
                raise TypeMismatch(f"equation between {left.type} and {right.type}")
            return eq(left, right)
        return left

    _ATOM_START = ("(", "top", "bot", "not", "imp", "and", "or", "eq")

    def _starts_atom(self) -> bool:
        tok = self.peek
        if tok in self._ATOM_START:
            return True
        if tok in ("forall", "exists"):
            return True
        if tok == "\\":
            return True
        return is_identifier(tok)

    def _at_binder(self) -> bool:
        tok = self.peek
        return tok == "\\" or (tok in ("forall", "exists") and self.tokens[self.i + 1][0] != "[")

    def app_expr(self) -> Term:
        if not self._starts_atom():
            raise ParseError(f"unexpected {self.peek!r}", self.pos, ("term",))
        if self._at_binder():
            return self.binder()
        head = self.atom()
        while self._starts_atom():
            if self._at_binder():
                return app(head, self.binder())
            head = app(head, self.atom())
        return head

    def binder(self) -> Term:
        kind = self.advance()
        name = self.ident()
        self.expect(":")
        ty = self.type_()
        self.expect(".")
        v = Var(name, ty)
        self.scope.append(v)
        try:
            body = self.term()
        finally:
            self.scope.pop()
        fn = Lam(name, ty, body)
        if kind == "\\":
            return fn
        if body.type != O:
            raise TypeMismatch("quantifier body must be a formula")
        return App((forall_const if kind == "forall" else exists_const)(ty), fn)

    def atom(self) -> Term:
        tok = self.peek
        start = self.pos
        if tok == "(":
            self.advance()
            t = self.term()
            self.expect(")")
            return t
        simple = {"top": TOP, "bot": BOT, "not": NOT, "imp": IMP, "and": AND, "or": OR}
        if tok in simple:
            self.advance()
            return simple[tok]
        if tok in ("forall", "exists", "eq"):
            self.advance()
            self.expect("[")
            ty = self.type_()
            self.expect("]")
            return {"forall": forall_const, "exists": exists_const, "eq": eq_const}[tok](ty)
        name = self.ident()
        for v in reversed(self.scope):
            if v.name == name:
                return v
        if name in self.variables:
            return Var(name, self.variables[name])
        if name in self.signature:
            return Const(name, self.signature[name])
        raise UnknownConstant(f"unknown name {name!r}", start)


def parse_type(text: str) -> SimpleType:
    p = _Parser(text, {}, {})
    ty = p.type_()
    p.finish()
    return ty


def parse_term(text: str, signature: Mapping[str, SimpleType] | None = None,
               variables: Mapping[str, SimpleType] | None = None) -> Term:
    """Parse ``text``; names resolve to bound variables, then ``variables``,
    then the constants of ``signature``."""
    p = _Parser(text, signature or {}, variables or {})
    t = p.term()
    p.finish()
    return t


def parse_formula(text: str, signature: Mapping[str, SimpleType] | None = None,
                  variables: Mapping[str, SimpleType] | None = None) -> Term:
    t = parse_term(text, signature, variables)
    if t.type != O:
        raise TypeMismatch(f"expected a formula, got a term of type {t.type}")
    return t


def parse_signature(text: str) -> dict[str, SimpleType]:
    """One ``name : type`` declaration per line; ``#`` starts a comment."""
    sig: dict[str, SimpleType] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, ty = line.partition(":")
        name = name.strip()
        if not sep or not is_identifier(name):
            raise ParseError(f"bad declaration on line {lineno}", 0, ("name : type",))
        sig[name] = parse_type(ty)
    return sig


# ---------------------------------------------------------------------------
# Printing

_IFF, _IMP, _OR, _AND, _NOT, _EQ, _APP, _ATOM = range(8)
_BINDER = -1  # open to the right: needs no parentheses in final position
_INFIX = {"imp": ("=>", _IMP), "or": ("\\/", _OR), "and": ("/\\", _AND)}


def format_type(ty: SimpleType) -> str:
    return str(ty)


def print_term(t: Term) -> str:
    return _Printer().show(t, _IFF, True)


class _Printer:
    def show(self, t: Term, prec: int, last: bool) -> str:
        text, level = self._render(t, last)
        if level == _BINDER:
            return text
        if level < prec:
            return f"({self._render(t, True)[0]})"
        return text

    def _binder_text(self, kw: str, fn: Lam, last: bool) -> tuple[str, int]:
        v = fn.var
        body = fn.body
        clash = any(w.name == v.name and w != v for w in body.free_vars) or any(
            c.name == v.name for c in _consts(body)
        )
        if not is_identifier(v.name) or clash:
            taken = {w.name for w in body.free_vars} | {c.name for c in _consts(body)}
            new = _clean_name(v.name, taken)
            nv = Var(new, v.type)
            body = substitute(body, v, nv)
            v = nv
        text = f"{kw}{v.name}:{format_type(v.type)}. {self.show(body, _IFF, True)}"
        if not last:
            return f"({text})", _ATOM
        return text, _BINDER

    def _render(self, t: Term, last: bool) -> tuple[str, int]:
        if isinstance(t, Var):
            return t.name, _ATOM
        if isinstance(t, Const):
            if t.name in ("forall", "exists", "eq"):
                return f"{t.name}[{format_type(t.index_type)}]", _ATOM
            return t.name, _ATOM
        if isinstance(t, Lam):
            return self._binder_text("\\", t, last)
        fun, arg = t.fun, t.arg
        if isinstance(fun, Const):
            if fun.name == "not":
                inner, level = self._render(arg, last)
                if level == _ATOM or (isinstance(arg, App) and arg.fun == NOT):
                    return "~" + inner, _NOT
                return f"~({self._render(arg, True)[0]})", _NOT
            if fun.name in ("forall", "exists") and isinstance(arg, Lam):
                return self._binder_text(fun.name + " ", arg, last)
        if isinstance(fun, App) and isinstance(fun.fun, Const):
            op = fun.fun.name
            left, right = fun.arg, arg
            if op in _INFIX:
                sym, level = _INFIX[op]
                return (
                    f"{self.show(left, level + 1, False)} {sym} {self.show(right, level, last)}",
                    level,
                )
            if op == "eq":
                return (
                    f"{self.show(left, _APP, False)} = {self.show(right, _APP, last)}",
                    _EQ,
                )
        return f"{self.show(fun, _APP, False)} {self.show(arg, _ATOM, last)}", _APP


def _consts(t: Term):
    return constants(t)


def _clean_name(name: str, taken: set[str]) -> str:
    base = re.sub(r"[^A-Za-z0-9_']", "", name.split("%", 1)[0]) or "v"
    if not base[0].isalpha() and base[0] != "_":
        base = "v" + base
    if base in KEYWORDS:
        base = base + "_"
    candidate = base
    n = 0
    while candidate in taken or candidate in KEYWORDS:
        n += 1
        candidate = f"{base}{n}"
    return candidate
