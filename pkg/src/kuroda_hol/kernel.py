"""Simple type theory: types, typed terms, substitution and beta-normalization.

Terms are named at the interface.  Variables are identified by their name
*and* their type, as in Church's formulation, so ``x:i`` and ``x:o`` are
different variables.  Alpha-equivalence is decided on a nameless key
(de Bruijn indices for bound variables) cached on each term.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Union


class KernelError(Exception):
    """Base class for errors raised by the term layer."""


class TypeMismatch(KernelError):
    pass


class UnboundVariable(KernelError):
    pass


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Iota:
    def __str__(self) -> str:
        return "i"


@dataclass(frozen=True)
class Omicron:
    def __str__(self) -> str:
        return "o"


@dataclass(frozen=True)
class Arrow:
    domain: "SimpleType"
    codomain: "SimpleType"

    def __str__(self) -> str:
        dom = f"({self.domain})" if isinstance(self.domain, Arrow) else str(self.domain)
        return f"{dom} -> {self.codomain}"


SimpleType = Union[Iota, Omicron, Arrow]

IOTA = Iota()
O = Omicron()


def arrow(*types: SimpleType) -> SimpleType:
    """Right-associated arrow: ``arrow(a, b, c)`` is ``a -> (b -> c)``."""
    result = types[-1]
    for ty in reversed(types[:-1]):
        result = Arrow(ty, result)
    return result


def is_type(ty: object) -> bool:
    return isinstance(ty, (Iota, Omicron, Arrow))


# ---------------------------------------------------------------------------
# Logical constants.  Quantifiers and equality are families indexed by a type;
# the index is recoverable from the constant's own type.

LOGICAL = frozenset({"top", "bot", "not", "imp", "and", "or", "forall", "exists", "eq"})

_PROP_BINOP = arrow(O, O, O)


def _logical_type_ok(name: str, ty: SimpleType) -> bool:
    if name in ("top", "bot"):
        return ty == O
    if name == "not":
        return ty == Arrow(O, O)
    if name in ("imp", "and", "or"):
        return ty == _PROP_BINOP
    if name in ("forall", "exists"):
        return (
            isinstance(ty, Arrow)
            and ty.codomain == O
            and isinstance(ty.domain, Arrow)
            and ty.domain.codomain == O
        )
    if name == "eq":
        return (
            isinstance(ty, Arrow)
            and isinstance(ty.codomain, Arrow)
            and ty.codomain.codomain == O
            and ty.domain == ty.codomain.domain
        )
    return False


# ---------------------------------------------------------------------------
# Terms

_EMPTY: frozenset = frozenset()


class Term:
    """Common behaviour of the four term forms.  Instances are immutable."""

    type: SimpleType

    @cached_property
    def key(self) -> tuple:
        """Nameless form: equal keys iff the terms are alpha-equivalent."""
        return _key_of(self, {}, 0)

    @cached_property
    def normal(self) -> "Term":
        return _normalize(self)

    def __str__(self) -> str:
        from .syntax import print_term

        return print_term(self)


@dataclass(frozen=True, eq=True)
class Var(Term):
    name: str
    type: SimpleType

    def __post_init__(self) -> None:
        if not is_type(self.type):
            raise TypeMismatch(f"variable {self.name} has no simple type: {self.type!r}")

    @cached_property
    def free_vars(self) -> frozenset:
        return frozenset((self,))


@dataclass(frozen=True, eq=True)
class Const(Term):
    name: str
    type: SimpleType

    def __post_init__(self) -> None:
        if not is_type(self.type):
            raise TypeMismatch(f"constant {self.name} has no simple type: {self.type!r}")
        if self.name in LOGICAL and not _logical_type_ok(self.name, self.type):
            raise TypeMismatch(f"logical constant {self.name} cannot have type {self.type}")

    @property
    def free_vars(self) -> frozenset:
        return _EMPTY

    @property
    def is_logical(self) -> bool:
        return self.name in LOGICAL

    @property
    def index_type(self) -> SimpleType:
        """The tau of forall/exists/eq at tau."""
        if self.name in ("forall", "exists"):
            return self.type.domain.domain
        if self.name == "eq":
            return self.type.domain
        raise TypeMismatch(f"{self.name} is not a type-indexed constant")


@dataclass(frozen=True, eq=True)
class Lam(Term):
    name: str
    var_type: SimpleType
    body: Term
    type: SimpleType = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not is_type(self.var_type):
            raise TypeMismatch(f"binder {self.name} has no simple type")
        object.__setattr__(self, "type", Arrow(self.var_type, self.body.type))

    @property
    def var(self) -> Var:
        return Var(self.name, self.var_type)

    @cached_property
    def free_vars(self) -> frozenset:
        fv = self.body.free_vars
        if not fv:
            return fv
        return fv - {self.var}


@dataclass(frozen=True, eq=True)
class App(Term):
    fun: Term
    arg: Term
    type: SimpleType = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        fty = self.fun.type
        if not isinstance(fty, Arrow):
            raise TypeMismatch(f"cannot apply a term of type {fty}")
        if fty.domain != self.arg.type:
            raise TypeMismatch(
                f"argument of type {self.arg.type} given to function expecting {fty.domain}"
            )
        object.__setattr__(self, "type", fty.codomain)

    @cached_property
    def free_vars(self) -> frozenset:
        a, b = self.fun.free_vars, self.arg.free_vars
        if not a:
            return b
        if not b:
            return a
        return a | b


Formula = Term


# ---------------------------------------------------------------------------
# Fresh names.  '%' never appears in parsed identifiers, so generated names
# cannot collide with user names.  Names read back from proof files are
# reserved so later generation skips them.

_fresh_lock = threading.Lock()
_fresh_next = 0


def base_name(name: str) -> str:
    return name.split("%", 1)[0] or "v"


def fresh_var(base: str, ty: SimpleType) -> Var:
    global _fresh_next
    with _fresh_lock:
        n = _fresh_next
        _fresh_next += 1
    return Var(f"{base_name(base)}%{n}", ty)


def reserve_fresh(name: str) -> None:
    """Make sure no later :func:`fresh_var` returns ``name``."""
    global _fresh_next
    _, sep, suffix = name.partition("%")
    if sep and suffix.isdigit():
        with _fresh_lock:
            _fresh_next = max(_fresh_next, int(suffix) + 1)


# ---------------------------------------------------------------------------
# Nameless keys


def _key_of(t: Term, env: dict, depth: int) -> tuple:
    if isinstance(t, Var):
        level = env.get(t)
        if level is not None:
            return ("b", depth - level - 1)
        return ("v", t.name, t.type)
    if isinstance(t, Const):
        return ("c", t.name, t.type)
    if isinstance(t, App):
        return ("a", _subkey(t.fun, env, depth), _subkey(t.arg, env, depth))
    # Lam
    v = t.var
    saved = env.get(v)
    env[v] = depth
    try:
        body = _subkey(t.body, env, depth + 1)
    finally:
        if saved is None:
            del env[v]
        else:
            env[v] = saved
    return ("l", t.var_type, body)


def _subkey(t: Term, env: dict, depth: int) -> tuple:
    if not env or t.free_vars.isdisjoint(env):
        return t.key
    return _key_of(t, env, depth)


def alpha_equiv(t: Term, u: Term) -> bool:
    return t is u or t.key == u.key


# ---------------------------------------------------------------------------
# Typing


def infer_type(t: Term, env: Mapping[str, SimpleType] | None = None) -> SimpleType:
    """Type of ``t``.  With ``env``, every free variable must be declared there."""
    if env is not None:
        for v in sorted(t.free_vars, key=lambda v: v.name):
            if v.name not in env:
                raise UnboundVariable(v.name)
            if env[v.name] != v.type:
                raise TypeMismatch(f"variable {v.name} declared {env[v.name]}, used at {v.type}")
    return t.type


# ---------------------------------------------------------------------------
# Substitution


def substitute(t: Term, x: Var, u: Term) -> Term:
    """Capture-avoiding ``t[x <- u]``."""
    if u.type != x.type:
        raise TypeMismatch(f"cannot substitute a term of type {u.type} for {x.name}:{x.type}")
    return _subst(t, x, u, u.free_vars)


def _subst(t: Term, x: Var, u: Term, ufv: frozenset) -> Term:
    if x not in t.free_vars:
        return t
    if isinstance(t, Var):
        return u
    if isinstance(t, App):
        return App(_subst(t.fun, x, u, ufv), _subst(t.arg, x, u, ufv))
    bv = t.var
    body = t.body
    if bv in ufv:
        renamed = fresh_var(bv.name, bv.type)
        body = _subst(body, bv, renamed, renamed.free_vars)
        bv = renamed
    return Lam(bv.name, bv.type, _subst(body, x, u, ufv))


def rename_free(t: Term, mapping: Mapping[Var, Term]) -> Term:
    """Apply several substitutions one after another (each must be capture-free)."""
    for x, u in mapping.items():
        t = substitute(t, x, u)
    return t


# ---------------------------------------------------------------------------
# Beta


def _normalize(t: Term) -> Term:
    if isinstance(t, (Var, Const)):
        return t
    if isinstance(t, Lam):
        body = t.body.normal
        return t if body is t.body else Lam(t.name, t.var_type, body)
    fun = t.fun.normal
    arg = t.arg.normal
    if isinstance(fun, Lam):
        return substitute(fun.body, fun.var, arg).normal
    if fun is t.fun and arg is t.arg:
        return t
    return App(fun, arg)


def beta_normalize(t: Term) -> Term:
    return t.normal


def is_beta_normal(t: Term) -> bool:
    if isinstance(t, (Var, Const)):
        return True
    if isinstance(t, Lam):
        return is_beta_normal(t.body)
    return not isinstance(t.fun, Lam) and is_beta_normal(t.fun) and is_beta_normal(t.arg)


def alpha_beta_equiv(t: Term, u: Term) -> bool:
    if t.type != u.type:
        raise TypeMismatch(f"comparing terms of types {t.type} and {u.type}")
    return alpha_equiv(t, u) or t.normal.key == u.normal.key


# ---------------------------------------------------------------------------
# Constructors for the logical vocabulary

TOP = Const("top", O)
BOT = Const("bot", O)
NOT = Const("not", Arrow(O, O))
IMP = Const("imp", _PROP_BINOP)
AND = Const("and", _PROP_BINOP)
OR = Const("or", _PROP_BINOP)


def forall_const(ty: SimpleType) -> Const:
    return Const("forall", Arrow(Arrow(ty, O), O))


def exists_const(ty: SimpleType) -> Const:
    return Const("exists", Arrow(Arrow(ty, O), O))


def eq_const(ty: SimpleType) -> Const:
    return Const("eq", arrow(ty, ty, O))


def app(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def lam(x: Var, body: Term) -> Lam:
    return Lam(x.name, x.type, body)


def neg(a: Term) -> Term:
    return App(NOT, a)


def dneg(a: Term) -> Term:
    return App(NOT, App(NOT, a))


def imp(a: Term, b: Term) -> Term:
    return App(App(IMP, a), b)


def conj(a: Term, b: Term) -> Term:
    return App(App(AND, a), b)


def disj(a: Term, b: Term) -> Term:
    return App(App(OR, a), b)


def iff(a: Term, b: Term) -> Term:
    """``A <=> B`` is sugar for ``(A => B) /\\ (B => A)``."""
    return conj(imp(a, b), imp(b, a))


def eq(a: Term, b: Term) -> Term:
    return App(App(eq_const(a.type), a), b)


def all_of(pred: Term) -> Term:
    """``forall P`` for a predicate ``P : tau -> o``."""
    if not isinstance(pred.type, Arrow):
        raise TypeMismatch(f"quantifying over a non-predicate of type {pred.type}")
    return App(forall_const(pred.type.domain), pred)


def ex_of(pred: Term) -> Term:
    if not isinstance(pred.type, Arrow):
        raise TypeMismatch(f"quantifying over a non-predicate of type {pred.type}")
    return App(exists_const(pred.type.domain), pred)


def forall(x: Var, body: Term) -> Term:
    return all_of(lam(x, body))


def exists(x: Var, body: Term) -> Term:
    return ex_of(lam(x, body))


# ---------------------------------------------------------------------------
# Inspection helpers


def strip_app(t: Term) -> tuple[Term, list[Term]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def is_const(t: Term, name: str) -> bool:
    return isinstance(t, Const) and t.name == name


def match_unary(t: Term, name: str) -> Term | None:
    """The argument of ``c a`` when the head constant is ``name``."""
    if isinstance(t, App) and is_const(t.fun, name):
        return t.arg
    return None


def match_binary(t: Term, name: str) -> tuple[Term, Term] | None:
    if isinstance(t, App) and isinstance(t.fun, App) and is_const(t.fun.fun, name):
        return t.fun.arg, t.arg
    return None


def match_neg(t: Term) -> Term | None:
    return match_unary(t, "not")


def match_imp(t: Term) -> tuple[Term, Term] | None:
    return match_binary(t, "imp")


def match_conj(t: Term) -> tuple[Term, Term] | None:
    return match_binary(t, "and")


def match_disj(t: Term) -> tuple[Term, Term] | None:
    return match_binary(t, "or")


def match_eq(t: Term) -> tuple[Term, Term] | None:
    return match_binary(t, "eq")


def match_forall(t: Term) -> Term | None:
    return match_unary(t, "forall")


def match_exists(t: Term) -> Term | None:
    return match_unary(t, "exists")


def constants(t: Term) -> set[Const]:
    out: set[Const] = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Const):
            out.add(s)
        elif isinstance(s, App):
            stack.append(s.fun)
            stack.append(s.arg)
        elif isinstance(s, Lam):
            stack.append(s.body)
    return out


def free_vars(*terms: Term) -> frozenset:
    out: frozenset = _EMPTY
    for t in terms:
        out = out | t.free_vars
    return out


def all_free_vars(terms: Iterable[Term]) -> frozenset:
    return free_vars(*terms)


def size(t: Term) -> int:
    if isinstance(t, App):
        return 1 + size(t.fun) + size(t.arg)
    if isinstance(t, Lam):
        return 1 + size(t.body)
    return 1
