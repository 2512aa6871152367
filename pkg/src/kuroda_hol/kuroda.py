"""The Kuroda map on higher-order terms: only the universal quantifier changes.

The inner map rewrites each occurrence of a universal quantifier constant
into ``\\p. forall x. ~~(p x)`` and is homomorphic on everything else.  The
redexes this creates are left in place: the substitution law
``(t[z <- w])_Ku = t_Ku[z <- w_Ku]`` is a syntactic identity and only holds
on the unreduced output.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .kernel import (
    O,
    App,
    Arrow,
    Const,
    Lam,
    SimpleType,
    Term,
    TypeMismatch,
    Var,
    app,
    dneg,
    forall_const,
    lam,
)


@lru_cache(maxsize=None)
def kuroda_forall(ty: SimpleType) -> Term:
    """The image of the quantifier constant at ``ty``."""
    p = Var("p", Arrow(ty, O))
    x = Var("x", ty)
    return lam(p, App(forall_const(ty), lam(x, dneg(app(p, x)))))


def kuroda_term(t: Term) -> Term:
    if isinstance(t, Var):
        return t
    if isinstance(t, Const):
        if t.name == "forall":
            return kuroda_forall(t.index_type)
        return t
    if isinstance(t, Lam):
        body = kuroda_term(t.body)
        return t if body is t.body else Lam(t.name, t.var_type, body)
    fun, arg = kuroda_term(t.fun), kuroda_term(t.arg)
    if fun is t.fun and arg is t.arg:
        return t
    return App(fun, arg)


def kuroda_formula(a: Term) -> Term:
    """``A^Ku = ~~A_Ku``."""
    if a.type != O:
        raise TypeMismatch(f"Kuroda's formula translation needs type o, got {a.type}")
    return dneg(kuroda_term(a))


def kuroda_context(gamma: Sequence[Term]) -> tuple[Term, ...]:
    for h in gamma:
        if h.type != O:
            raise TypeMismatch("context entries must be formulas")
    return tuple(kuroda_term(h) for h in gamma)


def kuroda_normalized(t: Term) -> Term:
    return kuroda_term(t).normal


@dataclass(frozen=True)
class TranslationResult:
    inner: Term
    outer: Term | None = None


def translate(t: Term) -> TranslationResult:
    inner = kuroda_term(t)
    outer = dneg(inner) if t.type == O else None
    return TranslationResult(inner, outer)
