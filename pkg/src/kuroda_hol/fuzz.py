"""Random terms, formulas and derivations for property tests.

Depth counts generator steps: a connective, quantifier, equation,
abstraction or application is one level regardless of how many ``App``
nodes encode it.
"""

from __future__ import annotations

import random
from typing import Sequence

from .deduction import (
    EPS,
    Derivation,
    ExtFlags,
    Rule,
    all_e,
    all_i,
    and_el,
    and_er,
    and_i,
    bot_e,
    conv,
    eq_e,
    eq_i,
    ex_e,
    ex_i,
    funext,
    hyp,
    imp_e,
    imp_i,
    not_e,
    not_i,
    or_e,
    or_il,
    or_ir,
    pem,
    prop_ext,
    top_i,
    weaken_to,
)
from .kernel import (
    BOT,
    IOTA,
    NOT,
    O,
    TOP,
    App,
    Arrow,
    Const,
    Lam,
    SimpleType,
    Term,
    Var,
    app,
    conj,
    disj,
    eq,
    exists,
    exists_const,
    forall,
    forall_const,
    fresh_var,
    imp,
    lam,
    match_disj,
    match_eq,
    match_exists,
    match_forall,
    neg,
    substitute,
)
from .lemmas import dn_equiv, iff_refl

PRED = Arrow(IOTA, O)
UNARY = Arrow(O, O)

SIGNATURE: dict[str, SimpleType] = {
    "c": IOTA,
    "d": IOTA,
    "A": O,
    "B": O,
    "P": PRED,
    "N": UNARY,
}

ARG_TYPES: tuple[SimpleType, ...] = (IOTA, O, PRED)


def _constants(signature) -> list[Const]:
    return [Const(n, ty) for n, ty in signature.items()]


class TermGen:
    """Well-typed random terms over a signature.

    ``scope`` holds variables that may occur free; binders introduced by the
    generator are added while their bodies are built.
    """

    def __init__(self, rng: random.Random, signature=None, redex_rate: float = 0.15) -> None:
        self.rng = rng
        self.consts = _constants(SIGNATURE if signature is None else signature)
        self.redex_rate = redex_rate

    def atoms(self, ty: SimpleType, scope: Sequence[Var]) -> list[Term]:
        out: list[Term] = [v for v in scope if v.type == ty]
        out += [c for c in self.consts if c.type == ty]
        if ty == O:
            out += [TOP, BOT]
        elif ty == UNARY:
            out.append(NOT)
        elif isinstance(ty, Arrow) and ty.codomain == O and isinstance(ty.domain, Arrow) \
                and ty.domain.codomain == O:
            out += [forall_const(ty.domain.domain), exists_const(ty.domain.domain)]
        return out

    def term(self, ty: SimpleType, depth: int, scope: Sequence[Var] = ()) -> Term:
        rng = self.rng
        scope = list(scope)
        atoms = self.atoms(ty, scope)
        if depth <= 0 or (atoms and rng.random() < 0.25):
            if atoms:
                return rng.choice(atoms)
            return self._lam(ty, 0, scope)
        if rng.random() < self.redex_rate:
            arg_ty = rng.choice(ARG_TYPES)
            x = self._binder(arg_ty, scope)
            body = self.term(ty, depth - 1, scope + [x])
            return App(lam(x, body), self.term(arg_ty, depth - 1, scope))
        if ty == O:
            return self.formula_step(depth, scope)
        if isinstance(ty, Arrow) and rng.random() < 0.6:
            return self._lam(ty, depth - 1, scope)
        return self._app(ty, depth, scope)

    def _binder(self, ty: SimpleType, scope: Sequence[Var]) -> Var:
        names = "xyzuvw"
        name = self.rng.choice(names)
        return Var(name, ty)

    def _lam(self, ty: Arrow, depth: int, scope: list[Var]) -> Term:
        x = self._binder(ty.domain, scope)
        inner = [v for v in scope if v.name != x.name] + [x]
        return lam(x, self.term(ty.codomain, depth, inner))

    def _app(self, ty: SimpleType, depth: int, scope: list[Var]) -> Term:
        arg_ty = self.rng.choice(ARG_TYPES)
        fun = self.term(Arrow(arg_ty, ty), depth - 1, scope)
        return App(fun, self.term(arg_ty, depth - 1, scope))

    def formula_step(self, depth: int, scope: list[Var]) -> Term:
        rng = self.rng
        f = lambda: self.term(O, depth - 1, scope)  # noqa: E731
        k = rng.randrange(9)
        if k == 0:
            return neg(f())
        if k == 1:
            return conj(f(), f())
        if k == 2:
            return disj(f(), f())
        if k == 3:
            return imp(f(), f())
        if k in (4, 5):
            ty = rng.choice(ARG_TYPES)
            x = self._binder(ty, scope)
            inner = [v for v in scope if v.name != x.name] + [x]
            body = self.term(O, depth - 1, inner)
            return forall(x, body) if k == 4 else exists(x, body)
        if k == 6:
            ty = rng.choice(ARG_TYPES)
            return eq(self.term(ty, depth - 1, scope), self.term(ty, depth - 1, scope))
        return self._app(O, depth, scope)

    def formula(self, depth: int, scope: Sequence[Var] = ()) -> Term:
        return self.term(O, depth, scope)

    def closed_formula(self, depth: int) -> Term:
        return self.term(O, depth, ())


def any_type(rng: random.Random) -> SimpleType:
    return rng.choice((IOTA, O, PRED, UNARY))


# ---------------------------------------------------------------------------
# Beta steps


def redex_positions(t: Term, path: tuple = ()) -> list[tuple]:
    out = []
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            out.append(path)
        out += redex_positions(t.fun, path + (0,))
        out += redex_positions(t.arg, path + (1,))
    elif isinstance(t, Lam):
        out += redex_positions(t.body, path + (0,))
    return out


def reduce_at(t: Term, path: tuple) -> Term:
    if not path:
        return substitute(t.fun.body, t.fun.var, t.arg)
    step, rest = path[0], path[1:]
    if isinstance(t, Lam):
        return Lam(t.name, t.var_type, reduce_at(t.body, rest))
    if step == 0:
        return App(reduce_at(t.fun, rest), t.arg)
    return App(t.fun, reduce_at(t.arg, rest))


def random_reduct(rng: random.Random, t: Term, max_steps: int = 4) -> Term | None:
    """Apply between one and ``max_steps`` random beta steps, or None if ``t`` is normal."""
    positions = redex_positions(t)
    if not positions:
        return None
    for _ in range(rng.randint(1, max_steps)):
        positions = redex_positions(t)
        if not positions:
            break
        t = reduce_at(t, rng.choice(positions))
    return t


# ---------------------------------------------------------------------------
# Derivations


def _abstract(t: Term, s: Term, z: Var) -> Term:
    """Replace occurrences of ``s`` in ``t`` by ``z``, skipping binders that capture ``s``."""
    fv = s.free_vars
    key = s.key

    def go(u: Term) -> Term:
        if u.free_vars >= fv and u.key == key:
            return z
        if isinstance(u, App):
            return App(go(u.fun), go(u.arg))
        if isinstance(u, Lam):
            if u.var in fv:
                return u
            return Lam(u.name, u.var_type, go(u.body))
        return u

    return go(t)


def _open_subterms(t: Term) -> list[Term]:
    """Subterms with no variable bound inside ``t``."""
    out: list[Term] = []

    def go(u: Term, bound: frozenset) -> None:
        if u.free_vars.isdisjoint(bound):
            out.append(u)
        if isinstance(u, App):
            go(u.fun, bound)
            go(u.arg, bound)
        elif isinstance(u, Lam):
            go(u.body, bound | {u.var})

    go(t, frozenset())
    return out


# smallest height budget each construction fits in
_MIN_BUDGET = {"imp_e": 3, "and_e": 3, "or_e": 3, "not_i": 3, "bot_e": 4, "all_i": 3,
               "all_e": 4, "ex_i": 3, "ex_e": 4, "eq_e": 3, "funext": 3, "propext": 4}


class DerivationGen:
    """Classical derivations built by random forward rule application.

    Only rules admitted by ``flags`` are used.  Below the height budget a
    leaf is chosen with probability ``leaf_rate``.
    """

    def __init__(self, rng: random.Random, flags: ExtFlags = EPS, signature=None,
                 formula_depth: int = 2, max_height: int = 8, leaf_rate: float = 0.1) -> None:
        self.rng = rng
        self.flags = flags
        self.terms = TermGen(rng, signature, redex_rate=0.1)
        self.formula_depth = formula_depth
        self.max_height = max_height
        self.leaf_rate = leaf_rate

    def formula(self, scope: Sequence[Var]) -> Term:
        return self.terms.formula(self.rng.randint(0, self.formula_depth), scope)

    def context(self, scope: Sequence[Var] = ()) -> tuple[Term, ...]:
        return tuple(self.formula(scope) for _ in range(self.rng.randint(0, 2)))

    def derivation(self, tries: int = 50) -> Derivation:
        for _ in range(tries):
            d = self.gen(self.context(), self.max_height, [])
            if d.height() <= self.max_height:
                return d
        return top_i(())

    # the choice of construction for each budget
    def _rules(self) -> list[str]:
        rules = ["imp_i", "imp_e", "and_i", "and_e", "or_i", "or_e",
                 "not_i", "bot_e", "all_i", "all_e", "ex_i", "ex_e", "conv"]
        if self.flags.eq:
            rules += ["eq_e", "eq_e"]
        if self.flags.funext:
            rules += ["funext", "funext"]
        if self.flags.propext:
            rules += ["propext", "propext"]
        return rules

    def gen(self, ctx: tuple[Term, ...], budget: int, scope: list[Var]) -> Derivation:
        rng = self.rng
        if budget <= 1 or rng.random() < self.leaf_rate:
            return self._leaf(ctx, scope)
        for _ in range(4):
            rule = rng.choice(self._rules())
            if budget < _MIN_BUDGET.get(rule, 2):
                continue
            out = getattr(self, "_" + rule)(ctx, budget, scope)
            if out is not None:
                return out
        return self._leaf(ctx, scope)

    def _leaf(self, ctx, scope) -> Derivation:
        rng = self.rng
        options = ["top", "pem"] + (["ax"] * 2 if ctx else []) + (["eq_i"] if self.flags.eq else [])
        k = rng.choice(options)
        if k == "ax":
            return hyp(ctx, rng.choice(ctx))
        if k == "pem":
            return pem(ctx, self.formula(scope))
        if k == "eq_i":
            return eq_i(ctx, self.terms.term(rng.choice(ARG_TYPES), 2, scope))
        return top_i(ctx)

    def _ax(self, ctx, budget, scope):
        return hyp(ctx, self.rng.choice(ctx)) if ctx else None

    def _top(self, ctx, budget, scope):
        return top_i(ctx)

    def _pem(self, ctx, budget, scope):
        return pem(ctx, self.formula(scope))

    def _imp_i(self, ctx, budget, scope):
        a = self.formula(scope)
        return imp_i(self.gen(ctx + (a,), budget - 1, scope))

    def _imp_e(self, ctx, budget, scope):
        d1 = self.gen(ctx, budget - 1, scope)
        d2 = self.gen(ctx + (d1.goal,), budget - 2, scope)
        return imp_e(imp_i(d2), d1)

    def _and_i(self, ctx, budget, scope):
        return and_i(self.gen(ctx, budget - 1, scope), self.gen(ctx, budget - 1, scope))

    def _and_e(self, ctx, budget, scope):
        both = and_i(self.gen(ctx, budget - 2, scope), self.gen(ctx, budget - 2, scope))
        return (and_el if self.rng.random() < 0.5 else and_er)(both)

    def _or_i(self, ctx, budget, scope):
        d = self.gen(ctx, budget - 1, scope)
        other = self.formula(scope)
        return or_il(d, other) if self.rng.random() < 0.5 else or_ir(other, d)

    def _or_e(self, ctx, budget, scope):
        rng = self.rng
        if rng.random() < 0.5:
            d0 = pem(ctx, self.formula(scope))
        else:
            d0 = or_il(self.gen(ctx, budget - 2, scope), self.formula(scope))
        a, b = match_disj(d0.goal)
        dl = self.gen(ctx + (a,), budget - 2, scope)
        dr = self.gen(ctx + (b,), budget - 2, scope)
        c1, c2 = dl.goal, dr.goal
        return or_e(d0, or_il(dl, c2), or_ir(c1, dr))

    def _not_i(self, ctx, budget, scope):
        dx = self.gen(ctx, budget - 2, scope)
        a = neg(dx.goal)
        c = ctx + (a,)
        return not_i(not_e(hyp(c, a), weaken_to(dx, c)))

    def _bot_e(self, ctx, budget, scope):
        dx = self.gen(ctx, budget - 3, scope)
        a = neg(dx.goal)
        c = ctx + (a,)
        return imp_i(bot_e(not_e(hyp(c, a), weaken_to(dx, c)), self.formula(scope)))

    def _all_i(self, ctx, budget, scope):
        x = fresh_var("x", self.rng.choice(ARG_TYPES))
        # all_i adds a Conv node
        d = self.gen(ctx, budget - 2, scope + [x])
        return all_i(d, x, lam(x, d.goal))

    def _all_e(self, ctx, budget, scope):
        for h in ctx:
            pred = match_forall(h)
            if pred is not None and self.rng.random() < 0.7:
                return all_e(hyp(ctx, h), self.terms.term(pred.type.domain, 2, scope))
        d = self._all_i(ctx, budget - 1, scope)
        pred = match_forall(d.goal)
        return all_e(d, self.terms.term(pred.type.domain, 2, scope))

    def _ex_i(self, ctx, budget, scope):
        rng = self.rng
        d = self.gen(ctx, budget - 2, scope)
        subs = [s for s in _open_subterms(d.goal) if s.type in ARG_TYPES]
        if subs and rng.random() < 0.8:
            s = rng.choice(subs)
            z = fresh_var("z", s.type)
            return ex_i(d, lam(z, _abstract(d.goal, s, z)), s)
        ty = rng.choice(ARG_TYPES)
        z = fresh_var("z", ty)
        return ex_i(d, lam(z, d.goal), self.terms.term(ty, 2, scope))

    def _ex_e(self, ctx, budget, scope):
        d_ex = self._ex_i(ctx, budget - 1, scope)
        pred = match_exists(d_ex.goal)
        for _ in range(3):
            x = fresh_var("x", pred.type.domain)
            d_use = self.gen(ctx + (app(pred, x),), budget - 1, scope)
            if x not in d_use.goal.free_vars:
                return ex_e(d_ex, d_use, x)
        return None

    def _conv(self, ctx, budget, scope):
        d = self.gen(ctx, budget - 1, scope)
        g = d.goal
        if g.normal.key != g.key and self.rng.random() < 0.5:
            return conv(d, g.normal)
        ty = self.rng.choice(ARG_TYPES)
        y = fresh_var("y", ty)
        return conv(d, App(lam(y, g), self.terms.term(ty, 1, scope)))

    def _eq_i(self, ctx, budget, scope):
        return eq_i(ctx, self.terms.term(self.rng.choice(ARG_TYPES), 2, scope))

    def equation(self, ctx, ty: SimpleType, budget: int, scope, u: Term | None = None) -> Derivation:
        """A derivation of ``u = v`` at ``ty``, preferring the extensionality rules."""
        rng = self.rng
        u = self.terms.term(ty, 2, scope) if u is None else u
        if ty == O and self.flags.propext and budget >= 4 and rng.random() < 0.6:
            return self._iff_to_eq(ctx, u, budget)
        if isinstance(ty, Arrow) and self.flags.funext and budget >= 3 and rng.random() < 0.6:
            x = fresh_var("x", ty.domain)
            d = self.equation(ctx, ty.codomain, budget - 2, scope, app(u, x))
            rhs = match_eq(d.goal)[1]
            return funext(d, x, u, lam(x, rhs))
        return eq_i(ctx, u)

    def _iff_to_eq(self, ctx, a: Term, budget: int) -> Derivation:
        # heights 4, 7 and 5
        k = self.rng.randrange(3 if budget >= 7 else 1)
        if k == 0:
            return prop_ext(iff_refl(ctx, a))
        if k == 1:
            return prop_ext(dn_equiv(ctx, a))
        c = ctx + (a,)
        fwd = imp_i(and_i(hyp(c, a), hyp(c, a)))
        cc = ctx + (conj(a, a),)
        bwd = imp_i(and_el(hyp(cc, conj(a, a))))
        return prop_ext(and_i(fwd, bwd))

    def _eq_e(self, ctx, budget, scope):
        rng = self.rng
        d_pu = self.gen(ctx, budget - 2, scope)
        subs = [s for s in _open_subterms(d_pu.goal) if s.type in ARG_TYPES]
        if not subs:
            return None
        s = rng.choice(subs)
        d_eq = self.equation(ctx, s.type, budget - 1, scope, s)
        z = fresh_var("z", s.type)
        return eq_e(d_pu, d_eq, lam(z, _abstract(d_pu.goal, s, z)))

    def _funext(self, ctx, budget, scope):
        ty = self.rng.choice((PRED, UNARY, Arrow(IOTA, IOTA)))
        return self.equation(ctx, ty, budget, scope)

    def _propext(self, ctx, budget, scope):
        return self._iff_to_eq(ctx, self.formula(scope), budget)


def uses(d: Derivation, rule: Rule) -> bool:
    return any(n.rule is rule for n in d.nodes())
