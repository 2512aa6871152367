"""Proof transformations around the Kuroda translation.

* :func:`soundness_translate` turns a classical derivation of ``G |- A``
  into an intuitionistic one of ``D, G_Ku |- A^Ku``, where ``D`` holds one
  weak function-extensionality hypothesis per arrow type at which the input
  uses FunExt.
* :func:`term_equality_derivation` and :func:`characterization_derivation`
  prove ``t_Ku = t`` and ``A^Ku <=> A`` classically with full
  extensionality.
* :func:`characterization_from_oracle` builds the latter from equivalences
  for atoms only, so it can be used without extensionality.
* :func:`reverse_translate` goes back from ``D, G_Ku |- A^Ku`` to a
  classical ``G |- A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .deduction import (
    CheckSettings,
    Derivation,
    ExtFlags,
    Flavor,
    _ctx_equal,
    all_e,
    all_i,
    and_el,
    and_er,
    and_i,
    ax,
    bot_e,
    check,
    conv,
    eq_e,
    ex_e,
    ex_i,
    eq_i,
    funext,
    funext_types,
    hyp,
    imp_e,
    imp_i,
    not_e,
    not_i,
    or_e,
    or_il,
    or_ir,
    prop_ext,
    required_flags,
    top_i,
    weaken,
    weaken_to,
)
from .kernel import (
    IOTA,
    O,
    TOP,
    App,
    Arrow,
    Const,
    Lam,
    SimpleType,
    Term,
    TypeMismatch,
    Var,
    all_of,
    alpha_beta_equiv,
    app,
    conj,
    constants,
    disj,
    dneg,
    eq,
    ex_of,
    forall,
    forall_const,
    fresh_var,
    iff,
    imp,
    lam,
    match_disj,
    match_eq,
    match_exists,
    match_forall,
    match_conj,
    match_imp,
    match_neg,
    neg,
    strip_app,
    substitute,
)
from .kuroda import kuroda_context, kuroda_forall, kuroda_formula, kuroda_term
from .lemmas import (
    backward,
    binder,
    dn_equiv,
    dn_intro,
    dne,
    forward,
    iff_refl,
    modus_ponens,
    nn_bind,
    nn_map,
    nn_map2,
    pointwise,
    negation_lemma,
)


class TransformError(Exception):
    pass


class InputDoesNotCheck(TransformError):
    pass


class ConclusionMismatch(TransformError):
    pass


class OracleRefused(TransformError):
    pass


class OracleOutputInvalid(TransformError):
    pass


# ---------------------------------------------------------------------------
# Auxiliary hypotheses


def _nn_pointwise_eq(f: Term, g: Term) -> Term:
    """``\\x. ~~(f x = g x)``"""
    x = binder("x", f.type.domain, f, g)
    return lam(x, dneg(eq(app(f, x), app(g, x))))


def _weak_funext_body(f: Term, g: Term) -> Term:
    return imp(all_of(_nn_pointwise_eq(f, g)), dneg(eq(f, g)))


def _weak_funext_pred(fun_type: Arrow) -> Callable[[Term], Term]:
    def inner(f: Term) -> Term:
        g = binder("g", fun_type, f)
        return all_of(lam(g, _weak_funext_body(f, g)))

    return inner


def weak_funext(domain: SimpleType, codomain: SimpleType) -> Term:
    """``forall f g. (forall x. ~~(f x = g x)) => ~~(f = g)`` at ``domain -> codomain``."""
    ty = Arrow(domain, codomain)
    f = Var("f", ty)
    return forall(f, _weak_funext_pred(ty)(f))


def dns_instance(domain: SimpleType) -> Term:
    """Double-negation shift: ``forall p. (forall x. ~~(p x)) => ~~(forall x. p x)``."""
    p = Var("p", Arrow(domain, O))
    return forall(p, imp(all_of(pointwise(p, dneg)), dneg(all_of(pointwise(p, lambda t: t)))))


def dne_eq_instance(ty: SimpleType) -> Term:
    """``forall x y. ~~(x = y) => x = y``"""
    x, y = Var("x", ty), Var("y", ty)
    return forall(x, forall(y, imp(dneg(eq(x, y)), eq(x, y))))


@dataclass(frozen=True)
class WeakFunExt:
    domain: SimpleType
    codomain: SimpleType

    @property
    def formula(self) -> Term:
        return weak_funext(self.domain, self.codomain)


@dataclass(frozen=True)
class DnsInstance:
    domain: SimpleType

    @property
    def formula(self) -> Term:
        return dns_instance(self.domain)


@dataclass(frozen=True)
class DneEqInstance:
    at: SimpleType

    @property
    def formula(self) -> Term:
        return dne_eq_instance(self.at)


def _close_weak_funext(d_body: Derivation, f: Var, g: Var) -> Derivation:
    """Generalize ``ctx |- body(f, g)`` into ``ctx |- weak_funext``."""
    ty = f.type
    inner = _weak_funext_pred(ty)
    d = all_i(d_body, g, lam(g, _weak_funext_body(f, g)))
    fv = Var("f", ty) if f.name != "f" else fresh_var("f", ty)
    d = all_i(d, f, lam(fv, inner(fv)))
    return conv(d, weak_funext(ty.domain, ty.codomain))


def dns_implies_weak_funext(domain: SimpleType, codomain: SimpleType) -> Derivation:
    """Intuitionistic ``DNS(domain) |- weak_funext(domain, codomain)`` using FunExt."""
    ty = Arrow(domain, codomain)
    d_hyp = dns_instance(domain)
    f, g = fresh_var("f", ty), fresh_var("g", ty)
    h = all_of(_nn_pointwise_eq(f, g))
    c1 = (d_hyp, h)
    x = binder("x", domain, f, g)
    p = lam(x, eq(app(f, x), app(g, x)))
    inst = conv(all_e(hyp(c1, d_hyp), p), imp(h, dneg(all_of(p))))
    nn_all = modus_ponens(inst, hyp(c1, h))
    c2 = c1 + (all_of(p),)
    y = fresh_var("x", domain)
    pointwise_eq = conv(all_e(hyp(c2, all_of(p)), y), eq(app(f, y), app(g, y)))
    fn = imp_i(funext(pointwise_eq, y, f, g))
    body = imp_i(nn_map(nn_all, fn))
    return _close_weak_funext(body, f, g)


def dne_eq_collapse(p: Term) -> Derivation:
    """Intuitionistic ``DNE_eq(o) |- ~~p => p`` using PropExt and the equality rules."""
    if p.type != O:
        raise TypeMismatch("dne_eq_collapse needs a formula")
    d_hyp = dne_eq_instance(O)
    c1 = (d_hyp, dneg(p))
    c2 = c1 + (p,)
    to_top = imp_i(top_i(c2 + (p,)))
    from_top = imp_i(hyp(c2 + (TOP,), p))
    p_is_top = imp_i(prop_ext(and_i(to_top, from_top)))
    nn_eq = nn_map(hyp(c1, dneg(p)), p_is_top)
    y = binder("y", O, p)
    step = conv(all_e(hyp(c1, d_hyp), p), all_of(lam(y, imp(dneg(eq(p, y)), eq(p, y)))))
    inst = conv(all_e(step, TOP), imp(dneg(eq(p, TOP)), eq(p, TOP)))
    e = modus_ponens(inst, nn_eq)
    sym = _symmetry(e)
    z = binder("z", O, p)
    res = conv(eq_e(top_i(c1), sym, lam(z, z)), p)
    return imp_i(res)


def _symmetry(d: Derivation) -> Derivation:
    """``ctx |- v = u`` from ``ctx |- u = v``."""
    u, v = match_eq(d.goal)
    z = binder("z", u.type, u, v)
    out = eq_e(eq_i(d.context, u), d, lam(z, eq(z, u)))
    return conv(out, eq(v, u))


# ---------------------------------------------------------------------------
# Soundness


@dataclass(frozen=True)
class SoundnessResult:
    derivation: Derivation
    prefix: tuple[Term, ...]
    settings: CheckSettings


def soundness_translate(d: Derivation, flags: ExtFlags | None = None,
                        double_negated_context: bool = False) -> SoundnessResult:
    """Translate a classical derivation of ``G |- A``.

    The output proves ``D, G_Ku |- A^Ku`` intuitionistically under the same
    flags.  With ``double_negated_context`` the hypotheses become ``G^Ku``.
    """
    flags = required_flags(d) if flags is None else flags
    settings = CheckSettings(Flavor.CLASSICAL, flags)
    result = check(d, settings)
    if not result:
        raise InputDoesNotCheck(str(result))
    prefix = tuple(weak_funext(t.domain, t.codomain) for t in funext_types(d))
    out = _Soundness(prefix, funext_types(d)).run(d)
    if double_negated_context:
        out = _double_negate_context(out, len(prefix))
    return SoundnessResult(out, prefix, CheckSettings(Flavor.INTUITIONISTIC, flags))


def _double_negate_context(d: Derivation, keep: int) -> Derivation:
    """From ``D, X1..Xn |- ~~B`` build ``D, ~~X1..~~Xn |- ~~B``."""
    head, rest = d.context[:keep], d.context[keep:]
    target = head + tuple(dneg(h) for h in rest)
    cur = weaken(d, target[keep:], position=keep)
    for j in range(len(rest) - 1, -1, -1):
        ctx = target + rest[:j]
        cur = nn_bind(hyp(ctx, dneg(rest[j])), cur)
    return cur


class _Soundness:
    def __init__(self, prefix: tuple[Term, ...], arrows: list[Arrow]) -> None:
        self.prefix = prefix
        self.arrows = arrows
        self.memo: dict[int, tuple[Derivation, Derivation]] = {}
        self.kmemo: dict[int, tuple[Term, Term]] = {}

    def k(self, t: Term) -> Term:
        hit = self.kmemo.get(id(t))
        if hit is None:
            hit = (t, kuroda_term(t))
            self.kmemo[id(t)] = hit
        return hit[1]

    def run(self, d: Derivation) -> Derivation:
        # explicit post-order walk; derivations can be deeper than the recursion limit allows
        stack = [(d, False)]
        while stack:
            node, ready = stack.pop()
            if id(node) in self.memo:
                continue
            if ready:
                out = self.translate(node, [self.memo[id(p)][1] for p in node.premises])
                self.memo[id(node)] = (node, out)
                continue
            stack.append((node, True))
            stack.extend((p, False) for p in node.premises if id(p) not in self.memo)
        return self.memo[id(d)][1]

    def translate(self, node: Derivation, ih: list[Derivation]) -> Derivation:
        ctx = self.prefix + tuple(self.k(h) for h in node.context)
        gk = self.k(node.goal)
        out = getattr(self, "_" + node.rule.name.lower())(node, ctx, gk, ih)
        return conv(out, dneg(gk))

    def _ax(self, node, ctx, gk, ih):
        return dn_intro(ax(ctx, len(self.prefix) + node.index))

    def _imp_i(self, node, ctx, gk, ih):
        a, b = match_imp(gk)
        c = ctx + (dneg(a),)
        lifted = nn_bind(hyp(c, dneg(a)), weaken(ih[0], (dneg(a),), position=len(ctx)))
        return modus_ponens(backward(negation_lemma(6, a, b, context=ctx)), imp_i(lifted))

    def _imp_e(self, node, ctx, gk, ih):
        a = self.k(node.premises[1].goal)
        fwd = modus_ponens(forward(negation_lemma(6, a, gk, context=ctx)), conv(ih[0], dneg(imp(a, gk))))
        return modus_ponens(fwd, ih[1])

    def _and_i(self, node, ctx, gk, ih):
        a, b = self.k(node.premises[0].goal), self.k(node.premises[1].goal)
        return modus_ponens(backward(negation_lemma(7, a, b, context=ctx)), and_i(ih[0], ih[1]))

    def _and_e(self, node, ctx, ih, proj):
        a, b = match_conj(self.k(node.premises[0].goal))
        return proj(modus_ponens(forward(negation_lemma(7, a, b, context=ctx)), ih[0]))

    def _and_el(self, node, ctx, gk, ih):
        return self._and_e(node, ctx, ih, and_el)

    def _and_er(self, node, ctx, gk, ih):
        return self._and_e(node, ctx, ih, and_er)

    def _or_i(self, ctx, gk, ih, proj):
        a, b = match_disj(gk)
        c = ctx + (neg(gk),)
        neg_part = proj(modus_ponens(forward(negation_lemma(8, a, b, context=c)), hyp(c, neg(gk))))
        return not_i(not_e(weaken_to(ih[0], c), neg_part))

    def _or_il(self, node, ctx, gk, ih):
        return self._or_i(ctx, gk, ih, and_el)

    def _or_ir(self, node, ctx, gk, ih):
        return self._or_i(ctx, gk, ih, and_er)

    def _or_e(self, node, ctx, gk, ih):
        a, b = match_disj(self.k(node.premises[0].goal))
        c = ctx + (neg(gk),)
        both = conj(neg(a), neg(b))
        c2 = c + (both,)
        not_both = modus_ponens(backward(negation_lemma(8, a, b, context=c2)), hyp(c2, both))
        not_conj = not_i(not_e(weaken_to(ih[0], c2), not_both))

        def refute(branch: Derivation, x: Term) -> Derivation:
            use = weaken(branch, (neg(gk),), position=len(ctx))
            return not_i(not_e(use, hyp(c + (x,), neg(gk))))

        conj_d = and_i(refute(ih[1], a), refute(ih[2], b))
        return not_i(not_e(not_conj, conj_d))

    def _not_i(self, node, ctx, gk, ih):
        a = match_neg(gk)
        c = ctx + (a,)
        bot = modus_ponens(negation_lemma(1, context=c), ih[0])
        return dn_intro(not_i(bot))

    def _not_e(self, node, ctx, gk, ih):
        a = self.k(node.premises[1].goal)
        not_a = modus_ponens(forward(negation_lemma(5, a, context=ctx)), conv(ih[0], neg(dneg(a))))
        return dn_intro(not_e(ih[1], not_a))

    def _bot_e(self, node, ctx, gk, ih):
        return bot_e(modus_ponens(negation_lemma(1, context=ctx), ih[0]), dneg(gk))

    def _top_i(self, node, ctx, gk, ih):
        return dn_intro(top_i(ctx))

    def _all_i(self, node, ctx, gk, ih):
        pk = self.k(match_forall(node.goal))
        q = pointwise(pk, dneg)
        return dn_intro(all_i(ih[0], node.term, q))

    def _all_e(self, node, ctx, gk, ih):
        pk = self.k(match_forall(node.premises[0].goal))
        tk = self.k(node.term)
        q = pointwise(pk, dneg)
        shifted = modus_ponens(negation_lemma(9, pred=q, context=ctx), conv(ih[0], dneg(all_of(q))))
        px = app(pk, tk)
        inst = conv(all_e(shifted, tk), dneg(dneg(px)))
        return modus_ponens(forward(negation_lemma(5, neg(px), context=ctx)), inst)

    def _ex_i(self, node, ctx, gk, ih):
        pk = self.k(match_exists(node.goal))
        tk = self.k(node.term)
        q = pointwise(pk, neg)
        h = all_of(q)
        c = ctx + (h,)
        refuted = not_e(weaken_to(ih[0], c), conv(all_e(hyp(c, h), tk), neg(app(pk, tk))))
        not_h = not_i(refuted)
        ex = ex_of(pk)
        c2 = ctx + (neg(ex),)
        all_not = modus_ponens(forward(negation_lemma(10, pred=pk, context=c2)), hyp(c2, neg(ex)))
        return not_i(not_e(weaken_to(not_h, c2), all_not))

    def _ex_e(self, node, ctx, gk, ih):
        pk = self.k(match_exists(node.premises[0].goal))
        x = node.term
        q = pointwise(pk, neg)
        c = ctx + (neg(gk),)
        use = weaken(ih[1], (neg(gk),), position=len(ctx))
        not_px = not_i(not_e(use, hyp(c + (app(pk, x),), neg(gk))))
        nn_all = dn_intro(all_i(not_px, x, q))
        h = all_of(q)
        c2 = c + (h,)
        not_ex = modus_ponens(backward(negation_lemma(10, pred=pk, context=c2)), hyp(c2, h))
        not_all = not_i(not_e(weaken_to(ih[0], c2), not_ex))
        return not_i(not_e(nn_all, not_all))

    def _conv(self, node, ctx, gk, ih):
        return ih[0]

    def _pem(self, node, ctx, gk, ih):
        a, _ = match_disj(gk)
        return negation_lemma(3, a, context=ctx)

    def _eq_i(self, node, ctx, gk, ih):
        u, _ = match_eq(gk)
        return dn_intro(eq_i(ctx, u))

    def _eq_e(self, node, ctx, gk, ih):
        mk = self.k(node.term)
        uk, vk = match_eq(self.k(node.premises[1].goal))
        pu, e = app(mk, uk), eq(uk, vk)
        c = ctx + (pu, e)
        fn = imp_i(imp_i(eq_e(hyp(c, pu), hyp(c, e), mk)))
        return nn_map2(conv(ih[0], dneg(pu)), ih[1], fn)

    def _propext(self, node, ctx, gk, ih):
        a, b = match_eq(gk)
        h = iff(a, b)
        fn = imp_i(prop_ext(hyp(ctx + (h,), h)))
        return nn_map(conv(ih[0], dneg(h)), fn)

    def _funext(self, node, ctx, gk, ih):
        fk, gk2 = match_eq(gk)
        x = node.term
        nn_all = all_i(ih[0], x, _nn_pointwise_eq(fk, gk2))
        delta = ax(ctx, self.arrows.index(fk.type))
        inner = _weak_funext_pred(fk.type)
        step = conv(all_e(delta, fk), inner(fk))
        inst = conv(all_e(step, gk2), _weak_funext_body(fk, gk2))
        return modus_ponens(inst, nn_all)



# ---------------------------------------------------------------------------
# Characterization


def _has_forall(t: Term) -> bool:
    return any(c.name == "forall" for c in constants(t))


def term_equality_derivation(t: Term) -> Derivation:
    """Classical ``|- t_Ku = t`` with full extensionality.

    Free variables of ``t`` are allowed; they are left alone by the
    translation.
    """
    memo: dict[int, tuple[Term, Derivation]] = {}

    def go(s: Term) -> Derivation:
        hit = memo.get(id(s))
        if hit is not None:
            return hit[1]
        if not _has_forall(s):
            out = eq_i((), s)
        elif isinstance(s, Const):
            out = _forall_equality(s.index_type)
        elif isinstance(s, App):
            out = _congruence(s, go(s.fun), go(s.arg))
        else:
            x = fresh_var(s.name, s.var_type)
            body = substitute(s.body, s.var, x)
            out = funext(go(body), x, kuroda_term(s), s)
        memo[id(s)] = (s, out)
        return out

    return go(t)


def _forall_equality(ty: SimpleType) -> Derivation:
    q = fresh_var("q", Arrow(ty, O))
    y = fresh_var("y", ty)
    qy = app(q, y)
    pointwise_eq = prop_ext(dn_equiv((), qy))
    x = binder("x", ty, q)
    nq = lam(x, dneg(app(q, x)))
    q_eq = funext(pointwise_eq, y, q, nq)
    z = fresh_var("z", q.type)
    motive = lam(z, eq(all_of(z), all_of(q)))
    shifted = conv(eq_e(eq_i((), all_of(q)), q_eq, motive), eq(all_of(nq), all_of(q)))
    return funext(shifted, q, kuroda_forall(ty), forall_const(ty))


def _congruence(s: App, d_fun: Derivation, d_arg: Derivation) -> Derivation:
    f, a = s.fun, s.arg
    fk, ak = kuroda_term(f), kuroda_term(a)
    lhs = app(fk, ak)
    d = eq_i((), lhs)
    if fk is not f:
        z = binder("z", f.type, lhs, a)
        d = conv(eq_e(d, d_fun, lam(z, eq(lhs, app(z, ak)))), eq(lhs, app(f, ak)))
    if ak is not a:
        z = binder("z", a.type, lhs, f)
        d = conv(eq_e(d, d_arg, lam(z, eq(lhs, app(f, z)))), eq(lhs, s))
    return d


def _iff_from_equality(d_eq: Derivation) -> Derivation:
    """``ctx |- A <=> B`` from ``ctx |- A = B``."""
    a, b = match_eq(d_eq.goal)
    z = binder("z", O, a, b)
    out = eq_e(iff_refl(d_eq.context, a), d_eq, lam(z, iff(a, z)))
    return conv(out, iff(a, b))


def _lift_dn(d_iff: Derivation) -> Derivation:
    """Classical ``ctx |- ~~X <=> A`` from ``ctx |- X <=> A``."""
    ctx = d_iff.context
    x, a = match_imp(match_conj(d_iff.goal)[0])
    c1 = ctx + (dneg(x),)
    fwd = imp_i(modus_ponens(forward(weaken_to(d_iff, c1)),
                             modus_ponens(dne(c1, x), hyp(c1, dneg(x)))))
    c2 = ctx + (a,)
    bwd = imp_i(dn_intro(modus_ponens(backward(weaken_to(d_iff, c2)), hyp(c2, a))))
    return and_i(fwd, bwd)


def characterization_derivation(a: Term) -> Derivation:
    """Classical ``|- A^Ku <=> A`` with full extensionality."""
    if a.type != O:
        raise TypeMismatch("characterization needs a formula")
    return _lift_dn(_iff_from_equality(term_equality_derivation(a)))


Oracle = Callable[[Term], "Derivation | None"]


def characterization_from_oracle(a: Term, oracle: Oracle, flags: ExtFlags | None = None) -> Derivation:
    """``|- A^Ku <=> A`` given equivalences for head-atomic formulas.

    ``A`` is put in beta-normal form and taken apart along the connectives
    and quantifiers.  Bare names are their own translation; for any other
    formula ``h u1 .. un`` whose head is not a connective the oracle is
    asked for a closed classical derivation of ``(h u1 .. un)_Ku <=> h u1 .. un``.
    Oracle answers are checked under ``flags`` when given, otherwise under
    the flags they use.
    """
    if a.type != O:
        raise TypeMismatch("characterization needs a formula")
    inner = _Equivalences(oracle, flags).build(a.normal)
    return _lift_dn(conv(inner, iff(kuroda_term(a), a)))


def _swap(e: Derivation) -> Derivation:
    return and_i(and_er(e), and_el(e))


def _via(e: Derivation, d: Derivation) -> Derivation:
    """Push ``ctx |- X`` along ``|- X <=> Y``."""
    return modus_ponens(forward(weaken(e, d.context)), d)


class _Equivalences:
    """Classical ``|- B_Ku <=> B`` for beta-normal ``B``, by structure."""

    def __init__(self, oracle: Oracle, flags: ExtFlags | None) -> None:
        self.oracle = oracle
        self.flags = flags

    def build(self, b: Term) -> Derivation:
        head, args = strip_app(b)
        name = head.name if isinstance(head, Const) else None
        if not args:
            return iff_refl((), b)
        if name == "not" and len(args) == 1:
            return self._both(self._neg, self.build(args[0]))
        if name in ("and", "or", "imp") and len(args) == 2:
            one_way = {"and": self._conj, "or": self._disj, "imp": self._imp}[name]
            return self._both(one_way, self.build(args[0]), self.build(args[1]))
        if name in ("forall", "exists") and len(args) == 1:
            return self._quantifier(name, args[0])
        return self._ask(b)

    def _ask(self, b: Term) -> Derivation:
        d = self.oracle(b)
        if d is None:
            raise OracleRefused(f"no equivalence for {b}")
        used = required_flags(d) if self.flags is None else self.flags
        result = check(d, CheckSettings(Flavor.CLASSICAL, used))
        if not result:
            raise OracleOutputInvalid(str(result))
        expected = iff(kuroda_term(b), b)
        if d.context or d.goal.key != expected.key:
            raise OracleOutputInvalid(f"oracle proved {d.goal}, expected {expected}")
        return d

    @staticmethod
    def _both(one_way, *es: Derivation) -> Derivation:
        return and_i(one_way(*es), one_way(*map(_swap, es)))

    @staticmethod
    def _sides(e: Derivation) -> tuple[Term, Term]:
        return match_imp(match_conj(e.goal)[0])

    def _neg(self, e):
        x1, x = self._sides(e)
        c = (neg(x1), x)
        return imp_i(not_i(not_e(hyp(c, neg(x1)), _via(_swap(e), hyp(c, x)))))

    def _conj(self, e1, e2):
        x1, y1 = self._sides(e1)[0], self._sides(e2)[0]
        h = hyp((conj(x1, y1),), conj(x1, y1))
        return imp_i(and_i(_via(e1, and_el(h)), _via(e2, and_er(h))))

    def _disj(self, e1, e2):
        (x1, x), (y1, y) = self._sides(e1), self._sides(e2)
        c = (disj(x1, y1),)
        left = or_il(_via(e1, hyp(c + (x1,), x1)), y)
        right = or_ir(x, _via(e2, hyp(c + (y1,), y1)))
        return imp_i(or_e(hyp(c, disj(x1, y1)), left, right))

    def _imp(self, e1, e2):
        (x1, x), y1 = self._sides(e1), self._sides(e2)[0]
        c = (imp(x1, y1), x)
        return imp_i(imp_i(_via(e2, imp_e(hyp(c, imp(x1, y1)), _via(_swap(e1), hyp(c, x))))))

    def _quantifier(self, name: str, pred: Term) -> Derivation:
        x = fresh_var("x", pred.type.domain)
        e = self.build(app(pred, x).normal)
        pk = kuroda_term(pred)
        bk, bx = app(pk, x), app(pred, x)
        e = conv(e, iff(bk, bx))
        if name == "forall":
            lhs, rhs = all_of(pointwise(pk, dneg)), all_of(pred)
            c = (lhs,)
            nn = conv(all_e(hyp(c, lhs), x), dneg(bk))
            fwd = imp_i(all_i(_via(e, modus_ponens(dne(c, bk), nn)), x, pred))
            c = (rhs,)
            back = dn_intro(_via(_swap(e), all_e(hyp(c, rhs), x)))
            bwd = imp_i(all_i(back, x, pointwise(pk, dneg)))
        else:
            lhs, rhs = ex_of(pk), ex_of(pred)
            c = (lhs,)
            fwd = imp_i(ex_e(hyp(c, lhs), ex_i(_via(e, hyp(c + (bk,), bk)), pred, x), x))
            c = (rhs,)
            bwd = imp_i(ex_e(hyp(c, rhs), ex_i(_via(_swap(e), hyp(c + (bx,), bx)), pk, x), x))
        return conv(and_i(fwd, bwd), iff(kuroda_term(app(Const(name, Arrow(pred.type, O)), pred)),
                                          app(Const(name, Arrow(pred.type, O)), pred)))


def extensional_oracle(atom: Term) -> Derivation:
    """The oracle that always answers, using FunExt and PropExt."""
    return _iff_from_equality(term_equality_derivation(atom))


# ---------------------------------------------------------------------------
# Reverse direction


def _weak_funext_classical(fun_type: Arrow) -> Derivation:
    """Classical ``|- weak_funext`` from FunExt."""
    f, g = fresh_var("f", fun_type), fresh_var("g", fun_type)
    h = all_of(_nn_pointwise_eq(f, g))
    c = (h,)
    x = fresh_var("x", fun_type.domain)
    e = eq(app(f, x), app(g, x))
    nn = conv(all_e(hyp(c, h), x), dneg(e))
    fe = funext(modus_ponens(dne(c, e), nn), x, f, g)
    return _close_weak_funext(imp_i(dn_intro(fe)), f, g)


def _translated_hypothesis(gamma: tuple[Term, ...], i: int) -> Derivation:
    """``G |- (G_i)_Ku`` from the hypothesis itself and ``(G_i)_Ku = G_i``."""
    h = gamma[i]
    sym = weaken(_symmetry(term_equality_derivation(h)), gamma)
    z = binder("z", O, h)
    return conv(eq_e(ax(gamma, i), sym, lam(z, z)), kuroda_term(h))


def _weak_funext_arrow(h: Term) -> Arrow | None:
    pred = match_forall(h)
    if pred is None or not isinstance(pred, Lam):
        return None
    ty = pred.var_type
    if isinstance(ty, Arrow) and h.key == weak_funext(ty.domain, ty.codomain).key:
        return ty
    return None


def reverse_translate(gamma: Sequence[Term], a: Term, d: Derivation,
                      flags: ExtFlags | None = None) -> Derivation:
    """Classical ``G |- A`` from an intuitionistic ``D, G_Ku |- A^Ku``.

    ``D`` may be any list of weak function-extensionality hypotheses.  The
    result uses FunExt and PropExt.
    """
    gamma = tuple(gamma)
    used = required_flags(d) if flags is None else flags
    result = check(d, CheckSettings(Flavor.INTUITIONISTIC, used))
    if not result:
        raise InputDoesNotCheck(str(result))
    gk = kuroda_context(gamma)
    if a.type != O or not alpha_beta_equiv(d.goal, kuroda_formula(a)):
        raise ConclusionMismatch(f"derivation proves {d.goal}, expected the translation of {a}")
    d = conv(d, kuroda_formula(a))
    k = len(d.context) - len(gk)
    if k < 0 or not _ctx_equal(d.context[k:], gk):
        raise ConclusionMismatch("context is not the translated hypotheses")
    arrows = [_weak_funext_arrow(h) for h in d.context[:k]]
    if any(t is None for t in arrows):
        raise ConclusionMismatch("leading hypotheses must be weak function extensionality")

    full = gamma + d.context
    body = weaken(d, gamma, position=0)
    ch = weaken(characterization_derivation(a), full)
    cur = modus_ponens(forward(ch), body)
    for j in range(len(full) - 1, len(gamma) - 1, -1):
        ctx = full[:j]
        c = j - len(gamma)
        if c >= k:
            proof = weaken_to(_translated_hypothesis(gamma, c - k), ctx)
        else:
            proof = weaken(_weak_funext_classical(arrows[c]), ctx)
        cur = modus_ponens(imp_i(cur), proof)
    return cur


# ---------------------------------------------------------------------------
# Counter-examples


@dataclass(frozen=True)
class ReverseCounterexample:
    gamma: tuple[Term, ...]
    goal: Term
    derivation: Derivation
    explanation: str


def reverse_counterexample() -> ReverseCounterexample:
    """An intuitionistic ``G_Ku |- A^Ku`` whose ``G |- A`` fails without extensionality.

    With ``G = forall q. R (q (\\x. ~~(P x))) (q (\\x. ~~(P' x)))`` and
    ``A = R (forall x. P x) (forall x. P' x)``, instantiating ``q`` with the
    quantifier constant proves ``A^Ku``.  In a model where the quantifier
    constant is interpreted by a function that is not extensional in its
    argument, ``G`` can hold while ``A`` fails.
    """
    pred = Arrow(IOTA, O)
    p, p2 = Const("P", pred), Const("P'", pred)
    r = Const("R", Arrow(O, Arrow(O, O)))
    q = Var("q", Arrow(pred, O))
    x = Var("x", IOTA)
    body = app(r, app(q, lam(x, dneg(app(p, x)))), app(q, lam(x, dneg(app(p2, x)))))
    gamma = (forall(q, body),)
    goal = app(r, all_of(lam(x, app(p, x))), all_of(lam(x, app(p2, x))))
    ctx = kuroda_context(gamma)
    d = conv(ax(ctx, 0), forall(q, dneg(body)))
    d = all_e(d, forall_const(IOTA))
    d = conv(d, kuroda_formula(goal))
    text = ("the right-hand side needs the two quantified predicates to be equal to "
            "their double-negated versions, which only extensionality provides")
    return ReverseCounterexample(gamma, goal, d, text)


@dataclass(frozen=True)
class CharacterizationCounterexample:
    formula: Term
    explanation: str


def characterization_counterexample() -> CharacterizationCounterexample:
    """A formula ``A`` for which ``A^Ku <=> A`` is not provable without extensionality."""
    pp = Const("P", Arrow(O, O))
    q = Const("Q", Arrow(IOTA, O))
    x = Var("x", IOTA)
    a = app(pp, all_of(lam(x, app(q, x))))
    text = ("the translation replaces forall x. Q x under P by forall x. ~~(Q x); the two "
            "arguments are classically equivalent but P may tell them apart in an "
            "intensional model, where a proposition denotes its truth value paired with "
            "a syntactic value; without extensionality the equivalence is not derivable")
    return CharacterizationCounterexample(a, text)
