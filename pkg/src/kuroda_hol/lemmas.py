"""Fixed intuitionistic proofs of ten standard facts about negation, and the
small combinators the translations compose them with.

Items, for formulas ``A``, ``B`` and a predicate ``P``:

 1. ``~~bot => bot``               6. ``~~(A => B) <=> (~~A => ~~B)``
 2. ``~~top => top``               7. ``~~(A /\\ B) <=> (~~A /\\ ~~B)``
 3. ``~~(A \\/ ~A)``                8. ``~(A \\/ B) <=> (~A /\\ ~B)``
 4. ``A => ~~A``                   9. ``~~forall P => forall x. ~~(P x)``
 5. ``~~~A <=> ~A``               10. ``~exists P <=> forall x. ~(P x)``

Every builder takes the context to work in, so its output never needs
weakening.
"""

from __future__ import annotations

from typing import Sequence

from .deduction import (
    ContextMismatch,
    Derivation,
    ShapeMismatch,
    _ctx_equal,
    all_e,
    all_i,
    and_el,
    and_er,
    and_i,
    bot_e,
    conv,
    ex_e,
    ex_i,
    hyp,
    imp_e,
    imp_i,
    not_e,
    not_i,
    or_e,
    or_il,
    or_ir,
    pem,
    top_i,
    weaken,
    weaken_to,
)
from .kernel import (
    BOT,
    O,
    TOP,
    Arrow,
    Term,
    TypeMismatch,
    Var,
    all_of,
    app,
    conj,
    disj,
    dneg,
    ex_of,
    fresh_var,
    iff,
    imp,
    lam,
    match_imp,
    match_neg,
    neg,
)

Ctx = Sequence[Term]


def _formula(a: Term | None, what: str) -> Term:
    if not isinstance(a, Term) or a.type != O:
        raise TypeMismatch(f"argument {what} must be a formula")
    return a


def _predicate(p: Term | None) -> Term:
    if not isinstance(p, Term) or not isinstance(p.type, Arrow) or p.type.codomain != O:
        raise TypeMismatch("argument P must be a predicate of type tau -> o")
    return p


def binder(base: str, ty, *avoid: Term) -> Var:
    """``base`` as a binder name unless a free variable of that name occurs in ``avoid``."""
    if any(v.name == base for t in avoid for v in t.free_vars):
        return fresh_var(base, ty)
    return Var(base, ty)


def pointwise(pred: Term, wrap) -> Term:
    """``\\x. wrap(pred x)`` with a binder that does not capture."""
    x = binder("x", pred.type.domain, pred)
    return lam(x, wrap(app(pred, x)))


def statement(item: int, a: Term | None = None, b: Term | None = None, pred: Term | None = None) -> Term:
    """The formula proved by :func:`negation_lemma` for the same arguments."""
    if item == 1:
        return imp(dneg(BOT), BOT)
    if item == 2:
        return imp(dneg(TOP), TOP)
    if item == 3:
        return dneg(disj(a, neg(a)))
    if item == 4:
        return imp(a, dneg(a))
    if item == 5:
        return iff(neg(dneg(a)), neg(a))
    if item == 6:
        return iff(dneg(imp(a, b)), imp(dneg(a), dneg(b)))
    if item == 7:
        return iff(dneg(conj(a, b)), conj(dneg(a), dneg(b)))
    if item == 8:
        return iff(neg(disj(a, b)), conj(neg(a), neg(b)))
    if item == 9:
        return imp(dneg(all_of(pred)), all_of(pointwise(pred, dneg)))
    if item == 10:
        return iff(neg(ex_of(pred)), all_of(pointwise(pred, neg)))
    raise ValueError(f"no item {item}")


def negation_lemma(item: int, a: Term | None = None, b: Term | None = None,
           pred: Term | None = None, context: Ctx = ()) -> Derivation:
    ctx = tuple(context)
    for h in ctx:
        _formula(h, "context entry")
    if item in (1, 2):
        return (_item1 if item == 1 else _item2)(ctx)
    if item in (3, 4, 5):
        return {3: _item3, 4: _item4, 5: _item5}[item](ctx, _formula(a, "A"))
    if item in (6, 7, 8):
        return {6: _item6, 7: _item7, 8: _item8}[item](ctx, _formula(a, "A"), _formula(b, "B"))
    if item in (9, 10):
        return (_item9 if item == 9 else _item10)(ctx, _predicate(pred))
    raise ValueError(f"no item {item}; items are 1..10")


def _item1(ctx):
    c1 = ctx + (dneg(BOT),)
    c2 = c1 + (BOT,)
    not_bot = not_i(hyp(c2, BOT))
    return imp_i(not_e(hyp(c1, dneg(BOT)), not_bot))


def _item2(ctx):
    return imp_i(top_i(ctx + (dneg(TOP),)))


def _item3(ctx, a):
    n = neg(disj(a, neg(a)))
    c1 = ctx + (n,)
    c2 = c1 + (a,)
    not_a = not_i(not_e(hyp(c2, n), or_il(hyp(c2, a), neg(a))))
    return not_i(not_e(hyp(c1, n), or_ir(a, not_a)))


def _item4(ctx, a):
    c2 = ctx + (a, neg(a))
    return imp_i(not_i(not_e(hyp(c2, neg(a)), hyp(c2, a))))


def _item5(ctx, a):
    c1 = ctx + (neg(dneg(a)),)
    c2 = c1 + (a,)
    c3 = c2 + (neg(a),)
    nna = not_i(not_e(hyp(c3, neg(a)), hyp(c3, a)))
    forward = imp_i(not_i(not_e(hyp(c2, neg(dneg(a))), nna)))
    return and_i(forward, _item4(ctx, neg(a)))


def _item6(ctx, a, b):
    i = imp(a, b)
    # ~~(A => B) => ~~A => ~~B
    c3 = ctx + (dneg(i), dneg(a), neg(b))
    c4 = c3 + (a,)
    c5 = c4 + (i,)
    not_i_ab = not_i(not_e(hyp(c5, neg(b)), imp_e(hyp(c5, i), hyp(c5, a))))
    not_a = not_i(not_e(hyp(c4, dneg(i)), not_i_ab))
    forward = imp_i(imp_i(not_i(not_e(hyp(c3, dneg(a)), not_a))))
    # (~~A => ~~B) => ~~(A => B)
    h = imp(dneg(a), dneg(b))
    c2 = ctx + (h, neg(i))
    c3b = c2 + (b,)
    not_b = not_i(not_e(hyp(c3b, neg(i)), imp_i(hyp(c3b + (a,), b))))
    c3a = c2 + (neg(a),)
    c4a = c3a + (a,)
    a_imp_b = imp_i(bot_e(not_e(hyp(c4a, neg(a)), hyp(c4a, a)), b))
    nna = not_i(not_e(hyp(c3a, neg(i)), a_imp_b))
    backward = imp_i(not_i(not_e(imp_e(hyp(c2, h), nna), not_b)))
    return and_i(forward, backward)


def _item7(ctx, a, b):
    c = conj(a, b)
    c1 = ctx + (dneg(c),)

    def nn_part(part, proj):
        c2 = c1 + (neg(part),)
        c3 = c2 + (c,)
        not_c = not_i(not_e(hyp(c3, neg(part)), proj(hyp(c3, c))))
        return not_i(not_e(hyp(c2, dneg(c)), not_c))

    forward = imp_i(and_i(nn_part(a, and_el), nn_part(b, and_er)))
    h = conj(dneg(a), dneg(b))
    c1b = ctx + (h,)
    c2 = c1b + (neg(c),)
    c3 = c2 + (a,)
    c4 = c3 + (b,)
    not_b = not_i(not_e(hyp(c4, neg(c)), and_i(hyp(c4, a), hyp(c4, b))))
    not_a = not_i(not_e(and_er(hyp(c3, h)), not_b))
    backward = imp_i(not_i(not_e(and_el(hyp(c2, h)), not_a)))
    return and_i(forward, backward)


def _item8(ctx, a, b):
    d = disj(a, b)
    c1 = ctx + (neg(d),)
    ca, cb = c1 + (a,), c1 + (b,)
    not_a = not_i(not_e(hyp(ca, neg(d)), or_il(hyp(ca, a), b)))
    not_b = not_i(not_e(hyp(cb, neg(d)), or_ir(a, hyp(cb, b))))
    forward = imp_i(and_i(not_a, not_b))
    h = conj(neg(a), neg(b))
    c2 = ctx + (h, d)
    left = not_e(and_el(hyp(c2 + (a,), h)), hyp(c2 + (a,), a))
    right = not_e(and_er(hyp(c2 + (b,), h)), hyp(c2 + (b,), b))
    backward = imp_i(not_i(or_e(hyp(c2, d), left, right)))
    return and_i(forward, backward)


def _item9(ctx, pred):
    x = fresh_var("x", pred.type.domain)
    px = app(pred, x)
    all_p = all_of(pred)
    c1 = ctx + (dneg(all_p),)
    c2 = c1 + (neg(px),)
    c3 = c2 + (all_p,)
    not_all = not_i(not_e(hyp(c3, neg(px)), all_e(hyp(c3, all_p), x)))
    nn_px = not_i(not_e(hyp(c2, dneg(all_p)), not_all))
    return imp_i(all_i(nn_px, x, pointwise(pred, dneg)))


def _item10(ctx, pred):
    x = fresh_var("x", pred.type.domain)
    px = app(pred, x)
    ex_p = ex_of(pred)
    q = pointwise(pred, neg)
    c2 = ctx + (neg(ex_p), px)
    not_px = not_i(not_e(hyp(c2, neg(ex_p)), ex_i(hyp(c2, px), pred, x)))
    forward = imp_i(all_i(not_px, x, q))
    h = all_of(q)
    c2b = ctx + (h, ex_p)
    c3 = c2b + (px,)
    bot = not_e(conv(all_e(hyp(c3, h), x), neg(px)), hyp(c3, px))
    backward = imp_i(not_i(ex_e(hyp(c2b, ex_p), bot, x)))
    return and_i(forward, backward)


# ---------------------------------------------------------------------------
# Combinators


def modus_ponens(d_imp: Derivation, d_arg: Derivation) -> Derivation:
    if not _ctx_equal(d_imp.context, d_arg.context):
        raise ContextMismatch("modus ponens on different contexts")
    parts = match_imp(d_imp.goal)
    if not parts:
        raise ShapeMismatch("first derivation does not prove an implication")
    if parts[0].key != d_arg.goal.key:
        raise ShapeMismatch("antecedent does not match the argument")
    return imp_e(d_imp, d_arg)


def cut(d_lemma: Derivation, d_use: Derivation) -> Derivation:
    """From ``G |- A`` and ``G, A |- B`` build ``G |- B``."""
    expected = d_lemma.context + (d_lemma.goal,)
    if not _ctx_equal(d_use.context, expected):
        raise ContextMismatch("the use must assume exactly the lemma's context plus its goal")
    return modus_ponens(imp_i(d_use), d_lemma)


def forward(d_iff: Derivation) -> Derivation:
    """``A => B`` from a derivation of ``A <=> B``."""
    return and_el(d_iff)


def backward(d_iff: Derivation) -> Derivation:
    return and_er(d_iff)


def dn_intro(d: Derivation) -> Derivation:
    """``G |- ~~A`` from ``G |- A`` (item 4)."""
    return modus_ponens(negation_lemma(4, d.goal, context=d.context), d)


def nn_map(d_nn: Derivation, d_fn: Derivation) -> Derivation:
    """``G |- ~~B`` from ``G |- ~~A`` and ``G |- A => B`` (items 4 and 6)."""
    a, b = match_imp(d_fn.goal)
    ctx = d_fn.context
    lifted = modus_ponens(forward(negation_lemma(6, a, b, context=ctx)), dn_intro(d_fn))
    return modus_ponens(lifted, d_nn)


def nn_map2(d_nn1: Derivation, d_nn2: Derivation, d_fn: Derivation) -> Derivation:
    """``G |- ~~C`` from ``~~A``, ``~~B`` and ``A => B => C``."""
    a, bc = match_imp(d_fn.goal)
    ctx = d_fn.context
    lifted = modus_ponens(forward(negation_lemma(6, a, bc, context=ctx)), dn_intro(d_fn))
    nn_bc = modus_ponens(lifted, d_nn1)
    b, c = match_imp(bc)
    lifted2 = modus_ponens(forward(negation_lemma(6, b, c, context=ctx)), nn_bc)
    return modus_ponens(lifted2, d_nn2)


def dne(ctx: Ctx, a: Term) -> Derivation:
    """Classical ``G |- ~~A => A`` by excluded middle."""
    c1 = tuple(ctx) + (dneg(a),)
    left = hyp(c1 + (a,), a)
    cn = c1 + (neg(a),)
    right = bot_e(not_e(hyp(cn, dneg(a)), hyp(cn, neg(a))), a)
    return imp_i(or_e(pem(c1, a), left, right))


def dn_equiv(ctx: Ctx, a: Term) -> Derivation:
    """Classical ``G |- A <=> ~~A``."""
    return and_i(negation_lemma(4, a, context=ctx), dne(ctx, a))


def iff_refl(ctx: Ctx, a: Term) -> Derivation:
    c1 = tuple(ctx) + (a,)
    half = imp_i(hyp(c1, a))
    return and_i(half, half)


def nn_bind(d_nn: Derivation, d_use: Derivation) -> Derivation:
    """``G |- ~~B`` from ``G |- ~~A`` and ``G, A |- ~~B``."""
    ctx = d_nn.context
    parts = match_neg(d_nn.goal)
    a = parts and match_neg(parts)
    if a is None or not _ctx_equal(d_use.context, ctx + (a,)):
        raise ShapeMismatch("nn_bind: expected G |- ~~A and G, A |- ~~B")
    not_b = match_neg(d_use.goal)
    if not_b is None:
        raise ShapeMismatch("nn_bind: the use must prove a double negation")
    b = match_neg(not_b)
    if b is None:
        raise ShapeMismatch("nn_bind: the use must prove a double negation")
    c1 = ctx + (neg(b),)
    use = weaken(d_use, (neg(b),), position=len(ctx))
    not_a = not_i(not_e(use, hyp(c1 + (a,), neg(b))))
    return not_i(not_e(weaken_to(d_nn, c1), not_a))
