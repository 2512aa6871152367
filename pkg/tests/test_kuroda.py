import itertools

import pytest
from hypothesis import given, settings
from strategies import SCOPE, beta_pairs, substitution_cases

from kuroda_hol.kernel import (
    BOT,
    IOTA,
    O,
    TOP,
    App,
    Arrow,
    Const,
    TypeMismatch,
    Var,
    alpha_beta_equiv,
    alpha_equiv,
    conj,
    disj,
    dneg,
    exists,
    forall,
    forall_const,
    imp,
    lam,
    match_binary,
    match_exists,
    match_forall,
    match_neg,
    neg,
    substitute,
)
from kuroda_hol.kuroda import kuroda_context, kuroda_formula, kuroda_normalized, kuroda_term, translate

x, y = Var("x", IOTA), Var("y", IOTA)
p = Var("p", Arrow(IOTA, O))
P = Const("P", Arrow(IOTA, O))
Q = Const("Q", Arrow(IOTA, Arrow(IOTA, O)))
c = Const("c", IOTA)
KU_FORALL = lam(p, App(forall_const(IOTA), lam(y, dneg(App(p, y)))))


def test_variable_fixed():
    assert kuroda_term(x) is x


def test_forall_constant():
    assert alpha_equiv(kuroda_term(forall_const(IOTA)), KU_FORALL)


def test_forall_application_left_unreduced():
    t = forall(y, App(P, y))
    out = kuroda_term(t)
    assert alpha_equiv(out, App(KU_FORALL, lam(y, App(P, y))))
    assert alpha_equiv(out.normal, forall(y, dneg(App(P, y))))


def test_formula_examples():
    assert kuroda_formula(BOT) == dneg(BOT)
    ex = exists(x, App(P, x))
    assert alpha_equiv(kuroda_formula(ex), dneg(ex))
    fa = forall(x, App(P, x))
    out = kuroda_formula(fa)
    assert alpha_equiv(out, dneg(App(KU_FORALL, lam(x, App(P, x)))))
    assert alpha_beta_equiv(out, dneg(forall(x, dneg(App(P, x)))))


def test_formula_needs_type_o():
    with pytest.raises(TypeMismatch):
        kuroda_formula(c)


def test_context_examples():
    assert kuroda_context([]) == ()
    assert kuroda_context([TOP]) == (TOP,)
    fa = forall(x, App(P, x))
    (h,) = kuroda_context([fa])
    assert alpha_equiv(h, App(KU_FORALL, lam(x, App(P, x))))


def test_translation_result():
    r = translate(forall(x, App(P, x)))
    assert r.outer == dneg(r.inner)
    assert translate(c).outer is None


@given(substitution_cases(depth=5))
def test_type_preserved(case):
    t, _, _ = case
    assert kuroda_term(t).type == t.type


@given(substitution_cases(depth=5))
def test_substitution_commutes(case):
    t, z, w = case
    lhs = kuroda_term(substitute(t, z, w))
    rhs = substitute(kuroda_term(t), z, kuroda_term(w))
    assert alpha_equiv(lhs, rhs)


@given(substitution_cases(depth=5))
def test_substitution_commutes_formula(case):
    t, z, w = case
    if t.type != O:
        t = App(Const("R", Arrow(t.type, O)), t)
    lhs = kuroda_formula(substitute(t, z, w))
    rhs = substitute(kuroda_formula(t), z, kuroda_term(w))
    assert alpha_equiv(lhs, rhs)


@settings(max_examples=150)
@given(beta_pairs())
def test_beta_preserved(pair):
    t, u = pair
    assert alpha_beta_equiv(kuroda_term(t), kuroda_term(u))
    if t.type == O:
        assert alpha_beta_equiv(kuroda_formula(t), kuroda_formula(u))


# first-order reference: atoms and the existential are untouched, every
# universal gets a double negation on its body

def _first_order(a):
    body = match_forall(a)
    if body is not None:
        return forall(body.var, dneg(_first_order(body.body)))
    body = match_exists(a)
    if body is not None:
        return exists(body.var, _first_order(body.body))
    inner = match_neg(a)
    if inner is not None:
        return neg(_first_order(inner))
    for name, build in (("and", conj), ("or", disj), ("imp", imp)):
        parts = match_binary(a, name)
        if parts is not None:
            return build(_first_order(parts[0]), _first_order(parts[1]))
    return a


def _shapes(depth):
    atoms = [TOP, BOT, App(P, x), App(App(Q, x), y), App(P, c)]
    if depth == 0:
        yield from atoms
        return
    smaller = list(_shapes(depth - 1))
    yield from smaller
    for a in smaller:
        yield neg(a)
        yield forall(x, a)
        yield exists(y, a)
    for a, b in itertools.product(smaller[:12], repeat=2):
        yield conj(a, b)
        yield disj(a, b)
        yield imp(a, b)


def test_first_order_agreement():
    count = 0
    for a in _shapes(2):
        expected = dneg(_first_order(a))
        assert alpha_equiv(kuroda_formula(a).normal, expected)
        assert alpha_equiv(kuroda_normalized(a), _first_order(a))
        count += 1
    assert count > 500


def test_scope_variables_untouched():
    for v in SCOPE:
        assert kuroda_term(v) is v
