import itertools

import pytest
from hypothesis import HealthCheck, given, settings
from strategies import classical_derivations, closed_formulas, rngs

from kuroda_hol.deduction import (
    ALL_FLAG_SETS,
    CLASSICAL_EFP,
    EF,
    EFP,
    EP,
    EPS,
    INTUITIONISTIC,
    CheckSettings,
    Derivation,
    Flavor,
    Rule,
    Sequent,
    all_i,
    check,
    hyp,
    pem,
    rules_used,
    top_i,
)
from kuroda_hol.fuzz import TermGen, uses
from kuroda_hol.kernel import (
    BOT,
    IOTA,
    O,
    TOP,
    App,
    Arrow,
    Const,
    Var,
    alpha_beta_equiv,
    alpha_equiv,
    app,
    disj,
    dneg,
    eq,
    exists,
    forall,
    forall_const,
    iff,
    lam,
    neg,
)
from kuroda_hol.kuroda import kuroda_context, kuroda_formula, kuroda_term
from kuroda_hol.lemmas import iff_refl, modus_ponens, negation_lemma
from kuroda_hol.transform import (
    ConclusionMismatch,
    InputDoesNotCheck,
    OracleOutputInvalid,
    OracleRefused,
    characterization_counterexample,
    characterization_derivation,
    characterization_from_oracle,
    dne_eq_collapse,
    dne_eq_instance,
    dns_implies_weak_funext,
    dns_instance,
    reverse_counterexample,
    reverse_translate,
    soundness_translate,
    term_equality_derivation,
    weak_funext,
)

x = Var("x", IOTA)
c = Const("c", IOTA)
A = Const("A", O)
P = Const("P", Arrow(IOTA, O))
Q = Const("Q", Arrow(IOTA, O))
TYPES = (IOTA, O, Arrow(IOTA, O))
SLOW = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _translated_ok(d, flags):
    res = soundness_translate(d, flags)
    out = res.derivation
    assert check(out, CheckSettings(Flavor.INTUITIONISTIC, flags))
    assert Rule.PEM not in rules_used(out)
    assert out.context == res.prefix + kuroda_context(d.context)
    assert alpha_equiv(out.goal, kuroda_formula(d.goal))
    return res


# soundness


def test_pem_node():
    d = pem((), A)
    res = _translated_ok(d, EPS)
    assert alpha_equiv(res.derivation.goal, dneg(disj(A, neg(A))))


def test_ax_node():
    fa = forall(x, App(P, x))
    res = _translated_ok(hyp((fa,), fa), EPS)
    assert res.derivation.context == (kuroda_term(fa),)


def test_all_i_over_pem():
    px = App(P, x)
    d = all_i(pem((), px), x, lam(x, disj(px, neg(px))))
    assert d.size() <= 3
    res = _translated_ok(d, EPS)
    assert alpha_beta_equiv(res.derivation.goal, dneg(forall(x, dneg(disj(px, neg(px))))))


def test_rejects_unchecked_input():
    bogus = Derivation(Rule.TOP_I, Sequent((), A))
    with pytest.raises(InputDoesNotCheck):
        soundness_translate(bogus, EPS)


def test_double_negated_context():
    fa = forall(x, App(P, x))
    res = soundness_translate(hyp((fa, A), A), EPS, double_negated_context=True)
    assert res.derivation.context == (dneg(kuroda_term(fa)), dneg(A))
    assert check(res.derivation, INTUITIONISTIC)


@pytest.mark.parametrize("flags", ALL_FLAG_SETS, ids=str)
def test_soundness_fuzzed(flags):
    @SLOW
    @given(classical_derivations(flags, max_height=7))
    def run(d):
        res = _translated_ok(d, flags)
        assert bool(res.prefix) == uses(d, Rule.FUNEXT)
    run()


# extensionality auxiliaries


@pytest.mark.parametrize("dom,cod", list(itertools.product(TYPES, TYPES)), ids=str)
def test_dns_implies_weak_funext(dom, cod):
    d = dns_implies_weak_funext(dom, cod)
    assert d.context == (dns_instance(dom),)
    assert d.goal == weak_funext(dom, cod)
    assert check(d, CheckSettings(Flavor.INTUITIONISTIC, EF))
    used = rules_used(d)
    assert Rule.FUNEXT in used and Rule.PEM not in used


@pytest.mark.parametrize("p", [TOP, A, App(P, c), forall(x, App(P, x))], ids=str)
def test_dne_eq_collapse(p):
    d = dne_eq_collapse(p)
    assert d.context == (dne_eq_instance(O),)
    assert alpha_equiv(d.goal, App(App(Const("imp", Arrow(O, Arrow(O, O))), dneg(p)), p))
    assert check(d, CheckSettings(Flavor.INTUITIONISTIC, EP))
    assert Rule.PEM not in rules_used(d)


# term equality and characterization


def test_term_equality_constant():
    d = term_equality_derivation(c)
    assert d.rule is Rule.EQ_I and d.size() == 1
    assert d.goal == eq(c, c)


def test_term_equality_forall_constant():
    d = term_equality_derivation(forall_const(IOTA))
    assert d.rule is Rule.FUNEXT
    assert check(d, CLASSICAL_EFP)
    assert alpha_equiv(d.goal, eq(kuroda_term(forall_const(IOTA)), forall_const(IOTA)))


def test_term_equality_application():
    t = forall(x, App(P, x))
    d = term_equality_derivation(t)
    assert Rule.EQ_E in rules_used(d)
    assert check(d, CLASSICAL_EFP)
    assert alpha_equiv(d.goal, eq(kuroda_term(t), t))


@SLOW
@given(rngs)
def test_term_equality_random(rng):
    gen = TermGen(rng)
    t = gen.term(rng.choice(TYPES + (Arrow(O, O),)), 4)
    d = term_equality_derivation(t)
    assert d.context == ()
    assert alpha_equiv(d.goal, eq(kuroda_term(t), t))
    assert check(d, CLASSICAL_EFP)


@pytest.mark.parametrize("a", [TOP, forall(x, App(P, x)), exists(x, App(P, x))], ids=str)
def test_characterization_examples(a):
    d = characterization_derivation(a)
    assert alpha_equiv(d.goal, iff(kuroda_formula(a), a))
    assert check(d, CLASSICAL_EFP)


@SLOW
@given(closed_formulas(depth=5))
def test_characterization_random(a):
    d = characterization_derivation(a)
    assert alpha_equiv(d.goal, iff(kuroda_formula(a), a))
    assert check(d, CLASSICAL_EFP)


def _never(atom):
    raise AssertionError(f"oracle consulted for {atom}")


def test_oracle_unused_for_bot():
    d = characterization_from_oracle(BOT, _never)
    assert check(d, CheckSettings(Flavor.CLASSICAL, EPS))


def test_oracle_through_conv():
    target = app(Q, c)

    def oracle(atom):
        assert alpha_equiv(atom, target)
        return iff_refl((), atom)

    a = App(lam(x, app(Q, x)), c)
    d = characterization_from_oracle(a, oracle)
    assert alpha_equiv(d.goal, iff(kuroda_formula(a), a))
    assert Rule.CONV in rules_used(d)
    assert check(d, CheckSettings(Flavor.CLASSICAL, EPS))


def test_oracle_first_order_shapes():
    px = app(Q, x)
    for a in (forall(x, px), exists(x, neg(px)), forall(x, disj(px, A))):
        d = characterization_from_oracle(a, lambda atom: iff_refl((), atom))
        assert check(d, CheckSettings(Flavor.CLASSICAL, EPS)), a


def test_oracle_refused():
    R = Const("R", Arrow(O, O))
    with pytest.raises(OracleRefused):
        characterization_from_oracle(App(R, A), lambda atom: None)


def test_oracle_output_invalid():
    R = Const("R", Arrow(O, O))
    with pytest.raises(OracleOutputInvalid):
        characterization_from_oracle(App(R, A), lambda atom: top_i(()))


# reverse translation


def test_reverse_trivial():
    d_i = modus_ponens(negation_lemma(4, TOP), top_i(()))
    out = reverse_translate([], TOP, d_i)
    assert out.context == () and out.goal == TOP
    assert check(out, CLASSICAL_EFP)


def test_reverse_mismatch():
    d_i = modus_ponens(negation_lemma(4, TOP), top_i(()))
    with pytest.raises(ConclusionMismatch):
        reverse_translate([], A, d_i)


def test_reverse_rejects_classical_input():
    with pytest.raises(InputDoesNotCheck):
        reverse_translate([], disj(A, neg(A)), pem((), A))


@pytest.mark.parametrize("flags", [EPS, EFP], ids=str)
def test_reverse_round_trip(flags):
    @SLOW
    @given(classical_derivations(flags, max_height=6))
    def run(d):
        res = soundness_translate(d, flags)
        out = reverse_translate(d.context, d.goal, res.derivation, flags)
        assert check(out, CLASSICAL_EFP)
        assert out.context == d.context
        assert alpha_equiv(out.goal, d.goal)
    run()


# counter-examples


def test_reverse_counterexample():
    ce = reverse_counterexample()
    assert check(ce.derivation, INTUITIONISTIC)
    assert ce.derivation.context == kuroda_context(ce.gamma)
    assert alpha_equiv(ce.derivation.goal, kuroda_formula(ce.goal))
    R = Const("R", Arrow(O, Arrow(O, O)))
    P2 = Const("P'", Arrow(IOTA, O))
    nn_all = lambda p: forall(x, dneg(App(p, x)))  # noqa: E731
    assert alpha_beta_equiv(ce.derivation.goal, dneg(app(R, nn_all(P), nn_all(P2))))


def test_characterization_counterexample():
    ce = characterization_counterexample()
    head, arg = ce.formula.fun, ce.formula.arg
    assert head.type == Arrow(O, O)
    assert kuroda_formula(ce.formula) == dneg(App(head, kuroda_term(arg)))
    assert "intensional" in ce.explanation
