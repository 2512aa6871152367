import pytest
from hypothesis import HealthCheck, given, settings
from strategies import classical_derivations, formulas

from kuroda_hol.deduction import (
    ALL_FLAG_SETS,
    CLASSICAL,
    E,
    EFP,
    EPS,
    CheckSettings,
    Derivation,
    ExtFlags,
    Flavor,
    Rule,
    Sequent,
    all_i,
    ax,
    check,
    conv,
    eq_i,
    or_il,
    pem,
    rules_used,
    top_i,
    weaken,
)
from kuroda_hol.kernel import IOTA, O, TOP, App, Arrow, Const, Var, disj, eq, imp, lam, neg

c = Const("c", IOTA)
P = Const("P", Arrow(IOTA, O))
A, B = Const("A", O), Const("B", O)
x = Var("x", IOTA)


def test_eq_i_accepted_with_eq():
    d = eq_i((), c)
    assert d.goal == eq(c, c)
    assert check(d, CheckSettings(Flavor.INTUITIONISTIC, E))


def test_eq_i_needs_flag():
    r = check(eq_i((), c), CheckSettings(Flavor.CLASSICAL, EPS))
    assert not r and r.path == ()


def test_pem_rejected_intuitionistically():
    d = pem((), A)
    r = check(d, CheckSettings(Flavor.INTUITIONISTIC, EPS))
    assert not r
    assert r.reason == "PEM-not-admitted"
    assert check(d, CLASSICAL)


def test_conv_single_step():
    src = App(lam(x, App(P, x)), c)
    d = conv(Derivation(Rule.AX, Sequent((src,), src), index=0), App(P, c))
    assert check(d)


def test_conv_rejects_unrelated():
    d = Derivation(Rule.CONV, Sequent((A,), B), (ax((A,), 0),))
    assert not check(d)


def test_reject_path_points_at_node():
    bad = Derivation(Rule.AX, Sequent((A,), B), index=0)
    d = Derivation(Rule.IMP_I, Sequent((), imp(A, B)), (bad,))
    r = check(d)
    assert not r and r.path == (0,)
    assert "0" in str(r)


def test_ax_index_out_of_range():
    assert not check(Derivation(Rule.AX, Sequent((A,), A), index=3))


def test_weaken_top():
    d = weaken(top_i(()), [A])
    assert d.context == (A,) and d.goal == TOP and check(d)


def test_weaken_shifts_ax():
    d = weaken(ax((A,), 0), [B])
    assert d.context == (B, A) and d.index == 1 and check(d)


def test_weaken_renames_eigenvariable():
    body = or_il(top_i(()), App(P, x))
    pred = lam(x, disj(TOP, App(P, x)))
    d = all_i(body, x, pred)
    assert check(d)
    w = weaken(d, [App(P, x)])
    assert check(w)
    assert w.term != x
    assert w.context == (App(P, x),)


def test_flags_need_eq():
    with pytest.raises(ValueError):
        ExtFlags(funext=True)
    assert ExtFlags.parse("efp") == EFP
    assert ExtFlags.parse("eps") == EPS


_DT = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@_DT
@given(classical_derivations(EPS))
def test_check_deterministic(d):
    assert check(d, CLASSICAL) == check(d, CLASSICAL)
    assert check(d, CLASSICAL)


@pytest.mark.parametrize("flags", ALL_FLAG_SETS, ids=str)
def test_flag_monotonicity(flags):
    @_DT
    @given(classical_derivations(flags))
    def run(d):
        s = CheckSettings(Flavor.CLASSICAL, flags)
        assert check(d, s)
        for bigger in ALL_FLAG_SETS:
            if flags <= bigger:
                assert check(d, CheckSettings(Flavor.CLASSICAL, bigger))
    run()


@_DT
@given(classical_derivations(E))
def test_classical_absorbs_intuitionistic(d):
    intuitionistic = check(d, CheckSettings(Flavor.INTUITIONISTIC, E))
    assert bool(intuitionistic) == (Rule.PEM not in rules_used(d))
    if intuitionistic:
        assert check(d, CheckSettings(Flavor.CLASSICAL, E))


@_DT
@given(classical_derivations(EFP), formulas(depth=2, scope=(x,)))
def test_weaken_preserves_acceptance(d, extra):
    s = CheckSettings(Flavor.CLASSICAL, EFP)
    assert check(d, s)
    assert check(weaken(d, [extra, neg(extra)]), s)
