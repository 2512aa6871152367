"""Acceptance criteria, one function each.

Run under pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from golden_runner import expected, load_cases, run  # noqa: E402

from kuroda_hol.deduction import (  # noqa: E402
    ALL_FLAG_SETS,
    CLASSICAL_EFP,
    EF,
    EP,
    INTUITIONISTIC,
    CheckSettings,
    Flavor,
    Rule,
    check,
    rules_used,
)
from kuroda_hol.fuzz import ARG_TYPES, SIGNATURE, DerivationGen, TermGen, random_reduct, uses  # noqa: E402
from kuroda_hol.kernel import IOTA, O, Arrow, Var, alpha_beta_equiv, alpha_equiv, eq, iff, substitute  # noqa: E402
from kuroda_hol.kuroda import kuroda_context, kuroda_formula, kuroda_term  # noqa: E402
from kuroda_hol.lemmas import negation_lemma, statement  # noqa: E402
from kuroda_hol.syntax import parse_formula, parse_term, print_term  # noqa: E402
from kuroda_hol.transform import (  # noqa: E402
    characterization_derivation,
    dne_eq_collapse,
    dns_implies_weak_funext,
    reverse_counterexample,
    reverse_translate,
    soundness_translate,
    term_equality_derivation,
)

TERM_TYPES = (IOTA, O, Arrow(IOTA, O), Arrow(O, O))
SCOPE = (Var("a", IOTA), Var("b", O), Var("f", Arrow(IOTA, O)), Var("g", Arrow(O, O)))
NO_CLASSICAL = {Rule.PEM, Rule.EQ_I, Rule.EQ_E, Rule.FUNEXT, Rule.PROPEXT}

RESULTS: dict[int, tuple[bool, str]] = {}


def _timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


def translation_laws(n=1000):
    rng = random.Random(1)
    gen = TermGen(rng)

    def go():
        failures = 0
        for _ in range(n):
            t = gen.term(rng.choice(TERM_TYPES), rng.randint(0, 6), SCOPE)
            z = rng.choice(SCOPE)
            w = gen.term(z.type, rng.randint(0, 3), SCOPE)
            ok = kuroda_term(t).type == t.type
            ok &= alpha_equiv(kuroda_term(substitute(t, z, w)),
                              substitute(kuroda_term(t), z, kuroda_term(w)))
            failures += not ok
        return failures

    failures, secs = _timed(go)
    return failures == 0 and secs < 10, f"{n} terms, {failures} failures, {secs:.2f}s (limit 10s)"


def beta_preservation(n=500):
    rng = random.Random(2)
    gen = TermGen(rng, redex_rate=0.4)
    pairs = failures = 0
    while pairs < n:
        t = gen.term(rng.choice(TERM_TYPES), rng.randint(1, 6), SCOPE)
        u = random_reduct(rng, t)
        if u is None:
            continue
        pairs += 1
        failures += not alpha_beta_equiv(kuroda_term(t), kuroda_term(u))
    return failures == 0, f"{pairs} pairs, {failures} failures"


def lemma_library(per_item=100):
    rng = random.Random(3)
    gen = TermGen(rng)
    failures = 0
    for item, _ in itertools.product(range(1, 11), range(per_item)):
        a = gen.formula(rng.randint(0, 4), SCOPE)
        b = gen.formula(rng.randint(0, 4), SCOPE)
        pred = gen.term(Arrow(rng.choice(ARG_TYPES), O), rng.randint(0, 4), SCOPE)
        d = negation_lemma(item, a, b, pred)
        ok = bool(check(d, INTUITIONISTIC)) and not rules_used(d) & NO_CLASSICAL
        ok &= alpha_equiv(d.goal, statement(item, a, b, pred))
        failures += not ok
    return failures == 0, f"10 items x {per_item} tuples, {failures} failures"


def soundness(per_set=300):
    def go():
        failures = funext_seen = 0
        for k, flags in enumerate(ALL_FLAG_SETS):
            dgen = DerivationGen(random.Random(40 + k), flags, max_height=8)
            for _ in range(per_set):
                d = dgen.derivation()
                res = soundness_translate(d, flags)
                out = res.derivation
                has_funext = uses(d, Rule.FUNEXT)
                funext_seen += has_funext
                ok = bool(check(out, CheckSettings(Flavor.INTUITIONISTIC, flags)))
                ok &= Rule.PEM not in rules_used(out)
                ok &= out.context == res.prefix + kuroda_context(d.context)
                ok &= alpha_equiv(out.goal, kuroda_formula(d.goal))
                ok &= bool(res.prefix) == has_funext
                failures += not ok
        return failures, funext_seen

    (failures, funext_seen), secs = _timed(go)
    detail = (f"{per_set} x {len(ALL_FLAG_SETS)} derivations, {failures} failures, "
              f"{funext_seen} with FunExt, {secs:.1f}s (limit 60s)")
    return failures == 0 and secs < 60, detail


def extensionality_auxiliaries(props=20):
    failures = 0
    types = (IOTA, O, Arrow(IOTA, O))
    for dom, cod in itertools.product(types, types):
        d = dns_implies_weak_funext(dom, cod)
        failures += not (check(d, CheckSettings(Flavor.INTUITIONISTIC, EF))
                         and Rule.PEM not in rules_used(d))
    rng = random.Random(5)
    gen = TermGen(rng)
    for _ in range(props):
        d = dne_eq_collapse(gen.closed_formula(rng.randint(0, 4)))
        failures += not (check(d, CheckSettings(Flavor.INTUITIONISTIC, EP))
                         and Rule.PEM not in rules_used(d))
    return failures == 0, f"9 type pairs + {props} propositions, {failures} failures"


def characterization(n=200):
    rng = random.Random(6)
    gen = TermGen(rng)
    failures = 0
    for _ in range(n):
        a = gen.closed_formula(rng.randint(0, 5))
        d = characterization_derivation(a)
        failures += not (check(d, CLASSICAL_EFP) and alpha_equiv(d.goal, iff(kuroda_formula(a), a)))
    for _ in range(n):
        t = gen.term(rng.choice(TERM_TYPES), rng.randint(0, 5))
        d = term_equality_derivation(t)
        failures += not (check(d, CLASSICAL_EFP) and alpha_equiv(d.goal, eq(kuroda_term(t), t)))
    return failures == 0, f"{n} formulas + {n} terms, {failures} failures"


def reverse_round_trip(n=100):
    failures = 0
    for k in range(n):
        flags = ALL_FLAG_SETS[k % len(ALL_FLAG_SETS)]
        d = DerivationGen(random.Random(700 + k), flags, max_height=8).derivation()
        res = soundness_translate(d, flags)
        out = reverse_translate(d.context, d.goal, res.derivation, flags)
        failures += not (check(out, CLASSICAL_EFP) and out.context == d.context
                         and alpha_equiv(out.goal, d.goal))
    return failures == 0, f"{n} round trips, {failures} failures"


# the displayed beta-normal forms, read from text rather than built in code
_DEMO_SIG = {"R": Arrow(O, Arrow(O, O)), "P": Arrow(IOTA, O), "P'": Arrow(IOTA, O)}
_GAMMA_KU = "forall q:(i -> o) -> o. ~~(R (q (\\x:i. ~~(P x))) (q (\\x:i. ~~(P' x))))"
_GOAL_KU = "~~(R (forall x:i. ~~(P x)) (forall x:i. ~~(P' x)))"


def counterexample_witness():
    def go():
        ce = reverse_counterexample()
        return ce, bool(check(ce.derivation, INTUITIONISTIC))

    (ce, ok), secs = _timed(go)
    (h,) = ce.derivation.context
    ok &= alpha_beta_equiv(h, parse_formula(_GAMMA_KU, _DEMO_SIG))
    ok &= alpha_beta_equiv(ce.derivation.goal, parse_formula(_GOAL_KU, _DEMO_SIG))
    return ok and secs < 1, f"checked in {secs * 1000:.0f}ms (limit 1s), forms match: {ok}"


def front_end(n=1000):
    rng = random.Random(9)
    gen = TermGen(rng)
    variables = {v.name: v.type for v in SCOPE}
    failures = 0
    for _ in range(n):
        t = gen.term(rng.choice(TERM_TYPES), rng.randint(0, 6), SCOPE)
        failures += not alpha_equiv(parse_term(print_term(t), SIGNATURE, variables), t)
    cases = load_cases()
    unstable = 0
    for case in cases:
        first, second = run(case["argv"]), run(case["argv"])
        unstable += not (first == second == expected(case["name"]))
    codes = {expected(c["name"])[0] for c in cases}
    ok = failures == 0 and unstable == 0 and len(cases) >= 12 and codes == {0, 1, 2}
    return ok, (f"{n} round trips, {failures} failures; {len(cases)} golden cases, "
                f"exit codes {sorted(codes)}, {unstable} unstable")


CRITERIA = {
    1: ("translation laws", translation_laws),
    2: ("beta preservation", beta_preservation),
    3: ("lemma library", lemma_library),
    4: ("soundness transformer", soundness),
    5: ("extensionality auxiliaries", extensionality_auxiliaries),
    6: ("characterization", characterization),
    7: ("reverse round trip", reverse_round_trip),
    8: ("counter-example witness", counterexample_witness),
    9: ("front end", front_end),
}


def report_line(number: int) -> str:
    ok, detail = RESULTS[number]
    return f"criterion {number} ({CRITERIA[number][0]}): {'PASS' if ok else 'FAIL'} - {detail}"


def _evaluate(number: int) -> tuple[bool, str]:
    try:
        RESULTS[number] = CRITERIA[number][1]()
    except Exception as e:  # a crash counts as a failure with its reason
        RESULTS[number] = (False, f"raised {type(e).__name__}: {e}")
    return RESULTS[number]


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"criterion{n}")
def test_criterion(number):
    ok, detail = _evaluate(number)
    print(report_line(number))
    assert ok, detail


if __name__ == "__main__":
    for number in sorted(CRITERIA):
        _evaluate(number)
        print(report_line(number), flush=True)
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
