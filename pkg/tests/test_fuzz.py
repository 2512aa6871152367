import random

import pytest

from kuroda_hol.deduction import ALL_FLAG_SETS, CheckSettings, Flavor, Rule, check, required_flags, rules_used
from kuroda_hol.fuzz import DerivationGen, TermGen, random_reduct, redex_positions


@pytest.mark.parametrize("flags", ALL_FLAG_SETS, ids=str)
def test_derivations_respect_flags_and_height(flags):
    gen = DerivationGen(random.Random(11), flags, max_height=8)
    for _ in range(60):
        d = gen.derivation()
        assert d.height() <= 8
        assert required_flags(d) <= flags
        assert check(d, CheckSettings(Flavor.CLASSICAL, flags))


def test_generator_reaches_every_rule():
    seen = set()
    for k, flags in enumerate(ALL_FLAG_SETS):
        gen = DerivationGen(random.Random(k), flags)
        for _ in range(200):
            seen |= rules_used(gen.derivation())
    assert seen == set(Rule)


def test_reduct_removes_a_redex_or_returns_none():
    rng = random.Random(3)
    gen = TermGen(rng, redex_rate=0.5)
    for _ in range(200):
        t = gen.formula(4)
        u = random_reduct(rng, t)
        if not redex_positions(t):
            assert u is None
        else:
            assert u is not None and u.type == t.type
