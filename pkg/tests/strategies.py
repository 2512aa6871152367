"""Hypothesis strategies wrapping the seeded generators in kuroda_hol.fuzz."""

from hypothesis import assume
from hypothesis import strategies as st

from kuroda_hol.fuzz import ARG_TYPES, DerivationGen, TermGen, random_reduct
from kuroda_hol.kernel import IOTA, O, Arrow, Var

TYPES = (IOTA, O, Arrow(IOTA, O), Arrow(O, O))
SCOPE = (Var("a", IOTA), Var("b", O), Var("f", Arrow(IOTA, O)))

rngs = st.randoms(use_true_random=False)


@st.composite
def typed_terms(draw, depth=4, scope=()):
    ty = draw(st.sampled_from(TYPES))
    return TermGen(draw(rngs)).term(ty, draw(st.integers(0, depth)), scope)


@st.composite
def formulas(draw, depth=4, scope=()):
    return TermGen(draw(rngs)).formula(draw(st.integers(0, depth)), scope)


def closed_formulas(depth=4):
    return formulas(depth, ())


@st.composite
def open_terms(draw, depth=4):
    return draw(typed_terms(depth, SCOPE))


@st.composite
def beta_pairs(draw, depth=5):
    """A term with at least one redex and a reduct after one or more steps."""
    rng = draw(rngs)
    gen = TermGen(rng, redex_rate=0.4)
    for _ in range(20):
        t = gen.term(draw(st.sampled_from(TYPES)), depth, SCOPE)
        u = random_reduct(rng, t)
        if u is not None:
            return t, u
    assume(False)


@st.composite
def substitution_cases(draw, depth=4):
    """(t, z, w) with z a variable that may occur in t and w of z's type."""
    rng = draw(rngs)
    gen = TermGen(rng)
    z = draw(st.sampled_from(SCOPE))
    t = gen.term(draw(st.sampled_from(TYPES)), draw(st.integers(0, depth)), SCOPE)
    w = gen.term(z.type, draw(st.integers(0, depth)), SCOPE)
    return t, z, w


@st.composite
def classical_derivations(draw, flags, max_height=6):
    return DerivationGen(draw(rngs), flags, max_height=max_height).derivation()


arg_types = st.sampled_from(ARG_TYPES)
