"""Proof kernel for simple type theory with a double-negation translation
that turns classical derivations into intuitionistic ones."""

from .deduction import CheckSettings, Derivation, ExtFlags, Flavor, Rule, check, weaken
from .kernel import alpha_beta_equiv, beta_normalize, infer_type, substitute
from .kuroda import kuroda_context, kuroda_formula, kuroda_term
from .lemmas import cut, modus_ponens, negation_lemma
from .syntax import parse_formula, parse_term, print_term
from .transform import (
    characterization_derivation,
    characterization_from_oracle,
    dne_eq_collapse,
    dns_implies_weak_funext,
    reverse_translate,
    soundness_translate,
    term_equality_derivation,
)

__all__ = [
    "CheckSettings", "Derivation", "ExtFlags", "Flavor", "Rule", "check", "weaken",
    "alpha_beta_equiv", "beta_normalize", "infer_type", "substitute",
    "kuroda_context", "kuroda_formula", "kuroda_term",
    "cut", "modus_ponens", "negation_lemma",
    "parse_formula", "parse_term", "print_term",
    "characterization_derivation", "characterization_from_oracle", "dne_eq_collapse",
    "dns_implies_weak_funext", "reverse_translate", "soundness_translate",
    "term_equality_derivation",
]
