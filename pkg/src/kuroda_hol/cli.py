"""Command-line front end.

Exit codes: 0 on success or acceptance, 1 when a derivation is rejected,
2 on usage, parse or file-format errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .deduction import CheckSettings, ExtFlags, Flavor, check, required_flags
from .kernel import KernelError
from .kuroda import kuroda_formula, kuroda_term
from .lemmas import negation_lemma
from .prooffile import ProofFile, ProofFileError, dumps, load
from .syntax import parse_formula, parse_signature, parse_term, print_term
from .transform import (
    TransformError,
    characterization_counterexample,
    characterization_derivation,
    reverse_counterexample,
    reverse_translate,
    soundness_translate,
)

OK, REJECT, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e


def _signature(path: str | None) -> dict:
    return parse_signature(_read(path)) if path else {}


def _load(path: str) -> ProofFile:
    try:
        return load(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _settings(pf: ProofFile, args) -> CheckSettings:
    flavor = Flavor(args.flavor) if getattr(args, "flavor", None) else pf.settings.flavor
    flags = ExtFlags.parse(args.flags) if getattr(args, "flags", None) is not None else pf.settings.flags
    return CheckSettings(flavor, flags)


def cmd_check(args) -> int:
    pf = _load(args.prooffile)
    result = check(pf.derivation, _settings(pf, args))
    print(result)
    if result:
        print(f"conclusion: {_sequent(pf.derivation.context, pf.derivation.goal)}")
    return OK if result else REJECT


def _sequent(ctx, goal) -> str:
    left = ", ".join(print_term(h) for h in ctx)
    return f"{left} |- {print_term(goal)}" if left else f"|- {print_term(goal)}"


def cmd_translate(args) -> int:
    sig = _signature(args.signature)
    if args.formula is not None:
        t = kuroda_formula(parse_formula(args.formula, sig))
    else:
        t = kuroda_term(parse_term(args.term, sig))
    print(print_term(t.normal if args.normalize else t))
    return OK


def cmd_transform(args) -> int:
    pf = _load(args.prooffile)
    try:
        res = soundness_translate(pf.derivation, pf.settings.flags,
                                  double_negated_context=args.dn_context)
    except TransformError as e:
        print(f"reject: {e}", file=sys.stderr)
        return REJECT
    _emit(dumps(ProofFile(res.derivation, res.settings, pf.signature)), args.output)
    return OK


def cmd_reverse(args) -> int:
    pf = _load(args.prooffile)
    sig = dict(pf.signature)
    sig.update(_signature(args.signature))
    gamma = []
    if args.gamma:
        for line in _read(args.gamma).splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                gamma.append(parse_formula(line, sig))
    goal = parse_formula(args.goal, sig)
    try:
        d = reverse_translate(gamma, goal, pf.derivation, pf.settings.flags)
    except TransformError as e:
        print(f"reject: {e}", file=sys.stderr)
        return REJECT
    settings = CheckSettings(Flavor.CLASSICAL, required_flags(d))
    _emit(dumps(ProofFile(d, settings, sig)), args.output)
    return OK


def cmd_lemma(args) -> int:
    sig = _signature(args.signature)
    a = parse_formula(args.a, sig) if args.a else None
    b = parse_formula(args.b, sig) if args.b else None
    pred = parse_term(args.pred, sig) if args.pred else None
    ctx = [parse_formula(h, sig) for h in args.hyp]
    needs = {1: (), 2: (), 3: ("a",), 4: ("a",), 5: ("a",), 6: ("a", "b"), 7: ("a", "b"),
             8: ("a", "b"), 9: ("pred",), 10: ("pred",)}
    if args.item not in needs:
        raise UsageError(f"no lemma {args.item}; lemmas are numbered 1 to 10")
    missing = [f"--{n}" for n in needs[args.item] if getattr(args, n) is None]
    if missing:
        raise UsageError(f"lemma {args.item} needs {' '.join(missing)}")
    d = negation_lemma(args.item, a, b, pred, ctx)
    _emit(dumps(ProofFile(d, CheckSettings(Flavor.INTUITIONISTIC, ExtFlags()), sig)), args.output)
    return OK


def cmd_demo(args) -> int:
    if args.which == "reverse-counterexample":
        ce = reverse_counterexample()
        for h in ce.gamma:
            print(f"Gamma: {print_term(h)}")
        print(f"A: {print_term(ce.goal)}")
        print(f"proves: {_sequent(ce.derivation.context, ce.derivation.goal)}")
        print(f"note: {ce.explanation}")
        text = dumps(ProofFile(ce.derivation, CheckSettings(Flavor.INTUITIONISTIC, ExtFlags())))
        if args.output:
            _emit(text, args.output)
            print(f"wrote {args.output}")
        else:
            sys.stdout.write(text)
        return OK
    ce = characterization_counterexample()
    print(f"A: {print_term(ce.formula)}")
    print(f"A^Ku: {print_term(kuroda_formula(ce.formula).normal)}")
    print(f"note: {ce.explanation}")
    return OK


def cmd_charac(args) -> int:
    sig = _signature(args.signature)
    d = characterization_derivation(parse_formula(args.formula, sig))
    settings = CheckSettings(Flavor.CLASSICAL, required_flags(d))
    _emit(dumps(ProofFile(d, settings, sig)), args.output)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kuroda-hol", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="check a proof file")
    c.add_argument("prooffile")
    c.add_argument("--flavor", choices=[f.value for f in Flavor], help="override the declared flavor")
    c.add_argument("--flags", help="override the declared flags (eps, e, ep, ef, efp)")
    c.set_defaults(run=cmd_check)

    t = sub.add_parser("translate", help="print the translation of a term or formula")
    g = t.add_mutually_exclusive_group(required=True)
    g.add_argument("--term")
    g.add_argument("--formula")
    t.add_argument("--normalize", action="store_true")
    t.add_argument("--signature")
    t.set_defaults(run=cmd_translate)

    tr = sub.add_parser("transform", help="translate a classical proof into an intuitionistic one")
    tr.add_argument("prooffile")
    tr.add_argument("-o", "--output")
    tr.add_argument("--dn-context", action="store_true",
                    help="double-negate the translated hypotheses as well")
    tr.set_defaults(run=cmd_transform)

    r = sub.add_parser("reverse", help="recover a classical proof from a translated one")
    r.add_argument("prooffile")
    r.add_argument("--gamma", help="file with one hypothesis per line")
    r.add_argument("--goal", required=True)
    r.add_argument("--signature")
    r.add_argument("-o", "--output")
    r.set_defaults(run=cmd_reverse)

    lm = sub.add_parser("lemma", help="write one of the ten negation lemmas as a proof file")
    lm.add_argument("item", type=int)
    lm.add_argument("--a")
    lm.add_argument("--b")
    lm.add_argument("--pred")
    lm.add_argument("--hyp", action="append", default=[], help="context hypothesis (repeatable)")
    lm.add_argument("--signature")
    lm.add_argument("-o", "--output")
    lm.set_defaults(run=cmd_lemma)

    dm = sub.add_parser("demo", help="show a counter-example")
    dm.add_argument("which", choices=["reverse-counterexample", "characterization-counterexample"])
    dm.add_argument("-o", "--output")
    dm.set_defaults(run=cmd_demo)

    ch = sub.add_parser("charac", help="prove A^Ku <=> A with extensionality")
    ch.add_argument("formula")
    ch.add_argument("--signature")
    ch.add_argument("-o", "--output")
    ch.set_defaults(run=cmd_charac)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (UsageError, KernelError, ProofFileError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


cli_main = main


if __name__ == "__main__":
    sys.exit(main())
