"""Symbolic-expression proof files.

A document looks like::

    (proof
      (version 1)
      (flavor classical)
      (flags ef)
      (signature ("P" (-> i o)) ("c" i))
      (context <term> ...)
      (derivation <node>))

Nodes are ``(<rule> (goal <term>) [(term <term>)] [(index n)] [(context ...)]
[(premises <node> ...)])`` with rule names as printed by :class:`Rule`.  A
node's context is only written when it differs from the one its parent's
rule determines, so ordinary derivations store it once at the root.

Terms are ``(v "name" <type>)``, ``(c "name" <type>)``,
``(lam "name" <type> <body>)`` and ``(app <fun> <arg>)``; types are ``i``,
``o`` and ``(-> a b)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

import sexpdata
from sexpdata import Symbol

from .deduction import (
    ARITY,
    CheckSettings,
    Derivation,
    ExtFlags,
    Flavor,
    Rule,
    Sequent,
    _ctx_equal,
)
from .kernel import (
    IOTA,
    O,
    App,
    Arrow,
    Const,
    KernelError,
    Lam,
    SimpleType,
    Term,
    Var,
    app,
    base_name,
    constants,
    match_disj,
    match_exists,
    match_imp,
    match_neg,
    reserve_fresh,
)

VERSION = 1


class ProofFileError(Exception):
    pass


@dataclass
class ProofFile:
    derivation: Derivation
    settings: CheckSettings
    signature: dict[str, SimpleType] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Writing


def _q(name: str) -> str:
    return json.dumps(name)


def type_sexp(ty: SimpleType) -> str:
    if ty == IOTA:
        return "i"
    if ty == O:
        return "o"
    return f"(-> {type_sexp(ty.domain)} {type_sexp(ty.codomain)})"


def term_sexp(t: Term, names: dict[str, str] | None = None) -> str:
    """``names`` renumbers generated names in order of first appearance, so
    output does not depend on how many names were generated before."""
    parts: list[str] = []

    def name(n: str) -> str:
        if names is None or "%" not in n:
            return _q(n)
        m = names.get(n)
        if m is None:
            m = names[n] = f"{base_name(n)}%{len(names)}"
        return _q(m)

    def go(u: Term) -> None:
        if isinstance(u, Var):
            parts.append(f"(v {name(u.name)} {type_sexp(u.type)})")
        elif isinstance(u, Const):
            parts.append(f"(c {_q(u.name)} {type_sexp(u.type)})")
        elif isinstance(u, Lam):
            parts.append(f"(lam {name(u.name)} {type_sexp(u.var_type)} ")
            go(u.body)
            parts.append(")")
        else:
            parts.append("(app ")
            go(u.fun)
            parts.append(" ")
            go(u.arg)
            parts.append(")")

    go(t)
    return "".join(parts)


def premise_contexts(d: Derivation) -> list[tuple[Term, ...]]:
    """The contexts the rule of ``d`` gives its premises."""
    ctx = d.context
    rule = d.rule
    n = ARITY[rule]
    if rule in (Rule.IMP_I, Rule.NOT_I):
        parts = match_imp(d.goal) if rule is Rule.IMP_I else (match_neg(d.goal),)
        if parts and parts[0] is not None:
            return [ctx + (parts[0],)]
    if rule is Rule.OR_E and d.premises:
        parts = match_disj(d.premises[0].goal)
        if parts:
            return [ctx, ctx + (parts[0],), ctx + (parts[1],)]
    if rule is Rule.EX_E and d.premises and d.term is not None:
        pred = match_exists(d.premises[0].goal)
        if pred is not None:
            try:
                return [ctx, ctx + (app(pred, d.term),)]
            except KernelError:
                pass
    return [ctx] * max(n, len(d.premises))


def dumps(pf: ProofFile) -> str:
    d = pf.derivation
    sig = dict(pf.signature)
    for node in d.nodes():
        for t in node.context + (node.goal,) + ((node.term,) if node.term is not None else ()):
            for c in constants(t):
                if not c.is_logical:
                    sig.setdefault(c.name, c.type)
    lines = ["(proof", f"  (version {VERSION})", f"  (flavor {pf.settings.flavor.value})",
             f"  (flags {pf.settings.flags})"]
    decls = " ".join(f"({_q(n)} {type_sexp(ty)})" for n, ty in sorted(sig.items()))
    lines.append(f"  (signature{' ' + decls if decls else ''})")
    names: dict[str, str] = {}
    lines.append(_context_line(d.context, 2, names))
    lines.append("  (derivation")
    _write_node(d, d.context, 4, lines, names)
    lines[-1] += "))"
    return "\n".join(lines) + "\n"


def _context_line(ctx, indent: int, names: dict[str, str]) -> str:
    body = " ".join(term_sexp(h, names) for h in ctx)
    return " " * indent + f"(context{' ' + body if body else ''})"


def _write_node(d: Derivation, expected_ctx, indent: int, lines: list[str],
                names: dict[str, str]) -> None:
    # explicit stack: derivations may be deeper than the recursion limit
    stack = [(d, expected_ctx, indent, 0)]
    while stack:
        node, exp, ind, closers = stack.pop()
        pad = " " * ind
        lines.append(f"{pad}({node.rule.value}")
        lines.append(f"{pad}  (goal {term_sexp(node.goal, names)})")
        if node.term is not None:
            lines.append(f"{pad}  (term {term_sexp(node.term, names)})")
        if node.index is not None:
            lines.append(f"{pad}  (index {node.index})")
        if not _ctx_equal(node.context, exp):
            lines.append(_context_line(node.context, ind + 2, names))
        if not node.premises:
            lines[-1] += ")" + ")" * closers
            continue
        lines.append(f"{pad}  (premises")
        expected = premise_contexts(node)
        items = list(zip(node.premises, expected))
        for k in range(len(items) - 1, -1, -1):
            p, e = items[k]
            extra = closers + 2 if k == len(items) - 1 else 0
            stack.append((p, e, ind + 4, extra))


# ---------------------------------------------------------------------------
# Reading


def _sym(x) -> str | None:
    return x.value() if isinstance(x, Symbol) else None


def parse_type_sexp(x) -> SimpleType:
    s = _sym(x)
    if s == "i":
        return IOTA
    if s == "o":
        return O
    if isinstance(x, list) and len(x) == 3 and _sym(x[0]) == "->":
        return Arrow(parse_type_sexp(x[1]), parse_type_sexp(x[2]))
    raise ProofFileError(f"bad type {sexpdata.dumps(x)}")


class _Reader:
    def __init__(self, signature: Mapping[str, SimpleType]) -> None:
        self.signature = signature
        self.cache: dict[str, Term] = {}

    def term(self, x) -> Term:
        stack: list = [(x, False)]
        out: list[Term] = []
        while stack:
            item, ready = stack.pop()
            if not isinstance(item, list) or not item:
                raise ProofFileError(f"bad term {sexpdata.dumps(item)}")
            tag = _sym(item[0])
            try:
                if tag in ("v", "c"):
                    if len(item) != 3 or not isinstance(item[1], str):
                        raise ProofFileError(f"bad {tag} node")
                    name, ty = item[1], parse_type_sexp(item[2])
                    if tag == "v":
                        reserve_fresh(name)
                        out.append(Var(name, ty))
                    else:
                        out.append(self._const(name, ty))
                elif tag == "lam":
                    if len(item) != 4 or not isinstance(item[1], str):
                        raise ProofFileError("bad lam node")
                    if ready:
                        body = out.pop()
                        reserve_fresh(item[1])
                        out.append(Lam(item[1], parse_type_sexp(item[2]), body))
                    else:
                        stack.append((item, True))
                        stack.append((item[3], False))
                elif tag == "app":
                    if len(item) != 3:
                        raise ProofFileError("bad app node")
                    if ready:
                        arg = out.pop()
                        fun = out.pop()
                        out.append(App(fun, arg))
                    else:
                        stack.append((item, True))
                        stack.append((item[2], False))
                        stack.append((item[1], False))
                else:
                    raise ProofFileError(f"unknown term tag {tag!r}")
            except KernelError as e:
                raise ProofFileError(f"ill-typed term: {e}") from e
        return out[0]

    def _const(self, name: str, ty: SimpleType) -> Const:
        c = Const(name, ty)
        if c.is_logical:
            return c
        declared = self.signature.get(name)
        if declared is None:
            raise ProofFileError(f"constant {name!r} is not declared")
        if declared != ty:
            raise ProofFileError(f"constant {name!r} declared at {declared}, used at {ty}")
        return c


_RULES = {r.value: r for r in Rule}


def _fields(item: list, allowed: set[str]) -> dict[str, list]:
    out: dict[str, list] = {}
    for f in item:
        if not isinstance(f, list) or not f or _sym(f[0]) not in allowed:
            raise ProofFileError(f"unexpected field {sexpdata.dumps(f)}")
        key = _sym(f[0])
        if key in out:
            raise ProofFileError(f"duplicate field {key}")
        out[key] = f[1:]
    return out


def loads(text: str) -> ProofFile:
    try:
        doc = sexpdata.loads(text, true=None, false=None)
    except Exception as e:  # sexpdata raises several unrelated exception types
        raise ProofFileError(f"malformed s-expression: {e}") from e
    if not isinstance(doc, list) or not doc or _sym(doc[0]) != "proof":
        raise ProofFileError("expected (proof ...)")
    head = _fields(doc[1:], {"version", "flavor", "flags", "signature", "context", "derivation"})
    for req in ("version", "flavor", "flags", "derivation"):
        if req not in head:
            raise ProofFileError(f"missing field {req}")
    if head["version"] != [VERSION]:
        raise ProofFileError(f"unsupported version {head['version']}")
    try:
        flavor = Flavor(_sym(head["flavor"][0]) if head["flavor"] else None)
        flags = ExtFlags.parse(_sym(head["flags"][0]) if head["flags"] else "")
    except ValueError as e:
        raise ProofFileError(str(e)) from e
    sig: dict[str, SimpleType] = {}
    for decl in head.get("signature", []):
        if not (isinstance(decl, list) and len(decl) == 2 and isinstance(decl[0], str)):
            raise ProofFileError(f"bad declaration {sexpdata.dumps(decl)}")
        sig[decl[0]] = parse_type_sexp(decl[1])
    reader = _Reader(sig)
    root_ctx = tuple(reader.term(h) for h in head.get("context", []))
    if len(head["derivation"]) != 1:
        raise ProofFileError("derivation expects one node")
    d = _read_tree(head["derivation"][0], root_ctx, reader)
    return ProofFile(d, CheckSettings(flavor, flags), sig)


def _read_tree(x, ctx, reader: _Reader) -> Derivation:
    # nodes are built bottom-up, but contexts flow top-down: premises need
    # their parent's conclusion, so read each node's own fields first
    parsed: dict[int, tuple] = {}
    order: list = []
    stack: list = [(x, ctx, None)]
    while stack:
        item, exp_ctx, _ = stack.pop()
        if not isinstance(item, list) or not item or _sym(item[0]) not in _RULES:
            raise ProofFileError(f"expected a rule node, got {sexpdata.dumps(item)[:60]}")
        rule = _RULES[_sym(item[0])]
        f = _fields(item[1:], {"goal", "term", "index", "context", "premises"})
        if "goal" not in f or len(f["goal"]) != 1:
            raise ProofFileError(f"{rule.value} node without a goal")
        goal = reader.term(f["goal"][0])
        term = reader.term(f["term"][0]) if "term" in f else None
        index = None
        if "index" in f:
            if len(f["index"]) != 1 or not isinstance(f["index"][0], int):
                raise ProofFileError("index must be an integer")
            index = f["index"][0]
        node_ctx = tuple(reader.term(h) for h in f["context"]) if "context" in f else exp_ctx
        premises = f.get("premises", [])
        shell = Derivation(rule, Sequent(node_ctx, goal), (), term, index)
        parsed[id(item)] = (shell, premises)
        order.append(item)
        if premises:
            # contexts of premises depend on the first premise's goal (Or-E, Ex-E)
            first_goal = None
            if isinstance(premises[0], list):
                g = _fields(premises[0][1:], {"goal", "term", "index", "context", "premises"}).get("goal")
                first_goal = reader.term(g[0]) if g else None
            probe_premises = ()
            if first_goal is not None:
                probe_premises = (Derivation(Rule.TOP_I, Sequent(node_ctx, first_goal)),)
            probe = Derivation(rule, Sequent(node_ctx, goal), probe_premises, term, index)
            exp = premise_contexts(probe)
            exp += [node_ctx] * (len(premises) - len(exp))
            for p, e in zip(premises, exp):
                stack.append((p, e, item))
    built: dict[int, Derivation] = {}
    for item in reversed(order):
        shell, premises = parsed[id(item)]
        kids = tuple(built[id(p)] for p in premises)
        built[id(item)] = Derivation(shell.rule, shell.conclusion, kids, shell.term, shell.index)
    return built[id(x)]


def store(path, pf: ProofFile) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(pf))


def load(path) -> ProofFile:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
