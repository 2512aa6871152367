"""Natural deduction for higher-order logic with optional equality rules.

A :class:`Derivation` is an explicit tree: every node stores its full
conclusion, so a tree can be checked locally node by node.  The builder
functions (``imp_i``, ``all_e``, ...) compute conclusions from premises and
are what the rest of the package uses to assemble proofs; :func:`check` is
independent of them and trusts nothing but the tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

from .kernel import (
    BOT,
    O,
    TOP,
    Arrow,
    Term,
    Var,
    alpha_beta_equiv,
    all_of,
    app,
    conj,
    disj,
    eq,
    ex_of,
    fresh_var,
    iff,
    imp,
    match_conj,
    match_disj,
    match_eq,
    match_exists,
    match_forall,
    match_imp,
    match_neg,
    neg,
    substitute,
)


class DeductionError(Exception):
    pass


class ContextMismatch(DeductionError):
    pass


class ShapeMismatch(DeductionError):
    pass


class Flavor(Enum):
    CLASSICAL = "classical"
    INTUITIONISTIC = "intuitionistic"


@dataclass(frozen=True)
class ExtFlags:
    eq: bool = False
    funext: bool = False
    propext: bool = False

    def __post_init__(self) -> None:
        if (self.funext or self.propext) and not self.eq:
            raise ValueError("FunExt and PropExt require the equality rules")

    @classmethod
    def parse(cls, star: str) -> "ExtFlags":
        """Parse one of ``""``/``eps``, ``e``, ``ep``, ``ef``, ``efp``."""
        letters = "" if star in ("", "eps") else star
        if set(letters) - set("efp") or len(set(letters)) != len(letters):
            raise ValueError(f"unknown flag set {star!r}")
        return cls("e" in letters, "f" in letters, "p" in letters)

    @property
    def star(self) -> str:
        return ("e" if self.eq else "") + ("f" if self.funext else "") + ("p" if self.propext else "")

    def __str__(self) -> str:
        return self.star or "eps"

    def __or__(self, other: "ExtFlags") -> "ExtFlags":
        return ExtFlags(self.eq or other.eq, self.funext or other.funext, self.propext or other.propext)

    def __le__(self, other: "ExtFlags") -> bool:
        return (
            (not self.eq or other.eq)
            and (not self.funext or other.funext)
            and (not self.propext or other.propext)
        )


EPS = ExtFlags()
E = ExtFlags(eq=True)
EP = ExtFlags(eq=True, propext=True)
EF = ExtFlags(eq=True, funext=True)
EFP = ExtFlags(eq=True, funext=True, propext=True)
ALL_FLAG_SETS = (EPS, E, EP, EF, EFP)


@dataclass(frozen=True)
class CheckSettings:
    flavor: Flavor = Flavor.INTUITIONISTIC
    flags: ExtFlags = EPS


INTUITIONISTIC = CheckSettings(Flavor.INTUITIONISTIC, EPS)
CLASSICAL = CheckSettings(Flavor.CLASSICAL, EPS)
CLASSICAL_EFP = CheckSettings(Flavor.CLASSICAL, EFP)


class Rule(Enum):
    IMP_I = "Imp-I"
    IMP_E = "Imp-E"
    AND_I = "And-I"
    AND_EL = "And-EL"
    AND_ER = "And-ER"
    OR_IL = "Or-IL"
    OR_IR = "Or-IR"
    OR_E = "Or-E"
    NOT_I = "Not-I"
    NOT_E = "Not-E"
    BOT_E = "Bot-E"
    TOP_I = "Top-I"
    ALL_I = "All-I"
    ALL_E = "All-E"
    EX_I = "Ex-I"
    EX_E = "Ex-E"
    AX = "Ax"
    CONV = "Conv"
    PEM = "PEM"
    EQ_I = "Eq-I"
    EQ_E = "Eq-E"
    FUNEXT = "FunExt"
    PROPEXT = "PropExt"


ARITY = {
    Rule.IMP_I: 1, Rule.IMP_E: 2, Rule.AND_I: 2, Rule.AND_EL: 1, Rule.AND_ER: 1,
    Rule.OR_IL: 1, Rule.OR_IR: 1, Rule.OR_E: 3, Rule.NOT_I: 1, Rule.NOT_E: 2,
    Rule.BOT_E: 1, Rule.TOP_I: 0, Rule.ALL_I: 1, Rule.ALL_E: 1, Rule.EX_I: 1,
    Rule.EX_E: 2, Rule.AX: 0, Rule.CONV: 1, Rule.PEM: 0, Rule.EQ_I: 0,
    Rule.EQ_E: 2, Rule.FUNEXT: 1, Rule.PROPEXT: 1,
}

# rules whose payload is an eigenvariable
BINDING_RULES = frozenset({Rule.ALL_I, Rule.EX_E, Rule.FUNEXT})
# rules whose payload is a term (witness or motive)
TERM_RULES = frozenset({Rule.ALL_E, Rule.EX_I, Rule.EQ_E}) | BINDING_RULES


@dataclass(frozen=True)
class Sequent:
    context: tuple[Term, ...]
    goal: Term

    def __post_init__(self) -> None:
        object.__setattr__(self, "context", tuple(self.context))


@dataclass(frozen=True, eq=False)
class Derivation:
    """One inference.  ``term`` holds the eigenvariable (All-I, Ex-E, FunExt),
    the witness (All-E, Ex-I) or the motive (Eq-E); ``index`` the hypothesis
    position for Ax."""

    rule: Rule
    conclusion: Sequent
    premises: tuple["Derivation", ...] = ()
    term: Term | None = None
    index: int | None = None

    @property
    def context(self) -> tuple[Term, ...]:
        return self.conclusion.context

    @property
    def goal(self) -> Term:
        return self.conclusion.goal

    def nodes(self) -> Iterator["Derivation"]:
        """Pre-order traversal, premises left to right."""
        stack = [self]
        while stack:
            d = stack.pop()
            yield d
            stack.extend(reversed(d.premises))

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def height(self) -> int:
        memo: dict[int, int] = {}

        def go(d: Derivation) -> int:
            h = memo.get(id(d))
            if h is None:
                h = 1 + max((go(p) for p in d.premises), default=0)
                memo[id(d)] = h
            return h

        return go(self)


def rules_used(d: Derivation) -> set[Rule]:
    return {n.rule for n in d.nodes()}


def required_flags(d: Derivation) -> ExtFlags:
    used = rules_used(d)
    funext = Rule.FUNEXT in used
    propext = Rule.PROPEXT in used
    eq_rules = funext or propext or bool(used & {Rule.EQ_I, Rule.EQ_E})
    return ExtFlags(eq_rules, funext, propext)


def required_settings(d: Derivation) -> CheckSettings:
    flavor = Flavor.CLASSICAL if Rule.PEM in rules_used(d) else Flavor.INTUITIONISTIC
    return CheckSettings(flavor, required_flags(d))


# ---------------------------------------------------------------------------
# Checking


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    path: tuple[int, ...] = ()
    reason: str = ""
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "accept"
        where = "/".join(map(str, self.path)) or "root"
        text = f"reject at {where}: {self.reason}"
        return f"{text} ({self.detail})" if self.detail else text


ACCEPT = CheckResult(True)


class _Reject(Exception):
    def __init__(self, reason: str, detail: str = "") -> None:
        super().__init__(reason)
        self.reason = reason
        self.detail = detail
        self.path: list[int] = []


def _ctx_equal(a: Sequence[Term], b: Sequence[Term]) -> bool:
    if a is b:
        return True
    return len(a) == len(b) and all(x is y or x.key == y.key for x, y in zip(a, b))


def check(d: Derivation, settings: CheckSettings = INTUITIONISTIC) -> CheckResult:
    """Verify every node of ``d``.  Rejection carries the path of premise
    indices from the root to the first offending node."""
    accepted: set[int] = set()
    try:
        _check(d, settings, accepted)
    except _Reject as r:
        r.path.reverse()
        return CheckResult(False, tuple(r.path), r.reason, r.detail)
    return ACCEPT


def _check(d: Derivation, settings: CheckSettings, accepted: set[int]) -> None:
    if id(d) in accepted:
        return
    _check_node(d, settings)
    for i, p in enumerate(d.premises):
        try:
            _check(p, settings, accepted)
        except _Reject as r:
            r.path.append(i)
            raise
    accepted.add(id(d))


def _admitted(rule: Rule, settings: CheckSettings) -> bool:
    flags = settings.flags
    if rule is Rule.PEM:
        return settings.flavor is Flavor.CLASSICAL
    if rule in (Rule.EQ_I, Rule.EQ_E):
        return flags.eq
    if rule is Rule.FUNEXT:
        return flags.funext
    if rule is Rule.PROPEXT:
        return flags.propext
    return True


def _need(cond: object, reason: str, detail: str = "") -> None:
    if not cond:
        raise _Reject(reason, detail)


def _same(a: Term, b: Term) -> bool:
    return a is b or a.key == b.key


def _check_node(d: Derivation, settings: CheckSettings) -> None:
    rule = d.rule
    if not isinstance(rule, Rule):
        raise _Reject("unknown-rule", repr(rule))
    if not _admitted(rule, settings):
        raise _Reject(f"{rule.value}-not-admitted")
    ps = d.premises
    _need(len(ps) == ARITY[rule], "arity", f"{rule.value} expects {ARITY[rule]} premises")
    ctx, goal = d.context, d.goal
    _need(goal.type == O, "not-a-formula", "goal")
    _need(all(h.type == O for h in ctx), "not-a-formula", "context")
    if rule in TERM_RULES:
        _need(isinstance(d.term, Term), "missing-payload")
    extended: dict[int, Term] = {}

    if rule is Rule.AX:
        i = d.index
        _need(isinstance(i, int) and 0 <= i < len(ctx), "bad-index")
        _need(_same(ctx[i], goal), "hypothesis-mismatch")
    elif rule is Rule.IMP_I:
        parts = match_imp(goal)
        _need(parts, "shape-mismatch", "goal is not an implication")
        a, b = parts
        extended[0] = a
        _need(_same(ps[0].goal, b), "shape-mismatch", "premise is not the consequent")
    elif rule is Rule.IMP_E:
        _need(_same(ps[0].goal, imp(ps[1].goal, goal)), "shape-mismatch")
    elif rule is Rule.AND_I:
        parts = match_conj(goal)
        _need(parts, "shape-mismatch", "goal is not a conjunction")
        _need(_same(ps[0].goal, parts[0]) and _same(ps[1].goal, parts[1]), "shape-mismatch")
    elif rule in (Rule.AND_EL, Rule.AND_ER):
        parts = match_conj(ps[0].goal)
        _need(parts, "shape-mismatch", "premise is not a conjunction")
        _need(_same(parts[0 if rule is Rule.AND_EL else 1], goal), "shape-mismatch")
    elif rule in (Rule.OR_IL, Rule.OR_IR):
        parts = match_disj(goal)
        _need(parts, "shape-mismatch", "goal is not a disjunction")
        _need(_same(ps[0].goal, parts[0 if rule is Rule.OR_IL else 1]), "shape-mismatch")
    elif rule is Rule.OR_E:
        parts = match_disj(ps[0].goal)
        _need(parts, "shape-mismatch", "premise is not a disjunction")
        extended[1], extended[2] = parts
        _need(_same(ps[1].goal, goal) and _same(ps[2].goal, goal), "shape-mismatch")
    elif rule is Rule.NOT_I:
        a = match_neg(goal)
        _need(a is not None, "shape-mismatch", "goal is not a negation")
        extended[0] = a
        _need(_same(ps[0].goal, BOT), "shape-mismatch")
    elif rule is Rule.NOT_E:
        _need(_same(goal, BOT), "shape-mismatch")
        _need(_same(ps[0].goal, neg(ps[1].goal)), "shape-mismatch")
    elif rule is Rule.BOT_E:
        _need(_same(ps[0].goal, BOT), "shape-mismatch")
    elif rule is Rule.TOP_I:
        _need(_same(goal, TOP), "shape-mismatch")
    elif rule is Rule.ALL_I:
        pred = match_forall(goal)
        _need(pred is not None, "shape-mismatch", "goal is not universal")
        x = d.term
        _need(isinstance(x, Var) and x.type == pred.type.domain, "bad-eigenvariable")
        _need(_same(ps[0].goal, app(pred, x)), "shape-mismatch")
        _need(x not in pred.free_vars and all(x not in h.free_vars for h in ctx),
              "eigenvariable-not-fresh", x.name)
    elif rule is Rule.ALL_E:
        pred = match_forall(ps[0].goal)
        _need(pred is not None, "shape-mismatch", "premise is not universal")
        _need(d.term.type == pred.type.domain, "ill-typed-witness")
        _need(_same(goal, app(pred, d.term)), "shape-mismatch")
    elif rule is Rule.EX_I:
        pred = match_exists(goal)
        _need(pred is not None, "shape-mismatch", "goal is not existential")
        _need(d.term.type == pred.type.domain, "ill-typed-witness")
        _need(_same(ps[0].goal, app(pred, d.term)), "shape-mismatch")
    elif rule is Rule.EX_E:
        pred = match_exists(ps[0].goal)
        _need(pred is not None, "shape-mismatch", "premise is not existential")
        x = d.term
        _need(isinstance(x, Var) and x.type == pred.type.domain, "bad-eigenvariable")
        extended[1] = app(pred, x)
        _need(_same(ps[1].goal, goal), "shape-mismatch")
        _need(x not in pred.free_vars and x not in goal.free_vars
              and all(x not in h.free_vars for h in ctx),
              "eigenvariable-not-fresh", x.name)
    elif rule is Rule.CONV:
        _need(alpha_beta_equiv(ps[0].goal, goal), "not-beta-equivalent")
    elif rule is Rule.PEM:
        parts = match_disj(goal)
        _need(parts, "shape-mismatch", "goal is not a disjunction")
        other = match_neg(parts[1])
        _need(other is not None and _same(other, parts[0]), "shape-mismatch")
    elif rule is Rule.EQ_I:
        parts = match_eq(goal)
        _need(parts and _same(parts[0], parts[1]), "shape-mismatch")
    elif rule is Rule.EQ_E:
        parts = match_eq(ps[1].goal)
        _need(parts, "shape-mismatch", "second premise is not an equation")
        u, v = parts
        motive = d.term
        _need(isinstance(motive.type, Arrow) and motive.type == Arrow(u.type, O), "ill-typed-motive")
        _need(_same(ps[0].goal, app(motive, u)), "shape-mismatch")
        _need(_same(goal, app(motive, v)), "shape-mismatch")
    elif rule is Rule.FUNEXT:
        parts = match_eq(goal)
        _need(parts and isinstance(parts[0].type, Arrow), "shape-mismatch")
        f, g = parts
        x = d.term
        _need(isinstance(x, Var) and x.type == f.type.domain, "bad-eigenvariable")
        _need(_same(ps[0].goal, eq(app(f, x), app(g, x))), "shape-mismatch")
        _need(x not in f.free_vars and x not in g.free_vars
              and all(x not in h.free_vars for h in ctx),
              "eigenvariable-not-fresh", x.name)
    elif rule is Rule.PROPEXT:
        parts = match_eq(goal)
        _need(parts and parts[0].type == O, "shape-mismatch")
        _need(_same(ps[0].goal, iff(*parts)), "shape-mismatch")

    for i, p in enumerate(ps):
        expected = ctx + (extended[i],) if i in extended else ctx
        if not _ctx_equal(p.context, expected):
            r = _Reject("context-mismatch", f"premise {i}")
            raise r


# ---------------------------------------------------------------------------
# Builders.  Each computes the conclusion of one inference from its premises.


def _node(rule: Rule, ctx: Sequence[Term], goal: Term, premises=(), term=None, index=None) -> Derivation:
    return Derivation(rule, Sequent(tuple(ctx), goal), tuple(premises), term, index)


def _require_ctx(*ds: Derivation) -> tuple[Term, ...]:
    ctx = ds[0].context
    for d in ds[1:]:
        if not _ctx_equal(ctx, d.context):
            raise ContextMismatch("premises have different contexts")
    return ctx


def ax(ctx: Sequence[Term], index: int) -> Derivation:
    ctx = tuple(ctx)
    return _node(Rule.AX, ctx, ctx[index], index=index)


def hyp(ctx: Sequence[Term], a: Term) -> Derivation:
    """Ax on the last hypothesis alpha-equal to ``a``."""
    ctx = tuple(ctx)
    for i in range(len(ctx) - 1, -1, -1):
        if _same(ctx[i], a):
            return _node(Rule.AX, ctx, ctx[i], index=i)
    raise ContextMismatch(f"no hypothesis {a}")


def imp_i(d: Derivation) -> Derivation:
    """Discharge the last hypothesis of ``d``."""
    if not d.context:
        raise ContextMismatch("Imp-I needs a hypothesis to discharge")
    *ctx, a = d.context
    return _node(Rule.IMP_I, ctx, imp(a, d.goal), [d])


def imp_e(d_imp: Derivation, d_arg: Derivation) -> Derivation:
    ctx = _require_ctx(d_imp, d_arg)
    parts = match_imp(d_imp.goal)
    if not parts or not _same(parts[0], d_arg.goal):
        raise ShapeMismatch("Imp-E: antecedent does not match argument")
    return _node(Rule.IMP_E, ctx, parts[1], [d_imp, d_arg])


def and_i(d1: Derivation, d2: Derivation) -> Derivation:
    ctx = _require_ctx(d1, d2)
    return _node(Rule.AND_I, ctx, conj(d1.goal, d2.goal), [d1, d2])


def _conj_parts(d: Derivation) -> tuple[Term, Term]:
    parts = match_conj(d.goal)
    if not parts:
        raise ShapeMismatch("expected a conjunction")
    return parts


def and_el(d: Derivation) -> Derivation:
    return _node(Rule.AND_EL, d.context, _conj_parts(d)[0], [d])


def and_er(d: Derivation) -> Derivation:
    return _node(Rule.AND_ER, d.context, _conj_parts(d)[1], [d])


def or_il(d: Derivation, b: Term) -> Derivation:
    return _node(Rule.OR_IL, d.context, disj(d.goal, b), [d])


def or_ir(a: Term, d: Derivation) -> Derivation:
    return _node(Rule.OR_IR, d.context, disj(a, d.goal), [d])


def or_e(d: Derivation, d_left: Derivation, d_right: Derivation) -> Derivation:
    parts = match_disj(d.goal)
    if not parts:
        raise ShapeMismatch("Or-E: expected a disjunction")
    if not (_ctx_equal(d_left.context, d.context + (parts[0],))
            and _ctx_equal(d_right.context, d.context + (parts[1],))):
        raise ContextMismatch("Or-E: branch contexts")
    if not _same(d_left.goal, d_right.goal):
        raise ShapeMismatch("Or-E: branches prove different goals")
    return _node(Rule.OR_E, d.context, d_left.goal, [d, d_left, d_right])


def not_i(d: Derivation) -> Derivation:
    if not d.context or not _same(d.goal, BOT):
        raise ShapeMismatch("Not-I needs a refutation of the last hypothesis")
    *ctx, a = d.context
    return _node(Rule.NOT_I, ctx, neg(a), [d])


def not_e(d_neg: Derivation, d_pos: Derivation) -> Derivation:
    ctx = _require_ctx(d_neg, d_pos)
    if not _same(d_neg.goal, neg(d_pos.goal)):
        raise ShapeMismatch("Not-E: premises do not contradict")
    return _node(Rule.NOT_E, ctx, BOT, [d_neg, d_pos])


def bot_e(d: Derivation, a: Term) -> Derivation:
    if not _same(d.goal, BOT):
        raise ShapeMismatch("Bot-E: premise is not bot")
    return _node(Rule.BOT_E, d.context, a, [d])


def top_i(ctx: Sequence[Term]) -> Derivation:
    return _node(Rule.TOP_I, ctx, TOP)


def conv(d: Derivation, b: Term) -> Derivation:
    """Rewrite the goal to a beta-equivalent ``b`` (no node if alpha-equal)."""
    if _same(d.goal, b):
        return d
    if not alpha_beta_equiv(d.goal, b):
        raise ShapeMismatch(f"Conv: {d.goal} and {b} are not beta-equivalent")
    return _node(Rule.CONV, d.context, b, [d])


def all_i(d: Derivation, x: Var, pred: Term) -> Derivation:
    """From ``ctx |- pred x`` (up to beta) conclude ``ctx |- forall pred``."""
    d = conv(d, app(pred, x))
    return _node(Rule.ALL_I, d.context, all_of(pred), [d], term=x)


def all_e(d: Derivation, t: Term) -> Derivation:
    pred = match_forall(d.goal)
    if pred is None:
        raise ShapeMismatch("All-E: premise is not universal")
    return _node(Rule.ALL_E, d.context, app(pred, t), [d], term=t)


def ex_i(d: Derivation, pred: Term, t: Term) -> Derivation:
    d = conv(d, app(pred, t))
    return _node(Rule.EX_I, d.context, ex_of(pred), [d], term=t)


def ex_e(d_ex: Derivation, d_use: Derivation, x: Var) -> Derivation:
    pred = match_exists(d_ex.goal)
    if pred is None:
        raise ShapeMismatch("Ex-E: premise is not existential")
    if not _ctx_equal(d_use.context, d_ex.context + (app(pred, x),)):
        raise ContextMismatch("Ex-E: second premise must assume pred x last")
    return _node(Rule.EX_E, d_ex.context, d_use.goal, [d_ex, d_use], term=x)


def pem(ctx: Sequence[Term], a: Term) -> Derivation:
    return _node(Rule.PEM, ctx, disj(a, neg(a)))


def eq_i(ctx: Sequence[Term], u: Term) -> Derivation:
    return _node(Rule.EQ_I, ctx, eq(u, u))


def eq_e(d_pu: Derivation, d_eq: Derivation, motive: Term) -> Derivation:
    """From ``motive u`` (up to beta) and ``u = v`` conclude ``motive v``."""
    parts = match_eq(d_eq.goal)
    if not parts:
        raise ShapeMismatch("Eq-E: second premise is not an equation")
    u, v = parts
    d_pu = conv(d_pu, app(motive, u))
    ctx = _require_ctx(d_pu, d_eq)
    return _node(Rule.EQ_E, ctx, app(motive, v), [d_pu, d_eq], term=motive)


def funext(d: Derivation, x: Var, f: Term, g: Term) -> Derivation:
    """From ``f x = g x`` (up to beta) conclude ``f = g``."""
    d = conv(d, eq(app(f, x), app(g, x)))
    return _node(Rule.FUNEXT, d.context, eq(f, g), [d], term=x)


def prop_ext(d: Derivation) -> Derivation:
    parts = match_conj(d.goal)
    halves = parts and (match_imp(parts[0]), match_imp(parts[1]))
    if not halves or not halves[0] or not halves[1]:
        raise ShapeMismatch("PropExt: premise is not a biconditional")
    a, b = halves[0]
    if not (_same(halves[1][0], b) and _same(halves[1][1], a)):
        raise ShapeMismatch("PropExt: premise is not a biconditional")
    return _node(Rule.PROPEXT, d.context, eq(a, b), [d])


# ---------------------------------------------------------------------------
# Structural operations


def map_terms(d: Derivation, fn, memo: dict | None = None) -> Derivation:
    """Apply ``fn`` to every term stored in the tree (contexts, goals, payloads)."""
    memo = {} if memo is None else memo
    out = memo.get(id(d))
    if out is not None:
        return out
    premises = tuple(map_terms(p, fn, memo) for p in d.premises)
    ctx = tuple(fn(h) for h in d.context)
    term = fn(d.term) if d.term is not None else None
    out = Derivation(d.rule, Sequent(ctx, fn(d.goal)), premises, term, d.index)
    memo[id(d)] = out
    return out


def rename_var(d: Derivation, x: Var, y: Var) -> Derivation:
    """Rename the variable ``x`` to the fresh variable ``y`` throughout ``d``."""
    return map_terms(d, lambda t: substitute(t, x, y))


def eigenvariables(d: Derivation) -> set[Var]:
    return {n.term for n in d.nodes() if n.rule in BINDING_RULES}


def weaken(d: Derivation, extra: Iterable[Term], position: int = 0) -> Derivation:
    """Insert ``extra`` into every context of ``d`` at ``position``.

    ``position`` counts hypotheses of the root context; hypotheses added
    higher up in the tree (by Imp-I, Not-I, Or-E, Ex-E) stay after the
    insertion.  Eigenvariables of ``d`` occurring free in ``extra`` are
    renamed first.
    """
    extra = tuple(extra)
    if not extra:
        return d
    if position < 0 or position > len(d.context):
        raise ContextMismatch("weakening position outside the root context")
    fv = frozenset().union(*(h.free_vars for h in extra))
    return _weaken(d, extra, position, fv, {})


def _weaken(d: Derivation, extra, pos: int, fv: frozenset, memo: dict) -> Derivation:
    out = memo.get(id(d))
    if out is not None:
        return out
    node = d
    if d.rule in BINDING_RULES and d.term in fv:
        node = _rename_eigenvariable(d)
    ctx = node.context[:pos] + extra + node.context[pos:]
    index = node.index
    if node.rule is Rule.AX and index is not None and index >= pos:
        index += len(extra)
    premises = tuple(_weaken(p, extra, pos, fv, memo) for p in node.premises)
    out = Derivation(node.rule, Sequent(ctx, node.goal), premises, node.term, index)
    memo[id(d)] = out
    return out


def _rename_eigenvariable(d: Derivation) -> Derivation:
    x = d.term
    y = fresh_var(x.name, x.type)
    if d.rule is Rule.EX_E:
        premises = (d.premises[0], rename_var(d.premises[1], x, y))
    else:
        premises = tuple(rename_var(p, x, y) for p in d.premises)
    return Derivation(d.rule, d.conclusion, premises, y, d.index)


def weaken_to(d: Derivation, ctx: Sequence[Term]) -> Derivation:
    """Weaken ``d`` so its root context becomes ``ctx``, which must extend it."""
    ctx = tuple(ctx)
    n = len(d.context)
    if n > len(ctx) or not _ctx_equal(ctx[:n], d.context):
        raise ContextMismatch("target context does not extend the derivation's context")
    return weaken(d, ctx[n:], position=n)


def rule_counts(d: Derivation) -> dict[Rule, int]:
    counts: dict[Rule, int] = {}
    for n in d.nodes():
        counts[n.rule] = counts.get(n.rule, 0) + 1
    return counts


def funext_types(d: Derivation) -> list[Arrow]:
    """Arrow types at which FunExt is applied, in first-use (pre-order) order."""
    seen: list[Arrow] = []
    for n in d.nodes():
        if n.rule is Rule.FUNEXT:
            parts = match_eq(n.goal)
            ty = parts[0].type if parts else None
            if ty is not None and ty not in seen:
                seen.append(ty)
    return seen
