"""Rewrite rules, the congruence they generate, and confusion detection.

A theory is a signature plus a finite set of rewrite rules between
propositions (and optionally between terms).  The congruence is the
least equivalence containing every rule instance and closed under the
implication and quantifier constructors.  Deciding it is necessarily
bounded: equality is searched by bidirectional breadth-first rewriting,
never by normalization, because rules like `A --> A => A` do not
terminate as oriented rewrite systems.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .syntax import (
    Atom, Forall, Fun, Imp, Proposition, Signature, Term, Var,
    apply_prop_subst, apply_term_subst, check_prop_wf, check_term_wf,
    free_term_vars, fresh_name, parse_prop, parse_term, print_prop,
    print_term, prop_size, term_size, ParseError,
)


class TheoryError(ValueError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    lhs: Proposition | Term
    rhs: Proposition | Term
    oriented: bool = True  # '-->' in the source; both directions feed the congruence

    def __post_init__(self):
        lp = isinstance(self.lhs, Proposition)
        rp = isinstance(self.rhs, Proposition)
        if lp != rp:
            raise TheoryError("rule sides must both be propositions or both be terms")
        if isinstance(self.lhs, Var):
            raise TheoryError("term rule left-hand side must not be a bare variable")
        if not free_term_vars(self.rhs) <= free_term_vars(self.lhs):
            raise TheoryError("free variables of the right-hand side must occur on the left")

    @property
    def is_term_rule(self) -> bool:
        return isinstance(self.lhs, Term)

    def __str__(self):
        arrow = "-->" if self.oriented else "<->"
        show = print_term if self.is_term_rule else print_prop
        return f"{show(self.lhs)} {arrow} {show(self.rhs)}"


@dataclass(frozen=True)
class Theory:
    signature: Signature
    rules: tuple = ()
    name: str = ""

    def __post_init__(self):
        for r in self.rules:
            if r.is_term_rule:
                check_term_wf(r.lhs, self.signature)
                check_term_wf(r.rhs, self.signature)
            else:
                check_prop_wf(r.lhs, self.signature)
                check_prop_wf(r.rhs, self.signature)

    @property
    def has_term_rules(self) -> bool:
        return any(r.is_term_rule for r in self.rules)


# ---------------------------------------------------------------------------
# Verdicts

@dataclass(frozen=True)
class Yes:
    """The two sides were joined; path_length counts rewrite steps."""
    path_length: int


@dataclass(frozen=True)
class No:
    """Both congruence classes were exhausted without meeting."""


@dataclass(frozen=True)
class Unknown:
    fuel_spent: int


CongruenceVerdict = Yes | No | Unknown


def is_yes(v) -> bool:
    return isinstance(v, Yes)


# ---------------------------------------------------------------------------
# First-order matching.  Pattern variables are the free term-variables of
# the rule side being matched.  Variables bound inside the pattern are
# renamed in lockstep with the target's binders and may not leak into a
# binding (they would escape their scope in the instance).

def _match_term(pat: Term, tgt: Term, binding: dict, protected: frozenset) -> dict | None:
    if isinstance(pat, Var):
        if pat.name in protected:
            return binding if tgt == pat else None
        if pat.name in binding:
            return binding if binding[pat.name] == tgt else None
        if free_term_vars(tgt) & protected:
            return None
        b = dict(binding)
        b[pat.name] = tgt
        return b
    if not isinstance(tgt, Fun) or tgt.name != pat.name or len(tgt.args) != len(pat.args):
        return None
    for pa, ta in zip(pat.args, tgt.args):
        binding = _match_term(pa, ta, binding, protected)
        if binding is None:
            return None
    return binding


def _match_prop(pat: Proposition, tgt: Proposition, binding: dict, protected: frozenset) -> dict | None:
    if isinstance(pat, Atom):
        if not isinstance(tgt, Atom) or tgt.pred != pat.pred:
            return None
        for pa, ta in zip(pat.args, tgt.args):
            binding = _match_term(pa, ta, binding, protected)
            if binding is None:
                return None
        return binding
    if isinstance(pat, Imp):
        if not isinstance(tgt, Imp):
            return None
        binding = _match_prop(pat.left, tgt.left, binding, protected)
        if binding is None:
            return None
        return _match_prop(pat.right, tgt.right, binding, protected)
    if not isinstance(tgt, Forall):
        return None
    avoid = free_term_vars(pat.body) | free_term_vars(tgt.body) | protected | set(binding)
    v = fresh_name(pat.var, avoid)
    pbody = apply_prop_subst(pat.body, {pat.var: Var(v)})
    tbody = apply_prop_subst(tgt.body, {tgt.var: Var(v)})
    return _match_prop(pbody, tbody, binding, protected | {v})


def _rule_prop_results(rule: RewriteRule, p: Proposition):
    """Instances of the rule (both directions) applying at the root of p."""
    out = []
    for lhs, rhs in ((rule.lhs, rule.rhs), (rule.rhs, rule.lhs)):
        b = _match_prop(lhs, p, {}, frozenset())
        if b is not None:
            out.append(apply_prop_subst(rhs, b))
    return out


def _rule_term_results(rule: RewriteRule, t: Term):
    out = []
    for lhs, rhs in ((rule.lhs, rule.rhs), (rule.rhs, rule.lhs)):
        b = _match_term(lhs, t, {}, frozenset())
        if b is not None:
            out.append(apply_term_subst(rhs, b))
    return out


def _term_neighbors(theory: Theory, t: Term):
    out = []
    for r in theory.rules:
        if r.is_term_rule:
            out.extend(_rule_term_results(r, t))
    if isinstance(t, Fun):
        for i, a in enumerate(t.args):
            for a2 in _term_neighbors(theory, a):
                out.append(Fun(t.name, t.args[:i] + (a2,) + t.args[i + 1:]))
    return out


def rewrite_neighbors(theory: Theory, p: Proposition) -> frozenset:
    """All propositions one symmetric rewrite step away from p.

    Steps apply at every position, in both rule directions, so the result
    is symmetric: q in neighbors(p) iff p in neighbors(q).
    """
    out = []
    for r in theory.rules:
        if not r.is_term_rule:
            out.extend(_rule_prop_results(r, p))
    if isinstance(p, Atom):
        if theory.has_term_rules:
            for i, a in enumerate(p.args):
                for a2 in _term_neighbors(theory, a):
                    out.append(Atom(p.pred, p.args[:i] + (a2,) + p.args[i + 1:]))
    elif isinstance(p, Imp):
        out.extend(Imp(l2, p.right) for l2 in rewrite_neighbors(theory, p.left))
        out.extend(Imp(p.left, r2) for r2 in rewrite_neighbors(theory, p.right))
    else:
        out.extend(Forall(p.var, b2) for b2 in rewrite_neighbors(theory, p.body))
    return frozenset(out)


# ---------------------------------------------------------------------------
# Bounded congruence decision

def congruent_ex(theory: Theory, a: Proposition, b: Proposition, fuel: int,
                 size_cap: int | None = None):
    """Bidirectional breadth-first closure from both sides.

    Returns (verdict, expansions_used).  Fuel counts node expansions, i.e.
    calls to rewrite_neighbors.  `No` is only returned when both closures
    saturated (no unexpanded proposition left, under size_cap if given).
    """
    if a == b:
        return Yes(0), 0
    dist = ({a: 0}, {b: 0})
    frontier = ([a], [b])
    spent = 0
    while spent < fuel and (frontier[0] or frontier[1]):
        side = 0 if frontier[0] and (not frontier[1] or len(frontier[0]) <= len(frontier[1])) else 1
        new = []
        for p in frontier[side]:
            if spent >= fuel:
                new.append(p)  # unexpanded: carries over, closure not saturated
                continue
            spent += 1
            for q in rewrite_neighbors(theory, p):
                if size_cap is not None and prop_size(q) > size_cap:
                    continue
                if q in dist[side]:
                    continue
                dist[side][q] = dist[side][p] + 1
                if q in dist[1 - side]:
                    return Yes(dist[side][q] + dist[1 - side][q]), spent
                new.append(q)
        frontier = (new, frontier[1]) if side == 0 else (frontier[0], new)
    if not frontier[0] or not frontier[1]:
        return No(), spent
    return Unknown(spent), spent


@lru_cache(maxsize=200_000)
def congruent(theory: Theory, a: Proposition, b: Proposition, fuel: int) -> CongruenceVerdict:
    """Decide a == b modulo the theory, within `fuel` node expansions."""
    return congruent_ex(theory, a, b, fuel)[0]


# ---------------------------------------------------------------------------
# Proposition enumeration and confusion detection

def enumerate_terms(sig: Signature, max_size: int, variables=("x", "y")):
    """All terms of size <= max_size over the signature and the given variables."""
    by_size = {0: []}
    for n in range(1, max_size + 1):
        items = []
        if n == 1:
            items.extend(Var(v) for v in variables)
        for fname, k in sig.functions:
            if k == 0 and n == 1:
                items.append(Fun(fname))
            elif k > 0 and n >= k + 1:
                for args in _tuples_of_total_size(by_size, k, n - 1):
                    items.append(Fun(fname, args))
        by_size[n] = items
    out = []
    for n in range(1, max_size + 1):
        out.extend(by_size[n])
    return out


def _tuples_of_total_size(by_size, k, total):
    if k == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - k + 2):
        for t in by_size.get(first, []):
            for rest in _tuples_of_total_size(by_size, k - 1, total - first):
                yield (t,) + rest


def enumerate_props(sig: Signature, max_size: int, variables=("x", "y")):
    """All propositions of size <= max_size, deduplicated modulo alpha."""
    terms_by_size = {}
    for t in enumerate_terms(sig, max_size - 1, variables):
        terms_by_size.setdefault(term_size(t), []).append(t)
    by_size = {}
    for n in range(1, max_size + 1):
        items = []
        for pname, k in sig.predicates:
            if k == 0 and n == 1:
                items.append(Atom(pname))
            elif k > 0 and n >= k + 1:
                for args in _tuples_of_total_size(terms_by_size, k, n - 1):
                    items.append(Atom(pname, args))
        for i in range(1, n - 1):
            for l in by_size.get(i, []):
                for r in by_size.get(n - 1 - i, []):
                    items.append(Imp(l, r))
        for v in variables:
            for body in by_size.get(n - 1, []):
                items.append(Forall(v, body))
        seen = set()
        uniq = []
        for p in items:
            if p not in seen:
                seen.add(p)
                uniq.append(p)
        by_size[n] = uniq
    out = []
    seen = set()
    for n in range(1, max_size + 1):
        for p in by_size[n]:
            if p not in seen:
                seen.add(p)
                out.append(p)
    return out


def detect_confusion(theory: Theory, size_bound: int, fuel: int) -> CongruenceVerdict:
    """Search for an implication congruent to a universal proposition.

    Seeds every quantifier-headed proposition of size <= size_bound and
    expands its congruence class breadth-first, pruning propositions larger
    than 2*size_bound.  Yes carries the length of the witnessing path; No
    means every class saturated (relative to the size cap) without meeting
    an implication; Unknown means fuel ran out first.
    """
    cap = 2 * size_bound
    seeds = [p for p in enumerate_props(theory.signature, size_bound) if isinstance(p, Forall)]
    spent = 0
    saturated_all = True
    for seed in seeds:
        dist = {seed: 0}
        frontier = [seed]
        saturated = False
        while frontier:
            if spent >= fuel:
                break
            p = frontier.pop(0)
            spent += 1
            for q in rewrite_neighbors(theory, p):
                if prop_size(q) > cap or q in dist:
                    continue
                dist[q] = dist[p] + 1
                if isinstance(q, Imp):
                    return Yes(dist[q])
                frontier.append(q)
        else:
            saturated = True
        if not saturated:
            saturated_all = False
    return No() if saturated_all else Unknown(spent)


# ---------------------------------------------------------------------------
# Theory files (.mdm): line-oriented, UTF-8.
#
#   # comment
#   pred P/0.
#   fun f/1.
#   rule <prop> <-> <prop>.
#   rule <prop> --> <prop>.

def parse_theory(text: str, name: str = "") -> Theory:
    functions = []
    predicates = []
    rule_lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not line.endswith("."):
            raise TheoryError(f"line {lineno}: missing terminating '.'")
        line = line[:-1].strip()
        if line.startswith("pred "):
            predicates.append(_parse_decl(line[5:], lineno))
        elif line.startswith("fun "):
            functions.append(_parse_decl(line[4:], lineno))
        elif line.startswith("rule "):
            rule_lines.append((lineno, line[5:]))
        else:
            raise TheoryError(f"line {lineno}: expected pred/fun/rule declaration")
    sig = Signature(functions=tuple(functions), predicates=tuple(predicates))
    rules = []
    for lineno, body in rule_lines:
        if "<->" in body:
            lhs_txt, rhs_txt = body.split("<->", 1)
            oriented = False
        elif "-->" in body:
            lhs_txt, rhs_txt = body.split("-->", 1)
            oriented = True
        else:
            raise TheoryError(f"line {lineno}: rule needs '<->' or '-->'")
        try:
            lhs = _parse_side(lhs_txt.strip(), sig)
            rhs = _parse_side(rhs_txt.strip(), sig)
            rules.append(RewriteRule(lhs, rhs, oriented))
        except (ParseError, TheoryError) as e:
            raise TheoryError(f"line {lineno}: {e}") from e
    return Theory(signature=sig, rules=tuple(rules), name=name)


def _parse_decl(body: str, lineno: int):
    parts = body.strip().split("/")
    if len(parts) != 2 or not parts[1].strip().isdigit():
        raise TheoryError(f"line {lineno}: expected 'name/arity'")
    return (parts[0].strip(), int(parts[1].strip()))


def _parse_side(text: str, sig: Signature):
    # A side whose head symbol is a function parses as a term rule side.
    try:
        return parse_prop(text, sig)
    except ParseError:
        return parse_term(text, sig)


def load_theory(path) -> Theory:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    import os
    return parse_theory(text, name=os.path.splitext(os.path.basename(str(path)))[0])
