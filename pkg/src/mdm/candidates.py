"""Reducibility candidates over finite proof-term universes.

Everything here is a bounded, executable rendition of candidate
machinery: the CR closure properties, the candidate algebra operations
(arrow and intersection), the set Omega of strongly normalizing neutral
non-normal terms, and the staged expansion closure Cl^k of the proofs of
a proposition from a universal context.

Bounds are first-class: a Universe fixes the term pool and size cap,
derivation search depth under-approximates the stage-0 sets, and any
quantified instance that escapes the universe is excluded from a check
and tallied.  A "pass" is always a pass-within-bounds, with the boundary
tally reported alongside.
"""
from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass, field

from .reduction import (
    SN, Diverges, beta_reducts, is_normal, is_redex, redex_paths, replace_at,
    sn_cached, subterm_at,
)
from .rewriting import Theory, Yes, congruent
from .syntax import (
    CHURCH, CURRY, Atom, Forall, Imp, PApp, PLam, PVar, Proposition,
    ProofTerm, TApp, TLam, Term, Var, apply_proof_subst, bound_proof_vars,
    canon, free_proof_vars, free_term_vars, fresh_name, is_neutral, print_proof,
    print_prop, proof_size, subst_proof, subst_term_in_prop,
)
from .semantics import apply_env_prop
from .typecheck import Context


# ---------------------------------------------------------------------------
# Universes

@dataclass(frozen=True)
class Universe:
    """All pure lambda proof-terms of size <= max_size (modulo alpha) whose
    free variables come from the pool.  One-step reducts that leave the
    size bound are recorded as boundary terms, not members."""

    max_size: int
    pool: tuple
    members: frozenset
    boundary: frozenset
    style: str = CURRY

    def __contains__(self, p):
        return p in self.members

    def __len__(self):
        return len(self.members)


def build_universe(max_size: int, pool) -> Universe:
    pool = tuple(pool)
    cache = {}

    def gen(n, depth):
        key = (n, depth)
        if key in cache:
            return cache[key]
        items = []
        if n == 1:
            items.extend(PVar(v) for v in pool)
            items.extend(PVar(f"v{i}") for i in range(1, depth + 1))
        else:
            items.extend(PLam(f"v{depth + 1}", b) for b in gen(n - 1, depth + 1))
            for i in range(1, n - 1):
                for f in gen(i, depth):
                    items.extend(PApp(f, a) for a in gen(n - 1 - i, depth))
        cache[key] = items
        return items

    members = []
    for n in range(1, max_size + 1):
        members.extend(gen(n, 0))
    member_set = frozenset(members)
    boundary = frozenset(
        r for t in member_set for r in beta_reducts(t) if proof_size(r) > max_size)
    return Universe(max_size, pool, member_set, boundary)


@dataclass(frozen=True)
class FiniteCandidate:
    """A set of universe members standing in for a reducibility candidate."""

    members: frozenset

    def __contains__(self, p):
        return p in self.members

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class CheckVerdict:
    status: str  # "pass" | "fail" | "unknown"
    failures: tuple = ()
    boundary: int = 0
    unknown: int = 0

    @property
    def ok(self):
        return self.status == "pass"


# ---------------------------------------------------------------------------
# CR properties, bounded

def cr1(s: FiniteCandidate, fuel: int = 10_000) -> CheckVerdict:
    """Every member strongly normalizing (within the node budget)."""
    failures = []
    unknown = 0
    for p in s.members:
        v = sn_cached(p, fuel)
        if isinstance(v, Diverges):
            failures.append(p)
        elif not isinstance(v, SN):
            unknown += 1
    if failures:
        return CheckVerdict("fail", tuple(failures), unknown=unknown)
    return CheckVerdict("unknown" if unknown else "pass", unknown=unknown)


def cr2(s: FiniteCandidate, u: Universe) -> CheckVerdict:
    """Closed under one-step reduction; reducts escaping the universe are
    tallied, not failed."""
    failures = []
    boundary = 0
    for p in s.members:
        for r in beta_reducts(p):
            if r not in u.members:
                boundary += 1
            elif r not in s.members:
                failures.append((p, r))
    return CheckVerdict("fail" if failures else "pass", tuple(failures), boundary)


def cr3(s: FiniteCandidate, u: Universe) -> CheckVerdict:
    """Every neutral universe member whose reducts all belong to s belongs
    to s.  Neutral terms with reducts outside the universe impose nothing
    (tallied)."""
    failures = []
    boundary = 0
    for p in u.members:
        if not is_neutral(p) or p in s.members:
            continue
        reducts = beta_reducts(p)
        if any(r not in u.members for r in reducts):
            boundary += 1
            continue
        if all(r in s.members for r in reducts):
            failures.append(p)
    return CheckVerdict("fail" if failures else "pass", tuple(failures), boundary)


def cr3aux(s: FiniteCandidate, u: Universe) -> CheckVerdict:
    """cr3 restricted to non-normal terms: normal neutral terms (such as a
    variable applied to a variable) impose nothing."""
    failures = []
    boundary = 0
    for p in u.members:
        if not is_neutral(p) or is_normal(p) or p in s.members:
            continue
        reducts = beta_reducts(p)
        if any(r not in u.members for r in reducts):
            boundary += 1
            continue
        if all(r in s.members for r in reducts):
            failures.append(p)
    return CheckVerdict("fail" if failures else "pass", tuple(failures), boundary)


# ---------------------------------------------------------------------------
# Occurrence-marked decompositions p = [m_i/h_i] nu.
#
# A decomposition marks up to n_max pairwise-disjoint subterm occurrences
# that are neutral and not normal; each marked occurrence becomes a fresh
# hole variable in nu.  Grafting the marked subterms back (substitution
# with capture) reconstructs p exactly, which is why holes may sit under
# binders of variables free in the subterm.

def _occurrences(p: ProofTerm, captured_ok: bool):
    """(path, subterm) pairs with the subterm neutral and not normal;
    unless captured_ok, occurrences containing variables bound above the
    position are skipped."""
    out = []

    def walk(q, path, bound):
        if is_neutral(q) and not is_normal(q):
            if captured_ok or not (free_proof_vars(q) & bound):
                out.append((path, q))
        if isinstance(q, (PLam, TLam)):
            walk(q.body, path + (0,), bound | {q.var} if isinstance(q, PLam) else bound)
        elif isinstance(q, PApp):
            walk(q.fn, path + (0,), bound)
            walk(q.arg, path + (1,), bound)
        elif isinstance(q, TApp):
            walk(q.fn, path + (0,), bound)

    walk(p, (), frozenset())
    return out


def _disjoint(paths) -> bool:
    for a, b in itertools.combinations(paths, 2):
        if a[:len(b)] == b or b[:len(a)] == a:
            return False
    return True


def decompositions(p: ProofTerm, n_max: int, captured_ok: bool = True):
    """Yield (nu, pairs) where pairs is a tuple of (hole-name, subterm) and
    grafting the pairs into nu (in order) rebuilds p."""
    occs = _occurrences(p, captured_ok)
    taken = free_proof_vars(p) | bound_proof_vars(p)
    for n in range(1, min(n_max, len(occs)) + 1):
        for chosen in itertools.combinations(occs, n):
            paths = [path for path, _ in chosen]
            if not _disjoint(paths):
                continue
            nu = p
            pairs = []
            for i, (path, sub) in enumerate(chosen):
                hole = f"hole{i + 1}"
                if hole in taken:
                    hole = fresh_name(hole, taken)
                nu = replace_at(nu, path, PVar(hole))
                pairs.append((hole, sub))
            yield nu, tuple(pairs)


def _instances(nu: ProofTerm, pairs, choose_reducts):
    """All simultaneous-reduct instances of a decomposition: one reduct per
    marked occurrence, grafted back with capture."""
    reduct_sets = [sorted(choose_reducts(m), key=canon) for _, m in pairs]
    for combo in itertools.product(*reduct_sets):
        inst = nu
        for (hole, _), r in zip(pairs, combo):
            inst = _graft_one(inst, hole, r)
        yield inst


def _graft_one(p, hole, r):
    from .syntax import graft
    return graft(p, hole, r)


def cr3prime(s: FiniteCandidate, u: Universe, n_max: int = 2) -> CheckVerdict:
    """Simultaneous expansion property: whenever every simultaneous-reduct
    instance of a marked term lies in s, the marked term itself must.

    Marked subterms are quantified over neutral non-normal members of the
    universe (occurrences capturing an enclosing binder are out of scope),
    and only instances inside the universe constrain the check; escaping
    instances are tallied.
    """
    failures = []
    boundary = 0
    for p in u.members:
        if p in s.members:
            continue
        for nu, pairs in decompositions(p, n_max, captured_ok=False):
            if any(m not in u.members for _, m in pairs):
                continue
            ok = True
            escaped = 0
            for inst in _instances(nu, pairs, beta_reducts):
                if inst not in u.members:
                    escaped += 1
                    continue
                if inst not in s.members:
                    ok = False
                    break
            boundary += escaped
            if ok:
                failures.append((p, pairs))
                break
    return CheckVerdict("fail" if failures else "pass", tuple(failures), boundary)


# ---------------------------------------------------------------------------
# Omega and the candidate algebra operations

def omega(p: ProofTerm, fuel: int = 10_000) -> CheckVerdict:
    """Membership in the set of strongly normalizing, neutral, non-normal
    proof-terms."""
    if not is_neutral(p) or is_normal(p):
        return CheckVerdict("fail")
    v = sn_cached(p, fuel)
    if isinstance(v, SN):
        return CheckVerdict("pass")
    if isinstance(v, Diverges):
        return CheckVerdict("fail")
    return CheckVerdict("unknown", unknown=1)


@dataclass(frozen=True)
class ArrowResult:
    members: FiniteCandidate
    boundary: int  # applications that left the universe
    untested: frozenset  # members none of whose applications fit the universe
    partially_tested: frozenset  # members with some escaped applications


def imp_candidate_ex(a: FiniteCandidate, b: FiniteCandidate, u: Universe) -> ArrowResult:
    """Arrow operation: members sending every member of a into b.

    Applications that leave the universe do not constrain membership; they
    are tallied, and members whose evidence is partial or empty are
    reported so callers can treat them as boundary cases.
    """
    members = []
    boundary = 0
    untested = []
    partial = []
    for p in u.members:
        ok = True
        tested = escaped = 0
        for m in a.members:
            app = PApp(p, m)
            if proof_size(app) > u.max_size:
                escaped += 1
                continue
            tested += 1
            if app not in b.members:
                ok = False
                break
        if ok:
            members.append(p)
            boundary += escaped
            if escaped and not tested:
                untested.append(p)
            elif escaped:
                partial.append(p)
    return ArrowResult(FiniteCandidate(frozenset(members)), boundary,
                       frozenset(untested), frozenset(partial))


def imp_candidate(a: FiniteCandidate, b: FiniteCandidate, u: Universe) -> FiniteCandidate:
    return imp_candidate_ex(a, b, u).members


def forall_candidate(family) -> FiniteCandidate:
    """Greatest lower bound for inclusion: plain intersection."""
    family = list(family)
    if not family:
        raise ValueError("quantifier candidate needs a non-empty family")
    out = family[0].members
    for c in family[1:]:
        out &= c.members
    return FiniteCandidate(out)


# ---------------------------------------------------------------------------
# The universal context

@dataclass
class UniversalContext:
    """Deterministic supply of hypothesis variables, unboundedly many per
    proposition; only the finite slice a run materializes is ever built."""

    prefix: str = "h"
    _names: dict = field(default_factory=dict)

    def var_name(self, prop: Proposition, index: int) -> str:
        key = (prop, index)
        if key not in self._names:
            digest = hashlib.sha1(repr(canon(prop)).encode()).hexdigest()[:6]
            self._names[key] = f"{self.prefix}{digest}_{index}"
        return self._names[key]

    def slice(self, pairs) -> Context:
        """Materialize [(prop, count), ...] as a context."""
        entries = []
        for prop, count in pairs:
            for i in range(count):
                entries.append((self.var_name(prop, i), prop))
        return Context(tuple(entries))


# ---------------------------------------------------------------------------
# Bounded derivation search (stage 0 of the closure).
#
# Typability of a bare proof-term modulo an arbitrary congruence is
# undecidable, so stage 0 is an under-approximation: the subjects of
# derivations found by rule-directed search over a finite proposition
# catalog, a finite instantiation term set, and a depth bound.

@dataclass(frozen=True)
class SearchBounds:
    universe: Universe
    depth: int = 3
    fuel: int = 200
    k_max: int = 3
    n_max: int = 2
    inst_terms: tuple = ()  # terms usable by quantifier elimination


def _subformulas(p: Proposition):
    yield p
    if isinstance(p, Imp):
        yield from _subformulas(p.left)
        yield from _subformulas(p.right)
    elif isinstance(p, Forall):
        yield from _subformulas(p.body)


def proposition_catalog(theory: Theory, delta: Context, target: Proposition):
    """Subformula closure of the search goal, the universal-context slice,
    and both sides of every rewrite rule."""
    seen = []
    pool = set()

    def add(p):
        if p not in pool:
            pool.add(p)
            seen.append(p)

    for p in _subformulas(target):
        add(p)
    for _, p in delta:
        for q in _subformulas(p):
            add(q)
    for r in theory.rules:
        if not r.is_term_rule:
            for q in itertools.chain(_subformulas(r.lhs), _subformulas(r.rhs)):
                add(q)
    return tuple(seen)


class DerivationSearch:
    """Goal-directed provability search: does the fixed universal context
    grant `subject : goal` within the depth bound?"""

    def __init__(self, theory: Theory, delta: Context, target: Proposition,
                 bounds: SearchBounds, style: str = CURRY):
        self.theory = theory
        self.delta = delta
        self.bounds = bounds
        self.style = style
        self.catalog = proposition_catalog(theory, delta, target)
        self.foralls = tuple(p for p in self.catalog if isinstance(p, Forall))
        inst = list(bounds.inst_terms)
        # the quantifier rules of the unbounded system range over all
        # terms; a designated fresh variable keeps generic instantiation
        # reachable alongside the ground instances
        gen = Var(fresh_name("w", set().union(
            *(free_term_vars(p) for p in self.catalog)) if self.catalog else set()))
        if gen not in inst:
            inst.append(gen)
        self.inst_terms = tuple(inst)
        self.delta_fv = delta.free_term_vars()
        self._memo = {}

    def _cong(self, a, b):
        return isinstance(congruent(self.theory, a, b, self.bounds.fuel), Yes)

    def provable(self, subject: ProofTerm, goal: Proposition, ext=(), depth=None) -> bool:
        if depth is None:
            depth = self.bounds.depth
        if depth <= 0:
            return False
        key = (subject, goal, ext, depth)
        if key in self._memo:
            return self._memo[key]
        self._memo[key] = False  # cut off re-entrant identical goals
        out = self._try(subject, goal, ext, depth)
        self._memo[key] = out
        return out

    def _lookup(self, name, ext):
        for n, p in reversed(ext):
            if n == name:
                return p
        return self.delta.lookup(name)

    def _try(self, subject, goal, ext, depth):
        if isinstance(subject, PVar):
            declared = self._lookup(subject.name, ext)
            if declared is not None and self._cong(declared, goal):
                return True
        if isinstance(subject, PApp):
            for a in self.catalog:
                if self.provable(subject.fn, Imp(a, goal), ext, depth - 1) \
                        and self.provable(subject.arg, a, ext, depth - 1):
                    return True
        if isinstance(subject, PLam):
            for a in self.catalog:
                for b in self.catalog:
                    if not self._cong(goal, Imp(a, b)):
                        continue
                    if self.provable(subject.body, b, ext + ((subject.var, a),), depth - 1):
                        return True
        ctx_fv = self.delta_fv
        if ext:
            ctx_fv = ctx_fv.union(*(free_term_vars(p) for _, p in ext))
        if self.style == CURRY:
            # silent quantifier rules apply to any subject
            for f in self.foralls:
                if not self._cong(goal, f):
                    continue
                v, body = f.var, f.body
                if v in ctx_fv:
                    v = fresh_name(v, ctx_fv | free_term_vars(body))
                    body = subst_term_in_prop(f.body, f.var, Var(v))
                if self.provable(subject, body, ext, depth - 1):
                    return True
            for f in self.foralls:
                for t in self.inst_terms:
                    if self._cong(subst_term_in_prop(f.body, f.var, t), goal) \
                            and self.provable(subject, f, ext, depth - 1):
                        return True
        else:
            if isinstance(subject, TLam):
                x = subject.var
                if x not in ctx_fv:
                    for f in self.foralls:
                        if not self._cong(goal, f):
                            continue
                        if x != f.var and x in free_term_vars(f.body):
                            continue
                        body = f.body if x == f.var \
                            else subst_term_in_prop(f.body, f.var, Var(x))
                        if self.provable(subject.body, body, ext, depth - 1):
                            return True
            if isinstance(subject, TApp):
                for f in self.foralls:
                    if self._cong(subst_term_in_prop(f.body, f.var, subject.arg), goal) \
                            and self.provable(subject.fn, f, ext, depth - 1):
                        return True
        return False


# ---------------------------------------------------------------------------
# The closure Cl^k

@dataclass
class ClosureTable:
    theory: Theory
    prop: Proposition
    env: dict
    delta: Context
    stages: tuple  # cumulative member sets, stage 0 first
    first_stage: dict  # member -> stage index of first entry
    bounds: SearchBounds
    boundary_escapes: int = 0
    unknown_mu: int = 0
    fixpoint_at: int | None = None

    def members(self) -> frozenset:
        return self.stages[-1]

    def candidate(self) -> FiniteCandidate:
        return FiniteCandidate(self.members())

    def __contains__(self, p):
        return p in self.stages[-1]


def cl0(theory: Theory, delta: Context, prop: Proposition, env: dict,
        bounds: SearchBounds, style: str = CURRY) -> frozenset:
    """Stage 0: universe members that are provably subjects of the
    environment-instantiated proposition under the universal context."""
    target = apply_env_prop(prop, env)
    search = DerivationSearch(theory, delta, target, bounds, style)
    return frozenset(p for p in bounds.universe.members if search.provable(p, target))


def cl_step(prev: frozenset, u: Universe, n_max: int, fuel: int):
    """One expansion stage: add the universe members admitting a marked
    decomposition into Omega subterms all of whose simultaneous-reduct
    instances already belong to the previous stage.

    Returns (members, boundary_escapes, unknown_mu)."""
    added = set(prev)
    boundary = 0
    unknown_mu = 0
    for p in u.members:
        if p in prev:
            continue
        entered = False
        for nu, pairs in decompositions(p, n_max, captured_ok=True):
            usable = True
            for _, m in pairs:
                w = omega(m, fuel)
                if w.status == "unknown":
                    unknown_mu += 1
                    usable = False
                elif not w.ok:
                    usable = False
            if not usable:
                continue
            ok = True
            for inst in _instances(nu, pairs, beta_reducts):
                if inst not in u.members or inst not in prev:
                    if inst not in u.members:
                        boundary += 1
                    ok = False
                    break
            if ok:
                entered = True
                break
        if entered:
            added.add(p)
    return frozenset(added), boundary, unknown_mu


def closure(theory: Theory, delta: Context, prop: Proposition, env: dict,
            k_max: int, bounds: SearchBounds) -> ClosureTable:
    """Stage 0 by derivation search, then k_max expansion steps (stopping
    at a fixpoint), recording each member's first stage."""
    stage0 = cl0(theory, delta, prop, env, bounds)
    stages = [stage0]
    first = {p: 0 for p in stage0}
    boundary = 0
    unknown = 0
    fix = None
    for k in range(1, k_max + 1):
        nxt, b, um = cl_step(stages[-1], bounds.universe, bounds.n_max, bounds.fuel)
        boundary += b
        unknown += um
        for p in nxt - stages[-1]:
            first[p] = k
        if nxt == stages[-1]:
            fix = k - 1
            stages.append(nxt)
            break
        stages.append(nxt)
    return ClosureTable(theory, prop, dict(env), delta, tuple(stages), first,
                        bounds, boundary, unknown, fix)


# ---------------------------------------------------------------------------
# Lemma-shaped verifications.  Each returns a LemmaReport whose "passed"
# is a within-bounds statement; the boundary and skipped tallies say how
# much of the quantification the universe could not carry.

@dataclass(frozen=True)
class LemmaReport:
    lemma: str
    passed: bool
    checked: int = 0
    violations: tuple = ()
    boundary: int = 0
    skipped: int = 0
    unknown: int = 0
    notes: str = ""

    def summary(self) -> str:
        state = "pass" if self.passed else "FAIL"
        return (f"{self.lemma}: {state} ({self.checked} checked, "
                f"{len(self.violations)} violation(s), boundary {self.boundary}, "
                f"skipped {self.skipped}, unknown {self.unknown})")


def verify_monotone(table: ClosureTable) -> LemmaReport:
    """Stage sets weakly increase."""
    bad = tuple(k for k in range(len(table.stages) - 1)
                if not table.stages[k] <= table.stages[k + 1])
    return LemmaReport("monotone", not bad, len(table.stages) - 1, bad)


def verify_mink(table: ClosureTable, fuel: int = 10_000) -> LemmaReport:
    """First-entry stage of a member is at most its maximal reduction
    length; normal members sit in stage 0."""
    violations = []
    unknown = 0
    checked = 0
    for p, k in table.first_stage.items():
        v = sn_cached(p, fuel)
        if not isinstance(v, SN):
            unknown += 1
            continue
        checked += 1
        if k > v.max_length:
            violations.append((p, k, v.max_length))
        if is_normal(p) and k != 0:
            violations.append((p, k, "normal member outside stage 0"))
    return LemmaReport("mink", not violations, checked, tuple(violations), unknown=unknown)


def verify_lambdacl(theory: Theory, delta: Context, a_prop: Proposition,
                    b_prop: Proposition, env: dict, k_max: int,
                    bounds: SearchBounds) -> LemmaReport:
    """Abstraction compatibility: renaming the abstracted variable to a
    universal-context variable of the antecedent and landing in the
    consequent's closure forces the abstraction into the arrow closure.

    The abstraction adds one rule application, so the hypothesis closure is
    computed one derivation level shallower than the conclusion closure;
    both stay within the stated depth bound.
    """
    u = bounds.universe
    hyp_bounds = SearchBounds(u, max(1, bounds.depth - 1), bounds.fuel,
                              bounds.k_max, bounds.n_max, bounds.inst_terms)
    table_b = closure(theory, delta, b_prop, env, k_max, hyp_bounds)
    table_ab = closure(theory, delta, Imp(a_prop, b_prop), env, k_max, bounds)
    phi_a = apply_env_prop(a_prop, env)
    delta_vars_at_a = [n for n, p in delta if p == phi_a]
    violations = []
    checked = skipped = boundary = 0
    binders = set(u.pool) | {"vfresh"}
    for p in u.members:
        for beta in sorted(binders):
            lam = PLam(beta, p)
            if proof_size(lam) > u.max_size:
                boundary += 1
                continue
            alphas = [a for a in delta_vars_at_a if a not in free_proof_vars(p)]
            if not alphas:
                skipped += 1
                continue
            renamed = subst_proof(p, beta, PVar(alphas[0]))
            if renamed not in table_b.members():
                continue
            checked += 1
            if lam not in table_ab.members():
                violations.append((lam, renamed))
    return LemmaReport("lambdacl", not violations, checked, tuple(violations),
                       boundary, skipped)


def _deeper(bounds: SearchBounds) -> SearchBounds:
    return SearchBounds(bounds.universe, bounds.depth + 1, bounds.fuel,
                        bounds.k_max, bounds.n_max, bounds.inst_terms)


def verify_clramorph(theory: Theory, delta: Context, a_prop: Proposition,
                     b_prop: Proposition, env: dict, k_max: int,
                     bounds: SearchBounds) -> LemmaReport:
    """The arrow closure equals the arrow of the closures, both inclusions,
    restricted to the universe.

    Each inclusion direction costs one extra rule application (an
    elimination forward, an introduction backward), so membership on the
    target side of either inclusion is decided in tables one derivation
    level deeper than the source side; depth-d members must appear at
    depth d+1.  Arrow members whose application evidence lies entirely out
    of the universe carry no information and are skipped; escaped
    applications are tallied as boundary.
    """
    u = bounds.universe
    t_a = closure(theory, delta, a_prop, env, k_max, bounds)
    t_b = closure(theory, delta, b_prop, env, k_max, bounds)
    t_ab = closure(theory, delta, Imp(a_prop, b_prop), env, k_max, bounds)
    t_b_deep = closure(theory, delta, b_prop, env, k_max, _deeper(bounds))
    t_ab_deep = closure(theory, delta, Imp(a_prop, b_prop), env, k_max, _deeper(bounds))

    violations = []
    boundary = 0
    checked = 0
    for p in t_ab.members():
        for m in t_a.members():
            app = PApp(p, m)
            if proof_size(app) > u.max_size:
                boundary += 1
                continue
            checked += 1
            if app not in t_b_deep.members():
                violations.append(("not in arrow", p, m))

    res = imp_candidate_ex(t_a.candidate(), t_b.candidate(), u)
    boundary += res.boundary
    backward_pool = res.members.members - t_ab_deep.members()
    skipped = len(backward_pool & res.untested)
    for p in sorted(backward_pool - res.untested, key=canon):
        violations.append(("not in closure", p))
    checked += len(res.members.members) - skipped
    return LemmaReport("clramorph", not violations, checked, tuple(violations),
                       boundary, skipped)


def verify_clsubst(theory: Theory, delta: Context, prop: Proposition, x: str,
                   t: Term, env: dict, k_max: int, bounds: SearchBounds) -> LemmaReport:
    """Substituting in the proposition equals extending the environment,
    stage by stage.  Requires the usual independence of x, t and the
    environment (substitutions must commute)."""
    if x in env or any(x in free_term_vars(v) for v in env.values()) \
            or free_term_vars(t) & set(env):
        raise ValueError("substitution and environment are not independent")
    lhs = closure(theory, delta, subst_term_in_prop(prop, x, t), env, k_max, bounds)
    rhs = closure(theory, delta, prop, {**env, x: t}, k_max, bounds)
    violations = []
    for k in range(max(len(lhs.stages), len(rhs.stages))):
        sl = lhs.stages[min(k, len(lhs.stages) - 1)]
        sr = rhs.stages[min(k, len(rhs.stages) - 1)]
        if sl != sr:
            diff = tuple(sl ^ sr)
            violations.append((k, diff))
    checked = sum(len(s) for s in lhs.stages)
    return LemmaReport("clsubst", not violations, checked, tuple(violations))


def verify_clfamorph(theory: Theory, delta: Context, x: str, body: Proposition,
                     env: dict, k_max: int, bounds: SearchBounds,
                     term_universe) -> LemmaReport:
    """The closure of a quantified proposition is the intersection of the
    closures of its instances over the term universe, both inclusions.

    As with the arrow morphism, each direction spends one silent
    quantifier rule, so the target side of each inclusion is computed one
    derivation level deeper.
    """
    lhs = closure(theory, delta, Forall(x, body), env, k_max, bounds)
    lhs_deep = closure(theory, delta, Forall(x, body), env, k_max, _deeper(bounds))
    family = [closure(theory, delta, body, {**env, x: t}, k_max, bounds)
              for t in term_universe]
    family_deep = [closure(theory, delta, body, {**env, x: t}, k_max, _deeper(bounds))
                   for t in term_universe]
    rhs = forall_candidate([tb.candidate() for tb in family])
    rhs_deep = forall_candidate([tb.candidate() for tb in family_deep])
    forward = tuple(p for p in lhs.members() if p not in rhs_deep.members)
    backward = tuple(p for p in rhs.members if p not in lhs_deep.members())
    violations = tuple(("not in intersection", p) for p in forward) \
        + tuple(("not in quantified closure", p) for p in backward)
    checked = len(lhs.members()) + len(rhs.members)
    return LemmaReport("clfamorph", not violations, checked, violations)


# ---------------------------------------------------------------------------
# Adequacy: a checked derivation, instantiated by a substitution adequate
# for its context, lands in the closure of its proposition.

def adequacy_check(theory: Theory, d, tables: dict, sigma: dict, env: dict,
                   bounds: SearchBounds) -> CheckVerdict:
    """tables maps (proposition, frozenset(env.items())) to ClosureTable.

    Preconditions checked here: every context hypothesis has a table and
    sigma sends it into that table.  The instantiated subject escaping the
    universe is reported as unknown, not failure.
    """
    key = frozenset(env.items())
    for name, prop in d.ctx:
        tab = tables.get((prop, key))
        if tab is None:
            raise ValueError(f"no closure table for hypothesis {name}:{print_prop(prop)}")
        if name not in sigma or sigma[name] not in tab:
            return CheckVerdict("fail", ((name, prop, "substitution not adequate"),))
    subject = apply_proof_subst(d.subject, sigma)
    tab = tables.get((d.prop, key))
    if tab is None:
        raise ValueError(f"no closure table for conclusion {print_prop(d.prop)}")
    if subject not in bounds.universe.members:
        return CheckVerdict("unknown", boundary=1, unknown=1)
    if subject in tab:
        return CheckVerdict("pass")
    return CheckVerdict("fail", ((subject, d.prop),))


# ---------------------------------------------------------------------------
# Random closed candidates (for the algebra-law battery)

def sn_slice(u: Universe, fuel: int = 10_000) -> FiniteCandidate:
    return FiniteCandidate(frozenset(
        p for p in u.members if isinstance(sn_cached(p, fuel), SN)))


def candidate_close(seed_members, u: Universe, n_max: int = 2) -> frozenset:
    """Close a set of universe members under reduction and the simultaneous
    expansion property (restricted to in-universe material)."""
    s = set(seed_members)
    while True:
        grew = False
        for p in list(s):
            for r in beta_reducts(p):
                if r in u.members and r not in s:
                    s.add(r)
                    grew = True
        for p in u.members:
            if p in s:
                continue
            for nu, pairs in decompositions(p, n_max, captured_ok=False):
                if any(m not in u.members for _, m in pairs):
                    continue
                insts = list(_instances(nu, pairs, beta_reducts))
                in_u = [i for i in insts if i in u.members]
                if in_u and all(i in s for i in in_u):
                    s.add(p)
                    grew = True
                    break
        if not grew:
            return frozenset(s)


def random_candidates(u: Universe, count: int, seed: int, fuel: int = 10_000,
                      n_max: int = 2, max_attempts: int | None = None):
    """Deterministically sample non-empty subsets of the strongly
    normalizing slice and close them; only subsets passing all three
    candidate properties are returned."""
    rng = random.Random(seed)
    base = sorted(sn_slice(u, fuel).members, key=canon)
    if not base:
        return []
    out = []
    attempts = 0
    cap = max_attempts if max_attempts is not None else count * 20
    while len(out) < count and attempts < cap:
        attempts += 1
        k = rng.randint(1, max(1, len(base) // 3))
        cand = FiniteCandidate(candidate_close(rng.sample(base, min(k, len(base))), u, n_max))
        if not cand.members:
            continue
        if cr1(cand, fuel).ok and cr2(cand, u).ok and cr3prime(cand, u, n_max).ok:
            out.append(cand)
    return out


# ---------------------------------------------------------------------------
# The quantifier synchronization defect of term-carrying proof-terms.
#
# With subjects recording quantifier eliminations, the intersection-style
# interpretation of a quantified proposition demands that applying a
# member to one term lands in the interpretation of EVERY instance; a
# hypothesis variable of the quantified proposition already fails this.
# The pure (Curry) subjects avoid it because their quantifier rules are
# silent, so the same variable inhabits every instance's stage-0 set.

def church_forall_defect_demo(theory: Theory, bounds: SearchBounds,
                              term_universe) -> dict:
    sig = theory.signature
    unary = [name for name, k in sig.predicates if k == 1]
    report = {
        "theory": theory.name,
        "universe_terms": sorted(str(t) for t in term_universe),
        "cases": [],
    }
    terms = sorted(set(term_universe), key=str)
    if not unary or len(terms) < 2:
        report["note"] = "no quantified proposition with distinct instances available"
        return report
    inst_bounds = SearchBounds(bounds.universe, bounds.depth, bounds.fuel,
                               bounds.k_max, bounds.n_max, tuple(term_universe))
    ctx = UniversalContext()
    x = "x"
    for pred in unary:
        body = Atom(pred, (Var(x),))
        forall_prop = Forall(x, body)
        hyp = ctx.var_name(forall_prop, 0)
        delta = Context(((hyp, forall_prop),))
        for ta, tb in itertools.permutations(terms, 2):
            target = subst_term_in_prop(body, x, tb)
            church_subject = TApp(PVar(hyp), ta)
            church_search = DerivationSearch(theory, delta, target, inst_bounds, CHURCH)
            curry_search = DerivationSearch(theory, delta, target, inst_bounds, CURRY)
            report["cases"].append({
                "hypothesis": f"{hyp} : {print_prop(forall_prop)}",
                "applied_to": str(ta),
                "instance": print_prop(target),
                "church_subject": print_proof(church_subject),
                "church_in_stage0": church_search.provable(church_subject, target),
                "curry_subject": hyp,
                "curry_in_stage0": curry_search.provable(PVar(hyp), target),
            })
    report["defect_exhibited"] = any(
        c["curry_in_stage0"] and not c["church_in_stage0"] for c in report["cases"])
    return report
