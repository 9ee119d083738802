"""Abstract syntax: first-order terms, minimal propositions, lambda proof-terms.

All trees are immutable.  Equality and hashing are alpha-equivalence
throughout: two trees compare equal exactly when they differ only in the
names of bound variables (term binders and proof binders alike).  This
makes sets and dict keys "modulo alpha" for free, which every other
module relies on.

Concrete grammar (ASCII):

    term         x | f(t1,...,tn)          (nullary f prints bare)
    proposition  P | P(t,...) | A => B | !x. A      (=> right-assoc)
    proof        a | \\a. p | p q | ^x. p | p [t]    (app left-assoc)
"""
from __future__ import annotations

import re
from dataclasses import dataclass


class _AlphaEq:
    """Mixin giving alpha-equivalence semantics to == and hash()."""

    __eq_classes__: tuple = ()

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, _AlphaEq):
            return NotImplemented
        return canon(self) == canon(other)

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash(canon(self))


# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True, eq=False)
class Var(_AlphaEq):
    name: str

    def __str__(self):
        return print_term(self)


@dataclass(frozen=True, eq=False)
class Fun(_AlphaEq):
    name: str
    args: tuple = ()

    def __str__(self):
        return print_term(self)


Term = Var | Fun


# ---------------------------------------------------------------------------
# Propositions

@dataclass(frozen=True, eq=False)
class Atom(_AlphaEq):
    pred: str
    args: tuple = ()

    def __str__(self):
        return print_prop(self)


@dataclass(frozen=True, eq=False)
class Imp(_AlphaEq):
    left: "Proposition"
    right: "Proposition"

    def __str__(self):
        return print_prop(self)


@dataclass(frozen=True, eq=False)
class Forall(_AlphaEq):
    var: str
    body: "Proposition"

    def __str__(self):
        return print_prop(self)


Proposition = Atom | Imp | Forall


# ---------------------------------------------------------------------------
# Proof-terms.  PVar/PLam/PApp form the pure (Curry) fragment; TLam/TApp
# record quantifier introductions and eliminations (Church).

@dataclass(frozen=True, eq=False)
class PVar(_AlphaEq):
    name: str

    def __str__(self):
        return print_proof(self)


@dataclass(frozen=True, eq=False)
class PLam(_AlphaEq):
    var: str
    body: "ProofTerm"

    def __str__(self):
        return print_proof(self)


@dataclass(frozen=True, eq=False)
class PApp(_AlphaEq):
    fn: "ProofTerm"
    arg: "ProofTerm"

    def __str__(self):
        return print_proof(self)


@dataclass(frozen=True, eq=False)
class TLam(_AlphaEq):
    var: str
    body: "ProofTerm"

    def __str__(self):
        return print_proof(self)


@dataclass(frozen=True, eq=False)
class TApp(_AlphaEq):
    fn: "ProofTerm"
    arg: Term

    def __str__(self):
        return print_proof(self)


ProofTerm = PVar | PLam | PApp | TLam | TApp

CURRY = "curry"
CHURCH = "church"


# ---------------------------------------------------------------------------
# Signature

class SignatureError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    """Mono-sorted first-order signature: function and predicate symbols
    with arities.  The predicate list must be non-empty (otherwise the
    proposition language is empty)."""

    functions: tuple = ()
    predicates: tuple = ()

    def __post_init__(self):
        if not self.predicates:
            raise SignatureError("signature needs at least one predicate symbol")
        for kind, pairs in (("function", self.functions), ("predicate", self.predicates)):
            names = [n for n, _ in pairs]
            if len(names) != len(set(names)):
                raise SignatureError(f"duplicate {kind} names in signature")

    def function_arity(self, name):
        for n, k in self.functions:
            if n == name:
                return k
        return None

    def predicate_arity(self, name):
        for n, k in self.predicates:
            if n == name:
                return k
        return None


def check_term_wf(t: Term, sig: Signature) -> None:
    """Raise SignatureError on an arity violation anywhere in t."""
    if isinstance(t, Fun):
        k = sig.function_arity(t.name)
        if k is None:
            raise SignatureError(f"unknown function symbol {t.name!r}")
        if k != len(t.args):
            raise SignatureError(f"function {t.name!r} expects {k} argument(s), got {len(t.args)}")
        for a in t.args:
            check_term_wf(a, sig)


def check_prop_wf(p: Proposition, sig: Signature) -> None:
    if isinstance(p, Atom):
        k = sig.predicate_arity(p.pred)
        if k is None:
            raise SignatureError(f"unknown predicate symbol {p.pred!r}")
        if k != len(p.args):
            raise SignatureError(f"predicate {p.pred!r} expects {k} argument(s), got {len(p.args)}")
        for a in p.args:
            check_term_wf(a, sig)
    elif isinstance(p, Imp):
        check_prop_wf(p.left, sig)
        check_prop_wf(p.right, sig)
    else:
        check_prop_wf(p.body, sig)


# ---------------------------------------------------------------------------
# Alpha-canonical forms.  Bound variables are numbered by binding depth
# (de Bruijn levels); proof-variable and term-variable namespaces are kept
# separate.  The canonical tuple is cached on the node.

def canon(x) -> tuple:
    c = getattr(x, "_canon", None)
    if c is None:
        c = _canon(x, {}, {}, 0, 0)
        object.__setattr__(x, "_canon", c)
    return c


def _canon(x, tenv, penv, td, pd):
    if isinstance(x, Var):
        i = tenv.get(x.name)
        return ("tv", x.name) if i is None else ("tb", i)
    if isinstance(x, Fun):
        return ("fn", x.name, tuple(_canon(a, tenv, penv, td, pd) for a in x.args))
    if isinstance(x, Atom):
        return ("at", x.pred, tuple(_canon(a, tenv, penv, td, pd) for a in x.args))
    if isinstance(x, Imp):
        return ("im", _canon(x.left, tenv, penv, td, pd), _canon(x.right, tenv, penv, td, pd))
    if isinstance(x, Forall):
        return ("fa", _canon(x.body, {**tenv, x.var: td}, penv, td + 1, pd))
    if isinstance(x, PVar):
        i = penv.get(x.name)
        return ("pv", x.name) if i is None else ("pb", i)
    if isinstance(x, PLam):
        return ("pl", _canon(x.body, tenv, {**penv, x.var: pd}, td, pd + 1))
    if isinstance(x, PApp):
        return ("pa", _canon(x.fn, tenv, penv, td, pd), _canon(x.arg, tenv, penv, td, pd))
    if isinstance(x, TLam):
        return ("tl", _canon(x.body, {**tenv, x.var: td}, penv, td + 1, pd))
    if isinstance(x, TApp):
        return ("ta", _canon(x.fn, tenv, penv, td, pd), _canon(x.arg, tenv, penv, td, pd))
    raise TypeError(f"not a syntax node: {x!r}")


def alpha_eq(a, b) -> bool:
    """Equality up to renaming of bound variables (same syntactic category)."""
    return a == b


# ---------------------------------------------------------------------------
# Free variables

def free_term_vars(x) -> frozenset:
    """Free term-variables of a term, proposition, or proof-term."""
    if isinstance(x, Var):
        return frozenset((x.name,))
    if isinstance(x, (Fun, Atom)):
        out = frozenset()
        for a in x.args:
            out |= free_term_vars(a)
        return out
    if isinstance(x, Imp):
        return free_term_vars(x.left) | free_term_vars(x.right)
    if isinstance(x, (Forall, TLam)):
        return free_term_vars(x.body) - {x.var}
    if isinstance(x, PVar):
        return frozenset()
    if isinstance(x, PLam):
        return free_term_vars(x.body)
    if isinstance(x, PApp):
        return free_term_vars(x.fn) | free_term_vars(x.arg)
    if isinstance(x, TApp):
        return free_term_vars(x.fn) | free_term_vars(x.arg)
    raise TypeError(f"not a syntax node: {x!r}")


def free_proof_vars(p: ProofTerm) -> frozenset:
    if isinstance(p, PVar):
        return frozenset((p.name,))
    if isinstance(p, PLam):
        return free_proof_vars(p.body) - {p.var}
    if isinstance(p, PApp):
        return free_proof_vars(p.fn) | free_proof_vars(p.arg)
    if isinstance(p, TLam):
        return free_proof_vars(p.body)
    if isinstance(p, TApp):
        return free_proof_vars(p.fn)
    raise TypeError(f"not a proof-term: {p!r}")


def bound_proof_vars(p: ProofTerm) -> frozenset:
    """Names used by PLam binders anywhere in p."""
    if isinstance(p, PVar):
        return frozenset()
    if isinstance(p, PLam):
        return bound_proof_vars(p.body) | {p.var}
    if isinstance(p, PApp):
        return bound_proof_vars(p.fn) | bound_proof_vars(p.arg)
    if isinstance(p, (TLam, TApp)):
        inner = p.body if isinstance(p, TLam) else p.fn
        return bound_proof_vars(inner)
    raise TypeError(f"not a proof-term: {p!r}")


def fresh_name(base: str, avoid) -> str:
    """Deterministic fresh name: `base` if unused, else base_1, base_2, ..."""
    if base not in avoid:
        return base
    stem = re.sub(r"_\d+$", "", base)
    k = 1
    while f"{stem}_{k}" in avoid:
        k += 1
    return f"{stem}_{k}"


# ---------------------------------------------------------------------------
# Substitution.  Four operations:
#   subst_term_in_term / subst_term_in_prop   capture-avoiding, term level
#   subst_proof                               capture-avoiding, proof level
#   subst_term_in_proof                       capture-avoiding, Church terms
#   apply_capture_subst                       grafting: binders never renamed
#
# The many-variable versions substitute simultaneously; the single-variable
# entry points are thin wrappers.

def subst_term_in_term(t: Term, x: str, u: Term) -> Term:
    return apply_term_subst(t, {x: u})


def apply_term_subst(t: Term, sub: dict) -> Term:
    if isinstance(t, Var):
        return sub.get(t.name, t)
    return Fun(t.name, tuple(apply_term_subst(a, sub) for a in t.args))


def subst_term_in_prop(p: Proposition, x: str, t: Term) -> Proposition:
    """Replace free occurrences of x by t, renaming bound variables as needed."""
    return apply_prop_subst(p, {x: t})


def apply_prop_subst(p: Proposition, sub: dict) -> Proposition:
    sub = {x: t for x, t in sub.items() if t != Var(x)}
    if not sub:
        return p
    if isinstance(p, Atom):
        return Atom(p.pred, tuple(apply_term_subst(a, sub) for a in p.args))
    if isinstance(p, Imp):
        return Imp(apply_prop_subst(p.left, sub), apply_prop_subst(p.right, sub))
    inner = {x: t for x, t in sub.items() if x != p.var}
    if not inner:
        return p
    clash = any(p.var in free_term_vars(t) for x, t in inner.items()
                if x in free_term_vars(p.body))
    v = p.var
    body = p.body
    if clash:
        avoid = set(free_term_vars(body))
        for t in inner.values():
            avoid |= free_term_vars(t)
        v = fresh_name(p.var, avoid)
        body = apply_prop_subst(body, {p.var: Var(v)})
    return Forall(v, apply_prop_subst(body, inner))


def subst_proof(body: ProofTerm, a: str, arg: ProofTerm) -> ProofTerm:
    """Capture-avoiding replacement of the free proof-variable a by arg."""
    return apply_proof_subst(body, {a: arg})


def apply_proof_subst(p: ProofTerm, sub: dict) -> ProofTerm:
    sub = {a: q for a, q in sub.items() if q != PVar(a)}
    if not sub:
        return p
    if isinstance(p, PVar):
        return sub.get(p.name, p)
    if isinstance(p, PApp):
        return PApp(apply_proof_subst(p.fn, sub), apply_proof_subst(p.arg, sub))
    if isinstance(p, TApp):
        return TApp(apply_proof_subst(p.fn, sub), p.arg)
    if isinstance(p, PLam):
        inner = {a: q for a, q in sub.items() if a != p.var}
        if not any(a in free_proof_vars(p.body) for a in inner):
            return p
        clash = any(p.var in free_proof_vars(q) for a, q in inner.items()
                    if a in free_proof_vars(p.body))
        v, body = p.var, p.body
        if clash:
            avoid = set(free_proof_vars(body))
            for q in inner.values():
                avoid |= free_proof_vars(q)
            v = fresh_name(p.var, avoid)
            body = apply_proof_subst(body, {p.var: PVar(v)})
        return PLam(v, apply_proof_subst(body, inner))
    # TLam binds a term variable: renaming is needed when the binder would
    # capture a term variable free in a substituted proof-term.
    inner = {a: q for a, q in sub.items() if a in free_proof_vars(p.body)}
    if not inner:
        return p
    clash = any(p.var in free_term_vars(q) for q in inner.values())
    v, body = p.var, p.body
    if clash:
        avoid = set(free_term_vars(body))
        for q in inner.values():
            avoid |= free_term_vars(q)
        v = fresh_name(p.var, avoid)
        body = subst_term_in_proof(body, p.var, Var(v))
    return TLam(v, apply_proof_subst(body, inner))


def subst_term_in_proof(p: ProofTerm, x: str, t: Term) -> ProofTerm:
    """Replace the free term-variable x by t inside a proof-term.

    Only TLam/TApp nodes carry term structure, so this is the identity on
    the pure lambda fragment.
    """
    if isinstance(p, PVar):
        return p
    if isinstance(p, PLam):
        return PLam(p.var, subst_term_in_proof(p.body, x, t))
    if isinstance(p, PApp):
        return PApp(subst_term_in_proof(p.fn, x, t), subst_term_in_proof(p.arg, x, t))
    if isinstance(p, TApp):
        return TApp(subst_term_in_proof(p.fn, x, t), subst_term_in_term(p.arg, x, t))
    if p.var == x or x not in free_term_vars(p.body):
        return p
    v, body = p.var, p.body
    if p.var in free_term_vars(t):
        v = fresh_name(p.var, free_term_vars(body) | free_term_vars(t))
        body = subst_term_in_proof(body, p.var, Var(v))
    return TLam(v, subst_term_in_proof(body, x, t))


@dataclass(frozen=True)
class CaptureSubst:
    """Ordered capturing substitution [m_n/a_n]...[m_1/a_1].

    pairs[0] is applied first.  Order matters and the list is never
    normalized: composing single graftings is not commutative.
    """

    pairs: tuple  # of (proof-variable-name, ProofTerm)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


def graft(p: ProofTerm, a: str, arg: ProofTerm) -> ProofTerm:
    """One capturing substitution step: replace free occurrences of a by arg
    without renaming any binder of p (free variables of arg may be captured)."""
    if isinstance(p, PVar):
        return arg if p.name == a else p
    if isinstance(p, PLam):
        return p if p.var == a else PLam(p.var, graft(p.body, a, arg))
    if isinstance(p, PApp):
        return PApp(graft(p.fn, a, arg), graft(p.arg, a, arg))
    if isinstance(p, TLam):
        return TLam(p.var, graft(p.body, a, arg))
    return TApp(graft(p.fn, a, arg), p.arg)


def apply_capture_subst(s: CaptureSubst, nu: ProofTerm) -> ProofTerm:
    for a, m in s.pairs:
        nu = graft(nu, a, m)
    return nu


# ---------------------------------------------------------------------------
# Shape predicates and sizes

def is_neutral(p: ProofTerm) -> bool:
    """A proof-term is neutral when it is not an abstraction of either kind."""
    return not isinstance(p, (PLam, TLam))


def is_curry(p: ProofTerm) -> bool:
    """True when p lives in the pure lambda fragment (no TLam/TApp)."""
    if isinstance(p, PVar):
        return True
    if isinstance(p, PLam):
        return is_curry(p.body)
    if isinstance(p, PApp):
        return is_curry(p.fn) and is_curry(p.arg)
    return False


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def prop_size(p: Proposition) -> int:
    if isinstance(p, Atom):
        return 1 + sum(term_size(a) for a in p.args)
    if isinstance(p, Imp):
        return 1 + prop_size(p.left) + prop_size(p.right)
    return 1 + prop_size(p.body)


def proof_size(p: ProofTerm) -> int:
    if isinstance(p, PVar):
        return 1
    if isinstance(p, (PLam, TLam)):
        return 1 + proof_size(p.body)
    if isinstance(p, PApp):
        return 1 + proof_size(p.fn) + proof_size(p.arg)
    return 1 + proof_size(p.fn) + term_size(p.arg)


# ---------------------------------------------------------------------------
# Printing

def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.name
    return f"{t.name}({', '.join(print_term(a) for a in t.args)})"


def print_prop(p: Proposition) -> str:
    if isinstance(p, Atom):
        if not p.args:
            return p.pred
        return f"{p.pred}({', '.join(print_term(a) for a in p.args)})"
    if isinstance(p, Imp):
        left = print_prop(p.left)
        if isinstance(p.left, (Imp, Forall)):
            left = f"({left})"
        return f"{left} => {print_prop(p.right)}"
    return f"!{p.var}. {print_prop(p.body)}"


def print_proof(p: ProofTerm) -> str:
    if isinstance(p, PVar):
        return p.name
    if isinstance(p, PLam):
        return f"\\{p.var}. {print_proof(p.body)}"
    if isinstance(p, TLam):
        return f"^{p.var}. {print_proof(p.body)}"
    if isinstance(p, TApp):
        fn = print_proof(p.fn)
        if isinstance(p.fn, (PLam, TLam)):
            fn = f"({fn})"
        return f"{fn} [{print_term(p.arg)}]"
    fn = print_proof(p.fn)
    if isinstance(p.fn, (PLam, TLam)):
        fn = f"({fn})"
    arg = print_proof(p.arg)
    if not isinstance(p.arg, PVar):
        arg = f"({arg})"
    return f"{fn} {arg}"


# ---------------------------------------------------------------------------
# Parsing

class ParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} (at column {pos + 1})")
        self.pos = pos


_TOKEN_RE = re.compile(r"""
      (?P<ws>\s+)
    | (?P<arrow>=>)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    | (?P<punct>[().,!\\^\[\]:])
""", re.VERBOSE)


def tokenize(text: str):
    out = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        if m.lastgroup == "ws":
            i = m.end()
            continue
        kind = m.lastgroup if m.lastgroup != "punct" else m.group()
        out.append((kind, m.group(), i))
        i = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, sig=None):
        self.toks = tokenize(text)
        self.i = 0
        self.sig = sig

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind):
        k, v, pos = self.next()
        if k != kind:
            raise ParseError(f"expected {kind!r}, found {v or 'end of input'!r}", pos)
        return v, pos

    def done(self):
        k, v, pos = self.peek()
        if k != "eof":
            raise ParseError(f"trailing input {v!r}", pos)

    # terms ---------------------------------------------------------------
    def term(self) -> Term:
        name, pos = self.expect("ident")
        args = ()
        if self.peek()[0] == "(":
            self.next()
            args = self.term_list()
            self.expect(")")
        if self.sig is not None:
            k = self.sig.function_arity(name)
            if k is not None:
                if k != len(args):
                    raise ParseError(f"function {name!r} expects {k} argument(s), got {len(args)}", pos)
                return Fun(name, args)
            if self.sig.predicate_arity(name) is not None:
                raise ParseError(f"predicate {name!r} used in term position", pos)
            if args:
                raise ParseError(f"unknown function symbol {name!r}", pos)
            return Var(name)
        return Fun(name, args) if args else Var(name)

    def term_list(self):
        out = [self.term()]
        while self.peek()[0] == ",":
            self.next()
            out.append(self.term())
        return tuple(out)

    # propositions ---------------------------------------------------------
    def prop(self) -> Proposition:
        left = self.prop_unit()
        if self.peek()[0] == "arrow":
            self.next()
            return Imp(left, self.prop())
        return left

    def prop_unit(self) -> Proposition:
        k, v, pos = self.peek()
        if k == "!":
            self.next()
            x, _ = self.expect("ident")
            self.expect(".")
            return Forall(x, self.prop())
        if k == "(":
            self.next()
            p = self.prop()
            self.expect(")")
            return p
        name, pos = self.expect("ident")
        args = ()
        if self.peek()[0] == "(":
            self.next()
            args = self.term_list()
            self.expect(")")
        if self.sig is not None:
            k = self.sig.predicate_arity(name)
            if k is None:
                raise ParseError(f"unknown predicate symbol {name!r}", pos)
            if k != len(args):
                raise ParseError(f"predicate {name!r} expects {k} argument(s), got {len(args)}", pos)
        return Atom(name, args)

    # proof-terms ----------------------------------------------------------
    def proof(self, style) -> ProofTerm:
        k, v, pos = self.peek()
        if k == "\\":
            self.next()
            a, _ = self.expect("ident")
            self.expect(".")
            return PLam(a, self.proof(style))
        if k == "^":
            if style != CHURCH:
                raise ParseError("term abstraction '^' is Church-style only", pos)
            self.next()
            x, _ = self.expect("ident")
            self.expect(".")
            return TLam(x, self.proof(style))
        acc = self.proof_atom(style)
        while True:
            k, v, pos = self.peek()
            if k == "[":
                if style != CHURCH:
                    raise ParseError("term application '[t]' is Church-style only", pos)
                self.next()
                t = self.term()
                self.expect("]")
                acc = TApp(acc, t)
            elif k in ("ident", "("):
                acc = PApp(acc, self.proof_atom(style))
            else:
                return acc

    def proof_atom(self, style) -> ProofTerm:
        k, v, pos = self.peek()
        if k == "(":
            self.next()
            p = self.proof(style)
            self.expect(")")
            return p
        name, _ = self.expect("ident")
        return PVar(name)


def parse_term(text: str, sig: Signature | None = None) -> Term:
    p = _Parser(text, sig)
    t = p.term()
    p.done()
    return t


def parse_prop(text: str, sig: Signature | None = None) -> Proposition:
    p = _Parser(text, sig)
    r = p.prop()
    p.done()
    return r


def parse_proof(text: str, style: str = CURRY, sig: Signature | None = None) -> ProofTerm:
    if style not in (CURRY, CHURCH):
        raise ValueError(f"unknown style {style!r}")
    p = _Parser(text, sig)
    r = p.proof(style)
    p.done()
    return r


def parse(text: str, kind: str, sig: Signature | None = None):
    """Parse `text` as one of: term, proposition, proof-curry, proof-church."""
    if kind == "term":
        return parse_term(text, sig)
    if kind == "proposition":
        return parse_prop(text, sig)
    if kind == "proof-curry":
        return parse_proof(text, CURRY, sig)
    if kind == "proof-church":
        return parse_proof(text, CHURCH, sig)
    raise ValueError(f"unknown parse kind {kind!r}")
