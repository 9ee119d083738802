import pytest
from hypothesis import given, settings

from helpers import delta_delta_derivation
from mdm.reduction import (
    Diverges, NormalizeResult, SN, SNUnknown, beta_reducts, beta_steps,
    contract, is_normal, is_redex, normalize, redex_paths, reduce_derivation,
    reduction_tree, sn_verdict, subterm_at,
)
from mdm.rewriting import Theory
from mdm.syntax import (
    CHURCH, Atom, Fun, Imp, PApp, PLam, PVar, TApp, TLam, Var, parse_proof,
    parse_prop,
)
from mdm.typecheck import (
    Context, axiom, check_derivation, erase, erase_derivation, forall_elim,
    forall_intro, imp_elim, imp_intro,
)
from strats import SIG, proofs

DELTA = parse_proof(r"\a. a a")
DD = PApp(DELTA, DELTA)


def pf(s, style="curry"):
    return parse_proof(s, style)


class TestBetaReducts:
    def test_self_application_loops(self):
        assert beta_reducts(DD) == {DD}

    def test_variable_normal(self):
        assert beta_reducts(PVar("a")) == frozenset()

    def test_two_positions(self):
        p = pf(r"(\a. a) ((\b. b) e)")
        assert beta_reducts(p) == {pf(r"(\b. b) e"), pf(r"(\a. a) e")}

    def test_church_term_redex(self):
        p = TApp(TLam("x", PVar("a")), Fun("c"))
        assert beta_reducts(p) == {PVar("a")}

    def test_steps_match_positions(self):
        p = pf(r"(\a. a) ((\b. b) e)")
        assert len(beta_steps(p)) == len(redex_paths(p)) == 2

    def test_alpha_equal_reducts_collapse_in_set_only(self):
        # both redex positions contract to (\x. x) e, so the set has one
        # element while two positions exist
        p = PApp(PLam("a", PVar("a")), PApp(PLam("b", PVar("b")), PVar("e")))
        inner_first = PApp(PLam("a", PVar("a")), PVar("e"))
        outer_first = PApp(PLam("b", PVar("b")), PVar("e"))
        assert inner_first == outer_first
        assert len(beta_steps(p)) == 2
        assert beta_reducts(p) == {inner_first}

    @settings(max_examples=60, deadline=None)
    @given(proofs(max_leaves=8))
    def test_positions_bound_reducts(self, p):
        assert len(beta_reducts(p)) <= len(redex_paths(p))


class TestNormal:
    def test_variable(self):
        assert is_normal(PVar("a"))

    def test_neutral_self_application(self):
        assert is_normal(PApp(PVar("a"), PVar("a")))

    def test_redex_not_normal(self):
        assert not is_normal(pf(r"(\a. a) b"))


class TestReductionTree:
    def test_singleton(self):
        t = reduction_tree(PVar("a"), 5)
        assert t.children == [] and not t.truncated and not t.cycle

    def test_one_step(self):
        t = reduction_tree(pf(r"(\a. b) e"), 10)
        assert len(t.children) == 1
        assert t.children[0].root == PVar("b")
        assert t.children[0].children == []

    def test_cycle_recorded(self):
        t = reduction_tree(DD, 3)
        assert len(t.children) == 1
        child = t.children[0]
        assert child.root == DD
        assert child.cycle

    def test_truncation(self):
        p = pf(r"(\a. a) ((\b. b) ((\e. e) z))")
        t = reduction_tree(p, 2)
        assert t.truncated or any(c.truncated for c in t.children)


class TestSNVerdict:
    def test_delta_delta_diverges(self):
        v = sn_verdict(DD, 1000)
        assert isinstance(v, Diverges)
        assert v.cycle_length == 1

    def test_identity_is_normal(self):
        assert sn_verdict(pf(r"\a. a"), 10) == SN(0, 1)

    def test_two_step_chain(self):
        v = sn_verdict(pf(r"(\a. a a) (\b. b)"), 100)
        assert v == SN(2, 3)

    def test_budget_exhaustion(self):
        v = sn_verdict(pf(r"(\a. a a) (\b. b)"), 1)
        assert isinstance(v, SNUnknown)

    def test_longer_cycle(self):
        # (\a. a a) e has no cycle; build a 1-cycle nested under context
        p = PApp(PVar("e"), DD)
        v = sn_verdict(p, 100)
        assert isinstance(v, Diverges)

    @settings(max_examples=40, deadline=None)
    @given(proofs(max_leaves=7))
    def test_sn_decreases_along_reduction(self, p):
        v = sn_verdict(p, 2000)
        if isinstance(v, SN):
            for r in beta_reducts(p):
                vr = sn_verdict(r, 2000)
                assert isinstance(vr, SN) and vr.max_length < v.max_length


class TestNormalize:
    def test_already_normal(self):
        assert normalize(PVar("a")) == NormalizeResult(PVar("a"), 0, True)

    def test_leftmost_outermost_escapes_divergent_argument(self):
        # (\a. b) DD normalizes to b outermost-first even though DD loops
        p = PApp(PLam("a", PVar("b")), DD)
        r = normalize(p, 100)
        assert r.normal and r.term == PVar("b")

    def test_divergent_term_exhausts_fuel(self):
        r = normalize(DD, 50)
        assert not r.normal and r.steps == 50


class TestReduceDerivation:
    def _plain(self):
        return Theory(signature=SIG, rules=())

    def test_identity_redex(self):
        P = Atom("P")
        g = Context((("h", P),))
        ident = imp_intro(axiom(g.extend("a", P), "a"))
        arg = axiom(g, "h")
        d = imp_elim(ident, arg, b=P)
        assert d.subject == pf(r"(\a. a) h")
        out = reduce_derivation(self._plain(), d, ())
        assert out.subject == PVar("h")
        assert out.ctx == d.ctx and out.prop == d.prop
        assert check_derivation(self._plain(), out).ok

    def test_delta_delta_head_redex(self, selfapp):
        d = delta_delta_derivation()
        out = reduce_derivation(selfapp, d, ())
        assert out.subject == d.subject  # the loop reduces to itself
        assert out.ctx == d.ctx and out.prop == d.prop
        assert check_derivation(selfapp, out, 50).ok

    def test_church_term_redex(self):
        g = Context((("a", parse_prop("Q(x)", SIG)),))
        prem = axiom(g, "a", style=CHURCH)
        # generalizing over a fresh variable, then instantiating at c
        gen = forall_intro(prem, "y")
        d = forall_elim(gen, "y", parse_prop("Q(x)", SIG), Fun("c"))
        assert d.subject == TApp(TLam("y", PVar("a")), Fun("c"))
        out = reduce_derivation(self._plain(), d, ())
        assert out.subject == PVar("a")
        assert check_derivation(self._plain(), out).ok

    def test_inner_redex_path(self):
        P = Atom("P")
        g = Context((("h", P),))
        ident = imp_intro(axiom(g.extend("a", P), "a"))
        inner = imp_elim(ident, axiom(g, "h"), b=P)
        ident2 = imp_intro(axiom(g.extend("b", P), "b"))
        d = imp_elim(ident2, inner, b=P)
        assert d.subject == pf(r"(\b. b) ((\a. a) h)")
        out = reduce_derivation(self._plain(), d, (1,))
        assert out.subject == pf(r"(\b. b) h")
        assert check_derivation(self._plain(), out).ok

    def test_redex_under_silent_quantifier(self):
        P = Atom("P")
        g = Context((("h", P),))
        ident = imp_intro(axiom(g.extend("a", P), "a"))
        app = imp_elim(ident, axiom(g, "h"), b=P)
        wrapped = forall_elim(forall_intro(app, "x"), "x", P, Fun("c"))
        assert wrapped.subject == app.subject
        out = reduce_derivation(self._plain(), wrapped, ())
        assert out.subject == PVar("h")
        assert check_derivation(self._plain(), out).ok

    def test_invalid_path_rejected(self):
        P = Atom("P")
        d = axiom(Context((("h", P),)), "h")
        from mdm.typecheck import TransformError
        with pytest.raises(TransformError):
            reduce_derivation(self._plain(), d, (0,))
        with pytest.raises(TransformError):
            reduce_derivation(self._plain(), d, ())


class TestErasureSimulation:
    def test_proof_beta_maps_to_curry_beta(self):
        church = PApp(PLam("a", TApp(PVar("a"), Var("x"))), PVar("b"))
        reduct = contract(church)
        assert erase(reduct) in beta_reducts(erase(church))

    def test_term_beta_erases_to_equality(self):
        church = TApp(TLam("x", PApp(PVar("a"), PVar("b"))), Fun("c"))
        reduct = contract(church)
        assert erase(church) == erase(reduct)
