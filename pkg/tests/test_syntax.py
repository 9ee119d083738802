import pytest
from hypothesis import given

import hypothesis.strategies as st
from mdm.syntax import (
    CHURCH, CURRY, Atom, CaptureSubst, Forall, Fun, Imp, PApp, PLam, PVar,
    ParseError, Signature, SignatureError, TApp, TLam, Var, alpha_eq,
    apply_capture_subst, bound_proof_vars, free_proof_vars, free_term_vars,
    fresh_name, graft, is_curry, is_neutral, parse, parse_proof, parse_prop,
    parse_term, print_proof, print_prop, print_term, proof_size, prop_size,
    subst_proof, subst_term_in_prop, subst_term_in_proof,
)
from strats import PROOF_VARS, SIG, proofs, props, terms


def pp(s):
    return parse_prop(s, SIG)


def pf(s, style=CURRY):
    return parse_proof(s, style)


class TestSignature:
    def test_empty_predicates_rejected(self):
        with pytest.raises(SignatureError):
            Signature(functions=(), predicates=())

    def test_duplicate_names_rejected(self):
        with pytest.raises(SignatureError):
            Signature(predicates=(("P", 0), ("P", 1)))


class TestParse:
    def test_nullary_atom(self):
        assert pp("P") == Atom("P")

    def test_self_application(self):
        assert pf(r"\a. a a") == PLam("a", PApp(PVar("a"), PVar("a")))

    def test_forall_over_implication(self):
        assert pp("!x. (P => P)") == Forall("x", Imp(Atom("P"), Atom("P")))
        assert pp("!x. P => P") == Forall("x", Imp(Atom("P"), Atom("P")))

    def test_imp_right_assoc(self):
        assert pp("P => P => P") == Imp(Atom("P"), Imp(Atom("P"), Atom("P")))

    def test_app_left_assoc(self):
        assert pf("a b e") == PApp(PApp(PVar("a"), PVar("b")), PVar("e"))

    def test_church_forms(self):
        assert pf("^x. a [c]", CHURCH) == TLam("x", TApp(PVar("a"), Var("c")))

    def test_church_forms_rejected_in_curry(self):
        with pytest.raises(ParseError):
            pf("^x. a")
        with pytest.raises(ParseError):
            pf("a [x]")

    def test_arity_mismatch(self):
        with pytest.raises(ParseError):
            pp("Q(x, y)")
        with pytest.raises(ParseError):
            parse_term("f(x, y)", SIG)

    def test_unknown_symbols(self):
        with pytest.raises(ParseError):
            pp("Nope")
        with pytest.raises(ParseError):
            parse_term("h(x)", SIG)

    def test_position_in_error(self):
        with pytest.raises(ParseError) as e:
            pp("P => => P")
        assert "column" in str(e.value)

    def test_kind_dispatch(self):
        assert parse("c", "term", SIG) == Fun("c")
        assert parse("P", "proposition", SIG) == Atom("P")
        assert parse("a", "proof-curry") == PVar("a")
        assert parse("a [c]", "proof-church") == TApp(PVar("a"), Var("c"))


class TestAlpha:
    def test_bound_rename_equal(self):
        assert pp("!x. Q(x)") == pp("!y. Q(y)")
        assert alpha_eq(pf(r"\a. a"), pf(r"\b. b"))

    def test_free_vars_differ(self):
        assert pp("Q(x)") != pp("Q(y)")

    def test_cross_category_never_equal(self):
        assert Atom("P") != PVar("P")

    def test_hash_consistency(self):
        assert len({pp("!x. Q(x)"), pp("!z. Q(z)")}) == 1


class TestFreeVars:
    def test_fully_bound(self):
        assert free_term_vars(pp("!x. Q(x)")) == frozenset()

    def test_left_occurrence_free(self):
        p = Imp(Atom("Q", (Var("x"),)), Forall("x", Atom("Q", (Var("x"),))))
        assert free_term_vars(p) == {"x"}

    def test_binary_atom(self):
        assert free_term_vars(pp("R(x, y)")) == {"x", "y"}

    def test_church_proof_term_vars(self):
        assert free_term_vars(pf("^x. a [g(x, y)]", CHURCH)) == {"y"}


class TestSubstProp:
    def test_plain(self):
        assert subst_term_in_prop(pp("Q(x)"), "x", Fun("c")) == pp("Q(c)")

    def test_capture_forces_rename(self):
        p = Forall("y", Atom("R", (Var("x"), Var("y"))))
        q = subst_term_in_prop(p, "x", Var("y"))
        assert isinstance(q, Forall)
        assert q.var != "y"
        assert q == Forall("w", Atom("R", (Var("y"), Var("w"))))

    def test_identity(self):
        p = pp("!x. R(x, y)")
        assert subst_term_in_prop(p, "x", Var("x")) == p
        assert subst_term_in_prop(p, "y", Var("y")) == p

    @given(props(), st.sampled_from(["x", "y", "z"]), terms())
    def test_free_var_equation(self, p, x, t):
        got = free_term_vars(subst_term_in_prop(p, x, t))
        expected = free_term_vars(p) - {x}
        if x in free_term_vars(p):
            expected |= free_term_vars(t)
        assert got == expected


class TestSubstProof:
    def test_capture_avoided(self):
        out = subst_proof(PLam("b", PVar("a")), "a", PVar("b"))
        assert out == PLam("z", PVar("b"))
        assert out != PLam("b", PVar("b"))

    def test_direct(self):
        m = pf(r"\a. a a")
        assert subst_proof(PVar("a"), "a", m) == m

    def test_shadowed_binder(self):
        p = PLam("a", PVar("a"))
        assert subst_proof(p, "a", PVar("b")) == p

    def test_church_term_binder_capture(self):
        # substituting a proof-term with free term variable x under ^x
        body = TLam("x", PApp(PVar("a"), PVar("a")))
        arg = TApp(PVar("b"), Var("x"))
        out = subst_proof(body, "a", arg)
        assert isinstance(out, TLam) and out.var != "x"
        assert free_term_vars(out) == {"x"}


class TestSubstTermInProof:
    def test_church_app(self):
        p = TApp(PVar("a"), Var("x"))
        assert subst_term_in_proof(p, "x", Fun("c")) == TApp(PVar("a"), Fun("c"))

    def test_shadowed(self):
        p = TLam("x", PVar("a"))
        assert subst_term_in_proof(p, "x", Fun("c")) == p

    def test_no_occurrence(self):
        assert subst_term_in_proof(PVar("a"), "x", Fun("c")) == PVar("a")

    def test_pure_fragment_untouched(self):
        p = pf(r"\a. a a")
        assert subst_term_in_proof(p, "x", Fun("c")) == p


class TestCaptureSubst:
    def test_capture_intended(self):
        s = CaptureSubst((("a", PVar("b")),))
        assert apply_capture_subst(s, PLam("b", PVar("a"))) == PLam("b", PVar("b"))

    def test_parallel_pairs(self):
        m1, m2 = pf(r"\a. a"), PVar("e")
        s = CaptureSubst((("h1", m1), ("h2", m2)))
        out = apply_capture_subst(s, PApp(PVar("h1"), PVar("h2")))
        assert out == PApp(m1, m2)

    def test_vacuous(self):
        s = CaptureSubst((("a", pf(r"\b. b")),))
        assert apply_capture_subst(s, PVar("e")) == PVar("e")

    def test_order_matters(self):
        s1 = CaptureSubst((("a", PVar("b")), ("b", PVar("e"))))
        s2 = CaptureSubst((("b", PVar("e")), ("a", PVar("b"))))
        assert apply_capture_subst(s1, PVar("a")) == PVar("e")
        assert apply_capture_subst(s2, PVar("a")) == PVar("b")

    def test_bound_occurrences_untouched(self):
        s = CaptureSubst((("a", PVar("b")),))
        p = PLam("a", PVar("a"))
        assert apply_capture_subst(s, p) == p

    @given(proofs(), st.sampled_from(PROOF_VARS), proofs())
    def test_agrees_with_subst_when_no_capture_possible(self, nu, a, m):
        if free_proof_vars(m) & bound_proof_vars(nu):
            return
        assert apply_capture_subst(CaptureSubst(((a, m),)), nu) == subst_proof(nu, a, m)


class TestNeutral:
    def test_variable(self):
        assert is_neutral(PVar("a"))

    def test_lambda(self):
        assert not is_neutral(pf(r"\a. a"))
        assert not is_neutral(pf("^x. a", CHURCH))

    def test_application(self):
        assert is_neutral(pf(r"(\a. a) b"))
        assert is_neutral(pf("a [c]", CHURCH))


class TestCurryFragment:
    def test_pure(self):
        assert is_curry(pf(r"\a. a a"))

    def test_church_nodes(self):
        assert not is_curry(pf("^x. a", CHURCH))
        assert not is_curry(pf("a [c]", CHURCH))


class TestRoundTrip:
    @given(terms())
    def test_terms(self, t):
        assert parse_term(print_term(t), SIG) == t

    @given(props(max_leaves=12))
    def test_props(self, p):
        assert parse_prop(print_prop(p), SIG) == p

    @given(proofs(CURRY, max_leaves=12))
    def test_curry_proofs(self, p):
        assert parse_proof(print_proof(p), CURRY) == p

    @given(proofs(CHURCH, max_leaves=12))
    def test_church_proofs(self, p):
        assert parse_proof(print_proof(p), CHURCH, SIG) == p


def test_fresh_name_deterministic():
    assert fresh_name("x", set()) == "x"
    assert fresh_name("x", {"x"}) == "x_1"
    assert fresh_name("x_1", {"x", "x_1"}) == "x_2"
    assert fresh_name("x", {"x", "x_1", "x_2"}) == "x_3"


def test_sizes():
    assert prop_size(pp("P => P")) == 3
    assert prop_size(pp("!x. Q(f(x))")) == 4
    assert proof_size(pf(r"(\a. a a) b")) == 6
