import pytest

from mdm.candidates import (
    ArrowResult, CheckVerdict, ClosureTable, FiniteCandidate, SearchBounds,
    UniversalContext, Universe, adequacy_check, build_universe, candidate_close,
    church_forall_defect_demo, cl0, cl_step, closure, cr1, cr2, cr3, cr3aux,
    cr3prime, decompositions, forall_candidate, imp_candidate,
    imp_candidate_ex, omega, random_candidates, sn_slice, verify_clfamorph,
    verify_clramorph, verify_clsubst, verify_lambdacl, verify_mink,
    verify_monotone,
)
from mdm.semantics import env_key
from mdm.syntax import (
    Atom, CaptureSubst, Forall, Fun, Imp, PApp, PLam, PVar, Var,
    apply_capture_subst, parse_proof, parse_prop, proof_size,
)
from mdm.typecheck import Context, axiom, check_derivation, imp_intro

DD = parse_proof(r"(\a. a a) (\a. a a)")
P = Atom("P")


@pytest.fixture(scope="module")
def u5():
    return build_universe(5, ("g", "h"))


@pytest.fixture(scope="module")
def u7():
    return build_universe(7, ("h1", "h2", "h3"))


@pytest.fixture(scope="module")
def delta7():
    return Context((("h1", P), ("h2", P), ("h3", Imp(P, P))))


@pytest.fixture(scope="module")
def bounds7(u7):
    return SearchBounds(u7, depth=3, fuel=60, k_max=3, n_max=2)


class TestUniverse:
    def test_counts_modulo_alpha(self):
        u = build_universe(3, ("a",))
        # size 1: a; size 2: \v.v, \v.a; size 3: \v.\w coverage + apps
        assert PVar("a") in u.members
        assert parse_proof(r"\b. b") in u.members
        assert parse_proof("a a") in u.members
        assert len([p for p in u.members if proof_size(p) == 1]) == 1

    def test_reducts_stay_inside_at_small_sizes(self, u7):
        assert u7.boundary == frozenset()

    def test_boundary_recorded_when_reducts_escape(self):
        u = build_universe(10, ("a",))
        # (\b. b b) ((\c. c) a) duplicates a size-5 argument: the reduct
        # has size 11 and must be recorded as a boundary term
        dup = parse_proof(r"(\b. b b) ((\c. c) a)")
        assert dup in u.members
        assert any(proof_size(t) > 10 for t in u.boundary)


class TestCRProperties:
    def test_cr1_singleton_identity(self):
        assert cr1(FiniteCandidate(frozenset({parse_proof(r"\a. a")}))).ok

    def test_cr1_divergent_fails(self):
        v = cr1(FiniteCandidate(frozenset({DD})))
        assert v.status == "fail"

    def test_cr1_empty_vacuous(self):
        assert cr1(FiniteCandidate(frozenset())).ok

    def test_cr2_closed_pair(self, u5):
        s = FiniteCandidate(frozenset({parse_proof(r"(\a. a) g"), PVar("g")}))
        assert cr2(s, u5).ok

    def test_cr2_missing_reduct(self, u5):
        s = FiniteCandidate(frozenset({parse_proof(r"(\a. a) g")}))
        v = cr2(s, u5)
        assert v.status == "fail"
        assert (parse_proof(r"(\a. a) g"), PVar("g")) in v.failures

    def test_cr2_sn_slice_closed(self, u5):
        assert cr2(sn_slice(u5), u5).ok

    def test_cr3_requires_neutral_normal_terms(self, u5):
        gg = PApp(PVar("g"), PVar("g"))
        s = FiniteCandidate(sn_slice(u5).members - {gg})
        v = cr3(s, u5)
        assert v.status == "fail"
        assert gg in v.failures

    def test_cr3aux_ignores_normal_neutrals(self, u5):
        gg = PApp(PVar("g"), PVar("g"))
        full = candidate_close(sn_slice(u5).members - {gg}, u5)
        s = FiniteCandidate(full - {gg})
        assert gg not in s.members
        assert cr3aux(s, u5).ok

    def test_cr3prime_single_hole(self, u5):
        s = FiniteCandidate(frozenset({PVar("g")}))
        v = cr3prime(s, u5, n_max=1)
        assert v.status == "fail"
        assert any(p == parse_proof(r"(\b. b) g") for p, _ in v.failures)

    def test_cr3prime_closure_passes(self, u5):
        s = FiniteCandidate(candidate_close({PVar("g")}, u5))
        assert cr3prime(s, u5).ok


class TestDecompositions:
    def test_grafting_reconstructs(self, u5):
        for p in list(u5.members)[:200]:
            for nu, pairs in decompositions(p, 2):
                assert apply_capture_subst(CaptureSubst(pairs), nu) == p

    def test_capture_marking_allowed_by_default(self):
        p = PLam("a", PApp(PLam("b", PVar("b")), PVar("a")))
        decs = list(decompositions(p, 1, captured_ok=True))
        assert decs  # the inner redex mentions the bound a
        assert not list(decompositions(p, 1, captured_ok=False))


class TestOmega:
    def test_reducible_application(self):
        assert omega(parse_proof(r"(\a. a) b")).ok

    def test_normal_neutral_out(self):
        assert not omega(parse_proof("a a")).ok

    def test_divergent_out(self):
        assert not omega(DD).ok

    def test_abstraction_out(self):
        assert not omega(parse_proof(r"\a. (\b. b) a")).ok


class TestCandidateAlgebra:
    def test_full_universe_absorbs(self, u5):
        full = FiniteCandidate(u5.members)
        some = FiniteCandidate(frozenset({PVar("g")}))
        assert imp_candidate(some, full, u5).members == u5.members

    def test_identity_in_arrow_of_sn_closure(self, u5):
        s = FiniteCandidate(candidate_close({PVar("g"), PVar("h")}, u5))
        arrow = imp_candidate(s, s, u5)
        assert parse_proof(r"\a. a") in arrow.members

    def test_forall_singleton(self, u5):
        c = FiniteCandidate(frozenset({PVar("g")}))
        assert forall_candidate([c]).members == c.members

    def test_forall_intersection(self):
        a = FiniteCandidate(frozenset({PVar("g"), PVar("h")}))
        b = FiniteCandidate(frozenset({PVar("h")}))
        assert forall_candidate([a, b]).members == {PVar("h")}

    def test_forall_empty_family_rejected(self):
        with pytest.raises(ValueError):
            forall_candidate([])

    def test_forall_is_greatest_lower_bound(self, u5):
        cands = random_candidates(u5, 8, seed=3)
        for i in range(0, len(cands) - 2, 3):
            fam = cands[i:i + 3]
            meet = forall_candidate(fam)
            for c in fam:
                assert meet.members <= c.members
            for lower in cands:
                if all(lower.members <= c.members for c in fam):
                    assert lower.members <= meet.members


class TestUniversalContext:
    def test_deterministic_and_injective(self):
        c1, c2 = UniversalContext(), UniversalContext()
        assert c1.var_name(P, 0) == c2.var_name(P, 0)
        assert c1.var_name(P, 0) != c1.var_name(P, 1)
        assert c1.var_name(P, 0) != c1.var_name(Imp(P, P), 0)

    def test_slice_is_a_context(self):
        ctx = UniversalContext().slice([(P, 2), (Imp(P, P), 1)])
        assert len(ctx) == 3
        assert sum(1 for _, p in ctx if p == P) == 2


class TestCl0:
    def test_empty_theory_atom(self, empty_theory, u7, delta7, bounds7):
        s0 = cl0(empty_theory, delta7, P, {}, bounds7)
        assert PVar("h1") in s0 and PVar("h2") in s0
        assert parse_proof("h3 h1") in s0
        # an abstraction cannot prove an atom when no rule reshapes it
        assert parse_proof(r"\a. h1") not in s0

    def test_empty_theory_arrow(self, empty_theory, u7, delta7, bounds7):
        s0 = cl0(empty_theory, delta7, Imp(P, P), {}, bounds7)
        assert parse_proof(r"\a. a") in s0
        assert parse_proof(r"\a. h1") in s0

    def test_selfapp_contains_self_application(self, selfapp, u7, bounds7):
        A = Atom("A")
        delta = Context((("h1", A), ("h2", A), ("h3", A)))
        s0 = cl0(selfapp, delta, A, {}, bounds7)
        assert parse_proof(r"\a. a a") in s0


class TestClosure:
    def test_stage_zero_only(self, empty_theory, delta7, bounds7):
        t = closure(empty_theory, delta7, P, {}, 0, bounds7)
        assert len(t.stages) == 1

    def test_monotone_and_mink(self, empty_theory, delta7, bounds7):
        t = closure(empty_theory, delta7, P, {}, 3, bounds7)
        assert verify_monotone(t).passed
        assert verify_mink(t).passed

    def test_normal_members_enter_at_stage_zero(self, empty_theory, delta7, bounds7):
        from mdm.reduction import is_normal
        t = closure(empty_theory, delta7, P, {}, 3, bounds7)
        for p, k in t.first_stage.items():
            if is_normal(p):
                assert k == 0

    def test_cl_step_single_hole_example(self, u5):
        prev = frozenset({PVar("g")})
        nxt, boundary, unknown = cl_step(prev, u5, 1, 1000)
        assert parse_proof(r"(\a. a) g") in nxt

    def test_cl_step_fixpoint(self, u5):
        s = candidate_close({PVar("g")}, u5)
        nxt, _, _ = cl_step(s, u5, 2, 1000)
        assert nxt == s

    def test_stages_satisfy_cr1_cr2(self, empty_theory, u7, delta7, bounds7):
        t = closure(empty_theory, delta7, Imp(P, P), {}, 3, bounds7)
        for stage in t.stages:
            c = FiniteCandidate(stage)
            assert cr1(c).ok
            assert cr2(c, u7).ok


class TestLemmas:
    def test_clramorph_empty_theory(self, empty_theory, delta7, bounds7):
        rep = verify_clramorph(empty_theory, delta7, P, P, {}, 3, bounds7)
        assert rep.passed, rep.summary()

    def test_lambdacl_empty_theory(self, empty_theory, delta7, bounds7):
        rep = verify_lambdacl(empty_theory, delta7, P, P, {}, 3, bounds7)
        assert rep.passed, rep.summary()
        assert rep.checked > 0

    def test_clsubst_and_clfamorph(self, empty_theory):
        sig = empty_theory.signature
        body = parse_prop("R(x)", sig)
        u = build_universe(7, ("g1", "g2", "g3"))
        delta = Context((("g1", parse_prop("!x. R(x)", sig)),
                         ("g2", parse_prop("R(c)", sig)),
                         ("g3", parse_prop("R(d)", sig))))
        terms = (Fun("c"), Fun("d"))
        bounds = SearchBounds(u, depth=3, fuel=60, k_max=3, n_max=2, inst_terms=terms)
        rep = verify_clsubst(empty_theory, delta, body, "x", Fun("c"), {}, 3, bounds)
        assert rep.passed, rep.summary()
        rep2 = verify_clfamorph(empty_theory, delta, "x", body, {}, 3, bounds, terms)
        assert rep2.passed, rep2.summary()

    def test_clsubst_rejects_entangled_environment(self, empty_theory, delta7, bounds7):
        with pytest.raises(ValueError):
            verify_clsubst(empty_theory, delta7, parse_prop("R(x)", empty_theory.signature),
                           "x", Var("y"), {"y": Fun("c")}, 2, bounds7)


class TestAdequacy:
    def test_identity_derivation(self, empty_theory, delta7, bounds7):
        tP = closure(empty_theory, delta7, P, {}, 3, bounds7)
        tPP = closure(empty_theory, delta7, Imp(P, P), {}, 3, bounds7)
        tables = {(P, env_key({})): tP, (Imp(P, P), env_key({})): tPP}
        ident = imp_intro(axiom(Context().extend("a", P), "a"))
        assert adequacy_check(empty_theory, ident, tables, {}, {}, bounds7).ok

    def test_axiom_with_adequate_substitution(self, empty_theory, delta7, bounds7):
        tP = closure(empty_theory, delta7, P, {}, 3, bounds7)
        tables = {(P, env_key({})): tP}
        d = axiom(Context((("a", P),)), "a")
        v = adequacy_check(empty_theory, d, tables, {"a": parse_proof("h3 h1")}, {}, bounds7)
        assert v.ok

    def test_inadequate_substitution_fails(self, empty_theory, delta7, bounds7):
        tP = closure(empty_theory, delta7, P, {}, 3, bounds7)
        tables = {(P, env_key({})): tP}
        d = axiom(Context((("a", P),)), "a")
        v = adequacy_check(empty_theory, d, tables, {"a": parse_proof("h1 h1")}, {}, bounds7)
        assert v.status == "fail"


class TestRandomCandidates:
    def test_all_pass_three_properties(self, u5):
        cands = random_candidates(u5, 10, seed=42)
        assert len(cands) == 10
        for c in cands:
            assert cr1(c).ok and cr2(c, u5).ok and cr3prime(c, u5).ok

    def test_deterministic(self, u5):
        a = random_candidates(u5, 5, seed=1)
        b = random_candidates(u5, 5, seed=1)
        assert [c.members for c in a] == [c.members for c in b]


class TestDefectDemo:
    def test_arith_toy_exhibits(self, arith_toy):
        u = build_universe(6, ("k1", "k2"))
        bounds = SearchBounds(u, depth=3, fuel=100, k_max=2, n_max=2)
        z, sz = Fun("z"), Fun("s", (Fun("z"),))
        rep = church_forall_defect_demo(arith_toy, bounds, (z, sz))
        assert rep["defect_exhibited"]
        bad = [c for c in rep["cases"] if not c["church_in_stage0"]]
        assert all(c["curry_in_stage0"] for c in bad)

    def test_no_quantified_proposition_available(self, selfapp):
        u = build_universe(4, ("k1",))
        bounds = SearchBounds(u, depth=2, fuel=50, k_max=1, n_max=1)
        rep = church_forall_defect_demo(selfapp, bounds, (Var("x"), Var("y")))
        assert rep["cases"] == []
        assert "note" in rep
