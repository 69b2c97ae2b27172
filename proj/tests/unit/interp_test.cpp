#include "printers.hpp"
#include "support.hpp"

using namespace hm;
namespace om = hm::omega;

namespace {

const om::Embedder& E() {
    static const om::Embedder e(hmtest::exampleSignature(), hmtest::roster());
    return e;
}
Formula F(const std::string& s) { return parseFormula(s, hmtest::exampleSignature()); }

}  // namespace

TEST_CASE("interpretation shapes") {
    SUBCASE("quantifier-free") {
        Formula a = F("(or (P x y 0) (forall<= z x (< z y)))");
        auto n = interp::interpret(a, E());
        CHECK(n->u.empty());
        CHECK(n->x.empty());
        CHECK(om::equal(n->sh, E().embed(a)));
    }
    SUBCASE("existential") {
        auto n = interp::interpret(F("(exists x (P x (g x) 1))"), E());
        CHECK(n->u.empty());
        REQUIRE(n->x.size() == 1);
        CHECK(n->x[0].type == om::Type::base());
    }
    SUBCASE("the induction instance for ∃z P(x,z)") {
        Signature sig = arithmeticSignature(hmtest::roster());
        sig.addRelation({"P", 2, RelKind::Extra});
        ProofContext ctx(Theory::ISigma1, sig, hmtest::roster());
        om::Embedder e(sig, hmtest::roster());
        Formula psi = ctx.inductionInstance(parseFormula("(exists z (P x z))", sig), "x");
        auto n = interp::interpret(psi, e);
        // the literal clauses keep the components of the two premises at higher
        // type; the induction variable and the conclusion's witness are type 0
        REQUIRE(n->u.size() == 3);
        REQUIRE(n->x.size() == 3);
        CHECK(n->u[2].type.isBase());
        CHECK(n->x[2].type.isBase());
        CHECK(n->kind == interp::NodeKind::Or);
    }
}

TEST_CASE("excluded middle witnesses form a tautology") {
    auto lp = loadProofScript("(theory pa)\n(signature (fun g 1) (rel Q 2))\n"
                              "(step e (em) (or (not (forall y (exists z (Q y z)))) (forall y (exists z (Q y z)))))",
                              hmtest::roster());
    om::Embedder e(lp.proof.sig, hmtest::roster());
    auto w = interp::extractWitnesses(lp.proof, e);
    CHECK(interp::checkWitnessShape(w.at(0), lp.proof.steps[0].conclusion).empty());
    Structure m = Structure::parse("(fun g (n) (+ n 1)) (rel Q (a b) (< a b))", hmtest::roster());
    auto rep = interp::checkSoundness(lp.proof, w, m);
    CHECK(rep.valuations > 0);
    CHECK(rep.ok());
}

TEST_CASE("existential witnesses") {
    SUBCASE("∃x (x = 0)") {
        auto lp = loadProofScript("(theory isigma1)\n"
                                  "(step r (eq refl) (forall x (= x x)))\n"
                                  "(step s (subst x 0) (or (not (forall x (= x x))) (= 0 0)))\n"
                                  "(step i (mp r s) (= 0 0))\n"
                                  "(step s2 (subst x 0) (or (not (forall x (not (= x 0)))) (not (= 0 0))))\n"
                                  "(step g (tautcons i s2) (exists x (= x 0)))",
                                  hmtest::roster());
        om::Embedder e(lp.proof.sig, hmtest::roster());
        auto w = interp::extractWitnesses(lp.proof, e);
        om::Term t = interp::extractExistentialWitness(lp.proof, w);
        CHECK(t.closed());
        Structure m = Structure::parse("", hmtest::roster());
        CHECK(sem::evalOmega(t, m) == 0);
    }
    SUBCASE("the metastability corpus") {
        auto lp = loadProofFile(hmtest::corpusFile("metastability.proof"), hmtest::roster());
        om::Embedder e(lp.proof.sig, hmtest::roster());
        auto w = interp::extractWitnesses(lp.proof, e);
        om::Term m = interp::extractExistentialWitness(lp.proof, w);
        CHECK(m.closed());
        CHECK(m.type() == om::Type::base());
        Structure k2 = hmtest::succStructure(2);
        hmtest::Oracle o{2};
        Nat v = sem::evalOmega(m, k2);
        CHECK(o.P(v, o.g(v), 1));
    }
}

TEST_CASE("induction witnesses follow the Parsons construction") {
    auto lp = loadProofFile(hmtest::corpusFile("rules.proof"), hmtest::roster());
    om::Embedder e(lp.proof.sig, hmtest::roster());
    auto w = interp::extractWitnesses(lp.proof, e);
    std::size_t inductions = 0;
    for (std::size_t i = 0; i < lp.proof.steps.size(); ++i) {
        if (lp.proof.steps[i].just.rule != RuleKind::Induction) continue;
        ++inductions;
        CHECK(interp::checkWitnessShape(w.at(i), lp.proof.steps[i].conclusion).empty());
    }
    CHECK(inductions >= 2);
    std::vector<std::size_t> only;
    for (std::size_t i = 0; i < lp.proof.steps.size(); ++i)
        if (lp.proof.steps[i].just.rule == RuleKind::Induction) only.push_back(i);
    Structure m = Structure::load(hmtest::corpusFile("models/rules.model"), hmtest::roster());
    CHECK(interp::checkSoundness(lp.proof, w, m, {}, only).ok());
}

TEST_CASE("higher-type sample family") {
    om::Type t1 = om::Type::arrow(om::Type::base(), om::Type::base());
    auto fam = interp::sampleFamily(t1, 5);
    REQUIRE(fam.size() == 4);
    std::set<std::string> seen;
    for (const auto& f : fam) {
        std::string sig;
        for (unsigned n = 0; n < 4; ++n) sig += sem::asNat(sem::applyValue(f, Nat(n))).str() + ",";
        seen.insert(sig);
    }
    CHECK(seen == std::set<std::string>{"0,0,0,0,", "0,1,2,3,", "1,2,3,4,", "2,3,4,5,"});
    CHECK(interp::sampleFamily(om::Type::base(), 5).size() == 6);
}
