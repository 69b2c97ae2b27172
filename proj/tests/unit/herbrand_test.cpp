#include "printers.hpp"
#include "support.hpp"

using namespace hm;
namespace om = hm::omega;

namespace {

Formula F(const std::string& s) { return parseFormula(s, hmtest::exampleSignature()); }

std::vector<hm::Term> gSet(unsigned k) {
    std::vector<hm::Term> out;
    for (unsigned i = 0; i <= std::max(k, 1u); ++i) out.push_back(hmtest::gIterSig(i));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("Herbrand sets of simple normal terms") {
    Structure m = hmtest::succStructure(2);
    auto s = herbrand::herbrandSet(om::numeral(3), m);
    REQUIRE(s.members.size() == 1);
    CHECK(s.members[0].term == hm::Term::numeral(3));

    om::Term c = om::Term::caseConst(F("(P a b c)"));
    om::Term t = om::Term::apps(c, {om::numeral(0), om::numeral(1), om::numeral(2), om::numeral(5),
                                    om::Term::app(om::Term::fnConst("g", 1), om::numeral(0))});
    auto u = herbrand::herbrandSet(t, m);
    std::vector<hm::Term> want{hm::Term::numeral(5), hmtest::gIterSig(1)};
    std::sort(want.begin(), want.end());
    CHECK(u.terms() == want);
}

TEST_CASE("Herbrand sets of the worked example") {
    om::Embedder e(hmtest::exampleSignature(), hmtest::roster());
    auto ex = hmtest::exampleTerms(e);
    for (unsigned k : {0u, 2u, 4u}) {
        Structure m = hmtest::succStructure(k);
        rw::Normalizer norm;
        auto set = herbrand::herbrandSet(norm.normalize(ex.m), m);
        CHECK(set.terms() == gSet(k));
        CHECK(!set.demands.empty());
    }
    Structure m = hmtest::succStructure(2);
    rw::Normalizer norm;
    om::Term useq = rw::analyzeSpine(norm.normalize(ex.a)).head;
    for (unsigned n = 0; n <= 10; ++n) {
        std::vector<hm::Term> want;
        for (unsigned i = 0; i <= (n == 0 ? 0 : n - 1); ++i) want.push_back(hm::Term::numeral(i));
        std::sort(want.begin(), want.end());
        CHECK(herbrand::herbrandSet(useq.branch(n), m).terms() == want);
    }
}

TEST_CASE("verifying a disjunction") {
    Structure m = hmtest::succStructure(2);
    auto v = herbrand::verifyDisjunction(F("(= x 0)"), "x", {hm::Term::zero()}, m);
    CHECK(v.verdict);

    auto w = herbrand::verifyDisjunction(F("(P x (g x) (S 0))"), "x", gSet(2), m);
    CHECK(w.verdict);
    for (const auto& d : w.disjuncts) {
        if (d.r == hmtest::gIterSig(0)) CHECK(!d.value);
        if (d.r == hmtest::gIterSig(1)) CHECK(d.value);
    }

    auto empty = herbrand::verifyDisjunction(F("(= x 0)"), "x", {}, m);
    CHECK(!empty.verdict);
    CHECK(!empty.diagnostic.empty());
}

TEST_CASE("the pipeline") {
    auto run = [](const std::string& model) {
        return herbrand::runPipeline(hmtest::corpusFile("metastability.proof"), hmtest::corpusFile("models/" + model));
    };
    auto k2 = run("k2_succ.model");
    CHECK(k2.set.terms() == gSet(2));
    CHECK(k2.verification.verdict);
    CHECK(k2.gamma.pass);
    auto k0 = run("k0_succ.model");
    CHECK(k0.set.terms() == gSet(0));
    CHECK(run("k2_plus2.model").set.terms() == gSet(2));

    auto lines = herbrand::reportLines(k2);
    CHECK(std::count_if(lines.begin(), lines.end(), [](const std::string& l) { return l.rfind("HERBRAND_TERM ", 0) == 0; }) == 3);
    CHECK(std::find(lines.begin(), lines.end(), "VERDICT true") != lines.end());
    auto j = herbrand::toJson(k2);
    CHECK(j.contains("verdict"));

    SUBCASE("arithmetic-only proofs give singletons") {
        auto r = herbrand::runPipeline(hmtest::corpusFile("arith.proof"), hmtest::corpusFile("models/standard.model"));
        REQUIRE(r.set.members.size() == 1);
        CHECK(r.set.members[0].term == hm::Term::numeral(3));
        CHECK(r.verification.verdict);
    }
    SUBCASE("membership: the witness value is the value of some set member") {
        Structure m = hmtest::succStructure(2);
        Nat v = sem::evalOmega(k2.normal, m);
        bool found = false;
        for (const auto& t : k2.set.terms()) found = found || evalSigTerm(t, m, {}) == v;
        CHECK(found);
    }
}

TEST_CASE("pipeline errors name the stage") {
    CHECK_THROWS_AS(herbrand::runPipeline(hmtest::corpusFile("metastability.proof"), hmtest::corpusFile("models/standard.model")),
                    herbrand::PipelineError);
}
