#include "printers.hpp"
#include "support.hpp"

using hm::Formula;
using hm::Nat;
using hm::Structure;
using hm::parseFormula;
using hm::parseTerm;
namespace rw = hm::rw;
namespace sem = hm::sem;
namespace om = hm::omega;
using om::Term;
using om::Type;
using om::Var;

namespace {

const Type t0 = Type::base();
Term g() { return Term::fnConst("g", 1); }
Term S() { return Term::fnConst("S", 1); }

Term gSeq() {
    return Term::seq(t0, {}, [](std::uint64_t n, const om::SeqData&) { return hmtest::gIter(n + 1, om::numeral(0)); }, "gn");
}

}  // namespace

TEST_CASE("single steps") {
    Var x{"x", t0};
    CHECK(om::equal(rw::stepAt(Term::app(Term::lam(x, Term::var(x)), om::numeral(0)), "ε"), om::numeral(0)));
    CHECK(om::equal(rw::stepAt(Term::app(gSeq(), om::numeral(2)), "ε"), hmtest::gIter(3, om::numeral(0))));
    CHECK_THROWS_AS(rw::stepAt(om::numeral(2), "ε"), rw::RewriteError);

    SUBCASE("pending arguments move into every branch") {
        Type t1 = Type::arrow(t0, t0);
        Term fs = Term::seq(
            t1, {},
            [](std::uint64_t n, const om::SeqData&) {
                Var y = om::freshVar("y", Type::base());
                Term body = Term::var(y);
                for (std::uint64_t i = 0; i < n; ++i) body = Term::app(Term::fnConst("S", 1), body);
                return Term::lam(y, body);
            },
            "shift");
        Term r = Term::app(g(), om::numeral(0));
        Term s = om::numeral(4);
        Term out = rw::stepAt(Term::apps(fs, {r, s}), "ε");
        // ((t_n) r) s → ((t_n s)) r
        REQUIRE(out.kind() == om::TKind::App);
        CHECK(om::equal(out.arg(), r));
        CHECK(om::isZeroSeq(out.fun()));
        CHECK(om::equal(out.fun().branch(3), Term::app(fs.branch(3), s)));
    }
}

TEST_CASE("normal forms") {
    CHECK(om::equal(rw::normalize(om::numeral(7)), om::numeral(7)));
    CHECK(om::equal(rw::normalize(om::numeral(5000)), om::numeral(5000)));

    Var v{"v", t0}, w{"w", t0};
    Term R = om::recursor(Term::app(g(), om::numeral(0)), Term::lams({v, w}, Term::app(g(), Term::var(w))));
    Term nf = rw::normalize(R);
    for (std::uint64_t n = 0; n < 6; ++n) CHECK(om::equal(nf.branch(n), hmtest::gIter(n + 1, om::numeral(0))));
}

TEST_CASE("budgets turn divergence into a diagnostic") {
    Var v{"v", t0}, w{"w", t0};
    Term plusw = Term::lams({v, w}, Term::apps(Term::fnConst("+", 2), {Term::var(w), Term::var(w)}));
    Term R = om::recursor(om::numeral(1), plusw);
    rw::Normalizer tight(rw::Budget{50, 1000});
    CHECK_THROWS_AS(tight.normalize(Term::app(R, om::numeral(40))), rw::BudgetExceeded);
}

TEST_CASE("spine analysis") {
    auto sp = rw::analyzeSpine(om::numeral(2));
    CHECK(sp.head.name() == "S");
    REQUIRE(sp.args.size() == 1);
    CHECK(om::equal(sp.args[0], om::numeral(1)));

    Var x{"x", t0};
    CHECK_THROWS_AS(rw::analyzeSpine(Term::app(Term::lam(x, Term::var(x)), om::numeral(0))), rw::RewriteError);
    CHECK_THROWS_AS(rw::analyzeSpine(Term::app(gSeq(), om::numeral(0))), rw::RewriteError);

    om::Embedder e(hmtest::exampleSignature(), hmtest::roster());
    auto ex = hmtest::exampleTerms(e);
    rw::Normalizer norm;
    Term m = norm.normalize(ex.m);
    auto top = rw::analyzeSpine(m);
    CHECK(top.head.kind() == om::TKind::CaseConst);
    CHECK(top.head.caseFormula() == parseFormula("(P 0 (g 0) (S 0))", hmtest::exampleSignature()));
    REQUIRE(top.args.size() == 2);
    CHECK(om::equal(top.args[0], om::numeral(0)));
    auto q = rw::analyzeSpine(top.args[1]);
    CHECK(om::isZeroSeq(q.head));
    CHECK(om::equal(q.head, ex.rPrime, 5));
    CHECK(om::equal(m, ex.mPrime, 5));
    CHECK(rw::checkDemandedSpines(m) > 0);
}

TEST_CASE("traces record rule, position and both sides") {
    Var x{"x", t0};
    rw::Normalizer norm(rw::Budget{}, true);
    norm.normalize(Term::app(S(), Term::app(Term::lam(x, Term::var(x)), om::numeral(1))));
    REQUIRE(norm.trace().steps.size() == 1);
    const auto& st = norm.trace().steps[0];
    CHECK(std::string(rw::toString(st.rule)) == rw::toString(rw::Rule::Beta));
    CHECK(st.position == "1");
    CHECK(st.after == "(S 0)");
}
