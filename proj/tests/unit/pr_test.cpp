#include "printers.hpp"
#include "support.hpp"

using namespace hm;

namespace {

Nat ev(const std::string& f, std::vector<Nat> args) { return hmtest::roster().eval(f, args); }
Nat evd(const std::string& f, std::vector<Nat> args) {
    return hmtest::roster().evalDerivation(*hmtest::roster().find(f)->derivation, args);
}

}  // namespace

TEST_CASE("roster values") {
    CHECK(ev("+", {2, 3}) == 5);
    CHECK(ev("monus", {1, 2}) == 0);
    CHECK(ev("monus", {7, 2}) == 5);
    CHECK(ev("pred", {7}) == 6);
    CHECK(ev("max", {3, 5}) == 5);
    CHECK(ev("min", {3, 5}) == 3);
    CHECK(ev("*", {4, 6}) == 24);
    // 0 encodes true
    CHECK(ev("cond", {0, 11, 22}) == 11);
    CHECK(ev("cond", {3, 11, 22}) == 22);
    CHECK(ev("ltchar", {2, 3}) == 0);
    CHECK(ev("ltchar", {3, 3}) != 0);
    CHECK(ev("eqchar", {4, 4}) == 0);
}

TEST_CASE("predecessor agrees with a unary counting oracle") {
    for (unsigned n = 0; n < 60; ++n) {
        unsigned p = 0;
        for (unsigned i = 0; i + 1 < n; ++i) ++p;
        CHECK(evd("pred", {n}) == p);
    }
}

TEST_CASE("derivations agree with the native fast paths") {
    hmtest::Random r(7);
    for (const auto& e : hmtest::roster().entries()) {
        int n = e.derivation->arity;
        for (int c = 0; c < 40; ++c) {
            std::vector<Nat> args;
            for (int i = 0; i < n; ++i) args.push_back(r.below(e.name == "*" ? 12 : 25));
            CHECK_MESSAGE(evd(e.name, args) == ev(e.name, args), e.name);
        }
    }
}

TEST_CASE("native evaluators agree with direct definitions on large inputs") {
    hmtest::Random r(11);
    for (int c = 0; c < 1000; ++c) {
        Nat a = r.below(1000001), b = r.below(1000001);
        CHECK(ev("+", {a, b}) == a + b);
        CHECK(ev("*", {a, b}) == a * b);
        CHECK(ev("monus", {a, b}) == (a > b ? Nat(a - b) : Nat(0)));
        CHECK(ev("max", {a, b}) == (a > b ? a : b));
        CHECK(ev("min", {a, b}) == (a < b ? a : b));
        CHECK(ev("pred", {a}) == (a == 0 ? Nat(0) : Nat(a - 1)));
    }
}

TEST_CASE("textual derivations") {
    const Roster& ro = hmtest::roster();
    auto plus = ro.parseDerivation(parseSExpr("(primrec (proj 1 1) (comp succ (proj 3 3)))"));
    CHECK(plus->arity == 2);
    std::vector<Nat> args{4, 9};
    CHECK(evalPR(ro, *plus, args) == 13);
    CHECK(toSExpr(*plus).str() == "(primrec (proj 1 1) (comp succ (proj 3 3)))");
    std::vector<Nat> one{1};
    CHECK_THROWS_AS(evalPR(ro, *plus, one), PRError);
}

TEST_CASE("roster symbols are registered as primitive recursive") {
    Signature sig = arithmeticSignature(hmtest::roster());
    REQUIRE(sig.function("+"));
    CHECK(sig.function("+")->arity == 2);
    CHECK(sig.function("+")->kind == FunKind::PrimitiveRecursive);
    CHECK(sig.function("S")->kind == FunKind::ArithmeticBase);
    CHECK(!hmtest::roster().definingAxioms("+").empty());
}
