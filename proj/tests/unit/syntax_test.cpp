#include "printers.hpp"
#include "support.hpp"

using namespace hm;
using hmtest::exampleSignature;

namespace {

Formula F(const std::string& s) { return parseFormula(s, exampleSignature()); }
Term T(const std::string& s) { return parseTerm(s, exampleSignature()); }

}  // namespace

TEST_CASE("s-expressions parse, skip comments and print back") {
    auto xs = parseSExprs("(a (b c)) ; comment\n d");
    REQUIRE(xs.size() == 2);
    CHECK(xs[0].str() == "(a (b c))");
    CHECK(xs[1].isAtomNamed("d"));
    CHECK(parseSExpr("(x)").isForm("x"));
    CHECK_THROWS_AS(parseSExpr("(a b"), ParseError);
    CHECK_THROWS_AS(parseSExpr("a b"), ParseError);
}

TEST_CASE("terms and formulas round-trip through the printer") {
    for (const char* s : {"(forall x (or (not (<= x k)) (P x (g x) 0)))", "(exists m (P m (g m) (S 0)))",
                          "(and (= x y) (< (+ x 1) y))", "(forall<= z (S (S 0)) (< z 3))"}) {
        Formula f = F(s);
        CHECK(F(show(f)) == f);
    }
    CHECK(show(T("(g (g 0))")) == "(g (g 0))");
    CHECK(T("3") == Term::numeral(3));
}

TEST_CASE("arity and unknown symbols are rejected") {
    CHECK_THROWS(F("(P x y)"));
    CHECK_THROWS(T("(h 0)"));
    CHECK_THROWS(T("(g 0 0)"));
}

TEST_CASE("substitution") {
    CHECK(substitute(F("(< x 1)"), "x", Term::zero()) == F("(< 0 1)"));
    CHECK(substitute(F("(< x (S x))"), "x", T("(g 0)")) == F("(< (g 0) (S (g 0)))"));

    SUBCASE("bound variables are renamed to avoid capture") {
        Formula f = F("(forall y (P x y 0))");
        Formula r = substitute(f, "x", T("(g y)"));
        REQUIRE(r.kind() == FKind::Forall);
        CHECK(r.var() != "y");
        CHECK(r.body() == F("(P (g y) " + r.var() + " 0)"));
        CHECK(freeVars(r) == std::vector<std::string>{"y"});
    }
    SUBCASE("substitutions into disjoint variables commute") {
        Formula f = F("(or (P x y z) (forall z (< x z)))");
        Term s = T("(g 0)"), t = T("(S z)");
        CHECK(substitute(substitute(f, "x", s), "y", t) == substitute(substitute(f, "y", t), "x", s));
    }
}

TEST_CASE("classification") {
    CHECK(hmtest::cls(F("(P x y z)")) == hmtest::cls(FormulaClass::QuantifierFree));
    CHECK(hmtest::cls(F("(forall x (or (not (<= x k)) (P x x x)))")) == hmtest::cls(FormulaClass::QuantifierFree));
    CHECK(hmtest::cls(F("(forall x (exists y (P x y y)))")) == hmtest::cls(FormulaClass::Other));
    CHECK(hmtest::cls(F("(forall x (forall y (= x y)))")) == hmtest::cls(FormulaClass::Universal));
    CHECK(hmtest::cls(F("(exists x (forall<= y x (< y k)))")) == hmtest::cls(FormulaClass::Existential));
    CHECK(hmtest::cls(F("(forall<= x k (forall<= y x (P x y 0)))")) == hmtest::cls(FormulaClass::QuantifierFree));
}

TEST_CASE("free variables in order of appearance") {
    CHECK(freeVars(F("(P x (g y) x)")) == std::vector<std::string>{"x", "y"});
    CHECK(freeVars(F("(forall x (P x y 0))")) == std::vector<std::string>{"y"});
    CHECK(freeVars(F("(exists m (P m (g m) (S 0)))")).empty());
}

TEST_CASE("recognizers invert the derived constructors") {
    Term t = T("(g k)");
    Formula body = F("(P x 0 0)");
    auto b = asForallLe(Formula::forallLe("x", t, body));
    REQUIRE(b);
    CHECK(b->var == "x");
    CHECK(b->bound == t);
    CHECK(b->body == body);
    auto e = asExistsLe(Formula::existsLe("x", t, body));
    REQUIRE(e);
    CHECK(e->body == body);
    auto q = asExists(Formula::exists("x", body));
    REQUIRE(q);
    CHECK(q->body == body);
    auto c = asConj(Formula::conj(body, F("(= x 0)")));
    REQUIRE(c);
    CHECK(c->right == F("(= x 0)"));
    CHECK(!asForallLe(F("(forall x (P x 0 0))")));
    // ∀x≤t φ is literally ∀x(¬ x≤t ∨ φ)
    CHECK(Formula::forallLe("x", t, body) ==
          Formula::forall("x", Formula::disj(Formula::neg(Formula::le(Term::var("x"), t)), body)));
}
