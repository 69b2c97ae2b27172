#pragma once

// First-order syntax over a signature extending the arithmetic one.
// Only ¬, ∨, ∀ are primitive; every derived connective is stored as its
// primitive expansion and recognized by shape.

#include "hm/sexpr.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hm {

enum class FunKind { ArithmeticBase, PrimitiveRecursive, Extra };
enum class RelKind { LessThan, Extra };

struct FunSymbol {
    std::string name;
    int arity = 0;
    FunKind kind = FunKind::Extra;
};

struct RelSymbol {
    std::string name;
    int arity = 0;
    RelKind kind = RelKind::Extra;
};

class SignatureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Signature {
public:
    /// The bare arithmetic signature: 0, S, <.
    static Signature arithmetic();

    void addFunction(FunSymbol f);
    void addRelation(RelSymbol r);

    const FunSymbol* function(const std::string& name) const;
    const RelSymbol* relation(const std::string& name) const;
    const std::vector<FunSymbol>& functions() const { return funs_; }
    const std::vector<RelSymbol>& relations() const { return rels_; }

    bool isArithmeticFunction(const std::string& name) const;
    bool isArithmeticRelation(const std::string& name) const;

private:
    bool taken(const std::string& name) const;

    std::vector<FunSymbol> funs_;
    std::vector<RelSymbol> rels_;
};

inline constexpr const char* kZero = "0";
inline constexpr const char* kSucc = "S";
inline constexpr const char* kLess = "<";

class Term {
public:
    struct Node;

    static Term var(std::string name);
    static Term app(std::string fn, std::vector<Term> args = {});
    static Term zero() { return app(kZero); }
    static Term succ(Term t) { return app(kSucc, {std::move(t)}); }
    static Term numeral(unsigned long n);

    bool isVar() const;
    const std::string& name() const;  // variable or function symbol
    const std::vector<Term>& args() const;
    /// Value n if the term is S…S0, otherwise nullopt.
    std::optional<unsigned long> numeralValue() const;

    friend bool operator==(const Term& a, const Term& b);
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
    /// Total structural order; used to keep term sets deterministic.
    friend bool operator<(const Term& a, const Term& b);

private:
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Term::Node {
    bool isVar = false;
    std::string name;
    std::vector<Term> args;
};

enum class FKind { Atom, Eq, Not, Or, Forall };

class Formula {
public:
    struct Node;

    static Formula atom(std::string rel, std::vector<Term> args);
    static Formula eq(Term a, Term b);
    static Formula neg(Formula f);
    static Formula disj(Formula a, Formula b);
    static Formula forall(std::string var, Formula body);

    // Derived forms, stored as their primitive expansions.
    static Formula lt(Term a, Term b) { return atom(kLess, {std::move(a), std::move(b)}); }
    static Formula le(Term a, Term b);                          // a<b ∨ a=b
    static Formula implies(Formula a, Formula b);               // ¬a ∨ b
    static Formula conj(Formula a, Formula b);                  // ¬(¬a ∨ ¬b)
    static Formula iff(Formula a, Formula b);                   // (a→b) ∧ (b→a)
    static Formula exists(std::string var, Formula body);       // ¬∀x¬φ
    static Formula forallLe(std::string var, Term bound, Formula body);  // ∀x(¬x≤t ∨ φ)
    static Formula existsLe(std::string var, Term bound, Formula body);  // ¬∀x≤t ¬φ

    FKind kind() const;
    const std::string& rel() const;          // Atom
    const std::vector<Term>& args() const;   // Atom, Eq (two args)
    const Formula& sub() const;              // Not
    const Formula& left() const;             // Or
    const Formula& right() const;            // Or
    const std::string& var() const;          // Forall
    const Formula& body() const;             // Forall

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

private:
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Formula::Node {
    FKind kind = FKind::Atom;
    std::string name;  // relation or bound variable
    std::vector<Term> args;
    std::vector<Formula> subs;
};

// Recognizers for the derived shapes. Each inverts the matching constructor.
struct LeView {
    Term lhs, rhs;
};
struct BoundedView {
    std::string var;
    Term bound;
    Formula body;
};
struct QuantView {
    std::string var;
    Formula body;
};
struct PairView {
    Formula left, right;
};

std::optional<LeView> asLe(const Formula& f);
std::optional<BoundedView> asForallLe(const Formula& f);
std::optional<BoundedView> asExistsLe(const Formula& f);
std::optional<QuantView> asExists(const Formula& f);
std::optional<PairView> asConj(const Formula& f);

enum class FormulaClass { QuantifierFree, Universal, Existential, Other };
const char* toString(FormulaClass c);

FormulaClass classify(const Formula& f);
bool isQuantifierFree(const Formula& f);

/// Free variables in order of first appearance.
std::vector<std::string> freeVars(const Term& t);
std::vector<std::string> freeVars(const Formula& f);
bool occursFree(const std::string& x, const Formula& f);
bool occurs(const std::string& x, const Term& t);

Term substitute(const Term& t, const std::string& x, const Term& s);
/// φ[x:=t], renaming bound variables that would capture variables of t.
Formula substitute(const Formula& f, const std::string& x, const Term& t);
/// True when no free occurrence of x in f lies under a binder of a variable of t.
bool freeFor(const Formula& f, const std::string& x, const Term& t);

/// Symbols mentioned by a formula that are outside the arithmetic signature.
bool isArithmeticOnly(const Formula& f, const Signature& sig);
bool isArithmeticOnly(const Term& t, const Signature& sig);

// Textual form. Numerals may be written as decimal literals; derived
// connectives are accepted as sugar and printed back when recognized.
Term parseTerm(const SExpr& s, const Signature& sig);
Formula parseFormula(const SExpr& s, const Signature& sig);
Term parseTerm(const std::string& text, const Signature& sig);
Formula parseFormula(const std::string& text, const Signature& sig);

SExpr toSExpr(const Term& t);
SExpr toSExpr(const Formula& f);
std::string show(const Term& t);
std::string show(const Formula& f);

}  // namespace hm
