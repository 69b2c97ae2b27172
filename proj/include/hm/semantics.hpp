#pragma once

// Structures whose arithmetic reduct is the standard model, and evaluation
// in them. ω-terms can be evaluated through their normal forms or
// denotationally.

#include "hm/omega.hpp"
#include "hm/rewrite.hpp"

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hm {

class StructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Interpretation of the extra symbols of a signature. Definitions are
/// s-expressions over exact rationals:
///   (const k 2)
///   (fun g (n) (+ n 1))
///   (fun h (n) (table 0 (0 5) (1 3)))      ; default, then (args.. value) rows
///   (seq a (n) (/ 1 (+ n 1)))              ; rational auxiliary sequence
///   (rel P (v w l) (<= (- (a v) (a w)) (/ l (+ k 1))))
/// Expressions: numerals, parameters, (+ ..) (* ..) (- a b) (/ a b)
/// (monus a b) (min ..) (max ..) (if c a b) (iter f n x), comparisons
/// (< <= = > >=), (and ..) (or ..) (not c), and calls of declared
/// functions, sequences, relations and roster symbols.
class Structure {
public:
    static Structure parse(const std::vector<SExpr>& forms, const Roster& roster, std::string name = "");
    static Structure parse(const std::string& text, const Roster& roster, std::string name = "");
    static Structure load(const std::string& path, const Roster& roster);

    const std::string& name() const { return name_; }
    const Roster& roster() const { return *roster_; }

    /// Throws unless every extra symbol of `sig` has a definition of the right arity.
    void requireCovers(const Signature& sig) const;

    Nat fun(const std::string& f, std::span<const Nat> args) const;
    bool rel(const std::string& r, std::span<const Nat> args) const;
    Rational seqValue(const std::string& a, const Nat& n) const;

    bool definesFunction(const std::string& f) const;
    bool definesRelation(const std::string& r) const;

    struct Def {
        enum class Kind { Fun, Seq, Rel } kind = Kind::Fun;
        std::vector<std::string> params;
        SExpr body;
    };

private:
    using Value = std::variant<Rational, bool>;
    Value eval(const SExpr& e, const std::map<std::string, Rational>& env) const;
    Rational num(const SExpr& e, const std::map<std::string, Rational>& env) const;
    bool truth(const SExpr& e, const std::map<std::string, Rational>& env) const;
    Value call(const std::string& f, const std::vector<Rational>& args) const;

    std::string name_;
    const Roster* roster_ = nullptr;
    std::map<std::string, Def> defs_;
};

/// Type-0 valuation.
using Valuation = std::map<std::string, Nat>;

Nat evalSigTerm(const Term& t, const Structure& m, const Valuation& e);
/// Quantifier-free formulas; bounded quantifiers by finite search.
bool evalQF(const Formula& phi, const Structure& m, const Valuation& e);
/// Any formula, with unbounded quantifiers restricted to 0..bound.
bool evalBounded(const Formula& phi, const Structure& m, const Valuation& e, unsigned bound);

namespace sem {

using omega::OFormula;
using omega::Term;

/// Call-by-value denotation of an ω-term.
struct Fun;
using Value = std::variant<Nat, std::shared_ptr<const Fun>>;
struct Fun {
    std::function<Value(const Value&)> apply;
};
using Env = std::map<std::string, Value>;

Value applyValue(const Value& f, const Value& a);
const Nat& asNat(const Value& v);
Value makeFun(std::function<Value(const Value&)> f);
/// Curried function of n type-0 arguments.
Value makeFirstOrder(int n, std::function<Nat(const std::vector<Nat>&)> f);

class Denotation {
public:
    explicit Denotation(const Structure& m) : m_(&m) {}
    Value eval(const Term& t, const Env& env = {}) const;
    bool eval(const OFormula& f, const Env& env = {}) const;

private:
    const Structure* m_;
};

/// Denotation under one fixed environment, computing the value of every
/// shared subterm once. Subterms under a binder are cached only when they
/// do not mention a variable bound on the way down.
class SharedEvaluator {
public:
    SharedEvaluator(const Structure& m, Env env);
    Value eval(const Term& t);
    bool eval(const OFormula& f);

    struct State;

private:
    std::shared_ptr<State> state_;
};

/// Normalize, then evaluate along the spine, demanding sequence branches at
/// the values of their arguments.
class OmegaEvaluator {
public:
    OmegaEvaluator(const Structure& m, rw::Budget budget = {});
    Nat eval(const Term& closedType0);
    /// Evaluation of a term that is already normal.
    Nat evalNormal(const Term& s);
    rw::Normalizer& normalizer() { return norm_; }

private:
    const Structure* m_;
    rw::Normalizer norm_;
    std::map<const Term::Node*, std::pair<Term, Nat>> memo_;
};

Nat evalOmega(const Term& closedType0, const Structure& m, rw::Budget budget = {});

}  // namespace sem

struct GammaReport {
    bool pass = true;
    unsigned bound = 0;
    std::size_t instances = 0;
    std::string failure;
};

/// Checks universal sentences on every instance with variables in 0..bound.
GammaReport checkGamma(const std::vector<Formula>& gamma, const Structure& m, unsigned bound);

}  // namespace hm
