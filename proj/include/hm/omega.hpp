#pragma once

// The ω-term calculus: simply typed λ-terms over base type 0 with constants
// and infinite sequence nodes (t_n)_{n∈N}. Branches of a sequence are
// produced on demand and memoized.

#include "hm/pr.hpp"
#include "hm/syntax.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace hm::omega {

class TypeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Type {
public:
    static Type base();
    static Type arrow(Type from, Type to);
    /// 0^n → 0
    static Type firstOrder(int n);

    bool isBase() const { return !node_; }
    const Type& from() const;
    const Type& to() const;
    /// Number of leading arrows.
    int arity() const;
    /// Argument types ρ₁..ρₙ of ρ₁→…→ρₙ→0.
    std::vector<Type> argTypes() const;

    friend bool operator==(const Type& a, const Type& b);
    friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }

    std::string str() const;
    SExpr toSExpr() const;
    static Type parse(const SExpr& s);

private:
    struct Node;
    std::shared_ptr<const Node> node_;
};

struct Type::Node {
    Type from, to;
};

using TypeTuple = std::vector<Type>;

/// (θ⃗) → ρ, curried left to right.
Type arrow(const TypeTuple& from, const Type& to);
/// ρ⃗ → θ⃗, componentwise.
TypeTuple arrow(const TypeTuple& from, const TypeTuple& to);
TypeTuple zeros(int n);

struct Var {
    std::string name;
    Type type;
    friend bool operator==(const Var& a, const Var& b) { return a.name == b.name && a.type == b.type; }
};

/// Session-fresh variable name derived from `base`.
std::string freshName(const std::string& base);
Var freshVar(const std::string& base, Type t);

enum class TKind { Var, FnConst, CaseConst, Lam, App, Seq };

class Term;
struct SeqData;

class Term {
public:
    struct Node;

    static Term var(const Var& v);
    static Term var(std::string name, Type t) { return var(Var{std::move(name), std::move(t)}); }
    /// Function constant of type 0^arity → 0 (0 and S included).
    static Term fnConst(std::string name, int arity);
    /// Case-distinction constant c_φ, of type 0^{m+2} → 0 for m free variables of φ.
    static Term caseConst(Formula phi);
    static Term lam(const Var& x, Term body);
    static Term app(Term f, Term a);
    static Term apps(Term f, const std::vector<Term>& args);
    static Term lams(const std::vector<Var>& xs, Term body);
    /// Infinite term (t_n); `generator` must be pure. `freeVars` lists the
    /// union of the branches' free variables in order of appearance.
    using Generator = std::function<Term(std::uint64_t, const SeqData&)>;
    static Term seq(Type elemType, std::vector<Var> freeVars, Generator generator, std::string tag);

    TKind kind() const;
    const Type& type() const;
    const std::vector<Var>& freeVars() const;
    bool closed() const { return freeVars().empty(); }
    bool hasFree(const std::string& name) const;

    const std::string& name() const;  // Var, FnConst
    const Var& boundVar() const;      // Lam
    const Term& body() const;         // Lam
    const Term& fun() const;          // App
    const Term& arg() const;          // App
    int constArity() const;           // FnConst, CaseConst: number of arguments
    const Formula& caseFormula() const;
    const SeqData& seq() const;
    /// Demands branch n of a Seq (memoized).
    Term branch(std::uint64_t n) const;

    const Node* id() const { return node_.get(); }

private:
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
    friend struct SeqData;
};

struct SeqData {
    Type elemType;
    Term::Generator generator;
    std::string tag;
    mutable std::mutex mu;
    mutable std::unordered_map<std::uint64_t, Term> memo;

    Term at(std::uint64_t n) const;
    /// Number of branches demanded so far.
    std::size_t demanded() const;
};

struct Term::Node {
    TKind kind = TKind::Var;
    Type type;
    std::vector<Var> fv;
    std::string name;
    int arity = 0;
    Var bound;
    std::vector<Term> kids;  // Lam: body; App: fun, arg
    std::optional<Formula> formula;
    std::shared_ptr<SeqData> seq;
};

bool isZeroSeq(const Term& t);
std::optional<std::uint64_t> numeralValue(const Term& t);
Term numeral(std::uint64_t n);
Term zeroOf(const Type& t);  // canonical λz⃗.0

/// Spine decomposition t = h a₁ … a_k.
struct Spine {
    Term head;
    std::vector<Term> args;
};
Spine spine(const Term& t);

/// Capture-avoiding simultaneous substitution. Seq nodes are substituted lazily.
Term substitute(const Term& t, const std::map<std::string, Term>& sub);
Term substitute(const Term& t, const std::string& x, const Term& s);
/// Simultaneous substitution into several terms, sharing common subterms.
/// With reduceBelow > 0, β-redexes created by the substitution are contracted
/// when the body of the abstraction has fewer than reduceBelow nodes.
std::vector<Term> substitute(const std::vector<Term>& ts, const std::map<std::string, Term>& sub, int reduceBelow = 0);

/// Structural equality; Seq nodes are equal when identical, or when their
/// first `seqPrefix` branches agree (0 means identity only).
bool equal(const Term& a, const Term& b, unsigned seqPrefix = 0);

// ---------------------------------------------------------------- formulas

enum class OKind { Atom, Eq, Not, Or, Forall };

/// ω-formula: built from ω-terms of type 0 with the first-order connectives.
class OFormula {
public:
    struct Node;
    static OFormula atom(std::string rel, std::vector<Term> args);
    static OFormula eq(Term a, Term b);
    static OFormula neg(OFormula f);
    static OFormula disj(OFormula a, OFormula b);
    static OFormula forall(std::string var, OFormula body);  // type-0 variable
    static OFormula conj(OFormula a, OFormula b);

    OKind kind() const;
    const std::string& rel() const;
    const std::vector<Term>& args() const;
    const OFormula& sub() const;
    const OFormula& left() const;
    const OFormula& right() const;
    const std::string& var() const;
    const OFormula& body() const;

    std::vector<Var> freeVars() const;

private:
    explicit OFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct OFormula::Node {
    OKind kind = OKind::Atom;
    std::string name;
    std::vector<Term> args;
    std::vector<OFormula> subs;
};

struct OBoundedView {
    std::string var;
    Term bound;
    OFormula body;
};
std::optional<OBoundedView> asForallLe(const OFormula& f);
bool isQuantifierFree(const OFormula& f);

OFormula substitute(const OFormula& f, const std::map<std::string, Term>& sub);
bool equal(const OFormula& a, const OFormula& b, unsigned seqPrefix = 0);

// ---------------------------------------------------------------- printing

struct RenderOptions {
    unsigned seqPrefix = 3;   // branches shown per Seq
    unsigned seqDepth = 4;    // nesting of Seq renderings
};
SExpr toSExpr(const Term& t, const RenderOptions& opt = {});
SExpr toSExpr(const OFormula& f, const RenderOptions& opt = {});
std::string show(const Term& t, const RenderOptions& opt = {});
std::string show(const OFormula& f, const RenderOptions& opt = {});

/// First-order reading of a term built from type-0 variables and fully
/// applied function constants; nullopt otherwise.
std::optional<hm::Term> toSigTerm(const Term& t);

// ---------------------------------------------------------------- derived terms

/// Term-tuple with its type-tuple implicit in the members.
using TermTuple = std::vector<Term>;
TypeTuple typesOf(const TermTuple& ts);
/// t u⃗ and (t⃗) u⃗ from tuple application.
Term applyTuple(const Term& t, const TermTuple& us);
TermTuple applyTuple(const TermTuple& ts, const TermTuple& us);

/// R_{a,b}: branch 0 = a, branch n+1 = b n̲ t_n.
Term recursor(const Term& a, const Term& b);
/// Simultaneous recursor: component i has branch 0 = a_i and branch
/// n+1 = b_i n̲ t¹_n … tˡ_n.
TermTuple simultaneousRecursor(const TermTuple& a, const TermTuple& b);

/// Explicit decomposition B = ι(φ)[x₁:=t₁]…[x_m:=t_m] of a quantifier-free ω-formula.
struct Decomposition {
    Formula phi;
    TermTuple terms;  // one per free variable of phi, in order of appearance
};

class Embedder {
public:
    Embedder(const Signature& sig, const Roster& roster) : sig_(&sig), roster_(&roster) {}

    const Signature& signature() const { return *sig_; }
    const Roster& roster() const { return *roster_; }

    /// ι on σ-terms and σ-formulas.
    Term embed(const hm::Term& t) const;
    OFormula embed(const Formula& f) const;

    /// ω-term for a primitive recursive symbol applied to the given arguments.
    Term applyPR(const std::string& name, const TermTuple& args) const;
    /// Closed ω-term of type 0^n → 0 for a roster symbol.
    Term prTerm(const std::string& name) const;

    /// Characteristic term (0 = true) of a quantifier-free arithmetic formula.
    Term characteristic(const Formula& phi) const;

    /// c_φ: a defined term when φ can be made arithmetic, else the constant.
    Term caseTerm(const Formula& phi) const;
    /// c_B for an explicitly decomposed B.
    Term caseOnFormula(const OFormula& b, const Decomposition& d) const;
    /// Default decomposition: atom arguments that are not first-order are
    /// abstracted into fresh variables.
    Decomposition decompose(const OFormula& b) const;

    /// a^i_φ (i is 1-based over the free variables of φ in order of appearance).
    Term argmax(const Formula& phi, int i) const;
    /// a^i_B over the free variables of B.
    Term argmax(const OFormula& b, const Decomposition& d, int i) const;

private:
    Term applyDerivation(const PRDerivation& d, const TermTuple& args) const;

    const Signature* sig_;
    const Roster* roster_;
};

/// Decision-procedure route for c_φ: the arithmetic-only formula obtained by
/// abstracting extra function subterms, when one exists.
struct ArithmeticAbstraction {
    Formula phi;
    std::vector<std::string> vars;           // free variables of the abstracted formula
    std::vector<hm::Term> replacements;      // σ-term substituted for each var
};
std::optional<ArithmeticAbstraction> abstractExtraFunctions(const Formula& phi, const Signature& sig);

}  // namespace hm::omega
