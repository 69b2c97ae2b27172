#pragma once

// Registry of primitive recursive function definitions. Each symbol carries
// a derivation tree; numeric evaluation and the recursor expansion used by
// the embedding into ω-terms both read the same tree.

#include "hm/numbers.hpp"
#include "hm/syntax.hpp"

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hm {

class PRError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Derivation over zero, successor, projection, composition and primitive
/// recursion. Recursion runs on the LAST argument:
///   f(x⃗, 0)  = base(x⃗)
///   f(x⃗, Sy) = step(x⃗, y, f(x⃗, y))
/// `Named` refers to another registered symbol.
struct PRDerivation {
    enum class Kind { Zero, Succ, Proj, Comp, PrimRec, Named };
    using Ptr = std::shared_ptr<const PRDerivation>;

    Kind kind = Kind::Zero;
    int arity = 0;
    int index = 0;          // Proj: 1-based
    std::string name;       // Named
    std::vector<Ptr> parts; // Comp: f, g1..gk; PrimRec: base, step

    static Ptr zero(int arity);
    static Ptr succ();
    static Ptr proj(int i, int n);
    static Ptr comp(Ptr f, std::vector<Ptr> gs);
    static Ptr primrec(Ptr base, Ptr step);
    static Ptr named(std::string name, int arity);
};

struct PREntry {
    std::string name;
    PRDerivation::Ptr derivation;
    /// Optional fast evaluator; must agree with the derivation.
    std::function<Nat(std::span<const Nat>)> native;
};

class Roster {
public:
    /// +, *, pred, monus, max, min, sg, nsg, condl, cond, eqchar, ltchar,
    /// notchar, orchar. Characteristic functions use 0 for "true".
    static Roster defaults();

    void add(PREntry e);
    const PREntry* find(const std::string& name) const;
    const std::vector<PREntry>& entries() const { return entries_; }

    /// Registers every roster symbol into `sig` as primitive recursive.
    void extend(Signature& sig) const;

    /// Interprets the derivation only; named references are interpreted too.
    Nat evalDerivation(const PRDerivation& d, std::span<const Nat> args) const;
    /// Evaluates a registered symbol, using its native evaluator when present.
    Nat eval(const std::string& name, std::span<const Nat> args) const;

    /// Universal defining axioms for one symbol, as first-order sentences.
    std::vector<Formula> definingAxioms(const std::string& name) const;

    PRDerivation::Ptr parseDerivation(const SExpr& s) const;

private:
    std::vector<PREntry> entries_;
};

Nat evalPR(const Roster& roster, const PRDerivation& d, std::span<const Nat> args);

SExpr toSExpr(const PRDerivation& d);

/// Roster-backed signature: arithmetic base plus every roster symbol.
Signature arithmeticSignature(const Roster& roster);

}  // namespace hm
