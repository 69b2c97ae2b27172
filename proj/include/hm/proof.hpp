#pragma once

// Shoenfield's Hilbert-style calculus over ¬, ∨, ∀ with the arithmetic and
// Γ axioms. Proof scripts may use derived rules, which expand into checked
// primitive steps.

#include "hm/pr.hpp"
#include "hm/syntax.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hm {

class ProofError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Theory { ISigma1, PA };
const char* toString(Theory t);

enum class RuleKind {
    ExcludedMiddle,
    Substitution,
    Equality,
    Arith,
    Induction,
    Gamma,
    Expansion,
    Contraction,
    Assoc,
    Cut,
    ForallIntro,
};
const char* toString(RuleKind r);
/// Axioms whose interpretation needs no witnesses.
bool isUniversalAxiom(RuleKind r);

enum class EqualityKind { Refl, Symm, Trans, FunCong, RelCong };

struct Justification {
    RuleKind rule = RuleKind::ExcludedMiddle;
    std::vector<std::size_t> premises;     // indices of earlier steps
    std::string var;                       // Substitution, Induction, ForallIntro
    std::optional<Term> term;              // Substitution
    std::optional<Formula> formula;        // Induction: the formula φ
    std::size_t index = 0;                 // Arith, Gamma: 0-based
    EqualityKind eq = EqualityKind::Refl;  // Equality
    std::string symbol;                    // Equality congruence symbol
};

struct ProofStep {
    Formula conclusion;
    Justification just;
    std::string origin;  // script label and macro that produced the step
};

struct Proof {
    Theory theory = Theory::ISigma1;
    Signature sig;
    std::vector<Formula> gamma;
    std::vector<ProofStep> steps;
    /// Script step label -> index of the primitive step carrying its conclusion.
    std::map<std::string, std::size_t> labels;
    /// Step carrying the goal; the last step unless set explicitly.
    std::optional<std::size_t> goalStep;

    std::size_t goalIndex() const;
    const Formula& goal() const;
};

class ProofContext {
public:
    ProofContext(Theory theory, Signature sig, const Roster& roster);

    Theory theory() const { return theory_; }
    const Signature& signature() const { return sig_; }
    const Roster& roster() const { return *roster_; }

    /// ∀x¬(Sx=0), ∀x∀y(Sx=Sy→x=y), ∀x¬(x<0), ∀x∀y(x<Sy↔x≤y), then the
    /// defining axioms of every roster symbol.
    const std::vector<Formula>& arithAxioms() const { return arith_; }
    Formula equalityAxiom(EqualityKind k, const std::string& symbol = "") const;
    /// ((φ[x:=0]) ∧ ∀x(φ → φ[x:=Sx])) → ∀xφ; existential φ required for IΣ₁.
    Formula inductionInstance(const Formula& phi, const std::string& x) const;

private:
    Theory theory_;
    Signature sig_;
    const Roster* roster_;
    std::vector<Formula> arith_;
};

/// Conclusion of a primitive step from its justification and premises.
/// Throws ProofError naming the failed side condition.
Formula deriveConclusion(const ProofContext& ctx, const std::vector<Formula>& gamma, const Justification& j,
                         const std::vector<Formula>& premises);

struct CheckDiagnostic {
    std::size_t step = 0;
    std::string message;
};

struct CheckReport {
    bool ok = true;
    std::vector<CheckDiagnostic> diagnostics;
};

CheckReport checkProof(const Proof& p, const Roster& roster);

/// Incremental construction of primitive proofs with derived rules.
/// Every produced step is checked on insertion; a formula derived once is
/// reused rather than derived again.
class ProofBuilder {
public:
    ProofBuilder(Proof& proof, const ProofContext& ctx);

    void setOrigin(std::string origin) { origin_ = std::move(origin); }

    std::size_t add(const Justification& j, const std::optional<Formula>& expected = std::nullopt);
    const Formula& at(std::size_t i) const { return proof_->steps.at(i).conclusion; }

    std::size_t em(const Formula& phi);
    std::size_t expand(std::size_t i, const Formula& psi);
    std::size_t contract(std::size_t i);
    std::size_t assoc(std::size_t i);
    std::size_t cut(std::size_t a, std::size_t b);
    std::size_t forallIntro(std::size_t i, const std::string& x);

    /// A∨B ⊢ B∨A
    std::size_t comm(std::size_t i);
    /// A∨(B∨C) ⊢ (A∨B)∨C
    std::size_t assocL(std::size_t i);
    /// A, ¬A∨B ⊢ B
    std::size_t mp(std::size_t a, std::size_t imp);
    /// A ⊢ ∀xA
    std::size_t gen(std::size_t i, const std::string& x);
    /// ¬A∨B ⊢ ¬(C∨A)∨(C∨B)
    std::size_t ctx(const Formula& c, std::size_t imp);
    /// ⊢ ¬(D∨D)∨D
    std::size_t contrImp(const Formula& d);
    /// ¬A∨D, ¬B∨D ⊢ ¬(A∨B)∨D
    std::size_t orElim(std::size_t left, std::size_t right);
    /// ⊢ ¬F∨disj(G⃗) when every maximal disjunct of F occurs in G⃗.
    std::size_t impLemma(Formula f, const std::vector<Formula>& g);
    /// F ⊢ disj(G⃗) under the same condition.
    std::size_t perm(std::size_t i, const std::vector<Formula>& g);
    /// Any propositional tautology (quantified and atomic subformulas opaque).
    std::size_t taut(const Formula& phi);
    /// Conclusion that follows propositionally from the premises.
    std::size_t tautCons(const std::vector<std::size_t>& premises, const Formula& conclusion);

private:
    std::optional<std::size_t> known(const Formula& f) const;
    std::size_t leafImp(std::size_t i, const std::vector<Formula>& g);
    std::size_t sequent(std::vector<Formula> gamma, int depth);

    Proof* proof_;
    const ProofContext* ctx_;
    std::string origin_;
    std::map<std::string, std::size_t> byFormula_;
};

/// Right-nested disjunction of a non-empty list.
Formula disjunction(const std::vector<Formula>& items);

/// Script grammar (one form per line, `;` comments):
///   (theory isigma1|pa)
///   (signature (fun NAME ARITY) (rel NAME ARITY) ...)
///   (gamma FORMULA)
///   (step LABEL RULE FORMULA)
/// RULE is one of (em) (subst X TERM) (eq refl|symm|trans) (eq cong F)
/// (eq congrel R) (arith I) (gamma I) (induction X FORMULA) (expand L)
/// (contract L) (assoc L) (cut L1 L2) (forall-intro L X), or a macro:
/// (comm L) (assocl L) (mp L1 L2) (gen L X) (perm L) (taut) (tautcons L...).
/// Axiom indices I are 1-based.
struct LoadedProof {
    Proof proof;
    std::vector<std::string> scriptLabels;  // in script order
};

LoadedProof loadProofScript(const std::string& text, const Roster& roster);
LoadedProof loadProofFile(const std::string& path, const Roster& roster);

}  // namespace hm
