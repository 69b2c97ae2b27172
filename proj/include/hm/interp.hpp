#pragma once

// Shoenfield's functional interpretation of σ-formulas and extraction of
// witnessing ω-terms from primitive proofs.

#include "hm/omega.hpp"
#include "hm/proof.hpp"
#include "hm/semantics.hpp"

#include <memory>
#include <string>
#include <vector>

namespace hm::interp {

using omega::OFormula;
using omega::Term;
using omega::Var;

class InterpError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class NodeKind { Atomic, Neg, Or, Forall, BoundedForall };

/// Interpretation (F, u⃗, x⃗) of a formula. Children mirror the formula so
/// that variables of two interpretations of the same formula correspond by
/// position.
struct Node {
    NodeKind kind = NodeKind::Atomic;
    Formula source;
    OFormula sh;
    std::vector<Var> u, x;
    std::vector<std::shared_ptr<const Node>> kids;
    std::string var;  // Forall: the fresh u-variable; BoundedForall: the bound variable
};
using NodePtr = std::shared_ptr<const Node>;

/// Every bound variable is renamed to a session-fresh name.
NodePtr interpret(const Formula& phi, const omega::Embedder& e);

SExpr toSExpr(const Node& n);

struct StepWitness {
    NodePtr node;
    /// One term per node->x; free variables lie in node->u and FV(conclusion).
    std::vector<Term> x;
};

/// λu⃗.t for each witness.
std::vector<Term> lambdaForm(const StepWitness& w);

struct WitnessedProof {
    std::vector<StepWitness> steps;
    const StepWitness& at(std::size_t i) const { return steps.at(i); }
};

struct ExtractOptions {
    /// Skip case distinctions whose two branches are structurally identical.
    bool shareEqualBranches = true;
    /// Normalize the witnesses of every step before they are reused.
    bool normalizeSteps = false;
    /// Resolve case distinctions whose condition is propositionally valid or
    /// unsatisfiable.
    bool decidePropositionally = true;
};

WitnessedProof extractWitnesses(const Proof& p, const omega::Embedder& e, ExtractOptions opt = {});

/// Closed type-0 witness for a goal ∃xA with A quantifier-free.
Term extractExistentialWitness(const Proof& p, const WitnessedProof& w);

/// Checks tp and FV conditions for one step; returns an empty string when they hold.
std::string checkWitnessShape(const StepWitness& w, const Formula& conclusion);

struct SamplerOptions {
    std::size_t exhaustiveLimit = 2000;
    std::size_t samples = 500;
    std::uint64_t seed = 0x5eed;
    unsigned maxValue = 5;
};

struct SoundnessFailure {
    std::size_t step = 0;
    std::string detail;
};

struct SoundnessReport {
    std::size_t steps = 0;
    std::size_t valuations = 0;
    std::vector<SoundnessFailure> failures;
    bool ok() const { return failures.empty(); }
};

/// Sampled values for a variable of type ρ: 0..maxValue at type 0, and at
/// higher types the functionals returning 0, the first argument, its
/// successor, and the first argument plus 2 (higher-type arguments are
/// collapsed to a number by applying them to such defaults).
std::vector<sem::Value> sampleFamily(const omega::Type& t, unsigned maxValue);

/// Evaluates ∀u⃗ F[x⃗ := t⃗] on sampled valuations of u⃗ and of the free
/// variables of the conclusion.
SoundnessReport checkSoundness(const Proof& p, const WitnessedProof& w, const Structure& m, SamplerOptions opt = {},
                               const std::vector<std::size_t>& onlySteps = {});

}  // namespace hm::interp
