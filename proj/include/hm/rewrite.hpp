#pragma once

// Reduction of ω-terms. Besides β, pending arguments of a sequence move into
// its branches, and a sequence applied to a numeral selects a branch. Normalization is
// leftmost-outermost along the spine; sequence branches are normalized only
// when demanded.

#include "hm/omega.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace hm::rw {

using omega::Term;

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RewriteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Budget {
    std::uint64_t maxSteps = 100000;
    std::uint64_t maxDemand = 1000;
};

enum class Rule { Beta, SeqPermute, SeqIndex };
const char* toString(Rule r);

struct TraceStep {
    std::uint64_t index = 0;
    Rule rule = Rule::Beta;
    std::string position;  // "ε" or dot-separated spine argument indices; "[n]" enters branch n
    std::string before, after;
};

struct RewriteTrace {
    std::vector<TraceStep> steps;
    std::uint64_t stepCount = 0;
    std::uint64_t maxDemandDepth = 0;
};

/// Contracts the redex whose spine head sits at `position`.
Term stepAt(const Term& t, const std::string& position);

class Normalizer {
public:
    explicit Normalizer(Budget budget = {}, bool recordSteps = false);

    /// Normal form; branches of sequences in the result are normalized lazily
    /// through this normalizer (and count against its budget).
    Term normalize(const Term& t);

    const RewriteTrace& trace() const;
    std::uint64_t steps() const;

    struct State;

private:
    std::shared_ptr<State> state_;
};

/// One-shot normalization with default budgets.
Term normalize(const Term& t, Budget budget = {});

struct SpineView {
    Term head;
    std::vector<Term> args;
};

/// Spine of a normal closed type-0 term: the head is a function constant, a
/// case constant or a type-0 sequence, and every argument has type 0.
SpineView analyzeSpine(const Term& s);

/// Applies analyzeSpine recursively to every argument and to every branch of
/// a sequence head that has been demanded so far. Returns the number of
/// spines checked.
std::size_t checkDemandedSpines(const Term& s);

/// Lazily applies `args` inside every branch of a sequence.
Term permuteInto(const Term& seq, const std::vector<Term>& args);

}  // namespace hm::rw
