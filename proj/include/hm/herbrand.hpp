#pragma once

// Herbrand sets T^M_s of normal ω-terms and verification of the resulting
// disjunction. runPipeline goes from a proof script to a report.

#include "hm/interp.hpp"
#include "hm/rewrite.hpp"
#include "hm/semantics.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace hm::herbrand {

class HerbrandError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Member {
    Term term;
    /// Clauses that produced the term, outermost first, e.g. "case", "seq[2]", "fn g".
    std::vector<std::string> provenance;
};

/// Branch indices demanded at one zero-sequence node, together with the
/// values of the argument's Herbrand terms that caused the demand.
struct SeqDemand {
    std::string tag;
    std::vector<std::uint64_t> argumentValues;
    std::vector<std::uint64_t> demanded;
};

struct HerbrandSet {
    std::vector<Member> members;  // sorted by the structural term order
    std::vector<SeqDemand> demands;

    bool contains(const Term& t) const;
    std::vector<Term> terms() const;
};

struct HerbrandOptions {
    std::size_t productCap = 10000;
};

/// T^M_s for a closed normal term s of type 0. Sequence branches are
/// demanded lazily, through the normalizer that produced s.
HerbrandSet herbrandSet(const omega::Term& s, const Structure& m, HerbrandOptions opt = {});

struct Disjunct {
    Term r;
    Formula instance;
    bool value = false;
};

struct Verification {
    std::vector<Disjunct> disjuncts;
    bool verdict = false;
    std::string diagnostic;
};

/// Evaluates A[x:=r] for every r in S.
Verification verifyDisjunction(const Formula& a, const std::string& x, const std::vector<Term>& s, const Structure& m);

struct PipelineOptions {
    rw::Budget budget;
    HerbrandOptions herbrand;
    unsigned gammaBound = 4;
};

struct Report {
    std::string proofName, structureName;
    Formula goal = Formula::eq(Term::zero(), Term::zero());
    std::string var;
    Formula matrix = goal;
    std::size_t proofSteps = 0;
    omega::Term witness = omega::numeral(0);
    omega::Term normal = witness;
    HerbrandSet set;
    Verification verification;
    GammaReport gamma;
    std::uint64_t rewriteSteps = 0;
    std::size_t demandDepth = 0;
};

class PipelineError : public std::runtime_error {
public:
    PipelineError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

Report runPipeline(const Proof& proof, const Structure& m, const Roster& roster, PipelineOptions opt = {});
Report runPipeline(const std::string& proofFile, const std::string& structureFile, PipelineOptions opt = {});

/// HERBRAND_TERM, DISJUNCT, VERDICT and GAMMA_SAMPLE lines.
std::vector<std::string> reportLines(const Report& r);
nlohmann::json toJson(const Report& r);

}  // namespace hm::herbrand
