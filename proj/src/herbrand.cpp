#include "hm/herbrand.hpp"

#include <algorithm>
#include <filesystem>
#include <unordered_map>

namespace hm::herbrand {

using omega::TKind;

bool HerbrandSet::contains(const Term& t) const {
    return std::any_of(members.begin(), members.end(), [&](const Member& m) { return m.term == t; });
}

std::vector<Term> HerbrandSet::terms() const {
    std::vector<Term> out;
    for (const auto& m : members) out.push_back(m.term);
    return out;
}

namespace {

using Members = std::vector<Member>;

void addUnique(Members& into, Member m) {
    for (const auto& x : into)
        if (x.term == m.term) return;
    into.push_back(std::move(m));
}

Member prefixed(const std::string& clause, const Member& m) {
    Member out{m.term, {clause}};
    out.provenance.insert(out.provenance.end(), m.provenance.begin(), m.provenance.end());
    return out;
}

class Computer {
public:
    Computer(const Structure& m, HerbrandOptions opt) : m_(m), opt_(opt) {}

    Members run(const omega::Term& s) {
        auto hit = memo_.find(s.id());
        if (hit != memo_.end()) return hit->second;
        Members out = compute(s);
        memo_.emplace(s.id(), out);
        keep_.push_back(s);
        return out;
    }

    std::vector<SeqDemand> demands;

private:
    const Structure& m_;
    HerbrandOptions opt_;
    std::unordered_map<const omega::Term::Node*, Members> memo_;
    std::vector<omega::Term> keep_;

    Members compute(const omega::Term& s) {
        if (!s.closed()) throw HerbrandError("open term: " + omega::show(s));
        rw::SpineView v = rw::analyzeSpine(s);
        switch (v.head.kind()) {
            case TKind::FnConst: return product(v.head.name(), v.args);
            case TKind::CaseConst: {
                const std::size_t m = v.args.size();
                if (m < 2) throw HerbrandError("case constant applied to too few arguments");
                Members out;
                for (const auto& x : run(v.args[m - 2])) addUnique(out, prefixed("case", x));
                for (const auto& x : run(v.args[m - 1])) addUnique(out, prefixed("case", x));
                return out;
            }
            case TKind::Seq: {
                SeqDemand d;
                d.tag = v.head.seq().tag;
                Members out;
                for (const auto& r : run(v.args.at(0))) {
                    Nat val = evalSigTerm(r.term, m_, {});
                    if (val > std::numeric_limits<std::uint64_t>::max()) throw HerbrandError("branch index too large");
                    auto n = val.convert_to<std::uint64_t>();
                    d.argumentValues.push_back(n);
                    if (std::find(d.demanded.begin(), d.demanded.end(), n) == d.demanded.end()) d.demanded.push_back(n);
                    for (const auto& x : run(v.head.branch(n))) addUnique(out, prefixed("seq[" + std::to_string(n) + "]", x));
                }
                demands.push_back(std::move(d));
                return out;
            }
            default: throw HerbrandError("unexpected spine head in " + omega::show(s));
        }
    }

    Members product(const std::string& f, const std::vector<omega::Term>& args) {
        std::vector<Members> sets;
        std::size_t total = 1;
        for (const auto& a : args) {
            sets.push_back(run(a));
            total *= std::max<std::size_t>(sets.back().size(), 1);
            if (total > opt_.productCap)
                throw HerbrandError("product of argument sets of " + f + " exceeds the cap of " +
                                    std::to_string(opt_.productCap));
        }
        Members out;
        std::vector<std::size_t> idx(sets.size(), 0);
        for (;;) {
            std::vector<Term> ts;
            Member m{Term::zero(), {"fn " + f}};
            for (std::size_t i = 0; i < sets.size(); ++i) {
                if (sets[i].empty()) return out;
                const Member& x = sets[i][idx[i]];
                ts.push_back(x.term);
                m.provenance.insert(m.provenance.end(), x.provenance.begin(), x.provenance.end());
            }
            m.term = Term::app(f, ts);
            addUnique(out, std::move(m));
            std::size_t i = 0;
            while (i < sets.size() && ++idx[i] == sets[i].size()) idx[i++] = 0;
            if (i == sets.size()) return out;
        }
    }
};

}  // namespace

HerbrandSet herbrandSet(const omega::Term& s, const Structure& m, HerbrandOptions opt) {
    if (!s.type().isBase()) throw HerbrandError("Herbrand sets are defined for terms of type 0");
    Computer c(m, opt);
    HerbrandSet out;
    out.members = c.run(s);
    std::sort(out.members.begin(), out.members.end(), [](const Member& a, const Member& b) { return a.term < b.term; });
    out.demands = std::move(c.demands);
    return out;
}

Verification verifyDisjunction(const Formula& a, const std::string& x, const std::vector<Term>& s, const Structure& m) {
    Verification v;
    if (s.empty()) v.diagnostic = "empty Herbrand set";
    for (const auto& r : s) {
        Formula inst = hm::substitute(a, x, r);
        bool val = evalQF(inst, m, {});
        v.disjuncts.push_back({r, inst, val});
        v.verdict = v.verdict || val;
    }
    return v;
}

Report runPipeline(const Proof& proof, const Structure& m, const Roster& roster, PipelineOptions opt) {
    Report rep;
    rep.goal = proof.goal();
    rep.proofSteps = proof.steps.size();
    rep.structureName = m.name();
    {
        CheckReport c = checkProof(proof, roster);
        if (!c.ok) {
            const auto& d = c.diagnostics.front();
            throw PipelineError("check", "step " + std::to_string(d.step + 1) + ": " + d.message);
        }
    }
    auto ex = asExists(rep.goal);
    if (!ex || !isQuantifierFree(ex->body) || asExistsLe(rep.goal))
        throw PipelineError("goal", "goal is not of the form ∃x A with A quantifier-free: " + show(rep.goal));
    for (const auto& y : freeVars(ex->body))
        if (y != ex->var) throw PipelineError("goal", "matrix has the free variable " + y + " besides " + ex->var);
    rep.var = ex->var;
    rep.matrix = ex->body;
    try {
        m.requireCovers(proof.sig);
        rep.gamma = checkGamma(proof.gamma, m, opt.gammaBound);
    } catch (const std::exception& e) {
        throw PipelineError("structure", e.what());
    }
    omega::Embedder emb(proof.sig, roster);
    try {
        auto w = interp::extractWitnesses(proof, emb);
        rep.witness = interp::extractExistentialWitness(proof, w);
    } catch (const std::exception& e) {
        throw PipelineError("interpret", e.what());
    }
    rw::Normalizer norm(opt.budget);
    try {
        rep.normal = norm.normalize(rep.witness);
        rep.set = herbrandSet(rep.normal, m, opt.herbrand);
    } catch (const std::exception& e) {
        throw PipelineError("normalize", e.what());
    }
    rep.rewriteSteps = norm.steps();
    rep.demandDepth = norm.trace().maxDemandDepth;
    rep.verification = verifyDisjunction(rep.matrix, rep.var, rep.set.terms(), m);
    return rep;
}

Report runPipeline(const std::string& proofFile, const std::string& structureFile, PipelineOptions opt) {
    static const Roster roster = Roster::defaults();
    LoadedProof lp;
    try {
        lp = loadProofFile(proofFile, roster);
    } catch (const std::exception& e) {
        throw PipelineError("load", e.what());
    }
    std::optional<Structure> m;
    try {
        m.emplace(Structure::load(structureFile, roster));
    } catch (const std::exception& e) {
        throw PipelineError("structure", e.what());
    }
    Report r = runPipeline(lp.proof, *m, roster, opt);
    r.proofName = std::filesystem::path(proofFile).stem().string();
    return r;
}

std::vector<std::string> reportLines(const Report& r) {
    std::vector<std::string> out;
    for (const auto& m : r.set.members) out.push_back("HERBRAND_TERM " + toSExpr(m.term).str());
    for (const auto& d : r.verification.disjuncts)
        out.push_back("DISJUNCT " + toSExpr(d.instance).str() + (d.value ? " true" : " false"));
    out.push_back(std::string("VERDICT ") + (r.verification.verdict ? "true" : "false"));
    out.push_back(std::string("GAMMA_SAMPLE ") + (r.gamma.pass ? "pass " : "fail ") + std::to_string(r.gamma.bound));
    return out;
}

nlohmann::json toJson(const Report& r) {
    using nlohmann::json;
    json j;
    j["proof"] = r.proofName;
    j["structure"] = r.structureName;
    j["goal"] = toSExpr(r.goal).str();
    j["proof_steps"] = r.proofSteps;
    omega::RenderOptions ro;
    j["normal_form"] = omega::show(r.normal, ro);
    json set = json::array();
    for (const auto& m : r.set.members) set.push_back({{"term", toSExpr(m.term).str()}, {"provenance", m.provenance}});
    j["herbrand_set"] = set;
    json demands = json::array();
    for (const auto& d : r.set.demands)
        demands.push_back({{"sequence", d.tag}, {"argument_values", d.argumentValues}, {"demanded", d.demanded}});
    j["seq_demands"] = demands;
    json dis = json::array();
    for (const auto& d : r.verification.disjuncts)
        dis.push_back({{"term", toSExpr(d.r).str()}, {"instance", toSExpr(d.instance).str()}, {"value", d.value}});
    j["disjuncts"] = dis;
    j["verdict"] = r.verification.verdict;
    if (!r.verification.diagnostic.empty()) j["diagnostic"] = r.verification.diagnostic;
    j["gamma_sample"] = {{"pass", r.gamma.pass}, {"bound", r.gamma.bound}, {"instances", r.gamma.instances}};
    if (!r.gamma.failure.empty()) j["gamma_sample"]["failure"] = r.gamma.failure;
    j["budget"] = {{"rewrite_steps", r.rewriteSteps}, {"max_demand_depth", r.demandDepth}};
    return j;
}

}  // namespace hm::herbrand
