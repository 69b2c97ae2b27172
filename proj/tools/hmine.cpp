#include "hm/herbrand.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace hm;

namespace {

std::string clip(std::string s, std::size_t maxChars) {
    if (maxChars > 0 && s.size() > maxChars) s = s.substr(0, maxChars) + " ...";
    return s;
}

int runCheck(const std::string& path) {
    const Roster roster = Roster::defaults();
    LoadedProof lp = loadProofFile(path, roster);
    CheckReport rep = checkProof(lp.proof, roster);
    for (const auto& d : rep.diagnostics)
        std::cout << "ERROR step " << d.step + 1 << " (" << lp.proof.steps.at(d.step).origin << "): " << d.message << "\n";
    std::map<std::string, std::size_t> counts;
    for (const auto& s : lp.proof.steps) ++counts[toString(s.just.rule)];
    for (const auto& [rule, n] : counts) std::cout << "RULE " << rule << " " << n << "\n";
    std::cout << "GOAL " << toSExpr(lp.proof.goal()).str() << "\n";
    std::cout << (rep.ok ? "OK " : "FAILED ") << lp.proof.steps.size() << " steps\n";
    return rep.ok ? 0 : 1;
}

int runInterpret(const std::string& path, const std::string& label, std::size_t maxChars) {
    const Roster roster = Roster::defaults();
    LoadedProof lp = loadProofFile(path, roster);
    CheckReport rep = checkProof(lp.proof, roster);
    if (!rep.ok) throw std::runtime_error("proof does not check: " + rep.diagnostics.front().message);
    omega::Embedder emb(lp.proof.sig, roster);
    auto w = interp::extractWitnesses(lp.proof, emb);
    std::size_t idx = lp.proof.goalIndex();
    if (!label.empty()) {
        auto it = lp.proof.labels.find(label);
        if (it == lp.proof.labels.end()) throw std::runtime_error("unknown step label " + label);
        idx = it->second;
    }
    const auto& s = w.at(idx);
    std::cout << "FORMULA " << toSExpr(lp.proof.steps[idx].conclusion).str() << "\n";
    std::cout << "INTERPRETATION " << clip(interp::toSExpr(*s.node).str(), maxChars) << "\n";
    auto lams = interp::lambdaForm(s);
    for (std::size_t i = 0; i < lams.size(); ++i)
        std::cout << "WITNESS " << s.node->x[i].name << " " << clip(omega::show(lams[i]), maxChars) << "\n";
    return 0;
}

int runNormalize(const std::string& path, bool trace, rw::Budget budget, std::size_t maxChars) {
    const Roster roster = Roster::defaults();
    LoadedProof lp = loadProofFile(path, roster);
    CheckReport rep = checkProof(lp.proof, roster);
    if (!rep.ok) throw std::runtime_error("proof does not check: " + rep.diagnostics.front().message);
    omega::Embedder emb(lp.proof.sig, roster);
    auto w = interp::extractWitnesses(lp.proof, emb);
    omega::Term t = interp::extractExistentialWitness(lp.proof, w);
    rw::Normalizer norm(budget, trace);
    omega::Term s = norm.normalize(t);
    if (trace)
        for (const auto& st : norm.trace().steps)
            std::cout << "STEP " << st.index << " " << rw::toString(st.rule) << " " << st.position << "\n";
    std::cout << "NORMAL " << clip(omega::show(s), maxChars) << "\n";
    std::cout << "STEPS " << norm.steps() << "\n";
    return 0;
}

int runExtract(const std::string& path, const std::string& model, rw::Budget budget, unsigned gammaBound, bool json,
               std::size_t maxChars) {
    herbrand::PipelineOptions opt;
    opt.budget = budget;
    opt.gammaBound = gammaBound;
    herbrand::Report r = herbrand::runPipeline(path, model, opt);
    if (json) {
        std::cout << herbrand::toJson(r).dump(2) << "\n";
    } else {
        std::cout << "GOAL " << toSExpr(r.goal).str() << "\n";
        std::cout << "NORMAL_FORM " << clip(omega::show(r.normal), maxChars) << "\n";
        for (const auto& line : herbrand::reportLines(r)) std::cout << line << "\n";
        if (!r.gamma.pass) std::cout << "WARNING structure fails a sampled Γ instance: " << r.gamma.failure << "\n";
        std::cout << "BUDGET steps " << r.rewriteSteps << " demand " << r.demandDepth << "\n";
    }
    return r.verification.verdict ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Herbrand disjunctions from arithmetic proofs via the functional interpretation"};
    app.require_subcommand(1);

    std::string proof, model, label;
    bool trace = false, json = false;
    rw::Budget budget;
    unsigned gammaBound = 4;
    std::size_t maxChars = 2000;

    auto* check = app.add_subcommand("check", "check a proof script");
    check->add_option("proof", proof, "proof script")->required()->check(CLI::ExistingFile);

    auto* interpret = app.add_subcommand("interpret", "show the interpretation and witnesses of a step");
    interpret->add_option("proof", proof, "proof script")->required()->check(CLI::ExistingFile);
    interpret->add_option("--step", label, "script label (default: the goal)");
    interpret->add_option("--max-chars", maxChars, "truncate renderings (0: no limit)");

    auto* normalize = app.add_subcommand("normalize", "normalize the extracted witness of the goal");
    normalize->add_option("proof", proof, "proof script")->required()->check(CLI::ExistingFile);
    normalize->add_flag("--trace", trace, "print every rewrite step");
    normalize->add_option("--max-steps", budget.maxSteps, "rewrite step budget");
    normalize->add_option("--max-demand", budget.maxDemand, "sequence demand depth budget");
    normalize->add_option("--max-chars", maxChars, "truncate renderings (0: no limit)");

    auto* extract = app.add_subcommand("extract", "compute and verify the Herbrand disjunction in a structure");
    extract->add_option("proof", proof, "proof script")->required()->check(CLI::ExistingFile);
    extract->add_option("--model", model, "structure specification")->required()->check(CLI::ExistingFile);
    extract->add_option("--max-steps", budget.maxSteps, "rewrite step budget");
    extract->add_option("--max-demand", budget.maxDemand, "sequence demand depth budget");
    extract->add_option("--gamma-bound", gammaBound, "range 0..B for sampling the Γ sentences");
    extract->add_option("--max-chars", maxChars, "truncate renderings (0: no limit)");
    extract->add_flag("--json", json, "print the report as JSON");

    CLI11_PARSE(app, argc, argv);
    try {
        if (check->parsed()) return runCheck(proof);
        if (interpret->parsed()) return runInterpret(proof, label, maxChars);
        if (normalize->parsed()) return runNormalize(proof, trace, budget, maxChars);
        if (extract->parsed()) return runExtract(proof, model, budget, gammaBound, json, maxChars);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
