#include "hm/proof.hpp"

#include <algorithm>

namespace hm {

const char* toString(Theory t) { return t == Theory::ISigma1 ? "isigma1" : "pa"; }

const char* toString(RuleKind r) {
    switch (r) {
        case RuleKind::ExcludedMiddle: return "em";
        case RuleKind::Substitution: return "subst";
        case RuleKind::Equality: return "eq";
        case RuleKind::Arith: return "arith";
        case RuleKind::Induction: return "induction";
        case RuleKind::Gamma: return "gamma";
        case RuleKind::Expansion: return "expand";
        case RuleKind::Contraction: return "contract";
        case RuleKind::Assoc: return "assoc";
        case RuleKind::Cut: return "cut";
        case RuleKind::ForallIntro: return "forall-intro";
    }
    return "?";
}

bool isUniversalAxiom(RuleKind r) {
    return r == RuleKind::Equality || r == RuleKind::Arith || r == RuleKind::Gamma;
}

std::size_t Proof::goalIndex() const {
    if (steps.empty()) throw ProofError("empty proof");
    return goalStep ? *goalStep : steps.size() - 1;
}

const Formula& Proof::goal() const { return steps.at(goalIndex()).conclusion; }

Formula disjunction(const std::vector<Formula>& items) {
    if (items.empty()) throw ProofError("empty disjunction");
    Formula f = items.back();
    for (std::size_t i = items.size() - 1; i-- > 0;) f = Formula::disj(items[i], f);
    return f;
}

// ---------------------------------------------------------------- axioms

namespace {

Formula closeAll(Formula f, const std::vector<std::string>& vars) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) f = Formula::forall(*it, f);
    return f;
}

}  // namespace

ProofContext::ProofContext(Theory theory, Signature sig, const Roster& roster)
    : theory_(theory), sig_(std::move(sig)), roster_(&roster) {
    Term x = Term::var("x"), y = Term::var("y");
    arith_.push_back(Formula::forall("x", Formula::neg(Formula::eq(Term::succ(x), Term::zero()))));
    arith_.push_back(closeAll(Formula::implies(Formula::eq(Term::succ(x), Term::succ(y)), Formula::eq(x, y)), {"x", "y"}));
    arith_.push_back(Formula::forall("x", Formula::neg(Formula::lt(x, Term::zero()))));
    arith_.push_back(closeAll(Formula::iff(Formula::lt(x, Term::succ(y)), Formula::le(x, y)), {"x", "y"}));
    for (const auto& e : roster.entries())
        for (auto& ax : roster.definingAxioms(e.name)) arith_.push_back(std::move(ax));
}

Formula ProofContext::equalityAxiom(EqualityKind k, const std::string& symbol) const {
    Term x = Term::var("x"), y = Term::var("y"), z = Term::var("z");
    switch (k) {
        case EqualityKind::Refl: return Formula::forall("x", Formula::eq(x, x));
        case EqualityKind::Symm: return closeAll(Formula::implies(Formula::eq(x, y), Formula::eq(y, x)), {"x", "y"});
        case EqualityKind::Trans:
            return closeAll(Formula::implies(Formula::eq(x, y), Formula::implies(Formula::eq(y, z), Formula::eq(x, z))),
                            {"x", "y", "z"});
        case EqualityKind::FunCong:
        case EqualityKind::RelCong: {
            int arity = 0;
            if (k == EqualityKind::FunCong) {
                const FunSymbol* f = sig_.function(symbol);
                if (!f) throw ProofError("congruence axiom for unknown function symbol " + symbol);
                arity = f->arity;
            } else {
                const RelSymbol* r = sig_.relation(symbol);
                if (!r) throw ProofError("congruence axiom for unknown relation symbol " + symbol);
                arity = r->arity;
            }
            std::vector<Term> xs, ys;
            std::vector<std::string> names;
            for (int i = 1; i <= arity; ++i) {
                names.push_back("x" + std::to_string(i));
                xs.push_back(Term::var(names.back()));
            }
            for (int i = 1; i <= arity; ++i) {
                names.push_back("y" + std::to_string(i));
                ys.push_back(Term::var(names.back()));
            }
            Formula body = k == EqualityKind::FunCong
                               ? Formula::eq(Term::app(symbol, xs), Term::app(symbol, ys))
                               : Formula::implies(Formula::atom(symbol, xs), Formula::atom(symbol, ys));
            for (int i = arity; i-- > 0;) body = Formula::implies(Formula::eq(xs[i], ys[i]), body);
            return closeAll(body, names);
        }
    }
    throw ProofError("unknown equality axiom");
}

Formula ProofContext::inductionInstance(const Formula& phi, const std::string& x) const {
    if (theory_ == Theory::ISigma1) {
        FormulaClass c = classify(phi);
        if (c != FormulaClass::Existential && c != FormulaClass::QuantifierFree)
            throw ProofError("IΣ₁ induction needs an existential formula, got " + std::string(toString(c)) + ": " + show(phi));
    }
    Formula base = substitute(phi, x, Term::zero());
    Formula step = Formula::forall(x, Formula::implies(phi, substitute(phi, x, Term::succ(Term::var(x)))));
    return Formula::implies(Formula::conj(base, step), Formula::forall(x, phi));
}

// ---------------------------------------------------------------- checking

Formula deriveConclusion(const ProofContext& ctx, const std::vector<Formula>& gamma, const Justification& j,
                         const std::vector<Formula>& prem) {
    auto need = [&](std::size_t n) {
        if (prem.size() != n) throw ProofError(std::string(toString(j.rule)) + " expects " + std::to_string(n) + " premise(s)");
    };
    auto needFormula = [&]() -> const Formula& {
        if (!j.formula) throw ProofError(std::string(toString(j.rule)) + " is missing its formula");
        return *j.formula;
    };
    switch (j.rule) {
        case RuleKind::ExcludedMiddle: {
            need(0);
            const Formula& phi = needFormula();
            return Formula::disj(Formula::neg(phi), phi);
        }
        case RuleKind::Substitution: {
            need(0);
            const Formula& phi = needFormula();
            if (!j.term) throw ProofError("substitution axiom is missing its term");
            if (!freeFor(phi, j.var, *j.term))
                throw ProofError("side condition failed: " + j.var + " is not free for " + show(*j.term) + " in " + show(phi));
            return Formula::disj(Formula::neg(Formula::forall(j.var, phi)), substitute(phi, j.var, *j.term));
        }
        case RuleKind::Equality: need(0); return ctx.equalityAxiom(j.eq, j.symbol);
        case RuleKind::Arith:
            need(0);
            if (j.index >= ctx.arithAxioms().size()) throw ProofError("no arithmetic axiom " + std::to_string(j.index + 1));
            return ctx.arithAxioms()[j.index];
        case RuleKind::Gamma:
            need(0);
            if (j.index >= gamma.size()) throw ProofError("no Γ sentence " + std::to_string(j.index + 1));
            return gamma[j.index];
        case RuleKind::Induction: need(0); return ctx.inductionInstance(needFormula(), j.var);
        case RuleKind::Expansion: need(1); return Formula::disj(prem[0], needFormula());
        case RuleKind::Contraction:
            need(1);
            if (prem[0].kind() != FKind::Or || prem[0].left() != prem[0].right())
                throw ProofError("contraction needs a premise of the form φ∨φ, got " + show(prem[0]));
            return prem[0].left();
        case RuleKind::Assoc:
            need(1);
            if (prem[0].kind() != FKind::Or || prem[0].left().kind() != FKind::Or)
                throw ProofError("associativity needs a premise of the form (φ∨ψ)∨χ, got " + show(prem[0]));
            return Formula::disj(prem[0].left().left(), Formula::disj(prem[0].left().right(), prem[0].right()));
        case RuleKind::Cut: {
            need(2);
            const Formula& a = prem[0];
            const Formula& b = prem[1];
            if (a.kind() != FKind::Or || b.kind() != FKind::Or)
                throw ProofError("cut needs two disjunctions");
            if (b.left().kind() != FKind::Not || b.left().sub() != a.left())
                throw ProofError("cut formula mismatch: " + show(a.left()) + " against " + show(b.left()));
            return Formula::disj(a.right(), b.right());
        }
        case RuleKind::ForallIntro: {
            need(1);
            const Formula& a = prem[0];
            if (a.kind() != FKind::Or) throw ProofError("∀-introduction needs a disjunction");
            if (occursFree(j.var, a.right()))
                throw ProofError("side condition failed: " + j.var + " is free in " + show(a.right()));
            return Formula::disj(Formula::forall(j.var, a.left()), a.right());
        }
    }
    throw ProofError("unknown rule");
}

CheckReport checkProof(const Proof& p, const Roster& roster) {
    CheckReport rep;
    ProofContext ctx(p.theory, p.sig, roster);
    for (std::size_t i = 0; i < p.gamma.size(); ++i)
        if (classify(p.gamma[i]) != FormulaClass::Universal && classify(p.gamma[i]) != FormulaClass::QuantifierFree) {
            rep.ok = false;
            rep.diagnostics.push_back({0, "Γ sentence " + std::to_string(i + 1) + " is not universal"});
        }
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        const ProofStep& s = p.steps[i];
        try {
            std::vector<Formula> prem;
            for (auto k : s.just.premises) {
                if (k >= i) throw ProofError("premise " + std::to_string(k) + " does not precede the step");
                prem.push_back(p.steps[k].conclusion);
            }
            Formula c = deriveConclusion(ctx, p.gamma, s.just, prem);
            if (c != s.conclusion) throw ProofError("conclusion does not match the rule: expected " + show(c));
        } catch (const std::exception& e) {
            rep.ok = false;
            rep.diagnostics.push_back({i, e.what()});
        }
    }
    return rep;
}

// ---------------------------------------------------------------- builder

ProofBuilder::ProofBuilder(Proof& proof, const ProofContext& ctx) : proof_(&proof), ctx_(&ctx) {
    for (std::size_t i = 0; i < proof.steps.size(); ++i) byFormula_.emplace(show(proof.steps[i].conclusion), i);
}

std::optional<std::size_t> ProofBuilder::known(const Formula& f) const {
    auto it = byFormula_.find(show(f));
    if (it == byFormula_.end()) return std::nullopt;
    return it->second;
}

std::size_t ProofBuilder::add(const Justification& j, const std::optional<Formula>& expected) {
    std::vector<Formula> prem;
    for (auto k : j.premises) prem.push_back(at(k));
    Formula c = deriveConclusion(*ctx_, proof_->gamma, j, prem);
    if (expected && c != *expected)
        throw ProofError("rule " + std::string(toString(j.rule)) + " yields " + show(c) + ", not " + show(*expected));
    if (auto k = known(c)) return *k;
    proof_->steps.push_back(ProofStep{c, j, origin_});
    byFormula_.emplace(show(c), proof_->steps.size() - 1);
    return proof_->steps.size() - 1;
}

std::size_t ProofBuilder::em(const Formula& phi) {
    Justification j;
    j.rule = RuleKind::ExcludedMiddle;
    j.formula = phi;
    return add(j);
}

std::size_t ProofBuilder::expand(std::size_t i, const Formula& psi) {
    Justification j;
    j.rule = RuleKind::Expansion;
    j.premises = {i};
    j.formula = psi;
    return add(j);
}

std::size_t ProofBuilder::contract(std::size_t i) {
    Justification j;
    j.rule = RuleKind::Contraction;
    j.premises = {i};
    return add(j);
}

std::size_t ProofBuilder::assoc(std::size_t i) {
    Justification j;
    j.rule = RuleKind::Assoc;
    j.premises = {i};
    return add(j);
}

std::size_t ProofBuilder::cut(std::size_t a, std::size_t b) {
    Justification j;
    j.rule = RuleKind::Cut;
    j.premises = {a, b};
    return add(j);
}

std::size_t ProofBuilder::forallIntro(std::size_t i, const std::string& x) {
    Justification j;
    j.rule = RuleKind::ForallIntro;
    j.premises = {i};
    j.var = x;
    return add(j);
}

std::size_t ProofBuilder::comm(std::size_t i) {
    const Formula& f = at(i);
    if (f.kind() != FKind::Or) throw ProofError("commutation needs a disjunction, got " + show(f));
    Formula a = f.left();
    return cut(i, em(a));
}

std::size_t ProofBuilder::assocL(std::size_t i) {
    const Formula& f = at(i);
    if (f.kind() != FKind::Or || f.right().kind() != FKind::Or)
        throw ProofError("left association needs φ∨(ψ∨χ), got " + show(f));
    return comm(assoc(comm(assoc(comm(i)))));
}

std::size_t ProofBuilder::mp(std::size_t a, std::size_t imp) {
    Formula fa = at(a);
    Formula fi = at(imp);
    if (fi.kind() != FKind::Or || fi.left().kind() != FKind::Not || fi.left().sub() != fa)
        throw ProofError("modus ponens: " + show(fi) + " is not an implication from " + show(fa));
    return contract(cut(expand(a, fi.right()), imp));
}

std::size_t ProofBuilder::gen(std::size_t i, const std::string& x) {
    Formula all = Formula::forall(x, at(i));
    return contract(forallIntro(expand(i, all), x));
}

std::size_t ProofBuilder::ctx(const Formula& c, std::size_t imp) {
    Formula fi = at(imp);
    if (fi.kind() != FKind::Or || fi.left().kind() != FKind::Not) throw ProofError("context rule needs ¬A∨B");
    std::size_t s = em(Formula::disj(c, fi.left().sub()));
    s = comm(assocL(s));
    s = cut(s, imp);
    return assoc(s);
}

std::size_t ProofBuilder::contrImp(const Formula& d) {
    Formula n = Formula::neg(Formula::disj(d, d));
    std::size_t s = assocL(em(Formula::disj(d, d)));
    s = comm(s);
    s = expand(s, n);
    s = comm(s);
    s = assocL(s);
    return contract(s);
}

std::size_t ProofBuilder::orElim(std::size_t left, std::size_t right) {
    Formula l = at(left), r = at(right);
    if (l.kind() != FKind::Or || r.kind() != FKind::Or || l.left().kind() != FKind::Not || r.left().kind() != FKind::Not ||
        l.right() != r.right())
        throw ProofError("case rule needs ¬A∨D and ¬B∨D");
    Formula a = l.left().sub(), b = r.left().sub(), d = l.right();
    Formula n = Formula::neg(Formula::disj(a, b));
    std::size_t s = em(Formula::disj(a, b));
    s = comm(assocL(s));
    s = cut(s, right);
    s = assoc(comm(assoc(s)));
    s = cut(s, left);
    s = comm(assocL(comm(s)));
    std::size_t imp = ctx(n, contrImp(d));
    return mp(s, imp);
}

std::size_t ProofBuilder::leafImp(std::size_t i, const std::vector<Formula>& g) {
    const std::size_t m = g.size();
    auto tail = [&](std::size_t from) { return disjunction(std::vector<Formula>(g.begin() + from, g.end())); };
    std::size_t s = em(g[i]);
    if (i + 1 < m) s = assoc(expand(s, tail(i + 1)));
    for (std::size_t j = i; j-- > 0;) {
        s = expand(comm(s), g[j]);
        s = assoc(comm(assoc(s)));
    }
    return s;
}

std::size_t ProofBuilder::impLemma(Formula f, const std::vector<Formula>& g) {
    auto it = std::find(g.begin(), g.end(), f);
    if (it != g.end()) return leafImp(static_cast<std::size_t>(it - g.begin()), g);
    if (f.kind() != FKind::Or) throw ProofError("disjunct " + show(f) + " does not occur in the target");
    Formula target = disjunction(g);
    if (auto k = known(Formula::disj(Formula::neg(f), target))) return *k;
    return orElim(impLemma(f.left(), g), impLemma(f.right(), g));
}

std::size_t ProofBuilder::perm(std::size_t i, const std::vector<Formula>& g) {
    if (at(i) == disjunction(g)) return i;
    Formula f = at(i);
    return mp(i, impLemma(f, g));
}

namespace {

bool isLiteral(const Formula& f) {
    switch (f.kind()) {
        case FKind::Atom:
        case FKind::Eq:
        case FKind::Forall: return true;
        case FKind::Or: return false;
        case FKind::Not: {
            FKind k = f.sub().kind();
            return k == FKind::Atom || k == FKind::Eq || k == FKind::Forall;
        }
    }
    return true;
}

std::vector<Formula> dedup(const std::vector<Formula>& xs) {
    std::vector<Formula> out;
    for (const auto& x : xs)
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    return out;
}

}  // namespace

std::size_t ProofBuilder::sequent(std::vector<Formula> gamma, int depth) {
    if (depth > 400) throw ProofError("tautology search too deep");
    std::vector<Formula> g = dedup(gamma);
    if (g.size() != gamma.size()) return perm(sequent(g, depth + 1), gamma);
    if (auto k = known(disjunction(g))) return *k;

    for (const auto& a : g)
        if (a.kind() == FKind::Not && std::find(g.begin(), g.end(), a.sub()) != g.end())
            return perm(em(a.sub()), g);

    for (std::size_t i = 0; i < g.size(); ++i) {
        const Formula& f = g[i];
        if (isLiteral(f)) continue;
        std::vector<Formula> rest;
        for (std::size_t j = 0; j < g.size(); ++j)
            if (j != i) rest.push_back(g[j]);
        if (f.kind() == FKind::Or) {
            std::vector<Formula> next{f.left(), f.right()};
            next.insert(next.end(), rest.begin(), rest.end());
            std::size_t p = sequent(next, depth + 1);
            if (rest.empty()) return p;
            return perm(assocL(p), g);
        }
        const Formula& inner = f.sub();
        if (inner.kind() == FKind::Not) {
            std::vector<Formula> next{inner.sub()};
            next.insert(next.end(), rest.begin(), rest.end());
            std::size_t p = sequent(next, depth + 1);
            std::size_t k = comm(em(inner));
            if (rest.empty()) return mp(p, k);
            return perm(cut(p, k), g);
        }
        // ¬(A∨B)
        std::vector<Formula> n1{Formula::neg(inner.left())}, n2{Formula::neg(inner.right())};
        n1.insert(n1.end(), rest.begin(), rest.end());
        n2.insert(n2.end(), rest.begin(), rest.end());
        std::size_t p1 = sequent(n1, depth + 1);
        std::size_t p2 = sequent(n2, depth + 1);
        if (rest.empty()) return contract(orElim(expand(p1, f), expand(p2, f)));
        return perm(orElim(p1, p2), g);
    }
    std::string shown;
    for (const auto& a : g) shown += " " + show(a);
    throw ProofError("not a propositional tautology; open branch:" + shown);
}

std::size_t ProofBuilder::taut(const Formula& phi) { return sequent({phi}, 0); }

std::size_t ProofBuilder::tautCons(const std::vector<std::size_t>& premises, const Formula& conclusion) {
    Formula t = conclusion;
    for (auto it = premises.rbegin(); it != premises.rend(); ++it) t = Formula::implies(at(*it), t);
    std::size_t s = taut(t);
    for (auto p : premises) s = mp(p, s);
    return s;
}

// ---------------------------------------------------------------- scripts

namespace {

std::size_t parseIndex(const SExpr& s) {
    if (!s.isAtom || s.atom.empty() || !std::all_of(s.atom.begin(), s.atom.end(), ::isdigit) || s.atom == "0")
        throw ProofError("positive index expected, got " + s.str());
    return std::stoul(s.atom) - 1;
}

}  // namespace

LoadedProof loadProofScript(const std::string& text, const Roster& roster) {
    LoadedProof out;
    Proof& p = out.proof;
    p.sig = arithmeticSignature(roster);
    std::vector<SExpr> forms = parseSExprs(text);
    std::optional<ProofContext> ctx;
    std::optional<ProofBuilder> b;
    auto ensure = [&]() {
        if (!ctx) {
            ctx.emplace(p.theory, p.sig, roster);
            b.emplace(p, *ctx);
        }
    };
    for (const auto& f : forms) {
        auto where = [&]() { return "line " + std::to_string(f.line) + ": "; };
        try {
            if (f.isForm("theory") && f.size() == 2) {
                if (ctx) throw ProofError("theory must precede the steps");
                if (f[1].isAtomNamed("isigma1")) p.theory = Theory::ISigma1;
                else if (f[1].isAtomNamed("pa")) p.theory = Theory::PA;
                else throw ProofError("unknown theory " + f[1].str());
            } else if (f.isForm("signature")) {
                if (ctx) throw ProofError("signature must precede the steps");
                for (std::size_t i = 1; i < f.size(); ++i) {
                    const SExpr& d = f[i];
                    if (d.size() != 3 || !d[1].isAtom || !d[2].isAtom) throw ProofError("malformed declaration " + d.str());
                    int arity = std::stoi(d[2].atom);
                    if (d.isForm("fun")) p.sig.addFunction({d[1].atom, arity, FunKind::Extra});
                    else if (d.isForm("rel")) p.sig.addRelation({d[1].atom, arity, RelKind::Extra});
                    else throw ProofError("malformed declaration " + d.str());
                }
            } else if (f.isForm("gamma") && f.size() == 2) {
                if (ctx) throw ProofError("Γ sentences must precede the steps");
                Formula g = parseFormula(f[1], p.sig);
                FormulaClass c = classify(g);
                if (c != FormulaClass::Universal && c != FormulaClass::QuantifierFree)
                    throw ProofError("Γ sentence is not universal: " + show(g));
                if (!freeVars(g).empty()) throw ProofError("Γ sentence has free variables: " + show(g));
                p.gamma.push_back(g);
            } else if (f.isForm("step") && f.size() == 4 && f[1].isAtom && f[2].isList() && f[2].size() >= 1) {
                ensure();
                const std::string label = f[1].atom;
                if (p.labels.count(label)) throw ProofError("duplicate step label " + label);
                const SExpr& r = f[2];
                const std::string rule = r[0].atom;
                Formula concl = parseFormula(f[3], p.sig);
                b->setOrigin(label + " " + rule);
                auto ref = [&](std::size_t i) {
                    auto it = p.labels.find(r[i].isAtom ? r[i].atom : "");
                    if (it == p.labels.end()) throw ProofError("unknown step label " + r[i].str());
                    return it->second;
                };
                auto needArgs = [&](std::size_t n) {
                    if (r.size() != n + 1) throw ProofError("rule " + rule + " takes " + std::to_string(n) + " argument(s)");
                };
                Justification j;
                std::size_t idx = 0;
                bool primitive = true;
                if (rule == "em") {
                    needArgs(0);
                    j.rule = RuleKind::ExcludedMiddle;
                    if (concl.kind() != FKind::Or || concl.left().kind() != FKind::Not)
                        throw ProofError("excluded middle has the form ¬φ∨φ");
                    j.formula = concl.right();
                } else if (rule == "subst") {
                    needArgs(2);
                    j.rule = RuleKind::Substitution;
                    if (!r[1].isAtom) throw ProofError("substitution variable expected");
                    j.var = r[1].atom;
                    j.term = parseTerm(r[2], p.sig);
                    if (concl.kind() != FKind::Or || concl.left().kind() != FKind::Not ||
                        concl.left().sub().kind() != FKind::Forall || concl.left().sub().var() != j.var)
                        throw ProofError("substitution axiom has the form ¬∀xφ ∨ φ[x:=t]");
                    j.formula = concl.left().sub().body();
                } else if (rule == "eq") {
                    j.rule = RuleKind::Equality;
                    if (r.size() < 2 || !r[1].isAtom) throw ProofError("equality axiom kind expected");
                    const std::string& k = r[1].atom;
                    if (k == "refl" || k == "symm" || k == "trans") {
                        needArgs(1);
                        j.eq = k == "refl" ? EqualityKind::Refl : k == "symm" ? EqualityKind::Symm : EqualityKind::Trans;
                    } else if (k == "cong" || k == "congrel") {
                        needArgs(2);
                        j.eq = k == "cong" ? EqualityKind::FunCong : EqualityKind::RelCong;
                        j.symbol = r[2].atom;
                    } else {
                        throw ProofError("unknown equality axiom " + k);
                    }
                } else if (rule == "arith" || rule == "gamma") {
                    needArgs(1);
                    j.rule = rule == "arith" ? RuleKind::Arith : RuleKind::Gamma;
                    j.index = parseIndex(r[1]);
                } else if (rule == "induction") {
                    needArgs(2);
                    j.rule = RuleKind::Induction;
                    j.var = r[1].atom;
                    j.formula = parseFormula(r[2], p.sig);
                } else if (rule == "expand") {
                    needArgs(1);
                    j.rule = RuleKind::Expansion;
                    j.premises = {ref(1)};
                    if (concl.kind() != FKind::Or) throw ProofError("expansion concludes a disjunction");
                    j.formula = concl.right();
                } else if (rule == "contract" || rule == "assoc") {
                    needArgs(1);
                    j.rule = rule == "contract" ? RuleKind::Contraction : RuleKind::Assoc;
                    j.premises = {ref(1)};
                } else if (rule == "cut") {
                    needArgs(2);
                    j.rule = RuleKind::Cut;
                    j.premises = {ref(1), ref(2)};
                } else if (rule == "forall-intro") {
                    needArgs(2);
                    j.rule = RuleKind::ForallIntro;
                    j.premises = {ref(1)};
                    j.var = r[2].atom;
                } else {
                    primitive = false;
                    if (rule == "comm") {
                        needArgs(1);
                        idx = b->comm(ref(1));
                    } else if (rule == "assocl") {
                        needArgs(1);
                        idx = b->assocL(ref(1));
                    } else if (rule == "mp") {
                        needArgs(2);
                        idx = b->mp(ref(1), ref(2));
                    } else if (rule == "gen") {
                        needArgs(2);
                        idx = b->gen(ref(1), r[2].atom);
                    } else if (rule == "perm") {
                        needArgs(1);
                        std::vector<Formula> items;
                        Formula c = concl;
                        while (c.kind() == FKind::Or) {
                            items.push_back(c.left());
                            c = c.right();
                        }
                        items.push_back(c);
                        idx = b->perm(ref(1), items);
                    } else if (rule == "taut") {
                        needArgs(0);
                        idx = b->taut(concl);
                    } else if (rule == "tautcons") {
                        std::vector<std::size_t> prem;
                        for (std::size_t i = 1; i < r.size(); ++i) prem.push_back(ref(i));
                        idx = b->tautCons(prem, concl);
                    } else {
                        throw ProofError("unknown rule " + rule);
                    }
                }
                if (primitive) idx = b->add(j, concl);
                if (b->at(idx) != concl)
                    throw ProofError("step derives " + show(b->at(idx)) + " instead of the stated formula");
                p.labels[label] = idx;
                p.goalStep = idx;
                out.scriptLabels.push_back(label);
            } else {
                throw ProofError("unrecognized form " + f.str());
            }
        } catch (const ProofError& e) {
            throw ProofError(where() + e.what());
        } catch (const ParseError& e) {
            throw ProofError(where() + e.what());
        } catch (const SignatureError& e) {
            throw ProofError(where() + e.what());
        }
    }
    if (p.steps.empty()) throw ProofError("proof script has no steps");
    return out;
}

LoadedProof loadProofFile(const std::string& path, const Roster& roster) { return loadProofScript(readFile(path), roster); }

}  // namespace hm
