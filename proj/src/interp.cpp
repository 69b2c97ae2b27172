#include "hm/interp.hpp"

#include "hm/rewrite.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

namespace hm::interp {

using omega::Type;

namespace {

std::vector<Term> varTerms(const std::vector<Var>& vs) {
    std::vector<Term> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(Term::var(v));
    return out;
}

std::vector<Type> typesOfVars(const std::vector<Var>& vs) {
    std::vector<Type> out;
    for (const auto& v : vs) out.push_back(v.type);
    return out;
}

void append(std::vector<Var>& a, const std::vector<Var>& b) { a.insert(a.end(), b.begin(), b.end()); }

struct Interpreter {
    const omega::Embedder& e;

    NodePtr run(const Formula& phi) {
        NodeKind kind = NodeKind::Atomic;
        std::vector<Var> u, x;
        std::vector<NodePtr> kids;
        std::string var;
        auto finish = [&](OFormula sh) {
            return std::make_shared<const Node>(Node{kind, phi, std::move(sh), std::move(u), std::move(x), std::move(kids), std::move(var)});
        };
        switch (phi.kind()) {
        case FKind::Atom:
        case FKind::Eq:
            return finish(e.embed(phi));
        case FKind::Not: {
            kind = NodeKind::Neg;
            NodePtr c = run(phi.sub());
            std::map<std::string, Term> sub;
            auto us = varTerms(c->u);
            auto ut = typesOfVars(c->u);
            for (const auto& xv : c->x) {
                Var f = omega::freshVar("f", omega::arrow(ut, xv.type));
                u.push_back(f);
                sub.insert_or_assign(xv.name, Term::apps(Term::var(f), us));
            }
            x = c->u;
            kids.push_back(c);
            return finish(OFormula::neg(omega::substitute(c->sh, sub)));
        }
        case FKind::Or: {
            kind = NodeKind::Or;
            NodePtr a = run(phi.left());
            NodePtr b = run(phi.right());
            u = a->u;
            append(u, b->u);
            x = a->x;
            append(x, b->x);
            kids = {a, b};
            return finish(OFormula::disj(a->sh, b->sh));
        }
        case FKind::Forall: {
            std::string z = omega::freshName(phi.var());
            Formula body = hm::substitute(phi.body(), phi.var(), hm::Term::var(z));
            var = z;
            NodePtr c = run(body);
            if (hm::asForallLe(phi)) {
                kind = NodeKind::BoundedForall;
                u = c->u;
            } else {
                kind = NodeKind::Forall;
                u = {Var{z, Type::base()}};
                append(u, c->u);
            }
            x = c->x;
            kids.push_back(c);
            return finish(kind == NodeKind::BoundedForall ? OFormula::forall(z, c->sh) : c->sh);
        }
        }
        throw InterpError("unknown formula kind");
    }
};

std::map<std::string, Term> renaming(const std::vector<Var>& from, const std::vector<Var>& to) {
    if (from.size() != to.size()) throw InterpError("interpretations do not correspond");
    std::map<std::string, Term> m;
    for (std::size_t i = 0; i < from.size(); ++i) m.insert_or_assign(from[i].name, Term::var(to[i]));
    return m;
}

std::vector<Term> substAll(const std::vector<Term>& ts, const std::map<std::string, Term>& sub) {
    return omega::substitute(ts, sub, 100000);
}

std::vector<Term> slice(const std::vector<Term>& v, std::size_t from, std::size_t n) {
    if (from + n > v.size()) throw InterpError("witness tuple too short");
    return {v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(from + n)};
}

// Truth-table status of a formula whose atoms and bounded quantifiers are
// read as propositional letters: 1 valid, -1 unsatisfiable, 0 otherwise.
int propositionalStatus(const OFormula& f, std::size_t maxLetters = 14) {
    std::vector<OFormula> letters;
    std::function<bool(const OFormula&)> collect = [&](const OFormula& g) {
        switch (g.kind()) {
            case omega::OKind::Not: return collect(g.sub());
            case omega::OKind::Or: return collect(g.left()) && collect(g.right());
            default:
                for (const auto& l : letters)
                    if (omega::equal(l, g)) return true;
                letters.push_back(g);
                return letters.size() <= maxLetters;
        }
    };
    if (!collect(f)) return 0;
    std::function<bool(const OFormula&, std::uint32_t)> ev = [&](const OFormula& g, std::uint32_t bits) -> bool {
        switch (g.kind()) {
            case omega::OKind::Not: return !ev(g.sub(), bits);
            case omega::OKind::Or: return ev(g.left(), bits) || ev(g.right(), bits);
            default:
                for (std::size_t i = 0; i < letters.size(); ++i)
                    if (omega::equal(letters[i], g)) return (bits >> i) & 1U;
                return false;
        }
    };
    bool anyTrue = false, anyFalse = false;
    for (std::uint32_t bits = 0; bits < (1U << letters.size()); ++bits) {
        (ev(f, bits) ? anyTrue : anyFalse) = true;
        if (anyTrue && anyFalse) return 0;
    }
    return anyTrue ? 1 : -1;
}

class Extractor {
public:
    Extractor(const Proof& p, const omega::Embedder& e, ExtractOptions opt) : p_(p), e_(e), opt_(opt) {}

    WitnessedProof run() {
        WitnessedProof out;
        out.steps.reserve(p_.steps.size());
        for (std::size_t i = 0; i < p_.steps.size(); ++i) {
            try {
                out.steps.push_back(step(i, out));
            } catch (const std::exception& ex) {
                throw InterpError("step " + std::to_string(i + 1) + " (" + p_.steps[i].origin + "): " + ex.what());
            }
        }
        return out;
    }

private:
    const Proof& p_;
    const omega::Embedder& e_;
    ExtractOptions opt_;

    NodePtr interp(const Formula& f) { return Interpreter{e_}.run(f); }

    StepWitness step(std::size_t i, const WitnessedProof& done) {
        const ProofStep& s = p_.steps[i];
        const Justification& j = s.just;
        auto prem = [&](std::size_t k) -> const StepWitness& { return done.steps.at(j.premises.at(k)); };
        StepWitness w;
        w.node = interp(s.conclusion);
        const Node& I = *w.node;
        switch (j.rule) {
        case RuleKind::ExcludedMiddle: {
            const Node& neg = *I.kids[0];
            const Node& b = *I.kids[1];
            for (const auto& v : b.u) w.x.push_back(Term::var(v));
            auto bu = varTerms(b.u);
            for (const auto& f : neg.u) w.x.push_back(Term::apps(Term::var(f), bu));
            break;
        }
        case RuleKind::Substitution: {
            const Node& neg = *I.kids[0];
            const Node& all = *neg.kids[0];
            const Node& b = *I.kids[1];
            std::vector<Term> head;
            if (all.kind == NodeKind::Forall) {
                const Formula& body = s.conclusion.left().sub().body();
                bool used = occursFree(s.conclusion.left().sub().var(), body);
                head.push_back(used ? e_.embed(*j.term) : omega::numeral(0));
            }
            for (const auto& v : b.u) w.x.push_back(Term::var(v));
            w.x.insert(w.x.begin(), head.begin(), head.end());
            auto args = head;
            for (const auto& v : b.u) args.push_back(Term::var(v));
            for (const auto& f : neg.u) w.x.push_back(Term::apps(Term::var(f), args));
            break;
        }
        case RuleKind::Equality:
        case RuleKind::Arith:
        case RuleKind::Gamma:
            if (!I.x.empty()) throw InterpError("axiom is not universal");
            break;
        case RuleKind::Induction:
            w.x = induction(I, j);
            break;
        case RuleKind::Expansion: {
            const StepWitness& a = prem(0);
            w.x = substAll(a.x, renaming(a.node->u, I.kids[0]->u));
            for (const auto& v : I.kids[1]->x) w.x.push_back(omega::zeroOf(v.type));
            break;
        }
        case RuleKind::Contraction:
            w.x = contraction(I, prem(0));
            break;
        case RuleKind::Assoc: {
            const StepWitness& a = prem(0);
            w.x = substAll(a.x, renaming(a.node->u, I.u));
            break;
        }
        case RuleKind::Cut:
            w.x = cut(I, prem(0), prem(1));
            break;
        case RuleKind::ForallIntro:
            w.x = forallIntro(I, prem(0), j.var);
            break;
        }
        close(w, s.conclusion);
        if (opt_.normalizeSteps) {
            for (auto& t : w.x) {
                try {
                    t = rw::normalize(t);
                } catch (const rw::BudgetExceeded&) {
                }
            }
        }
        return w;
    }

    // Free variables outside u⃗ and FV(conclusion) are replaced by canonical zeros.
    void close(StepWitness& w, const Formula& conclusion) {
        std::set<std::string> allowed;
        for (const auto& v : w.node->u) allowed.insert(v.name);
        for (const auto& x : hm::freeVars(conclusion)) allowed.insert(x);
        if (w.x.size() != w.node->x.size()) throw InterpError("witness count mismatch");
        for (std::size_t i = 0; i < w.x.size(); ++i) {
            std::map<std::string, Term> sub;
            for (const auto& v : w.x[i].freeVars())
                if (!allowed.count(v.name)) sub.insert_or_assign(v.name, omega::zeroOf(v.type));
            if (!sub.empty()) w.x[i] = omega::substitute(w.x[i], sub);
            if (w.x[i].type() != w.node->x[i].type)
                throw InterpError("witness of type " + w.x[i].type().str() + " for a variable of type " +
                                  w.node->x[i].type.str());
        }
    }

    // Each maximal disjunct with witnesses keeps the first copy's witnesses
    // when its own matrix holds on them and takes the second copy's otherwise.
    std::vector<Term> contraction(const Node& I, const StepWitness& a) {
        const Node& p1 = *a.node->kids[0];
        const Node& p2 = *a.node->kids[1];
        if (I.x.empty()) return {};
        auto sub = renaming(p1.u, I.u);
        sub.merge(renaming(p2.u, I.u));
        auto x1 = substAll(slice(a.x, 0, p1.x.size()), sub);
        auto x2 = substAll(slice(a.x, p1.x.size(), p2.x.size()), sub);
        std::vector<Term> out;
        std::function<void(const Node&)> walk = [&](const Node& leaf) {
            if (leaf.kind == NodeKind::Or) {
                walk(*leaf.kids[0]);
                walk(*leaf.kids[1]);
                return;
            }
            const std::size_t off = out.size();
            const std::size_t n = leaf.x.size();
            bool same = opt_.shareEqualBranches;
            for (std::size_t i = off; same && i < off + n; ++i) same = omega::equal(x1[i], x2[i]);
            if (same) {
                out.insert(out.end(), x1.begin() + static_cast<std::ptrdiff_t>(off),
                           x1.begin() + static_cast<std::ptrdiff_t>(off + n));
                return;
            }
            auto fsub = sub;
            for (std::size_t k = 0; k < n; ++k) fsub.insert_or_assign(leaf.x[k].name, x1[off + k]);
            OFormula c = omega::substitute(leaf.sh, fsub);
            int st = opt_.decidePropositionally ? propositionalStatus(c) : 0;
            std::optional<Term> head;
            for (std::size_t i = off; i < off + n; ++i) {
                if (st != 0 || (opt_.shareEqualBranches && omega::equal(x1[i], x2[i]))) {
                    out.push_back(st == -1 ? x2[i] : x1[i]);
                    continue;
                }
                if (!head) {
                    omega::Decomposition d = e_.decompose(c);
                    head = Term::apps(e_.caseTerm(d.phi), d.terms);
                }
                std::vector<Var> ws;
                for (const auto& t : x1[i].type().argTypes()) ws.push_back(omega::freshVar("w", t));
                auto wt = varTerms(ws);
                out.push_back(Term::lams(ws, Term::apps(*head, {Term::apps(x1[i], wt), Term::apps(x2[i], wt)})));
            }
        };
        walk(p1);
        return out;
    }

    std::vector<Term> cut(const Node& I, const StepWitness& l, const StepWitness& r) {
        const Node& a1 = *l.node->kids[0];
        const Node& b1 = *l.node->kids[1];
        const Node& n2 = *r.node->kids[0];
        const Node& c2 = *r.node->kids[1];
        const Node& b = *I.kids[0];
        const Node& c = *I.kids[1];
        auto aPhi = slice(l.x, 0, a1.x.size());
        auto aPsi = slice(l.x, a1.x.size(), b1.x.size());
        auto bU = slice(r.x, 0, n2.x.size());
        auto bChi = slice(r.x, n2.x.size(), c2.x.size());
        auto psiRen = renaming(b1.u, b.u);

        std::map<std::string, Term> sigma2 = renaming(c2.u, c.u);
        if (n2.u.size() != aPhi.size()) throw InterpError("cut formulas do not correspond");
        for (std::size_t i = 0; i < aPhi.size(); ++i) {
            std::vector<Var> vs;
            for (const auto& v : a1.u) vs.push_back(omega::freshVar("v", v.type));
            auto sub = psiRen;
            sub.merge(renaming(a1.u, vs));
            sigma2.insert_or_assign(n2.u[i].name, Term::lams(vs, substAll({aPhi[i]}, sub)[0]));
        }
        auto buStar = substAll(bU, sigma2);
        auto sub1 = psiRen;
        for (std::size_t k = 0; k < a1.u.size(); ++k) sub1.insert_or_assign(a1.u[k].name, buStar.at(k));
        auto out = substAll(aPsi, sub1);
        auto rest = substAll(bChi, sigma2);
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
    }

    std::vector<Term> forallIntro(const Node& I, const StepWitness& a, const std::string& x) {
        const Node& all = *I.kids[0];
        const Node& b = *I.kids[1];
        const Node& body = *all.kids[0];
        const Node& a1 = *a.node->kids[0];
        const Node& b1 = *a.node->kids[1];
        auto sub = renaming(a1.u, body.u);
        sub.merge(renaming(b1.u, b.u));
        if (all.kind == NodeKind::BoundedForall) {
            for (const auto& t : a.x)
                if (t.hasFree(x))
                    throw InterpError("bounded ∀-introduction whose witnesses depend on " + x + " is not supported");
        } else {
            sub.insert_or_assign(x, Term::var(all.var, Type::base()));
        }
        return substAll(a.x, sub);
    }

    // Parsons' construction with the simultaneous recursor.
    std::vector<Term> induction(const Node& I, const Justification& j) {
        const Node& notN = *I.kids[0];
        const Node& n = *notN.kids[0];
        const Node& inner = *n.kids[0];
        const Node& negPhi0 = *inner.kids[0];
        const Node& negSt = *inner.kids[1];
        const Node& all = *I.kids[1];
        if (!negPhi0.kids[0]->u.empty()) throw InterpError("induction formula with universal parts is not supported");
        const std::string& x = j.var;
        const Formula& phi = *j.formula;

        std::vector<Var> hv, qv;
        for (const auto& v : negPhi0.u) hv.push_back(omega::freshVar("h", v.type));
        for (const auto& v : negSt.u) qv.push_back(omega::freshVar("q", v.type));
        std::vector<Var> lamVars = hv;
        append(lamVars, qv);
        const std::size_t l = hv.size();

        NodePtr phiNode = interp(phi);
        Var w = omega::freshVar("w", Type::base());
        auto instance = [&](const Term& at, const omega::TermTuple& rec) {
            std::map<std::string, Term> sub{{x, at}};
            for (std::size_t k = 0; k < l; ++k) sub.insert_or_assign(phiNode->x[k].name, Term::app(rec[k], at));
            return omega::substitute(phiNode->sh, sub);
        };
        omega::TermTuple rec;
        if (l > 0) rec = omega::simultaneousRecursor(varTerms(hv), varTerms(qv));
        Term wt = Term::var(w);
        OFormula b = OFormula::conj(instance(wt, rec), OFormula::neg(instance(Term::app(Term::fnConst("S", 1), wt), rec)));
        auto fv = b.freeVars();
        int idx = 0;
        std::vector<Term> others;
        for (std::size_t k = 0; k < fv.size(); ++k) {
            if (fv[k].name == w.name)
                idx = static_cast<int>(k) + 1;
            else
                others.push_back(Term::var(fv[k]));
        }
        Term x3 = Term::var(all.var, Type::base());
        Term bodyX1 = idx == 0 ? omega::numeral(0)
                               : Term::app(Term::apps(e_.argmax(b, e_.decompose(b), idx), others), x3);
        std::vector<Term> p;
        p.push_back(Term::lams(lamVars, bodyX1));
        for (std::size_t k = 0; k < l; ++k) p.push_back(Term::lams(lamVars, Term::app(rec[k], bodyX1)));
        if (p.size() != notN.x.size()) throw InterpError("unexpected shape of the induction axiom");

        std::vector<Term> out = p;
        if (l > 0) {
            omega::TermTuple h0, q;
            for (std::size_t k = 0; k < notN.u.size(); ++k) {
                Term applied = Term::apps(Term::var(notN.u[k]), p);
                (k < l ? h0 : q).push_back(applied);
            }
            auto real = omega::simultaneousRecursor(h0, q);
            for (std::size_t k = 0; k < l; ++k) out.push_back(Term::app(real[k], x3));
        }
        return out;
    }
};

}  // namespace

NodePtr interpret(const Formula& phi, const omega::Embedder& e) { return Interpreter{e}.run(phi); }

SExpr toSExpr(const Node& n) {
    auto vars = [](const std::vector<Var>& vs) {
        std::vector<SExpr> items;
        for (const auto& v : vs) items.push_back(SExpr::makeList({SExpr::makeAtom(v.name), v.type.toSExpr()}));
        return SExpr::makeList(items);
    };
    return SExpr::makeList({SExpr::makeAtom("interpretation"), SExpr::makeList({SExpr::makeAtom("u"), vars(n.u)}),
                        SExpr::makeList({SExpr::makeAtom("x"), vars(n.x)}),
                        SExpr::makeList({SExpr::makeAtom("matrix"), omega::toSExpr(n.sh)})});
}

std::vector<Term> lambdaForm(const StepWitness& w) {
    std::vector<Term> out;
    for (const auto& t : w.x) out.push_back(Term::lams(w.node->u, t));
    return out;
}

WitnessedProof extractWitnesses(const Proof& p, const omega::Embedder& e, ExtractOptions opt) {
    return Extractor(p, e, opt).run();
}

Term extractExistentialWitness(const Proof& p, const WitnessedProof& w) {
    const Formula& goal = p.goal();
    auto ex = asExists(goal);
    if (!ex || !isQuantifierFree(ex->body)) throw InterpError("goal is not of the form ∃x A with A quantifier-free");
    const StepWitness& s = w.at(p.goalIndex());
    if (s.x.size() != 1) throw InterpError("goal interpretation has an unexpected shape");
    return s.x[0];
}

std::string checkWitnessShape(const StepWitness& w, const Formula& conclusion) {
    if (w.x.size() != w.node->x.size()) return "witness count mismatch";
    std::set<std::string> allowed;
    for (const auto& v : w.node->u) allowed.insert(v.name);
    for (const auto& x : hm::freeVars(conclusion)) allowed.insert(x);
    for (std::size_t i = 0; i < w.x.size(); ++i) {
        if (w.x[i].type() != w.node->x[i].type) return "type mismatch at " + w.node->x[i].name;
        for (const auto& v : w.x[i].freeVars())
            if (!allowed.count(v.name)) return "stray free variable " + v.name;
    }
    return {};
}

// ---------------------------------------------------------------- sampling

namespace {

sem::Value defaultValue(const Type& t) {
    if (t.isBase()) return Nat(0);
    Type to = t.to();
    return sem::makeFun([to](const sem::Value&) { return defaultValue(to); });
}

Nat collapse(const sem::Value& v, const Type& t) {
    if (t.isBase()) return sem::asNat(v);
    sem::Value cur = v;
    Type ty = t;
    while (!ty.isBase()) {
        cur = sem::applyValue(cur, defaultValue(ty.from()));
        ty = ty.to();
    }
    return sem::asNat(cur);
}

// Curried functional that records its first argument and returns op(first).
sem::Value family(const std::vector<Type>& args, std::size_t pos, std::optional<Nat> first,
                  std::function<Nat(const Nat&)> op) {
    if (pos == args.size()) return op(first.value_or(Nat(0)));
    Type at = args[pos];
    return sem::makeFun([args, pos, first, op, at](const sem::Value& a) {
        std::optional<Nat> f = first;
        if (!f) f = collapse(a, at);
        return family(args, pos + 1, f, op);
    });
}

}  // namespace

std::vector<sem::Value> sampleFamily(const Type& t, unsigned maxValue) {
    std::vector<sem::Value> out;
    if (t.isBase()) {
        for (unsigned v = 0; v <= maxValue; ++v) out.push_back(Nat(v));
        return out;
    }
    auto args = t.argTypes();
    out.push_back(family(args, 0, std::nullopt, [](const Nat& n) { return n + 1; }));
    out.push_back(family(args, 0, std::nullopt, [](const Nat& n) { return n + 2; }));
    out.push_back(family(args, 0, std::nullopt, [](const Nat&) { return Nat(0); }));
    out.push_back(family(args, 0, std::nullopt, [](const Nat& n) { return n; }));
    return out;
}

SoundnessReport checkSoundness(const Proof& p, const WitnessedProof& w, const Structure& m, SamplerOptions opt,
                               const std::vector<std::size_t>& onlySteps) {
    SoundnessReport rep;
    std::mt19937_64 rng(opt.seed);
    std::vector<std::size_t> which = onlySteps;
    if (which.empty())
        for (std::size_t i = 0; i < w.steps.size(); ++i) which.push_back(i);
    for (std::size_t si : which) {
        const StepWitness& s = w.at(si);
        const Formula& concl = p.steps.at(si).conclusion;
        ++rep.steps;
        std::vector<Var> vars = s.node->u;
        for (const auto& x : hm::freeVars(concl)) vars.push_back(Var{x, Type::base()});
        std::vector<std::vector<sem::Value>> doms;
        double total = 1;
        for (const auto& v : vars) {
            doms.push_back(sampleFamily(v.type, opt.maxValue));
            total *= static_cast<double>(doms.back().size());
        }
        const bool exhaustive = total <= static_cast<double>(opt.exhaustiveLimit);
        const std::size_t count = exhaustive ? static_cast<std::size_t>(total) : opt.samples;
        std::vector<std::size_t> idx(vars.size(), 0);
        for (std::size_t c = 0; c < count; ++c) {
            if (exhaustive) {
                std::size_t r = c;
                for (std::size_t k = 0; k < vars.size(); ++k) {
                    idx[k] = r % doms[k].size();
                    r /= doms[k].size();
                }
            } else {
                for (std::size_t k = 0; k < vars.size(); ++k) idx[k] = rng() % doms[k].size();
            }
            sem::Env env;
            for (std::size_t k = 0; k < vars.size(); ++k) env.insert_or_assign(vars[k].name, doms[k][idx[k]]);
            ++rep.valuations;
            std::string failure;
            try {
                sem::SharedEvaluator witnesses(m, env);
                sem::Env full = env;
                for (std::size_t k = 0; k < s.x.size(); ++k)
                    full.insert_or_assign(s.node->x[k].name, witnesses.eval(s.x[k]));
                if (!sem::SharedEvaluator(m, full).eval(s.node->sh)) failure = "interpreted formula false";
            } catch (const std::exception& ex) {
                failure = std::string("evaluation error: ") + ex.what();
            }
            if (!failure.empty()) {
                std::string d = failure + " at";
                for (std::size_t k = 0; k < vars.size(); ++k) {
                    d += " " + vars[k].name + "=";
                    d += vars[k].type.isBase() ? sem::asNat(doms[k][idx[k]]).str() : "#" + std::to_string(idx[k]);
                }
                rep.failures.push_back({si, d});
                break;
            }
        }
    }
    return rep;
}

}  // namespace hm::interp
