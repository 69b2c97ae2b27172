#include "hm/rewrite.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace hm::rw {

using omega::Spine;
using omega::TKind;
using omega::Type;
using omega::Var;

const char* toString(Rule r) {
    switch (r) {
        case Rule::Beta: return "beta";
        case Rule::SeqPermute: return "seqPermute";
        case Rule::SeqIndex: return "seqIndex";
    }
    return "?";
}

namespace {

std::string child(const std::string& path, std::size_t i) {
    return path == "ε" ? std::to_string(i) : path + "." + std::to_string(i);
}

std::string branchPath(const std::string& path, std::uint64_t n) {
    return (path == "ε" ? std::string() : path + ".") + "[" + std::to_string(n) + "]";
}

std::vector<Var> fvUnion(const Term& a, const std::vector<Term>& more) {
    std::vector<Var> out = a.freeVars();
    for (const auto& t : more)
        for (const auto& v : t.freeVars())
            if (std::none_of(out.begin(), out.end(), [&](const Var& w) { return w.name == v.name; })) out.push_back(v);
    return out;
}

Term rebuild(const Term& head, const std::vector<Term>& args, std::size_t from) {
    Term t = head;
    for (std::size_t i = from; i < args.size(); ++i) t = Term::app(t, args[i]);
    return t;
}

}  // namespace

Term permuteInto(const Term& seq, const std::vector<Term>& args) {
    if (seq.kind() != TKind::Seq) throw RewriteError("permutation target is not a sequence");
    Type elem = seq.seq().elemType;
    for (const auto& a : args) {
        if (elem.isBase() || elem.from() != a.type()) throw RewriteError("ill-typed permutation into " + omega::show(seq));
        elem = elem.to();
    }
    Term base = seq;
    return Term::seq(
        elem, fvUnion(seq, args),
        [base, args](std::uint64_t n, const omega::SeqData&) { return Term::apps(base.branch(n), args); },
        seq.seq().tag + "*");
}

// ---------------------------------------------------------------- stepAt

namespace {

Term contractHead(const Term& t) {
    Spine sp = omega::spine(t);
    if (sp.args.empty()) throw RewriteError("no redex at position: " + omega::show(t));
    if (sp.head.kind() == TKind::Lam) {
        Term body = omega::substitute(sp.head.body(), sp.head.boundVar().name, sp.args[0]);
        return rebuild(body, sp.args, 1);
    }
    if (sp.head.kind() == TKind::Seq) {
        if (auto m = omega::numeralValue(sp.args[0])) return rebuild(sp.head.branch(*m), sp.args, 1);
        if (sp.args.size() >= 2) {
            Term moved = permuteInto(sp.head, {sp.args[1]});
            std::vector<Term> rest{sp.args[0]};
            rest.insert(rest.end(), sp.args.begin() + 2, sp.args.end());
            return rebuild(moved, rest, 0);
        }
    }
    throw RewriteError("no redex at position: " + omega::show(t));
}

Term stepIn(const Term& t, const std::vector<std::size_t>& path, std::size_t at) {
    if (at == path.size()) return contractHead(t);
    Spine sp = omega::spine(t);
    std::size_t i = path[at];
    if (i == 0 || i > sp.args.size()) throw RewriteError("position out of range");
    sp.args[i - 1] = stepIn(sp.args[i - 1], path, at + 1);
    return rebuild(sp.head, sp.args, 0);
}

}  // namespace

Term stepAt(const Term& t, const std::string& position) {
    std::vector<std::size_t> path;
    if (position != "ε" && !position.empty()) {
        std::size_t start = 0;
        while (start <= position.size()) {
            std::size_t dot = position.find('.', start);
            std::string part = position.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            try {
                path.push_back(std::stoul(part));
            } catch (const std::exception&) {
                throw RewriteError("malformed position " + position);
            }
            if (dot == std::string::npos) break;
            start = dot + 1;
        }
    }
    return stepIn(t, path, 0);
}

// ---------------------------------------------------------------- normalization

struct Normalizer::State : std::enable_shared_from_this<State> {
    Budget budget;
    bool record = false;
    RewriteTrace trace;
    std::mutex mu;
    std::unordered_map<const Term::Node*, std::pair<Term, Term>> memo;

    void step(Rule r, const std::string& pos, const Term& before, const Term& after) {
        std::lock_guard<std::mutex> lock(mu);
        if (++trace.stepCount > budget.maxSteps)
            throw BudgetExceeded("rewrite step budget of " + std::to_string(budget.maxSteps) + " exhausted");
        TraceStep s;
        s.index = trace.stepCount;
        s.rule = r;
        s.position = pos;
        if (record) {
            omega::RenderOptions opt{2, 2};
            s.before = omega::show(before, opt);
            s.after = omega::show(after, opt);
        }
        trace.steps.push_back(std::move(s));
    }

    std::optional<Term> cached(const Term& t) {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find(t.id());
        if (it == memo.end()) return std::nullopt;
        return it->second.second;
    }

    Term remember(const Term& t, const Term& nf) {
        std::lock_guard<std::mutex> lock(mu);
        memo.emplace(t.id(), std::make_pair(t, nf));
        memo.emplace(nf.id(), std::make_pair(nf, nf));
        return nf;
    }

    void demand(std::uint64_t depth) {
        std::lock_guard<std::mutex> lock(mu);
        if (depth > budget.maxDemand)
            throw BudgetExceeded("sequence demand depth budget of " + std::to_string(budget.maxDemand) + " exhausted");
        trace.maxDemandDepth = std::max(trace.maxDemandDepth, depth);
    }

    Term lazySeq(const Term& seq, const std::string& path, std::uint64_t depth) {
        std::shared_ptr<State> self = shared_from_this();
        Term base = seq;
        return Term::seq(
            seq.seq().elemType, seq.freeVars(),
            [self, base, path, depth](std::uint64_t n, const omega::SeqData&) {
                self->demand(depth + 1);
                return self->norm(base.branch(n), branchPath(path, n), depth + 1);
            },
            seq.seq().tag);
    }

    Term norm(const Term& t, const std::string& path, std::uint64_t depth) {
        if (auto hit = cached(t)) return *hit;
        switch (t.kind()) {
            case TKind::Var:
            case TKind::FnConst:
            case TKind::CaseConst: return t;
            case TKind::Seq: return remember(t, lazySeq(t, path, depth));
            case TKind::Lam: return remember(t, Term::lam(t.boundVar(), norm(t.body(), path, depth)));
            case TKind::App: break;
        }
        if (omega::numeralValue(t)) return t;
        // Chains f₁(f₂(…(fₙ u))) of unary function constants are walked iteratively.
        std::vector<Term> chain;
        Term inner = t;
        std::string innerPath = path;
        while (inner.kind() == TKind::App && inner.fun().kind() == TKind::FnConst) {
            chain.push_back(inner.fun());
            inner = inner.arg();
            innerPath = child(innerPath, 1);
        }
        if (chain.size() > 1) {
            Term out = norm(inner, innerPath, depth);
            for (auto it = chain.rbegin(); it != chain.rend(); ++it) out = Term::app(*it, out);
            return remember(t, out);
        }
        Term cur = t;
        for (;;) {
            Spine sp = omega::spine(cur);
            if (sp.head.kind() == TKind::Lam && !sp.args.empty()) {
                Term next = rebuild(omega::substitute(sp.head.body(), sp.head.boundVar().name, sp.args[0]), sp.args, 1);
                step(Rule::Beta, path, cur, next);
                cur = next;
                continue;
            }
            if (sp.head.kind() == TKind::Seq && !sp.args.empty()) {
                Term a0 = norm(sp.args[0], child(path, 1), depth);
                if (auto m = omega::numeralValue(a0)) {
                    demand(depth + 1);
                    Term next = rebuild(sp.head.branch(*m), sp.args, 1);
                    step(Rule::SeqIndex, path, cur, next);
                    cur = next;
                    continue;
                }
                if (sp.args.size() > 1) {
                    std::vector<Term> rest(sp.args.begin() + 1, sp.args.end());
                    Term next = Term::app(permuteInto(sp.head, rest), a0);
                    for (std::size_t i = 0; i < rest.size(); ++i) step(Rule::SeqPermute, path, cur, next);
                    cur = next;
                    continue;
                }
                return remember(t, Term::app(norm(sp.head, path, depth), a0));
            }
            std::vector<Term> args;
            for (std::size_t i = 0; i < sp.args.size(); ++i) args.push_back(norm(sp.args[i], child(path, i + 1), depth));
            return remember(t, rebuild(sp.head, args, 0));
        }
    }
};

Normalizer::Normalizer(Budget budget, bool recordSteps) : state_(std::make_shared<State>()) {
    state_->budget = budget;
    state_->record = recordSteps;
}

Term Normalizer::normalize(const Term& t) { return state_->norm(t, "ε", 0); }
const RewriteTrace& Normalizer::trace() const { return state_->trace; }
std::uint64_t Normalizer::steps() const { return state_->trace.stepCount; }

Term normalize(const Term& t, Budget budget) {
    Normalizer n(budget);
    Term nf = n.normalize(t);
    return nf;
}

// ---------------------------------------------------------------- spine analysis

SpineView analyzeSpine(const Term& s) {
    if (!s.type().isBase()) throw RewriteError("spine analysis needs a type-0 term: " + omega::show(s));
    Spine sp = omega::spine(s);
    switch (sp.head.kind()) {
        case TKind::Lam: throw RewriteError("λ-expression on the spine of " + omega::show(s));
        case TKind::Var: throw RewriteError("free variable heading the spine of " + omega::show(s));
        case TKind::Seq:
            if (!omega::isZeroSeq(sp.head)) throw RewriteError("non-zero sequence on the spine of " + omega::show(s));
            if (sp.args.size() != 1) throw RewriteError("sequence head with " + std::to_string(sp.args.size()) + " arguments");
            if (omega::numeralValue(sp.args[0])) throw RewriteError("sequence applied to a numeral is not normal");
            break;
        case TKind::FnConst:
        case TKind::CaseConst:
        case TKind::App: break;
    }
    for (const auto& a : sp.args)
        if (!a.type().isBase()) throw RewriteError("argument of higher type on the spine of " + omega::show(s));
    return SpineView{sp.head, sp.args};
}

namespace {

void walkSpines(const Term& s, std::unordered_set<const Term::Node*>& seen, std::size_t& count) {
    if (!seen.insert(s.id()).second) return;
    SpineView v = analyzeSpine(s);
    ++count;
    for (const auto& a : v.args) walkSpines(a, seen, count);
    if (v.head.kind() == TKind::Seq) {
        std::vector<Term> branches;
        {
            const auto& data = v.head.seq();
            std::lock_guard<std::mutex> lock(data.mu);
            for (const auto& [n, b] : data.memo) branches.push_back(b);
        }
        for (const auto& b : branches) walkSpines(b, seen, count);
    }
}

}  // namespace

std::size_t checkDemandedSpines(const Term& s) {
    std::unordered_set<const Term::Node*> seen;
    std::size_t count = 0;
    walkSpines(s, seen, count);
    return count;
}

}  // namespace hm::rw
