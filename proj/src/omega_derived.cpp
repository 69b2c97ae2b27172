#include "hm/omega.hpp"

#include <algorithm>

namespace hm::omega {

TypeTuple typesOf(const TermTuple& ts) {
    TypeTuple out;
    for (const auto& t : ts) out.push_back(t.type());
    return out;
}

Term applyTuple(const Term& t, const TermTuple& us) { return Term::apps(t, us); }

TermTuple applyTuple(const TermTuple& ts, const TermTuple& us) {
    TermTuple out;
    for (const auto& t : ts) out.push_back(Term::apps(t, us));
    return out;
}

namespace {

std::vector<Var> unionFv(const TermTuple& a, const TermTuple& b) {
    std::vector<Var> out;
    auto add = [&](const Term& t) {
        for (const auto& v : t.freeVars())
            if (std::none_of(out.begin(), out.end(), [&](const Var& w) { return w.name == v.name; })) out.push_back(v);
    };
    for (const auto& t : a) add(t);
    for (const auto& t : b) add(t);
    return out;
}

void checkStep(const Term& a, const Term& b, std::size_t tupleSize) {
    // b : 0 → ρ₁ → … → ρ_l → ρ_i
    Type t = b.type();
    if (t.isBase() || !t.from().isBase()) throw TypeError("recursor step must take a type-0 counter: " + show(b));
    t = t.to();
    for (std::size_t j = 0; j < tupleSize; ++j) {
        if (t.isBase()) throw TypeError("recursor step has too few arguments: " + show(b));
        t = t.to();
    }
    if (t != a.type()) throw TypeError("recursor step result type does not match base " + a.type().str());
}

// Shared branch table of a simultaneous recursor.
struct RecTable {
    TermTuple a, b;
    std::mutex mu;
    std::vector<TermTuple> rows;

    TermTuple row(std::uint64_t n) {
        for (;;) {
            std::uint64_t have;
            TermTuple prev;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (n < rows.size()) return rows[n];
                have = rows.size();
                if (have > 0) prev = rows.back();
            }
            TermTuple next;
            if (have == 0) {
                next = a;
            } else {
                for (const auto& bi : b) {
                    TermTuple args{numeral(have - 1)};
                    args.insert(args.end(), prev.begin(), prev.end());
                    next.push_back(Term::apps(bi, args));
                }
            }
            std::lock_guard<std::mutex> lock(mu);
            if (rows.size() == have) rows.push_back(std::move(next));
        }
    }
};

}  // namespace

Term recursor(const Term& a, const Term& b) {
    checkStep(a, b, 1);
    return Term::seq(
        a.type(), unionFv({a}, {b}),
        [a, b](std::uint64_t n, const SeqData& self) -> Term {
            if (n == 0) return a;
            for (std::uint64_t k = 1; k + 1 < n; ++k) self.at(k);
            return Term::apps(b, {numeral(n - 1), self.at(n - 1)});
        },
        "R");
}

TermTuple simultaneousRecursor(const TermTuple& a, const TermTuple& b) {
    if (a.size() != b.size() || a.empty()) throw TypeError("simultaneous recursor needs matching non-empty tuples");
    for (std::size_t i = 0; i < a.size(); ++i) checkStep(a[i], b[i], a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        Type t = b[i].type().to();
        for (std::size_t j = 0; j < a.size(); ++j, t = t.to())
            if (t.from() != a[j].type()) throw TypeError("simultaneous recursor step argument type mismatch");
    }
    auto table = std::make_shared<RecTable>();
    table->a = a;
    table->b = b;
    std::vector<Var> fv = unionFv(a, b);
    TermTuple out;
    for (std::size_t i = 0; i < a.size(); ++i)
        out.push_back(Term::seq(
            a[i].type(), fv, [table, i](std::uint64_t n, const SeqData&) { return table->row(n)[i]; },
            "R" + std::to_string(i + 1)));
    return out;
}

// ---------------------------------------------------------------- embedding

Term Embedder::embed(const hm::Term& t) const {
    if (t.isVar()) return Term::var(t.name(), Type::base());
    TermTuple args;
    for (const auto& a : t.args()) args.push_back(embed(a));
    const FunSymbol* f = sig_->function(t.name());
    if (f && f->kind == FunKind::PrimitiveRecursive) return applyPR(t.name(), args);
    int arity = f ? f->arity : static_cast<int>(args.size());
    return Term::apps(Term::fnConst(t.name(), arity), args);
}

OFormula Embedder::embed(const Formula& f) const {
    switch (f.kind()) {
        case FKind::Atom: {
            std::vector<Term> args;
            for (const auto& a : f.args()) args.push_back(embed(a));
            return OFormula::atom(f.rel(), std::move(args));
        }
        case FKind::Eq: return OFormula::eq(embed(f.args()[0]), embed(f.args()[1]));
        case FKind::Not: return OFormula::neg(embed(f.sub()));
        case FKind::Or: return OFormula::disj(embed(f.left()), embed(f.right()));
        case FKind::Forall: return OFormula::forall(f.var(), embed(f.body()));
    }
    throw TypeError("unknown formula kind");
}

Term Embedder::applyPR(const std::string& name, const TermTuple& args) const {
    const PREntry* e = roster_->find(name);
    if (!e) throw TypeError("unknown primitive recursive symbol " + name);
    if (static_cast<int>(args.size()) != e->derivation->arity)
        throw TypeError(name + " expects " + std::to_string(e->derivation->arity) + " arguments");
    return applyDerivation(*e->derivation, args);
}

Term Embedder::applyDerivation(const PRDerivation& d, const TermTuple& args) const {
    using K = PRDerivation::Kind;
    switch (d.kind) {
        case K::Zero: return numeral(0);
        case K::Succ: return Term::app(Term::fnConst(kSucc, 1), args.at(0));
        case K::Proj: return args.at(static_cast<std::size_t>(d.index - 1));
        case K::Named: return applyPR(d.name, args);
        case K::Comp: {
            TermTuple inner;
            for (std::size_t j = 1; j < d.parts.size(); ++j) inner.push_back(applyDerivation(*d.parts[j], args));
            return applyDerivation(*d.parts[0], inner);
        }
        case K::PrimRec: {
            TermTuple xs(args.begin(), args.end() - 1);
            Term base = applyDerivation(*d.parts[0], xs);
            Var v = freshVar("v", Type::base());
            Var w = freshVar("w", Type::base());
            TermTuple stepArgs = xs;
            stepArgs.push_back(Term::var(v));
            stepArgs.push_back(Term::var(w));
            Term step = Term::lams({v, w}, applyDerivation(*d.parts[1], stepArgs));
            return Term::app(recursor(base, step), args.back());
        }
    }
    throw TypeError("unknown derivation kind");
}

Term Embedder::prTerm(const std::string& name) const {
    const PREntry* e = roster_->find(name);
    if (!e) throw TypeError("unknown primitive recursive symbol " + name);
    std::vector<Var> xs;
    TermTuple args;
    for (int i = 0; i < e->derivation->arity; ++i) {
        xs.push_back(freshVar("x", Type::base()));
        args.push_back(Term::var(xs.back()));
    }
    return Term::lams(xs, applyPR(name, args));
}

Term Embedder::characteristic(const Formula& phi) const {
    if (auto b = hm::asForallLe(phi)) {
        Term chi = characteristic(b->body);
        Var v = freshVar("v", Type::base());
        Var w = freshVar("w", Type::base());
        Term sv = Term::app(Term::fnConst(kSucc, 1), Term::var(v));
        Term step = Term::lams({v, w}, applyPR("max", {Term::var(w), substitute(chi, b->var, sv)}));
        return Term::app(recursor(substitute(chi, b->var, numeral(0)), step), embed(b->bound));
    }
    switch (phi.kind()) {
        case FKind::Atom:
            if (phi.rel() != kLess) throw TypeError("characteristic term needs an arithmetic formula: " + hm::show(phi));
            return applyPR("ltchar", {embed(phi.args()[0]), embed(phi.args()[1])});
        case FKind::Eq: return applyPR("eqchar", {embed(phi.args()[0]), embed(phi.args()[1])});
        case FKind::Not: return applyPR("notchar", {characteristic(phi.sub())});
        case FKind::Or: return applyPR("orchar", {characteristic(phi.left()), characteristic(phi.right())});
        case FKind::Forall: break;
    }
    throw TypeError("characteristic term needs a quantifier-free formula: " + hm::show(phi));
}

Term Embedder::caseTerm(const Formula& phi) const {
    if (!hm::isQuantifierFree(phi)) throw TypeError("case term over a formula that is not quantifier-free: " + hm::show(phi));
    std::vector<Var> xs;
    for (const auto& x : hm::freeVars(phi)) xs.push_back(Var{x, Type::base()});
    Var b1 = freshVar("b", Type::base());
    Var b2 = freshVar("b", Type::base());
    xs.push_back(b1);
    xs.push_back(b2);
    if (isArithmeticOnly(phi, *sig_))
        return Term::lams(xs, applyPR("cond", {characteristic(phi), Term::var(b1), Term::var(b2)}));
    if (auto abs = abstractExtraFunctions(phi, *sig_)) {
        std::map<std::string, Term> sub;
        for (std::size_t i = 0; i < abs->vars.size(); ++i) sub.emplace(abs->vars[i], embed(abs->replacements[i]));
        Term chi = substitute(characteristic(abs->phi), sub);
        return Term::lams(xs, applyPR("cond", {chi, Term::var(b1), Term::var(b2)}));
    }
    return Term::caseConst(phi);
}

Term Embedder::caseOnFormula(const OFormula& b, const Decomposition& d) const {
    auto xs = hm::freeVars(d.phi);
    if (xs.size() != d.terms.size()) throw TypeError("decomposition term count does not match the free variables");
    std::map<std::string, Term> sub;
    for (std::size_t i = 0; i < xs.size(); ++i) sub.emplace(xs[i], d.terms[i]);
    if (!equal(substitute(embed(d.phi), sub), b, 8))
        throw TypeError("decomposition does not reproduce the formula " + show(b));
    return Term::lams(b.freeVars(), Term::apps(caseTerm(d.phi), d.terms));
}

namespace {

struct Decomposer {
    const Signature& sig;
    std::vector<std::pair<std::string, Term>> abstracted;

    hm::Term term(const Term& t, const std::vector<std::string>& bound) {
        if (auto s = toSigTerm(t)) {
            bool sigOk = true;
            std::function<void(const hm::Term&)> check = [&](const hm::Term& u) {
                if (!u.isVar() && !sig.function(u.name())) sigOk = false;
                for (const auto& a : u.args()) check(a);
            };
            check(*s);
            if (sigOk) return *s;
        }
        for (const auto& x : bound)
            if (t.hasFree(x)) throw TypeError("cannot abstract a subterm containing the bound variable " + x + ": " + show(t));
        for (const auto& [name, u] : abstracted)
            if (equal(u, t)) return hm::Term::var(name);
        std::string name = freshName("u");
        abstracted.emplace_back(name, t);
        return hm::Term::var(name);
    }

    Formula formula(const OFormula& f, std::vector<std::string>& bound) {
        switch (f.kind()) {
            case OKind::Atom: {
                std::vector<hm::Term> args;
                for (const auto& a : f.args()) args.push_back(term(a, bound));
                return Formula::atom(f.rel(), std::move(args));
            }
            case OKind::Eq: return Formula::eq(term(f.args()[0], bound), term(f.args()[1], bound));
            case OKind::Not: return Formula::neg(formula(f.sub(), bound));
            case OKind::Or: {
                Formula l = formula(f.left(), bound);
                return Formula::disj(l, formula(f.right(), bound));
            }
            case OKind::Forall: {
                bound.push_back(f.var());
                Formula body = formula(f.body(), bound);
                bound.pop_back();
                return Formula::forall(f.var(), body);
            }
        }
        throw TypeError("unknown ω-formula kind");
    }
};

}  // namespace

Decomposition Embedder::decompose(const OFormula& b) const {
    if (!isQuantifierFree(b)) throw TypeError("decomposition of a formula that is not quantifier-free: " + show(b));
    Decomposer dec{*sig_, {}};
    std::vector<std::string> bound;
    Decomposition d{dec.formula(b, bound), {}};
    for (const auto& x : hm::freeVars(d.phi)) {
        auto it = std::find_if(dec.abstracted.begin(), dec.abstracted.end(), [&](const auto& p) { return p.first == x; });
        d.terms.push_back(it != dec.abstracted.end() ? it->second : Term::var(x, Type::base()));
    }
    return d;
}

namespace {

// R_{0, λvw. c (z_i := v) v w} abstracted over the other variables.
Term argmaxOver(const std::vector<Var>& zs, const Term& cb, int i) {
    if (i < 1 || i > static_cast<int>(zs.size())) throw TypeError("argmax index out of range");
    const Var& zi = zs[static_cast<std::size_t>(i - 1)];
    if (!zi.type.isBase()) throw TypeError("argmax over a variable of higher type: " + zi.name);
    Var v = freshVar("v", Type::base());
    Var w = freshVar("w", Type::base());
    TermTuple args;
    std::vector<Var> outer;
    for (std::size_t j = 0; j < zs.size(); ++j) {
        if (static_cast<int>(j) == i - 1) {
            args.push_back(Term::var(v));
        } else {
            args.push_back(Term::var(zs[j]));
            outer.push_back(zs[j]);
        }
    }
    args.push_back(Term::var(v));
    args.push_back(Term::var(w));
    Term step = Term::lams({v, w}, Term::apps(cb, args));
    return Term::lams(outer, recursor(numeral(0), step));
}

}  // namespace

Term Embedder::argmax(const OFormula& b, const Decomposition& d, int i) const {
    return argmaxOver(b.freeVars(), caseOnFormula(b, d), i);
}

Term Embedder::argmax(const Formula& phi, int i) const {
    std::vector<Var> zs;
    for (const auto& x : hm::freeVars(phi)) zs.push_back(Var{x, Type::base()});
    return argmaxOver(zs, caseTerm(phi), i);
}

// ---------------------------------------------------------------- abstraction

namespace {

struct Abstractor {
    const Signature& sig;
    std::vector<std::string> bound;
    std::vector<std::pair<std::string, hm::Term>> found;
    bool ok = true;

    bool isExtra(const std::string& f) const {
        const FunSymbol* s = sig.function(f);
        return !s || s->kind == FunKind::Extra;
    }

    hm::Term term(const hm::Term& t) {
        if (t.isVar()) return t;
        if (isExtra(t.name())) {
            for (const auto& x : bound)
                if (occurs(x, t)) ok = false;
            for (const auto& [name, u] : found)
                if (u == t) return hm::Term::var(name);
            std::string name = freshName("y");
            found.emplace_back(name, t);
            return hm::Term::var(name);
        }
        std::vector<hm::Term> args;
        for (const auto& a : t.args()) args.push_back(term(a));
        return hm::Term::app(t.name(), std::move(args));
    }

    Formula formula(const Formula& f) {
        switch (f.kind()) {
            case FKind::Atom: {
                if (!sig.isArithmeticRelation(f.rel())) ok = false;
                std::vector<hm::Term> args;
                for (const auto& a : f.args()) args.push_back(term(a));
                return Formula::atom(f.rel(), std::move(args));
            }
            case FKind::Eq: return Formula::eq(term(f.args()[0]), term(f.args()[1]));
            case FKind::Not: return Formula::neg(formula(f.sub()));
            case FKind::Or: {
                Formula l = formula(f.left());
                return Formula::disj(l, formula(f.right()));
            }
            case FKind::Forall: {
                bound.push_back(f.var());
                Formula body = formula(f.body());
                bound.pop_back();
                return Formula::forall(f.var(), body);
            }
        }
        return f;
    }
};

}  // namespace

std::optional<ArithmeticAbstraction> abstractExtraFunctions(const Formula& phi, const Signature& sig) {
    Abstractor a{sig, {}, {}, true};
    Formula psi = a.formula(phi);
    if (!a.ok) return std::nullopt;
    ArithmeticAbstraction out{psi, hm::freeVars(psi), {}};
    for (const auto& x : out.vars) {
        auto it = std::find_if(a.found.begin(), a.found.end(), [&](const auto& p) { return p.first == x; });
        out.replacements.push_back(it != a.found.end() ? it->second : hm::Term::var(x));
    }
    return out;
}

}  // namespace hm::omega
