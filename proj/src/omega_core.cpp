#include "hm/omega.hpp"

#include <algorithm>
#include <atomic>

namespace hm::omega {

// ---------------------------------------------------------------- types

Type Type::base() { return Type(); }

Type Type::arrow(Type from, Type to) {
    Type t;
    t.node_ = std::make_shared<Node>(Node{std::move(from), std::move(to)});
    return t;
}

Type Type::firstOrder(int n) {
    Type t = base();
    for (int i = 0; i < n; ++i) t = arrow(base(), t);
    return t;
}

const Type& Type::from() const {
    if (!node_) throw TypeError("type 0 has no domain");
    return node_->from;
}

const Type& Type::to() const {
    if (!node_) throw TypeError("type 0 has no codomain");
    return node_->to;
}

int Type::arity() const {
    int n = 0;
    for (const Type* t = this; !t->isBase(); t = &t->to()) ++n;
    return n;
}

std::vector<Type> Type::argTypes() const {
    std::vector<Type> out;
    for (const Type* t = this; !t->isBase(); t = &t->to()) out.push_back(t->from());
    return out;
}

bool operator==(const Type& a, const Type& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    return a.node_->from == b.node_->from && a.node_->to == b.node_->to;
}

SExpr Type::toSExpr() const {
    if (isBase()) return SExpr::makeAtom("0");
    return SExpr::makeList({SExpr::makeAtom("->"), from().toSExpr(), to().toSExpr()});
}

std::string Type::str() const { return toSExpr().str(); }

Type Type::parse(const SExpr& s) {
    if (s.isAtomNamed("0")) return base();
    if (s.isForm("->") && s.size() >= 3) {
        Type t = parse(s.items.back());
        for (std::size_t i = s.size() - 2; i >= 1; --i) t = arrow(parse(s[i]), t);
        return t;
    }
    throw ParseError("malformed type " + s.str());
}

Type arrow(const TypeTuple& from, const Type& to) {
    Type t = to;
    for (auto it = from.rbegin(); it != from.rend(); ++it) t = Type::arrow(*it, t);
    return t;
}

TypeTuple arrow(const TypeTuple& from, const TypeTuple& to) {
    TypeTuple out;
    for (const auto& t : to) out.push_back(arrow(from, t));
    return out;
}

TypeTuple zeros(int n) { return TypeTuple(static_cast<std::size_t>(n), Type::base()); }

namespace {
std::atomic<std::uint64_t> freshCounter{0};
}

std::string freshName(const std::string& base) {
    std::string stem = base.substr(0, base.find('_'));
    return stem + "_" + std::to_string(++freshCounter);
}

Var freshVar(const std::string& base, Type t) { return Var{freshName(base), std::move(t)}; }

// ---------------------------------------------------------------- terms

namespace {

void mergeVars(std::vector<Var>& into, const std::vector<Var>& more) {
    for (const auto& v : more)
        if (std::none_of(into.begin(), into.end(), [&](const Var& w) { return w.name == v.name; })) into.push_back(v);
}

}  // namespace

Term Term::var(const Var& v) {
    auto n = std::make_shared<Node>();
    n->kind = TKind::Var;
    n->type = v.type;
    n->name = v.name;
    n->fv = {v};
    return Term(std::move(n));
}

Term Term::fnConst(std::string name, int arity) {
    auto n = std::make_shared<Node>();
    n->kind = TKind::FnConst;
    n->type = Type::firstOrder(arity);
    n->name = std::move(name);
    n->arity = arity;
    return Term(std::move(n));
}

Term Term::caseConst(Formula phi) {
    if (!hm::isQuantifierFree(phi)) throw TypeError("case constant over a formula that is not quantifier-free: " + hm::show(phi));
    auto n = std::make_shared<Node>();
    n->kind = TKind::CaseConst;
    n->arity = static_cast<int>(hm::freeVars(phi).size()) + 2;
    n->type = Type::firstOrder(n->arity);
    n->name = "c";
    n->formula = std::move(phi);
    return Term(std::move(n));
}

Term Term::lam(const Var& x, Term body) {
    auto n = std::make_shared<Node>();
    n->kind = TKind::Lam;
    n->type = Type::arrow(x.type, body.type());
    n->bound = x;
    for (const auto& v : body.freeVars())
        if (v.name != x.name) n->fv.push_back(v);
    n->kids = {std::move(body)};
    return Term(std::move(n));
}

Term Term::app(Term f, Term a) {
    const Type& ft = f.type();
    if (ft.isBase()) throw TypeError("cannot apply a term of type 0: " + show(f));
    if (ft.from() != a.type())
        throw TypeError("argument type mismatch: expected " + ft.from().str() + ", got " + a.type().str() + " in (" +
                        show(f) + " " + show(a) + ")");
    auto n = std::make_shared<Node>();
    n->kind = TKind::App;
    n->type = ft.to();
    n->fv = f.freeVars();
    mergeVars(n->fv, a.freeVars());
    n->kids = {std::move(f), std::move(a)};
    return Term(std::move(n));
}

Term Term::apps(Term f, const std::vector<Term>& args) {
    for (const auto& a : args) f = app(std::move(f), a);
    return f;
}

Term Term::lams(const std::vector<Var>& xs, Term body) {
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = lam(*it, std::move(body));
    return body;
}

Term Term::seq(Type elemType, std::vector<Var> freeVars, Generator generator, std::string tag) {
    auto n = std::make_shared<Node>();
    n->kind = TKind::Seq;
    n->type = Type::arrow(Type::base(), elemType);
    n->fv = std::move(freeVars);
    n->seq = std::make_shared<SeqData>();
    n->seq->elemType = std::move(elemType);
    n->seq->generator = std::move(generator);
    n->seq->tag = std::move(tag);
    return Term(std::move(n));
}

TKind Term::kind() const { return node_->kind; }
const Type& Term::type() const { return node_->type; }
const std::vector<Var>& Term::freeVars() const { return node_->fv; }

bool Term::hasFree(const std::string& name) const {
    return std::any_of(node_->fv.begin(), node_->fv.end(), [&](const Var& v) { return v.name == name; });
}

const std::string& Term::name() const { return node_->name; }
const Var& Term::boundVar() const { return node_->bound; }
const Term& Term::body() const { return node_->kids.at(0); }
const Term& Term::fun() const { return node_->kids.at(0); }
const Term& Term::arg() const { return node_->kids.at(1); }
int Term::constArity() const { return node_->arity; }
const Formula& Term::caseFormula() const { return *node_->formula; }
const SeqData& Term::seq() const { return *node_->seq; }
Term Term::branch(std::uint64_t n) const { return node_->seq->at(n); }

Term SeqData::at(std::uint64_t n) const {
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find(n);
        if (it != memo.end()) return it->second;
    }
    Term t = generator(n, *this);
    if (t.type() != elemType)
        throw TypeError("sequence branch " + std::to_string(n) + " has type " + t.type().str() + ", expected " +
                        elemType.str());
    std::lock_guard<std::mutex> lock(mu);
    return memo.emplace(n, std::move(t)).first->second;
}

std::size_t SeqData::demanded() const {
    std::lock_guard<std::mutex> lock(mu);
    return memo.size();
}

bool isZeroSeq(const Term& t) { return t.kind() == TKind::Seq && t.seq().elemType.isBase(); }

std::optional<std::uint64_t> numeralValue(const Term& t) {
    std::uint64_t n = 0;
    const Term* p = &t;
    while (p->kind() == TKind::App && p->fun().kind() == TKind::FnConst && p->fun().name() == kSucc) {
        ++n;
        p = &p->arg();
    }
    if (p->kind() == TKind::FnConst && p->name() == kZero) return n;
    return std::nullopt;
}

Term numeral(std::uint64_t n) {
    static const Term zero = Term::fnConst(kZero, 0);
    static const Term succ = Term::fnConst(kSucc, 1);
    Term t = zero;
    for (std::uint64_t i = 0; i < n; ++i) t = Term::app(succ, t);
    return t;
}

Term zeroOf(const Type& t) {
    if (t.isBase()) return numeral(0);
    return Term::lam(freshVar("z", t.from()), zeroOf(t.to()));
}

Spine spine(const Term& t) {
    std::vector<Term> args;
    const Term* p = &t;
    while (p->kind() == TKind::App) {
        args.push_back(p->arg());
        p = &p->fun();
    }
    std::reverse(args.begin(), args.end());
    return Spine{*p, std::move(args)};
}

// ---------------------------------------------------------------- substitution

namespace {

class Substituter {
public:
    explicit Substituter(std::map<std::string, Term> sub, int reduceBelow = 0)
        : sub_(std::move(sub)), reduceBelow_(reduceBelow) {}

    bool touches(const std::vector<Var>& fv) const {
        return std::any_of(fv.begin(), fv.end(), [&](const Var& v) { return sub_.count(v.name) > 0; });
    }

    Term run(const Term& t) {
        if (!touches(t.freeVars())) return t;
        auto hit = memo_.find(t.id());
        if (hit != memo_.end()) return hit->second;
        Term out = compute(t);
        memo_.emplace(t.id(), out);
        return out;
    }

private:
    bool capturesUnder(const std::string& x) {
        auto hit = captures_.find(x);
        if (hit != captures_.end()) return hit->second;
        bool c = std::any_of(sub_.begin(), sub_.end(), [&](const auto& kv) { return kv.second.hasFree(x); });
        captures_.emplace(x, c);
        return c;
    }

    Term compute(const Term& t) {
        switch (t.kind()) {
            case TKind::Var: {
                const Term& s = sub_.at(t.name());
                if (s.type() != t.type())
                    throw TypeError("substitution of a " + s.type().str() + " term for variable " + t.name() + " of type " +
                                    t.type().str());
                return s;
            }
            case TKind::App: {
                Term f = run(t.fun());
                Term a = run(t.arg());
                if (reduceBelow_ > 0 && f.kind() == TKind::Lam && smallerThan(f.body(), reduceBelow_))
                    return Substituter({{f.boundVar().name, a}}, reduceBelow_).run(f.body());
                return Term::app(f, a);
            }
            case TKind::Lam: {
                const Var& x = t.boundVar();
                if (!sub_.count(x.name) && !capturesUnder(x.name)) return Term::lam(x, run(t.body()));
                std::map<std::string, Term> inner;
                bool capture = false;
                for (const auto& v : t.body().freeVars()) {
                    if (v.name == x.name) continue;
                    auto it = sub_.find(v.name);
                    if (it == sub_.end()) continue;
                    inner.emplace(v.name, it->second);
                    if (it->second.hasFree(x.name)) capture = true;
                }
                if (inner.empty()) return t;
                Var bound = x;
                if (capture) {
                    bound = freshVar(x.name, x.type);
                    inner.emplace(x.name, Term::var(bound));
                }
                return Term::lam(bound, Substituter(std::move(inner), reduceBelow_).run(t.body()));
            }
            case TKind::Seq: {
                std::map<std::string, Term> restricted;
                std::vector<Var> fv;
                for (const auto& v : t.freeVars()) {
                    auto it = sub_.find(v.name);
                    if (it == sub_.end()) {
                        mergeVars(fv, {v});
                    } else {
                        restricted.emplace(v.name, it->second);
                        mergeVars(fv, it->second.freeVars());
                    }
                }
                Term base = t;
                return Term::seq(
                    t.seq().elemType, std::move(fv),
                    [base, restricted](std::uint64_t n, const SeqData&) {
                        return substitute(base.branch(n), restricted);
                    },
                    t.seq().tag);
            }
            case TKind::FnConst:
            case TKind::CaseConst: return t;
        }
        return t;
    }

    static bool fits(const Term& t, int& budget) {
        if (--budget < 0) return false;
        switch (t.kind()) {
            case TKind::App: return fits(t.fun(), budget) && fits(t.arg(), budget);
            case TKind::Lam: return fits(t.body(), budget);
            case TKind::Seq: return false;
            default: return true;
        }
    }
    static bool smallerThan(const Term& t, int limit) { return fits(t, limit); }

    std::map<std::string, Term> sub_;
    int reduceBelow_ = 0;
    std::unordered_map<const Term::Node*, Term> memo_;
    std::map<std::string, bool> captures_;
};

}  // namespace

Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
    if (sub.empty()) return t;
    return Substituter(sub).run(t);
}

Term substitute(const Term& t, const std::string& x, const Term& s) { return substitute(t, {{x, s}}); }

std::vector<Term> substitute(const std::vector<Term>& ts, const std::map<std::string, Term>& sub, int reduceBelow) {
    if (sub.empty()) return ts;
    Substituter s(sub, reduceBelow);
    std::vector<Term> out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back(s.run(t));
    return out;
}

bool equal(const Term& a, const Term& b, unsigned seqPrefix) {
    if (a.id() == b.id()) return true;
    if (a.kind() != b.kind() || a.type() != b.type()) return false;
    switch (a.kind()) {
        case TKind::Var: return a.name() == b.name();
        case TKind::FnConst: return a.name() == b.name() && a.constArity() == b.constArity();
        case TKind::CaseConst: return a.caseFormula() == b.caseFormula();
        case TKind::App: return equal(a.fun(), b.fun(), seqPrefix) && equal(a.arg(), b.arg(), seqPrefix);
        case TKind::Lam: {
            if (a.boundVar().type != b.boundVar().type) return false;
            if (a.boundVar().name == b.boundVar().name) return equal(a.body(), b.body(), seqPrefix);
            return equal(a.body(), substitute(b.body(), b.boundVar().name, Term::var(a.boundVar())), seqPrefix);
        }
        case TKind::Seq: {
            if (&a.seq() == &b.seq()) return true;
            if (seqPrefix == 0 || a.seq().elemType != b.seq().elemType) return false;
            for (unsigned i = 0; i < seqPrefix; ++i)
                if (!equal(a.branch(i), b.branch(i), seqPrefix)) return false;
            return true;
        }
    }
    return false;
}

// ---------------------------------------------------------------- ω-formulas

namespace {
std::shared_ptr<OFormula::Node> mkO(OKind k) {
    auto n = std::make_shared<OFormula::Node>();
    n->kind = k;
    return n;
}

void requireBase(const Term& t) {
    if (!t.type().isBase()) throw TypeError("atomic ω-formulas take type-0 arguments, got " + t.type().str());
}
}  // namespace

OFormula OFormula::atom(std::string rel, std::vector<Term> args) {
    for (const auto& a : args) requireBase(a);
    auto n = mkO(OKind::Atom);
    n->name = std::move(rel);
    n->args = std::move(args);
    return OFormula(std::move(n));
}

OFormula OFormula::eq(Term a, Term b) {
    requireBase(a);
    requireBase(b);
    auto n = mkO(OKind::Eq);
    n->args = {std::move(a), std::move(b)};
    return OFormula(std::move(n));
}

OFormula OFormula::neg(OFormula f) {
    auto n = mkO(OKind::Not);
    n->subs = {std::move(f)};
    return OFormula(std::move(n));
}

OFormula OFormula::disj(OFormula a, OFormula b) {
    auto n = mkO(OKind::Or);
    n->subs = {std::move(a), std::move(b)};
    return OFormula(std::move(n));
}

OFormula OFormula::forall(std::string var, OFormula body) {
    auto n = mkO(OKind::Forall);
    n->name = std::move(var);
    n->subs = {std::move(body)};
    return OFormula(std::move(n));
}

OFormula OFormula::conj(OFormula a, OFormula b) { return neg(disj(neg(std::move(a)), neg(std::move(b)))); }

OKind OFormula::kind() const { return node_->kind; }
const std::string& OFormula::rel() const { return node_->name; }
const std::vector<Term>& OFormula::args() const { return node_->args; }
const OFormula& OFormula::sub() const { return node_->subs.at(0); }
const OFormula& OFormula::left() const { return node_->subs.at(0); }
const OFormula& OFormula::right() const { return node_->subs.at(1); }
const std::string& OFormula::var() const { return node_->name; }
const OFormula& OFormula::body() const { return node_->subs.at(0); }

std::vector<Var> OFormula::freeVars() const {
    std::vector<Var> out;
    switch (kind()) {
        case OKind::Atom:
        case OKind::Eq:
            for (const auto& a : args()) mergeVars(out, a.freeVars());
            break;
        case OKind::Not: out = sub().freeVars(); break;
        case OKind::Or:
            out = left().freeVars();
            mergeVars(out, right().freeVars());
            break;
        case OKind::Forall:
            for (const auto& v : body().freeVars())
                if (v.name != var()) out.push_back(v);
            break;
    }
    return out;
}

std::optional<OBoundedView> asForallLe(const OFormula& f) {
    if (f.kind() != OKind::Forall) return std::nullopt;
    const auto& b = f.body();
    if (b.kind() != OKind::Or || b.left().kind() != OKind::Not) return std::nullopt;
    const auto& le = b.left().sub();
    if (le.kind() != OKind::Or) return std::nullopt;
    const auto& lt = le.left();
    const auto& eq = le.right();
    if (lt.kind() != OKind::Atom || lt.rel() != kLess || eq.kind() != OKind::Eq) return std::nullopt;
    const Term& x = lt.args()[0];
    if (x.kind() != TKind::Var || x.name() != f.var()) return std::nullopt;
    if (!equal(eq.args()[0], x) || !equal(eq.args()[1], lt.args()[1])) return std::nullopt;
    if (lt.args()[1].hasFree(f.var())) return std::nullopt;
    return OBoundedView{f.var(), lt.args()[1], b.right()};
}

bool isQuantifierFree(const OFormula& f) {
    switch (f.kind()) {
        case OKind::Atom:
        case OKind::Eq: return true;
        case OKind::Not: return isQuantifierFree(f.sub());
        case OKind::Or: return isQuantifierFree(f.left()) && isQuantifierFree(f.right());
        case OKind::Forall: {
            auto b = asForallLe(f);
            return b && isQuantifierFree(b->body);
        }
    }
    return false;
}

OFormula substitute(const OFormula& f, const std::map<std::string, Term>& sub) {
    if (sub.empty()) return f;
    switch (f.kind()) {
        case OKind::Atom: {
            std::vector<Term> args;
            for (const auto& a : f.args()) args.push_back(substitute(a, sub));
            return OFormula::atom(f.rel(), std::move(args));
        }
        case OKind::Eq: return OFormula::eq(substitute(f.args()[0], sub), substitute(f.args()[1], sub));
        case OKind::Not: return OFormula::neg(substitute(f.sub(), sub));
        case OKind::Or: return OFormula::disj(substitute(f.left(), sub), substitute(f.right(), sub));
        case OKind::Forall: {
            std::map<std::string, Term> inner = sub;
            inner.erase(f.var());
            bool capture = std::any_of(inner.begin(), inner.end(), [&](const auto& kv) { return kv.second.hasFree(f.var()); });
            if (!capture) return OFormula::forall(f.var(), substitute(f.body(), inner));
            Var fresh = freshVar(f.var(), Type::base());
            inner.insert_or_assign(f.var(), Term::var(fresh));
            return OFormula::forall(fresh.name, substitute(f.body(), inner));
        }
    }
    return f;
}

bool equal(const OFormula& a, const OFormula& b, unsigned seqPrefix) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case OKind::Atom:
        case OKind::Eq:
            if (a.kind() == OKind::Atom && a.rel() != b.rel()) return false;
            if (a.args().size() != b.args().size()) return false;
            for (std::size_t i = 0; i < a.args().size(); ++i)
                if (!equal(a.args()[i], b.args()[i], seqPrefix)) return false;
            return true;
        case OKind::Not: return equal(a.sub(), b.sub(), seqPrefix);
        case OKind::Or: return equal(a.left(), b.left(), seqPrefix) && equal(a.right(), b.right(), seqPrefix);
        case OKind::Forall:
            if (a.var() == b.var()) return equal(a.body(), b.body(), seqPrefix);
            return equal(a.body(), substitute(b.body(), {{b.var(), Term::var(a.var(), Type::base())}}), seqPrefix);
    }
    return false;
}

// ---------------------------------------------------------------- printing

namespace {

SExpr render(const Term& t, const RenderOptions& opt, unsigned depth) {
    auto A = [](const std::string& s) { return SExpr::makeAtom(s); };
    switch (t.kind()) {
        case TKind::Var:
        case TKind::FnConst: return A(t.name());
        case TKind::CaseConst: return SExpr::makeList({A("case"), hm::toSExpr(t.caseFormula())});
        case TKind::Lam:
            return SExpr::makeList({A("lambda"), SExpr::makeList({A(t.boundVar().name), t.boundVar().type.toSExpr()}),
                                    render(t.body(), opt, depth)});
        case TKind::App: {
            Spine sp = spine(t);
            std::vector<SExpr> items{render(sp.head, opt, depth)};
            for (const auto& a : sp.args) items.push_back(render(a, opt, depth));
            return SExpr::makeList(std::move(items));
        }
        case TKind::Seq: {
            std::vector<SExpr> items{A("seq"), t.seq().elemType.toSExpr()};
            if (depth < opt.seqDepth) {
                std::vector<SExpr> shown;
                for (unsigned i = 0; i < opt.seqPrefix; ++i) shown.push_back(render(t.branch(i), opt, depth + 1));
                items.push_back(A(":shown"));
                items.push_back(SExpr::makeList(std::move(shown)));
            }
            items.push_back(A("..."));
            return SExpr::makeList(std::move(items));
        }
    }
    return A("?");
}

SExpr renderF(const OFormula& f, const RenderOptions& opt) {
    auto A = [](const std::string& s) { return SExpr::makeAtom(s); };
    if (auto b = asForallLe(f))
        return SExpr::makeList({A("forall<="), A(b->var), render(b->bound, opt, 0), renderF(b->body, opt)});
    switch (f.kind()) {
        case OKind::Atom:
        case OKind::Eq: {
            std::vector<SExpr> items{A(f.kind() == OKind::Eq ? "=" : f.rel())};
            for (const auto& a : f.args()) items.push_back(render(a, opt, 0));
            return SExpr::makeList(std::move(items));
        }
        case OKind::Not: return SExpr::makeList({A("not"), renderF(f.sub(), opt)});
        case OKind::Or: return SExpr::makeList({A("or"), renderF(f.left(), opt), renderF(f.right(), opt)});
        case OKind::Forall: return SExpr::makeList({A("forall"), A(f.var()), renderF(f.body(), opt)});
    }
    return A("?");
}

}  // namespace

SExpr toSExpr(const Term& t, const RenderOptions& opt) { return render(t, opt, 0); }
SExpr toSExpr(const OFormula& f, const RenderOptions& opt) { return renderF(f, opt); }
std::string show(const Term& t, const RenderOptions& opt) { return render(t, opt, 0).str(); }
std::string show(const OFormula& f, const RenderOptions& opt) { return renderF(f, opt).str(); }

std::optional<hm::Term> toSigTerm(const Term& t) {
    if (t.kind() == TKind::Var) {
        if (!t.type().isBase()) return std::nullopt;
        return hm::Term::var(t.name());
    }
    Spine sp = spine(t);
    if (sp.head.kind() != TKind::FnConst || static_cast<int>(sp.args.size()) != sp.head.constArity()) return std::nullopt;
    std::vector<hm::Term> args;
    for (const auto& a : sp.args) {
        auto s = toSigTerm(a);
        if (!s) return std::nullopt;
        args.push_back(std::move(*s));
    }
    return hm::Term::app(sp.head.name(), std::move(args));
}

}  // namespace hm::omega
