#include "hm/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace hm {

// ---------------------------------------------------------------- signature

Signature Signature::arithmetic() {
    Signature sig;
    sig.addFunction({kZero, 0, FunKind::ArithmeticBase});
    sig.addFunction({kSucc, 1, FunKind::ArithmeticBase});
    sig.addRelation({kLess, 2, RelKind::LessThan});
    return sig;
}

bool Signature::taken(const std::string& name) const {
    return function(name) != nullptr || relation(name) != nullptr || name == "=";
}

void Signature::addFunction(FunSymbol f) {
    if (taken(f.name)) throw SignatureError("symbol '" + f.name + "' declared twice");
    if (f.arity < 0) throw SignatureError("negative arity for '" + f.name + "'");
    funs_.push_back(std::move(f));
}

void Signature::addRelation(RelSymbol r) {
    if (taken(r.name)) throw SignatureError("symbol '" + r.name + "' declared twice");
    rels_.push_back(std::move(r));
}

const FunSymbol* Signature::function(const std::string& name) const {
    for (const auto& f : funs_)
        if (f.name == name) return &f;
    return nullptr;
}

const RelSymbol* Signature::relation(const std::string& name) const {
    for (const auto& r : rels_)
        if (r.name == name) return &r;
    return nullptr;
}

bool Signature::isArithmeticFunction(const std::string& name) const {
    const auto* f = function(name);
    return f && f->kind != FunKind::Extra;
}

bool Signature::isArithmeticRelation(const std::string& name) const {
    const auto* r = relation(name);
    return r && r->kind == RelKind::LessThan;
}

// ---------------------------------------------------------------- terms

Term Term::var(std::string name) {
    auto n = std::make_shared<Node>();
    n->isVar = true;
    n->name = std::move(name);
    return Term(std::move(n));
}

Term Term::app(std::string fn, std::vector<Term> args) {
    auto n = std::make_shared<Node>();
    n->name = std::move(fn);
    n->args = std::move(args);
    return Term(std::move(n));
}

Term Term::numeral(unsigned long n) {
    Term t = zero();
    for (unsigned long i = 0; i < n; ++i) t = succ(t);
    return t;
}

bool Term::isVar() const { return node_->isVar; }
const std::string& Term::name() const { return node_->name; }
const std::vector<Term>& Term::args() const { return node_->args; }

std::optional<unsigned long> Term::numeralValue() const {
    unsigned long n = 0;
    const Node* p = node_.get();
    while (!p->isVar && p->name == kSucc && p->args.size() == 1) {
        ++n;
        p = p->args[0].node_.get();
    }
    if (!p->isVar && p->name == kZero && p->args.empty()) return n;
    return std::nullopt;
}

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->isVar != b.node_->isVar || a.node_->name != b.node_->name) return false;
    return a.node_->args == b.node_->args;
}

bool operator<(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return false;
    // Size first, then structure.
    auto size = [](const Term& t, auto&& self) -> std::size_t {
        std::size_t s = 1;
        for (const auto& c : t.args()) s += self(c, self);
        return s;
    };
    std::size_t sa = size(a, size), sb = size(b, size);
    if (sa != sb) return sa < sb;
    if (a.isVar() != b.isVar()) return a.isVar();
    if (a.name() != b.name()) return a.name() < b.name();
    return std::lexicographical_compare(a.args().begin(), a.args().end(), b.args().begin(), b.args().end());
}

// ---------------------------------------------------------------- formulas

namespace {
std::shared_ptr<Formula::Node> mk(FKind k) {
    auto n = std::make_shared<Formula::Node>();
    n->kind = k;
    return n;
}
}  // namespace

Formula Formula::atom(std::string rel, std::vector<Term> args) {
    auto n = mk(FKind::Atom);
    n->name = std::move(rel);
    n->args = std::move(args);
    return Formula(std::move(n));
}

Formula Formula::eq(Term a, Term b) {
    auto n = mk(FKind::Eq);
    n->args = {std::move(a), std::move(b)};
    return Formula(std::move(n));
}

Formula Formula::neg(Formula f) {
    auto n = mk(FKind::Not);
    n->subs = {std::move(f)};
    return Formula(std::move(n));
}

Formula Formula::disj(Formula a, Formula b) {
    auto n = mk(FKind::Or);
    n->subs = {std::move(a), std::move(b)};
    return Formula(std::move(n));
}

Formula Formula::forall(std::string var, Formula body) {
    auto n = mk(FKind::Forall);
    n->name = std::move(var);
    n->subs = {std::move(body)};
    return Formula(std::move(n));
}

Formula Formula::le(Term a, Term b) { return disj(lt(a, b), eq(a, b)); }
Formula Formula::implies(Formula a, Formula b) { return disj(neg(std::move(a)), std::move(b)); }
Formula Formula::conj(Formula a, Formula b) { return neg(disj(neg(std::move(a)), neg(std::move(b)))); }
Formula Formula::iff(Formula a, Formula b) { return conj(implies(a, b), implies(b, a)); }
Formula Formula::exists(std::string var, Formula body) { return neg(forall(std::move(var), neg(std::move(body)))); }

Formula Formula::forallLe(std::string var, Term bound, Formula body) {
    Term x = Term::var(var);
    return forall(std::move(var), disj(neg(le(x, std::move(bound))), std::move(body)));
}

Formula Formula::existsLe(std::string var, Term bound, Formula body) {
    return neg(forallLe(std::move(var), std::move(bound), neg(std::move(body))));
}

FKind Formula::kind() const { return node_->kind; }
const std::string& Formula::rel() const { return node_->name; }
const std::vector<Term>& Formula::args() const { return node_->args; }
const Formula& Formula::sub() const { return node_->subs.at(0); }
const Formula& Formula::left() const { return node_->subs.at(0); }
const Formula& Formula::right() const { return node_->subs.at(1); }
const std::string& Formula::var() const { return node_->name; }
const Formula& Formula::body() const { return node_->subs.at(0); }

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.kind == y.kind && x.name == y.name && x.args == y.args && x.subs == y.subs;
}

// ---------------------------------------------------------------- recognizers

std::optional<LeView> asLe(const Formula& f) {
    if (f.kind() != FKind::Or) return std::nullopt;
    const auto& l = f.left();
    const auto& r = f.right();
    if (l.kind() != FKind::Atom || l.rel() != kLess || r.kind() != FKind::Eq) return std::nullopt;
    if (l.args()[0] != r.args()[0] || l.args()[1] != r.args()[1]) return std::nullopt;
    return LeView{l.args()[0], l.args()[1]};
}

std::optional<BoundedView> asForallLe(const Formula& f) {
    if (f.kind() != FKind::Forall) return std::nullopt;
    const auto& b = f.body();
    if (b.kind() != FKind::Or || b.left().kind() != FKind::Not) return std::nullopt;
    auto le = asLe(b.left().sub());
    if (!le || !le->lhs.isVar() || le->lhs.name() != f.var()) return std::nullopt;
    if (occurs(f.var(), le->rhs)) return std::nullopt;
    return BoundedView{f.var(), le->rhs, b.right()};
}

std::optional<BoundedView> asExistsLe(const Formula& f) {
    if (f.kind() != FKind::Not) return std::nullopt;
    auto inner = asForallLe(f.sub());
    if (!inner || inner->body.kind() != FKind::Not) return std::nullopt;
    return BoundedView{inner->var, inner->bound, inner->body.sub()};
}

std::optional<QuantView> asExists(const Formula& f) {
    if (f.kind() != FKind::Not || f.sub().kind() != FKind::Forall) return std::nullopt;
    const auto& all = f.sub();
    if (all.body().kind() != FKind::Not) return std::nullopt;
    return QuantView{all.var(), all.body().sub()};
}

std::optional<PairView> asConj(const Formula& f) {
    if (f.kind() != FKind::Not || f.sub().kind() != FKind::Or) return std::nullopt;
    const auto& o = f.sub();
    if (o.left().kind() != FKind::Not || o.right().kind() != FKind::Not) return std::nullopt;
    return PairView{o.left().sub(), o.right().sub()};
}

// ---------------------------------------------------------------- classification

const char* toString(FormulaClass c) {
    switch (c) {
        case FormulaClass::QuantifierFree: return "quantifier-free";
        case FormulaClass::Universal: return "universal";
        case FormulaClass::Existential: return "existential";
        case FormulaClass::Other: return "other";
    }
    return "?";
}

bool isQuantifierFree(const Formula& f) {
    switch (f.kind()) {
        case FKind::Atom:
        case FKind::Eq: return true;
        case FKind::Not: return isQuantifierFree(f.sub());
        case FKind::Or: return isQuantifierFree(f.left()) && isQuantifierFree(f.right());
        case FKind::Forall: {
            auto b = asForallLe(f);
            return b && isQuantifierFree(b->body);
        }
    }
    return false;
}

FormulaClass classify(const Formula& f) {
    if (isQuantifierFree(f)) return FormulaClass::QuantifierFree;
    const Formula* p = &f;
    while (p->kind() == FKind::Forall && !asForallLe(*p)) p = &p->body();
    if (p != &f && isQuantifierFree(*p)) return FormulaClass::Universal;
    Formula q = f;
    bool peeled = false;
    while (auto e = asExists(q)) {
        if (asExistsLe(q)) break;
        q = e->body;
        peeled = true;
    }
    if (peeled && isQuantifierFree(q)) return FormulaClass::Existential;
    return FormulaClass::Other;
}

// ---------------------------------------------------------------- free variables

namespace {

void collect(const Term& t, std::vector<std::string>& out, const std::vector<std::string>& bound) {
    if (t.isVar()) {
        if (std::find(bound.begin(), bound.end(), t.name()) == bound.end() &&
            std::find(out.begin(), out.end(), t.name()) == out.end())
            out.push_back(t.name());
        return;
    }
    for (const auto& a : t.args()) collect(a, out, bound);
}

void collect(const Formula& f, std::vector<std::string>& out, std::vector<std::string>& bound) {
    switch (f.kind()) {
        case FKind::Atom:
        case FKind::Eq:
            for (const auto& a : f.args()) collect(a, out, bound);
            return;
        case FKind::Not: collect(f.sub(), out, bound); return;
        case FKind::Or:
            collect(f.left(), out, bound);
            collect(f.right(), out, bound);
            return;
        case FKind::Forall:
            bound.push_back(f.var());
            collect(f.body(), out, bound);
            bound.pop_back();
            return;
    }
}

}  // namespace

std::vector<std::string> freeVars(const Term& t) {
    std::vector<std::string> out;
    collect(t, out, {});
    return out;
}

std::vector<std::string> freeVars(const Formula& f) {
    std::vector<std::string> out, bound;
    collect(f, out, bound);
    return out;
}

bool occurs(const std::string& x, const Term& t) {
    if (t.isVar()) return t.name() == x;
    return std::any_of(t.args().begin(), t.args().end(), [&](const Term& a) { return occurs(x, a); });
}

bool occursFree(const std::string& x, const Formula& f) {
    switch (f.kind()) {
        case FKind::Atom:
        case FKind::Eq:
            return std::any_of(f.args().begin(), f.args().end(), [&](const Term& a) { return occurs(x, a); });
        case FKind::Not: return occursFree(x, f.sub());
        case FKind::Or: return occursFree(x, f.left()) || occursFree(x, f.right());
        case FKind::Forall: return f.var() != x && occursFree(x, f.body());
    }
    return false;
}

// ---------------------------------------------------------------- substitution

Term substitute(const Term& t, const std::string& x, const Term& s) {
    if (t.isVar()) return t.name() == x ? s : t;
    if (!occurs(x, t)) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(substitute(a, x, s));
    return Term::app(t.name(), std::move(args));
}

namespace {

std::string primedAway(std::string name, const std::vector<std::string>& avoid1, const std::vector<std::string>& avoid2) {
    auto clash = [&](const std::string& n) {
        return std::find(avoid1.begin(), avoid1.end(), n) != avoid1.end() ||
               std::find(avoid2.begin(), avoid2.end(), n) != avoid2.end();
    };
    do name += '\'';
    while (clash(name));
    return name;
}

}  // namespace

Formula substitute(const Formula& f, const std::string& x, const Term& t) {
    switch (f.kind()) {
        case FKind::Atom: {
            std::vector<Term> args;
            for (const auto& a : f.args()) args.push_back(substitute(a, x, t));
            return Formula::atom(f.rel(), std::move(args));
        }
        case FKind::Eq: return Formula::eq(substitute(f.args()[0], x, t), substitute(f.args()[1], x, t));
        case FKind::Not: return Formula::neg(substitute(f.sub(), x, t));
        case FKind::Or: return Formula::disj(substitute(f.left(), x, t), substitute(f.right(), x, t));
        case FKind::Forall: {
            if (f.var() == x || !occursFree(x, f.body())) return f;
            if (!occurs(f.var(), t)) return Formula::forall(f.var(), substitute(f.body(), x, t));
            std::string fresh = primedAway(f.var(), freeVars(t), freeVars(f.body()));
            Formula renamed = substitute(f.body(), f.var(), Term::var(fresh));
            return Formula::forall(fresh, substitute(renamed, x, t));
        }
    }
    return f;
}

bool freeFor(const Formula& f, const std::string& x, const Term& t) {
    switch (f.kind()) {
        case FKind::Atom:
        case FKind::Eq: return true;
        case FKind::Not: return freeFor(f.sub(), x, t);
        case FKind::Or: return freeFor(f.left(), x, t) && freeFor(f.right(), x, t);
        case FKind::Forall:
            if (f.var() == x || !occursFree(x, f.body())) return true;
            return !occurs(f.var(), t) && freeFor(f.body(), x, t);
    }
    return true;
}

bool isArithmeticOnly(const Term& t, const Signature& sig) {
    if (t.isVar()) return true;
    if (!sig.isArithmeticFunction(t.name())) return false;
    return std::all_of(t.args().begin(), t.args().end(), [&](const Term& a) { return isArithmeticOnly(a, sig); });
}

bool isArithmeticOnly(const Formula& f, const Signature& sig) {
    switch (f.kind()) {
        case FKind::Atom:
            if (!sig.isArithmeticRelation(f.rel())) return false;
            [[fallthrough]];
        case FKind::Eq:
            return std::all_of(f.args().begin(), f.args().end(),
                               [&](const Term& a) { return isArithmeticOnly(a, sig); });
        case FKind::Not: return isArithmeticOnly(f.sub(), sig);
        case FKind::Or: return isArithmeticOnly(f.left(), sig) && isArithmeticOnly(f.right(), sig);
        case FKind::Forall: return isArithmeticOnly(f.body(), sig);
    }
    return false;
}

// ---------------------------------------------------------------- parsing

namespace {

bool isDecimal(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

[[noreturn]] void bad(const SExpr& s, const std::string& msg) {
    throw ParseError("line " + std::to_string(s.line) + ": " + msg + " in " + s.str());
}

const std::string& varName(const SExpr& s, const Signature& sig) {
    if (!s.isAtom) bad(s, "expected a variable");
    if (sig.function(s.atom) || sig.relation(s.atom) || isDecimal(s.atom)) bad(s, "'" + s.atom + "' is not a variable name");
    return s.atom;
}

}  // namespace

Term parseTerm(const SExpr& s, const Signature& sig) {
    if (s.isAtom) {
        if (isDecimal(s.atom) && s.atom != kZero) return Term::numeral(std::stoul(s.atom));
        if (const auto* f = sig.function(s.atom)) {
            if (f->arity != 0) bad(s, "function '" + s.atom + "' needs " + std::to_string(f->arity) + " arguments");
            return Term::app(s.atom);
        }
        if (sig.relation(s.atom)) bad(s, "relation symbol used as a term");
        return Term::var(s.atom);
    }
    if (s.items.empty() || !s[0].isAtom) bad(s, "malformed term");
    const auto* f = sig.function(s[0].atom);
    if (!f) bad(s, "unknown function symbol '" + s[0].atom + "'");
    if (static_cast<int>(s.size()) - 1 != f->arity)
        bad(s, "function '" + f->name + "' has arity " + std::to_string(f->arity));
    std::vector<Term> args;
    for (std::size_t i = 1; i < s.size(); ++i) args.push_back(parseTerm(s[i], sig));
    return Term::app(f->name, std::move(args));
}

Formula parseFormula(const SExpr& s, const Signature& sig) {
    if (s.isAtom || s.items.empty() || !s[0].isAtom) bad(s, "malformed formula");
    const std::string& head = s[0].atom;
    auto need = [&](std::size_t n) {
        if (s.size() != n + 1) bad(s, "'" + head + "' expects " + std::to_string(n) + " operands");
    };
    auto nary = [&](auto combine) {
        if (s.size() < 3) bad(s, "'" + head + "' expects at least 2 operands");
        Formula acc = parseFormula(s.items.back(), sig);
        for (std::size_t i = s.size() - 2; i >= 1; --i) acc = combine(parseFormula(s[i], sig), acc);
        return acc;
    };
    if (head == "=") {
        need(2);
        return Formula::eq(parseTerm(s[1], sig), parseTerm(s[2], sig));
    }
    if (head == "<=") {
        need(2);
        return Formula::le(parseTerm(s[1], sig), parseTerm(s[2], sig));
    }
    if (head == "not") {
        need(1);
        return Formula::neg(parseFormula(s[1], sig));
    }
    if (head == "or") return nary([](Formula a, Formula b) { return Formula::disj(a, b); });
    if (head == "and") return nary([](Formula a, Formula b) { return Formula::conj(a, b); });
    if (head == "implies") {
        need(2);
        return Formula::implies(parseFormula(s[1], sig), parseFormula(s[2], sig));
    }
    if (head == "iff") {
        need(2);
        return Formula::iff(parseFormula(s[1], sig), parseFormula(s[2], sig));
    }
    if (head == "forall" || head == "exists") {
        need(2);
        std::vector<std::string> vars;
        if (s[1].isAtom) vars.push_back(varName(s[1], sig));
        else
            for (const auto& v : s[1].items) vars.push_back(varName(v, sig));
        if (vars.empty()) bad(s, "empty quantifier prefix");
        Formula body = parseFormula(s[2], sig);
        for (auto it = vars.rbegin(); it != vars.rend(); ++it)
            body = head == "forall" ? Formula::forall(*it, body) : Formula::exists(*it, body);
        return body;
    }
    if (head == "forall<=" || head == "exists<=") {
        need(3);
        std::string x = varName(s[1], sig);
        Term bound = parseTerm(s[2], sig);
        if (occurs(x, bound)) bad(s, "bound mentions the quantified variable");
        Formula body = parseFormula(s[3], sig);
        return head == "forall<=" ? Formula::forallLe(x, bound, body) : Formula::existsLe(x, bound, body);
    }
    const auto* r = sig.relation(head);
    if (!r) bad(s, "unknown relation or connective '" + head + "'");
    if (static_cast<int>(s.size()) - 1 != r->arity)
        bad(s, "relation '" + head + "' has arity " + std::to_string(r->arity));
    std::vector<Term> args;
    for (std::size_t i = 1; i < s.size(); ++i) args.push_back(parseTerm(s[i], sig));
    return Formula::atom(head, std::move(args));
}

Term parseTerm(const std::string& text, const Signature& sig) { return parseTerm(parseSExpr(text), sig); }
Formula parseFormula(const std::string& text, const Signature& sig) { return parseFormula(parseSExpr(text), sig); }

// ---------------------------------------------------------------- printing

SExpr toSExpr(const Term& t) {
    if (t.isVar() || t.args().empty()) return SExpr::makeAtom(t.name());
    std::vector<SExpr> items{SExpr::makeAtom(t.name())};
    for (const auto& a : t.args()) items.push_back(toSExpr(a));
    return SExpr::makeList(std::move(items));
}

SExpr toSExpr(const Formula& f) {
    auto list = [](std::initializer_list<SExpr> xs) { return SExpr::makeList(std::vector<SExpr>(xs)); };
    auto A = [](const std::string& s) { return SExpr::makeAtom(s); };
    if (auto b = asExistsLe(f)) return list({A("exists<="), A(b->var), toSExpr(b->bound), toSExpr(b->body)});
    if (auto b = asForallLe(f)) return list({A("forall<="), A(b->var), toSExpr(b->bound), toSExpr(b->body)});
    if (auto e = asExists(f)) return list({A("exists"), A(e->var), toSExpr(e->body)});
    if (auto c = asConj(f)) return list({A("and"), toSExpr(c->left), toSExpr(c->right)});
    if (auto le = asLe(f)) return list({A("<="), toSExpr(le->lhs), toSExpr(le->rhs)});
    switch (f.kind()) {
        case FKind::Atom: {
            std::vector<SExpr> items{A(f.rel())};
            for (const auto& a : f.args()) items.push_back(toSExpr(a));
            return SExpr::makeList(std::move(items));
        }
        case FKind::Eq: return list({A("="), toSExpr(f.args()[0]), toSExpr(f.args()[1])});
        case FKind::Not: return list({A("not"), toSExpr(f.sub())});
        case FKind::Or: return list({A("or"), toSExpr(f.left()), toSExpr(f.right())});
        case FKind::Forall: return list({A("forall"), A(f.var()), toSExpr(f.body())});
    }
    return A("?");
}

std::string show(const Term& t) { return toSExpr(t).str(); }
std::string show(const Formula& f) { return toSExpr(f).str(); }

}  // namespace hm
