#include "hm/semantics.hpp"

#include <algorithm>
#include <cctype>

namespace hm {

namespace {

bool isNumberLiteral(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

Nat toNat(const Rational& q, const std::string& what) {
    if (boost::multiprecision::denominator(q) != 1 || q < 0)
        throw StructureError(what + " produced " + toString(q) + ", which is not a natural number");
    return boost::multiprecision::numerator(q);
}

}  // namespace

// ---------------------------------------------------------------- structures

Structure Structure::parse(const std::vector<SExpr>& formsIn, const Roster& roster, std::string name) {
    std::vector<SExpr> forms = formsIn;
    if (forms.size() == 1 && forms[0].isForm("structure")) {
        forms.assign(forms[0].items.begin() + 1, forms[0].items.end());
    }
    Structure m;
    m.name_ = std::move(name);
    m.roster_ = &roster;
    Signature base = arithmeticSignature(roster);
    for (const auto& f : forms) {
        if (!f.isList() || f.size() < 2 || !f[0].isAtom || !f[1].isAtom)
            throw StructureError("malformed structure entry " + f.str());
        const std::string& head = f[0].atom;
        const std::string& sym = f[1].atom;
        if (head == "name") {
            m.name_ = sym;
            continue;
        }
        if (base.function(sym) || base.relation(sym))
            throw StructureError("symbol " + sym + " belongs to the arithmetic signature and cannot be redefined");
        if (m.defs_.count(sym)) throw StructureError("symbol " + sym + " defined twice");
        Def d;
        if (head == "const") {
            if (f.size() != 3) throw StructureError("(const name value) expected: " + f.str());
            d.kind = Def::Kind::Fun;
            d.body = f[2];
        } else if (head == "fun" || head == "seq" || head == "rel") {
            if (f.size() != 4 || !f[2].isList()) throw StructureError("(" + head + " name (params) body) expected: " + f.str());
            d.kind = head == "fun" ? Def::Kind::Fun : head == "seq" ? Def::Kind::Seq : Def::Kind::Rel;
            for (const auto& p : f[2].items) {
                if (!p.isAtom) throw StructureError("parameter names must be atoms: " + f.str());
                d.params.push_back(p.atom);
            }
            d.body = f[3];
            if (d.kind == Def::Kind::Seq && d.params.size() != 1) throw StructureError("sequences take one index: " + f.str());
        } else {
            throw StructureError("unknown structure entry " + head);
        }
        m.defs_.emplace(sym, std::move(d));
    }
    return m;
}

Structure Structure::parse(const std::string& text, const Roster& roster, std::string name) {
    return parse(parseSExprs(text), roster, std::move(name));
}

Structure Structure::load(const std::string& path, const Roster& roster) {
    std::string base = path.substr(path.find_last_of('/') + 1);
    return parse(readFile(path), roster, base.substr(0, base.rfind('.')));
}

bool Structure::definesFunction(const std::string& f) const {
    auto it = defs_.find(f);
    return it != defs_.end() && it->second.kind == Def::Kind::Fun;
}

bool Structure::definesRelation(const std::string& r) const {
    auto it = defs_.find(r);
    return it != defs_.end() && it->second.kind == Def::Kind::Rel;
}

void Structure::requireCovers(const Signature& sig) const {
    for (const auto& f : sig.functions()) {
        if (f.kind != FunKind::Extra) continue;
        auto it = defs_.find(f.name);
        if (it == defs_.end() || it->second.kind != Def::Kind::Fun)
            throw StructureError("structure " + name_ + " does not interpret function symbol " + f.name);
        if (static_cast<int>(it->second.params.size()) != f.arity)
            throw StructureError("structure " + name_ + " gives " + f.name + " the wrong arity");
    }
    for (const auto& r : sig.relations()) {
        if (r.kind != RelKind::Extra) continue;
        auto it = defs_.find(r.name);
        if (it == defs_.end() || it->second.kind != Def::Kind::Rel)
            throw StructureError("structure " + name_ + " does not interpret relation symbol " + r.name);
        if (static_cast<int>(it->second.params.size()) != r.arity)
            throw StructureError("structure " + name_ + " gives " + r.name + " the wrong arity");
    }
}

Structure::Value Structure::call(const std::string& f, const std::vector<Rational>& args) const {
    auto it = defs_.find(f);
    if (it != defs_.end()) {
        const Def& d = it->second;
        if (d.params.size() != args.size())
            throw StructureError(f + " expects " + std::to_string(d.params.size()) + " arguments");
        if (d.body.isForm("table")) {
            if (d.body.size() < 2) throw StructureError("table needs a default: " + d.body.str());
            for (std::size_t i = 2; i < d.body.size(); ++i) {
                const SExpr& row = d.body[i];
                if (!row.isList() || row.size() != args.size() + 1) throw StructureError("malformed table row " + row.str());
                bool match = true;
                for (std::size_t j = 0; j < args.size() && match; ++j) match = num(row[j], {}) == args[j];
                if (match) return num(row[args.size()], {});
            }
            return num(d.body[1], {});
        }
        std::map<std::string, Rational> env;
        for (std::size_t i = 0; i < args.size(); ++i) env[d.params[i]] = args[i];
        Value v = eval(d.body, env);
        if (d.kind == Def::Kind::Rel) {
            if (!std::holds_alternative<bool>(v)) throw StructureError("relation " + f + " must define a truth value");
        } else if (!std::holds_alternative<Rational>(v)) {
            throw StructureError(f + " must define a number");
        } else if (d.kind == Def::Kind::Fun) {
            toNat(std::get<Rational>(v), "function " + f);
        }
        return v;
    }
    if (f == kSucc || f == "succ") {
        if (args.size() != 1) throw StructureError("S takes one argument");
        return args[0] + 1;
    }
    if (f == kZero && args.empty()) return Rational(0);
    if (roster_->find(f)) {
        std::vector<Nat> ns;
        for (const auto& a : args) ns.push_back(toNat(a, "argument of " + f));
        return Rational(roster_->eval(f, ns));
    }
    throw StructureError("undefined symbol " + f + " in structure " + name_);
}

Rational Structure::num(const SExpr& e, const std::map<std::string, Rational>& env) const {
    Value v = eval(e, env);
    if (!std::holds_alternative<Rational>(v)) throw StructureError("number expected: " + e.str());
    return std::get<Rational>(v);
}

bool Structure::truth(const SExpr& e, const std::map<std::string, Rational>& env) const {
    Value v = eval(e, env);
    if (!std::holds_alternative<bool>(v)) throw StructureError("truth value expected: " + e.str());
    return std::get<bool>(v);
}

Structure::Value Structure::eval(const SExpr& e, const std::map<std::string, Rational>& env) const {
    if (e.isAtom) {
        if (isNumberLiteral(e.atom)) return Rational(Nat(e.atom));
        if (e.atom == "true") return true;
        if (e.atom == "false") return false;
        auto it = env.find(e.atom);
        if (it != env.end()) return it->second;
        return call(e.atom, {});
    }
    if (e.size() == 0 || !e[0].isAtom) throw StructureError("malformed expression " + e.str());
    const std::string& op = e[0].atom;
    std::size_t n = e.size() - 1;
    auto arg = [&](std::size_t i) { return num(e[i], env); };
    if (op == "+" || op == "*") {
        Rational acc = op == "+" ? 0 : 1;
        for (std::size_t i = 1; i <= n; ++i) acc = op == "+" ? acc + arg(i) : acc * arg(i);
        return acc;
    }
    if (op == "min" || op == "max") {
        if (n == 0) throw StructureError(op + " needs arguments");
        Rational acc = arg(1);
        for (std::size_t i = 2; i <= n; ++i) acc = op == "min" ? std::min(acc, arg(i)) : std::max(acc, arg(i));
        return acc;
    }
    if ((op == "-" || op == "/" || op == "monus") && n == 2) {
        Rational a = arg(1), b = arg(2);
        if (op == "-") return a - b;
        if (op == "monus") return a > b ? a - b : Rational(0);
        if (b == 0) throw StructureError("division by zero in " + e.str());
        return a / b;
    }
    if ((op == "<" || op == "<=" || op == "=" || op == ">" || op == ">=") && n == 2) {
        Rational a = arg(1), b = arg(2);
        if (op == "<") return a < b;
        if (op == "<=") return a <= b;
        if (op == "=") return a == b;
        if (op == ">") return a > b;
        return a >= b;
    }
    if (op == "and" || op == "or") {
        for (std::size_t i = 1; i <= n; ++i) {
            bool b = truth(e[i], env);
            if (op == "and" && !b) return false;
            if (op == "or" && b) return true;
        }
        return op == "and";
    }
    if (op == "not" && n == 1) return !truth(e[1], env);
    if (op == "if" && n == 3) return truth(e[1], env) ? eval(e[2], env) : eval(e[3], env);
    if (op == "iter" && n == 3 && e[1].isAtom) {
        Nat count = toNat(arg(2), "iteration count");
        Rational x = arg(3);
        for (Nat i = 0; i < count; ++i) {
            Value v = call(e[1].atom, {x});
            if (!std::holds_alternative<Rational>(v)) throw StructureError("iterated symbol must be a function");
            x = std::get<Rational>(v);
        }
        return x;
    }
    std::vector<Rational> args;
    for (std::size_t i = 1; i <= n; ++i) args.push_back(arg(i));
    return call(op, args);
}

Nat Structure::fun(const std::string& f, std::span<const Nat> args) const {
    if (f == kZero && args.empty()) return 0;
    if (f == kSucc && args.size() == 1) return args[0] + 1;
    if (!defs_.count(f) && roster_->find(f)) return roster_->eval(f, args);
    std::vector<Rational> qs(args.begin(), args.end());
    Value v = call(f, qs);
    if (!std::holds_alternative<Rational>(v)) throw StructureError(f + " is not a function symbol");
    return toNat(std::get<Rational>(v), "function " + f);
}

bool Structure::rel(const std::string& r, std::span<const Nat> args) const {
    if (r == kLess) {
        if (args.size() != 2) throw StructureError("< takes two arguments");
        return args[0] < args[1];
    }
    auto it = defs_.find(r);
    if (it == defs_.end() || it->second.kind != Def::Kind::Rel) throw StructureError("undefined relation " + r);
    std::vector<Rational> qs(args.begin(), args.end());
    return std::get<bool>(call(r, qs));
}

Rational Structure::seqValue(const std::string& a, const Nat& n) const {
    auto it = defs_.find(a);
    if (it == defs_.end() || it->second.kind != Def::Kind::Seq) throw StructureError("undefined sequence " + a);
    return std::get<Rational>(call(a, {Rational(n)}));
}

// ---------------------------------------------------------------- first-order evaluation

Nat evalSigTerm(const Term& t, const Structure& m, const Valuation& e) {
    if (t.isVar()) {
        auto it = e.find(t.name());
        if (it == e.end()) throw StructureError("variable " + t.name() + " has no value");
        return it->second;
    }
    std::vector<Nat> args;
    for (const auto& a : t.args()) args.push_back(evalSigTerm(a, m, e));
    return m.fun(t.name(), args);
}

namespace {

bool evalFormula(const Formula& phi, const Structure& m, Valuation& e, std::optional<unsigned> bound) {
    if (auto b = asForallLe(phi)) {
        Nat limit = evalSigTerm(b->bound, m, e);
        auto saved = e.find(b->var) != e.end() ? std::optional<Nat>(e[b->var]) : std::nullopt;
        bool result = true;
        for (Nat i = 0; i <= limit && result; ++i) {
            e[b->var] = i;
            result = evalFormula(b->body, m, e, bound);
        }
        if (saved) e[b->var] = *saved; else e.erase(b->var);
        return result;
    }
    switch (phi.kind()) {
        case FKind::Atom: {
            std::vector<Nat> args;
            for (const auto& a : phi.args()) args.push_back(evalSigTerm(a, m, e));
            return m.rel(phi.rel(), args);
        }
        case FKind::Eq: return evalSigTerm(phi.args()[0], m, e) == evalSigTerm(phi.args()[1], m, e);
        case FKind::Not: return !evalFormula(phi.sub(), m, e, bound);
        case FKind::Or: return evalFormula(phi.left(), m, e, bound) || evalFormula(phi.right(), m, e, bound);
        case FKind::Forall: {
            if (!bound) throw StructureError("unbounded quantifier in a quantifier-free evaluation: " + show(phi));
            auto saved = e.find(phi.var()) != e.end() ? std::optional<Nat>(e[phi.var()]) : std::nullopt;
            bool result = true;
            for (unsigned i = 0; i <= *bound && result; ++i) {
                e[phi.var()] = i;
                result = evalFormula(phi.body(), m, e, bound);
            }
            if (saved) e[phi.var()] = *saved; else e.erase(phi.var());
            return result;
        }
    }
    return false;
}

}  // namespace

bool evalQF(const Formula& phi, const Structure& m, const Valuation& e) {
    Valuation copy = e;
    return evalFormula(phi, m, copy, std::nullopt);
}

bool evalBounded(const Formula& phi, const Structure& m, const Valuation& e, unsigned bound) {
    Valuation copy = e;
    return evalFormula(phi, m, copy, bound);
}

GammaReport checkGamma(const std::vector<Formula>& gamma, const Structure& m, unsigned bound) {
    GammaReport rep;
    rep.bound = bound;
    for (const auto& g : gamma) {
        std::vector<std::string> vars;
        Formula matrix = g;
        while (matrix.kind() == FKind::Forall && !asForallLe(matrix)) {
            vars.push_back(matrix.var());
            matrix = matrix.body();
        }
        std::vector<unsigned> idx(vars.size(), 0);
        for (;;) {
            Valuation e;
            for (std::size_t i = 0; i < vars.size(); ++i) e[vars[i]] = idx[i];
            ++rep.instances;
            if (!evalBounded(matrix, m, e, bound)) {
                rep.pass = false;
                rep.failure = show(g);
                for (std::size_t i = 0; i < vars.size(); ++i) rep.failure += " " + vars[i] + "=" + std::to_string(idx[i]);
                return rep;
            }
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] > bound) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------- ω-evaluation

namespace sem {

using omega::OKind;
using omega::TKind;

Value applyValue(const Value& f, const Value& a) {
    auto p = std::get_if<std::shared_ptr<const Fun>>(&f);
    if (!p) throw StructureError("applying a number");
    return (*p)->apply(a);
}

const Nat& asNat(const Value& v) {
    auto p = std::get_if<Nat>(&v);
    if (!p) throw StructureError("number expected, got a function");
    return *p;
}

Value makeFun(std::function<Value(const Value&)> f) { return std::make_shared<const Fun>(Fun{std::move(f)}); }

namespace {

Value collect(int remaining, std::vector<Nat> got, std::shared_ptr<std::function<Nat(const std::vector<Nat>&)>> f) {
    if (remaining == 0) return (*f)(got);
    return makeFun([remaining, got, f](const Value& a) {
        std::vector<Nat> more = got;
        more.push_back(asNat(a));
        return collect(remaining - 1, std::move(more), f);
    });
}

}  // namespace

Value makeFirstOrder(int n, std::function<Nat(const std::vector<Nat>&)> f) {
    return collect(n, {}, std::make_shared<std::function<Nat(const std::vector<Nat>&)>>(std::move(f)));
}

Value Denotation::eval(const Term& t, const Env& env) const {
    const Structure* m = m_;
    switch (t.kind()) {
        case TKind::Var: {
            auto it = env.find(t.name());
            if (it == env.end()) throw StructureError("variable " + t.name() + " has no value");
            return it->second;
        }
        case TKind::FnConst: {
            std::string name = t.name();
            return makeFirstOrder(t.constArity(), [m, name](const std::vector<Nat>& a) { return m->fun(name, a); });
        }
        case TKind::CaseConst: {
            Formula phi = t.caseFormula();
            auto vars = freeVars(phi);
            return makeFirstOrder(t.constArity(), [m, phi, vars](const std::vector<Nat>& a) {
                Valuation e;
                for (std::size_t i = 0; i < vars.size(); ++i) e[vars[i]] = a[i];
                return evalQF(phi, *m, e) ? a[vars.size()] : a[vars.size() + 1];
            });
        }
        case TKind::Lam: {
            Denotation self = *this;
            Term body = t.body();
            std::string x = t.boundVar().name;
            Env captured = env;
            return makeFun([self, body, x, captured](const Value& a) {
                Env inner = captured;
                inner.insert_or_assign(x, a);
                return self.eval(body, inner);
            });
        }
        case TKind::App:
            if (auto n = omega::numeralValue(t)) return Nat(*n);
            return applyValue(eval(t.fun(), env), eval(t.arg(), env));
        case TKind::Seq: {
            Denotation self = *this;
            Term seq = t;
            Env captured = env;
            return makeFun([self, seq, captured](const Value& a) { return self.eval(seq.branch(toIndex(asNat(a))), captured); });
        }
    }
    throw StructureError("unknown term kind");
}

bool Denotation::eval(const OFormula& f, const Env& env) const {
    if (auto b = omega::asForallLe(f)) {
        Nat limit = asNat(eval(b->bound, env));
        Env inner = env;
        for (Nat i = 0; i <= limit; ++i) {
            inner.insert_or_assign(b->var, Value(i));
            if (!eval(b->body, inner)) return false;
        }
        return true;
    }
    switch (f.kind()) {
        case OKind::Atom: {
            std::vector<Nat> args;
            for (const auto& a : f.args()) args.push_back(asNat(eval(a, env)));
            return m_->rel(f.rel(), args);
        }
        case OKind::Eq: return asNat(eval(f.args()[0], env)) == asNat(eval(f.args()[1], env));
        case OKind::Not: return !eval(f.sub(), env);
        case OKind::Or: return eval(f.left(), env) || eval(f.right(), env);
        case OKind::Forall: break;
    }
    throw StructureError("unbounded quantifier in an ω-formula evaluation: " + omega::show(f));
}

using Cache = std::unordered_map<const Term::Node*, std::pair<Term, Value>>;

struct SharedEvaluator::State {
    const Structure* m;
    Env env;
    Cache cache;
};

namespace {

// One frame per closure invocation: subterms whose innermost bound variable
// belongs to the frame are cached there.
struct Frame {
    std::string var;
    std::shared_ptr<Cache> cache;
    std::shared_ptr<const Frame> parent;
};
using FramePtr = std::shared_ptr<const Frame>;

Cache& cacheFor(SharedEvaluator::State& st, const Term& t, const FramePtr& frames) {
    for (const Frame* f = frames.get(); f; f = f->parent.get())
        if (t.hasFree(f->var)) return *f->cache;
    return st.cache;
}

Value sharedEval(const std::shared_ptr<SharedEvaluator::State>& st, const Term& t, const Env& env,
                 const FramePtr& frames) {
    Cache& cache = cacheFor(*st, t, frames);
    auto hit = cache.find(t.id());
    if (hit != cache.end()) return hit->second.second;
    Value out;
    switch (t.kind()) {
        case TKind::Var: {
            auto it = env.find(t.name());
            if (it == env.end()) throw StructureError("variable " + t.name() + " has no value");
            out = it->second;
            break;
        }
        case TKind::FnConst:
        case TKind::CaseConst: out = Denotation(*st->m).eval(t); break;
        case TKind::Lam: {
            Term body = t.body();
            std::string x = t.boundVar().name;
            Env captured = env;
            std::weak_ptr<SharedEvaluator::State> weak = st;
            auto memo = std::make_shared<std::map<Nat, Value>>();
            out = makeFun([weak, body, x, captured, frames, memo](const Value& a) {
                auto s = weak.lock();
                if (!s) throw StructureError("evaluator released while a closure was still in use");
                const Nat* n = std::get_if<Nat>(&a);
                if (n) {
                    auto hit = memo->find(*n);
                    if (hit != memo->end()) return hit->second;
                }
                Env e = captured;
                e.insert_or_assign(x, a);
                auto frame = std::make_shared<const Frame>(Frame{x, std::make_shared<Cache>(), frames});
                Value v = sharedEval(s, body, e, frame);
                if (n) memo->emplace(*n, v);
                return v;
            });
            break;
        }
        case TKind::App:
            if (auto n = omega::numeralValue(t)) {
                out = Nat(*n);
                break;
            }
            out = applyValue(sharedEval(st, t.fun(), env, frames), sharedEval(st, t.arg(), env, frames));
            break;
        case TKind::Seq: {
            Term seq = t;
            Env captured = env;
            std::weak_ptr<SharedEvaluator::State> weak = st;
            out = makeFun([weak, seq, captured, frames](const Value& a) {
                auto s = weak.lock();
                if (!s) throw StructureError("evaluator released while a closure was still in use");
                return sharedEval(s, seq.branch(toIndex(asNat(a))), captured, frames);
            });
            break;
        }
    }
    cache.emplace(t.id(), std::make_pair(t, out));
    return out;
}

}  // namespace

SharedEvaluator::SharedEvaluator(const Structure& m, Env env)
    : state_(std::make_shared<State>(State{&m, std::move(env), {}})) {}

Value SharedEvaluator::eval(const Term& t) { return sharedEval(state_, t, state_->env, nullptr); }

bool SharedEvaluator::eval(const OFormula& f) {
    if (auto b = omega::asForallLe(f)) {
        Nat limit = asNat(eval(b->bound));
        for (Nat i = 0; i <= limit; ++i) {
            Term n = omega::numeral(toIndex(i));
            if (!eval(omega::substitute(b->body, {{b->var, n}}))) return false;
        }
        return true;
    }
    switch (f.kind()) {
        case OKind::Atom: {
            std::vector<Nat> args;
            for (const auto& a : f.args()) args.push_back(asNat(eval(a)));
            return state_->m->rel(f.rel(), args);
        }
        case OKind::Eq: return asNat(eval(f.args()[0])) == asNat(eval(f.args()[1]));
        case OKind::Not: return !eval(f.sub());
        case OKind::Or: return eval(f.left()) || eval(f.right());
        case OKind::Forall: break;
    }
    throw StructureError("unbounded quantifier in an ω-formula evaluation: " + omega::show(f));
}

OmegaEvaluator::OmegaEvaluator(const Structure& m, rw::Budget budget) : m_(&m), norm_(budget) {}

Nat OmegaEvaluator::eval(const Term& t) {
    if (!t.type().isBase() || !t.closed()) throw StructureError("ω-evaluation needs a closed type-0 term");
    return evalNormal(norm_.normalize(t));
}

Nat OmegaEvaluator::evalNormal(const Term& s) {
    auto hit = memo_.find(s.id());
    if (hit != memo_.end()) return hit->second.second;
    if (auto n = omega::numeralValue(s)) return Nat(*n);
    std::vector<std::string> chain;
    Term inner = s;
    while (inner.kind() == TKind::App && inner.fun().kind() == TKind::FnConst) {
        chain.push_back(inner.fun().name());
        inner = inner.arg();
    }
    if (chain.size() > 1) {
        Nat out = evalNormal(inner);
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) out = m_->fun(*it, std::vector<Nat>{out});
        memo_.emplace(s.id(), std::make_pair(s, out));
        return out;
    }
    rw::SpineView v = rw::analyzeSpine(s);
    Nat out;
    if (v.head.kind() == TKind::FnConst) {
        std::vector<Nat> args;
        for (const auto& a : v.args) args.push_back(evalNormal(a));
        out = m_->fun(v.head.name(), args);
    } else if (v.head.kind() == TKind::CaseConst) {
        const Formula& phi = v.head.caseFormula();
        auto vars = freeVars(phi);
        Valuation e;
        for (std::size_t i = 0; i < vars.size(); ++i) e[vars[i]] = evalNormal(v.args[i]);
        out = evalNormal(v.args[vars.size() + (evalQF(phi, *m_, e) ? 0 : 1)]);
    } else {
        Nat r = evalNormal(v.args[0]);
        out = evalNormal(v.head.branch(toIndex(r)));
    }
    memo_.emplace(s.id(), std::make_pair(s, out));
    return out;
}

Nat evalOmega(const Term& t, const Structure& m, rw::Budget budget) {
    OmegaEvaluator ev(m, budget);
    return ev.eval(t);
}

}  // namespace sem

}  // namespace hm
