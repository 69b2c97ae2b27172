#include "support.hpp"

#include <stdexcept>

#ifndef HM_CORPUS_DIR
#define HM_CORPUS_DIR "corpus"
#endif

namespace hmtest {

using namespace hm;
namespace om = hm::omega;

std::string corpusFile(const std::string& relative) { return std::string(HM_CORPUS_DIR) + "/" + relative; }

const Roster& roster() {
    static const Roster r = Roster::defaults();
    return r;
}

const Signature& exampleSignature() {
    static const Signature sig = [] {
        Signature s = arithmeticSignature(roster());
        s.addFunction({"k", 0, FunKind::Extra});
        s.addFunction({"g", 1, FunKind::Extra});
        s.addRelation({"P", 3, RelKind::Extra});
        return s;
    }();
    return sig;
}

Structure succStructure(unsigned k) {
    std::string text = "(const k " + std::to_string(k) +
                       ")\n"
                       "(fun g (n) (+ n 1))\n"
                       "(seq a (n) (/ 1 (+ n 1)))\n"
                       "(rel P (v w l) (<= (- (a v) (a w)) (/ l (+ k 1))))\n";
    return Structure::parse(text, roster(), "succ-k" + std::to_string(k));
}

// ---------------------------------------------------------------- oracles

bool Oracle::P(const Nat& v, const Nat& w, const Nat& l) const {
    // 1/(v+1) - 1/(w+1) <= l/(k+1)  <=>  (w-v)(k+1) <= l(v+1)(w+1)
    Nat lhs = (w - v) * Nat(k + 1);
    Nat rhs = l * (v + 1) * (w + 1);
    return lhs <= rhs;
}

Nat Oracle::term(const hm::Term& t, const std::map<std::string, Nat>& env) const {
    if (t.isVar()) {
        auto it = env.find(t.name());
        if (it == env.end()) throw std::runtime_error("oracle: unbound variable " + t.name());
        return it->second;
    }
    std::vector<Nat> a;
    for (const auto& x : t.args()) a.push_back(term(x, env));
    const std::string& f = t.name();
    if (f == "0") return 0;
    if (f == "S") return a[0] + 1;
    if (f == "k") return k;
    if (f == "g") return g(a[0]);
    if (f == "+") return a[0] + a[1];
    if (f == "*") return a[0] * a[1];
    if (f == "pred") return a[0] == 0 ? Nat(0) : Nat(a[0] - 1);
    if (f == "monus") return a[0] > a[1] ? Nat(a[0] - a[1]) : Nat(0);
    if (f == "max") return a[0] > a[1] ? a[0] : a[1];
    if (f == "min") return a[0] < a[1] ? a[0] : a[1];
    if (f == "sg") return a[0] == 0 ? 0 : 1;
    if (f == "nsg") return a[0] == 0 ? 1 : 0;
    throw std::runtime_error("oracle: no reference meaning for " + f);
}

bool Oracle::formula(const Formula& f, const std::map<std::string, Nat>& env) const {
    if (auto b = asForallLe(f)) {
        Nat bound = term(b->bound, env);
        auto inner = env;
        for (Nat i = 0; i <= bound; ++i) {
            inner[b->var] = i;
            if (!formula(b->body, inner)) return false;
        }
        return true;
    }
    switch (f.kind()) {
        case FKind::Atom: {
            std::vector<Nat> a;
            for (const auto& x : f.args()) a.push_back(term(x, env));
            if (f.rel() == "<") return a[0] < a[1];
            if (f.rel() == "P") return P(a[0], a[1], a[2]);
            throw std::runtime_error("oracle: no reference meaning for relation " + f.rel());
        }
        case FKind::Eq: return term(f.args()[0], env) == term(f.args()[1], env);
        case FKind::Not: return !formula(f.sub(), env);
        case FKind::Or: return formula(f.left(), env) || formula(f.right(), env);
        case FKind::Forall: break;
    }
    throw std::runtime_error("oracle: unbounded quantifier");
}

bool omegaTruth(const OFormula& f, const Structure& m) {
    if (auto b = om::asForallLe(f)) {
        Nat bound = sem::evalOmega(b->bound, m);
        for (Nat i = 0; i <= bound; ++i)
            if (!omegaTruth(om::substitute(b->body, {{b->var, om::numeral(toIndex(i))}}), m)) return false;
        return true;
    }
    switch (f.kind()) {
        case om::OKind::Atom: {
            std::vector<Nat> a;
            for (const auto& x : f.args()) a.push_back(sem::evalOmega(x, m));
            return m.rel(f.rel(), a);
        }
        case om::OKind::Eq: return sem::evalOmega(f.args()[0], m) == sem::evalOmega(f.args()[1], m);
        case om::OKind::Not: return !omegaTruth(f.sub(), m);
        case om::OKind::Or: return omegaTruth(f.left(), m) || omegaTruth(f.right(), m);
        case om::OKind::Forall: break;
    }
    throw std::runtime_error("unbounded quantifier in a closed ω-formula");
}

// ---------------------------------------------------------------- random syntax

hm::Term randomSigTerm(Random& r, int depth, const std::vector<std::string>& vars) {
    if (depth <= 0 || r.coin(25)) {
        unsigned pick = r.below(vars.empty() ? 3 : 5);
        if (pick == 0) return hm::Term::app("k");
        if (pick <= 2) return hm::Term::numeral(r.below(4));
        return hm::Term::var(vars[r.below(static_cast<unsigned>(vars.size()))]);
    }
    static const std::vector<std::pair<std::string, int>> fns = {
        {"S", 1}, {"g", 1}, {"+", 2}, {"*", 2}, {"pred", 1}, {"monus", 2}, {"max", 2}, {"min", 2}, {"sg", 1}, {"nsg", 1}};
    const auto& [name, arity] = fns[r.below(static_cast<unsigned>(fns.size()))];
    std::vector<hm::Term> args;
    for (int i = 0; i < arity; ++i) args.push_back(randomSigTerm(r, name == "*" ? std::min(depth - 1, 1) : depth - 1, vars));
    return hm::Term::app(name, args);
}

namespace {

hm::Term arithmeticTerm(Random& r, int depth, const std::vector<std::string>& vars) {
    if (depth <= 0 || r.coin(35)) {
        if (!vars.empty() && r.coin(60)) return hm::Term::var(vars[r.below(static_cast<unsigned>(vars.size()))]);
        return hm::Term::numeral(r.below(5));
    }
    switch (r.below(4)) {
        case 0: return hm::Term::succ(arithmeticTerm(r, depth - 1, vars));
        case 1: return hm::Term::app("+", {arithmeticTerm(r, depth - 1, vars), arithmeticTerm(r, depth - 1, vars)});
        case 2: return hm::Term::app("monus", {arithmeticTerm(r, depth - 1, vars), arithmeticTerm(r, depth - 1, vars)});
        default: return hm::Term::app("max", {arithmeticTerm(r, depth - 1, vars), arithmeticTerm(r, depth - 1, vars)});
    }
}

}  // namespace

Formula randomQF(Random& r, int depth, const std::vector<std::string>& vars, bool arithmeticOnly) {
    auto term = [&](int d) { return arithmeticOnly ? arithmeticTerm(r, d, vars) : randomSigTerm(r, d, vars); };
    if (depth <= 0 || r.coin(30)) {
        unsigned pick = r.below(arithmeticOnly ? 3 : 4);
        if (pick == 0) return Formula::lt(term(2), term(2));
        if (pick == 1) return Formula::eq(term(2), term(2));
        if (pick == 2) return Formula::le(term(2), term(2));
        return Formula::atom("P", {term(1), term(1), term(1)});
    }
    switch (r.below(6)) {
        case 0: return Formula::neg(randomQF(r, depth - 1, vars, arithmeticOnly));
        case 1: return Formula::disj(randomQF(r, depth - 1, vars, arithmeticOnly), randomQF(r, depth - 1, vars, arithmeticOnly));
        case 2: return Formula::conj(randomQF(r, depth - 1, vars, arithmeticOnly), randomQF(r, depth - 1, vars, arithmeticOnly));
        case 3: return Formula::implies(randomQF(r, depth - 1, vars, arithmeticOnly), randomQF(r, depth - 1, vars, arithmeticOnly));
        default: {
            std::string z = "z" + std::to_string(depth) + "_" + std::to_string(r.below(1000));
            auto inner = vars;
            inner.push_back(z);
            Formula body = randomQF(r, depth - 1, inner, arithmeticOnly);
            hm::Term bound = hm::Term::numeral(r.below(4));
            return r.coin(50) ? Formula::forallLe(z, bound, body) : Formula::existsLe(z, bound, body);
        }
    }
}

namespace {

OTerm sTimes(std::uint64_t n, OTerm t) {
    OTerm s = OTerm::fnConst("S", 1);
    for (std::uint64_t i = 0; i < n; ++i) t = OTerm::app(s, t);
    return t;
}

struct OmegaGen {
    Random& r;
    const om::Embedder& e;
    std::vector<Var> ctx;
    int budget;

    Type t0 = Type::base();
    Type t1 = Type::arrow(Type::base(), Type::base());
    Type t2 = Type::arrow(Type::base(), Type::arrow(Type::base(), Type::base()));

    bool spend() {
        if (budget <= 0) return false;
        --budget;
        return true;
    }

    std::vector<Var> inScope(const Type& t) const {
        std::vector<Var> out;
        for (const auto& v : ctx)
            if (v.type == t) out.push_back(v);
        return out;
    }

    OTerm leaf0() {
        auto vs = inScope(t0);
        if (!vs.empty() && r.coin(60)) return OTerm::var(vs[r.below(static_cast<unsigned>(vs.size()))]);
        switch (r.below(3)) {
            case 0: return OTerm::fnConst("k", 0);
            default: return om::numeral(r.below(4));
        }
    }

    // Arguments in index positions of sequences and recursors stay below 6.
    OTerm index0() {
        auto vs = inScope(t0);
        if (!vs.empty() && r.coin(40)) {
            static const Formula lt = parseFormula("(< a b)", exampleSignature());
            OTerm x = OTerm::var(vs[r.below(static_cast<unsigned>(vs.size()))]);
            return OTerm::apps(e.caseTerm(lt), {x, om::numeral(6), x, om::numeral(0)});
        }
        if (r.coin(25)) return OTerm::fnConst("k", 0);
        return om::numeral(r.below(6));
    }

    OTerm ty0() {
        if (!spend() || r.coin(20)) return leaf0();
        switch (r.below(9)) {
            case 0: return OTerm::app(OTerm::fnConst("S", 1), ty0());
            case 1: return OTerm::app(OTerm::fnConst("g", 1), ty0());
            case 2: return OTerm::apps(OTerm::fnConst("+", 2), {ty0(), ty0()});
            case 3: return OTerm::app(ty1(), index0());
            case 4: return OTerm::apps(ty2(), {index0(), ty0()});
            case 5: {
                static const char* arith[] = {"(< a b)", "(= a (S b))", "(or (< b a) (= a 0))"};
                Formula phi = parseFormula(arith[r.below(3)], exampleSignature());
                return OTerm::apps(e.caseTerm(phi), {ty0(), ty0(), ty0(), ty0()});
            }
            case 6: {
                Formula phi = parseFormula("(P a (g b) c)", exampleSignature());
                return OTerm::apps(e.caseTerm(phi), {ty0(), ty0(), ty0(), ty0(), ty0()});
            }
            case 7: return OTerm::app(om::recursor(ty0(), ty2()), index0());
            default: return OTerm::app(zeroSeq(), index0());
        }
    }

    OTerm ty1() {
        auto vs = inScope(t1);
        if (!spend()) {
            if (!vs.empty()) return OTerm::var(vs[0]);
            return zeroSeqNat();
        }
        switch (r.below(6)) {
            case 0:
            case 1: {
                Var x = om::freshVar("x", t0);
                ctx.push_back(x);
                OTerm body = ty0();
                ctx.pop_back();
                return OTerm::lam(x, body);
            }
            case 2:
                if (!vs.empty()) return OTerm::var(vs[r.below(static_cast<unsigned>(vs.size()))]);
                return zeroSeq();
            case 3: return om::recursor(ty0(), ty2());
            case 4: return zeroSeq();
            default: return OTerm::app(ty2(), index0());
        }
    }

    OTerm ty2() {
        auto vs = inScope(t2);
        if (!spend()) {
            if (!vs.empty()) return OTerm::var(vs[0]);
            return shiftSeq();
        }
        switch (r.below(5)) {
            case 0:
            case 1: {
                Var x = om::freshVar("x", t0);
                Var y = om::freshVar("y", t0);
                ctx.push_back(x);
                ctx.push_back(y);
                OTerm body = ty0();
                ctx.pop_back();
                ctx.pop_back();
                return OTerm::lams({x, y}, body);
            }
            case 2:
                if (!vs.empty()) return OTerm::var(vs[r.below(static_cast<unsigned>(vs.size()))]);
                return shiftSeq();
            case 3: return shiftSeq();
            default: return addSeq();
        }
    }

    // Zero sequences.
    OTerm zeroSeqNat() {
        return OTerm::seq(t0, {}, [](std::uint64_t n, const om::SeqData&) { return om::numeral(n); }, "nat");
    }
    OTerm zeroSeq() {
        switch (r.below(3)) {
            case 0: return zeroSeqNat();
            case 1: {
                OTerm base = ty0();
                OTerm g = OTerm::fnConst("g", 1);
                return OTerm::seq(
                    t0, base.freeVars(),
                    [base, g](std::uint64_t n, const om::SeqData&) {
                        OTerm t = base;
                        for (std::uint64_t i = 0; i < n; ++i) t = OTerm::app(g, t);
                        return t;
                    },
                    "iter-g");
            }
            default: {
                OTerm even = ty0();
                return OTerm::seq(
                    t0, even.freeVars(),
                    [even](std::uint64_t n, const om::SeqData&) { return n % 2 == 0 ? even : om::numeral(n / 2); },
                    "alternate");
            }
        }
    }

    // Non-zero sequences of type 0 → 0 → 0.
    OTerm shiftSeq() {
        return OTerm::seq(
            t1, {},
            [](std::uint64_t n, const om::SeqData&) {
                Var y = om::freshVar("y", Type::base());
                return OTerm::lam(y, sTimes(n, OTerm::var(y)));
            },
            "shift");
    }
    OTerm addSeq() {
        OTerm c = ty0();
        return OTerm::seq(
            t1, c.freeVars(),
            [c](std::uint64_t n, const om::SeqData&) {
                Var y = om::freshVar("y", Type::base());
                return OTerm::lam(y, OTerm::apps(OTerm::fnConst("+", 2), {OTerm::var(y), sTimes(n % 3, c)}));
            },
            "add");
    }
};

}  // namespace

OTerm randomOmegaTerm(Random& r, const om::Embedder& e, int size) {
    OmegaGen gen{r, e, {}, size - 1};
    return gen.ty0();
}

std::size_t termSize(const OTerm& t) {
    switch (t.kind()) {
        case om::TKind::Lam: return 1 + termSize(t.body());
        case om::TKind::App: return 1 + termSize(t.fun()) + termSize(t.arg());
        default: return 1;
    }
}

// ---------------------------------------------------------------- the worked example

OTerm gIter(std::uint64_t n, const OTerm& base) {
    OTerm g = OTerm::fnConst("g", 1);
    OTerm t = base;
    for (std::uint64_t i = 0; i < n; ++i) t = OTerm::app(g, t);
    return t;
}

hm::Term gIterSig(std::uint64_t n) {
    hm::Term t = hm::Term::zero();
    for (std::uint64_t i = 0; i < n; ++i) t = hm::Term::app("g", {t});
    return t;
}

ExampleTerms exampleTerms(const om::Embedder& e) {
    const Signature& sig = e.signature();
    Type t0 = Type::base();
    Type t00 = Type::arrow(t0, Type::arrow(t0, t0));
    OTerm zero = om::numeral(0);
    OTerm S = OTerm::fnConst("S", 1);
    OTerm g = OTerm::fnConst("g", 1);

    // B := ¬P(0, R_{u,f} z, Sz) ∧ P(0, R_{u,f}(Sz), SSz)
    Var u{"u", t0}, f{"f", t00}, z{"z", t0};
    OTerm R = om::recursor(OTerm::var(u), OTerm::var(f));
    OTerm zt = OTerm::var(z), Sz = OTerm::app(S, zt), SSz = OTerm::app(S, Sz);
    OTerm Rz = OTerm::app(R, zt), RSz = OTerm::app(R, Sz);
    OFormula B = OFormula::conj(OFormula::neg(OFormula::atom("P", {zero, Rz, Sz})), OFormula::atom("P", {zero, RSz, SSz}));

    ExampleTerms out;
    out.phi = parseFormula("(and (not (P a b c)) (P d e f))", sig);
    om::Decomposition d{out.phi, {zero, Rz, Sz, zero, RSz, SSz}};

    Var v{"v", t0}, w{"w", t0};
    OTerm step = OTerm::lams({v, w}, OTerm::app(g, OTerm::var(w)));
    OTerm g0 = OTerm::app(g, zero);
    OTerm k = OTerm::fnConst("k", 0);
    out.a = OTerm::apps(e.argmax(B, d, 3), {g0, step, k});
    out.q = OTerm::app(om::recursor(g0, step), out.a);
    Formula p0 = parseFormula("(P 0 (g 0) (S 0))", sig);
    out.m = OTerm::apps(e.caseTerm(p0), {zero, out.q});

    out.rPrime = OTerm::seq(t0, {}, [zero](std::uint64_t n, const om::SeqData&) { return gIter(n + 1, zero); }, "r'");
    OTerm cphi = OTerm::caseConst(out.phi);
    out.uSeq = OTerm::seq(
        t0, {},
        [cphi, zero](std::uint64_t n, const om::SeqData& self) -> OTerm {
            if (n == 0) return zero;
            for (std::uint64_t j = 1; j + 1 < n; ++j) self.at(j);
            std::uint64_t p = n - 1;
            return OTerm::apps(cphi, {zero, gIter(p + 1, zero), om::numeral(p + 1), zero, gIter(p + 2, zero),
                                      om::numeral(p + 2), om::numeral(p), self.at(p)});
        },
        "u");
    out.aPrime = OTerm::app(out.uSeq, k);
    out.qPrime = OTerm::app(out.rPrime, out.aPrime);
    out.mPrime = OTerm::apps(OTerm::caseConst(p0), {zero, out.qPrime});
    return out;
}

}  // namespace hmtest
