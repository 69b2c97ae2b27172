#include "hm/pr.hpp"

#include <algorithm>

namespace hm {

using P = PRDerivation::Ptr;

P PRDerivation::zero(int arity) {
    auto d = std::make_shared<PRDerivation>();
    d->kind = Kind::Zero;
    d->arity = arity;
    return d;
}

P PRDerivation::succ() {
    auto d = std::make_shared<PRDerivation>();
    d->kind = Kind::Succ;
    d->arity = 1;
    return d;
}

P PRDerivation::proj(int i, int n) {
    if (i < 1 || i > n) throw PRError("projection index " + std::to_string(i) + " out of range 1.." + std::to_string(n));
    auto d = std::make_shared<PRDerivation>();
    d->kind = Kind::Proj;
    d->index = i;
    d->arity = n;
    return d;
}

P PRDerivation::comp(P f, std::vector<P> gs) {
    if (static_cast<int>(gs.size()) != f->arity)
        throw PRError("composition: outer function has arity " + std::to_string(f->arity) + " but " +
                      std::to_string(gs.size()) + " inner functions were given");
    if (gs.empty()) throw PRError("composition needs at least one inner function");
    for (const auto& g : gs)
        if (g->arity != gs[0]->arity) throw PRError("composition: inner functions disagree on arity");
    auto d = std::make_shared<PRDerivation>();
    d->kind = Kind::Comp;
    d->arity = gs[0]->arity;
    d->parts.push_back(std::move(f));
    for (auto& g : gs) d->parts.push_back(std::move(g));
    return d;
}

P PRDerivation::primrec(P base, P step) {
    if (step->arity != base->arity + 2)
        throw PRError("primitive recursion: step arity must be base arity + 2 (got " + std::to_string(base->arity) +
                      " and " + std::to_string(step->arity) + ")");
    auto d = std::make_shared<PRDerivation>();
    d->kind = Kind::PrimRec;
    d->arity = base->arity + 1;
    d->parts = {std::move(base), std::move(step)};
    return d;
}

P PRDerivation::named(std::string name, int arity) {
    auto d = std::make_shared<PRDerivation>();
    d->kind = Kind::Named;
    d->name = std::move(name);
    d->arity = arity;
    return d;
}

void Roster::add(PREntry e) {
    if (find(e.name)) throw PRError("primitive recursive symbol '" + e.name + "' registered twice");
    if (!e.derivation) throw PRError("symbol '" + e.name + "' has no derivation");
    entries_.push_back(std::move(e));
}

const PREntry* Roster::find(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.name == name) return &e;
    return nullptr;
}

void Roster::extend(Signature& sig) const {
    for (const auto& e : entries_)
        if (!sig.function(e.name)) sig.addFunction({e.name, e.derivation->arity, FunKind::PrimitiveRecursive});
}

Signature arithmeticSignature(const Roster& roster) {
    Signature sig = Signature::arithmetic();
    roster.extend(sig);
    return sig;
}

Nat Roster::evalDerivation(const PRDerivation& d, std::span<const Nat> args) const {
    if (static_cast<int>(args.size()) != d.arity)
        throw PRError("arity mismatch: derivation takes " + std::to_string(d.arity) + " arguments, got " +
                      std::to_string(args.size()));
    switch (d.kind) {
        case PRDerivation::Kind::Zero: return Nat(0);
        case PRDerivation::Kind::Succ: return args[0] + 1;
        case PRDerivation::Kind::Proj: return args[d.index - 1];
        case PRDerivation::Kind::Comp: {
            std::vector<Nat> inner;
            for (std::size_t i = 1; i < d.parts.size(); ++i) inner.push_back(evalDerivation(*d.parts[i], args));
            return evalDerivation(*d.parts[0], inner);
        }
        case PRDerivation::Kind::PrimRec: {
            std::vector<Nat> xs(args.begin(), args.end() - 1);
            Nat acc = evalDerivation(*d.parts[0], xs);
            const Nat& bound = args.back();
            std::vector<Nat> stepArgs = xs;
            stepArgs.push_back(0);
            stepArgs.push_back(0);
            for (Nat y = 0; y < bound; ++y) {
                stepArgs[stepArgs.size() - 2] = y;
                stepArgs.back() = acc;
                acc = evalDerivation(*d.parts[1], stepArgs);
            }
            return acc;
        }
        case PRDerivation::Kind::Named: {
            const auto* e = find(d.name);
            if (!e) throw PRError("unknown primitive recursive symbol '" + d.name + "'");
            return evalDerivation(*e->derivation, args);
        }
    }
    return Nat(0);
}

Nat evalPR(const Roster& roster, const PRDerivation& d, std::span<const Nat> args) {
    return roster.evalDerivation(d, args);
}

Nat Roster::eval(const std::string& name, std::span<const Nat> args) const {
    const auto* e = find(name);
    if (!e) throw PRError("unknown primitive recursive symbol '" + name + "'");
    if (static_cast<int>(args.size()) != e->derivation->arity)
        throw PRError("arity mismatch for '" + name + "'");
    if (e->native) return e->native(args);
    return evalDerivation(*e->derivation, args);
}

namespace {

Term applyDerivation(const PRDerivation& d, const std::vector<Term>& args) {
    switch (d.kind) {
        case PRDerivation::Kind::Zero: return Term::zero();
        case PRDerivation::Kind::Succ: return Term::succ(args[0]);
        case PRDerivation::Kind::Proj: return args[d.index - 1];
        case PRDerivation::Kind::Comp: {
            std::vector<Term> inner;
            for (std::size_t i = 1; i < d.parts.size(); ++i) inner.push_back(applyDerivation(*d.parts[i], args));
            return applyDerivation(*d.parts[0], inner);
        }
        case PRDerivation::Kind::Named: return Term::app(d.name, args);
        case PRDerivation::Kind::PrimRec:
            throw PRError("defining axioms need nested primitive recursions to be registered under a name");
    }
    return Term::zero();
}

Formula closeUniversally(Formula f, const std::vector<std::string>& vars) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) f = Formula::forall(*it, f);
    return f;
}

}  // namespace

std::vector<Formula> Roster::definingAxioms(const std::string& name) const {
    const auto* e = find(name);
    if (!e) throw PRError("unknown primitive recursive symbol '" + name + "'");
    const auto& d = *e->derivation;
    std::vector<std::string> names;
    std::vector<Term> xs;
    int free = d.kind == PRDerivation::Kind::PrimRec ? d.arity - 1 : d.arity;
    for (int i = 1; i <= free; ++i) {
        names.push_back("x" + std::to_string(i));
        xs.push_back(Term::var(names.back()));
    }
    if (d.kind != PRDerivation::Kind::PrimRec)
        return {closeUniversally(Formula::eq(Term::app(name, xs), applyDerivation(d, xs)), names)};

    std::vector<Formula> out;
    auto at0 = xs;
    at0.push_back(Term::zero());
    out.push_back(closeUniversally(Formula::eq(Term::app(name, at0), applyDerivation(*d.parts[0], xs)), names));

    Term y = Term::var("y");
    auto atS = xs;
    atS.push_back(Term::succ(y));
    auto prev = xs;
    prev.push_back(y);
    auto stepArgs = xs;
    stepArgs.push_back(y);
    stepArgs.push_back(Term::app(name, prev));
    auto allNames = names;
    allNames.push_back("y");
    out.push_back(
        closeUniversally(Formula::eq(Term::app(name, atS), applyDerivation(*d.parts[1], stepArgs)), allNames));
    return out;
}

PRDerivation::Ptr Roster::parseDerivation(const SExpr& s) const {
    auto bad = [&](const std::string& msg) -> PRError {
        return PRError("line " + std::to_string(s.line) + ": " + msg + " in " + s.str());
    };
    if (s.isAtom) {
        if (s.atom == "succ") return PRDerivation::succ();
        if (s.atom == "zero") return PRDerivation::zero(0);
        if (const auto* e = find(s.atom)) return PRDerivation::named(e->name, e->derivation->arity);
        throw bad("unknown primitive recursive function '" + s.atom + "'");
    }
    if (s.items.empty() || !s[0].isAtom) throw bad("malformed derivation");
    const auto& head = s[0].atom;
    auto integer = [&](const SExpr& x) {
        if (!x.isAtom) throw bad("expected an integer");
        try {
            return std::stoi(x.atom);
        } catch (const std::exception&) {
            throw bad("expected an integer");
        }
    };
    try {
        if (head == "zero" && s.size() == 2) return PRDerivation::zero(integer(s[1]));
        if (head == "proj" && s.size() == 3) return PRDerivation::proj(integer(s[1]), integer(s[2]));
        if (head == "comp" && s.size() >= 3) {
            std::vector<P> gs;
            for (std::size_t i = 2; i < s.size(); ++i) gs.push_back(parseDerivation(s[i]));
            return PRDerivation::comp(parseDerivation(s[1]), std::move(gs));
        }
        if (head == "primrec" && s.size() == 3) return PRDerivation::primrec(parseDerivation(s[1]), parseDerivation(s[2]));
    } catch (const PRError& e) {
        throw bad(e.what());
    }
    throw bad("unknown derivation form '" + head + "'");
}

SExpr toSExpr(const PRDerivation& d) {
    auto A = [](const std::string& s) { return SExpr::makeAtom(s); };
    switch (d.kind) {
        case PRDerivation::Kind::Zero: return SExpr::makeList({A("zero"), A(std::to_string(d.arity))});
        case PRDerivation::Kind::Succ: return A("succ");
        case PRDerivation::Kind::Proj:
            return SExpr::makeList({A("proj"), A(std::to_string(d.index)), A(std::to_string(d.arity))});
        case PRDerivation::Kind::Named: return A(d.name);
        case PRDerivation::Kind::Comp:
        case PRDerivation::Kind::PrimRec: {
            std::vector<SExpr> items{A(d.kind == PRDerivation::Kind::Comp ? "comp" : "primrec")};
            for (const auto& p : d.parts) items.push_back(toSExpr(*p));
            return SExpr::makeList(std::move(items));
        }
    }
    return A("?");
}

Roster Roster::defaults() {
    Roster r;
    auto def = [&](std::string name, const std::string& text, std::function<Nat(std::span<const Nat>)> native) {
        r.add({std::move(name), r.parseDerivation(parseSExpr(text)), std::move(native)});
    };
    auto b = [](bool v) { return Nat(v ? 0 : 1); };

    def("+", "(primrec (proj 1 1) (comp succ (proj 3 3)))", [](auto a) { return a[0] + a[1]; });
    def("*", "(primrec (zero 1) (comp + (proj 3 3) (proj 1 3)))", [](auto a) { return a[0] * a[1]; });
    def("pred", "(primrec (zero 0) (proj 1 2))", [](auto a) { return a[0] == 0 ? Nat(0) : Nat(a[0] - 1); });
    def("monus", "(primrec (proj 1 1) (comp pred (proj 3 3)))",
        [](auto a) { return a[0] > a[1] ? Nat(a[0] - a[1]) : Nat(0); });
    def("max", "(comp + (proj 1 2) (comp monus (proj 2 2) (proj 1 2)))",
        [](auto a) { return a[0] > a[1] ? a[0] : a[1]; });
    def("min", "(comp monus (proj 1 2) (comp monus (proj 1 2) (proj 2 2)))",
        [](auto a) { return a[0] < a[1] ? a[0] : a[1]; });
    def("sg", "(primrec (zero 0) (comp succ (zero 2)))", [](auto a) { return Nat(a[0] == 0 ? 0 : 1); });
    def("nsg", "(primrec (comp succ zero) (zero 2))", [](auto a) { return Nat(a[0] == 0 ? 1 : 0); });
    // condl(b1, b2, c) = b1 if c = 0 else b2
    def("condl", "(primrec (proj 1 2) (proj 2 4))", [](auto a) { return a[2] == 0 ? a[0] : a[1]; });
    def("cond", "(comp condl (proj 2 3) (proj 3 3) (proj 1 3))", [](auto a) { return a[0] == 0 ? a[1] : a[2]; });
    def("eqchar", "(comp sg (comp + (comp monus (proj 1 2) (proj 2 2)) (comp monus (proj 2 2) (proj 1 2))))",
        [b](auto a) { return b(a[0] == a[1]); });
    def("ltchar", "(comp nsg (comp monus (proj 2 2) (proj 1 2)))", [b](auto a) { return b(a[0] < a[1]); });
    def("notchar", "nsg", [](auto a) { return Nat(a[0] == 0 ? 1 : 0); });
    def("orchar", "min", [](auto a) { return a[0] < a[1] ? a[0] : a[1]; });
    return r;
}

}  // namespace hm
