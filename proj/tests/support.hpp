#pragma once

// Shared fixtures for the unit and acceptance tests. Besides corpus paths and
// the example signature, this holds reference oracles, random generators and
// the hand-built terms of the worked metastability example.

#include "hm/herbrand.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace hmtest {

using hm::Formula;
using hm::Nat;
using OTerm = hm::omega::Term;
using hm::omega::OFormula;
using hm::omega::Type;
using hm::omega::Var;

std::string corpusFile(const std::string& relative);
const hm::Roster& roster();

/// σ_ar plus the roster, k (constant), g (unary) and P (ternary).
const hm::Signature& exampleSignature();

/// The bundled structure family with g(n)=n+1, a_n=1/(n+1) and parameter k.
hm::Structure succStructure(unsigned k);

// ---------------------------------------------------------------- oracles

/// Independent reference semantics for the example signature: integer
/// arithmetic written out directly, P decided by cross-multiplication.
struct Oracle {
    unsigned k = 2;

    Nat g(const Nat& n) const { return n + 1; }
    bool P(const Nat& v, const Nat& w, const Nat& l) const;

    Nat term(const hm::Term& t, const std::map<std::string, Nat>& env = {}) const;
    bool formula(const Formula& f, const std::map<std::string, Nat>& env = {}) const;
};

/// Truth of a closed ω-formula computed with ω-evaluation of its atoms.
bool omegaTruth(const OFormula& f, const hm::Structure& m);

// ---------------------------------------------------------------- random syntax

class Random {
public:
    explicit Random(std::uint64_t seed) : rng_(seed) {}
    unsigned below(unsigned n) { return n == 0 ? 0 : static_cast<unsigned>(rng_() % n); }
    bool coin(unsigned percent) { return below(100) < percent; }
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Terms over the example signature with variables drawn from `vars`.
hm::Term randomSigTerm(Random& r, int depth, const std::vector<std::string>& vars = {});
/// Quantifier-free formulas, bounded quantifiers included, over `vars`.
Formula randomQF(Random& r, int depth, const std::vector<std::string>& vars = {}, bool arithmeticOnly = false);

/// Closed type-0 ω-terms built from at most `size` grammar productions.
/// Sequences come from a fixed family of generators.
OTerm randomOmegaTerm(Random& r, const hm::omega::Embedder& e, int size);
std::size_t termSize(const OTerm& t);

// ---------------------------------------------------------------- the worked example

struct ExampleTerms {
    OTerm a = hm::omega::numeral(0), q = a, m = a;  // witnesses for ∃m P(m, gm, S0)
    OTerm rPrime = a, uSeq = a;                     // (g^(n+1)0)_n and (u_n)_n
    OTerm aPrime = a, qPrime = a, mPrime = a;
    Formula phi = Formula::eq(hm::Term::zero(), hm::Term::zero());  // ¬P(a,b,c) ∧ P(d,e,f)
};

ExampleTerms exampleTerms(const hm::omega::Embedder& e);

OTerm gIter(std::uint64_t n, const OTerm& base);
hm::Term gIterSig(std::uint64_t n);

}  // namespace hmtest
