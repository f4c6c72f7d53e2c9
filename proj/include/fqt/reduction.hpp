#pragma once

// Compiles positive-existential arithmetic sentences into existential ring
// formulas over F_q(t).  Natural-number variables become field variables
// (sums turn into products against a distinguished parameter u), order
// becomes an integrality condition on a ratio, and p-divisibility becomes a
// Frobenius-tower condition sandwiched by two integrality conditions.  The
// output never mentions q, so it is byte-identical across constant fields.

#include <stdexcept>
#include <string>

#include "fqt/formula.hpp"
#include "fqt/pasten.hpp"

namespace fqt {

enum class TranslateMode { AbstractPredicates, ExpandDenp };

// How the distinguished parameter enters the formula: as the free variable
// "u", as an existentially quantified variable guarded by B_l, or as the
// literal rational function t.
enum class ParameterPolicy { FreeU, QuantifiedBl, FixedT };

namespace detail {

class Translator {
 public:
  Translator(TranslateMode mode, int64_t g, ParameterPolicy policy)
      : mode_(mode), g_(g), policy_(policy) {}

  RingFormulaPtr go(const ArithFormulaPtr& s) {
    if (!s) throw std::invalid_argument("translate: null sentence");
    switch (s->kind) {
      case ArithFormula::Kind::Eq:
        return ring_eq(term_of(s->t1), term_of(s->t2));
      case ArithFormula::Kind::Le:
        // a <= b becomes b >= a, i.e. z_b / z_a integral.
        return ratio_in_ints(term_of(s->t2), term_of(s->t1));
      case ArithFormula::Kind::Divp:
        return divp_of(s->t1, s->t2);
      case ArithFormula::Kind::SDivp:
        // The strict macro expands to divisibility plus order before
        // translation, so the output matches translating the expansion.
        return ring_and(divp_of(s->t1, s->t2),
                        ratio_in_ints(term_of(s->t2), term_of(s->t1)));
      case ArithFormula::Kind::And:
        return ring_and(go(s->f1), go(s->f2));
      case ArithFormula::Kind::Or:
        return ring_or(go(s->f1), go(s->f2));
      case ArithFormula::Kind::Exists:
        return ring_exists("z_" + s->var, go(s->f1));
    }
    throw std::logic_error("translate: bad kind");
  }

 private:
  std::string fresh() { return "w_" + std::to_string(++fresh_); }

  RingTermPtr param() const {
    return policy_ == ParameterPolicy::FixedT ? term_t() : term_var("u");
  }

  // A sum of naturals maps to a product: the empty sum to 1, the summand 1
  // to the parameter, and each variable a to its field variable z_a.
  RingTermPtr term_of(const ArithTerm& t) const {
    RingTermPtr acc;
    for (const ArithSummand& s : t.summands) {
      RingTermPtr factor;
      switch (s.kind) {
        case ArithSummand::Kind::Zero: continue;
        case ArithSummand::Kind::One: factor = param(); break;
        case ArithSummand::Kind::Var: factor = term_var("z_" + s.name); break;
      }
      acc = acc ? term_mul(acc, factor) : factor;
    }
    return acc ? acc : term_lit(1);
  }

  // num/den integral: E w (num = w * den  and  Ints(w; u)).
  RingFormulaPtr ratio_in_ints(const RingTermPtr& num, const RingTermPtr& den) {
    std::string w = fresh();
    return ring_exists(w, ring_and(ring_eq(num, term_mul(term_var(w), den)),
                                   ring_ints(term_var(w), param())));
  }

  RingFormulaPtr denp_atom(const RingTermPtr& a, const RingTermPtr& b) {
    if (mode_ == TranslateMode::AbstractPredicates) return ring_denp(a, b);
    std::string un = fresh();
    std::string vn = fresh();
    return phi_uniform_at(g_, a, b, un, vn);
  }

  // t1 |_p t2: some Frobenius iterate w of T1 has the same order as T2,
  // expressed by the two one-sided integrality conditions.
  RingFormulaPtr divp_of(const ArithTerm& t1, const ArithTerm& t2) {
    RingTermPtr T1 = term_of(t1);
    RingTermPtr T2 = term_of(t2);
    std::string zn = fresh();
    RingTermPtr z = term_var(zn);
    RingFormulaPtr frob = denp_atom(z, T1);
    RingFormulaPtr up = ratio_in_ints(z, T2);
    RingFormulaPtr down = ratio_in_ints(T2, z);
    return ring_exists(zn, ring_and(ring_and(frob, up), down));
  }

  TranslateMode mode_;
  int64_t g_;
  ParameterPolicy policy_;
  int64_t fresh_ = 0;
};

}  // namespace detail

inline RingFormulaPtr translate(const ArithFormulaPtr& s, TranslateMode mode,
                                int64_t g, ParameterPolicy policy) {
  detail::Translator tr(mode, g, policy);
  RingFormulaPtr body = tr.go(s);
  if (policy == ParameterPolicy::QuantifiedBl)
    body = ring_exists("u", ring_and(ring_B(term_var("u")), body));
  return body;
}

/// Display-only wrapper for the universal guard that upgrades a family of
/// existential formulas to a single sentence: the body's parameter is read
/// as u/(u^2+1).  The output deliberately leaves the ring-formula grammar
/// (universal quantification is not evaluable here).
inline std::string wrap_universal_guard(const std::string& printed_body) {
  return "(A u (or (psiC u) " + printed_body + "))";
}

}  // namespace fqt
