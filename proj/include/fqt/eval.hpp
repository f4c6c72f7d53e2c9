#pragma once

// Bounded evaluator for existential ring formulas over F_q(t).  Ground atoms
// evaluate exactly (equalities by field arithmetic, predicate atoms by the
// corresponding deciders).  Existential quantifiers are discharged by exact
// pattern solvers where a conjunct pins the variable — direct equation,
// linear product, squares, Frobenius orbit — and otherwise by enumerating
// the cone {c * u^k}.  "True" is definitive and carries the witnessing
// assignment; "false-at-bound" is inconclusive by design.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fqt/behaved.hpp"
#include "fqt/formula.hpp"
#include "fqt/galois.hpp"
#include "fqt/pasten.hpp"
#include "fqt/rational.hpp"

namespace fqt {

struct EvalBudget {
  int64_t degree_bound;
  const FieldSpec* constant_field;
};

struct RingEvalOutcome {
  EvalResult verdict;
  // The successful assignment, parameter binding included; empty when the
  // verdict is false-at-bound.
  std::map<std::string, RationalFunction> witnesses;
};

namespace detail {

using EvalEnv = std::map<std::string, RationalFunction>;

inline bool occurs_term(const RingTermPtr& t, const std::string& name) {
  if (!t) return false;
  switch (t->kind) {
    case RingTerm::Kind::IntLit:
    case RingTerm::Kind::TConst: return false;
    case RingTerm::Kind::Var: return t->name == name;
    case RingTerm::Kind::Add:
    case RingTerm::Kind::Mul:
      return occurs_term(t->a, name) || occurs_term(t->b, name);
  }
  return false;
}

inline bool occurs_free(const RingFormulaPtr& f, const std::string& name) {
  if (!f) return false;
  switch (f->kind) {
    case RingFormula::Kind::Eq:
    case RingFormula::Kind::PredDenp:
    case RingFormula::Kind::PredInts:
      return occurs_term(f->t1, name) || occurs_term(f->t2, name);
    case RingFormula::Kind::PredF:
    case RingFormula::Kind::PredB:
    case RingFormula::Kind::PredSq:
      return occurs_term(f->t1, name);
    case RingFormula::Kind::CharNe:
    case RingFormula::Kind::CharEq: return false;
    case RingFormula::Kind::And:
    case RingFormula::Kind::Or:
      return occurs_free(f->f1, name) || occurs_free(f->f2, name);
    case RingFormula::Kind::Exists:
      if (f->var == name) return false;
      return occurs_free(f->f1, name);
  }
  return false;
}

inline RationalFunction eval_ring_term(const RingTermPtr& t, const EvalEnv& env,
                                       const FieldSpec* F) {
  switch (t->kind) {
    case RingTerm::Kind::IntLit: {
      int64_t r = ((t->value % F->p()) + F->p()) % F->p();
      return RationalFunction(Poly::constant(Fq::from_index(F, r)));
    }
    case RingTerm::Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end())
        throw std::invalid_argument("eval_ring: unbound variable '" + t->name + "'");
      return it->second;
    }
    case RingTerm::Kind::TConst: return RationalFunction(Poly::t(F));
    case RingTerm::Kind::Add:
      return eval_ring_term(t->a, env, F) + eval_ring_term(t->b, env, F);
    case RingTerm::Kind::Mul:
      return eval_ring_term(t->a, env, F) * eval_ring_term(t->b, env, F);
  }
  throw std::logic_error("eval_ring: bad term kind");
}

struct EvalContext {
  RationalFunction u;
  int64_t l;
  const FieldSpec* F;
  int64_t degree_bound;
};

inline bool ring_atom_holds(const RingFormulaPtr& f, const EvalEnv& env,
                            const EvalContext& ctx) {
  switch (f->kind) {
    case RingFormula::Kind::Eq:
      return eval_ring_term(f->t1, env, ctx.F) == eval_ring_term(f->t2, env, ctx.F);
    case RingFormula::Kind::PredF:
      return !eval_ring_term(f->t1, env, ctx.F).is_constant();
    case RingFormula::Kind::PredB:
      return is_l_behaved(eval_ring_term(f->t1, env, ctx.F), ctx.l).is_behaved;
    case RingFormula::Kind::PredDenp: {
      RationalFunction x = eval_ring_term(f->t1, env, ctx.F);
      RationalFunction y = eval_ring_term(f->t2, env, ctx.F);
      if (x.is_zero() || y.is_zero()) return x.is_zero() && y.is_zero();
      return den_p(x, y).has_value();
    }
    case RingFormula::Kind::PredInts: {
      RationalFunction w = eval_ring_term(f->t1, env, ctx.F);
      RationalFunction pv = eval_ring_term(f->t2, env, ctx.F);
      if (pv.is_zero()) return false;
      BehavedReport rep = is_l_behaved(pv, ctx.l);
      if (!rep.is_behaved) return false;
      return ints_member(w, rep.witnesses);
    }
    case RingFormula::Kind::PredSq:
      return is_square(eval_ring_term(f->t1, env, ctx.F)).has_value();
    case RingFormula::Kind::CharNe: return ctx.F->p() != f->chr;
    case RingFormula::Kind::CharEq: return ctx.F->p() == f->chr;
    default: break;
  }
  throw std::logic_error("eval_ring: not an atom");
}

inline void flatten_and(const RingFormulaPtr& f, std::vector<RingFormulaPtr>& out) {
  if (f->kind == RingFormula::Kind::And) {
    flatten_and(f->f1, out);
    flatten_and(f->f2, out);
  } else {
    out.push_back(f);
  }
}

/// Exact p-th root of a rational function, when one exists (the reduced
/// form of a p-th power has p-th-power numerator and denominator).
inline std::optional<RationalFunction> rf_pth_root(const RationalFunction& w) {
  std::optional<Poly> rn = w.num().pth_root();
  if (!rn) return std::nullopt;
  std::optional<Poly> rd = w.den().pth_root();
  if (!rd) return std::nullopt;
  return RationalFunction(*rn, *rd);
}

/// All Frobenius iterates w^{p^s}, s ranging over the integers, that fit the
/// degree bound: exact p-th roots first (deepest to shallowest), then w, then
/// forward powers.  A constant's orbit is its full finite Frobenius orbit.
inline std::vector<RationalFunction> frobenius_orbit(const RationalFunction& w,
                                                     const EvalContext& ctx) {
  std::vector<RationalFunction> out;
  if (w.is_zero()) {
    out.push_back(w);
    return out;
  }
  if (w.is_constant()) {
    RationalFunction cur = w;
    for (int j = 0; j < ctx.F->n(); ++j) {
      if (j > 0 && cur == w) break;
      out.push_back(cur);
      cur = cur.pow(ctx.F->p());
    }
    return out;
  }
  std::vector<RationalFunction> back;
  RationalFunction cur = w;
  for (;;) {
    std::optional<RationalFunction> r = rf_pth_root(cur);
    if (!r) break;
    back.push_back(*r);
    cur = *r;
    if (cur.is_constant()) break;
  }
  for (auto it = back.rbegin(); it != back.rend(); ++it) out.push_back(*it);
  out.push_back(w);
  cur = w;
  for (;;) {
    cur = cur.pow(ctx.F->p());
    int64_t deg = std::max(cur.num().degree(), cur.den().degree());
    if (deg > ctx.degree_bound) break;
    out.push_back(cur);
  }
  return out;
}

inline std::optional<EvalEnv> eval_ring_rec(const RingFormulaPtr& f, EvalEnv env,
                                            const EvalContext& ctx);

/// A conjunct that pins the bound variable: the exhaustive candidate list
/// for it, or nothing if this conjunct is not of a solvable shape.  "Pinned"
/// means every satisfying value (within budget, for the orbit case) is in
/// the list, so a failed list is conclusive for the conjunction.
inline std::optional<std::vector<RationalFunction>> solve_conjunct(
    const RingFormulaPtr& f, const std::string& v, const EvalEnv& env,
    const EvalContext& ctx) {
  auto is_var = [&v](const RingTermPtr& t) {
    return t->kind == RingTerm::Kind::Var && t->name == v;
  };
  if (f->kind == RingFormula::Kind::Eq) {
    for (bool flip : {false, true}) {
      const RingTermPtr& lhs = flip ? f->t2 : f->t1;
      const RingTermPtr& rhs = flip ? f->t1 : f->t2;
      // v = T.
      if (is_var(lhs) && !occurs_term(rhs, v))
        return std::vector<RationalFunction>{eval_ring_term(rhs, env, ctx.F)};
      if (lhs->kind != RingTerm::Kind::Mul || occurs_term(rhs, v)) continue;
      // v * v = T: both square roots.
      if (is_var(lhs->a) && is_var(lhs->b)) {
        std::optional<RationalFunction> r = is_square(eval_ring_term(rhs, env, ctx.F));
        std::vector<RationalFunction> out;
        if (r) {
          out.push_back(*r);
          if (-*r != *r) out.push_back(-*r);
        }
        return out;
      }
      // v * T = S or T * v = S with v nowhere else: divide.
      for (bool right : {false, true}) {
        const RingTermPtr& a = right ? lhs->b : lhs->a;
        const RingTermPtr& b = right ? lhs->a : lhs->b;
        if (!is_var(a) || occurs_term(b, v)) continue;
        RationalFunction T = eval_ring_term(b, env, ctx.F);
        RationalFunction S = eval_ring_term(rhs, env, ctx.F);
        if (T.is_zero()) {
          if (S.is_zero()) break;  // no constraint from this conjunct
          return std::vector<RationalFunction>{};  // unsatisfiable
        }
        return std::vector<RationalFunction>{S / T};
      }
    }
    return std::nullopt;
  }
  if (f->kind == RingFormula::Kind::PredDenp) {
    if (is_var(f->t1) && !occurs_term(f->t2, v))
      return frobenius_orbit(eval_ring_term(f->t2, env, ctx.F), ctx);
    if (is_var(f->t2) && !occurs_term(f->t1, v))
      return frobenius_orbit(eval_ring_term(f->t1, env, ctx.F), ctx);
  }
  return std::nullopt;
}

inline std::optional<EvalEnv> eval_exists(const std::string& v,
                                          const RingFormulaPtr& body, EvalEnv env,
                                          const EvalContext& ctx) {
  std::vector<RingFormulaPtr> conjuncts;
  flatten_and(body, conjuncts);

  // A ground atom conjunct that already fails sinks the whole conjunction.
  for (const RingFormulaPtr& c : conjuncts) {
    bool atom = c->kind != RingFormula::Kind::And &&
                c->kind != RingFormula::Kind::Or &&
                c->kind != RingFormula::Kind::Exists;
    if (atom && !occurs_free(c, v) && !ring_atom_holds(c, env, ctx))
      return std::nullopt;
  }

  for (const RingFormulaPtr& c : conjuncts) {
    auto candidates = solve_conjunct(c, v, env, ctx);
    if (!candidates) continue;
    for (const RationalFunction& cand : *candidates) {
      EvalEnv next = env;
      next.insert_or_assign(v, cand);
      auto r = eval_ring_rec(body, std::move(next), ctx);
      if (r) return r;
    }
    return std::nullopt;
  }

  // No pinning conjunct: enumerate the cone c * u^k.
  for (int64_t k = 0; k <= ctx.degree_bound; ++k) {
    RationalFunction uk = ctx.u.pow(k);
    for (int64_t ci = 1; ci < ctx.F->q(); ++ci) {
      EvalEnv next = env;
      next.insert_or_assign(v, RationalFunction(Poly::constant(Fq::from_index(ctx.F, ci))) * uk);
      auto r = eval_ring_rec(body, std::move(next), ctx);
      if (r) return r;
    }
  }
  return std::nullopt;
}

inline std::optional<EvalEnv> eval_ring_rec(const RingFormulaPtr& f, EvalEnv env,
                                            const EvalContext& ctx) {
  switch (f->kind) {
    case RingFormula::Kind::And: {
      auto r = eval_ring_rec(f->f1, std::move(env), ctx);
      if (!r) return std::nullopt;
      return eval_ring_rec(f->f2, std::move(*r), ctx);
    }
    case RingFormula::Kind::Or: {
      auto r = eval_ring_rec(f->f1, env, ctx);
      if (r) return r;
      return eval_ring_rec(f->f2, std::move(env), ctx);
    }
    case RingFormula::Kind::Exists:
      return eval_exists(f->var, f->f1, std::move(env), ctx);
    default:
      if (ring_atom_holds(f, env, ctx)) return env;
      return std::nullopt;
  }
}

}  // namespace detail

inline RingEvalOutcome eval_ring(const RingFormulaPtr& f, const RationalFunction& u,
                                 int64_t l, const EvalBudget& budget) {
  if (!f) throw std::invalid_argument("eval_ring: null formula");
  if (budget.degree_bound < 0)
    throw std::invalid_argument("eval_ring: negative degree bound");
  if (u.field() != budget.constant_field)
    throw std::invalid_argument("eval_ring: parameter field mismatch");
  if (u.is_zero()) throw std::invalid_argument("eval_ring: zero parameter");
  detail::EvalContext ctx{u, l, budget.constant_field, budget.degree_bound};
  detail::EvalEnv env;
  env.insert_or_assign("u", u);
  auto r = detail::eval_ring_rec(f, std::move(env), ctx);
  if (!r) return RingEvalOutcome{EvalResult::FalseAtBound, {}};
  return RingEvalOutcome{EvalResult::True, std::move(*r)};
}

}  // namespace fqt
