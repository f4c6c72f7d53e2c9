#pragma once

// Formula ASTs: the positive-existential arithmetic language
// (0, 1, +, |_p, <=) with its concrete grammar and bounded evaluator over N,
// and the existential ring language with S-expression printing/parsing.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fqt {

enum class EvalResult { True, FalseAtBound };

// ---------------------------------------------------------------------------
// Ring terms: integer literals, variables, the distinguished constant t,
// sums and products.
// ---------------------------------------------------------------------------

struct RingTerm;
using RingTermPtr = std::shared_ptr<const RingTerm>;

struct RingTerm {
  enum class Kind { IntLit, Var, TConst, Add, Mul };
  Kind kind;
  int64_t value = 0;   // IntLit
  std::string name;    // Var
  RingTermPtr a, b;    // Add, Mul
};

inline RingTermPtr term_lit(int64_t v) {
  return std::make_shared<RingTerm>(RingTerm{RingTerm::Kind::IntLit, v, "", nullptr, nullptr});
}
inline RingTermPtr term_var(std::string name) {
  if (name.empty() || name == "t")
    throw std::invalid_argument("term_var: 't' is reserved and names must be nonempty");
  return std::make_shared<RingTerm>(
      RingTerm{RingTerm::Kind::Var, 0, std::move(name), nullptr, nullptr});
}
inline RingTermPtr term_t() {
  return std::make_shared<RingTerm>(RingTerm{RingTerm::Kind::TConst, 0, "", nullptr, nullptr});
}
inline RingTermPtr term_add(RingTermPtr x, RingTermPtr y) {
  return std::make_shared<RingTerm>(
      RingTerm{RingTerm::Kind::Add, 0, "", std::move(x), std::move(y)});
}
inline RingTermPtr term_mul(RingTermPtr x, RingTermPtr y) {
  return std::make_shared<RingTerm>(
      RingTerm{RingTerm::Kind::Mul, 0, "", std::move(x), std::move(y)});
}

inline bool term_equal(const RingTermPtr& x, const RingTermPtr& y) {
  if (x == y) return true;
  if (!x || !y || x->kind != y->kind) return false;
  switch (x->kind) {
    case RingTerm::Kind::IntLit: return x->value == y->value;
    case RingTerm::Kind::Var: return x->name == y->name;
    case RingTerm::Kind::TConst: return true;
    case RingTerm::Kind::Add:
    case RingTerm::Kind::Mul: return term_equal(x->a, y->a) && term_equal(x->b, y->b);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Ring formulas: equality, the predicates F (nonconstant), B (l-behaved),
// Denp, Ints (with explicit parameter), Sq, the characteristic literals, and
// closure under and/or/exists.
// ---------------------------------------------------------------------------

struct RingFormula;
using RingFormulaPtr = std::shared_ptr<const RingFormula>;

struct RingFormula {
  enum class Kind {
    Eq, PredF, PredB, PredDenp, PredInts, PredSq, CharNe, CharEq, And, Or, Exists
  };
  Kind kind;
  RingTermPtr t1, t2;  // Eq/Denp: both; Ints: t1 member, t2 parameter; F/B/Sq: t1
  int64_t chr = 0;     // CharNe / CharEq
  RingFormulaPtr f1, f2;  // And/Or both; Exists: f1 = body
  std::string var;        // Exists
};

namespace detail {
inline RingFormulaPtr mk_ring(RingFormula f) {
  return std::make_shared<RingFormula>(std::move(f));
}
}  // namespace detail

inline RingFormulaPtr ring_eq(RingTermPtr x, RingTermPtr y) {
  return detail::mk_ring({RingFormula::Kind::Eq, std::move(x), std::move(y), 0,
                          nullptr, nullptr, ""});
}
inline RingFormulaPtr ring_F(RingTermPtr x) {
  return detail::mk_ring({RingFormula::Kind::PredF, std::move(x), nullptr, 0,
                          nullptr, nullptr, ""});
}
inline RingFormulaPtr ring_B(RingTermPtr x) {
  return detail::mk_ring({RingFormula::Kind::PredB, std::move(x), nullptr, 0,
                          nullptr, nullptr, ""});
}
inline RingFormulaPtr ring_denp(RingTermPtr x, RingTermPtr y) {
  return detail::mk_ring({RingFormula::Kind::PredDenp, std::move(x), std::move(y), 0,
                          nullptr, nullptr, ""});
}
inline RingFormulaPtr ring_ints(RingTermPtr member, RingTermPtr param) {
  return detail::mk_ring({RingFormula::Kind::PredInts, std::move(member),
                          std::move(param), 0, nullptr, nullptr, ""});
}
inline RingFormulaPtr ring_sq(RingTermPtr x) {
  return detail::mk_ring({RingFormula::Kind::PredSq, std::move(x), nullptr, 0,
                          nullptr, nullptr, ""});
}
inline RingFormulaPtr ring_charne(int64_t p) {
  return detail::mk_ring({RingFormula::Kind::CharNe, nullptr, nullptr, p,
                          nullptr, nullptr, ""});
}
inline RingFormulaPtr ring_chareq(int64_t p) {
  return detail::mk_ring({RingFormula::Kind::CharEq, nullptr, nullptr, p,
                          nullptr, nullptr, ""});
}
inline RingFormulaPtr ring_and(RingFormulaPtr x, RingFormulaPtr y) {
  return detail::mk_ring({RingFormula::Kind::And, nullptr, nullptr, 0,
                          std::move(x), std::move(y), ""});
}
inline RingFormulaPtr ring_or(RingFormulaPtr x, RingFormulaPtr y) {
  return detail::mk_ring({RingFormula::Kind::Or, nullptr, nullptr, 0,
                          std::move(x), std::move(y), ""});
}
inline RingFormulaPtr ring_exists(std::string var, RingFormulaPtr body) {
  if (var.empty() || var == "t")
    throw std::invalid_argument("ring_exists: 't' is reserved and names must be nonempty");
  return detail::mk_ring({RingFormula::Kind::Exists, nullptr, nullptr, 0,
                          std::move(body), nullptr, std::move(var)});
}

/// Left fold of a nonempty conjunction/disjunction list.
inline RingFormulaPtr ring_and_all(const std::vector<RingFormulaPtr>& fs) {
  if (fs.empty()) throw std::invalid_argument("ring_and_all: empty");
  RingFormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = ring_and(acc, fs[i]);
  return acc;
}
inline RingFormulaPtr ring_or_all(const std::vector<RingFormulaPtr>& fs) {
  if (fs.empty()) throw std::invalid_argument("ring_or_all: empty");
  RingFormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = ring_or(acc, fs[i]);
  return acc;
}

inline bool ring_equal(const RingFormulaPtr& x, const RingFormulaPtr& y) {
  if (x == y) return true;
  if (!x || !y || x->kind != y->kind) return false;
  switch (x->kind) {
    case RingFormula::Kind::Eq:
    case RingFormula::Kind::PredDenp:
    case RingFormula::Kind::PredInts:
      return term_equal(x->t1, y->t1) && term_equal(x->t2, y->t2);
    case RingFormula::Kind::PredF:
    case RingFormula::Kind::PredB:
    case RingFormula::Kind::PredSq:
      return term_equal(x->t1, y->t1);
    case RingFormula::Kind::CharNe:
    case RingFormula::Kind::CharEq:
      return x->chr == y->chr;
    case RingFormula::Kind::And:
    case RingFormula::Kind::Or:
      return ring_equal(x->f1, y->f1) && ring_equal(x->f2, y->f2);
    case RingFormula::Kind::Exists:
      return x->var == y->var && ring_equal(x->f1, y->f1);
  }
  return false;
}

// ---------------------------------------------------------------------------
// S-expression printing and parsing for the ring language.
//   term    := INT | t | SYMBOL | (+ term term) | (* term term)
//   formula := (= term term) | (F term) | (B term) | (Denp term term)
//            | (Ints term term) | (Sq term) | (charne INT) | (chareq INT)
//            | (and formula formula) | (or formula formula) | (E SYMBOL formula)
// ---------------------------------------------------------------------------

inline std::string print_ring_term(const RingTermPtr& t) {
  if (!t) throw std::invalid_argument("print_ring_term: null term");
  switch (t->kind) {
    case RingTerm::Kind::IntLit: return std::to_string(t->value);
    case RingTerm::Kind::Var: return t->name;
    case RingTerm::Kind::TConst: return "t";
    case RingTerm::Kind::Add:
      return "(+ " + print_ring_term(t->a) + " " + print_ring_term(t->b) + ")";
    case RingTerm::Kind::Mul:
      return "(* " + print_ring_term(t->a) + " " + print_ring_term(t->b) + ")";
  }
  throw std::logic_error("print_ring_term: bad kind");
}

inline std::string print_ring(const RingFormulaPtr& f) {
  if (!f) throw std::invalid_argument("print_ring: null formula");
  switch (f->kind) {
    case RingFormula::Kind::Eq:
      return "(= " + print_ring_term(f->t1) + " " + print_ring_term(f->t2) + ")";
    case RingFormula::Kind::PredF: return "(F " + print_ring_term(f->t1) + ")";
    case RingFormula::Kind::PredB: return "(B " + print_ring_term(f->t1) + ")";
    case RingFormula::Kind::PredDenp:
      return "(Denp " + print_ring_term(f->t1) + " " + print_ring_term(f->t2) + ")";
    case RingFormula::Kind::PredInts:
      return "(Ints " + print_ring_term(f->t1) + " " + print_ring_term(f->t2) + ")";
    case RingFormula::Kind::PredSq: return "(Sq " + print_ring_term(f->t1) + ")";
    case RingFormula::Kind::CharNe: return "(charne " + std::to_string(f->chr) + ")";
    case RingFormula::Kind::CharEq: return "(chareq " + std::to_string(f->chr) + ")";
    case RingFormula::Kind::And:
      return "(and " + print_ring(f->f1) + " " + print_ring(f->f2) + ")";
    case RingFormula::Kind::Or:
      return "(or " + print_ring(f->f1) + " " + print_ring(f->f2) + ")";
    case RingFormula::Kind::Exists:
      return "(E " + f->var + " " + print_ring(f->f1) + ")";
  }
  throw std::logic_error("print_ring: bad kind");
}

namespace detail {

class SexpParser {
 public:
  explicit SexpParser(const std::string& text) : s_(text) {}

  RingFormulaPtr parse_formula_all() {
    RingFormulaPtr f = parse_formula();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("parse_ring at " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string token() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
           s_[pos_] != '(' && s_[pos_] != ')')
      ++pos_;
    if (pos_ == start) fail("expected token");
    return s_.substr(start, pos_ - start);
  }

  static bool is_int(const std::string& tok) {
    size_t i = (tok[0] == '-') ? 1 : 0;
    if (i == tok.size()) return false;
    for (; i < tok.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
    return true;
  }

  static bool is_symbol(const std::string& tok) {
    if (!(std::isalpha(static_cast<unsigned char>(tok[0])) || tok[0] == '_'))
      return false;
    for (char c : tok)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
  }

  int64_t parse_int_token() {
    std::string tok = token();
    if (!is_int(tok)) fail("expected integer, got '" + tok + "'");
    return std::stoll(tok);
  }

  RingTermPtr parse_term() {
    skip_ws();
    if (pos_ >= s_.size()) fail("expected term");
    if (s_[pos_] == '(') {
      ++pos_;
      std::string op = token();
      RingTermPtr x = parse_term();
      RingTermPtr y = parse_term();
      expect(')');
      if (op == "+") return term_add(std::move(x), std::move(y));
      if (op == "*") return term_mul(std::move(x), std::move(y));
      fail("unknown term operator '" + op + "'");
    }
    std::string tok = token();
    if (is_int(tok)) return term_lit(std::stoll(tok));
    if (tok == "t") return term_t();
    if (!is_symbol(tok)) fail("bad term token '" + tok + "'");
    return term_var(tok);
  }

  RingFormulaPtr parse_formula() {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != '(') fail("expected '('");
    ++pos_;
    std::string head = token();
    RingFormulaPtr out;
    if (head == "=") {
      RingTermPtr x = parse_term(), y = parse_term();
      out = ring_eq(std::move(x), std::move(y));
    } else if (head == "F") {
      out = ring_F(parse_term());
    } else if (head == "B") {
      out = ring_B(parse_term());
    } else if (head == "Denp") {
      RingTermPtr x = parse_term(), y = parse_term();
      out = ring_denp(std::move(x), std::move(y));
    } else if (head == "Ints") {
      RingTermPtr x = parse_term(), y = parse_term();
      out = ring_ints(std::move(x), std::move(y));
    } else if (head == "Sq") {
      out = ring_sq(parse_term());
    } else if (head == "charne") {
      out = ring_charne(parse_int_token());
    } else if (head == "chareq") {
      out = ring_chareq(parse_int_token());
    } else if (head == "and") {
      RingFormulaPtr x = parse_formula(), y = parse_formula();
      out = ring_and(std::move(x), std::move(y));
    } else if (head == "or") {
      RingFormulaPtr x = parse_formula(), y = parse_formula();
      out = ring_or(std::move(x), std::move(y));
    } else if (head == "E") {
      std::string var = token();
      if (!is_symbol(var) || var == "t") fail("bad bound variable '" + var + "'");
      out = ring_exists(var, parse_formula());
    } else {
      fail("unknown form '" + head + "'");
    }
    expect(')');
    return out;
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace detail

inline RingFormulaPtr parse_ring(const std::string& text) {
  detail::SexpParser p(text);
  return p.parse_formula_all();
}

// ---------------------------------------------------------------------------
// Arithmetic sentences over (N; 0, 1, +, |_p, <=), positive-existential.
// Concrete grammar:
//   sentence := 'E' var '.' sentence | disj
//   disj     := conj ('|' conj)*
//   conj     := atom ('&' atom)*
//   atom     := term ('=' | '<=' | 'divp' | 'sdivp') term
//   term     := summand ('+' summand)*
//   summand  := '0' | '1' | var
// 'sdivp' is the strict one-sided divisibility macro a |^p b, expanded by
// derive_strict_div into (a divp b) & (a <= b).
// ---------------------------------------------------------------------------

struct ArithSummand {
  enum class Kind { Zero, One, Var };
  Kind kind;
  std::string name;  // Var

  bool operator==(const ArithSummand& o) const {
    return kind == o.kind && name == o.name;
  }
};

struct ArithTerm {
  std::vector<ArithSummand> summands;  // nonempty

  bool operator==(const ArithTerm& o) const { return summands == o.summands; }
};

struct ArithFormula;
using ArithFormulaPtr = std::shared_ptr<const ArithFormula>;

struct ArithFormula {
  enum class Kind { Eq, Le, Divp, SDivp, And, Or, Exists };
  Kind kind;
  ArithTerm t1, t2;       // atoms
  ArithFormulaPtr f1, f2; // And/Or both; Exists: f1 = body
  std::string var;        // Exists
};

namespace detail {
inline ArithFormulaPtr mk_arith(ArithFormula f) {
  return std::make_shared<ArithFormula>(std::move(f));
}
}  // namespace detail

inline ArithFormulaPtr arith_atom(ArithFormula::Kind k, ArithTerm a, ArithTerm b) {
  if (k != ArithFormula::Kind::Eq && k != ArithFormula::Kind::Le &&
      k != ArithFormula::Kind::Divp && k != ArithFormula::Kind::SDivp)
    throw std::invalid_argument("arith_atom: not an atom kind");
  return detail::mk_arith({k, std::move(a), std::move(b), nullptr, nullptr, ""});
}
inline ArithFormulaPtr arith_and(ArithFormulaPtr x, ArithFormulaPtr y) {
  return detail::mk_arith({ArithFormula::Kind::And, {}, {}, std::move(x), std::move(y), ""});
}
inline ArithFormulaPtr arith_or(ArithFormulaPtr x, ArithFormulaPtr y) {
  return detail::mk_arith({ArithFormula::Kind::Or, {}, {}, std::move(x), std::move(y), ""});
}
inline ArithFormulaPtr arith_exists(std::string var, ArithFormulaPtr body) {
  return detail::mk_arith({ArithFormula::Kind::Exists, {}, {}, std::move(body), nullptr,
                           std::move(var)});
}

inline bool arith_equal(const ArithFormulaPtr& x, const ArithFormulaPtr& y) {
  if (x == y) return true;
  if (!x || !y || x->kind != y->kind) return false;
  switch (x->kind) {
    case ArithFormula::Kind::Eq:
    case ArithFormula::Kind::Le:
    case ArithFormula::Kind::Divp:
    case ArithFormula::Kind::SDivp:
      return x->t1 == y->t1 && x->t2 == y->t2;
    case ArithFormula::Kind::And:
    case ArithFormula::Kind::Or:
      return arith_equal(x->f1, y->f1) && arith_equal(x->f2, y->f2);
    case ArithFormula::Kind::Exists:
      return x->var == y->var && arith_equal(x->f1, y->f1);
  }
  return false;
}

namespace detail {

class ArithParser {
 public:
  explicit ArithParser(const std::string& text) : s_(text) {}

  ArithFormulaPtr parse_sentence_all() {
    ArithFormulaPtr f = parse_sentence();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("parse_arith at " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek_char(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  bool eat_char(char c) {
    if (!peek_char(c)) return false;
    ++pos_;
    return true;
  }

  // An identifier or keyword: [A-Za-z_][A-Za-z0-9_]*.
  std::string peek_word() {
    skip_ws();
    size_t i = pos_;
    if (i >= s_.size() ||
        !(std::isalpha(static_cast<unsigned char>(s_[i])) || s_[i] == '_'))
      return "";
    size_t start = i;
    while (i < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[i])) || s_[i] == '_'))
      ++i;
    return s_.substr(start, i - start);
  }

  std::string take_word() {
    std::string w = peek_word();
    if (w.empty()) fail("expected identifier");
    pos_ += w.size();
    skip_ws();
    return w;
  }

  ArithFormulaPtr parse_sentence() {
    if (peek_word() == "E") {
      take_word();
      std::string var = take_word();
      if (var == "E" || var == "divp" || var == "sdivp")
        fail("'" + var + "' cannot be a variable");
      if (!eat_char('.')) fail("expected '.' after quantified variable");
      bound_.push_back(var);
      ArithFormulaPtr body = parse_sentence();
      bound_.pop_back();
      return arith_exists(var, std::move(body));
    }
    return parse_disj();
  }

  ArithFormulaPtr parse_disj() {
    ArithFormulaPtr acc = parse_conj();
    while (eat_char('|')) acc = arith_or(std::move(acc), parse_conj());
    return acc;
  }

  ArithFormulaPtr parse_conj() {
    ArithFormulaPtr acc = parse_atom();
    while (eat_char('&')) acc = arith_and(std::move(acc), parse_atom());
    return acc;
  }

  ArithFormulaPtr parse_atom() {
    ArithTerm lhs = parse_term();
    skip_ws();
    ArithFormula::Kind k;
    if (eat_char('=')) {
      k = ArithFormula::Kind::Eq;
    } else if (peek_char('<')) {
      ++pos_;
      if (!eat_char('=')) fail("expected '<='");
      k = ArithFormula::Kind::Le;
    } else {
      std::string w = peek_word();
      if (w == "divp") {
        take_word();
        k = ArithFormula::Kind::Divp;
      } else if (w == "sdivp") {
        take_word();
        k = ArithFormula::Kind::SDivp;
      } else {
        fail("expected '=', '<=', 'divp', or 'sdivp'");
      }
    }
    ArithTerm rhs = parse_term();
    return arith_atom(k, std::move(lhs), std::move(rhs));
  }

  ArithTerm parse_term() {
    ArithTerm t;
    t.summands.push_back(parse_summand());
    while (eat_char('+')) t.summands.push_back(parse_summand());
    return t;
  }

  ArithSummand parse_summand() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '0') {
      ++pos_;
      return {ArithSummand::Kind::Zero, ""};
    }
    if (pos_ < s_.size() && s_[pos_] == '1') {
      ++pos_;
      return {ArithSummand::Kind::One, ""};
    }
    std::string w = peek_word();
    if (w.empty() || w == "E" || w == "divp" || w == "sdivp")
      fail("expected '0', '1', or a variable");
    for (const std::string& b : bound_)
      if (b == w) {
        pos_ += w.size();
        return {ArithSummand::Kind::Var, w};
      }
    fail("unbound variable '" + w + "'");
  }

  const std::string& s_;
  size_t pos_ = 0;
  std::vector<std::string> bound_;
};

}  // namespace detail

inline ArithFormulaPtr parse_arith(const std::string& text) {
  detail::ArithParser p(text);
  return p.parse_sentence_all();
}

/// Concrete-grammar rendering, round-trippable by parse_arith.  Only prenex
/// shapes (quantifier prefix over a disjunction of conjunctions of atoms) are
/// expressible in the grammar; other shapes are rejected.
inline std::string print_arith(const ArithFormulaPtr& f) {
  if (!f) throw std::invalid_argument("print_arith: null");
  auto term_str = [](const ArithTerm& t) {
    std::string out;
    for (size_t i = 0; i < t.summands.size(); ++i) {
      if (i) out += " + ";
      switch (t.summands[i].kind) {
        case ArithSummand::Kind::Zero: out += "0"; break;
        case ArithSummand::Kind::One: out += "1"; break;
        case ArithSummand::Kind::Var: out += t.summands[i].name; break;
      }
    }
    return out;
  };
  switch (f->kind) {
    case ArithFormula::Kind::Eq:
      return term_str(f->t1) + " = " + term_str(f->t2);
    case ArithFormula::Kind::Le:
      return term_str(f->t1) + " <= " + term_str(f->t2);
    case ArithFormula::Kind::Divp:
      return term_str(f->t1) + " divp " + term_str(f->t2);
    case ArithFormula::Kind::SDivp:
      return term_str(f->t1) + " sdivp " + term_str(f->t2);
    case ArithFormula::Kind::And: {
      // Conjunction binds tighter than disjunction; children must be atoms
      // or conjunctions.
      for (const ArithFormulaPtr& c : {f->f1, f->f2})
        if (c->kind == ArithFormula::Kind::Or || c->kind == ArithFormula::Kind::Exists)
          throw std::invalid_argument("print_arith: not expressible in the grammar");
      return print_arith(f->f1) + " & " + print_arith(f->f2);
    }
    case ArithFormula::Kind::Or: {
      for (const ArithFormulaPtr& c : {f->f1, f->f2})
        if (c->kind == ArithFormula::Kind::Exists)
          throw std::invalid_argument("print_arith: not expressible in the grammar");
      return print_arith(f->f1) + " | " + print_arith(f->f2);
    }
    case ArithFormula::Kind::Exists:
      return "E " + f->var + ". " + print_arith(f->f1);
  }
  throw std::logic_error("print_arith: bad kind");
}

/// Expands every strict-divisibility macro atom a |^p b into
/// (a |_p b) & (a <= b), preserving all other structure.
inline ArithFormulaPtr derive_strict_div(const ArithFormulaPtr& f) {
  if (!f) throw std::invalid_argument("derive_strict_div: null");
  switch (f->kind) {
    case ArithFormula::Kind::SDivp:
      return arith_and(arith_atom(ArithFormula::Kind::Divp, f->t1, f->t2),
                       arith_atom(ArithFormula::Kind::Le, f->t1, f->t2));
    case ArithFormula::Kind::Eq:
    case ArithFormula::Kind::Le:
    case ArithFormula::Kind::Divp:
      return f;
    case ArithFormula::Kind::And:
      return arith_and(derive_strict_div(f->f1), derive_strict_div(f->f2));
    case ArithFormula::Kind::Or:
      return arith_or(derive_strict_div(f->f1), derive_strict_div(f->f2));
    case ArithFormula::Kind::Exists:
      return arith_exists(f->var, derive_strict_div(f->f1));
  }
  throw std::logic_error("derive_strict_div: bad kind");
}

// ---------------------------------------------------------------------------
// Bounded evaluation over N.
// ---------------------------------------------------------------------------

namespace detail {

/// a |_p b over N: some p-power multiple of one side equals the other.
inline bool divp_holds(int64_t a, int64_t b, int64_t p) {
  if (a == b) return true;  // s = 0 (covers a = b = 0)
  if (a == 0 || b == 0) return false;
  int64_t lo = std::min(a, b), hi = std::max(a, b);
  if (hi % lo != 0) return false;
  int64_t r = hi / lo;
  while (r % p == 0) r /= p;
  return r == 1;
}

/// a |^p b: b = p^s a for some s >= 0 (one-sided).
inline bool sdivp_holds(int64_t a, int64_t b, int64_t p) {
  if (a == b) return true;
  if (a == 0 || b == 0) return false;
  if (b % a != 0) return false;
  int64_t r = b / a;
  while (r % p == 0) r /= p;
  return r == 1;
}

inline int64_t arith_term_value(const ArithTerm& t,
                                const std::map<std::string, int64_t>& env) {
  int64_t v = 0;
  for (const ArithSummand& s : t.summands) {
    switch (s.kind) {
      case ArithSummand::Kind::Zero: break;
      case ArithSummand::Kind::One: v += 1; break;
      case ArithSummand::Kind::Var: {
        auto it = env.find(s.name);
        if (it == env.end())
          throw std::invalid_argument("eval_arith: unbound variable " + s.name);
        v += it->second;
        break;
      }
    }
  }
  return v;
}

inline bool eval_arith_rec(const ArithFormulaPtr& f, int64_t bound, int64_t p,
                           std::map<std::string, int64_t>& env) {
  switch (f->kind) {
    case ArithFormula::Kind::Eq:
      return arith_term_value(f->t1, env) == arith_term_value(f->t2, env);
    case ArithFormula::Kind::Le:
      return arith_term_value(f->t1, env) <= arith_term_value(f->t2, env);
    case ArithFormula::Kind::Divp:
      return divp_holds(arith_term_value(f->t1, env), arith_term_value(f->t2, env), p);
    case ArithFormula::Kind::SDivp:
      return sdivp_holds(arith_term_value(f->t1, env), arith_term_value(f->t2, env), p);
    case ArithFormula::Kind::And:
      return eval_arith_rec(f->f1, bound, p, env) && eval_arith_rec(f->f2, bound, p, env);
    case ArithFormula::Kind::Or:
      return eval_arith_rec(f->f1, bound, p, env) || eval_arith_rec(f->f2, bound, p, env);
    case ArithFormula::Kind::Exists: {
      for (int64_t v = 0; v <= bound; ++v) {
        env[f->var] = v;
        if (eval_arith_rec(f->f1, bound, p, env)) {
          env.erase(f->var);
          return true;
        }
      }
      env.erase(f->var);
      return false;
    }
  }
  throw std::logic_error("eval_arith: bad kind");
}

}  // namespace detail

/// Bounded existential search over [0, search_bound]^vars.  "True" is
/// definitive; FalseAtBound is inconclusive by design.
inline EvalResult eval_arith(const ArithFormulaPtr& sentence, int64_t search_bound,
                             int64_t p) {
  if (search_bound < 0) throw std::invalid_argument("eval_arith: negative bound");
  if (p < 2) throw std::invalid_argument("eval_arith: p must be at least 2");
  std::map<std::string, int64_t> env;
  return detail::eval_arith_rec(sentence, search_bound, p, env)
             ? EvalResult::True
             : EvalResult::FalseAtBound;
}

}  // namespace fqt
