// Experiment runners: Möbius-orbit behavedness sweeps, the D_l candidate
// search with checkpoint/resume, and the named verification suites.  Every
// runner returns a versioned JSON report that echoes its full configuration;
// result rows are deterministic functions of the configuration so reruns
// reproduce them byte for byte (wall-clock fields excluded).
#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fqt/behaved.hpp"
#include "fqt/eval.hpp"
#include "fqt/galois.hpp"
#include "fqt/norms.hpp"
#include "fqt/pasten.hpp"
#include "fqt/poly.hpp"
#include "fqt/rational.hpp"
#include "fqt/reduction.hpp"

namespace fqt {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "fqt 0.1.0";

namespace detail {

inline nlohmann::json report_shell(const std::string& experiment, nlohmann::json config) {
  return nlohmann::json{{"schema_version", kReportSchemaVersion},
                        {"tool", kToolVersion},
                        {"experiment", experiment},
                        {"config", std::move(config)}};
}

inline nlohmann::json behaved_trace(const BehavedReport& rep) {
  nlohmann::json wit = nlohmann::json::array();
  for (const BehavedWitness& w : rep.witnesses)
    wit.push_back({{"place", w.place.str()}, {"valuation", w.k}});
  nlohmann::json exc = nlohmann::json::array();
  for (const ExcludedPlace& e : rep.excluded)
    exc.push_back({{"place", e.place.str()},
                   {"valuation", e.v},
                   {"reason", to_string(e.reason)}});
  return nlohmann::json{
      {"behaved", rep.is_behaved}, {"witnesses", wit}, {"excluded", exc}};
}

inline nlohmann::json norm_trace(const NormReport& rep) {
  nlohmann::json rows = nlohmann::json::array();
  for (const NormConditionRow& r : rep.rows)
    rows.push_back({{"place", r.place.str()},
                    {"valuation", r.valuation},
                    {"place_degree", r.place_degree},
                    {"inert", r.inert},
                    {"satisfied", r.satisfied}});
  return nlohmann::json{{"is_norm", rep.is_norm}, {"rows", rows}};
}

/// Partitions [0, n) across `jobs` threads; fn(i) must only touch slot i of
/// its output, so the merged result is independent of the thread count.
template <class Fn>
void parallel_for(int64_t n, int jobs, Fn fn) {
  if (jobs <= 1 || n <= 1) {
    for (int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  int width = jobs > n ? static_cast<int>(n) : jobs;
  for (int w = 0; w < width; ++w)
    pool.emplace_back([=] {
      for (int64_t i = w; i < n; i += width) fn(i);
    });
  for (std::thread& th : pool) th.join();
}

struct MsClock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Möbius-orbit behavedness sweep
// ---------------------------------------------------------------------------

/// One representative per projective scaling class of invertible
/// (alpha, beta, gamma, delta): the first nonzero entry is normalized to 1.
/// The list has q^3 - q entries, in lexicographic index order.
inline std::vector<MobiusMap> mobius_classes(const FieldSpec* F) {
  std::vector<MobiusMap> out;
  int64_t q = F->q();
  for (int64_t a = 0; a < q; ++a)
    for (int64_t b = 0; b < q; ++b)
      for (int64_t c = 0; c < q; ++c)
        for (int64_t d = 0; d < q; ++d) {
          int64_t first = a != 0 ? a : b != 0 ? b : c != 0 ? c : d;
          if (first != 1) continue;
          Fq A = Fq::from_index(F, a), B = Fq::from_index(F, b);
          Fq C = Fq::from_index(F, c), D = Fq::from_index(F, d);
          if ((A * D - B * C).is_zero()) continue;
          out.push_back(MobiusMap(A, B, C, D));
        }
  return out;
}

/// The published list of non-behaved Möbius orbits: for each of these u the
/// literature reports that no invertible transform (alpha u + beta)/(gamma u
/// + delta) is 2-behaved, nor is any Frobenius power of one.
struct CounterexampleEntry {
  int64_t p;
  const char* num;
  const char* den;
};

inline const std::vector<CounterexampleEntry>& counterexample_entries() {
  static const std::vector<CounterexampleEntry> entries = {
      {3, "t^6", "t^6+2"},
      {5, "t^6+2", "t^6+t^2+2"},
      {7, "t^6+2", "t^6+t^2+2"},
      {11, "t^8+1", "t^8+t^6+t^4+t^2+1"},
      {13, "t^8+1", "t^8+t^4+1"},
  };
  return entries;
}

/// Sweeps every Möbius class of u, deciding l-behavedness of the transform
/// and of its Frobenius powers up to p^max_frob_power.  Verdicts are
/// reported with their full place traces; nothing is asserted against the
/// published expectation — agreement is recorded in the summary.
inline nlohmann::json verify_counterexample(const RationalFunction& u, int64_t l = 2,
                                            int max_frob_power = 1, int jobs = 1) {
  if (u.is_constant())
    throw std::invalid_argument("verify_counterexample: u must be nonconstant");
  if (max_frob_power < 0)
    throw std::invalid_argument("verify_counterexample: negative Frobenius bound");
  const FieldSpec* F = u.field();
  int64_t p = F->p();
  detail::MsClock clock;

  nlohmann::json report = detail::report_shell(
      "counterexamples", {{"p", p},
                          {"n", F->n()},
                          {"l", l},
                          {"u", u.str()},
                          {"max_frob_power", max_frob_power},
                          {"jobs", jobs}});

  std::vector<MobiusMap> classes = mobius_classes(F);
  int64_t n = static_cast<int64_t>(classes.size());
  std::vector<nlohmann::json> rows(static_cast<size_t>(n));
  std::vector<int> invariant_ok(static_cast<size_t>(n), 1);
  std::vector<int> commutes_ok(static_cast<size_t>(n), 1);

  detail::parallel_for(n, jobs, [&](int64_t i) {
    const MobiusMap& m = classes[static_cast<size_t>(i)];
    nlohmann::json row = {{"alpha", m.a().index()},
                          {"beta", m.b().index()},
                          {"gamma", m.c().index()},
                          {"delta", m.d().index()}};
    RationalFunction bot =
        RationalFunction(Poly::constant(m.c())) * u + RationalFunction(Poly::constant(m.d()));
    if (bot.is_zero()) {
      row["skipped"] = "transform denominator vanishes";
      rows[static_cast<size_t>(i)] = std::move(row);
      return;
    }
    RationalFunction v = m.apply(u);
    if (v.is_constant()) {
      row["skipped"] = "transform is constant";
      rows[static_cast<size_t>(i)] = std::move(row);
      return;
    }
    row["transform"] = v.str();
    nlohmann::json verdicts = nlohmann::json::array();
    bool base_behaved = false;
    int64_t power = 1;
    for (int e = 0; e <= max_frob_power; ++e) {
      RationalFunction w = e == 0 ? v : v.pow(power);
      BehavedReport rep = is_l_behaved(w, l);
      nlohmann::json entry = detail::behaved_trace(rep);
      entry["frob_exponent"] = e;
      if (e == 0)
        base_behaved = rep.is_behaved;
      else if (rep.is_behaved != base_behaved)
        invariant_ok[static_cast<size_t>(i)] = 0;
      verdicts.push_back(std::move(entry));
      if (e < max_frob_power) power *= p;
    }
    // Over a prime constant field the Frobenius fixes every coefficient, so
    // transforming u^p must equal the p-th power of the transform.
    if (F->n() == 1 && !(m.apply(u.pow(p)) == v.pow(p)))
      commutes_ok[static_cast<size_t>(i)] = 0;
    row["verdicts"] = std::move(verdicts);
    row["behaved"] = base_behaved;
    rows[static_cast<size_t>(i)] = std::move(row);
  });

  nlohmann::json out_rows = nlohmann::json::array();
  nlohmann::json behaved_list = nlohmann::json::array();
  int64_t skipped = 0, invariant_violations = 0, commute_violations = 0;
  for (int64_t i = 0; i < n; ++i) {
    const nlohmann::json& row = rows[static_cast<size_t>(i)];
    if (row.contains("skipped"))
      ++skipped;
    else if (row.at("behaved").get<bool>())
      behaved_list.push_back({{"alpha", row.at("alpha")},
                              {"beta", row.at("beta")},
                              {"gamma", row.at("gamma")},
                              {"delta", row.at("delta")},
                              {"transform", row.at("transform")}});
    if (!invariant_ok[static_cast<size_t>(i)]) ++invariant_violations;
    if (!commutes_ok[static_cast<size_t>(i)]) ++commute_violations;
    out_rows.push_back(row);
  }
  report["results"] = std::move(out_rows);
  report["summary"] = {
      {"classes", n},
      {"skipped", skipped},
      {"behaved_transforms", behaved_list},
      {"behaved_count", behaved_list.size()},
      {"expected_from_literature", "no behaved transform in any Frobenius power"},
      {"agrees_with_literature", behaved_list.empty()},
      {"frobenius_invariance_violations", invariant_violations},
      {"frobenius_commutation_violations", commute_violations}};
  report["wall_ms"] = clock.ms();
  return report;
}

// ---------------------------------------------------------------------------
// D_l candidate search
// ---------------------------------------------------------------------------

struct SearchDConfig {
  int64_t p = 3;
  int64_t l = 2;
  int64_t num_deg = 1;
  int64_t den_deg = 0;
  int64_t u_height = 2;
  std::string checkpoint_path;   // empty disables checkpointing
  int64_t checkpoint_every = 25; // candidates per checkpoint block
  int64_t stop_after = -1;       // max candidates this invocation, -1 = all
  int jobs = 1;
};

namespace detail {

inline nlohmann::json search_d_config_echo(const SearchDConfig& cfg) {
  return nlohmann::json{{"p", cfg.p},
                        {"l", cfg.l},
                        {"num_deg", cfg.num_deg},
                        {"den_deg", cfg.den_deg},
                        {"u_height", cfg.u_height}};
}

/// Candidates A(X)/B(X) in canonical reduced form: B monic, gcd(A, B)
/// constant.  A-major counter order; the zero candidate appears once (as
/// 0/1).  Stored over F_p(t) and printed with variable X.
inline std::vector<RationalFunction> search_d_candidates(const FieldSpec* F,
                                                         int64_t num_deg,
                                                         int64_t den_deg) {
  std::vector<RationalFunction> out;
  std::vector<Poly> nums = polys_up_to(F, num_deg);
  std::vector<Poly> dens;
  for (const Poly& b : polys_up_to(F, den_deg))
    if (!b.is_zero() && b.is_monic()) dens.push_back(b);
  std::sort(dens.begin(), dens.end(), [](const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return Poly::poly_less(a, b);
  });
  for (const Poly& a : nums)
    for (const Poly& b : dens) {
      if (!gcd(a, b).is_constant()) continue;
      out.push_back(RationalFunction(a, b));
    }
  return out;
}

}  // namespace detail

/// Exhaustive falsification search: does some D(X) = A(X)/B(X) make D(u)
/// l-behaved for every nonconstant u up to the height bound?  Survivors and
/// least falsifying inputs are reported; the sweep checkpoints its progress
/// and resumes from a compatible checkpoint file.
inline nlohmann::json search_d(const SearchDConfig& cfg) {
  if (cfg.num_deg < 0 || cfg.den_deg < 0 || cfg.u_height < 1)
    throw std::invalid_argument("search_d: bounds out of range");
  if (cfg.checkpoint_every < 1)
    throw std::invalid_argument("search_d: checkpoint_every must be positive");
  const FieldSpec* F = FieldSpec::get(cfg.p);
  detail::MsClock clock;
  nlohmann::json config = detail::search_d_config_echo(cfg);

  std::vector<RationalFunction> candidates =
      detail::search_d_candidates(F, cfg.num_deg, cfg.den_deg);
  std::vector<RationalFunction> inputs;
  for (const RationalFunction& u : detail::rationals_up_to(F, cfg.u_height))
    if (!u.is_constant()) inputs.push_back(u);

  int64_t total = static_cast<int64_t>(candidates.size());
  int64_t start = 0;
  nlohmann::json results = nlohmann::json::array();

  if (!cfg.checkpoint_path.empty()) {
    std::ifstream in(cfg.checkpoint_path);
    if (in) {
      nlohmann::json saved = nlohmann::json::parse(in);
      if (saved.at("config") != config)
        throw std::invalid_argument("search_d: checkpoint belongs to a different config");
      start = saved.at("next_index").get<int64_t>();
      results = saved.at("results");
    }
  }

  auto write_checkpoint = [&](int64_t next_index) {
    if (cfg.checkpoint_path.empty()) return;
    nlohmann::json saved = {{"schema_version", kReportSchemaVersion},
                            {"experiment", "search-d"},
                            {"config", config},
                            {"next_index", next_index},
                            {"results", results}};
    std::string tmp = cfg.checkpoint_path + ".tmp";
    {
      std::ofstream out(tmp);
      out << saved.dump();
    }
    std::rename(tmp.c_str(), cfg.checkpoint_path.c_str());
  };

  int64_t budget = cfg.stop_after < 0 ? total : cfg.stop_after;
  int64_t index = start;
  while (index < total && budget > 0) {
    int64_t block = std::min({cfg.checkpoint_every, total - index, budget});
    std::vector<nlohmann::json> rows(static_cast<size_t>(block));
    detail::parallel_for(block, cfg.jobs, [&](int64_t k) {
      const RationalFunction& D = candidates[static_cast<size_t>(index + k)];
      nlohmann::json row = {{"candidate", D.str('X')}};
      bool survived = true;
      int64_t tested = 0;
      for (const RationalFunction& u : inputs) {
        ++tested;
        RationalFunction value = substitute(D, u);
        if (!is_l_behaved(value, cfg.l).is_behaved) {
          survived = false;
          row["falsified_by"] = u.str();
          row["value"] = value.str();
          break;
        }
      }
      row["survived"] = survived;
      row["tested"] = tested;
      rows[static_cast<size_t>(k)] = std::move(row);
    });
    for (nlohmann::json& row : rows) results.push_back(std::move(row));
    index += block;
    budget -= block;
    write_checkpoint(index);
  }

  bool completed = index >= total;
  nlohmann::json report = detail::report_shell("search-d", config);
  report["config"]["checkpoint_every"] = cfg.checkpoint_every;
  report["config"]["jobs"] = cfg.jobs;
  report["completed"] = completed;
  report["next_index"] = index;
  report["results"] = results;
  if (completed) {
    nlohmann::json survivors = nlohmann::json::array();
    int64_t eliminated = 0;
    for (const nlohmann::json& row : results) {
      if (row.at("survived").get<bool>())
        survivors.push_back(row.at("candidate"));
      else
        ++eliminated;
    }
    report["summary"] = {{"candidates", total},
                         {"inputs_swept", inputs.size()},
                         {"survivors", survivors},
                         {"eliminated", eliminated}};
  }
  report["wall_ms"] = clock.ms();
  return report;
}

// ---------------------------------------------------------------------------
// Named suites
// ---------------------------------------------------------------------------

namespace detail {

inline RationalFunction random_rational(const FieldSpec* F, SplitMix64& rng,
                                        int64_t max_deg, bool nonconstant) {
  int64_t q = F->q();
  for (;;) {
    auto draw = [&](int64_t deg_bound, bool nonzero) {
      for (;;) {
        std::vector<Fq> cs;
        int64_t d = static_cast<int64_t>(rng.next() % static_cast<uint64_t>(deg_bound + 1));
        for (int64_t i = 0; i <= d; ++i)
          cs.push_back(Fq::from_index(
              F, static_cast<int64_t>(rng.next() % static_cast<uint64_t>(q))));
        Poly f = Poly::from_coeffs(F, cs);
        if (!nonzero || !f.is_zero()) return f;
      }
    };
    RationalFunction r(draw(max_deg, false), draw(max_deg, true));
    if (nonconstant && r.is_constant()) continue;
    return r;
  }
}

/// Kummer complementarity sweep over all monic u of degree <= max_deg:
/// exactly one of "2-behaved" and "norm from the quadratic constant-field
/// extension" should hold.  Inconsistent rows are collected, not fatal.
inline nlohmann::json suite_corollary36(int jobs) {
  nlohmann::json rows = nlohmann::json::array();
  nlohmann::json discrepancies = nlohmann::json::array();
  for (int64_t p : {3, 5}) {
    const FieldSpec* F = FieldSpec::get(p);
    ExtensionSpec ext = ExtensionSpec::kummer(F, 2, nonsquare_constant(F));
    std::vector<Poly> polys;
    for (const Poly& u : polys_up_to(F, 4))
      if (!u.is_zero() && u.is_monic() && !u.is_constant()) polys.push_back(u);
    std::vector<nlohmann::json> local(polys.size());
    parallel_for(static_cast<int64_t>(polys.size()), jobs, [&](int64_t i) {
      Corollary36Report rep = corollary36_check(polys[static_cast<size_t>(i)], 2, ext);
      local[static_cast<size_t>(i)] =
          nlohmann::json{{"p", p},
                         {"u", rep.u.str()},
                         {"l", rep.l},
                         {"behaved", behaved_trace(rep.behaved)},
                         {"norm", norm_trace(rep.norm)},
                         {"consistent", rep.consistent}};
    });
    for (nlohmann::json& row : local) {
      if (!row.at("consistent").get<bool>()) discrepancies.push_back(row);
      rows.push_back(std::move(row));
    }
  }
  return nlohmann::json{{"ok", true},  // discrepancies are findings, not failures
                        {"rows", rows},
                        {"discrepancies", discrepancies},
                        {"discrepancy_count", discrepancies.size()}};
}

/// Frobenius-quotient agreement over F_13: the square-product criterion must
/// coincide with the exact power-relation decision on random pairs and on
/// constructed power pairs.  Any mismatch is fatal.
inline nlohmann::json suite_pasten_f13(uint64_t seed) {
  const FieldSpec* F = FieldSpec::get(13);
  PastenParams params = choose_params(0, 13);
  SplitMix64 rng(seed);
  nlohmann::json mismatches = nlohmann::json::array();
  int64_t agree = 0, holds = 0;
  auto check = [&](const RationalFunction& f, const RationalFunction& h,
                   const char* kind) {
    bool criterion = pasten_criterion(f, h, params);
    bool truth = den_p(f, h).has_value();
    if (criterion == truth) {
      ++agree;
      if (truth) ++holds;
    } else {
      mismatches.push_back({{"kind", kind},
                            {"f", f.str()},
                            {"h", h.str()},
                            {"criterion", criterion},
                            {"ground_truth", truth}});
    }
  };
  for (int i = 0; i < 200; ++i) {
    RationalFunction f = random_rational(F, rng, 3, true);
    RationalFunction h = random_rational(F, rng, 3, true);
    check(f, h, "random");
  }
  for (int i = 0; i < 50; ++i) {
    RationalFunction h = random_rational(F, rng, 3, true);
    int64_t s = static_cast<int64_t>(rng.next() % 3);
    int64_t e = 1;
    for (int64_t j = 0; j < s; ++j) e *= 13;
    check(h.pow(e), h, "constructed");
  }
  return nlohmann::json{{"ok", mismatches.empty()},
                        {"pairs", 250},
                        {"agreements", agree},
                        {"relation_holds", holds},
                        {"mismatches", mismatches}};
}

/// Sentence-level round trip: the fixed positive-existential suites must
/// keep their truth value through translation and bounded ring evaluation.
inline nlohmann::json suite_reduction_e2e() {
  const std::vector<std::string> true_suite = {
      "1 = 1",
      "1 + 1 = 1 + 1",
      "E a. a + a = 1 + 1",
      "E a. a + a = 1 + 1 + 1 + 1",
      "E a. a = 0",
      "E a. E b. a + 1 = b & a <= b",
      "E a. E b. a = 1 & a divp b & a + 1 <= b",
      "E a. a divp a",
      "E a. E b. E c. a = 1 & b = 1 & a + b = c",
      "E a. E b. a <= b & b <= a & a = 1",
      "E a. 0 <= a & a <= 1",
  };
  const std::vector<std::string> false_suite = {
      "E a. a + a = 1",
      "E a. E b. a + b = a & b = 1",
      "E a. a + 1 + 1 = a + 1",
  };
  nlohmann::json rows = nlohmann::json::array();
  bool ok = true;
  std::string translation_3, translation_5;
  for (int64_t p : {3, 5}) {
    const FieldSpec* F = FieldSpec::get(p);
    RationalFunction t(Poly::t(F));
    std::string all_translations;
    auto run = [&](const std::string& s, bool expect_true) {
      ArithFormulaPtr ast = parse_arith(s);
      RingFormulaPtr ring =
          translate(ast, TranslateMode::AbstractPredicates, 0, ParameterPolicy::FixedT);
      all_translations += print_ring(ring) + "\n";
      EvalResult nat = eval_arith(ast, 10, p);
      EvalResult rg = eval_ring(ring, t, 2, EvalBudget{9, F}).verdict;
      bool pass = expect_true
                      ? (nat == EvalResult::True && rg == EvalResult::True)
                      : (nat == EvalResult::FalseAtBound && rg == EvalResult::FalseAtBound);
      if (!pass) ok = false;
      rows.push_back({{"p", p},
                      {"sentence", s},
                      {"expected", expect_true ? "true" : "false-at-bound"},
                      {"arith", nat == EvalResult::True ? "true" : "false-at-bound"},
                      {"ring", rg == EvalResult::True ? "true" : "false-at-bound"},
                      {"pass", pass}});
    };
    for (const std::string& s : true_suite) run(s, true);
    for (const std::string& s : false_suite) run(s, false);
    (p == 3 ? translation_3 : translation_5) = all_translations;
  }
  bool uniform = translation_3 == translation_5;
  if (!uniform) ok = false;
  return nlohmann::json{{"ok", ok},
                        {"sentences", true_suite.size() + false_suite.size()},
                        {"translation_uniform_across_p", uniform},
                        {"rows", rows}};
}

}  // namespace detail

/// Runs a named verification suite.  "ok" in the body is false exactly when
/// a fatal invariant was violated; corollary36-sweep reports discrepancies
/// without failing.
inline nlohmann::json run_suite(const std::string& name, uint64_t seed = 0,
                                int jobs = 1) {
  detail::MsClock clock;
  nlohmann::json body;
  if (name == "corollary36-sweep")
    body = detail::suite_corollary36(jobs);
  else if (name == "pasten-f13")
    body = detail::suite_pasten_f13(seed);
  else if (name == "reduction-e2e")
    body = detail::suite_reduction_e2e();
  else
    throw std::invalid_argument("run_suite: unknown suite '" + name + "'");
  nlohmann::json report = detail::report_shell(
      "run-suite", {{"suite", name}, {"seed", seed}, {"jobs", jobs}});
  report.update(body);
  report["wall_ms"] = clock.ms();
  return report;
}

}  // namespace fqt
