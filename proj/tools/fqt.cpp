// fqt: exact arithmetic in F_q(t) from the command line — behavedness
// reports, the Frobenius-quotient criterion, norm decisions, two-squares
// decompositions, sentence translation and bounded evaluation, and the
// experiment sweeps.  Every subcommand emits a JSON report that echoes its
// effective configuration.  Exit codes: 0 success, 1 violated invariant,
// 2 usage error.
#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "fqt/behaved.hpp"
#include "fqt/eval.hpp"
#include "fqt/experiments.hpp"
#include "fqt/formula.hpp"
#include "fqt/galois.hpp"
#include "fqt/norms.hpp"
#include "fqt/pasten.hpp"
#include "fqt/poly.hpp"
#include "fqt/rational.hpp"
#include "fqt/reduction.hpp"

namespace {

using nlohmann::json;

struct Options {
  std::string field = "3";  // "p" or "p^n"
  int64_t l = 2;
  uint64_t seed = 0;
  std::string out;
  int jobs = 1;
};

void emit(const json& report, const std::string& out) {
  if (out.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream f(out);
    if (!f) throw std::invalid_argument("cannot open output path '" + out + "'");
    f << report.dump(2) << "\n";
  }
}

/// Raw text goes to stdout; with --out the same content is persisted inside
/// a config-echoing JSON report instead.
void emit_text(const std::string& text, json config, const char* experiment,
               const std::string& out) {
  if (out.empty()) {
    std::cout << text << "\n";
    return;
  }
  json report = fqt::detail::report_shell(experiment, std::move(config));
  report["formula"] = text;
  emit(report, out);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  std::string text = ss.str();
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

json witness_list(const std::vector<fqt::RationalFunction>& w) {
  json out = json::array();
  for (const fqt::RationalFunction& x : w) out.push_back(x.str());
  return out;
}

fqt::Fq parse_constant(const fqt::FieldSpec* F, const std::string& text) {
  fqt::Poly c = fqt::Poly::parse(F, text);
  if (!c.is_constant())
    throw std::invalid_argument("expected a constant, got '" + text + "'");
  return c.coeff(0);
}

int cmd_behaved(const Options& opt, const std::string& u_text) {
  const fqt::FieldSpec* F = fqt::FieldSpec::parse(opt.field);
  fqt::RationalFunction u = fqt::RationalFunction::parse(F, u_text);
  fqt::BehavedReport rep = fqt::is_l_behaved(u, opt.l);
  json report = fqt::detail::report_shell(
      "behaved", {{"p", F->p()}, {"n", F->n()}, {"l", opt.l}, {"u", u.str()}});
  report.update(fqt::detail::behaved_trace(rep));
  if (!u.is_zero()) {
    report["zero_divisor"] = json::parse(fqt::zero_divisor(u).to_json());
    report["pole_divisor"] = json::parse(fqt::pole_divisor(u).to_json());
  }
  emit(report, opt.out);
  return 0;
}

int cmd_pasten(const Options& opt, const std::string& f_text, const std::string& h_text) {
  const fqt::FieldSpec* F = fqt::FieldSpec::parse(opt.field);
  if (F->n() != 1) throw std::invalid_argument("pasten: prime field required");
  fqt::RationalFunction f = fqt::RationalFunction::parse(F, f_text);
  fqt::RationalFunction h = fqt::RationalFunction::parse(F, h_text);
  fqt::PastenParams params = fqt::choose_params(0, F->p());
  bool criterion = fqt::pasten_criterion(f, h, params);
  std::optional<int64_t> s = fqt::den_p(f, h);
  json report = fqt::detail::report_shell(
      "pasten", {{"p", F->p()}, {"g", 0}, {"M", params.M}, {"f", f.str()}, {"h", h.str()}});
  report["criterion"] = criterion;
  report["ground_truth_s"] = s ? json(*s) : json(nullptr);
  report["agree"] = criterion == s.has_value();
  emit(report, opt.out);
  return report["agree"].get<bool>() ? 0 : 1;
}

int cmd_emit_phi(const Options& opt, int64_t g, bool uniform) {
  json config = {{"g", g}, {"uniform", uniform}};
  std::string text;
  if (uniform) {
    text = fqt::print_ring(fqt::build_phi_uniform(g));
  } else {
    const fqt::FieldSpec* F = fqt::FieldSpec::parse(opt.field);
    if (F->n() != 1) throw std::invalid_argument("emit-phi: prime field required");
    config["p"] = F->p();
    text = fqt::print_ring(fqt::build_phi(g, F->p()));
  }
  emit_text(text, std::move(config), "emit-phi", opt.out);
  return 0;
}

int cmd_norm_check(const Options& opt, const std::string& u_text,
                   const std::string& ext_kind, const std::string& a_text,
                   bool want_witness) {
  const fqt::FieldSpec* F = fqt::FieldSpec::parse(opt.field);
  fqt::RationalFunction u = fqt::RationalFunction::parse(F, u_text);

  std::string kind = ext_kind;
  if (kind == "auto") kind = opt.l == F->p() ? "artin-schreier" : "kummer";
  fqt::Fq a = fqt::Fq::zero(F);
  if (!a_text.empty()) {
    a = parse_constant(F, a_text);
  } else if (kind == "kummer") {
    if (opt.l != 2)
      throw std::invalid_argument("norm-check: --a is required for Kummer degree != 2");
    a = fqt::nonsquare_constant(F);
  } else {
    a = fqt::Fq::one(F);
  }
  fqt::ExtensionSpec spec = kind == "kummer"
                                ? fqt::ExtensionSpec::kummer(F, opt.l, a)
                                : fqt::ExtensionSpec::artin_schreier(F, a);

  fqt::NormReport rep = fqt::is_norm_report(u, spec);
  json rows = json::array();
  for (const fqt::NormConditionRow& r : rep.rows)
    rows.push_back({{"place", r.place.str()},
                    {"valuation", r.valuation},
                    {"place_degree", r.place_degree},
                    {"inert", r.inert},
                    {"satisfied", r.satisfied},
                    {"rule", r.inert ? "inert place: valuation must be divisible by the degree"
                                     : "split place: no condition"}});
  json report = fqt::detail::report_shell(
      "norm-check", {{"p", F->p()},
                     {"n", F->n()},
                     {"l", opt.l},
                     {"u", u.str()},
                     {"extension", spec.str()},
                     {"defining_poly", spec.defining_poly().str()}});
  report["is_norm"] = rep.is_norm;
  report["rows"] = rows;
  if (want_witness && rep.is_norm) {
    std::optional<std::vector<fqt::RationalFunction>> w = fqt::norm_witness_exact(u, spec);
    if (!w) throw std::logic_error("norm-check: decision true but witness search failed");
    fqt::RationalFunction check = fqt::norm_of(*w, spec);
    if (!(check == u)) throw std::logic_error("norm-check: witness does not verify");
    report["witness"] = witness_list(*w);
    report["norm_form"] = fqt::build_norm_form(spec).P.str();
  }
  emit(report, opt.out);
  return 0;
}

int cmd_two_squares(const Options& opt, const std::string& f_text) {
  const fqt::FieldSpec* F = fqt::FieldSpec::parse(opt.field);
  fqt::Poly f = fqt::Poly::parse(F, f_text);
  std::optional<std::pair<fqt::Poly, fqt::Poly>> w = fqt::two_squares(f);
  json report = fqt::detail::report_shell(
      "two-squares", {{"p", F->p()}, {"n", F->n()}, {"f", f.str()}});
  report["expressible"] = w.has_value();
  if (w) {
    if (!(w->first * w->first + w->second * w->second == f))
      throw std::logic_error("two-squares: witness does not verify");
    report["a"] = w->first.str();
    report["b"] = w->second.str();
  }
  emit(report, opt.out);
  return 0;
}

int cmd_psi_c(const Options& opt, const std::string& u_text) {
  const fqt::FieldSpec* F = fqt::FieldSpec::parse(opt.field);
  fqt::RationalFunction u = fqt::RationalFunction::parse(F, u_text);
  fqt::PsiCResult res = fqt::psi_c(u);
  json report = fqt::detail::report_shell(
      "psi-c", {{"p", F->p()}, {"n", F->n()}, {"u", u.str()}});
  report["holds"] = res.holds;
  if (res.witness) {
    report["witness"] = {{"a", (*res.witness)[0].str()},
                        {"b", (*res.witness)[1].str()},
                        {"c", (*res.witness)[2].str()},
                        {"d", (*res.witness)[3].str()}};
  }
  emit(report, opt.out);
  return 0;
}

int cmd_translate(const Options& opt, const std::string& sentence_text,
                  const std::string& in_path, const std::string& mode_text,
                  const std::string& policy_text) {
  std::string sentence = in_path.empty() ? sentence_text : read_file(in_path);
  if (sentence.empty())
    throw std::invalid_argument("translate: give --sentence or --in");
  fqt::TranslateMode mode = mode_text == "expand-denp"
                                ? fqt::TranslateMode::ExpandDenp
                                : fqt::TranslateMode::AbstractPredicates;
  fqt::ParameterPolicy policy = policy_text == "quantified-bl"
                                    ? fqt::ParameterPolicy::QuantifiedBl
                                : policy_text == "fixed-t" ? fqt::ParameterPolicy::FixedT
                                                           : fqt::ParameterPolicy::FreeU;
  fqt::RingFormulaPtr ring =
      fqt::translate(fqt::parse_arith(sentence), mode, 0, policy);
  emit_text(fqt::print_ring(ring),
            {{"sentence", sentence}, {"mode", mode_text}, {"policy", policy_text}},
            "translate", opt.out);
  return 0;
}

int cmd_eval(const Options& opt, const std::string& formula_text,
             const std::string& formula_file, bool arith, const std::string& u_text,
             int64_t bound) {
  std::string text = formula_file.empty() ? formula_text : read_file(formula_file);
  if (text.empty())
    throw std::invalid_argument("eval: give --formula or --formula-file");
  json report;
  int rc = 0;
  if (arith) {
    const fqt::FieldSpec* F = fqt::FieldSpec::parse(opt.field);
    fqt::EvalResult res = fqt::eval_arith(fqt::parse_arith(text), bound, F->p());
    report = fqt::detail::report_shell(
        "eval", {{"sentence", text}, {"p", F->p()}, {"search_bound", bound}});
    report["result"] = res == fqt::EvalResult::True ? "true" : "false-at-bound";
  } else {
    const fqt::FieldSpec* F = fqt::FieldSpec::parse(opt.field);
    fqt::RationalFunction u = fqt::RationalFunction::parse(F, u_text);
    fqt::RingEvalOutcome out =
        fqt::eval_ring(fqt::parse_ring(text), u, opt.l, fqt::EvalBudget{bound, F});
    report = fqt::detail::report_shell("eval", {{"formula", text},
                                                {"p", F->p()},
                                                {"n", F->n()},
                                                {"l", opt.l},
                                                {"u", u.str()},
                                                {"degree_bound", bound}});
    report["result"] =
        out.verdict == fqt::EvalResult::True ? "true" : "false-at-bound";
    json wit = json::object();
    for (const auto& [name, value] : out.witnesses) wit[name] = value.str();
    report["witnesses"] = wit;
  }
  emit(report, opt.out);
  return rc;
}

int cmd_counterexamples(const Options& opt, bool all, const std::string& u_text,
                        int max_frob_power) {
  if (all) {
    json report = fqt::detail::report_shell(
        "counterexamples-all",
        {{"l", opt.l}, {"max_frob_power", max_frob_power}, {"jobs", opt.jobs}});
    json reports = json::array();
    json summaries = json::array();
    for (const fqt::CounterexampleEntry& e : fqt::counterexample_entries()) {
      const fqt::FieldSpec* F = fqt::FieldSpec::get(e.p);
      fqt::RationalFunction u(fqt::Poly::parse(F, e.num), fqt::Poly::parse(F, e.den));
      json r = fqt::verify_counterexample(u, opt.l, max_frob_power, opt.jobs);
      summaries.push_back({{"p", e.p},
                           {"u", u.str()},
                           {"behaved_count", r["summary"]["behaved_count"]},
                           {"agrees_with_literature", r["summary"]["agrees_with_literature"]}});
      reports.push_back(std::move(r));
    }
    report["reports"] = std::move(reports);
    report["summary"] = std::move(summaries);
    emit(report, opt.out);
    return 0;
  }

  const fqt::FieldSpec* F = fqt::FieldSpec::parse(opt.field);
  fqt::RationalFunction u = fqt::RationalFunction::zero(F);
  if (!u_text.empty()) {
    u = fqt::RationalFunction::parse(F, u_text);
  } else {
    bool found = false;
    for (const fqt::CounterexampleEntry& e : fqt::counterexample_entries())
      if (e.p == F->p() && F->n() == 1) {
        u = fqt::RationalFunction(fqt::Poly::parse(F, e.num), fqt::Poly::parse(F, e.den));
        found = true;
        break;
      }
    if (!found)
      throw std::invalid_argument(
          "counterexamples: no published entry for this field; give --u");
  }
  emit(fqt::verify_counterexample(u, opt.l, max_frob_power, opt.jobs), opt.out);
  return 0;
}

int cmd_search_d(const Options& opt, int64_t num_deg, int64_t den_deg,
                 int64_t u_height, const std::string& checkpoint,
                 int64_t checkpoint_every, int64_t stop_after) {
  const fqt::FieldSpec* F = fqt::FieldSpec::parse(opt.field);
  if (F->n() != 1) throw std::invalid_argument("search-d: prime field required");
  fqt::SearchDConfig cfg;
  cfg.p = F->p();
  cfg.l = opt.l;
  cfg.num_deg = num_deg;
  cfg.den_deg = den_deg;
  cfg.u_height = u_height;
  cfg.checkpoint_path = checkpoint;
  cfg.checkpoint_every = checkpoint_every;
  cfg.stop_after = stop_after;
  cfg.jobs = opt.jobs;
  emit(fqt::search_d(cfg), opt.out);
  return 0;
}

int cmd_run_suite(const Options& opt, const std::string& name) {
  json report = fqt::run_suite(name, opt.seed, opt.jobs);
  emit(report, opt.out);
  return report["ok"].get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact arithmetic and definability experiments in F_q(t)"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--p", opt.field, "coefficient field, 'p' or 'p^n'")
      ->capture_default_str();
  app.add_option("--l", opt.l, "prime l for behavedness / extension degree")
      ->capture_default_str();
  app.add_option("--seed", opt.seed, "seed for randomized suites")
      ->capture_default_str();
  app.add_option("--out", opt.out, "write the JSON report to this path");
  app.add_option("--jobs", opt.jobs, "worker threads for sweeps")
      ->capture_default_str();

  auto* behaved = app.add_subcommand("behaved", "l-behavedness report for u");
  std::string behaved_u;
  behaved->add_option("u", behaved_u, "rational function, e.g. (t^2+1)/t")->required();

  auto* pasten = app.add_subcommand("pasten", "square-product criterion vs the exact power relation");
  pasten->set_help_flag("--help", "print help");  // frees -h for the positional
  std::string pasten_f, pasten_h;
  pasten->add_option("f", pasten_f)->required();
  pasten->add_option("h", pasten_h)->required();

  auto* emitphi = app.add_subcommand("emit-phi", "print the square-product formula");
  int64_t phi_g = 0;
  bool phi_uniform = false;
  emitphi->add_option("--g", phi_g, "genus parameter")->capture_default_str();
  emitphi->add_flag("--uniform", phi_uniform, "characteristic-independent form");

  auto* normcheck = app.add_subcommand("norm-check", "decide whether u is a constant-extension norm");
  std::string norm_u, norm_ext = "auto", norm_a;
  bool norm_witness = false;
  normcheck->add_option("u", norm_u)->required();
  normcheck->add_option("--ext", norm_ext, "kummer | artin-schreier | auto")
      ->check(CLI::IsMember({"kummer", "artin-schreier", "auto"}))
      ->capture_default_str();
  normcheck->add_option("--a", norm_a, "defining constant");
  normcheck->add_flag("--witness", norm_witness, "also compute a verified witness");

  auto* twosq = app.add_subcommand("two-squares", "write f as a sum of two squares");
  std::string twosq_f;
  twosq->add_option("f", twosq_f)->required();

  auto* psic = app.add_subcommand("psi-c", "quadratic constant-norm predicate with witness");
  std::string psic_u;
  psic->add_option("u", psic_u)->required();

  auto* translate = app.add_subcommand("translate", "compile an arithmetic sentence to a ring formula");
  std::string tr_sentence, tr_in, tr_mode = "abstract", tr_policy = "free-u";
  translate->add_option("--sentence", tr_sentence, "sentence text");
  translate->add_option("--in", tr_in, "file containing the sentence");
  translate->add_option("--mode", tr_mode, "abstract | expand-denp")
      ->check(CLI::IsMember({"abstract", "expand-denp"}))
      ->capture_default_str();
  translate->add_option("--policy", tr_policy, "free-u | quantified-bl | fixed-t")
      ->check(CLI::IsMember({"free-u", "quantified-bl", "fixed-t"}))
      ->capture_default_str();

  auto* eval = app.add_subcommand("eval", "bounded evaluation of a formula");
  std::string ev_formula, ev_file, ev_u = "t";
  bool ev_arith = false;
  int64_t ev_bound = 6;
  eval->add_option("--formula", ev_formula, "formula text");
  eval->add_option("--formula-file", ev_file, "file containing the formula");
  eval->add_flag("--arith", ev_arith, "treat input as an arithmetic sentence");
  eval->add_option("--u", ev_u, "parameter value for ring evaluation")
      ->capture_default_str();
  eval->add_option("--bound", ev_bound, "search bound (degree or natural number)")
      ->capture_default_str();

  auto* cx = app.add_subcommand("counterexamples", "Mobius-orbit behavedness sweep");
  bool cx_all = false;
  std::string cx_u;
  int cx_frob = 1;
  cx->add_flag("--all", cx_all, "run every published entry");
  cx->add_option("--u", cx_u, "custom input (default: published entry for --p)");
  cx->add_option("--max-frob-power", cx_frob, "highest Frobenius exponent to check")
      ->capture_default_str();

  auto* sd = app.add_subcommand("search-d", "search for a universally behaving substitution");
  int64_t sd_num = 1, sd_den = 0, sd_height = 2, sd_every = 25, sd_stop = -1;
  std::string sd_checkpoint;
  sd->add_option("--num-deg", sd_num, "max numerator degree of candidates")
      ->capture_default_str();
  sd->add_option("--den-deg", sd_den, "max denominator degree of candidates")
      ->capture_default_str();
  sd->add_option("--u-height", sd_height, "max num/den degree of swept inputs")
      ->capture_default_str();
  sd->add_option("--checkpoint", sd_checkpoint, "checkpoint file for resume");
  sd->add_option("--checkpoint-every", sd_every, "candidates per checkpoint")
      ->capture_default_str();
  sd->add_option("--stop-after", sd_stop, "process at most this many candidates");

  auto* suite = app.add_subcommand("run-suite", "run a named verification suite");
  std::string suite_name;
  suite->add_option("name", suite_name,
                    "corollary36-sweep | pasten-f13 | reduction-e2e")
      ->required();

  for (CLI::App* sub : {behaved, pasten, emitphi, normcheck, twosq, psic, translate,
                        eval, cx, sd, suite})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (behaved->parsed()) return cmd_behaved(opt, behaved_u);
    if (pasten->parsed()) return cmd_pasten(opt, pasten_f, pasten_h);
    if (emitphi->parsed()) return cmd_emit_phi(opt, phi_g, phi_uniform);
    if (normcheck->parsed())
      return cmd_norm_check(opt, norm_u, norm_ext, norm_a, norm_witness);
    if (twosq->parsed()) return cmd_two_squares(opt, twosq_f);
    if (psic->parsed()) return cmd_psi_c(opt, psic_u);
    if (translate->parsed())
      return cmd_translate(opt, tr_sentence, tr_in, tr_mode, tr_policy);
    if (eval->parsed())
      return cmd_eval(opt, ev_formula, ev_file, ev_arith, ev_u, ev_bound);
    if (cx->parsed()) return cmd_counterexamples(opt, cx_all, cx_u, cx_frob);
    if (sd->parsed())
      return cmd_search_d(opt, sd_num, sd_den, sd_height, sd_checkpoint, sd_every,
                          sd_stop);
    if (suite->parsed()) return cmd_run_suite(opt, suite_name);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
