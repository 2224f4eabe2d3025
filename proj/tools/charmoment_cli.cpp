// Command line front end: constants, single-configuration moment checks,
// prime sweeps, and the analytic bound checkers. Exit codes: 0 all checks
// passed, 1 a computed check failed, 2 usage or validation error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "charmoment/charmoment.hpp"

using namespace charmoment;
using nlohmann::json;

namespace {

json report_to_json(const MomentReport& rep) {
  return json{{"p", rep.p},
              {"m", rep.m},
              {"N", rep.n},
              {"lhs", rep.lhs},
              {"constant", rep.constant},
              {"main_term", rep.main_term},
              {"abs_error", rep.abs_error},
              {"normalized_error", rep.normalized_error},
              {"m1", rep.dec.m1},
              {"m2", rep.dec.m2},
              {"m3", rep.dec.m3},
              {"both_zero", rep.dec.both},
              {"violations", rep.condition_violations},
              {"hypothesis", detail::hypothesis_string(rep.hypothesis)},
              {"interval_in_range", rep.interval_in_range}};
}

void print_report(const MomentReport& rep, bool as_json) {
  if (as_json) {
    std::cout << report_to_json(rep).dump(2) << "\n";
    return;
  }
  std::cout << "p:                 " << rep.p << "\n"
            << "m:                 " << rep.m << "\n"
            << "|I|:               " << rep.n << "\n"
            << "lhs:               " << rep.lhs << "\n"
            << "constant:          " << rep.constant << "\n"
            << "main term:         " << rep.main_term << "\n"
            << "abs error:         " << rep.abs_error << "\n"
            << "normalized error:  " << rep.normalized_error << "\n"
            << "decomposition:     m1=" << rep.dec.m1 << " m2=" << rep.dec.m2
            << " m3=" << rep.dec.m3 << " both=" << rep.dec.both << "\n"
            << "violations:        " << rep.condition_violations << "\n"
            << "hypothesis:        " << detail::hypothesis_string(rep.hypothesis) << "\n"
            << "interval in range: " << (rep.interval_in_range ? "yes" : "no") << "\n";
}

json bound_to_json(const BoundCheck& bc) {
  return json{{"lhs", bc.lhs}, {"rhs", bc.rhs}, {"ok", bc.ok}, {"context", bc.context}};
}

int finish_bound(const BoundCheck& bc) {
  std::cout << bound_to_json(bc).dump(2) << "\n";
  return bc.ok ? 0 : 1;
}

Interval resolve_interval(u64 p, Interval fallback, const CLI::Option* start_opt,
                          const CLI::Option* len_opt, u64 start, u64 len) {
  const bool has_start = start_opt->count() > 0;
  const bool has_len = len_opt->count() > 0;
  if (has_start != has_len)
    throw std::invalid_argument("--start and --len must be given together");
  if (!has_start) return fallback;
  return Interval{start % p, len};
}

SweepMode parse_mode(const std::string& s) {
  if (s == "thm1") return SweepMode::kThm1;
  if (s == "thm2") return SweepMode::kThm2;
  throw std::invalid_argument("mode must be thm1 or thm2");
}

IntervalPolicy parse_policy(const std::string& s) {
  if (s == "full") return IntervalPolicy::kFull;
  if (s == "fixed") return IntervalPolicy::kFixedLength;
  if (s == "fraction") return IntervalPolicy::kFraction;
  throw std::invalid_argument("interval policy must be full, fixed, or fraction");
}

void load_config(const std::string& path, ExperimentSpec& spec) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("config: cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (j.contains("mode")) spec.mode = parse_mode(j.at("mode").get<std::string>());
  if (j.contains("p_min")) spec.p_min = j.at("p_min").get<u64>();
  if (j.contains("p_max")) spec.p_max = j.at("p_max").get<u64>();
  if (j.contains("primes")) spec.primes = j.at("primes").get<std::vector<u64>>();
  if (j.contains("poly")) spec.poly = IntPoly::from_string(j.at("poly").get<std::string>());
  if (j.contains("binomial_d")) spec.binomial_d = j.at("binomial_d").get<u64>();
  if (j.contains("order_t")) spec.order_t = j.at("order_t").get<u64>();
  if (j.contains("add_a")) spec.add_a = j.at("add_a").get<u64>();
  if (j.contains("m")) spec.m = j.at("m").get<double>();
  if (j.contains("interval_policy"))
    spec.interval_policy = parse_policy(j.at("interval_policy").get<std::string>());
  if (j.contains("interval_start")) spec.interval_start = j.at("interval_start").get<u64>();
  if (j.contains("interval_length"))
    spec.interval_length = j.at("interval_length").get<u64>();
  if (j.contains("interval_fraction"))
    spec.interval_fraction = j.at("interval_fraction").get<double>();
  if (j.contains("fkm_enabled")) spec.fkm_enabled = j.at("fkm_enabled").get<bool>();
}

struct ExampleThresholds {
  double slope_max = 1.1;
  double calibration_factor = 3.0;
  std::size_t pilot_count = 10;
};

int run_example_binomial(u64 p_min, u64 p_max, u64 d, u64 a, bool as_json) {
  const ExampleThresholds th;
  const double ms[] = {0.3, 0.5, 0.7};
  json checks = json::array();
  bool all_ok = true;
  for (double m : ms) {
    ExperimentSpec spec;
    spec.mode = SweepMode::kThm2;
    spec.p_min = p_min;
    spec.p_max = p_max;
    spec.binomial_d = d;
    spec.add_a = a;
    spec.m = m;
    const SweepResult res = run_sweep(spec);
    const TrendResult tr = trend_analysis(res.records);
    u64 violations = 0;
    for (const auto& r : res.records) violations += r.violations;
    double pilot = 0.0;
    const std::size_t np = std::min(th.pilot_count, res.records.size());
    for (std::size_t i = 0; i < np; ++i)
      pilot = std::max(pilot, res.records[i].normalized_error);
    const bool slope_ok = tr.slope <= th.slope_max;
    const bool calib_ok = tr.max_normalized <= th.calibration_factor * pilot;
    const bool violations_ok = violations == 0;
    const bool ok = slope_ok && calib_ok && violations_ok;
    all_ok = all_ok && ok;
    checks.push_back(json{{"m", m},
                          {"records", res.records.size()},
                          {"skipped", res.skipped.size()},
                          {"slope", tr.slope},
                          {"max_normalized", tr.max_normalized},
                          {"pilot", pilot},
                          {"violations", violations},
                          {"slope_ok", slope_ok},
                          {"calibration_ok", calib_ok},
                          {"violations_ok", violations_ok},
                          {"ok", ok}});
    if (!as_json)
      std::cout << "m=" << m << ": records=" << res.records.size()
                << " slope=" << tr.slope << " max_norm=" << tr.max_normalized
                << " pilot=" << pilot << " violations=" << violations
                << (ok ? "  [ok]" : "  [FAIL]") << "\n";
  }
  if (as_json)
    std::cout << json{{"checks", checks}, {"ok", all_ok}}.dump(2) << "\n";
  else
    std::cout << (all_ok ? "PASS" : "FAIL") << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moment sums of character differences at consecutive polynomial values"};
  app.require_subcommand(1);

  // constants
  auto* cst = app.add_subcommand(
      "constants", "main-term constant via truncated series, with oracle cross-check");
  double cst_m = 0.5;
  u64 cst_t = 0, cst_p = 0;
  double cst_tol = 1e-9;
  long cst_kmax = 100000;
  cst->add_option("--m", cst_m, "moment exponent in (0, 1]")->required();
  auto* cst_order = cst->add_option("--order", cst_t, "multiplicative character order t > 2");
  auto* cst_prime = cst->add_option("--prime", cst_p, "odd prime for the additive constant");
  cst_order->excludes(cst_prime);
  cst_prime->excludes(cst_order);
  cst->add_option("--tol", cst_tol, "tail tolerance");
  cst->add_option("--kmax", cst_kmax, "series term cap");

  // verify-thm1
  auto* v1 = app.add_subcommand("verify-thm1",
                                "multiplicative moment sum against its main term");
  u64 v1_p = 0, v1_t = 3, v1_start = 0, v1_len = 0;
  double v1_m = 0.5;
  std::string v1_poly = "1,0,1";
  bool v1_json = false;
  v1->add_option("--prime", v1_p, "odd prime p")->required();
  v1->add_option("--poly", v1_poly, "coefficients, low degree first (default X^2+1)");
  v1->add_option("--order", v1_t, "character order t > 2 dividing p-1");
  v1->add_option("--m", v1_m, "moment exponent in (0, 1]");
  auto* v1_so = v1->add_option("--start", v1_start, "interval start (default 1)");
  auto* v1_lo = v1->add_option("--len", v1_len, "interval length (default p-2)");
  v1->add_flag("--json", v1_json, "machine-readable output");

  // verify-thm2
  auto* v2 = app.add_subcommand("verify-thm2",
                                "additive moment sum against its main term");
  u64 v2_p = 0, v2_a = 1, v2_start = 0, v2_len = 0, v2_d = 0;
  double v2_m = 0.5;
  std::string v2_poly = "0,0,1";
  bool v2_json = false;
  v2->add_option("--prime", v2_p, "odd prime p")->required();
  auto* v2_po = v2->add_option("--poly", v2_poly, "coefficients, low degree first (default X^2)");
  auto* v2_do = v2->add_option("--binomial-d", v2_d,
                               "use the degree-(d+1) consecutive-binomial polynomial");
  v2_po->excludes(v2_do);
  v2_do->excludes(v2_po);
  v2->add_option("--a", v2_a, "additive character parameter, nonzero mod p");
  v2->add_option("--m", v2_m, "moment exponent in (0, 1]");
  auto* v2_so = v2->add_option("--start", v2_start, "interval start (default 0)");
  auto* v2_lo = v2->add_option("--len", v2_len, "interval length (default p-1)");
  v2->add_flag("--json", v2_json, "machine-readable output");

  // sweep
  auto* sw = app.add_subcommand("sweep", "run one experiment across a prime range");
  ExperimentSpec spec;
  std::string sw_config, sw_mode = "thm1", sw_poly, sw_policy = "full";
  std::string sw_format = "csv", sw_out;
  std::vector<u64> sw_primes;
  u64 sw_pmin = 0, sw_pmax = 0, sw_order = 3, sw_a = 1, sw_start = 0, sw_len = 0;
  long sw_binom = -1;
  double sw_m = 0.5, sw_fraction = 0.5;
  bool sw_fkm = false, sw_trend = false;
  sw->add_option("--config", sw_config, "JSON file mirroring the experiment fields");
  auto* o_mode = sw->add_option("--mode", sw_mode, "thm1 or thm2");
  auto* o_pmin = sw->add_option("--pmin", sw_pmin, "lower end of prime range");
  auto* o_pmax = sw->add_option("--pmax", sw_pmax, "upper end of prime range");
  auto* o_primes = sw->add_option("--primes", sw_primes, "explicit prime list");
  auto* o_poly = sw->add_option("--poly", sw_poly, "coefficients, low degree first");
  auto* o_binom = sw->add_option("--binomial-d", sw_binom,
                                 "use the consecutive-binomial polynomial family");
  auto* o_order = sw->add_option("--order", sw_order, "character order (thm1)");
  auto* o_a = sw->add_option("--a", sw_a, "additive parameter (thm2)");
  auto* o_m = sw->add_option("--m", sw_m, "moment exponent in (0, 1]");
  auto* o_policy = sw->add_option("--policy", sw_policy, "full, fixed, or fraction");
  auto* o_start = sw->add_option("--start", sw_start, "interval start (fixed policy)");
  auto* o_len = sw->add_option("--len", sw_len, "interval length (fixed policy)");
  auto* o_fraction = sw->add_option("--fraction", sw_fraction, "interval fraction of p");
  auto* o_fkm = sw->add_flag("--fkm", sw_fkm, "attach sliding-sum bound checks (p <= 4096)");
  sw->add_option("--format", sw_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sw->add_option("--out", sw_out, "write records to this path instead of stdout");
  sw->add_flag("--trend", sw_trend, "print the error-growth trend fit");

  // bound checkers
  auto* wc = app.add_subcommand("weil-check", "complete-sum bound for one polynomial");
  u64 wc_p = 0, wc_a = 1;
  std::string wc_poly;
  wc->add_option("--prime", wc_p, "odd prime p")->required();
  wc->add_option("--poly", wc_poly, "coefficients, low degree first")->required();
  wc->add_option("--a", wc_a, "additive character parameter");

  auto* fk = app.add_subcommand("fkm-check",
                                "sliding-sum bound for a character ratio table");
  u64 fk_p = 0, fk_t = 3, fk_start = 0, fk_len = 0;
  std::string fk_poly = "1,0,1";
  fk->add_option("--prime", fk_p, "odd prime p (at most 4096)")->required();
  fk->add_option("--poly", fk_poly, "coefficients, low degree first");
  fk->add_option("--order", fk_t, "character order t > 2 dividing p-1");
  auto* fk_so = fk->add_option("--start", fk_start, "interval start (default 0)");
  auto* fk_lo = fk->add_option("--len", fk_len, "interval length (default p)");

  auto* cc = app.add_subcommand("completion-check",
                                "incomplete sum equals its completed form");
  u64 cc_p = 0, cc_a = 1, cc_start = 0, cc_len = 0;
  std::string cc_poly;
  cc->add_option("--prime", cc_p, "odd prime p")->required();
  cc->add_option("--poly", cc_poly, "coefficients, low degree first")->required();
  cc->add_option("--a", cc_a, "additive character parameter");
  auto* cc_so = cc->add_option("--start", cc_start, "interval start (default 0)");
  auto* cc_lo = cc->add_option("--len", cc_len, "interval length (default p)");

  // example-binomial
  auto* ex = app.add_subcommand(
      "example-binomial",
      "consecutive-binomial sweep: trend, calibration, and zero-violation checks");
  u64 ex_pmin = 1000, ex_pmax = 100000, ex_d = 2, ex_a = 1;
  bool ex_json = false;
  ex->add_option("--pmin", ex_pmin, "lower end of prime range");
  ex->add_option("--pmax", ex_pmax, "upper end of prime range");
  ex->add_option("--d", ex_d, "binomial parameter (polynomial degree d+1)");
  ex->add_option("--a", ex_a, "additive character parameter");
  ex->add_flag("--json", ex_json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cst->parsed()) {
      if (cst_order->count() == 0 && cst_prime->count() == 0)
        throw std::invalid_argument("constants: give --order or --prime");
      const ConstantResult res = cst_order->count()
                                     ? C_const(cst_m, cst_t, cst_tol, cst_kmax)
                                     : D_const(cst_m, cst_p, cst_tol, cst_kmax);
      json j{{"kind", cst_order->count() ? "C" : "D"},
             {"modulus", cst_order->count() ? cst_t : cst_p},
             {"m", cst_m},
             {"value", res.value},
             {"k_used", res.k_used},
             {"tail_bound", res.tail_bound},
             {"converged", res.converged}};
      j["oracle_value"] = res.oracle_value ? json(*res.oracle_value) : json(nullptr);
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (v1->parsed()) {
      PrimeFieldCtx ctx(v1_p);
      const MultChar chi = mult_char_of_order(ctx, v1_t);
      const IntPoly F = IntPoly::from_string(v1_poly);
      const Interval I =
          resolve_interval(v1_p, Interval{1, v1_p - 2}, v1_so, v1_lo, v1_start, v1_len);
      const MomentReport rep = verify_thm1(ctx, chi, F, I, v1_m);
      print_report(rep, v1_json);
      return rep.hypothesis.ok() ? 0 : 1;
    }

    if (v2->parsed()) {
      PrimeFieldCtx ctx(v2_p, PrimeFieldCtx::kDefaultTableThreshold,
                        PrimeFieldCtx::IndexTable::kNone);
      const AddChar psi(ctx, v2_a);
      MomentReport rep;
      if (v2_do->count()) {
        const u64 lo = v2_d + 2;
        if (v2_p < lo + 2)
          throw std::invalid_argument("verify-thm2: p too small for this binomial degree");
        const ModPoly f = binomial_poly(v2_d, ctx);
        const Interval I = resolve_interval(v2_p, Interval{lo, v2_p - 1 - lo}, v2_so,
                                            v2_lo, v2_start, v2_len);
        rep = detail::verify_thm2_reduced(ctx, psi, f, f.degree(), I, v2_m);
      } else {
        const IntPoly F = IntPoly::from_string(v2_poly);
        const Interval I = resolve_interval(v2_p, Interval{0, v2_p - 1}, v2_so, v2_lo,
                                            v2_start, v2_len);
        rep = verify_thm2(ctx, psi, F, I, v2_m);
      }
      print_report(rep, v2_json);
      return rep.hypothesis.ok() ? 0 : 1;
    }

    if (sw->parsed()) {
      if (!sw_config.empty()) load_config(sw_config, spec);
      if (o_mode->count()) spec.mode = parse_mode(sw_mode);
      if (o_pmin->count()) spec.p_min = sw_pmin;
      if (o_pmax->count()) spec.p_max = sw_pmax;
      if (o_primes->count()) spec.primes = sw_primes;
      if (o_poly->count()) spec.poly = IntPoly::from_string(sw_poly);
      if (o_binom->count()) {
        if (sw_binom < 0) throw std::invalid_argument("sweep: --binomial-d must be >= 0");
        spec.binomial_d = static_cast<u64>(sw_binom);
      }
      if (o_order->count()) spec.order_t = sw_order;
      if (o_a->count()) spec.add_a = sw_a;
      if (o_m->count()) spec.m = sw_m;
      if (o_policy->count()) spec.interval_policy = parse_policy(sw_policy);
      if (o_start->count()) spec.interval_start = sw_start;
      if (o_len->count()) spec.interval_length = sw_len;
      if (o_fraction->count()) spec.interval_fraction = sw_fraction;
      if (o_fkm->count()) spec.fkm_enabled = sw_fkm;
      if ((o_start->count() || o_len->count()) && !o_policy->count() &&
          spec.interval_policy == IntervalPolicy::kFull)
        spec.interval_policy = IntervalPolicy::kFixedLength;

      const SweepResult res = run_sweep(spec);
      for (const auto& s : res.skipped)
        std::cerr << "skip p=" << s.p << ": " << s.reason << "\n";
      const EmitFormat fmt = sw_format == "csv" ? EmitFormat::kCsv : EmitFormat::kJson;
      if (!sw_out.empty()) {
        emit(res.records, fmt, sw_out);
        std::cerr << res.records.size() << " records -> " << sw_out << "\n";
      } else {
        std::cout << (fmt == EmitFormat::kCsv ? to_csv(res.records)
                                              : to_json(res.records) + "\n");
      }
      if (sw_trend) {
        const TrendResult tr = trend_analysis(res.records);
        const json tj{{"slope", tr.slope},
                      {"intercept", tr.intercept},
                      {"max_normalized", tr.max_normalized},
                      {"points_used", tr.points_used}};
        (sw_out.empty() ? std::cerr : std::cout) << tj.dump(2) << "\n";
      }
      int rc = 0;
      std::size_t fkm_ok = 0;
      for (const auto& bc : res.fkm_checks) {
        if (bc.ok) {
          ++fkm_ok;
        } else {
          std::cerr << "bound FAILED: " << bc.context << " lhs=" << bc.lhs
                    << " rhs=" << bc.rhs << "\n";
          rc = 1;
        }
      }
      if (!res.fkm_checks.empty())
        std::cerr << "fkm checks: " << fkm_ok << "/" << res.fkm_checks.size() << " ok\n";
      return rc;
    }

    if (wc->parsed()) {
      PrimeFieldCtx ctx(wc_p, PrimeFieldCtx::kDefaultTableThreshold,
                        PrimeFieldCtx::IndexTable::kNone);
      const AddChar psi(ctx, wc_a);
      return finish_bound(weil_check(ctx, psi, IntPoly::from_string(wc_poly)));
    }

    if (fk->parsed()) {
      PrimeFieldCtx ctx(fk_p);
      const MultChar chi = mult_char_of_order(ctx, fk_t);
      const PeriodicTable phi =
          make_ratio_char_table(ctx, chi, IntPoly::from_string(fk_poly));
      const Interval I =
          resolve_interval(fk_p, Interval{0, fk_p}, fk_so, fk_lo, fk_start, fk_len);
      return finish_bound(fkm_bound_check(phi, I));
    }

    if (cc->parsed()) {
      PrimeFieldCtx ctx(cc_p, PrimeFieldCtx::kDefaultTableThreshold,
                        PrimeFieldCtx::IndexTable::kNone);
      const AddChar psi(ctx, cc_a);
      const Interval I =
          resolve_interval(cc_p, Interval{0, cc_p}, cc_so, cc_lo, cc_start, cc_len);
      const CompletionReport rep =
          completion_identity_check(ctx, psi, IntPoly::from_string(cc_poly), I);
      const json j{{"direct", {rep.direct.real(), rep.direct.imag()}},
                   {"completed", {rep.completed.real(), rep.completed.imag()}},
                   {"difference", rep.difference},
                   {"tolerance", rep.tolerance},
                   {"ok", rep.ok}};
      std::cout << j.dump(2) << "\n";
      return rep.ok ? 0 : 1;
    }

    if (ex->parsed())
      return run_example_binomial(ex_pmin, ex_pmax, ex_d, ex_a, ex_json);
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const empty_sweep_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const too_few_points_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
