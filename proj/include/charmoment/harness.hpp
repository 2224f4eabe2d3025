#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "charmoment/bounds.hpp"
#include "charmoment/moments.hpp"

namespace charmoment {

enum class SweepMode { kThm1, kThm2 };
enum class IntervalPolicy { kFull, kFixedLength, kFraction };

/// Declarative description of one sweep. Identical specs produce identical
/// records (wall times excepted).
struct ExperimentSpec {
  SweepMode mode = SweepMode::kThm1;
  u64 p_min = 0;
  u64 p_max = 0;
  std::vector<u64> primes;  // explicit list; overrides the range when nonempty

  IntPoly poly;                   // ignored when binomial_d is set
  std::optional<u64> binomial_d;  // F = binom(X, d+1) built per prime

  u64 order_t = 3;  // multiplicative character order (kThm1)
  u64 add_a = 1;    // additive character parameter (kThm2)
  double m = 0.5;

  IntervalPolicy interval_policy = IntervalPolicy::kFull;
  u64 interval_start = 0;          // kFixedLength
  u64 interval_length = 0;         // kFixedLength
  double interval_fraction = 0.5;  // kFraction

  bool fkm_enabled = false;  // attach fkm checks where p permits (kThm1)
};

struct SweepRecord {
  u64 p = 0;
  u64 n = 0;
  double lhs = 0.0;
  double constant = 0.0;
  double abs_error = 0.0;
  double normalized_error = 0.0;
  u64 m1 = 0;
  u64 m2 = 0;
  u64 violations = 0;
  std::string hypothesis;
  double wall_ms = 0.0;
};

struct SkipRecord {
  u64 p = 0;
  std::string reason;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // ascending p
  std::vector<SkipRecord> skipped;   // ascending p, machine-readable reasons
  std::vector<BoundCheck> fkm_checks;
};

namespace detail {

inline std::vector<u64> sweep_primes(const ExperimentSpec& spec) {
  std::vector<u64> ps;
  if (!spec.primes.empty()) {
    ps = spec.primes;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  } else {
    for (u64 q = std::max<u64>(3, spec.p_min) | 1; q <= spec.p_max; q += 2)
      if (is_prime(q)) ps.push_back(q);
  }
  return ps;
}

inline std::optional<Interval> sweep_interval(const ExperimentSpec& spec, u64 p,
                                              u64 d_binomial) {
  const bool add = spec.mode == SweepMode::kThm2;
  switch (spec.interval_policy) {
    case IntervalPolicy::kFull:
      if (spec.binomial_d) {
        const u64 lo = d_binomial + 2;
        if (p < lo + 2) return std::nullopt;
        return Interval{lo, p - 1 - lo};  // n runs over (d+1, p-1)
      }
      return add ? Interval{0, p - 1} : Interval{1, p - 2};
    case IntervalPolicy::kFixedLength:
      if (spec.interval_length == 0 || spec.interval_length > p) return std::nullopt;
      return Interval{spec.interval_start % p, spec.interval_length};
    case IntervalPolicy::kFraction: {
      const u64 cap = add ? p - 1 : p - 2;
      u64 len = static_cast<u64>(spec.interval_fraction * static_cast<double>(p));
      len = std::min(std::max<u64>(len, 1), cap);
      return Interval{add ? u64{0} : u64{1}, len};
    }
  }
  return std::nullopt;
}

inline std::string hypothesis_string(const CertifyResult& c) {
  return c.ok() ? "certified" : "inconclusive:" + c.reason;
}

}  // namespace detail

/// Runs the experiment over every prime in scope. Inadmissible primes are
/// skipped with a reason, never silently dropped; an all-skip sweep throws.
inline SweepResult run_sweep(const ExperimentSpec& spec) {
  detail::require_m(spec.m);
  if (spec.mode == SweepMode::kThm1 && spec.order_t <= 2)
    throw std::invalid_argument("run_sweep: character order must exceed 2");
  if (spec.mode == SweepMode::kThm2 && spec.add_a == 0)
    throw std::invalid_argument("run_sweep: additive parameter must be nonzero");
  if (!spec.binomial_d && spec.poly.degree() < 2)
    throw std::invalid_argument("run_sweep: polynomial degree must exceed 1");

  SweepResult out;
  for (u64 p : detail::sweep_primes(spec)) {
    const auto t0 = std::chrono::steady_clock::now();
    if (spec.mode == SweepMode::kThm1 && (p - 1) % spec.order_t != 0) {
      out.skipped.push_back({p, "order_not_dividing"});
      continue;
    }
    if (spec.binomial_d && *spec.binomial_d + 1 >= p) {
      out.skipped.push_back({p, "factorial_divisible"});
      continue;
    }
    if (spec.mode == SweepMode::kThm2 && spec.add_a % p == 0) {
      out.skipped.push_back({p, "trivial_character"});
      continue;
    }
    const u64 d_bin = spec.binomial_d.value_or(0);
    const auto iv = detail::sweep_interval(spec, p, d_bin);
    if (!iv) {
      out.skipped.push_back({p, "interval_empty"});
      continue;
    }

    MomentReport rep;
    if (spec.mode == SweepMode::kThm1) {
      PrimeFieldCtx ctx(p);
      if (!spec.binomial_d &&
          reduce_mod(spec.poly, p).degree() != spec.poly.degree()) {
        out.skipped.push_back({p, "degree_collapse"});
        continue;
      }
      const MultChar chi = mult_char_of_order(ctx, spec.order_t);
      const IntPoly& F = spec.poly;
      const CertifyResult cert = certify_not_tth_power_proportional(F, spec.order_t, ctx);
      if (!cert.ok()) {
        out.skipped.push_back({p, "certificate:" + cert.reason});
        continue;
      }
      rep = verify_thm1(ctx, chi, F, *iv, spec.m);
      if (spec.fkm_enabled && p <= 4096 &&
          std::sqrt(static_cast<double>(p)) < static_cast<double>(iv->length) &&
          iv->length <= p) {
        BoundCheck bc = fkm_bound_check(make_ratio_char_table(ctx, chi, F), *iv);
        bc.context = "p=" + std::to_string(p) + ", " + bc.context;
        out.fkm_checks.push_back(std::move(bc));
      }
    } else {
      PrimeFieldCtx ctx(p, PrimeFieldCtx::kDefaultTableThreshold,
                        PrimeFieldCtx::IndexTable::kNone);
      const AddChar psi(ctx, spec.add_a);
      if (spec.binomial_d) {
        const ModPoly f = binomial_poly(d_bin, ctx);
        rep = detail::verify_thm2_reduced(ctx, psi, f, f.degree(), *iv, spec.m);
      } else {
        if (reduce_mod(spec.poly, p).degree() != spec.poly.degree()) {
          out.skipped.push_back({p, "degree_collapse"});
          continue;
        }
        rep = verify_thm2(ctx, psi, spec.poly, *iv, spec.m);
      }
    }
    const auto t1 = std::chrono::steady_clock::now();
    SweepRecord rec;
    rec.p = p;
    rec.n = rep.n;
    rec.lhs = rep.lhs;
    rec.constant = rep.constant;
    rec.abs_error = rep.abs_error;
    rec.normalized_error = rep.normalized_error;
    rec.m1 = rep.dec.m1;
    rec.m2 = rep.dec.m2;
    rec.violations = rep.condition_violations;
    rec.hypothesis = detail::hypothesis_string(rep.hypothesis);
    rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    out.records.push_back(std::move(rec));
  }
  if (out.records.empty())
    throw empty_sweep_error("run_sweep: no admissible primes in scope");
  return out;
}

struct TrendResult {
  double slope = 0.0;      // least squares, ln(abs_error) vs ln(sqrt(p) ln p)
  double intercept = 0.0;
  double max_normalized = 0.0;
  std::size_t points_used = 0;
};

/// Error-growth trend across a sweep. Records with abs_error = 0 carry no
/// log-scale information and are excluded from the fit (not from max).
inline TrendResult trend_analysis(const std::vector<SweepRecord>& records) {
  TrendResult out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (const auto& r : records) {
    out.max_normalized = std::max(out.max_normalized, r.normalized_error);
    if (r.abs_error <= 0.0) continue;
    const double x = std::log(std::sqrt(static_cast<double>(r.p)) *
                              std::log(static_cast<double>(r.p)));
    const double y = std::log(r.abs_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++k;
  }
  if (k < 5)
    throw too_few_points_error("trend_analysis: need at least 5 usable records");
  const double n = static_cast<double>(k);
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  out.intercept = (sy - out.slope * sx) / n;
  out.points_used = k;
  return out;
}

enum class EmitFormat { kCsv, kJson };

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string to_csv(const std::vector<SweepRecord>& records) {
  std::string out =
      "p,N,lhs,constant,abs_error,normalized_error,m1,m2,violations,hypothesis,wall_ms\n";
  for (const auto& r : records) {
    out += std::to_string(r.p) + ',' + std::to_string(r.n) + ',';
    out += detail::fmt_double(r.lhs) + ',';
    out += detail::fmt_double(r.constant) + ',';
    out += detail::fmt_double(r.abs_error) + ',';
    out += detail::fmt_double(r.normalized_error) + ',';
    out += std::to_string(r.m1) + ',' + std::to_string(r.m2) + ',' +
           std::to_string(r.violations) + ',';
    out += r.hypothesis + ',';
    out += detail::fmt_double(r.wall_ms) + '\n';
  }
  return out;
}

inline nlohmann::json record_to_json(const SweepRecord& r) {
  return nlohmann::json{{"p", r.p},
                        {"N", r.n},
                        {"lhs", r.lhs},
                        {"constant", r.constant},
                        {"abs_error", r.abs_error},
                        {"normalized_error", r.normalized_error},
                        {"m1", r.m1},
                        {"m2", r.m2},
                        {"violations", r.violations},
                        {"hypothesis", r.hypothesis},
                        {"wall_ms", r.wall_ms}};
}

inline std::string to_json(const std::vector<SweepRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) arr.push_back(record_to_json(r));
  return arr.dump(2);
}

inline void emit(const std::vector<SweepRecord>& records, EmitFormat format,
                 const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("emit: cannot open " + path);
  f << (format == EmitFormat::kCsv ? to_csv(records) : to_json(records));
  if (!f.flush()) throw io_error("emit: write failed for " + path);
}

inline std::vector<SweepRecord> parse_records_json(const std::string& text) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("parse_records_json: ") + e.what());
  }
  std::vector<SweepRecord> out;
  for (const auto& j : arr) {
    SweepRecord r;
    r.p = j.at("p").get<u64>();
    r.n = j.at("N").get<u64>();
    r.lhs = j.at("lhs").get<double>();
    r.constant = j.at("constant").get<double>();
    r.abs_error = j.at("abs_error").get<double>();
    r.normalized_error = j.at("normalized_error").get<double>();
    r.m1 = j.at("m1").get<u64>();
    r.m2 = j.at("m2").get<u64>();
    r.violations = j.at("violations").get<u64>();
    r.hypothesis = j.at("hypothesis").get<std::string>();
    r.wall_ms = j.at("wall_ms").get<double>();
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<SweepRecord> load_records_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("load_records_json: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_records_json(ss.str());
}

}  // namespace charmoment
