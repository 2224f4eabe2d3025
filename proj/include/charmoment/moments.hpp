#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "charmoment/characters.hpp"
#include "charmoment/constants.hpp"
#include "charmoment/poly.hpp"

namespace charmoment {

/// Arithmetic progression of evaluation points (start + j) mod p, j < length.
struct Interval {
  u64 start = 0;
  u64 length = 0;
};

struct Decomposition {
  u64 m1 = 0;    // F(n) != 0, F(n+1) == 0
  u64 m2 = 0;    // F(n) == 0, F(n+1) != 0
  u64 m3 = 0;    // both nonzero
  u64 both = 0;  // both zero
};

/// term table over the M-th roots of unity: table[j] = |1 - e(j/M)|^(2m),
/// mirrored across j <-> M-j. Its mean over j is the main-term constant.
inline std::vector<double> moment_term_table(u64 M, double m) {
  std::vector<double> tab(M, 0.0);
  const double pi = std::numbers::pi;
  for (u64 j = 1; 2 * j <= M; ++j) {
    const double c = std::cos(2.0 * pi * static_cast<double>(j) / static_cast<double>(M));
    const double v = std::pow(2.0 - 2.0 * c, m);
    tab[j] = v;
    tab[M - j] = v;
  }
  return tab;
}

inline double table_mean(const std::vector<double>& tab) {
  long double acc = 0.0L;
  for (double v : tab) acc += v;
  return static_cast<double>(acc / static_cast<long double>(tab.size()));
}

/// sum_j hist[j] * table[(mult * j) mod M], fixed ascending-j order.
inline double histogram_moment(const std::vector<u64>& hist,
                               const std::vector<double>& tab, u64 mult = 1) {
  const u64 M = tab.size();
  long double acc = 0.0L;
  for (u64 j = 0; j < M; ++j) {
    if (hist[j]) acc += static_cast<long double>(hist[j]) * tab[mul_mod(mult, j, M)];
  }
  return static_cast<double>(acc);
}

namespace detail {

constexpr u64 kNoIndex = ~u64{0};

struct MultScanResult {
  std::vector<u64> hist;  // ratio classes mod t over pairs with both values != 0
  Decomposition dec;
};

// One pass over I: each n contributes the class of chi(F(n+1))/chi(F(n))
// when both values are units; zero patterns are tallied separately.
// F is evaluated once per point (the n+1 value is reused at the next step).
inline MultScanResult mult_ratio_scan(const PrimeFieldCtx& ctx, const MultChar& chi,
                                      const ModPoly& f, Interval I) {
  const u64 p = ctx.p();
  const u64 n_group = p - 1;
  const u64 t = chi.order();
  const u64 g = std::gcd(chi.exponent(), n_group);
  const u64 s_prime = (chi.exponent() / g) % t;
  MultScanResult out;
  out.hist.assign(t, 0);
  const auto& tab = ctx.index_table();
  auto ind = [&](u64 x) { return tab.empty() ? ctx.discrete_log(x) : static_cast<u64>(tab[x]); };
  u64 n = I.start % p;
  u64 prev = eval(f, n);
  u64 prev_ind = prev ? ind(prev) : kNoIndex;
  for (u64 j = 0; j < I.length; ++j) {
    const u64 nn = (n + 1 == p) ? 0 : n + 1;
    const u64 cur = eval(f, nn);
    const u64 cur_ind = cur ? ind(cur) : kNoIndex;
    if (prev && cur) {
      ++out.dec.m3;
      const u64 delta = (cur_ind + n_group - prev_ind) % n_group;
      ++out.hist[mul_mod(s_prime, delta % t, t)];
    } else if (prev) {
      ++out.dec.m1;
    } else if (cur) {
      ++out.dec.m2;
    } else {
      ++out.dec.both;
    }
    n = nn;
    prev = cur;
    prev_ind = cur_ind;
  }
  return out;
}

struct AddScanResult {
  std::vector<u64> hist;  // counts of (F(n+1) - F(n)) mod p, all n in I
  Decomposition dec;
};

inline AddScanResult add_delta_scan(const ModPoly& f, Interval I) {
  const u64 p = f.p;
  AddScanResult out;
  out.hist.assign(p, 0);
  u64 n = I.start % p;
  u64 prev = eval(f, n);
  for (u64 j = 0; j < I.length; ++j) {
    const u64 nn = (n + 1 == p) ? 0 : n + 1;
    const u64 cur = eval(f, nn);
    ++out.hist[(cur + p - prev) % p];
    if (prev && cur)
      ++out.dec.m3;
    else if (prev)
      ++out.dec.m1;
    else if (cur)
      ++out.dec.m2;
    else
      ++out.dec.both;
    n = nn;
    prev = cur;
  }
  return out;
}

inline void require_interval(u64 p, Interval I) {
  if (I.length == 0 || I.length > p)
    throw interval_out_of_range_error("interval length must be in [1, p]");
}

inline void require_m(double m) {
  if (!(m > 0.0) || !(m <= 1.0))
    throw std::invalid_argument("moment exponent m must lie in (0, 1]");
}

// Histograms over all of F_p are impractical past this point; fall back to
// summing term by term.
constexpr u64 kAddTableCap = u64{1} << 22;

}  // namespace detail

/// sum over n in I, both chi(F(n)) and chi(F(n+1)) nonzero, of
/// |chi(F(n)) - chi(F(n+1))|^(2m).
inline double lhs_moment_mult(const PrimeFieldCtx& ctx, const MultChar& chi,
                              const IntPoly& F, Interval I, double m) {
  detail::require_m(m);
  detail::require_interval(ctx.p(), I);
  const ModPoly f = reduce_mod(F, ctx.p());
  const auto scan = detail::mult_ratio_scan(ctx, chi, f, I);
  return histogram_moment(scan.hist, moment_term_table(chi.order(), m));
}

/// sum over all n in I of |psi(F(n)) - psi(F(n+1))|^(2m).
inline double lhs_moment_add(const PrimeFieldCtx& ctx, const AddChar& psi,
                             const IntPoly& F, Interval I, double m) {
  detail::require_m(m);
  detail::require_interval(ctx.p(), I);
  const u64 p = ctx.p();
  const ModPoly f = reduce_mod(F, p);
  if (p <= detail::kAddTableCap) {
    const auto scan = detail::add_delta_scan(f, I);
    return histogram_moment(scan.hist, moment_term_table(p, m), psi.a());
  }
  const double pi = std::numbers::pi;
  long double acc = 0.0L;
  u64 n = I.start % p;
  u64 prev = eval(f, n);
  for (u64 j = 0; j < I.length; ++j) {
    const u64 nn = (n + 1 == p) ? 0 : n + 1;
    const u64 cur = eval(f, nn);
    const u64 d = mul_mod(psi.a(), (cur + p - prev) % p, p);
    if (d) {
      const double c = std::cos(2.0 * pi * static_cast<double>(d) / static_cast<double>(p));
      acc += std::pow(2.0 - 2.0 * c, m);
    }
    n = nn;
    prev = cur;
  }
  return static_cast<double>(acc);
}

struct ConditionScan {
  std::vector<u64> violating_n;  // ratio of character values equals +1 or -1
  std::vector<u64> excluded_n;   // at least one character value is zero
};

/// Points of I violating |Re(chi(F(n)) * conj(chi(F(n+1))))| < 1.
inline ConditionScan check_condition_mult(const PrimeFieldCtx& ctx, const MultChar& chi,
                                          const IntPoly& F, Interval I) {
  detail::require_interval(ctx.p(), I);
  const u64 p = ctx.p();
  const ModPoly f = reduce_mod(F, p);
  ConditionScan out;
  u64 n = I.start % p;
  for (u64 j = 0; j < I.length; ++j) {
    const u64 nn = (n + 1 == p) ? 0 : n + 1;
    const RootIndex a = chi(eval(f, n));
    const RootIndex b = chi(eval(f, nn));
    if (a.zero || b.zero) {
      out.excluded_n.push_back(n);
    } else {
      const RootIndex ratio = a * b.conj();
      if (ratio.is_one() || ratio.is_minus_one()) out.violating_n.push_back(n);
    }
    n = nn;
  }
  return out;
}

/// Points of I violating F(n+1) != F(n) mod p (the additive ratio is then +1;
/// -1 never occurs for an odd modulus).
inline ConditionScan check_condition_add(const PrimeFieldCtx& ctx, const IntPoly& F,
                                         Interval I) {
  detail::require_interval(ctx.p(), I);
  const u64 p = ctx.p();
  const ModPoly f = reduce_mod(F, p);
  ConditionScan out;
  u64 n = I.start % p;
  u64 prev = eval(f, n);
  for (u64 j = 0; j < I.length; ++j) {
    const u64 nn = (n + 1 == p) ? 0 : n + 1;
    const u64 cur = eval(f, nn);
    if (cur == prev) out.violating_n.push_back(n);
    n = nn;
    prev = cur;
  }
  return out;
}

inline Decomposition decomposition(const PrimeFieldCtx& ctx, const IntPoly& F,
                                   Interval I) {
  detail::require_interval(ctx.p(), I);
  return detail::add_delta_scan(reduce_mod(F, ctx.p()), I).dec;
}

/// One verified data point: moment sum against its predicted main term.
struct MomentReport {
  u64 p = 0;
  double m = 0.0;
  u64 n = 0;  // interval length |I|
  double lhs = 0.0;
  double constant = 0.0;    // main-term constant (closed-average route)
  double main_term = 0.0;   // constant * |I|
  double abs_error = 0.0;   // |lhs - main_term|
  double normalized_error = 0.0;  // abs_error / (sqrt(p) * ln p)
  Decomposition dec;
  u64 condition_violations = 0;
  CertifyResult hypothesis;
  bool interval_in_range = false;  // sqrt(p) ln p < |I| < p
};

namespace detail {

inline void finish_report(MomentReport& rep, u64 p, double m, u64 n, double lhs,
                          double constant) {
  rep.p = p;
  rep.m = m;
  rep.n = n;
  rep.lhs = lhs;
  rep.constant = constant;
  rep.main_term = constant * static_cast<double>(n);
  rep.abs_error = std::abs(lhs - rep.main_term);
  const double scale = std::sqrt(static_cast<double>(p)) * std::log(static_cast<double>(p));
  rep.normalized_error = rep.abs_error / scale;
  rep.interval_in_range = scale < static_cast<double>(n) && n < p;
}

}  // namespace detail

/// Moment of |chi(F(n)) - chi(F(n+1))| over I against C * |I|.
inline MomentReport verify_thm1(const PrimeFieldCtx& ctx, const MultChar& chi,
                                const IntPoly& F, Interval I, double m) {
  detail::require_m(m);
  detail::require_interval(ctx.p(), I);
  const u64 t = chi.order();
  if (t <= 2)
    throw order_not_dividing_error("verify_thm1: character order must exceed 2");
  MomentReport rep;
  rep.hypothesis = certify_not_tth_power_proportional(F, t, ctx);
  const ModPoly f = reduce_mod(F, ctx.p());
  const auto scan = detail::mult_ratio_scan(ctx, chi, f, I);
  const auto tab = moment_term_table(t, m);
  const double lhs = histogram_moment(scan.hist, tab);
  detail::finish_report(rep, ctx.p(), m, I.length, lhs, table_mean(tab));
  rep.dec = scan.dec;
  rep.condition_violations = scan.hist[0] + (t % 2 == 0 ? scan.hist[t / 2] : 0);
  return rep;
}

namespace detail {

// Core of verify_thm2 for an already reduced polynomial (the binomial
// example constructs its polynomial directly mod p).
inline MomentReport verify_thm2_reduced(const PrimeFieldCtx& ctx, const AddChar& psi,
                                        const ModPoly& f, int integer_degree,
                                        Interval I, double m) {
  require_m(m);
  require_interval(ctx.p(), I);
  if (psi.is_trivial())
    throw std::invalid_argument("verify_thm2: additive character must be nontrivial");
  const u64 p = ctx.p();
  if (p > kAddTableCap)
    throw std::invalid_argument("verify_thm2: p exceeds the histogram cap");
  MomentReport rep;
  if (integer_degree < 2)
    rep.hypothesis = {CertifyStatus::kInconclusive, "degree_below_2"};
  else if (f.degree() != integer_degree)
    rep.hypothesis = {CertifyStatus::kInconclusive, "degree_collapse"};
  else
    rep.hypothesis = {CertifyStatus::kCertified, ""};
  const auto scan = add_delta_scan(f, I);
  const auto tab = moment_term_table(p, m);
  const double lhs = histogram_moment(scan.hist, tab, psi.a());
  finish_report(rep, p, m, I.length, lhs, table_mean(tab));
  rep.dec = scan.dec;
  rep.condition_violations = scan.hist[0];
  return rep;
}

}  // namespace detail

/// Moment of |psi(F(n)) - psi(F(n+1))| over I against D * |I|.
inline MomentReport verify_thm2(const PrimeFieldCtx& ctx, const AddChar& psi,
                                const IntPoly& F, Interval I, double m) {
  return detail::verify_thm2_reduced(ctx, psi, reduce_mod(F, ctx.p()), F.degree(),
                                     I, m);
}

}  // namespace charmoment
