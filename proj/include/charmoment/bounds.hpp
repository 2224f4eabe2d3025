#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "charmoment/characters.hpp"
#include "charmoment/moments.hpp"
#include "charmoment/poly.hpp"

namespace charmoment {

inline std::complex<double> unit_root(double frac) {
  const double theta = 2.0 * std::numbers::pi * frac;
  return {std::cos(theta), std::sin(theta)};
}

/// Complex-valued function on Z/pZ, one value per residue.
struct PeriodicTable {
  u64 p = 0;
  std::vector<std::complex<double>> values;

  bool consistent() const { return values.size() == p; }
};

/// One inequality instance. ok allows a small numeric slack scaled to the
/// modulus so exact-equality cases (Gauss sums, vanishing linear sums)
/// are not failed on rounding.
struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
  std::string context;
};

namespace detail {

inline double numeric_slack(u64 p) { return 1e-9 * std::sqrt(static_cast<double>(p)); }

inline std::vector<std::complex<double>> root_table(u64 p) {
  std::vector<std::complex<double>> r(p);
  for (u64 j = 0; j < p; ++j)
    r[j] = unit_root(static_cast<double>(j) / static_cast<double>(p));
  return r;
}

}  // namespace detail

/// S(b/p) = sum_{x mod p} psi(G(x)) e(-b x / p).
inline std::complex<double> twisted_complete_sum(const PrimeFieldCtx& ctx,
                                                 const AddChar& psi, const IntPoly& G,
                                                 u64 b) {
  const u64 p = ctx.p();
  const ModPoly f = reduce_mod(G, p);
  b %= p;
  std::complex<double> acc{0.0, 0.0};
  for (u64 x = 0; x < p; ++x) {
    const u64 e = (mul_mod(psi.a(), eval(f, x), p) + p - mul_mod(b, x, p)) % p;
    acc += unit_root(static_cast<double>(e) / static_cast<double>(p));
  }
  return acc;
}

/// |sum_x psi(G(x))| against the complete-sum bound (d_p - 1) sqrt(p).
inline BoundCheck weil_check(const PrimeFieldCtx& ctx, const AddChar& psi,
                             const IntPoly& G) {
  const u64 p = ctx.p();
  if (psi.is_trivial())
    throw std::invalid_argument("weil_check: additive character must be nontrivial");
  const ModPoly f = reduce_mod(G, p);
  const int d = f.degree();
  if (d < 1 || static_cast<u64>(d) >= p)
    throw degenerate_degree_error("weil_check: need 1 <= deg(G mod p) < p");
  BoundCheck out;
  out.lhs = std::abs(twisted_complete_sum(ctx, psi, G, 0));
  out.rhs = static_cast<double>(d - 1) * std::sqrt(static_cast<double>(p));
  out.ok = out.lhs <= out.rhs + detail::numeric_slack(p);
  out.context = "complete sum, degree " + std::to_string(d);
  return out;
}

/// Interval kernel lambda(b/p) = sum_{n in I} e(b n / p), closed form.
inline std::complex<double> interval_kernel(u64 p, Interval I, u64 b) {
  b %= p;
  if (b == 0) return {static_cast<double>(I.length), 0.0};
  const double fp = static_cast<double>(p);
  const std::complex<double> step = unit_root(static_cast<double>(b) / fp);
  const std::complex<double> first =
      unit_root(static_cast<double>(mul_mod(b, I.start % p, p)) / fp);
  // (step^N - 1) / (step - 1), with step^N via the reduced exponent
  const u64 top = mul_mod(b, I.length % p, p);
  const std::complex<double> num =
      unit_root(static_cast<double>(top) / fp) - std::complex<double>{1.0, 0.0};
  return first * num / (step - std::complex<double>{1.0, 0.0});
}

struct CompletionReport {
  std::complex<double> direct{0.0, 0.0};
  std::complex<double> completed{0.0, 0.0};
  double difference = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

/// Exact completion identity: sum_{n in I} psi(G(n)) equals
/// (1/p) sum_b lambda(b/p) S(b/p). Both sides evaluated numerically.
inline CompletionReport completion_identity_check(const PrimeFieldCtx& ctx,
                                                  const AddChar& psi, const IntPoly& G,
                                                  Interval I) {
  detail::require_interval(ctx.p(), I);
  const u64 p = ctx.p();
  const ModPoly f = reduce_mod(G, p);
  const auto roots = detail::root_table(p);
  std::vector<std::complex<double>> val(p);
  for (u64 x = 0; x < p; ++x) val[x] = roots[mul_mod(psi.a(), eval(f, x), p)];

  CompletionReport rep;
  u64 n = I.start % p;
  std::complex<double> direct{0.0, 0.0};
  for (u64 j = 0; j < I.length; ++j) {
    direct += val[n];
    n = (n + 1 == p) ? 0 : n + 1;
  }
  rep.direct = direct;

  std::complex<double> completed{0.0, 0.0};
  for (u64 b = 0; b < p; ++b) {
    std::complex<double> s{0.0, 0.0};
    for (u64 x = 0; x < p; ++x) s += val[x] * roots[(p - mul_mod(b, x, p)) % p];
    completed += interval_kernel(p, I, b) * s;
  }
  completed /= static_cast<double>(p);
  rep.completed = completed;
  rep.difference = std::abs(direct - completed);
  rep.tolerance = 1e-8 * std::sqrt(static_cast<double>(p));
  rep.ok = rep.difference <= rep.tolerance;
  return rep;
}

/// |sum_{n in I} psi(G(n))| against (d_p - 1) sqrt(p) (1 + ln p).
inline BoundCheck incomplete_sum_bound_check(const PrimeFieldCtx& ctx,
                                             const AddChar& psi, const IntPoly& G,
                                             Interval I) {
  detail::require_interval(ctx.p(), I);
  const u64 p = ctx.p();
  if (psi.is_trivial())
    throw std::invalid_argument("incomplete_sum_bound_check: nontrivial character required");
  const ModPoly f = reduce_mod(G, p);
  const int d = f.degree();
  if (d < 1 || static_cast<u64>(d) >= p)
    throw degenerate_degree_error("incomplete_sum_bound_check: need 1 <= deg(G mod p) < p");
  std::complex<double> acc{0.0, 0.0};
  u64 n = I.start % p;
  for (u64 j = 0; j < I.length; ++j) {
    acc += unit_root(static_cast<double>(mul_mod(psi.a(), eval(f, n), p)) /
                     static_cast<double>(p));
    n = (n + 1 == p) ? 0 : n + 1;
  }
  BoundCheck out;
  out.lhs = std::abs(acc);
  out.rhs = static_cast<double>(d - 1) * std::sqrt(static_cast<double>(p)) *
            (1.0 + std::log(static_cast<double>(p)));
  out.ok = out.lhs <= out.rhs + detail::numeric_slack(p);
  out.context = "incomplete sum, degree " + std::to_string(d) + ", length " +
                std::to_string(I.length);
  return out;
}

namespace detail {
// The O(p^2) transform below is meant for desk-scale checks only.
constexpr u64 kFourierCap = 4096;
}  // namespace detail

/// Unitary-normalized transform phi_hat(h) = (1/sqrt(p)) sum_x phi(x) e(h x / p).
inline PeriodicTable normalized_fourier(const PeriodicTable& phi) {
  if (!phi.consistent())
    throw std::invalid_argument("normalized_fourier: table size differs from p");
  if (phi.p == 0 || phi.p > detail::kFourierCap)
    throw std::invalid_argument("normalized_fourier: p outside (0, 4096]");
  const u64 p = phi.p;
  const auto roots = detail::root_table(p);
  PeriodicTable out;
  out.p = p;
  out.values.assign(p, {0.0, 0.0});
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  for (u64 h = 0; h < p; ++h) {
    std::complex<double> acc{0.0, 0.0};
    for (u64 x = 0; x < p; ++x) acc += phi.values[x] * roots[mul_mod(h, x, p)];
    out.values[h] = acc * scale;
  }
  return out;
}

/// Incomplete-sum bound with the Fourier-side constant:
/// |sum_{n in I} phi(n)| <= c sqrt(p) ln(4 e^8 |I| / sqrt(p)),
/// c = max(sup|phi|, sup|phi_hat|), valid for sqrt(p) < |I| <= p.
inline BoundCheck fkm_bound_check(const PeriodicTable& phi, Interval I) {
  if (!phi.consistent())
    throw std::invalid_argument("fkm_bound_check: table size differs from p");
  const u64 p = phi.p;
  const double sqp = std::sqrt(static_cast<double>(p));
  if (!(sqp < static_cast<double>(I.length)) || I.length > p)
    throw interval_out_of_range_error("fkm_bound_check: need sqrt(p) < |I| <= p");
  const PeriodicTable hat = normalized_fourier(phi);
  double c = 0.0;
  for (u64 x = 0; x < p; ++x) c = std::max(c, std::abs(phi.values[x]));
  for (u64 h = 0; h < p; ++h) c = std::max(c, std::abs(hat.values[h]));
  std::complex<double> acc{0.0, 0.0};
  u64 n = I.start % p;
  for (u64 j = 0; j < I.length; ++j) {
    acc += phi.values[n];
    n = (n + 1 == p) ? 0 : n + 1;
  }
  BoundCheck out;
  out.lhs = std::abs(acc);
  out.rhs = c * sqp * std::log(4.0 * std::exp(8.0) * static_cast<double>(I.length) / sqp);
  out.ok = out.lhs <= out.rhs + detail::numeric_slack(p);
  out.context = "fkm, length " + std::to_string(I.length);
  return out;
}

/// phi(n) = chi(F(n+1)) conj(chi(F(n))) as a table over Z/pZ, zero where
/// either factor vanishes.
inline PeriodicTable make_ratio_char_table(const PrimeFieldCtx& ctx, const MultChar& chi,
                                           const IntPoly& F) {
  const u64 p = ctx.p();
  const ModPoly f = reduce_mod(F, p);
  PeriodicTable out;
  out.p = p;
  out.values.assign(p, {0.0, 0.0});
  u64 prev = eval(f, 0);
  RootIndex prev_chi = chi(prev);
  for (u64 n = 0; n < p; ++n) {
    const u64 nn = (n + 1 == p) ? 0 : n + 1;
    const RootIndex cur_chi = chi(eval(f, nn));
    if (!prev_chi.zero && !cur_chi.zero)
      out.values[n] = (cur_chi * prev_chi.conj()).to_complex();
    prev_chi = cur_chi;
  }
  return out;
}

/// sum_{n in I} chi(A(n)) conj(chi(B(n))) e(-b n / p); terms with a vanishing
/// character value drop out.
inline std::complex<double> mixed_char_sum(const PrimeFieldCtx& ctx, const MultChar& chi,
                                           const IntPoly& A, const IntPoly& B, u64 b,
                                           Interval I) {
  detail::require_interval(ctx.p(), I);
  const u64 p = ctx.p();
  const ModPoly fa = reduce_mod(A, p);
  const ModPoly fb = reduce_mod(B, p);
  b %= p;
  std::complex<double> acc{0.0, 0.0};
  u64 n = I.start % p;
  for (u64 j = 0; j < I.length; ++j) {
    const RootIndex va = chi(eval(fa, n));
    const RootIndex vb = chi(eval(fb, n));
    if (!va.zero && !vb.zero) {
      const RootIndex tw{(p - mul_mod(b, n, p)) % p, p, false};
      acc += (va * vb.conj() * tw).to_complex();
    }
    n = (n + 1 == p) ? 0 : n + 1;
  }
  return acc;
}

}  // namespace charmoment
