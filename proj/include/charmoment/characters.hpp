#pragma once

#include <complex>
#include <numbers>
#include <numeric>

#include "charmoment/field.hpp"

namespace charmoment {

/// A character value kept exact: either 0, or the root of unity e(k/M).
/// Exact form makes "equals 1" and "equals -1" tests free of rounding.
struct RootIndex {
  u64 k = 0;
  u64 M = 1;
  bool zero = false;

  static RootIndex zero_value() { return {0, 1, true}; }
  static RootIndex one() { return {0, 1, false}; }

  bool is_one() const { return !zero && k % M == 0; }
  bool is_minus_one() const { return !zero && M % 2 == 0 && k % M == M / 2; }

  /// Reduced form: k/M in lowest terms.
  RootIndex canonical() const {
    if (zero) return zero_value();
    u64 kk = k % M;
    if (kk == 0) return one();
    u64 g = std::gcd(kk, M);
    return {kk / g, M / g, false};
  }

  /// Reinterpret e(k/M) as e(k'/t); valid only when the order divides t
  /// in the sense k*t ≡ 0 (mod M).
  RootIndex reduce_to(u64 t) const {
    if (zero) return zero_value();
    u128 kt = static_cast<u128>(k % M) * t;
    if (kt % M != 0)
      throw std::invalid_argument("RootIndex::reduce_to: order does not divide t");
    return {static_cast<u64>(kt / M % t), t, false};
  }

  std::complex<double> to_complex() const {
    if (zero) return {0.0, 0.0};
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k % M) /
                         static_cast<double>(M);
    return {std::cos(theta), std::sin(theta)};
  }

  RootIndex conj() const {
    if (zero) return zero_value();
    return {(M - k % M) % M, M, false};
  }

  friend bool operator==(const RootIndex& a, const RootIndex& b) {
    if (a.zero || b.zero) return a.zero == b.zero;
    auto ca = a.canonical(), cb = b.canonical();
    return ca.k == cb.k && ca.M == cb.M;
  }

  /// Product of two roots on a common modulus lattice.
  friend RootIndex operator*(const RootIndex& a, const RootIndex& b) {
    if (a.zero || b.zero) return zero_value();
    u64 l = std::lcm(a.M, b.M);
    u64 ka = mul_mod(a.k % a.M, l / a.M, l);
    u64 kb = mul_mod(b.k % b.M, l / b.M, l);
    return {(ka + kb) % l, l, false};
  }
};

/// Multiplicative character x -> e(s * ind_g(x) / (p-1)), with chi(0) = 0.
class MultChar {
 public:
  MultChar(const PrimeFieldCtx& ctx, u64 exponent)
      : ctx_(&ctx), s_(exponent % ctx.group_order()) {}

  const PrimeFieldCtx& ctx() const { return *ctx_; }
  u64 exponent() const { return s_; }

  /// Order t of the character: least t with chi^t trivial.
  u64 order() const {
    const u64 n = ctx_->group_order();
    return s_ == 0 ? 1 : n / std::gcd(s_, n);
  }

  RootIndex operator()(u64 x) const {
    x %= ctx_->p();
    if (x == 0) return RootIndex::zero_value();
    const u64 n = ctx_->group_order();
    return RootIndex{mul_mod(s_, ctx_->discrete_log(x), n), n, false};
  }

 private:
  const PrimeFieldCtx* ctx_;
  u64 s_;
};

/// The character of exact order t for t | p-1, via exponent s = (p-1)/t.
inline MultChar mult_char_of_order(const PrimeFieldCtx& ctx, u64 t) {
  const u64 n = ctx.group_order();
  if (t == 0 || n % t != 0)
    throw order_not_dividing_error("mult_char_of_order: t does not divide p-1");
  return MultChar(ctx, n / t);
}

/// Additive character x -> e(a x / p); never zero.
class AddChar {
 public:
  AddChar(const PrimeFieldCtx& ctx, u64 a) : ctx_(&ctx), a_(a % ctx.p()) {}

  const PrimeFieldCtx& ctx() const { return *ctx_; }
  u64 a() const { return a_; }
  bool is_trivial() const { return a_ == 0; }

  RootIndex operator()(u64 x) const {
    return RootIndex{mul_mod(a_, x % ctx_->p(), ctx_->p()), ctx_->p(), false};
  }

 private:
  const PrimeFieldCtx* ctx_;
  u64 a_;
};

inline RootIndex eval_mult(const MultChar& chi, u64 x) { return chi(x); }
inline RootIndex eval_add(const AddChar& psi, u64 x) { return psi(x); }

}  // namespace charmoment
