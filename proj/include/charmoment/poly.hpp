#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "charmoment/field.hpp"

namespace charmoment {

using bigint = boost::multiprecision::cpp_int;

/// Dense integer polynomial, coefficients stored lowest degree first.
class IntPoly {
 public:
  IntPoly() = default;

  explicit IntPoly(std::vector<bigint> coeffs) : c_(std::move(coeffs)) { trim(); }

  IntPoly(std::initializer_list<long long> coeffs) {
    c_.reserve(coeffs.size());
    for (long long v : coeffs) c_.emplace_back(v);
    trim();
  }

  /// Parses "c0,c1,...,cd" (lowest degree first), e.g. "1,0,1" is X^2 + 1.
  static IntPoly from_string(std::string_view s) {
    std::vector<bigint> coeffs;
    std::string token;
    std::istringstream in{std::string(s)};
    while (std::getline(in, token, ',')) {
      const auto b = token.find_first_not_of(" \t");
      const auto e = token.find_last_not_of(" \t");
      if (b == std::string::npos)
        throw std::invalid_argument("IntPoly: empty coefficient");
      coeffs.emplace_back(bigint(token.substr(b, e - b + 1)));
    }
    if (coeffs.empty()) throw std::invalid_argument("IntPoly: empty string");
    return IntPoly(std::move(coeffs));
  }

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) out += ',';
      out += c_[i].str();
    }
    return out;
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  bigint coeff(std::size_t i) const { return i < c_.size() ? c_[i] : bigint(0); }
  const std::vector<bigint>& coeffs() const { return c_; }

  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  bigint eval(const bigint& x) const {
    bigint acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<bigint> c_;
};

/// f(X+1), computed exactly: b_i = sum_{j>=i} a_j * binom(j, i).
inline IntPoly taylor_shift(const IntPoly& f) {
  if (f.is_zero()) return f;
  const auto d = static_cast<std::size_t>(f.degree());
  std::vector<bigint> out(d + 1, 0);
  std::vector<bigint> row{1};  // binom(j, .) for the current j
  for (std::size_t j = 0; j <= d; ++j) {
    if (j > 0) {
      row.push_back(1);
      for (std::size_t i = j - 1; i >= 1; --i) row[i] += row[i - 1];
    }
    const bigint& aj = f.coeffs()[j];
    if (aj == 0) continue;
    for (std::size_t i = 0; i <= j; ++i) out[i] += aj * row[i];
  }
  return IntPoly(std::move(out));
}

/// Polynomial over F_p, coefficients in [0, p-1], lowest degree first, trimmed.
struct ModPoly {
  std::vector<u64> c;
  u64 p = 0;

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool is_constant() const { return c.size() <= 1; }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }

  friend bool operator==(const ModPoly& a, const ModPoly& b) {
    return a.p == b.p && a.c == b.c;
  }
};

inline ModPoly reduce_mod(const IntPoly& f, u64 p) {
  ModPoly out;
  out.p = p;
  out.c.reserve(f.coeffs().size());
  for (const bigint& a : f.coeffs()) {
    bigint r = a % p;
    if (r < 0) r += p;
    out.c.push_back(r.convert_to<u64>());
  }
  out.trim();
  return out;
}

inline u64 eval(const ModPoly& f, u64 n) {
  n %= f.p;
  u64 acc = 0;
  for (std::size_t i = f.c.size(); i-- > 0;)
    acc = (mul_mod(acc, n, f.p) + f.c[i]) % f.p;
  return acc;
}

inline u64 eval_mod(const IntPoly& f, u64 n, const PrimeFieldCtx& ctx) {
  return eval(reduce_mod(f, ctx.p()), n);
}

/// f(X+1) over F_p via the binomial convolution, Pascal row mod p.
inline ModPoly taylor_shift(const ModPoly& f) {
  if (f.is_zero()) return f;
  const u64 p = f.p;
  const auto d = f.c.size() - 1;
  ModPoly out;
  out.p = p;
  out.c.assign(d + 1, 0);
  std::vector<u64> row{1};
  for (std::size_t j = 0; j <= d; ++j) {
    if (j > 0) {
      row.push_back(1);
      for (std::size_t i = j - 1; i >= 1; --i) row[i] = (row[i] + row[i - 1]) % p;
    }
    const u64 aj = f.c[j];
    if (aj == 0) continue;
    for (std::size_t i = 0; i <= j; ++i)
      out.c[i] = (out.c[i] + mul_mod(aj, row[i], p)) % p;
  }
  out.trim();
  return out;
}

inline ModPoly derivative(const ModPoly& f) {
  ModPoly out;
  out.p = f.p;
  if (f.c.size() > 1) {
    out.c.resize(f.c.size() - 1);
    for (std::size_t i = 1; i < f.c.size(); ++i)
      out.c[i - 1] = mul_mod(f.c[i], i % f.p, f.p);
  }
  out.trim();
  return out;
}

namespace detail {

// Remainder of a by b over F_p; b must be nonzero.
inline ModPoly poly_rem(ModPoly a, const ModPoly& b) {
  const u64 p = a.p;
  const u64 lead_inv = mod_inv(b.c.back(), p);
  while (!a.is_zero() && a.degree() >= b.degree()) {
    const u64 q = mul_mod(a.c.back(), lead_inv, p);
    const std::size_t shift = a.c.size() - b.c.size();
    for (std::size_t i = 0; i < b.c.size(); ++i) {
      u64 sub = mul_mod(q, b.c[i], p);
      a.c[shift + i] = (a.c[shift + i] + p - sub) % p;
    }
    a.trim();
  }
  return a;
}

}  // namespace detail

/// Monic gcd over F_p. Throws both_zero_error when both inputs vanish.
inline ModPoly gcd_mod(ModPoly a, ModPoly b) {
  if (a.p != b.p) throw std::invalid_argument("gcd_mod: mismatched moduli");
  if (a.is_zero() && b.is_zero())
    throw both_zero_error("gcd_mod: gcd(0, 0) undefined");
  while (!b.is_zero()) {
    ModPoly r = detail::poly_rem(std::move(a), b);
    a = std::move(b);
    b = std::move(r);
  }
  const u64 lead_inv = mod_inv(a.c.back(), a.p);
  for (u64& ci : a.c) ci = mul_mod(ci, lead_inv, a.p);
  return a;
}

/// True when f has no repeated roots over the algebraic closure,
/// i.e. gcd(f, f') is constant. Requires deg f >= 1.
inline bool squarefree_mod(const ModPoly& f) {
  if (f.degree() < 1)
    throw degree_collapse_error("squarefree_mod: degree below 1");
  ModPoly d = derivative(f);
  if (d.is_zero()) return false;  // p divides every exponent: a p-th power
  return gcd_mod(f, d).is_constant();
}

enum class CertifyStatus { kCertified, kInconclusive };

struct CertifyResult {
  CertifyStatus status = CertifyStatus::kInconclusive;
  std::string reason;  // empty when certified

  bool ok() const { return status == CertifyStatus::kCertified; }
};

/// Sufficient condition for F(X+1)/F(X) not being proportional to a t-th
/// power mod p: F mod p squarefree, gcd(F(X), F(X+1)) = 1, and degree >= 1.
/// Every zero or pole of the ratio then has multiplicity +-1, and 0 < 1 < t.
/// A reduction that drops the integer degree is reported, not certified.
inline CertifyResult certify_not_tth_power_proportional(const IntPoly& F, u64 t,
                                                        const PrimeFieldCtx& ctx) {
  if (t <= 2)
    throw std::invalid_argument("certify_not_tth_power_proportional: need t > 2");
  if (F.degree() < 2)
    throw std::invalid_argument("certify_not_tth_power_proportional: need deg F > 1");
  ModPoly f = reduce_mod(F, ctx.p());
  if (f.degree() < 1) return {CertifyStatus::kInconclusive, "constant_reduction"};
  if (f.degree() != F.degree())
    return {CertifyStatus::kInconclusive, "degree_collapse"};
  if (!squarefree_mod(f)) return {CertifyStatus::kInconclusive, "not_squarefree"};
  if (!gcd_mod(f, taylor_shift(f)).is_constant())
    return {CertifyStatus::kInconclusive, "shared_factor_with_shift"};
  return {CertifyStatus::kCertified, ""};
}

/// binom(X, d+1) mod p, i.e. X(X-1)...(X-d) / (d+1)!. Requires d + 1 < p.
inline ModPoly binomial_poly(u64 d, const PrimeFieldCtx& ctx) {
  const u64 p = ctx.p();
  if (d + 1 >= p)
    throw factorial_divisible_error("binomial_poly: (d+1)! vanishes mod p");
  ModPoly out;
  out.p = p;
  out.c = {1};
  u64 fact = 1;
  for (u64 j = 0; j <= d; ++j) {
    // multiply by (X - j)
    out.c.insert(out.c.begin(), 0);
    const u64 mj = (p - j % p) % p;
    for (std::size_t i = 0; i + 1 < out.c.size(); ++i)
      out.c[i] = (out.c[i] + mul_mod(out.c[i + 1], mj, p)) % p;
    fact = mul_mod(fact, (j + 1) % p, p);
  }
  const u64 s = mod_inv(fact, p);
  for (u64& ci : out.c) ci = mul_mod(ci, s, p);
  out.trim();
  return out;
}

}  // namespace charmoment
