#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "charmoment/errors.hpp"

namespace charmoment {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 r = 1;
  base %= m;
  while (exp) {
    if (exp & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return r;
}

namespace detail {
inline constexpr u64 kMillerRabinWitnesses[] = {2,  3,  5,  7,  11, 13,
                                                17, 19, 23, 29, 31, 37};
}

/// Deterministic Miller-Rabin; the witness set certifies all 64-bit inputs.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : detail::kMillerRabinWitnesses) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : detail::kMillerRabinWitnesses) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Inverse of x modulo p via extended Euclid. Throws zero_inverse_error
/// when x ≡ 0 (mod p).
inline u64 mod_inv(u64 x, u64 p) {
  x %= p;
  if (x == 0) throw zero_inverse_error("mod_inv: 0 has no inverse");
  i64 t0 = 0, t1 = 1;
  u64 r0 = p, r1 = x;
  while (r1 != 0) {
    u64 q = r0 / r1;
    i64 t2 = t0 - static_cast<i64>(q) * t1;
    t0 = t1;
    t1 = t2;
    u64 r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
  }
  i64 r = t0 % static_cast<i64>(p);
  if (r < 0) r += static_cast<i64>(p);
  return static_cast<u64>(r);
}

/// Distinct prime factors by trial division; fine for the desk-scale moduli
/// this library targets (p - 1 up to ~2^50).
inline std::vector<u64> distinct_prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// Smallest primitive root mod an odd prime p.
inline u64 find_primitive_root(u64 p) {
  if (p < 3 || !is_prime(p))
    throw std::invalid_argument("find_primitive_root: need an odd prime");
  const auto qs = distinct_prime_factors(p - 1);
  for (u64 g = 2;; ++g) {
    bool ok = true;
    for (u64 q : qs) {
      if (pow_mod(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
}

/// Prime field context: fixes p and the smallest primitive root g, and owns
/// the discrete-log machinery. A full index table is built for p below the
/// table threshold; larger fields answer queries by baby-step/giant-step with
/// the baby-step map cached at construction. Immutable afterwards, so one
/// context may be shared across threads.
class PrimeFieldCtx {
 public:
  static constexpr u64 kDefaultTableThreshold = u64{1} << 22;

  enum class IndexTable { kAuto, kNone };

  explicit PrimeFieldCtx(u64 p, u64 table_threshold = kDefaultTableThreshold,
                         IndexTable policy = IndexTable::kAuto)
      : p_(p) {
    if (p < 3 || (p & 1) == 0 || !is_prime(p))
      throw std::invalid_argument("PrimeFieldCtx: p must be an odd prime");
    g_ = find_primitive_root(p);
    if (policy == IndexTable::kNone) return;
    if (p <= table_threshold && p <= std::numeric_limits<u32>::max()) {
      index_table_.assign(p, 0);
      u64 acc = 1;
      for (u64 e = 0; e + 1 < p; ++e) {
        index_table_[acc] = static_cast<u32>(e);
        acc = mul_mod(acc, g_, p);
      }
    } else {
      baby_steps_ = 1;
      while (baby_steps_ * baby_steps_ < p - 1) ++baby_steps_;
      baby_.reserve(baby_steps_ * 2);
      u64 acc = 1;
      for (u64 j = 0; j < baby_steps_; ++j) {
        baby_.emplace(acc, j);
        acc = mul_mod(acc, g_, p);
      }
      giant_factor_ = pow_mod(mod_inv(g_, p), baby_steps_, p);
    }
  }

  u64 p() const { return p_; }
  u64 g() const { return g_; }
  u64 group_order() const { return p_ - 1; }
  bool has_index_table() const { return !index_table_.empty(); }

  /// ind_g(x) in [0, p-2]. Throws zero_argument_error on x ≡ 0.
  u64 discrete_log(u64 x) const {
    x %= p_;
    if (x == 0) throw zero_argument_error("discrete_log: 0 is not in the unit group");
    if (!index_table_.empty()) return index_table_[x];
    if (baby_steps_ == 0)
      throw std::logic_error("discrete_log: context built without log support");
    u64 y = x;
    for (u64 i = 0; i <= (p_ - 2) / baby_steps_ + 1; ++i) {
      auto it = baby_.find(y);
      if (it != baby_.end()) return i * baby_steps_ + it->second;
      y = mul_mod(y, giant_factor_, p_);
    }
    throw std::logic_error("discrete_log: search exhausted");  // unreachable
  }

  u64 inv(u64 x) const { return mod_inv(x, p_); }

  /// Fast table access for hot loops; valid only when has_index_table().
  const std::vector<u32>& index_table() const { return index_table_; }

 private:
  u64 p_ = 0;
  u64 g_ = 0;
  std::vector<u32> index_table_;
  std::unordered_map<u64, u64> baby_;
  u64 baby_steps_ = 0;
  u64 giant_factor_ = 0;
};

inline u64 discrete_log(const PrimeFieldCtx& ctx, u64 x) {
  return ctx.discrete_log(x);
}

inline u64 mod_inv(u64 x, const PrimeFieldCtx& ctx) {
  return mod_inv(x, ctx.p());
}

}  // namespace charmoment
