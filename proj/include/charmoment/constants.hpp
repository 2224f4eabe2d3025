#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "charmoment/field.hpp"

namespace charmoment {

/// Generalized binomial coefficient binom(m, k) for real m.
inline double binom_frac(double m, long k) {
  if (k < 0) return 0.0;
  double c = 1.0;
  for (long i = 1; i <= k; ++i) c *= (m - static_cast<double>(i - 1)) / i;
  return c;
}

struct SeriesParams {
  double m = 0.5;
  u64 modulus = 3;
  double tol = 1e-9;
  long k_max = 100000;
};

struct ConstantResult {
  double value = 0.0;       // 2^m times the truncated alternating series
  long k_used = 0;          // number of series terms consumed
  double tail_bound = 0.0;  // rigorous bound on |value - limit|
  bool converged = false;   // tail_bound <= tol at exit
  std::optional<double> oracle_value;  // independent closed-form average
};

/// Independent check value: (1/M) * sum_{j=0}^{M-1} (2 - 2cos(2*pi*j/M))^m.
/// This equals the full series limit; the two routes share no code.
inline double roots_avg_oracle(double m, u64 M) {
  if (M == 0) throw std::invalid_argument("roots_avg_oracle: modulus 0");
  long double acc = 0.0L;
  for (u64 j = 0; j < M; ++j) {
    const double c =
        std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(M));
    acc += std::pow(2.0 - 2.0 * c, m);
  }
  return static_cast<double>(acc / static_cast<long double>(M));
}

namespace detail {

using boost::multiprecision::cpp_int;

// Exact class sum: sum of binom(k, r) over 0 <= r <= k with 2r ≡ k (mod M).
inline cpp_int binom_class_sum_exact(u64 M, long k) {
  cpp_int sum = 0;
  cpp_int b = 1;  // binom(k, r), advanced multiplicatively
  for (long r = 0; r <= k; ++r) {
    if (r > 0) {
      b *= (k - r + 1);
      b /= r;
    }
    const u64 lhs = (2 * static_cast<u64>(r)) % M;
    if (lhs == static_cast<u64>(k) % M) sum += b;
  }
  return sum;
}

// Normalized class masses mass_k = (class sum at k) / 2^k, advanced k -> k+1.
// Small moduli carry the full residue-class vector: exact in unsigned 128-bit
// words through k = 64 (total mass 2^64), scaled doubles beyond, where every
// update is an addition of positives so the relative error stays ~k*eps.
// Large moduli only ever need k < M, where the only solution of 2r ≡ k (mod M)
// is the central r = k/2, so a single running central term suffices.
class MassSequence {
 public:
  static constexpr u64 kVectorMax = 512;

  explicit MassSequence(u64 M) : M_(M) {
    if (M_ < 3) throw std::invalid_argument("MassSequence: modulus below 3");
    if (M_ <= kVectorMax) {
      vector_mode_ = true;
      exact_.assign(M_, 0);
      exact_[0] = 1;
      scratch_exact_.assign(M_, 0);
    } else {
      central_exact_ = 1;  // binom(0, 0)
    }
  }

  // Largest k index this sequence can report.
  long k_cap() const {
    return vector_mode_ ? std::numeric_limits<long>::max()
                        : static_cast<long>(M_) - 1;
  }

  double mass() const {
    if (vector_mode_) {
      if (k_ <= kExactMax) {
        u128 s = 0;
        for (u64 c : qualifying_classes()) s += exact_[c];
        return std::ldexp(static_cast<double>(s), -static_cast<int>(k_));
      }
      double s = 0.0;
      for (u64 c : qualifying_classes()) s += float_[c];
      return s;
    }
    if (k_ % 2 != 0) return 0.0;
    if (k_ <= kExactMax)
      return std::ldexp(static_cast<double>(central_exact_), -static_cast<int>(k_));
    return central_float_;
  }

  void advance() {
    if (vector_mode_) {
      if (k_ < kExactMax) {
        for (u64 c = 0; c < M_; ++c)
          scratch_exact_[c] = exact_[c] + exact_[(c + M_ - 1) % M_];
        exact_.swap(scratch_exact_);
      } else {
        if (k_ == kExactMax) {
          float_.resize(M_);
          for (u64 c = 0; c < M_; ++c)
            float_[c] = std::ldexp(static_cast<double>(exact_[c]),
                                   -static_cast<int>(kExactMax));
          scratch_float_.assign(M_, 0.0);
        }
        for (u64 c = 0; c < M_; ++c)
          scratch_float_[c] = 0.5 * (float_[c] + float_[(c + M_ - 1) % M_]);
        float_.swap(scratch_float_);
      }
    } else {
      if (k_ % 2 == 0) {  // central binom(k, k/2) -> binom(k+2, k/2+1) at k+2
        const u64 h = static_cast<u64>(k_) / 2;
        if (k_ + 2 <= kExactMax) {
          central_exact_ = central_exact_ * (k_ + 1) * (k_ + 2) / ((h + 1) * (h + 1));
        } else {
          if (k_ == kExactMax)
            central_float_ =
                std::ldexp(static_cast<double>(central_exact_), -kExactMax);
          central_float_ *= (static_cast<double>(k_) + 1.0) /
                            (static_cast<double>(k_) + 2.0);
        }
      }
    }
    ++k_;
  }

 private:
  static constexpr long kExactMax = 64;

  std::vector<u64> qualifying_classes() const {
    const u64 k = static_cast<u64>(k_);
    if (M_ % 2 == 1) return {mul_mod(k % M_, (M_ + 1) / 2, M_)};
    if (k % 2 == 1) return {};
    const u64 c = (k / 2) % M_;
    return {c, (c + M_ / 2) % M_};
  }

  u64 M_;
  long k_ = 0;
  bool vector_mode_ = false;
  std::vector<u128> exact_, scratch_exact_;
  std::vector<double> float_, scratch_float_;
  u128 central_exact_ = 0;
  double central_float_ = 0.0;
};

// Largest |cos(2*pi*j/M)| over classes j with 2j !≡ 0 (mod M).
inline double class_cos_sup(u64 M) {
  if (M <= 2) return 0.0;
  const double pi = std::numbers::pi;
  return M % 2 == 1 ? std::cos(pi / static_cast<double>(M))
                    : std::cos(2.0 * pi / static_cast<double>(M));
}

// Shared series core. The alternating series
//   2^m * sum_k (-1)^k binom(m,k) mass_k
// is truncated once the rigorous remainder bound
//   2^m * |binom(m-1,K)| * sup_{k>K} mass_k
// falls under tol (sum_{k>K} |binom(m,k)| telescopes to |binom(m-1,K)| for
// 0 < m <= 1), or when the term budget runs out. Never throws on a slow
// tail: the caller gets the truncation with its honest bound.
inline ConstantResult truncated_constant_series(double m, u64 M, double tol,
                                                long k_max) {
  if (!(m > 0.0) || !(m <= 1.0))
    throw std::invalid_argument("constant series: need 0 < m <= 1");
  if (k_max < 1) throw std::invalid_argument("constant series: k_max < 1");
  MassSequence seq(M);
  // terms, indices 0..cap-1 (guard the +1 against the vector-mode LONG_MAX cap)
  const long cap = seq.k_cap() >= k_max ? k_max : seq.k_cap() + 1;
  const double scale = std::pow(2.0, m);
  const double g = (M % 2 == 0) ? 2.0 : 1.0;
  const double rho = class_cos_sup(M);
  const double md = static_cast<double>(M);
  long double acc = 0.0L;
  double c = 1.0;       // binom(m, k)
  double t_rem = 1.0;   // sum_{j>k} |binom(m, j)| = |binom(m-1, k)|
  double rho_pow = rho; // rho^(k+1)
  ConstantResult res;
  long k = 0;
  while (k < cap) {
    if (k > 0) {
      c *= (m - static_cast<double>(k - 1)) / static_cast<double>(k);
      t_rem *= (static_cast<double>(k) - m) / static_cast<double>(k);
    }
    if (c == 0.0) {  // integer m: the series terminates, remainder exactly 0
      res.tail_bound = 0.0;
      res.converged = true;
      ++k;
      break;
    }
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    acc += static_cast<long double>(sign * c * seq.mass());
    const double sup = std::min(1.0, (g + (md - g) * rho_pow) / md);
    res.tail_bound = scale * t_rem * sup;
    ++k;
    if (res.tail_bound <= tol) {
      res.converged = true;
      break;
    }
    if (k < cap) {
      seq.advance();
      rho_pow *= rho;
    }
  }
  res.k_used = k;
  res.value = scale * static_cast<double>(acc);
  // fold accumulated rounding into the reported bound (exact-termination wins)
  if (res.tail_bound != 0.0)
    res.tail_bound += 2.3e-16 * scale * static_cast<double>(k + 2);
  res.converged = res.tail_bound <= tol;
  return res;
}

constexpr u64 kOracleCap = u64{1} << 20;

}  // namespace detail

/// k-th series coefficient for the multiplicative constant:
/// binom(m,k) * sum of binom(k,r) over 0 <= r <= k with 2r ≡ k (mod t).
inline double u_coeff(double m, u64 t, long k) {
  if (t < 3) throw std::invalid_argument("u_coeff: need t > 2");
  if (k < 0) throw std::invalid_argument("u_coeff: negative k");
  return binom_frac(m, k) *
         detail::binom_class_sum_exact(t, k).convert_to<double>();
}

/// Additive analogue of u_coeff with the congruence taken mod p.
inline double v_coeff(double m, u64 p, long k) {
  if (p < 3) throw std::invalid_argument("v_coeff: need p >= 3");
  if (k < 0) throw std::invalid_argument("v_coeff: negative k");
  return binom_frac(m, k) *
         detail::binom_class_sum_exact(p, k).convert_to<double>();
}

/// Main-term constant for the multiplicative moment, order-t character.
inline ConstantResult C_const(double m, u64 t, double tol = 1e-9,
                              long k_max = 100000) {
  if (t < 3) throw std::invalid_argument("C_const: need t > 2");
  ConstantResult res = detail::truncated_constant_series(m, t, tol, k_max);
  if (t <= detail::kOracleCap) res.oracle_value = roots_avg_oracle(m, t);
  return res;
}

/// Main-term constant for the additive moment; the series index stays
/// below p, where only the central binomial class survives.
inline ConstantResult D_const(double m, u64 p, double tol = 1e-9,
                              long k_max = 100000) {
  if (p < 3 || !is_prime(p))
    throw std::invalid_argument("D_const: p must be an odd prime");
  ConstantResult res = detail::truncated_constant_series(m, p, tol, k_max);
  if (p <= detail::kOracleCap) res.oracle_value = roots_avg_oracle(m, p);
  return res;
}

inline ConstantResult C_const(const SeriesParams& sp) {
  return C_const(sp.m, sp.modulus, sp.tol, sp.k_max);
}

inline ConstantResult D_const(const SeriesParams& sp) {
  return D_const(sp.m, sp.modulus, sp.tol, sp.k_max);
}

}  // namespace charmoment
