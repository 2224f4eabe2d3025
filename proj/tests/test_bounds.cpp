#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "charmoment/bounds.hpp"

using namespace charmoment;

TEST_CASE("twisted complete sums of a linear polynomial", "[bounds]") {
  PrimeFieldCtx ctx(13);
  const AddChar psi(ctx, 3);
  const IntPoly line{0, 1};  // G = X
  // sum_x e((3 - b) x / 13) is 13 at b = 3, else 0
  CHECK(std::abs(twisted_complete_sum(ctx, psi, line, 3) -
                 std::complex<double>{13.0, 0.0}) < 1e-10);
  for (u64 b : {0ull, 1ull, 7ull, 12ull})
    CHECK(std::abs(twisted_complete_sum(ctx, psi, line, b)) < 1e-10);
}

TEST_CASE("gauss sums meet the bound with equality", "[bounds]") {
  const IntPoly square{0, 0, 1};
  for (u64 p : {5ull, 13ull, 101ull, 2003ull}) {
    PrimeFieldCtx ctx(p);
    const AddChar psi(ctx, 1);
    const BoundCheck bc = weil_check(ctx, psi, square);
    CHECK(bc.ok);
    CHECK(bc.lhs == Catch::Approx(std::sqrt(static_cast<double>(p))).margin(1e-6));
    CHECK(bc.rhs == Catch::Approx(std::sqrt(static_cast<double>(p))).epsilon(1e-15));
  }
}

TEST_CASE("complete sum checks across degrees", "[bounds]") {
  PrimeFieldCtx ctx(101);
  const AddChar psi(ctx, 5);
  for (const IntPoly& G :
       {IntPoly{3, 1}, IntPoly{1, 2, 0, 1}, IntPoly{0, 1, 1, 0, 1}, IntPoly{2, 0, 0, 0, 0, 1}}) {
    const BoundCheck bc = weil_check(ctx, psi, G);
    CHECK(bc.ok);
  }
  CHECK_THROWS_AS(weil_check(ctx, psi, IntPoly{5}), degenerate_degree_error);
  PrimeFieldCtx tiny(3);
  const AddChar psi3(tiny, 1);
  CHECK_THROWS_AS(weil_check(tiny, psi3, IntPoly{0, 0, 0, 0, 0, 1}),
                  degenerate_degree_error);  // degree 5 >= p = 3
  CHECK_THROWS_AS(weil_check(ctx, AddChar(ctx, 0), IntPoly{0, 0, 1}),
                  std::invalid_argument);
}

TEST_CASE("interval kernel closed form", "[bounds]") {
  const u64 p = 101;
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 40; ++trial) {
    const u64 b = rng() % p;
    const Interval I{rng() % p, 1 + rng() % p};
    std::complex<double> direct{0.0, 0.0};
    u64 n = I.start;
    for (u64 j = 0; j < I.length; ++j) {
      direct += unit_root(static_cast<double>(mul_mod(b, n, p)) / static_cast<double>(p));
      n = (n + 1) % p;
    }
    CHECK(std::abs(interval_kernel(p, I, b) - direct) < 1e-9);
  }
}

TEST_CASE("completion identity is exact", "[bounds]") {
  for (u64 p : {101ull, 1009ull}) {
    PrimeFieldCtx ctx(p);
    const AddChar psi(ctx, 2);
    for (const IntPoly& G : {IntPoly{1, 2, 0, 1}, IntPoly{0, 1, 1}}) {
      for (Interval I : {Interval{5, 50}, Interval{0, p}, Interval{p - 3, 7}}) {
        const CompletionReport rep = completion_identity_check(ctx, psi, G, I);
        CHECK(rep.ok);
        CHECK(rep.difference <= rep.tolerance);
        CHECK(rep.difference < 1e-8);
      }
    }
  }
}

TEST_CASE("incomplete sums against the completion bound", "[bounds]") {
  PrimeFieldCtx ctx(1009);
  const AddChar psi(ctx, 1);
  for (const IntPoly& G : {IntPoly{1, 2, 0, 1}, IntPoly{7, 0, 1}}) {
    for (u64 len : {40ull, 300ull, 1008ull}) {
      const BoundCheck bc = incomplete_sum_bound_check(ctx, psi, G, Interval{3, len});
      CHECK(bc.ok);
      CHECK(bc.rhs == Catch::Approx((G.degree() - 1) * std::sqrt(1009.0) *
                                    (1.0 + std::log(1009.0))).epsilon(1e-12));
    }
  }
}

TEST_CASE("normalized transform identities", "[bounds]") {
  const u64 p = 257;
  PeriodicTable delta;
  delta.p = p;
  delta.values.assign(p, {0.0, 0.0});
  delta.values[0] = {1.0, 0.0};
  const PeriodicTable dhat = normalized_fourier(delta);
  for (u64 h = 0; h < p; ++h)
    CHECK(std::abs(dhat.values[h] - std::complex<double>{1.0 / std::sqrt(257.0), 0.0}) <
          1e-12);

  // phi(x) = e(c x / p) concentrates at h = p - c with mass sqrt(p)
  const u64 c = 31;
  PeriodicTable expo;
  expo.p = p;
  expo.values.resize(p);
  for (u64 x = 0; x < p; ++x)
    expo.values[x] = unit_root(static_cast<double>(mul_mod(c, x, p)) / static_cast<double>(p));
  const PeriodicTable ehat = normalized_fourier(expo);
  for (u64 h = 0; h < p; ++h) {
    const double expect = (h == p - c) ? std::sqrt(static_cast<double>(p)) : 0.0;
    CHECK(std::abs(ehat.values[h]) == Catch::Approx(expect).margin(1e-9));
  }
}

TEST_CASE("parseval and double transform", "[bounds]") {
  const u64 p = 401;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  PeriodicTable phi;
  phi.p = p;
  phi.values.resize(p);
  for (auto& v : phi.values) v = {dist(rng), dist(rng)};
  const PeriodicTable hat = normalized_fourier(phi);
  double n0 = 0.0, n1 = 0.0;
  for (u64 x = 0; x < p; ++x) {
    n0 += std::norm(phi.values[x]);
    n1 += std::norm(hat.values[x]);
  }
  CHECK(n1 == Catch::Approx(n0).epsilon(1e-9));
  // applying the transform twice reflects the argument
  const PeriodicTable twice = normalized_fourier(hat);
  for (u64 x = 0; x < p; ++x)
    CHECK(std::abs(twice.values[x] - phi.values[(p - x) % p]) < 1e-9);
}

TEST_CASE("transform input validation", "[bounds]") {
  PeriodicTable bad;
  bad.p = 11;
  bad.values.assign(10, {0.0, 0.0});
  CHECK_THROWS_AS(normalized_fourier(bad), std::invalid_argument);
  PeriodicTable big;
  big.p = 4099;
  big.values.assign(4099, {0.0, 0.0});
  CHECK_THROWS_AS(normalized_fourier(big), std::invalid_argument);
}

TEST_CASE("fourier-side incomplete bound", "[bounds]") {
  const u64 p = 409;
  PeriodicTable ones;
  ones.p = p;
  ones.values.assign(p, {1.0, 0.0});
  const BoundCheck bc = fkm_bound_check(ones, Interval{0, 100});
  CHECK(bc.ok);
  CHECK(bc.lhs == Catch::Approx(100.0).epsilon(1e-12));
  // c = max(1, sqrt(p)); rhs = sqrt(p) * sqrt(p) * log(4 e^8 * 100 / sqrt(p))
  const double sqp = std::sqrt(409.0);
  CHECK(bc.rhs ==
        Catch::Approx(sqp * sqp * std::log(4.0 * std::exp(8.0) * 100.0 / sqp)).epsilon(1e-12));
  CHECK_THROWS_AS(fkm_bound_check(ones, Interval{0, 20}), interval_out_of_range_error);
  CHECK_THROWS_AS(fkm_bound_check(ones, Interval{0, 410}), interval_out_of_range_error);
}

TEST_CASE("character ratio tables feed the fourier bound", "[bounds]") {
  const u64 p = 409;
  PrimeFieldCtx ctx(p);
  const MultChar chi = mult_char_of_order(ctx, 3);
  const IntPoly F{1, 0, 1};
  const PeriodicTable phi = make_ratio_char_table(ctx, chi, F);
  REQUIRE(phi.consistent());
  // values are roots of unity away from the zeros of F
  std::size_t zeros = 0;
  for (const auto& v : phi.values) {
    if (std::abs(v) < 0.5)
      ++zeros;
    else
      CHECK(std::abs(v) == Catch::Approx(1.0).epsilon(1e-12));
  }
  CHECK(zeros <= 4);
  const BoundCheck bc = fkm_bound_check(phi, Interval{1, 120});
  CHECK(bc.ok);
}

TEST_CASE("mixed character sums agree with the table route", "[bounds]") {
  const u64 p = 61;
  PrimeFieldCtx ctx(p);
  const MultChar chi = mult_char_of_order(ctx, 5);
  const IntPoly F{1, 0, 1};
  const IntPoly Fs = taylor_shift(F);
  const PeriodicTable phi = make_ratio_char_table(ctx, chi, F);
  for (u64 b : {0ull, 1ull, 17ull}) {
    for (Interval I : {Interval{0, p}, Interval{4, 20}}) {
      std::complex<double> want{0.0, 0.0};
      u64 n = I.start;
      for (u64 j = 0; j < I.length; ++j) {
        want += phi.values[n] *
                unit_root(static_cast<double>((p - mul_mod(b, n, p)) % p) /
                          static_cast<double>(p));
        n = (n + 1) % p;
      }
      CHECK(std::abs(mixed_char_sum(ctx, chi, Fs, F, b, I) - want) < 1e-9);
    }
  }
}
