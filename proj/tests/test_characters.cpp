#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "charmoment/characters.hpp"

using namespace charmoment;

namespace {

std::complex<double> ref_unit(double num, double den) {
  const double theta = 2.0 * std::numbers::pi * num / den;
  return {std::cos(theta), std::sin(theta)};
}

}  // namespace

TEST_CASE("root index exact predicates", "[characters]") {
  CHECK(RootIndex{0, 6, false}.is_one());
  CHECK(RootIndex{6, 6, false}.is_one());
  CHECK(RootIndex{3, 6, false}.is_minus_one());
  CHECK_FALSE(RootIndex{2, 6, false}.is_one());
  CHECK_FALSE(RootIndex{2, 5, false}.is_minus_one());  // odd modulus has no -1
  CHECK_FALSE(RootIndex::zero_value().is_one());
  CHECK(RootIndex::zero_value().zero);
  CHECK(RootIndex{4, 6, false}.canonical().k == 2);
  CHECK(RootIndex{4, 6, false}.canonical().M == 3);
  CHECK(RootIndex{2, 6, false} == RootIndex{1, 3, false});
}

TEST_CASE("root index arithmetic", "[characters]") {
  const RootIndex a{1, 4, false}, b{1, 6, false};
  const RootIndex ab = a * b;  // e(1/4 + 1/6) = e(5/12)
  CHECK(ab == RootIndex{5, 12, false});
  CHECK((a * a.conj()).is_one());
  CHECK((RootIndex::zero_value() * a).zero);
  const auto z = RootIndex{5, 12, false}.to_complex();
  const auto w = ref_unit(5, 12);
  CHECK(std::abs(z - w) < 1e-15);
  CHECK(std::abs(RootIndex::zero_value().to_complex()) == 0.0);
  // e(2/6) reinterpreted in the order-3 group is e(1/3)
  const RootIndex r = RootIndex{2, 6, false}.reduce_to(3);
  CHECK(r.k == 1);
  CHECK(r.M == 3);
  CHECK_THROWS_AS((RootIndex{1, 6, false}.reduce_to(3)), std::invalid_argument);
}

TEST_CASE("multiplicative character values", "[characters]") {
  PrimeFieldCtx ctx(7);
  const MultChar chi = mult_char_of_order(ctx, 3);
  CHECK(chi.exponent() == 2);
  CHECK(chi.order() == 3);
  CHECK(chi(0).zero);
  CHECK(chi(1).is_one());
  CHECK(chi(2) == RootIndex{2, 3, false});  // ind(2) = 2, e(4/6)
  CHECK(chi(6).is_one());                   // ind(6) = 3, e(6/6)
  CHECK_THROWS_AS(mult_char_of_order(ctx, 4), order_not_dividing_error);
  CHECK_THROWS_AS(mult_char_of_order(ctx, 5), order_not_dividing_error);
}

TEST_CASE("multiplicativity and order", "[characters]") {
  PrimeFieldCtx ctx(13);
  for (u64 s = 0; s < 12; ++s) {
    const MultChar chi(ctx, s);
    for (u64 x = 1; x < 13; ++x)
      for (u64 y = 1; y < 13; ++y)
        CHECK(chi(mul_mod(x, y, 13)) == chi(x) * chi(y));
    // chi^j trivial exactly when order | j
    const u64 t = chi.order();
    for (u64 j = 1; j <= t; ++j) {
      const MultChar chij(ctx, mul_mod(s, j, 12) % 12);
      bool trivial = true;
      for (u64 x = 1; x < 13; ++x) trivial = trivial && chij(x).is_one();
      CHECK(trivial == (j % t == 0));
    }
  }
}

TEST_CASE("character orthogonality", "[characters]") {
  PrimeFieldCtx ctx(13);
  for (u64 s = 0; s < 12; ++s) {
    const MultChar chi(ctx, s);
    std::complex<double> acc{0.0, 0.0};
    for (u64 x = 1; x < 13; ++x) acc += chi(x).to_complex();
    if (s == 0)
      CHECK(std::abs(acc - std::complex<double>{12.0, 0.0}) < 1e-12);
    else
      CHECK(std::abs(acc) < 1e-12);
  }
}

TEST_CASE("additive character", "[characters]") {
  PrimeFieldCtx ctx(5);
  const AddChar psi(ctx, 1);
  CHECK(psi(3) == RootIndex{3, 5, false});
  CHECK(psi(0).is_one());
  CHECK_FALSE(psi(2).zero);
  for (u64 a = 0; a < 5; ++a) {
    const AddChar pa(ctx, a);
    CHECK(pa.is_trivial() == (a == 0));
    for (u64 x = 0; x < 5; ++x)
      for (u64 y = 0; y < 5; ++y)
        CHECK(pa((x + y) % 5) == pa(x) * pa(y));
    std::complex<double> acc{0.0, 0.0};
    for (u64 x = 0; x < 5; ++x) acc += pa(x).to_complex();
    if (a == 0)
      CHECK(std::abs(acc - std::complex<double>{5.0, 0.0}) < 1e-12);
    else
      CHECK(std::abs(acc) < 1e-12);
  }
}

TEST_CASE("conjugate inverts on the unit circle", "[characters]") {
  PrimeFieldCtx ctx(11);
  const MultChar chi = mult_char_of_order(ctx, 5);
  for (u64 x = 1; x < 11; ++x) {
    CHECK((chi(x) * chi(x).conj()).is_one());
    const u64 xi = ctx.inv(x);
    CHECK(chi(xi) == chi(x).conj());
  }
}
