#include <gtest/gtest.h>

#include <random>

#include "ctile/scalar.hpp"

using namespace ctile;

namespace {

Quad q(long a, long b = 0, std::int64_t D = 2) { return Quad(Rational(a), Rational(b), D); }

Quad random_quad(std::mt19937_64& rng, std::int64_t D) {
  std::uniform_int_distribution<long> num(-50, 50), den(1, 12);
  return Quad(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), D);
}

}  // namespace

TEST(Scalar, NormIdentity) { EXPECT_EQ(q(1, 1) * q(1, -1), Quad(-1)); }

TEST(Scalar, AdditiveIdentity) {
  Quad x = q(3, -2);
  EXPECT_EQ(x + Quad(0), x);
}

TEST(Scalar, InverseOfOnePlusRootTwo) {
  Quad inv = Quad(1) / q(1, 1);
  EXPECT_EQ(inv, q(-1, 1));
  EXPECT_EQ(inv * q(1, 1), Quad(1));
}

TEST(Scalar, DivisionByZeroThrows) { EXPECT_THROW(q(1, 1) / Quad(0), DomainError); }

TEST(Scalar, MixedRadicandsThrow) {
  EXPECT_THROW(Quad::root(2) + Quad::root(3), DomainError);
  EXPECT_EQ((Quad(1) + Quad::root(3)).radicand(), 3);
}

TEST(Scalar, SignExamples) {
  EXPECT_EQ(Quad(0).sign(), 0);
  EXPECT_EQ(Quad(Rational(1), Rational(-2, 3), 2).sign(), 1);
  EXPECT_EQ(q(1, -1).sign(), -1);
  EXPECT_EQ(q(-1, 1).sign(), 1);
  EXPECT_EQ(q(-3, 2).sign(), -1);  // 9 > 8
}

TEST(Scalar, RadicandValidation) {
  EXPECT_NO_THROW(validate_radicand(0));
  EXPECT_NO_THROW(validate_radicand(2));
  EXPECT_NO_THROW(validate_radicand(30));
  EXPECT_THROW(validate_radicand(1), InputError);
  EXPECT_THROW(validate_radicand(12), InputError);
  EXPECT_THROW(validate_radicand(-5), InputError);
}

TEST(Scalar, ParseRational) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-1.5"), Rational(-3, 2));
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_THROW(parse_rational("x"), InputError);
  EXPECT_THROW(parse_rational("1/0"), InputError);
}

TEST(Scalar, ToFloatExamples) {
  EXPECT_EQ(to_double(Quad(Rational(1, 2))), 0.5);
  EXPECT_EQ(to_double(Quad(-3)), -3.0);
  // floor(sqrt(2) * 2^100) from the integer square root of 2 * 4^100
  Integer s;
  mpz_ui_pow_ui(s.get_mpz_t(), 4, 100);
  s *= 2;
  mpz_sqrt(s.get_mpz_t(), s.get_mpz_t());
  Approximation r = approximate(Quad::root(2), 100);
  BigFloat oracle(200);
  mpfr_set_z(oracle.get(), s.get_mpz_t(), MPFR_RNDN);
  mpfr_div_2ui(oracle.get(), oracle.get(), 100, MPFR_RNDN);
  BigFloat diff(200);
  mpfr_sub(diff.get(), r.value.get(), oracle.get(), MPFR_RNDN);
  double bound = std::ldexp(1.0 + 1.5, -100 + 2);
  EXPECT_LE(std::abs(diff.to_double()), bound + std::ldexp(1.0, -100));
  EXPECT_LE(r.error_bound, bound);
}

TEST(Scalar, ToFloatUnderCancellation) {
  // 99 - 70 sqrt(2) = 1 / (99 + 70 sqrt(2)); the right side has no cancellation
  Quad x = q(99, -70);
  Approximation r = approximate(x, 64);
  EXPECT_NEAR(r.value.to_double(), 1.0 / (99.0 + 70.0 * std::sqrt(2.0)), 1e-17);
  EXPECT_LE(r.error_bound, std::ldexp(1.0 + 0.0051, -62));
}

TEST(ScalarProperty, FieldAxioms) {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 500; ++it) {
    Quad x = random_quad(rng, 2), y = random_quad(rng, 2), z = random_quad(rng, 2);
    EXPECT_EQ((x + y) + z, x + (y + z));
    EXPECT_EQ((x * y) * z, x * (y * z));
    EXPECT_EQ(x * (y + z), x * y + x * z);
    if (!x.is_zero()) {
      EXPECT_EQ(x * (Quad(1) / x), Quad(1));
    }
  }
}

TEST(ScalarProperty, OrderMatchesHighPrecisionFloats) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 10000; ++it) {
    std::int64_t D = (it % 3 == 0) ? 3 : 2;
    Quad x = random_quad(rng, D), y = random_quad(rng, D);
    int s = (x - y).sign();
    Approximation ax = approximate(x, 128), ay = approximate(y, 128);
    int f = compare(ax.value, ay.value);
    if (s == 0) {
      EXPECT_EQ(x, y);
    } else {
      EXPECT_EQ(s, f > 0 ? 1 : -1) << x.str() << " vs " << y.str();
    }
    EXPECT_EQ(x < y, s < 0);
  }
}

TEST(ScalarProperty, CanonicalizationIdempotent) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 200; ++it) {
    Quad x = random_quad(rng, 5);
    Quad y(x.a(), x.b(), x.radicand());
    EXPECT_EQ(x, y);
    EXPECT_EQ(x.a().get_str(), y.a().get_str());
    EXPECT_EQ(x.b().get_str(), y.b().get_str());
    EXPECT_GT(x.a().get_den(), 0);
  }
}
