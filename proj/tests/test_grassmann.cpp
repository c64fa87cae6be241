#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "supermoduli/grassmann.hpp"
#include "test_util.hpp"

using namespace supermoduli;
using testutil::random_grassmann;
using testutil::random_invertible_even;

namespace {
GrassmannNumber eta(int s, int i) { return GrassmannNumber::generator(s, i); }
}  // namespace

TEST_CASE("addition") {
  const int s = 4;
  GrassmannNumber one(s, 1.0);
  GrassmannNumber e12 = GrassmannNumber::term(s, {1, 2}, 1.0);

  SUBCASE("coefficient addition") {
    GrassmannNumber sum = (one + e12) + e12;
    CHECK(distance(sum, one + e12 * Coeff{2.0}) < 1e-15);
  }
  SUBCASE("identity") {
    GrassmannNumber a = one + e12 * Coeff{3.0, -1.0};
    CHECK(distance(a + GrassmannNumber(s), a) == 0.0);
  }
  SUBCASE("inverse") { CHECK((eta(s, 1) + (-eta(s, 1))).is_zero()); }
  SUBCASE("mismatched contexts") {
    CHECK_THROWS_AS(GrassmannNumber(3, 1.0) += GrassmannNumber(4, 1.0), std::invalid_argument);
  }
}

TEST_CASE("multiplication") {
  const int s = 4;
  SUBCASE("anticommutativity") {
    CHECK(distance(eta(s, 1) * eta(s, 2), GrassmannNumber::term(s, {1, 2}, 1.0)) == 0.0);
    CHECK(distance(eta(s, 2) * eta(s, 1), GrassmannNumber::term(s, {1, 2}, -1.0)) == 0.0);
  }
  SUBCASE("nilpotency") { CHECK((eta(s, 1) * eta(s, 1)).is_zero()); }
  SUBCASE("distributivity") {
    GrassmannNumber one(s, 1.0);
    GrassmannNumber lhs = (one + eta(s, 1)) * (one + eta(s, 2));
    GrassmannNumber rhs = one + eta(s, 1) + eta(s, 2) + GrassmannNumber::term(s, {1, 2}, 1.0);
    CHECK(distance(lhs, rhs) < 1e-15);
  }
}

TEST_CASE("body, soul, parity") {
  const int s = 4;
  GrassmannNumber a = GrassmannNumber(s, 3.0) + GrassmannNumber::term(s, {1, 2}, 2.0);
  CHECK(a.body() == Coeff{3.0});
  CHECK(distance(a.soul(), GrassmannNumber::term(s, {1, 2}, 2.0)) == 0.0);
  CHECK(distance(GrassmannNumber(s, a.body()) + a.soul(), a) == 0.0);
  CHECK((eta(s, 1) + GrassmannNumber::term(s, {1, 2, 3}, 1.0)).parity() == Parity::Odd);
  CHECK(a.parity() == Parity::Even);
  CHECK((a + eta(s, 1)).parity() == Parity::Mixed);
  CHECK(GrassmannNumber(s).parity() == Parity::Even);  // zero is even by convention
}

TEST_CASE("soul is nilpotent of order s+1") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const int s = 4;
    GrassmannNumber a = random_grassmann(rng, s, Parity::Mixed);
    GrassmannNumber pow(s, 1.0);
    for (int k = 0; k <= s; ++k) pow = pow * a.soul();
    CHECK(pow.is_zero());
  }
}

TEST_CASE("invert") {
  const int s = 4;
  SUBCASE("Neumann series truncates") {
    GrassmannNumber a = GrassmannNumber(s, 1.0) + GrassmannNumber::term(s, {1, 2}, 1.0);
    GrassmannNumber expect = GrassmannNumber(s, 1.0) + GrassmannNumber::term(s, {1, 2}, -1.0);
    CHECK(distance(invert(a), expect) < 1e-14);
  }
  SUBCASE("scalar") { CHECK(distance(invert(GrassmannNumber(s, 2.0)), GrassmannNumber(s, 0.5)) < 1e-15); }
  SUBCASE("zero body is an error") { CHECK_THROWS_AS(invert(eta(s, 1)), std::domain_error); }
  SUBCASE("two-sided inverse and involution") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 25; ++rep) {
      GrassmannNumber a = random_invertible_even(rng, s) + random_grassmann(rng, s, Parity::Odd, 0.3);
      GrassmannNumber ai = invert(a);
      CHECK(distance(a * ai, GrassmannNumber(s, 1.0)) < 1e-12);
      CHECK(distance(ai * a, GrassmannNumber(s, 1.0)) < 1e-12);
      CHECK(distance(invert(ai), a) < 1e-11);
    }
  }
}

TEST_CASE("sqrt_even") {
  const int s = 4;
  SUBCASE("binomial series truncates") {
    // 1 - gamma delta with gamma = eta1, delta = eta2
    GrassmannNumber a = GrassmannNumber(s, 1.0) + GrassmannNumber::term(s, {1, 2}, -1.0);
    GrassmannNumber expect = GrassmannNumber(s, 1.0) + GrassmannNumber::term(s, {1, 2}, -0.5);
    CHECK(distance(sqrt_even(a), expect) < 1e-14);
  }
  SUBCASE("scalar") { CHECK(distance(sqrt_even(GrassmannNumber(s, 4.0)), GrassmannNumber(s, 2.0)) < 1e-15); }
  SUBCASE("square the result and compare") {
    GrassmannNumber a = GrassmannNumber(s, 1.0) + GrassmannNumber::term(s, {1, 2}, 1.0) +
                        GrassmannNumber::term(s, {3, 4}, 1.0);
    GrassmannNumber r = sqrt_even(a);
    CHECK(distance(r * r, a) < 1e-13);
    GrassmannNumber expect = GrassmannNumber(s, 1.0) + GrassmannNumber::term(s, {1, 2}, 0.5) +
                             GrassmannNumber::term(s, {3, 4}, 0.5) +
                             GrassmannNumber::term(s, {1, 2, 3, 4}, -0.25);
    CHECK(distance(r, expect) < 1e-13);
  }
  SUBCASE("random even elements round-trip") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 25; ++rep) {
      GrassmannNumber a = random_invertible_even(rng, s);
      GrassmannNumber r = sqrt_even(a);
      CHECK(distance(r * r, a) < 1e-12);
    }
  }
  SUBCASE("parity errors") {
    CHECK_THROWS_AS(sqrt_even(eta(s, 1)), std::invalid_argument);
    CHECK_THROWS_AS(sqrt_even(GrassmannNumber(s, 1.0) + eta(s, 1)), std::invalid_argument);
    CHECK_THROWS_AS(sqrt_even(GrassmannNumber::term(s, {1, 2}, 1.0)), std::domain_error);
  }
}

TEST_CASE("ring axioms on random elements") {
  std::mt19937_64 rng(17);
  const int s = 5;
  for (int rep = 0; rep < 40; ++rep) {
    GrassmannNumber a = random_grassmann(rng, s, Parity::Mixed);
    GrassmannNumber b = random_grassmann(rng, s, Parity::Mixed);
    GrassmannNumber c = random_grassmann(rng, s, Parity::Mixed);
    CHECK(distance((a * b) * c, a * (b * c)) < 1e-12);
    CHECK(distance(a * (b + c), a * b + a * c) < 1e-12);
  }
  // supercommutativity for homogeneous elements
  for (int rep = 0; rep < 40; ++rep) {
    GrassmannNumber ae = random_grassmann(rng, s, Parity::Even);
    GrassmannNumber be = random_grassmann(rng, s, Parity::Even);
    GrassmannNumber ao = random_grassmann(rng, s, Parity::Odd);
    GrassmannNumber bo = random_grassmann(rng, s, Parity::Odd);
    CHECK(distance(ae * be, be * ae) < 1e-12);
    CHECK(distance(ae * bo, bo * ae) < 1e-12);
    CHECK(distance(ao * bo, -(bo * ao)) < 1e-12);
  }
}

TEST_CASE("functoriality under generator inclusion") {
  std::mt19937_64 rng(19);
  const int small = 3, big = 6;
  for (int rep = 0; rep < 30; ++rep) {
    GrassmannNumber a = random_grassmann(rng, small, Parity::Mixed);
    GrassmannNumber b = random_grassmann(rng, small, Parity::Mixed);
    GrassmannNumber in_small = (a * b).extended(big);
    GrassmannNumber in_big = a.extended(big) * b.extended(big);
    CHECK(distance(in_small, in_big) < 1e-13);
  }
}

TEST_CASE("SDim arithmetic") {
  SDim a{4, 6}, b{1, 2};
  CHECK(a + b == SDim{5, 8});
  CHECK(a - b == SDim{3, 4});
  CHECK(2 * b == SDim{2, 4});
}
