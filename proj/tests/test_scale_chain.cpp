#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "thinset/error.hpp"
#include "thinset/scale_chain.hpp"

using namespace thinset;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::InternalInvariant;
}

// Points of 2^{-e_{i+1}} Z in [g - r_i, g + r_i] cut to [0,1].
long brute_count(const ScaleChain& c, std::size_t i, long g) {
  const long e1 = c.e_at(i).get_si(), e2 = c.e_at(i + 1).get_si(), rho = c.rho_at(i).get_si();
  const mpq_class center(g, mpz_class(1) << e1);
  const mpq_class r = oracle::pow2q(-rho);
  long n = 0;
  for (long k = 0; k <= (1l << e2); ++k) {
    const mpq_class x(k, mpz_class(1) << e2);
    if (abs(x - center) <= r) ++n;
  }
  return n;
}

}  // namespace

TEST_SUITE("scale_chain") {

TEST_CASE("build_custom_chain examples") {
  const ScaleChain c = build_custom_chain({3, 4, 5, 6}, {1, 2, 3, 4}, 5);
  CHECK(c.e == std::vector<mpz_class>{1, 3, 12, 60, 360});
  CHECK(c.rho == std::vector<mpz_class>{1, 6, 36, 240});
  CHECK(!c.has_radius(5));
  CHECK(code_of([&] { c.rho_at(5); }) == ErrorCode::LevelOutOfRange);
  CHECK(code_of([] { build_custom_chain({2, 3}, {mpq_class(1, 2), 1}, 2); }) == ErrorCode::NonIntegerRadiusExponent);
  CHECK(code_of([] { build_custom_chain({3, 3}, {1, 2}, 2); }) == ErrorCode::MonotonicityViolation);
  CHECK(code_of([] { build_custom_chain({3, 4}, {2, 2}, 2); }) == ErrorCode::MonotonicityViolation);
  CHECK(code_of([] { build_custom_chain({3}, {1}, 3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("desk chain") {
  const ScaleChain c = fixtures::desk_chain();
  CHECK(c.rho == std::vector<mpz_class>{1, 6, 36, 240, 1800});
  CHECK(c.radius(2) == SparseDyadic::pow2(6));
  CHECK(c.spacing(3) == SparseDyadic::pow2(12));
  CHECK(build_custom_chain(c.M, c.phi, c.depth) == c);
}

TEST_CASE("fractional phi with integer rho") {
  // e_2 = 4, phi_2 = 3/2 gives rho_2 = 6
  const ScaleChain c = build_custom_chain({4, 5}, {1, mpq_class(3, 2)}, 2);
  CHECK(c.rho == std::vector<mpz_class>{1, 6});
}

TEST_CASE("classify_regime examples") {
  CHECK(classify_regime(fixtures::desk_chain()).tag == RegimeTag::Branching);
  CHECK(classify_regime(fixtures::collapse_chain()).tag == RegimeTag::Collapse);
  const Regime r = classify_regime(build_custom_chain({3, 4, 5}, {2, 3, 4}, 3));
  CHECK(r.tag == RegimeTag::Indeterminate);
  CHECK(r.witness_level == std::optional<std::size_t>(1));
  const Regime mixed = classify_regime(build_custom_chain({3, 4, 7}, {1, 2, 8}, 3));
  CHECK(mixed.tag == RegimeTag::Indeterminate);
  CHECK(mixed.witness_level == std::optional<std::size_t>(3));
}

TEST_CASE("branching_count examples") {
  const ScaleChain c = fixtures::desk_chain();
  CHECK(branching_count(c, 1, 1).count == PowerSum::constant(9));
  const BranchingCount edge = branching_count(c, 1, 0);
  CHECK(edge.count == PowerSum::constant(5));
  CHECK(edge.clipped);
  CHECK(branching_lower_bound(c, 1) == PowerSum::constant(7));
  CHECK(code_of([&] { branching_count(c, 5, 0); }) == ErrorCode::LevelOutOfRange);
  CHECK(code_of([&] { branching_count(c, 1, 3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("branching_count agrees with lattice enumeration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ScaleChain c = fixtures::random_branching_chain(rng, 2, 3, 2);
    if (c.e_at(2) > 16) continue;
    const long q = 1l << c.e_at(1).get_si();
    for (long g = 0; g <= q; ++g) {
      const BranchingCount bc = branching_count(c, 1, g);
      REQUIRE(bc.count == PowerSum::constant(brute_count(c, 1, g)));
    }
  }
  const ScaleChain d = fixtures::desk_chain();
  for (long g = 0; g <= 8; ++g) CHECK(branching_count(d, 2, g).count == PowerSum::constant(brute_count(d, 2, g)));
}

TEST_CASE("interior counts dominate the lower bound on random branching chains") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const ScaleChain c = fixtures::random_branching_chain(rng, 4);
    for (std::size_t i = 1; i < c.depth; ++i) {
      const mpz_class half = mpz_class(1) << (c.e_at(i).get_ui() - 1);
      const BranchingCount bc = branching_count(c, i, half);
      if (bc.clipped) continue;
      const PowerSum formula = PowerSum::pow2(c.e_at(i + 1) - c.rho_at(i), 2) + PowerSum::constant(1);
      REQUIRE(bc.count == formula);
      REQUIRE(bc.count >= branching_lower_bound(c, i));
    }
  }
}

TEST_CASE("explicit chain pinned values") {
  ExplicitChainOptions natural;
  ExplicitChainOptions base2;
  base2.log = LogConvention::Base2;
  CHECK(build_explicit_chain(1, natural).M_at(1) == 17);
  CHECK(build_explicit_chain(1, base2).M_at(1) == 12);
  const ScaleChain n2 = build_explicit_chain(2, natural);
  CHECK(n2.M_at(2) == mpz_class("14579595342"));
  CHECK(build_explicit_chain(2, base2).M_at(2) == mpz_class("13981017"));
  // double cross-check well away from an integer boundary
  const double approx = 10.0 * (1.0 + std::ldexp(1.0, 34)) / (17.0 * std::log(2.0));
  CHECK(n2.M_at(2) == mpz_class(static_cast<long>(std::ceil(approx))) + 2);
  CHECK(n2.phi_at(2) == n2.M_at(2) - 2);
  CHECK(classify_regime(n2).tag == RegimeTag::Branching);
}

TEST_CASE("explicit chain depth 3 keeps symbolic top level") {
  const ScaleChain c = build_explicit_chain(3);
  CHECK(c.e_at(3) == 17 * mpz_class("14579595342"));
  CHECK(c.rho_at(2) == c.e_at(2) * (mpz_class("14579595342") - 2));
  CHECK(!c.has_radius(3));
  CHECK(classify_regime(c).tag == RegimeTag::Branching);
  CHECK(code_of([] { build_explicit_chain(4); }) == ErrorCode::DepthTooLarge);
}

TEST_CASE("square_product") {
  const PowerSum p = square_product({1, 17}, 2);
  CHECK(p == PowerSum::constant(5) * (PowerSum::pow2(34) + PowerSum::constant(1)));
}

}  // TEST_SUITE
