#include <doctest.h>

#include <cmath>
#include <set>

#include "oracle.hpp"
#include "thinset/digit_cantor.hpp"
#include "thinset/error.hpp"

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

DigitSpec pow2_spec(std::size_t N) { return make_digit_spec(schedule_pow2(N), parse_growth("g(n+1)>=2*g(n)"), N); }
DigitSpec square_spec(std::size_t N) {
  return make_digit_spec(schedule_pow2_square(N), parse_growth("g(n+1)>=2*g(n)"), N);
}

}  // namespace

TEST_SUITE("digit_cantor") {

TEST_CASE("growth parsing") {
  const GrowthProperty a = parse_growth("g(n+1)>=g(n)+1");
  CHECK(a.kind == GrowthKind::Additive);
  CHECK(a.k == 1);
  const GrowthProperty m = parse_growth(" g(n+1) >= 3 * g(n) ");
  CHECK(m.kind == GrowthKind::Multiplicative);
  CHECK(m.k == 3);
  CHECK(to_string(m) == "g(n+1)>=3*g(n)");
  CHECK(parse_growth("").kind == GrowthKind::None);
  CHECK(code_of([] { parse_growth("g grows"); }) == ErrorCode::ConfigError);
}

TEST_CASE("digit spec validation") {
  CHECK(code_of([] { make_digit_spec({1, 1, 2}, {}, 3); }) == ErrorCode::MonotonicityViolation);
  CHECK(code_of([] { make_digit_spec({1, 2}, {}, 3); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { make_digit_spec({1, 2, 3}, {}, 2); }) == ErrorCode::InvalidArgument);  // class 3 empty
  const DigitSpec s = pow2_spec(6);
  CHECK(s.classes[0] == std::vector<std::size_t>{1, 4});
  CHECK(s.classes[2] == std::vector<std::size_t>{3, 6});
  CHECK(s.a(3) == SparseDyadic::pow2(8));
}

TEST_CASE("separation_check") {
  CHECK(separation_check(pow2_spec(6), 4).pass);
  const DigitSpec lin = make_digit_spec(schedule_linear(3), parse_growth("g(n+1)>=g(n)+1"), 3);
  const SeparationReport r = separation_check(lin, 3);
  CHECK(!r.pass);
  CHECK(!r.rows[0].pass);  // 1/2 = 1/4 + 1/8 + 1/8
  CHECK(separation_check(square_spec(5), 3).pass);
  CHECK(separation_check(square_spec(5), 5).pass);
  // "+1" can never certify the last tabulated index, "+2" can
  const DigitSpec plus2 = make_digit_spec(schedule_pow2(5), parse_growth("g(n+1)>=g(n)+2"), 5);
  CHECK(separation_check(plus2, 5).pass);
  const DigitSpec plus1 = make_digit_spec(schedule_pow2(5), parse_growth("g(n+1)>=g(n)+1"), 5);
  CHECK(!separation_check(plus1, 5).pass);
  CHECK(separation_check(plus1, 4).pass);
  CHECK(code_of([] { separation_check(make_digit_spec(schedule_pow2(3), {}, 3), 2); }) ==
        ErrorCode::GrowthPropertyMissing);
}

TEST_CASE("tau_bound") {
  const DigitSpec s = pow2_spec(6);
  const TauBound b = tau_bound(s, 2);
  CHECK(b.lower_exponent == 8);
  CHECK(b.upper_exponent == 7);
  for (std::size_t n = 1; n < 6; ++n) {
    const TauBound t = tau_bound(s, n);
    CHECK(compare(t.truncated_tail, SparseDyadic::pow2(t.lower_exponent)) >= 0);
    CHECK(compare(t.truncated_tail, SparseDyadic::pow2(t.upper_exponent)) < 0);
  }
  CHECK(code_of([&] { tau_bound(s, 6); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("member_K") {
  const DigitSpec s = pow2_spec(6);
  const Membership m = member_K(s, SparseDyadic::pow2(4) + SparseDyadic::pow2(16));
  CHECK(m.member);
  CHECK(m.digits == std::vector<std::size_t>{2, 4});
  CHECK(!member_K(s, SparseDyadic::term(4, 2)).member);
  const Membership z = member_K(s, SparseDyadic{});
  CHECK(z.member);
  CHECK(z.digits.empty());
  CHECK(code_of([&] { member_K(s, SparseDyadic::pow2(65)); }) == ErrorCode::UniverseExceeded);
}

TEST_CASE("coding map is injective on truncations") {
  for (const DigitSpec& s : {pow2_spec(12), square_spec(12)}) {
    for (unsigned mask = 0; mask < (1u << 12); ++mask) {
      SparseDyadic x;
      std::vector<std::size_t> expect;
      for (std::size_t n = 1; n <= 12; ++n) {
        if (mask & (1u << (n - 1))) {
          x = x + s.a(n);
          expect.push_back(n);
        }
      }
      const Membership m = member_K(s, x);
      REQUIRE(m.member);
      REQUIRE(m.digits == expect);
    }
  }
}

TEST_CASE("member_K agrees with rational brute force") {
  // every x = k / 2^{16} in [0, 1] against the 2^4 digit sums of g(n) = 2^n
  const DigitSpec s = pow2_spec(4);
  std::set<mpq_class> sums;
  for (unsigned mask = 0; mask < 16; ++mask) {
    mpq_class v = 0;
    for (long n = 1; n <= 4; ++n)
      if (mask & (1u << (n - 1))) v += oracle::pow2q(-(1l << n));
    sums.insert(v);
  }
  for (long k = 0; k <= (1l << 16); k += 1) {
    const mpq_class q(k, 1l << 16);
    REQUIRE(member_K(s, SparseDyadic::term(16, k)).member == (sums.count(q) == 1));
  }
}

TEST_CASE("subset_sums") {
  const DigitSpec s = pow2_spec(6);
  const auto sums = subset_sums(s, 1, 4);
  CHECK(sums == std::vector<SparseDyadic>{SparseDyadic{}, SparseDyadic::pow2(2), SparseDyadic::pow2(16),
                                          SparseDyadic::pow2(2) + SparseDyadic::pow2(16)});
  CHECK(subset_sums(s, 2, 1) == std::vector<SparseDyadic>{SparseDyadic{}});
  CHECK(subset_sums(s, 1, 4, 2).size() == 2);
}

TEST_CASE("verify_triple_sumset") {
  const TripleSumsetReport r = verify_triple_sumset(pow2_spec(6), 6);
  CHECK(r.total == 64);
  CHECK(r.pass());
  const TripleSumsetReport small = verify_triple_sumset(pow2_spec(6), 3);
  CHECK(small.total == 8);
  CHECK(small.pass());
  std::array<std::vector<std::size_t>, 3> bad{std::vector<std::size_t>{1, 4}, {2, 4, 5}, {3, 6}};
  const DigitSpec overlap = make_digit_spec(schedule_pow2(6), parse_growth("g(n+1)>=2*g(n)"), 6, bad);
  CHECK(code_of([&] { verify_triple_sumset(overlap, 6); }) == ErrorCode::PartitionOverlap);
  // a custom genuine partition
  std::array<std::vector<std::size_t>, 3> custom{std::vector<std::size_t>{1, 2}, {3}, {4, 5, 6}};
  const DigitSpec c = make_digit_spec(schedule_pow2(6), parse_growth("g(n+1)>=2*g(n)"), 6, custom);
  CHECK(verify_triple_sumset(c, 6).pass());
  // finite binary digits still read off uniquely; only the infinite tail breaks g(n) = n
  const DigitSpec lin = make_digit_spec(schedule_linear(6), parse_growth("g(n+1)>=g(n)+1"), 6);
  CHECK(verify_triple_sumset(lin, 6).pass());
}

TEST_CASE("dimension_zero_diagnostic") {
  const DiagnosticTable t = dimension_zero_diagnostic(square_spec(5), {1}, {1, 2, 3, 4});
  CHECK(t.decreasing == std::vector<bool>{true});
  const DiagnosticTable p = dimension_zero_diagnostic(pow2_spec(7), {3, 50}, {1, 2, 3, 4, 5, 6});
  CHECK(p.decreasing == std::vector<bool>{true, true});
  for (const auto& row : p.rows) {
    CHECK(certainly_less(row.cells[1].value, row.cells[0].value));
    const double n = static_cast<double>(row.n);
    const double lo = std::pow(2.0, n) * std::pow(std::pow(2.0, n + 1) * std::log(2.0), -3.0);
    const double hi = std::pow(2.0, n) * std::pow((std::pow(2.0, n + 1) - 1) * std::log(2.0), -3.0);
    CHECK(mpfr_get_d(row.cells[0].value.lo.get(), MPFR_RNDN) == doctest::Approx(lo).epsilon(1e-9));
    CHECK(mpfr_get_d(row.cells[0].value.hi.get(), MPFR_RNDN) == doctest::Approx(hi).epsilon(1e-9));
  }
}

}  // TEST_SUITE
