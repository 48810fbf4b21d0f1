#include <doctest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "thinset/error.hpp"
#include "thinset/falconer_set.hpp"

using namespace thinset;
using T = SparseDyadic::Term;

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

SparseDyadic sd(std::vector<T> terms) { return SparseDyadic::from_terms(std::move(terms)); }

const Segment kUnit{SparseDyadic{}, SparseDyadic::integer(1)};

}  // namespace

TEST_SUITE("falconer_set") {

TEST_CASE("member_depth examples") {
  const ScaleChain c = fixtures::desk_chain();
  CHECK(member_depth(c, sd({{3, 1}, {12, 1}, {60, 1}}), 4).member);
  const MemberTrace t = member_depth(c, SparseDyadic::pow2(5), 2);
  CHECK(!t.member);
  CHECK(t.first_failure == std::optional<std::size_t>(2));
  CHECK(t.levels[1].distance == SparseDyadic::pow2(5));
  for (std::size_t n = 1; n <= 5; ++n) CHECK(member_depth(c, SparseDyadic{}, n).member);
  CHECK(code_of([&] { member_depth(c, SparseDyadic::integer(2), 1); }) == ErrorCode::OutOfUnitInterval);
}

TEST_CASE("member_depth matches the rational oracle") {
  const ScaleChain c = fixtures::desk_chain();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    SparseDyadic x = oracle::random_dyadic(rng, 40, 4, 3);
    if (sign(x) < 0) x = -x;
    while (compare(x, SparseDyadic::integer(1)) > 0) x = x.times_pow2(-1);
    const mpq_class q = oracle::value(x);
    bool expect = true;
    for (std::size_t j = 1; j <= 3; ++j) {
      expect = expect && oracle::lattice_distance(q, c.e_at(j).get_si()) <= oracle::pow2q(-c.rho_at(j).get_si());
    }
    REQUIRE(member_depth(c, x, 3).member == expect);
  }
}

TEST_CASE("rapid_sequence") {
  const ScaleChain c = fixtures::desk_chain();
  const RapidTerm t3 = rapid_sequence(c, 3);
  CHECK(t3.value == SparseDyadic::pow2(12));
  CHECK(t3.trace.member);
  CHECK(t3.trace.levels.size() == 5);
  const RapidTerm t2 = rapid_sequence(c, 2);
  CHECK(t2.value == SparseDyadic::pow2(3));
  CHECK(*t2.ratio_exponent == 2);
  CHECK(t2.ratio_matches);
  const RapidTerm t1 = rapid_sequence(c, 1);
  CHECK(t1.value == SparseDyadic::pow2(1));
  CHECK(t1.trace.member);
  CHECK(!t1.ratio_exponent);
  for (std::size_t i = 2; i <= 5; ++i) {
    const RapidTerm t = rapid_sequence(c, i);
    CHECK(*t.ratio_exponent == c.e_at(i - 1) * (c.M_at(i - 1) - 1));
    CHECK(t.ratio_matches);
  }
  CHECK(code_of([] { rapid_sequence(fixtures::collapse_chain(), 2); }) == ErrorCode::RegimeViolation);
}

TEST_CASE("select_triple_indices") {
  const ScaleChain c = fixtures::desk_chain();
  const TripleSumFamily f = select_triple_indices(c, 3);
  CHECK(f.indices == std::vector<std::size_t>{2, 3, 4});
  CHECK(f.elements == std::vector<SparseDyadic>{SparseDyadic::pow2(3), SparseDyadic::pow2(12), SparseDyadic::pow2(60)});
  const TripleSumFamily f4 = select_triple_indices(c, 4);
  CHECK(f4.indices.back() == 5);
  CHECK(f4.elements.back() == SparseDyadic::pow2(360));
  CHECK(check_family_invariants(c, f4).pass);
  CHECK(code_of([&] { select_triple_indices(c, 5); }) == ErrorCode::ChainTooShallow);
  CHECK(code_of([] { select_triple_indices(fixtures::collapse_chain(), 2); }) == ErrorCode::RegimeViolation);
  // explicit chain of depth 2: N_1 = 2 is admissible, a second index is not
  const ScaleChain x = build_explicit_chain(2);
  CHECK(select_triple_indices(x, 1).indices == std::vector<std::size_t>{2});
  CHECK(code_of([&] { select_triple_indices(x, 2); }) == ErrorCode::ChainTooShallow);
}

TEST_CASE("verify_triple_sum") {
  const ScaleChain c = fixtures::desk_chain();
  const TripleSumFamily f = select_triple_indices(c, 3);
  const TripleSumReport r = verify_triple_sum(c, f, 3, 4);
  CHECK(r.triples.size() == 27);
  CHECK(r.singletons.size() == 3);
  CHECK(r.failures == 0);
  CHECK(r.pass());
  CHECK(r.invariant_pass);

  const TripleSumFamily bad = family_from_indices(c, {1, 2, 3});
  const TripleSumReport rb = verify_triple_sum(c, bad, 3, 4);
  CHECK(!rb.pass());
  CHECK(!rb.invariant_pass);
  CHECK(rb.triples[0].out_of_unit_interval);  // 3 a_1 = 3/2

  const TripleSumReport r1 = verify_triple_sum(c, f, 1, 5);
  CHECK(r1.triples.size() == 1);
  CHECK(r1.pass());
}

TEST_CASE("triple sums hold on random branching chains") {
  std::mt19937_64 rng(5);
  int verified = 0;
  for (int trial = 0; trial < 20 && verified < 5; ++trial) {
    const ScaleChain c = fixtures::random_branching_chain(rng, 5);
    TripleSumFamily f;
    try {
      f = select_triple_indices(c, 3);
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::ChainTooShallow);
      continue;
    }
    REQUIRE(check_family_invariants(c, f).pass);
    for (std::size_t d = 1; d <= c.rho.size(); ++d) REQUIRE(verify_triple_sum(c, f, 3, d).pass());
    ++verified;
  }
  CHECK(verified >= 3);
}

TEST_CASE("binary_tree_point example") {
  const ScaleChain c = fixtures::desk_chain();
  CHECK(tree_condition_failure(c, 1).empty());
  const TreePath p = binary_tree_point(c, "10");
  CHECK(p.i0 == 1);
  REQUIRE(p.intervals.size() == 3);
  CHECK(p.intervals[0].left.is_zero());
  CHECK(p.intervals[0].radius_exponent == 1);
  CHECK(p.intervals[1].left == SparseDyadic::pow2(3));
  CHECK(p.intervals[2].left == SparseDyadic::pow2(3));
  CHECK(p.representative == SparseDyadic::pow2(3));
  const TreePath empty = binary_tree_point(c, "");
  CHECK(empty.intervals.size() == 1);
  CHECK(code_of([&] { binary_tree_point(c, "102"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { binary_tree_point(c, "10101"); }) == ErrorCode::LevelOutOfRange);
  CHECK(code_of([] { binary_tree_point(fixtures::collapse_chain(), "1"); }) == ErrorCode::ConditionFailure);
}

TEST_CASE("tree soundness for all words up to length 4") {
  const ScaleChain c = fixtures::desk_chain();
  for (std::size_t L = 1; L <= 4; ++L) {
    std::set<mpq_class> reps;
    for (unsigned w = 0; w < (1u << L); ++w) {
      std::string bits;
      for (std::size_t b = L; b-- > 0;) bits += ((w >> b) & 1) ? '1' : '0';
      const TreePath p = binary_tree_point(c, bits);
      for (std::size_t k = 1; k < p.intervals.size(); ++k) {
        const auto& parent = p.intervals[k - 1];
        const auto& child = p.intervals[k];
        const mpq_class plo = oracle::value(parent.left), clo = oracle::value(child.left);
        REQUIRE(plo <= clo);
        REQUIRE(clo + oracle::pow2q(-child.radius_exponent.get_si()) <=
                plo + oracle::pow2q(-parent.radius_exponent.get_si()));
      }
      REQUIRE(member_depth(c, p.representative, p.i0 + L).member);
      reps.insert(oracle::value(p.representative));
    }
    CHECK(reps.size() == (1u << L));
  }
}

TEST_CASE("enumerate_window counts") {
  const ScaleChain c = fixtures::desk_chain();
  const WindowEnumeration w = enumerate_window_levels(c, 3, kUnit);
  CHECK(w.counts() == std::vector<std::size_t>{3, 9, 1033});
  CHECK(enumerate_window(c, 2, kUnit).size() == 9);
  for (std::size_t j = 1; j <= 3; ++j) CHECK(w.counts()[j - 1] == oracle::window_cells(c, j, 0, 1));

  const Segment near0{SparseDyadic{}, SparseDyadic::pow2(6)};
  const auto cells = enumerate_window(c, 3, near0);
  CHECK(cells.size() == 65);
  CHECK(PowerSum::constant(cells.size()) == branching_count(c, 2, 0).count);
  CHECK(code_of([&] { enumerate_window(c, 2, kUnit, 1); }) == ErrorCode::CapExceeded);
}

TEST_CASE("window membership coherence") {
  const ScaleChain c = fixtures::desk_chain();
  std::set<mpz_class> listed;
  for (const auto& iv : enumerate_window(c, 3, kUnit)) {
    listed.insert(iv.center_numerator);
    REQUIRE(member_depth(c, SparseDyadic::term(12, iv.center_numerator), 3).member);
  }
  std::size_t members = 0;
  for (long k = 0; k <= 4096; ++k) members += member_depth(c, SparseDyadic::term(12, k), 3).member ? 1 : 0;
  CHECK(members == listed.size());
  CHECK(oracle::surviving_points(c, 3, 3).size() == listed.size());
}

TEST_CASE("window counts match the oracle on random small chains and windows") {
  std::mt19937_64 rng(9);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    // any regime, e_3 <= 12 so the oracle can sweep the lattice
    const long m1 = std::uniform_int_distribution<long>(2, 3)(rng);
    const long m2 = std::uniform_int_distribution<long>(m1 + 1, 12 / m1)(rng);
    const long p1 = std::uniform_int_distribution<long>(1, 4)(rng);
    const long p2 = std::uniform_int_distribution<long>(p1 + 1, 6)(rng);
    const long p3 = std::uniform_int_distribution<long>(p2 + 1, 8)(rng);
    const ScaleChain c = build_custom_chain({m1, m2, m2 + 1}, {p1, p2, p3}, 3);
    const long a = std::uniform_int_distribution<long>(0, 63)(rng);
    const long b = std::uniform_int_distribution<long>(a + 1, 64)(rng);
    const Segment w{SparseDyadic::term(6, a), SparseDyadic::term(6, b)};
    const auto counts = enumerate_window_levels(c, 3, w).counts();
    for (std::size_t j = 1; j <= 3; ++j) {
      REQUIRE(counts[j - 1] == oracle::window_cells(c, j, mpq_class(a, 64), mpq_class(b, 64)));
    }
    ++checked;
  }
  CHECK(checked == 40);
}

TEST_CASE("localization") {
  const ScaleChain c = fixtures::desk_chain();
  const LocalizationReport r = localization_check(c, 2, 1, 3);
  CHECK(r.pass);
  CHECK(r.cells > 0);
  CHECK(compare(r.max_distance, c.radius(2)) <= 0);
  CHECK(r.ratio_exponent == 3 + 3 - 6);
  for (std::size_t i = 2; i <= 5; ++i) {
    for (mpz_class g : {mpz_class(0), mpz_class(1), mpz_class(mpz_class(1) << (c.e_at(i).get_ui() - 1))}) {
      CHECK(localization_check(c, i, g, i).pass);
    }
  }
  CHECK(code_of([&] { localization_check(c, 1, 0, 2); }) == ErrorCode::PreconditionFailure);
  const auto ex = ratio_bound_exponents(c);
  CHECK(ex == std::vector<mpz_class>{3, 0, -21, -177, -1437});
  CHECK(strictly_decreasing(ex));
  CHECK(!strictly_decreasing({1, 1}));
}

TEST_CASE("dichotomy probe") {
  const ScaleChain c = fixtures::collapse_chain();
  const DichotomyReport r = dichotomy_probe(c, 3, kUnit);
  CHECK(r.counts == std::vector<std::size_t>{3, 3, 3});
  CHECK(r.threshold_level == std::optional<std::size_t>(1));
  CHECK(r.monotone);
  CHECK(r.stabilized);
  CHECK(r.single_descendant);
  for (std::size_t j = 1; j <= 3; ++j) CHECK(r.counts[j - 1] == oracle::window_cells(c, j, 0, 1));
  CHECK(code_of([] { dichotomy_probe(fixtures::desk_chain(), 3, kUnit); }) == ErrorCode::RegimeViolation);
}

TEST_CASE("collapse: each level-i interval holds one point of the next lattice") {
  const ScaleChain c = fixtures::collapse_chain();
  for (std::size_t i = 1; i < c.depth; ++i) {
    const long q = 1l << c.e_at(i).get_si();
    for (long g = 0; g <= q; g += std::max(1l, q / 16)) CHECK(branching_count(c, i, g).count == PowerSum::constant(1));
  }
}

}  // TEST_SUITE
