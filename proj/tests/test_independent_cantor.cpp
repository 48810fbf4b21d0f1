#include <doctest.h>

#include <random>
#include <set>

#include "oracle.hpp"
#include "thinset/error.hpp"
#include "thinset/independent_cantor.hpp"

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

const auto kLess = std::less<mpq_class>();

// First (by sorted position) 4-subset a < b < c < d with a + d = b + c.
std::optional<std::array<std::size_t, 4>> brute_quadruple(const std::vector<mpq_class>& pts) {
  std::vector<std::size_t> ord(pts.size());
  for (std::size_t i = 0; i < ord.size(); ++i) ord[i] = i;
  std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
  const std::size_t n = pts.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d)
          if (pts[ord[a]] + pts[ord[d]] == pts[ord[b]] + pts[ord[c]]) return std::array{ord[a], ord[b], ord[c], ord[d]};
  return std::nullopt;
}

std::vector<mpq_class> tree_rho(std::size_t n) {
  std::vector<mpq_class> out;
  mpq_class r = 1;
  for (std::size_t k = 0; k < n; ++k) out.push_back(r /= 100);
  return out;
}

}  // namespace

TEST_SUITE("independent_cantor") {

TEST_CASE("enumerate_forms ordering") {
  const auto two = enumerate_forms(1, 1, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].coefficients == std::vector<mpq_class>{1});
  CHECK(two[1].coefficients == std::vector<mpq_class>{-1});
  const auto h1 = enumerate_forms(1, 2);
  CHECK(h1.size() == 6);
  auto has = [&](const std::vector<RationalForm>& fs, std::vector<mpq_class> c) {
    return std::any_of(fs.begin(), fs.end(), [&](const RationalForm& f) { return f.coefficients == c; });
  };
  CHECK(has(h1, {1, -1}));
  CHECK(has(h1, {1, 1}));
  const auto h3 = enumerate_forms(3, 1);
  std::size_t first_h3 = h3.size(), last_h2 = 0;
  for (std::size_t i = 0; i < h3.size(); ++i) {
    if (h3[i].height() == 3) first_h3 = std::min(first_h3, i);
    if (h3[i].height() == 2) last_h2 = i;
  }
  CHECK(last_h2 < first_h3);
  CHECK(has(h3, {mpq_class(1, 2)}));
  CHECK(has(h3, {2}));
  CHECK(code_of([] { enumerate_forms(1, 1, 3); }) == ErrorCode::ExhaustedUniverse);
  CHECK(coefficient_universe(1) == std::vector<mpq_class>{1, -1});
  CHECK(coefficient_universe(2).size() == 6);
  CHECK(enumerate_forms(2, 3) == enumerate_forms(2, 3));
}

TEST_CASE("tree at depth 1") {
  const auto forms = enumerate_forms(1, 2);
  const CantorTree t = build_independent_tree(1, {mpq_class(1, 100)}, forms);
  REQUIRE(t.levels.size() == 2);
  REQUIRE(t.levels[1].size() == 2);
  const TreeNode& a = t.levels[1][0];
  const TreeNode& b = t.levels[1][1];
  CHECK(a.lo() > 1);
  CHECK(b.hi() < 2);
  CHECK(a.hi() < b.lo());
  CHECK(a.center.get_den() != b.center.get_den());
  CHECK(a.center + b.center != 0);
  CHECK(a.center - b.center != 0);
  CHECK(2 * a.radius <= mpq_class(1, 100));
  CHECK(verify_tree(t, forms).pass);
}

TEST_CASE("tree at depth 2 with forms through H=2, m=3") {
  const auto forms = enumerate_forms(2, 3);
  const CantorTree t = build_independent_tree(2, tree_rho(2), forms);
  CHECK(t.levels[2].size() == 4);
  const TreeCheck c = verify_tree(t, forms);
  CHECK(c.pass);
  CHECK(c.tuples_checked > 0);
  // epsilon is the largest admissible dyadic: doubling it breaks a condition
  for (std::size_t n = 0; n < t.epsilon.size(); ++n) {
    CHECK(t.epsilon[n] == oracle::pow2q(-static_cast<long>(t.epsilon_shift[n])));
    CantorTree wide = t;
    for (auto& v : wide.levels[n + 1]) v.radius *= 2;
    // a level's own forms are re-checked, so widening must be caught somewhere
    const bool over_rho = 2 * wide.levels[n + 1][0].radius > t.rho[n];
    CHECK((over_rho || !verify_tree(wide, forms).pass));
  }
  const auto samples = leaf_samples(t);
  CHECK(samples.size() == 4);
  CHECK(!quadruple_scan(samples, kLess).indices);
  CHECK(!relation_scan(samples, 2, 3).relation);
  // determinism
  const CantorTree again = build_independent_tree(2, tree_rho(2), forms);
  for (std::size_t n = 0; n < t.levels.size(); ++n)
    for (std::size_t i = 0; i < t.levels[n].size(); ++i) CHECK(again.levels[n][i].center == t.levels[n][i].center);
}

TEST_CASE("tree preconditions") {
  const auto forms = enumerate_forms(1, 2);
  CHECK(code_of([&] { build_independent_tree(2, {mpq_class(1, 100), mpq_class(1, 1000)}, forms); }) ==
        ErrorCode::PreconditionFailure);
  CHECK(code_of([&] { build_independent_tree(5, tree_rho(5), forms); }) == ErrorCode::PreconditionFailure);
  CHECK(code_of([&] { build_independent_tree(1, tree_rho(1), {RationalForm{{1, 1, 1, 1}}}); }) ==
        ErrorCode::PreconditionFailure);
}

TEST_CASE("verify_tree catches a planted relation") {
  const auto forms = enumerate_forms(1, 2);
  CantorTree t = build_independent_tree(1, tree_rho(1), forms);
  // identical centers make x_1 - x_2 vanish
  t.levels[1][1].center = t.levels[1][0].center;
  CHECK(!verify_tree(t, forms).pass);
}

TEST_CASE("quadruple_scan examples") {
  const auto r = quadruple_scan(std::vector<mpq_class>{0, 1, 2, 3}, kLess);
  REQUIRE(r.indices);
  CHECK(*r.indices == std::array<std::size_t, 4>{0, 1, 2, 3});
  CHECK(!quadruple_scan(std::vector<mpq_class>{1, 2, 4, 8}, kLess).indices);
  const mpq_class a1(1, 4), a2(1, 16);
  const std::vector<mpq_class> pts{a1, a2, a1 + a2, 0};
  const auto s = quadruple_scan(pts, kLess);
  REQUIRE(s.indices);
  CHECK(*s.indices == std::array<std::size_t, 4>{3, 1, 0, 2});  // 0 < a2 < a1 < a1 + a2
  CHECK(code_of([] { quadruple_scan(std::vector<mpq_class>{1, 2, 1}, kLess); }) == ErrorCode::DuplicateInput);
}

TEST_CASE("quadruple_scan works on SparseDyadic points") {
  const std::vector<SparseDyadic> pts{SparseDyadic{}, SparseDyadic::pow2(2), SparseDyadic::pow2(4),
                                      SparseDyadic::pow2(2) + SparseDyadic::pow2(4)};
  const auto r = quadruple_scan(pts, [](const SparseDyadic& a, const SparseDyadic& b) { return compare(a, b) < 0; });
  REQUIRE(r.indices);
  CHECK(*r.indices == std::array<std::size_t, 4>{0, 2, 1, 3});
}

TEST_CASE("quadruple_scan agrees with the 4-subset brute force") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    std::set<mpq_class> s;
    const int n = std::uniform_int_distribution<int>(0, 12)(rng);
    const long range = std::uniform_int_distribution<long>(10, 200)(rng);
    while (static_cast<int>(s.size()) < n) s.insert(mpq_class(std::uniform_int_distribution<long>(0, range)(rng), 4));
    std::vector<mpq_class> pts(s.begin(), s.end());
    std::shuffle(pts.begin(), pts.end(), rng);
    const auto got = quadruple_scan(pts, kLess);
    REQUIRE(got.indices == brute_quadruple(pts));
    REQUIRE(got.pairs_checked == pts.size() * (pts.size() - (pts.empty() ? 0 : 1)) / 2);
  }
}

TEST_CASE("relation_scan examples") {
  const auto r = relation_scan({mpq_class(1, 3), mpq_class(2, 3)}, 2, 2);
  REQUIRE(r.relation);
  const Relation& rel = *r.relation;
  REQUIRE(rel.coefficients.size() == 2);
  // any rescaling of 2 x - y; the scan reports the first in its order
  CHECK(rel.coefficients[0] == -2 * rel.coefficients[1]);
  const auto t = relation_scan({mpq_class(1, 2), mpq_class(1, 3), mpq_class(5, 6)}, 1, 3);
  REQUIRE(t.relation);
  mpq_class sum = 0;
  const std::vector<mpq_class> pts{mpq_class(1, 2), mpq_class(1, 3), mpq_class(5, 6)};
  for (std::size_t i = 0; i < t.relation->indices.size(); ++i) sum += t.relation->coefficients[i] * pts[t.relation->indices[i]];
  CHECK(sum == 0);
  CHECK(t.relation->indices.size() == 3);
  CHECK(!relation_scan({1, mpq_class(1, 7)}, 4, 2).relation);  // would need a ratio of height 7
  CHECK(relation_scan({1, mpq_class(1, 4)}, 4, 2).relation);
  CHECK(code_of([] { relation_scan(std::vector<mpq_class>(9, 1), 1, 1); }) == ErrorCode::SearchSpaceTooLarge);
  CHECK(code_of([] { relation_scan({1, 2}, 5, 1); }) == ErrorCode::SearchSpaceTooLarge);
  CHECK(code_of([] { relation_scan({1, 1}, 1, 1); }) == ErrorCode::DuplicateInput);
}

TEST_CASE("tree gauge costs") {
  const auto forms = enumerate_forms(1, 2);
  const CantorTree t = build_independent_tree(2, tree_rho(2), forms);
  const auto rows = tree_gauge_costs(t, {1});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].d == 6);   // 2^{-6} >= 1/100
  CHECK(rows[1].d == 13);  // 2^{-13} >= 1/10000
  CHECK(certainly_less(rows[1].costs[0], rows[0].costs[0]));  // 4/(13 ln2) < 2/(6 ln2)
}

}  // TEST_SUITE
