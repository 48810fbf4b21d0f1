#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thinset/bracket.hpp"
#include "thinset/error.hpp"

namespace thinset {

/// L(x_1..x_m) = q_1 x_1 + ... + q_m x_m with nonzero rational q_i.
struct RationalForm {
  std::vector<mpq_class> coefficients;

  std::size_t arity() const noexcept { return coefficients.size(); }
  mpz_class height() const;

  friend bool operator==(const RationalForm&, const RationalForm&) = default;
};

std::string to_string(const RationalForm& form);

/// Nonzero rationals of height <= H ordered by (height, denominator,
/// |numerator|, + before -).
std::vector<mpq_class> coefficient_universe(unsigned long H);

/// Forms ordered by (height, arity, lexicographic coefficient order). With
/// count unset every form within the bounds is returned.
std::vector<RationalForm> enumerate_forms(unsigned long H, std::size_t m_max,
                                          std::optional<std::size_t> count = std::nullopt);

struct TreeNode {
  std::string word;
  mpq_class center;
  mpq_class radius;  // I_u = [center - radius, center + radius]
  unsigned long prime = 0;

  mpq_class lo() const { return center - radius; }
  mpq_class hi() const { return center + radius; }
};

struct CantorTree {
  std::size_t n_max = 0;
  std::vector<mpq_class> rho;                // rho_1..rho_{n_max}
  std::vector<mpq_class> epsilon;            // epsilon_1..epsilon_{n_max}
  std::vector<unsigned long> epsilon_shift;  // epsilon_n = 2^{-shift}
  std::vector<std::vector<TreeNode>> levels; // levels[0] holds the root
  std::size_t retries = 0;
  std::size_t tuples_checked = 0;
};

inline constexpr std::size_t kMaxTreeDepth = 4;
inline constexpr std::size_t kMaxTreeArity = 3;

CantorTree build_independent_tree(std::size_t n_max, const std::vector<mpq_class>& rho,
                                  const std::vector<RationalForm>& forms);

struct TreeCheck {
  bool pass = true;
  std::size_t tuples_checked = 0;
  std::string failure;
};

/// Re-verifies nesting, sibling disjointness, diameters and form
/// nonvanishing over every distinct-word tuple at every level.
TreeCheck verify_tree(const CantorTree& tree, const std::vector<RationalForm>& forms);

/// One point per leaf (the centers of the deepest level).
std::vector<mpq_class> leaf_samples(const CantorTree& tree);

struct QuadrupleResult {
  std::optional<std::array<std::size_t, 4>> indices;  // into the input, a < b < c < d by value
  std::size_t pairs_checked = 0;
};

namespace detail {

template <class T, class Less>
std::vector<std::size_t> sorted_order(const std::vector<T>& pts, Less less) {
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return less(pts[a], pts[b]); });
  return order;
}

}  // namespace detail

/// Finds a + d = b + c with a < b < c < d among distinct points, the
/// lexicographically first (by sorted position) when several exist.
template <class T, class Less>
QuadrupleResult quadruple_scan(const std::vector<T>& pts, Less less) {
  const std::vector<std::size_t> order = detail::sorted_order(pts, less);
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (!less(pts[order[i - 1]], pts[order[i]])) fail(ErrorCode::DuplicateInput, "points must be distinct");
  }
  auto sum_less = [&](const T& a, const T& b) { return less(a, b); };
  std::map<T, std::vector<std::pair<std::size_t, std::size_t>>, decltype(sum_less)> groups(sum_less);
  QuadrupleResult out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      groups[pts[order[i]] + pts[order[j]]].push_back({i, j});
      ++out.pairs_checked;
    }
  }
  std::optional<std::array<std::size_t, 4>> best;
  for (const auto& [sum, pairs] : groups) {
    if (pairs.size() < 2) continue;
    // pairs are sorted by first position; the first is the outer pair
    const std::array<std::size_t, 4> cand{pairs[0].first, pairs[1].first, pairs[1].second, pairs[0].second};
    if (!best || cand < *best) best = cand;
  }
  if (best) {
    out.indices = std::array<std::size_t, 4>{order[(*best)[0]], order[(*best)[1]], order[(*best)[2]],
                                             order[(*best)[3]]};
  }
  return out;
}

struct Relation {
  std::vector<std::size_t> indices;
  std::vector<mpq_class> coefficients;
};

struct RelationResult {
  std::optional<Relation> relation;
  std::size_t tuples_checked = 0;
};

/// First relation sum q_i y_i = 0 over distinct points with nonzero q_i of
/// height <= H and at most m_max terms.
RelationResult relation_scan(const std::vector<mpq_class>& points, unsigned long H, std::size_t m_max);

struct TreeGaugeRow {
  std::size_t n = 0;
  mpz_class d;  // 2^{-d} >= rho_n
  std::vector<Bracket> costs;
};

/// 2^n h_s(2^{-d_n}) with d_n = floor(log2(1/rho_n)), an upper bound for the
/// level-n cover cost.
std::vector<TreeGaugeRow> tree_gauge_costs(const CantorTree& tree, const std::vector<mpq_class>& s_grid,
                                           mpfr_prec_t precision = kDefaultPrecisionBits);

}  // namespace thinset
