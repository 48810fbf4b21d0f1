#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "thinset/scale_chain.hpp"
#include "thinset/sparse_dyadic.hpp"

namespace thinset {

/// [center - 2^{-rho}, center + 2^{-rho}] cut to [0,1], center = k * 2^{-e_level}.
struct LatticeInterval {
  std::size_t level = 0;
  mpz_class center_numerator;
  mpz_class radius_exponent;

  friend bool operator==(const LatticeInterval&, const LatticeInterval&) = default;
};

struct Segment {
  SparseDyadic lo;
  SparseDyadic hi;
};

// ---- membership -----------------------------------------------------------

struct LevelCheck {
  std::size_t level = 0;
  SparseDyadic distance;
  mpz_class radius_exponent;
  bool pass = false;
};

struct MemberTrace {
  bool member = true;
  std::optional<std::size_t> first_failure;
  std::vector<LevelCheck> levels;
};

/// x in F_n = intersection of E_1..E_n. Every level is evaluated.
MemberTrace member_depth(const ScaleChain& chain, const SparseDyadic& x, std::size_t n);

// ---- rapid sequence ---------------------------------------------------------

struct RapidTerm {
  std::size_t index = 0;
  SparseDyadic value;  // 2^{-e_i}
  MemberTrace trace;   // over every level that has a radius
  /// a_i / a_{i-1} = 2^{-ratio_exponent}; set for i >= 2.
  std::optional<mpz_class> ratio_exponent;
  /// ratio_exponent == e_{i-1}(M_{i-1} - 1), checked via the stored values.
  bool ratio_matches = true;
};

RapidTerm rapid_sequence(const ScaleChain& chain, std::size_t i);

// ---- triple sums -----------------------------------------------------------

struct TripleSumFamily {
  std::vector<std::size_t> indices;
  std::vector<SparseDyadic> elements;
};

TripleSumFamily select_triple_indices(const ScaleChain& chain, std::size_t k_max);
TripleSumFamily family_from_indices(const ScaleChain& chain, const std::vector<std::size_t>& indices);

struct InvariantCheck {
  bool pass = true;
  std::string detail;
};

InvariantCheck check_family_invariants(const ScaleChain& chain, const TripleSumFamily& family);

struct SumCheck {
  std::vector<std::size_t> terms;  // 0-based positions into the family
  SparseDyadic sum;
  bool pass = false;
  std::optional<std::size_t> failing_level;
  bool out_of_unit_interval = false;
};

struct TripleSumReport {
  std::size_t K = 0;
  std::size_t depth = 0;
  bool invariant_pass = false;
  std::string invariant_detail;
  bool membership_pass = false;
  std::size_t failures = 0;
  std::vector<SumCheck> singletons;
  std::vector<SumCheck> triples;

  bool pass() const noexcept { return membership_pass; }
};

TripleSumReport verify_triple_sum(const ScaleChain& chain, const TripleSumFamily& family,
                                  std::size_t K, std::size_t depth);

// ---- binary tree -------------------------------------------------------------

struct TreeInterval {
  std::size_t level = 0;
  SparseDyadic left;  // J = [left, left + 2^{-radius_exponent}]
  mpz_class radius_exponent;
};

struct TreePath {
  std::size_t i0 = 0;
  std::string bits;
  std::vector<TreeInterval> intervals;
  SparseDyadic representative;
};

/// Both tree inequalities at level i: (r_i - r_{i+1}) q_{i+1} > 3 and 2 r_{i+1} < 1/q_{i+1}.
/// Returns an empty string when they hold, otherwise a description.
std::string tree_condition_failure(const ScaleChain& chain, std::size_t i);

TreePath binary_tree_point(const ScaleChain& chain, const std::string& bits,
                           std::optional<std::size_t> start_hint = std::nullopt);

// ---- windows -----------------------------------------------------------------

struct WindowCell {
  LatticeInterval interval;
  std::vector<Segment> pieces;  // F_n inside the cell, disjoint and sorted
};

struct WindowEnumeration {
  std::vector<std::vector<WindowCell>> levels;  // levels[j-1] holds level j

  std::vector<std::size_t> counts() const;
};

inline constexpr std::size_t kDefaultWindowCap = 100000;

WindowEnumeration enumerate_window_levels(const ScaleChain& chain, std::size_t n,
                                          const Segment& window, std::size_t cap = kDefaultWindowCap);

std::vector<LatticeInterval> enumerate_window(const ScaleChain& chain, std::size_t n,
                                              const Segment& window,
                                              std::size_t cap = kDefaultWindowCap);

// ---- localization --------------------------------------------------------------

struct LocalizationReport {
  std::size_t level = 0;
  mpz_class g_numerator;
  std::size_t depth = 0;
  bool pass = false;
  std::size_t cells = 0;
  SparseDyadic max_distance;
  mpz_class ratio_exponent;  // 8 q_i r_i = 2^{ratio_exponent}
};

LocalizationReport localization_check(const ScaleChain& chain, std::size_t i,
                                      const mpz_class& g_numerator, std::size_t n,
                                      std::size_t cap = kDefaultWindowCap);

/// 3 + e_i - rho_i for every level that has a radius.
std::vector<mpz_class> ratio_bound_exponents(const ScaleChain& chain);
bool strictly_decreasing(const std::vector<mpz_class>& values);

// ---- dichotomy -------------------------------------------------------------------

struct DichotomyReport {
  std::vector<std::size_t> counts;
  std::optional<std::size_t> threshold_level;  // first i with r_i < 1/q_{i+1}
  bool monotone = false;
  bool stabilized = false;
  bool single_descendant = false;
};

DichotomyReport dichotomy_probe(const ScaleChain& chain, std::size_t n, const Segment& window,
                                std::size_t cap = kDefaultWindowCap);

}  // namespace thinset
