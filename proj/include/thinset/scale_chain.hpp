#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <vector>

#include "thinset/bracket.hpp"
#include "thinset/power_sum.hpp"
#include "thinset/sparse_dyadic.hpp"

namespace thinset {

enum class LogConvention { Natural, Base2 };

/// Tower q_i = 2^{e_i}, q_{i+1} = q_i^{M_i}, radii r_i = 2^{-rho_i} with
/// rho_i = e_i * phi_i. Levels are 1-based in every accessor.
///
/// e is stored for all `depth` levels. M and phi (and so rho) need only cover
/// levels 1..depth-1; the top level may stay "open" (no radius), which is how
/// tower-sized explicit chains are represented.
struct ScaleChain {
  std::size_t depth = 0;
  std::vector<mpz_class> e;
  std::vector<mpz_class> M;
  std::vector<mpq_class> phi;
  std::vector<mpz_class> rho;

  bool has_radius(std::size_t i) const noexcept { return i >= 1 && i <= rho.size(); }
  bool has_multiplier(std::size_t i) const noexcept { return i >= 1 && i <= M.size(); }

  // Throwing accessors (LevelOutOfRange).
  const mpz_class& e_at(std::size_t i) const;
  const mpz_class& M_at(std::size_t i) const;
  const mpq_class& phi_at(std::size_t i) const;
  const mpz_class& rho_at(std::size_t i) const;

  /// r_i as a SparseDyadic.
  SparseDyadic radius(std::size_t i) const;
  /// 2^{-e_i}
  SparseDyadic spacing(std::size_t i) const;

  /// Levels at which both M_i and phi_i are known.
  std::size_t parameter_levels() const noexcept { return std::min(M.size(), phi.size()); }

  friend bool operator==(const ScaleChain&, const ScaleChain&) = default;
};

ScaleChain build_custom_chain(const std::vector<mpz_class>& M, const std::vector<mpq_class>& phi,
                              std::size_t depth);

struct ExplicitChainOptions {
  LogConvention log = LogConvention::Natural;
  unsigned long bit_budget = 1ul << 16;
  mpfr_prec_t precision = kDefaultPrecisionBits;
};

/// Chain with M_1 = max{4, ceil(2(1+q_1^2)/log q_1)+2},
/// M_n = max{M_{n-1}+1, ceil((2/log q_n) prod_{j<=n}(1+q_j^2))+2}, phi_n = M_n - 2.
ScaleChain build_explicit_chain(std::size_t depth, const ExplicitChainOptions& options = {});

/// ceil(2 * prod_{j<=n}(1+q_j^2) / log q_n) for a chain whose e_1..e_n are
/// known. Exposed for tests and reports.
mpz_class explicit_ceiling(const std::vector<mpz_class>& e, std::size_t n,
                           const ExplicitChainOptions& options);

/// prod_{j=1}^{n} (1 + 2^{2 e_j}) in exponent form.
PowerSum square_product(const std::vector<mpz_class>& e, std::size_t n);

enum class RegimeTag { Branching, Collapse, Indeterminate };

struct Regime {
  RegimeTag tag = RegimeTag::Indeterminate;
  std::optional<std::size_t> witness_level;
};

const char* to_string(RegimeTag tag);

/// Branching iff phi_i < M_i - 1 at every level, Collapse iff phi_i > M_i at
/// every level. Otherwise Indeterminate with the first level that breaks the
/// pattern set by level 1.
Regime classify_regime(const ScaleChain& chain);

/// True when phi_i < M_i - 1.
bool branching_at(const ScaleChain& chain, std::size_t i);
bool collapse_at(const ScaleChain& chain, std::size_t i);

struct BranchingCount {
  PowerSum count;
  bool clipped = false;
};

/// Number of points of G_{i+1} in [g - r_i, g + r_i] cut to [0,1], for
/// g = g_numerator * 2^{-e_i}.
BranchingCount branching_count(const ScaleChain& chain, std::size_t i,
                               const mpz_class& g_numerator);

/// 2 * 2^{e_i (M_i - phi_i)} - 1
PowerSum branching_lower_bound(const ScaleChain& chain, std::size_t i);

}  // namespace thinset
