#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace thinset {

inline constexpr std::size_t kDefaultTermCap = 4096;

// Largest power-of-two shift materialised when a value has to be expanded
// into a plain integer (floor_times_pow2, lattice numerators).
inline constexpr unsigned long kDefaultBitBudget = 1ul << 20;

/// Exact signed value  sum_j c_j * 2^{-f_j}  with non-negative exponents f_j.
///
/// Canonical form: exponents pairwise distinct and strictly increasing,
/// coefficients nonzero. Coefficients may carry either sign, so values such
/// as 2^{-3} - 2^{-10^10} stay two terms instead of a 10^10-digit expansion.
/// Comparison operators compare real values, not representations.
class SparseDyadic {
 public:
  struct Term {
    mpz_class exponent;
    mpz_class coefficient;
  };

  SparseDyadic() = default;

  /// 2^{-exponent}
  static SparseDyadic pow2(const mpz_class& exponent);
  /// coefficient * 2^{-exponent}
  static SparseDyadic term(const mpz_class& exponent, const mpz_class& coefficient);
  static SparseDyadic integer(const mpz_class& value);
  /// Merges duplicate exponents and drops zero coefficients.
  static SparseDyadic from_terms(std::vector<Term> terms, std::size_t cap = kDefaultTermCap);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  mpz_class max_abs_coefficient() const;

  SparseDyadic operator-() const;
  /// Multiplication by an integer.
  SparseDyadic scaled(const mpz_class& factor) const;
  /// Multiplication by 2^{shift}; shift may have either sign. Exponents that
  /// would turn negative are folded into the coefficient.
  SparseDyadic times_pow2(const mpz_class& shift, std::size_t cap = kDefaultTermCap) const;

  friend bool operator==(const SparseDyadic& x, const SparseDyadic& y);
  friend std::strong_ordering operator<=>(const SparseDyadic& x, const SparseDyadic& y);

 private:
  std::vector<Term> terms_;
};

SparseDyadic add(const SparseDyadic& x, const SparseDyadic& y, std::size_t cap = kDefaultTermCap);
SparseDyadic subtract(const SparseDyadic& x, const SparseDyadic& y,
                      std::size_t cap = kDefaultTermCap);
SparseDyadic operator+(const SparseDyadic& x, const SparseDyadic& y);
SparseDyadic operator-(const SparseDyadic& x, const SparseDyadic& y);

/// Diagnostics from one run of the sign algorithm.
struct SignStats {
  std::size_t merges = 0;
  mpz_class peak_coefficient = 0;
  // 3 * n * max|c|; exceeding it raises InternalInvariant.
  mpz_class coefficient_bound = 0;
};

/// Sign of the real value, decided by leading-term dominance: the terms after
/// the leading one are bounded by R * 2^{-(f_2 - 1)}, so the leading term
/// wins once |c_1| * 2^{f_2 - f_1} > 2R. Otherwise the leading term is merged
/// into scale f_2 and the scan continues.
int sign(const SparseDyadic& x, SignStats* stats = nullptr);

std::strong_ordering compare(const SparseDyadic& x, const SparseDyadic& y);

/// floor(x * 2^e). Throws CapExceeded when a head term would need more than
/// bit_budget bits.
mpz_class floor_times_pow2(const SparseDyadic& x, const mpz_class& e,
                           unsigned long bit_budget = kDefaultBitBudget);

/// Distance from x in [0,1] to the lattice 2^{-e} Z (equivalently to its
/// intersection with [0,1]). Only the tail (exponents > e) is inspected; the
/// head is a lattice point already.
SparseDyadic dist_to_lattice(const SparseDyadic& x, const mpz_class& e);

struct DecimalApprox {
  std::string text;     // rounded decimal, plus "(+2^{-f})" notes for dropped terms
  unsigned digits = 0;  // |value - text| <= 10^{-digits}
};

DecimalApprox approx_decimal(const SparseDyadic& x, unsigned digits);

/// Compact human-readable form, e.g. "2^{-3} + 3*2^{-12}".
std::string to_string(const SparseDyadic& x);

}  // namespace thinset
