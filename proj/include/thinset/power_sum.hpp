#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "thinset/sparse_dyadic.hpp"

namespace thinset {

/// Exact value  sum_j c_j * 2^{k_j}  with signed exponents. Used for lattice
/// counts such as 2 * 2^{e_{i+1} - rho_i} + 1 and for the products
/// prod (1 + q_j^{M_j - phi_j}) whose exponents are far too large to expand.
/// Terms are kept with distinct exponents, largest first.
class PowerSum {
 public:
  struct Term {
    mpz_class exponent;
    mpz_class coefficient;
  };

  PowerSum() = default;

  static PowerSum constant(const mpz_class& value);
  /// coefficient * 2^{exponent}
  static PowerSum pow2(const mpz_class& exponent, const mpz_class& coefficient = 1);
  static PowerSum from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  int sign() const;

  /// Exact integer value when every exponent is non-negative and within the
  /// bit budget; nullopt otherwise.
  std::optional<mpz_class> to_integer(unsigned long bit_budget = 4096) const;

  /// value * 2^{-shift} as a SparseDyadic; shift must be >= every exponent.
  SparseDyadic to_dyadic(const mpz_class& shift) const;

  PowerSum operator-() const;
  friend PowerSum operator+(const PowerSum& a, const PowerSum& b);
  friend PowerSum operator-(const PowerSum& a, const PowerSum& b);
  friend PowerSum operator*(const PowerSum& a, const PowerSum& b);
  friend bool operator==(const PowerSum& a, const PowerSum& b);
  friend std::strong_ordering operator<=>(const PowerSum& a, const PowerSum& b);

 private:
  std::vector<Term> terms_;
};

/// Plain decimal when the value is a small integer, otherwise "2*2^{4} + 1".
std::string to_string(const PowerSum& value);

}  // namespace thinset
