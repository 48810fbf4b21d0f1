#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <string>

#include "thinset/power_sum.hpp"

namespace thinset {

inline constexpr mpfr_prec_t kDefaultPrecisionBits = 128;
inline constexpr mpfr_prec_t kMaxPrecisionBits = 4096;

/// Owning MPFR value.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t precision = kDefaultPrecisionBits);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }

 private:
  mpfr_t value_;
  bool live_ = false;
};

/// Closed interval [lo, hi] produced with outward (directed) rounding, so the
/// exact quantity is guaranteed to lie inside.
struct Bracket {
  BigFloat lo;
  BigFloat hi;

  mpfr_prec_t precision() const noexcept { return lo.precision(); }
};

Bracket bracket_of(const mpz_class& value, mpfr_prec_t precision);
Bracket bracket_of(const mpq_class& value, mpfr_prec_t precision);
Bracket ln2_bracket(mpfr_prec_t precision);

Bracket operator+(const Bracket& a, const Bracket& b);
Bracket operator-(const Bracket& a, const Bracket& b);
Bracket operator*(const Bracket& a, const Bracket& b);
Bracket operator/(const Bracket& a, const Bracket& b);

/// Natural log; requires lo > 0.
Bracket log(const Bracket& a);
Bracket exp(const Bracket& a);
/// base^exponent for a strictly positive base.
Bracket pow(const Bracket& base, const mpq_class& exponent);

/// Natural log of a positive PowerSum without expanding it.
Bracket log_of(const PowerSum& value, mpfr_prec_t precision);

bool certainly_less(const Bracket& a, const Bracket& b);
bool certainly_leq(const Bracket& a, const Bracket& b);
bool contains(const Bracket& a, const mpq_class& value);

/// ceil/floor when both endpoints agree, nullopt otherwise.
std::optional<mpz_class> unambiguous_ceil(const Bracket& a);
std::optional<mpz_class> unambiguous_floor(const Bracket& a);

std::string to_decimal(const BigFloat& value, int significant_digits = 20);
std::string midpoint_string(const Bracket& a, int significant_digits = 20);
/// Half-width, rounded up.
std::string radius_string(const Bracket& a);

}  // namespace thinset
