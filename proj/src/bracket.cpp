#include "thinset/bracket.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "thinset/error.hpp"

namespace thinset {

BigFloat::BigFloat(mpfr_prec_t precision) {
  mpfr_init2(value_, precision);
  mpfr_set_zero(value_, 1);
  live_ = true;
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
  live_ = true;
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, other.precision());
  mpfr_swap(value_, other.value_);
  live_ = true;
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() {
  if (live_) mpfr_clear(value_);
}

namespace {

Bracket make(mpfr_prec_t precision) { return Bracket{BigFloat(precision), BigFloat(precision)}; }

mpfr_prec_t joint(const Bracket& a, const Bracket& b) { return std::max(a.precision(), b.precision()); }

using BinaryOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

// Evaluates op at the four corners, rounding down for the minimum and up for
// the maximum.
Bracket corners(const Bracket& a, const Bracket& b, BinaryOp op) {
  Bracket out = make(joint(a, b));
  const std::array<std::pair<mpfr_srcptr, mpfr_srcptr>, 4> pts{{
      {a.lo.get(), b.lo.get()},
      {a.lo.get(), b.hi.get()},
      {a.hi.get(), b.lo.get()},
      {a.hi.get(), b.hi.get()},
  }};
  BigFloat tmp(out.precision());
  bool first = true;
  for (const auto& [x, y] : pts) {
    op(tmp.get(), x, y, MPFR_RNDD);
    if (first || mpfr_less_p(tmp.get(), out.lo.get())) mpfr_set(out.lo.get(), tmp.get(), MPFR_RNDD);
    op(tmp.get(), x, y, MPFR_RNDU);
    if (first || mpfr_greater_p(tmp.get(), out.hi.get())) mpfr_set(out.hi.get(), tmp.get(), MPFR_RNDU);
    first = false;
  }
  return out;
}

}  // namespace

Bracket bracket_of(const mpz_class& value, mpfr_prec_t precision) {
  Bracket out = make(precision);
  mpfr_set_z(out.lo.get(), value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(out.hi.get(), value.get_mpz_t(), MPFR_RNDU);
  return out;
}

Bracket bracket_of(const mpq_class& value, mpfr_prec_t precision) {
  Bracket out = make(precision);
  mpfr_set_q(out.lo.get(), value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(out.hi.get(), value.get_mpq_t(), MPFR_RNDU);
  return out;
}

Bracket ln2_bracket(mpfr_prec_t precision) {
  Bracket out = make(precision);
  mpfr_const_log2(out.lo.get(), MPFR_RNDD);
  mpfr_const_log2(out.hi.get(), MPFR_RNDU);
  return out;
}

Bracket operator+(const Bracket& a, const Bracket& b) {
  Bracket out = make(joint(a, b));
  mpfr_add(out.lo.get(), a.lo.get(), b.lo.get(), MPFR_RNDD);
  mpfr_add(out.hi.get(), a.hi.get(), b.hi.get(), MPFR_RNDU);
  return out;
}

Bracket operator-(const Bracket& a, const Bracket& b) {
  Bracket out = make(joint(a, b));
  mpfr_sub(out.lo.get(), a.lo.get(), b.hi.get(), MPFR_RNDD);
  mpfr_sub(out.hi.get(), a.hi.get(), b.lo.get(), MPFR_RNDU);
  return out;
}

Bracket operator*(const Bracket& a, const Bracket& b) { return corners(a, b, &mpfr_mul); }

Bracket operator/(const Bracket& a, const Bracket& b) {
  if (mpfr_sgn(b.lo.get()) <= 0 && mpfr_sgn(b.hi.get()) >= 0) {
    fail(ErrorCode::InvalidArgument, "bracket division by an interval containing 0");
  }
  return corners(a, b, &mpfr_div);
}

Bracket log(const Bracket& a) {
  if (mpfr_sgn(a.lo.get()) <= 0) fail(ErrorCode::InvalidArgument, "log of a non-positive bracket");
  Bracket out = make(a.precision());
  mpfr_log(out.lo.get(), a.lo.get(), MPFR_RNDD);
  mpfr_log(out.hi.get(), a.hi.get(), MPFR_RNDU);
  return out;
}

Bracket exp(const Bracket& a) {
  Bracket out = make(a.precision());
  mpfr_exp(out.lo.get(), a.lo.get(), MPFR_RNDD);
  mpfr_exp(out.hi.get(), a.hi.get(), MPFR_RNDU);
  return out;
}

Bracket pow(const Bracket& base, const mpq_class& exponent) {
  if (exponent == 0) return bracket_of(mpz_class(1), base.precision());
  return exp(log(base) * bracket_of(exponent, base.precision()));
}

Bracket log_of(const PowerSum& value, mpfr_prec_t precision) {
  if (value.sign() <= 0) fail(ErrorCode::InvalidArgument, "log of a non-positive PowerSum");
  const auto& terms = value.terms();
  const mpz_class top = terms.front().exponent;
  const unsigned long window = static_cast<unsigned long>(precision) + 64;

  // mantissa = value / 2^top, summed with outward rounding; terms further than
  // `window` bits below the top are absorbed into a symmetric error term.
  Bracket mantissa = bracket_of(mpz_class(0), precision);
  mpz_class dropped = 0;
  for (const auto& t : terms) {
    const mpz_class drop = top - t.exponent;
    if (drop > window) {
      dropped += abs(t.coefficient);
      continue;
    }
    Bracket term = bracket_of(t.coefficient, precision);
    const long shift = -static_cast<long>(drop.get_ui());
    mpfr_mul_2si(term.lo.get(), term.lo.get(), shift, MPFR_RNDD);
    mpfr_mul_2si(term.hi.get(), term.hi.get(), shift, MPFR_RNDU);
    mantissa = mantissa + term;
  }
  if (dropped != 0) {
    Bracket err = bracket_of(dropped, precision);
    mpfr_mul_2si(err.hi.get(), err.hi.get(), -static_cast<long>(window), MPFR_RNDU);
    mpfr_neg(err.lo.get(), err.hi.get(), MPFR_RNDD);
    mantissa = mantissa + err;
  }
  return bracket_of(top, precision) * ln2_bracket(precision) + log(mantissa);
}

bool certainly_less(const Bracket& a, const Bracket& b) { return mpfr_less_p(a.hi.get(), b.lo.get()) != 0; }

bool certainly_leq(const Bracket& a, const Bracket& b) {
  return mpfr_lessequal_p(a.hi.get(), b.lo.get()) != 0;
}

bool contains(const Bracket& a, const mpq_class& value) {
  return mpfr_cmp_q(a.lo.get(), value.get_mpq_t()) <= 0 && mpfr_cmp_q(a.hi.get(), value.get_mpq_t()) >= 0;
}

std::optional<mpz_class> unambiguous_ceil(const Bracket& a) {
  mpz_class lo, hi;
  BigFloat t(a.precision());
  mpfr_ceil(t.get(), a.lo.get());
  mpfr_get_z(lo.get_mpz_t(), t.get(), MPFR_RNDN);
  mpfr_ceil(t.get(), a.hi.get());
  mpfr_get_z(hi.get_mpz_t(), t.get(), MPFR_RNDN);
  if (lo != hi) return std::nullopt;
  return lo;
}

std::optional<mpz_class> unambiguous_floor(const Bracket& a) {
  mpz_class lo, hi;
  BigFloat t(a.precision());
  mpfr_floor(t.get(), a.lo.get());
  mpfr_get_z(lo.get_mpz_t(), t.get(), MPFR_RNDN);
  mpfr_floor(t.get(), a.hi.get());
  mpfr_get_z(hi.get_mpz_t(), t.get(), MPFR_RNDN);
  if (lo != hi) return std::nullopt;
  return lo;
}

std::string to_decimal(const BigFloat& value, int significant_digits) {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", significant_digits, value.get());
  std::string out = buf != nullptr ? buf : "";
  mpfr_free_str(buf);
  return out;
}

std::string midpoint_string(const Bracket& a, int significant_digits) {
  BigFloat mid(a.precision() + 2);
  mpfr_add(mid.get(), a.lo.get(), a.hi.get(), MPFR_RNDN);
  mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
  return to_decimal(mid, significant_digits);
}

std::string radius_string(const Bracket& a) {
  BigFloat r(a.precision());
  mpfr_sub(r.get(), a.hi.get(), a.lo.get(), MPFR_RNDU);
  mpfr_div_2ui(r.get(), r.get(), 1, MPFR_RNDU);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.3RUe", r.get());
  std::string out = buf != nullptr ? buf : "";
  mpfr_free_str(buf);
  return out;
}

}  // namespace thinset
