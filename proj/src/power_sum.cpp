#include "thinset/power_sum.hpp"

#include <algorithm>
#include <utility>

#include "thinset/error.hpp"

namespace thinset {

PowerSum PowerSum::constant(const mpz_class& value) { return pow2(0, value); }

PowerSum PowerSum::pow2(const mpz_class& exponent, const mpz_class& coefficient) {
  PowerSum out;
  if (coefficient != 0) out.terms_.push_back({exponent, coefficient});
  return out;
}

PowerSum PowerSum::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.exponent > b.exponent; });
  PowerSum out;
  for (auto& t : terms) {
    if (!out.terms_.empty() && out.terms_.back().exponent == t.exponent) {
      out.terms_.back().coefficient += t.coefficient;
      if (out.terms_.back().coefficient == 0) out.terms_.pop_back();
    } else if (t.coefficient != 0) {
      out.terms_.push_back(std::move(t));
    }
  }
  return out;
}

SparseDyadic PowerSum::to_dyadic(const mpz_class& shift) const {
  std::vector<SparseDyadic::Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (t.exponent > shift) fail(ErrorCode::InvalidArgument, "to_dyadic shift below an exponent");
    out.push_back({shift - t.exponent, t.coefficient});
  }
  return SparseDyadic::from_terms(std::move(out), terms_.size() + 1);
}

int PowerSum::sign() const {
  if (terms_.empty()) return 0;
  return thinset::sign(to_dyadic(terms_.front().exponent));
}

std::optional<mpz_class> PowerSum::to_integer(unsigned long bit_budget) const {
  mpz_class value = 0;
  for (const auto& t : terms_) {
    if (t.exponent < 0 || t.exponent > bit_budget) return std::nullopt;
    mpz_class term;
    mpz_mul_2exp(term.get_mpz_t(), t.coefficient.get_mpz_t(), t.exponent.get_ui());
    value += term;
  }
  return value;
}

PowerSum PowerSum::operator-() const {
  PowerSum out = *this;
  for (auto& t : out.terms_) t.coefficient = -t.coefficient;
  return out;
}

PowerSum operator+(const PowerSum& a, const PowerSum& b) {
  std::vector<PowerSum::Term> all = a.terms_;
  all.insert(all.end(), b.terms_.begin(), b.terms_.end());
  return PowerSum::from_terms(std::move(all));
}

PowerSum operator-(const PowerSum& a, const PowerSum& b) { return a + (-b); }

PowerSum operator*(const PowerSum& a, const PowerSum& b) {
  std::vector<PowerSum::Term> all;
  all.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      all.push_back({x.exponent + y.exponent, x.coefficient * y.coefficient});
    }
  }
  return PowerSum::from_terms(std::move(all));
}

bool operator==(const PowerSum& a, const PowerSum& b) { return (a - b).sign() == 0; }

std::strong_ordering operator<=>(const PowerSum& a, const PowerSum& b) {
  const int s = (a - b).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string to_string(const PowerSum& value) {
  if (auto exact = value.to_integer(64)) return exact->get_str();
  std::string out;
  for (const auto& t : value.terms()) {
    const bool negative = t.coefficient < 0;
    const mpz_class mag = abs(t.coefficient);
    if (out.empty()) {
      out += negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    if (t.exponent == 0) {
      out += mag.get_str();
      continue;
    }
    if (mag != 1) out += mag.get_str() + "*";
    out += "2^{" + t.exponent.get_str() + "}";
  }
  return out;
}

}  // namespace thinset
