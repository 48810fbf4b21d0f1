#include "thinset/sparse_dyadic.hpp"

#include <algorithm>
#include <utility>

#include "thinset/error.hpp"

namespace thinset {
namespace {

void check_cap(std::size_t size, std::size_t cap) {
  if (size > cap) {
    fail(ErrorCode::TermCapExceeded,
         std::to_string(size) + " terms exceed the cap of " + std::to_string(cap));
  }
}

mpz_class shifted_left(const mpz_class& v, unsigned long bits) {
  mpz_class out;
  mpz_mul_2exp(out.get_mpz_t(), v.get_mpz_t(), bits);
  return out;
}

unsigned long small_shift(const mpz_class& shift, unsigned long budget, const char* what) {
  if (shift < 0 || shift > budget) {
    fail(ErrorCode::CapExceeded, std::string(what) + ": shift of " + shift.get_str() +
                                     " bits exceeds the budget of " + std::to_string(budget));
  }
  return shift.get_ui();
}

// floor(tail * 2^e) for a tail whose exponents all exceed e. Such a tail has
// |tail * 2^e| <= abs_sum / 2, so the quotient lies in [-S-1, S] and is found
// by bisection on exact comparisons.
mpz_class tail_floor(const SparseDyadic& tail, const mpz_class& e, const mpz_class& abs_sum);

}  // namespace

SparseDyadic SparseDyadic::pow2(const mpz_class& exponent) { return term(exponent, 1); }

SparseDyadic SparseDyadic::term(const mpz_class& exponent, const mpz_class& coefficient) {
  if (exponent < 0) fail(ErrorCode::InvalidArgument, "negative exponent " + exponent.get_str());
  SparseDyadic out;
  if (coefficient != 0) out.terms_.push_back({exponent, coefficient});
  return out;
}

SparseDyadic SparseDyadic::integer(const mpz_class& value) { return term(0, value); }

SparseDyadic SparseDyadic::from_terms(std::vector<Term> terms, std::size_t cap) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
  SparseDyadic out;
  for (auto& t : terms) {
    if (t.exponent < 0) fail(ErrorCode::InvalidArgument, "negative exponent " + t.exponent.get_str());
    if (!out.terms_.empty() && out.terms_.back().exponent == t.exponent) {
      out.terms_.back().coefficient += t.coefficient;
      if (out.terms_.back().coefficient == 0) out.terms_.pop_back();
    } else if (t.coefficient != 0) {
      out.terms_.push_back(std::move(t));
    }
  }
  check_cap(out.terms_.size(), cap);
  return out;
}

mpz_class SparseDyadic::max_abs_coefficient() const {
  mpz_class best = 0;
  for (const auto& t : terms_) {
    mpz_class a = abs(t.coefficient);
    if (a > best) best = a;
  }
  return best;
}

SparseDyadic SparseDyadic::operator-() const {
  SparseDyadic out = *this;
  for (auto& t : out.terms_) t.coefficient = -t.coefficient;
  return out;
}

SparseDyadic SparseDyadic::scaled(const mpz_class& factor) const {
  if (factor == 0) return {};
  SparseDyadic out = *this;
  for (auto& t : out.terms_) t.coefficient *= factor;
  return out;
}

SparseDyadic SparseDyadic::times_pow2(const mpz_class& shift, std::size_t cap) const {
  std::vector<Term> moved;
  moved.reserve(terms_.size());
  for (const auto& t : terms_) {
    mpz_class f = t.exponent - shift;
    if (f >= 0) {
      moved.push_back({f, t.coefficient});
    } else {
      moved.push_back({0, shifted_left(t.coefficient, small_shift(-f, kDefaultBitBudget, "times_pow2"))});
    }
  }
  return from_terms(std::move(moved), cap);
}

SparseDyadic add(const SparseDyadic& x, const SparseDyadic& y, std::size_t cap) {
  const auto& a = x.terms();
  const auto& b = y.terms();
  std::vector<SparseDyadic::Term> merged;
  merged.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].exponent < b[j].exponent)) {
      merged.push_back(a[i++]);
    } else if (i == a.size() || b[j].exponent < a[i].exponent) {
      merged.push_back(b[j++]);
    } else {
      mpz_class c = a[i].coefficient + b[j].coefficient;
      if (c != 0) merged.push_back({a[i].exponent, c});
      ++i;
      ++j;
    }
  }
  check_cap(merged.size(), cap);
  // Already canonical: exponents ascending and distinct, zeros dropped.
  return SparseDyadic::from_terms(std::move(merged), cap);
}

SparseDyadic subtract(const SparseDyadic& x, const SparseDyadic& y, std::size_t cap) {
  return add(x, -y, cap);
}

SparseDyadic operator+(const SparseDyadic& x, const SparseDyadic& y) { return add(x, y); }
SparseDyadic operator-(const SparseDyadic& x, const SparseDyadic& y) { return subtract(x, y); }

int sign(const SparseDyadic& x, SignStats* stats) {
  const auto& t = x.terms();
  const std::size_t n = t.size();
  if (n == 0) return 0;

  std::vector<mpz_class> suffix_max(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) {
    mpz_class a = abs(t[i].coefficient);
    suffix_max[i] = a > suffix_max[i + 1] ? a : suffix_max[i + 1];
  }
  const mpz_class bound = mpz_class(3) * mpz_class(static_cast<unsigned long>(n)) * suffix_max[0];

  mpz_class lead_c = t[0].coefficient;
  mpz_class lead_f = t[0].exponent;
  mpz_class peak = abs(lead_c);
  std::size_t merges = 0;
  std::size_t i = 1;
  int result = 0;

  while (true) {
    if (lead_c == 0) {
      if (i == n) {
        result = 0;
        break;
      }
      lead_c = t[i].coefficient;
      lead_f = t[i].exponent;
      ++i;
      continue;
    }
    if (i == n) {
      result = sgn(lead_c);
      break;
    }
    const mpz_class two_r = 2 * suffix_max[i];
    const mpz_class gap = t[i].exponent - lead_f;
    const std::size_t two_r_bits = mpz_sizeinbase(two_r.get_mpz_t(), 2);
    if (gap >= static_cast<unsigned long>(two_r_bits)) {
      result = sgn(lead_c);
      break;
    }
    mpz_class scaled = shifted_left(lead_c, gap.get_ui());
    if (abs(scaled) > two_r) {
      result = sgn(lead_c);
      break;
    }
    lead_c = scaled + t[i].coefficient;
    lead_f = t[i].exponent;
    ++i;
    ++merges;
    mpz_class a = abs(lead_c);
    if (a > peak) peak = a;
    if (peak > bound) {
      fail(ErrorCode::InternalInvariant,
           "sign(): merged coefficient " + peak.get_str() + " exceeds 3*n*max|c| = " + bound.get_str());
    }
  }

  if (stats != nullptr) {
    stats->merges = merges;
    stats->peak_coefficient = peak;
    stats->coefficient_bound = bound;
  }
  return result;
}

std::strong_ordering compare(const SparseDyadic& x, const SparseDyadic& y) {
  const int s = sign(subtract(x, y, 2 * kDefaultTermCap + x.size() + y.size()));
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool operator==(const SparseDyadic& x, const SparseDyadic& y) { return compare(x, y) == 0; }

std::strong_ordering operator<=>(const SparseDyadic& x, const SparseDyadic& y) {
  return compare(x, y);
}

namespace {

mpz_class tail_floor(const SparseDyadic& tail, const mpz_class& e, const mpz_class& abs_sum) {
  mpz_class lo = -abs_sum - 1;  // lo * 2^{-e} <= tail
  mpz_class hi = abs_sum + 1;   // hi * 2^{-e} >  tail
  while (hi - lo > 1) {
    mpz_class mid = lo + (hi - lo) / 2;
    if (compare(SparseDyadic::term(e, mid), tail) <= 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

mpz_class floor_times_pow2(const SparseDyadic& x, const mpz_class& e, unsigned long bit_budget) {
  mpz_class head = 0;
  std::vector<SparseDyadic::Term> tail;
  mpz_class tail_abs_sum = 0;
  for (const auto& t : x.terms()) {
    if (t.exponent <= e) {
      head += shifted_left(t.coefficient, small_shift(e - t.exponent, bit_budget, "floor_times_pow2"));
    } else {
      tail.push_back(t);
      tail_abs_sum += abs(t.coefficient);
    }
  }
  if (tail.empty()) return head;

  const SparseDyadic tail_value = SparseDyadic::from_terms(std::move(tail), x.size() + 1);
  return head + tail_floor(tail_value, e, tail_abs_sum);
}

SparseDyadic dist_to_lattice(const SparseDyadic& x, const mpz_class& e) {
  if (e < 0) fail(ErrorCode::InvalidArgument, "negative lattice exponent");
  if (sign(x) < 0 || compare(x, SparseDyadic::integer(1)) > 0) {
    fail(ErrorCode::OutOfUnitInterval, to_string(x));
  }
  std::vector<SparseDyadic::Term> tail;
  mpz_class tail_abs_sum = 0;
  for (const auto& t : x.terms()) {
    if (t.exponent > e) {
      tail.push_back(t);
      tail_abs_sum += abs(t.coefficient);
    }
  }
  if (tail.empty()) return {};

  const SparseDyadic tail_value = SparseDyadic::from_terms(std::move(tail), x.size() + 1);
  const mpz_class lo = tail_floor(tail_value, e, tail_abs_sum);
  // reduced in [0, 2^{-e})
  const SparseDyadic reduced = subtract(tail_value, SparseDyadic::term(e, lo), x.size() + 2);
  const SparseDyadic upper = subtract(SparseDyadic::pow2(e), reduced, x.size() + 2);
  return compare(reduced, upper) <= 0 ? reduced : upper;
}

DecimalApprox approx_decimal(const SparseDyadic& x, unsigned digits) {
  DecimalApprox out;
  out.digits = digits;
  if (x.is_zero()) {
    out.text = "0";
    return out;
  }
  // Terms past this exponent are far below half an ulp and are annotated.
  const unsigned long limit = 4ul * digits + 64;
  mpq_class value = 0;
  std::string notes;
  for (const auto& t : x.terms()) {
    if (t.exponent <= limit) {
      mpz_class den = shifted_left(1, t.exponent.get_ui());
      value += mpq_class(t.coefficient, den);
    } else {
      const bool negative = t.coefficient < 0;
      const mpz_class mag = abs(t.coefficient);
      notes += notes.empty() ? "" : " ";
      notes += negative ? "-" : "+";
      if (mag != 1) notes += mag.get_str() + "*";
      notes += "2^{-" + t.exponent.get_str() + "}";
    }
  }
  value.canonicalize();
  const bool negative = value < 0;
  mpq_class mag = negative ? mpq_class(-value) : value;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  mpq_class scaled_q = mag * scale + mpq_class(1, 2);
  mpz_class rounded;
  mpz_fdiv_q(rounded.get_mpz_t(), scaled_q.get_num_mpz_t(), scaled_q.get_den_mpz_t());

  mpz_class int_part, frac_part;
  mpz_fdiv_qr(int_part.get_mpz_t(), frac_part.get_mpz_t(), rounded.get_mpz_t(), scale.get_mpz_t());
  std::string text = (negative && rounded != 0) ? "-" : "";
  text += int_part.get_str();
  if (digits > 0) {
    std::string frac = frac_part.get_str();
    text += "." + std::string(digits - frac.size(), '0') + frac;
  }
  if (!notes.empty()) text += " (" + notes + ")";
  out.text = std::move(text);
  return out;
}

std::string to_string(const SparseDyadic& x) {
  if (x.is_zero()) return "0";
  std::string out;
  for (const auto& t : x.terms()) {
    const bool negative = t.coefficient < 0;
    const mpz_class mag = abs(t.coefficient);
    if (out.empty()) {
      out += negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    if (mag != 1) out += mag.get_str() + "*";
    out += "2^{-" + t.exponent.get_str() + "}";
  }
  return out;
}

}  // namespace thinset
