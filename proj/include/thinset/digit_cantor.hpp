#pragma once

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "thinset/bracket.hpp"
#include "thinset/sparse_dyadic.hpp"

namespace thinset {

enum class GrowthKind { None, Additive, Multiplicative };

/// Declared behaviour of g beyond the table: g(n+1) >= g(n) + k or
/// g(n+1) >= k * g(n).
struct GrowthProperty {
  GrowthKind kind = GrowthKind::None;
  mpz_class k = 0;
};

GrowthProperty parse_growth(const std::string& text);
std::string to_string(const GrowthProperty& growth);

/// a_n = 2^{-g(n)} for n = 1..N_max. classes[c] lists the indices of class c+1.
struct DigitSpec {
  std::vector<mpz_class> g;
  GrowthProperty growth;
  std::array<std::vector<std::size_t>, 3> classes;
  bool mod3 = false;
  std::size_t N_max = 0;

  const mpz_class& g_at(std::size_t n) const;
  SparseDyadic a(std::size_t n) const { return SparseDyadic::pow2(g_at(n)); }
};

/// Validates the table (strictly increasing, positive, length >= N_max) and
/// fills classes when partition is "mod3": class of n is ((n-1) mod 3) + 1.
DigitSpec make_digit_spec(std::vector<mpz_class> g, GrowthProperty growth, std::size_t N_max,
                          std::optional<std::array<std::vector<std::size_t>, 3>> classes = std::nullopt);

// Built-in schedules: g(n) = n, 2^n, 2^{n^2}.
std::vector<mpz_class> schedule_linear(std::size_t N);
std::vector<mpz_class> schedule_pow2(std::size_t N);
std::vector<mpz_class> schedule_pow2_square(std::size_t N);

/// Upper bound exponent t with sum_{m > N_max} a_m <= 2^{-t}, from the growth property.
mpz_class beyond_table_exponent(const DigitSpec& spec);

struct SeparationRow {
  std::size_t n = 0;
  SparseDyadic tail;  // exact sum over n < m <= N_max
  mpz_class bound_exponent;
  bool pass = false;
};

struct SeparationReport {
  bool pass = true;
  std::string growth;
  std::vector<SeparationRow> rows;
};

SeparationReport separation_check(const DigitSpec& spec, std::size_t N);

/// tau_n in [2^{-lower_exponent}, 2^{-upper_exponent}], lower_exponent = g(n+1),
/// upper_exponent = g(n+1) - 1.
struct TauBound {
  mpz_class lower_exponent;
  mpz_class upper_exponent;
  SparseDyadic truncated_tail;  // sum over n < m <= N_max
};

TauBound tau_bound(const DigitSpec& spec, std::size_t n);

struct Membership {
  bool member = false;
  std::vector<std::size_t> digits;
};

Membership member_K(const DigitSpec& spec, const SparseDyadic& x);

/// Class indices (1..3) of the spec that are <= index_cap.
std::vector<std::size_t> class_indices(const DigitSpec& spec, int cls, std::size_t index_cap);

std::vector<SparseDyadic> subset_sums(const DigitSpec& spec, int cls, std::size_t index_cap,
                                      std::size_t count_cap = 1ul << 20);

struct TripleSumsetReport {
  std::size_t index_cap = 0;
  std::array<std::size_t, 3> class_sizes{};
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t union_matches = 0;  // digit set equals F1 + F2 + F3 (disjoint union)

  bool pass() const noexcept { return passed == total && union_matches == total; }
};

TripleSumsetReport verify_triple_sumset(const DigitSpec& spec, std::size_t index_cap);

struct DiagnosticCell {
  mpq_class s;
  Bracket value;  // 2^n (log 1/tau_n)^{-s}
};

struct DiagnosticRow {
  std::size_t n = 0;
  std::vector<DiagnosticCell> cells;
};

struct DiagnosticTable {
  std::vector<mpq_class> s_grid;
  std::vector<DiagnosticRow> rows;
  std::vector<bool> decreasing;  // per s, certified upper(n+1) < lower(n)
};

DiagnosticTable dimension_zero_diagnostic(const DigitSpec& spec, const std::vector<mpq_class>& s_grid,
                                          const std::vector<std::size_t>& n_range,
                                          mpfr_prec_t precision = kDefaultPrecisionBits);

}  // namespace thinset
