#include "thinset/digit_cantor.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "thinset/error.hpp"

namespace thinset {

GrowthProperty parse_growth(const std::string& text) {
  static const std::regex additive(R"(\s*g\(n\+1\)\s*>=\s*g\(n\)\s*\+\s*(\d+)\s*)");
  static const std::regex multiplicative(R"(\s*g\(n\+1\)\s*>=\s*(\d+)\s*\*\s*g\(n\)\s*)");
  std::smatch m;
  if (std::regex_match(text, m, additive)) return {GrowthKind::Additive, mpz_class(m[1].str())};
  if (std::regex_match(text, m, multiplicative)) return {GrowthKind::Multiplicative, mpz_class(m[1].str())};
  if (text.empty()) return {};
  fail(ErrorCode::ConfigError, "unrecognised growth property '" + text + "'");
}

std::string to_string(const GrowthProperty& growth) {
  switch (growth.kind) {
    case GrowthKind::Additive: return "g(n+1)>=g(n)+" + growth.k.get_str();
    case GrowthKind::Multiplicative: return "g(n+1)>=" + growth.k.get_str() + "*g(n)";
    case GrowthKind::None: break;
  }
  return "";
}

const mpz_class& DigitSpec::g_at(std::size_t n) const {
  if (n < 1 || n > g.size()) fail(ErrorCode::UniverseExceeded, "g(" + std::to_string(n) + ") not tabulated");
  return g[n - 1];
}

DigitSpec make_digit_spec(std::vector<mpz_class> g, GrowthProperty growth, std::size_t N_max,
                          std::optional<std::array<std::vector<std::size_t>, 3>> classes) {
  if (N_max == 0 || g.size() < N_max) fail(ErrorCode::InvalidArgument, "g table shorter than N_max");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] <= 0) fail(ErrorCode::InvalidArgument, "g must be positive");
    if (i > 0 && g[i] <= g[i - 1]) fail(ErrorCode::MonotonicityViolation, "g not strictly increasing");
  }
  if (growth.kind == GrowthKind::Additive && growth.k < 1) fail(ErrorCode::InvalidArgument, "additive growth needs k >= 1");
  if (growth.kind == GrowthKind::Multiplicative && growth.k < 2) {
    fail(ErrorCode::InvalidArgument, "multiplicative growth needs k >= 2");
  }
  DigitSpec spec;
  g.resize(N_max);
  spec.g = std::move(g);
  spec.growth = growth;
  spec.N_max = N_max;
  if (classes) {
    spec.classes = std::move(*classes);
    for (auto& c : spec.classes) std::sort(c.begin(), c.end());
  } else {
    spec.mod3 = true;
    for (std::size_t n = 1; n <= N_max; ++n) spec.classes[(n - 1) % 3].push_back(n);
  }
  for (const auto& c : spec.classes) {
    if (c.empty()) fail(ErrorCode::InvalidArgument, "every class must be nonempty up to N_max");
    for (std::size_t n : c) {
      if (n < 1 || n > N_max) fail(ErrorCode::InvalidArgument, "partition index outside 1..N_max");
    }
  }
  return spec;
}

std::vector<mpz_class> schedule_linear(std::size_t N) {
  std::vector<mpz_class> g;
  for (std::size_t n = 1; n <= N; ++n) g.emplace_back(static_cast<unsigned long>(n));
  return g;
}

std::vector<mpz_class> schedule_pow2(std::size_t N) {
  std::vector<mpz_class> g;
  for (std::size_t n = 1; n <= N; ++n) g.push_back(mpz_class(1) << static_cast<mp_bitcnt_t>(n));
  return g;
}

std::vector<mpz_class> schedule_pow2_square(std::size_t N) {
  std::vector<mpz_class> g;
  for (std::size_t n = 1; n <= N; ++n) g.push_back(mpz_class(1) << static_cast<mp_bitcnt_t>(n * n));
  return g;
}

mpz_class beyond_table_exponent(const DigitSpec& spec) {
  const mpz_class& last = spec.g_at(spec.N_max);
  switch (spec.growth.kind) {
    case GrowthKind::Additive: return last + spec.growth.k - 1;
    case GrowthKind::Multiplicative: return spec.growth.k * last - 1;
    case GrowthKind::None: break;
  }
  fail(ErrorCode::GrowthPropertyMissing, "no growth property declared");
}

SeparationReport separation_check(const DigitSpec& spec, std::size_t N) {
  if (N > spec.N_max) fail(ErrorCode::InvalidArgument, "N beyond N_max");
  const mpz_class beyond = beyond_table_exponent(spec);
  SeparationReport rep;
  rep.growth = to_string(spec.growth);
  for (std::size_t n = 1; n <= N; ++n) {
    SeparationRow row;
    row.n = n;
    row.bound_exponent = beyond;
    for (std::size_t m = n + 1; m <= spec.N_max; ++m) row.tail = row.tail + spec.a(m);
    row.pass = compare(spec.a(n), row.tail + SparseDyadic::pow2(beyond)) > 0;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

TauBound tau_bound(const DigitSpec& spec, std::size_t n) {
  if (n < 1 || n >= spec.N_max) fail(ErrorCode::InvalidArgument, "tau_bound needs 1 <= n < N_max");
  TauBound b;
  b.lower_exponent = spec.g_at(n + 1);
  b.upper_exponent = spec.g_at(n + 1) - 1;
  for (std::size_t m = n + 1; m <= spec.N_max; ++m) b.truncated_tail = b.truncated_tail + spec.a(m);
  return b;
}

Membership member_K(const DigitSpec& spec, const SparseDyadic& x) {
  if (sign(x) < 0) fail(ErrorCode::InvalidArgument, "member_K needs x >= 0");
  const mpz_class& G = spec.g_at(spec.N_max);
  std::vector<SparseDyadic::Term> fine;
  for (const auto& t : x.terms()) {
    if (t.exponent > G) fine.push_back(t);
  }
  if (!fine.empty()) {
    const SparseDyadic tail = SparseDyadic::from_terms(std::move(fine));
    if (!(SparseDyadic::term(G, floor_times_pow2(tail, G)) == tail)) {
      fail(ErrorCode::UniverseExceeded, "x has digits below 2^{-g(N_max)}");
    }
  }
  // a_n exceeds the sum of all later tabulated terms, so greedy extraction
  // recovers the digit set whenever one exists.
  Membership out;
  SparseDyadic rest = x;
  for (std::size_t n = 1; n <= spec.N_max && sign(rest) != 0; ++n) {
    const SparseDyadic an = spec.a(n);
    if (compare(rest, an) >= 0) {
      rest = rest - an;
      out.digits.push_back(n);
    }
  }
  out.member = sign(rest) == 0;
  if (!out.member) out.digits.clear();
  return out;
}

std::vector<std::size_t> class_indices(const DigitSpec& spec, int cls, std::size_t index_cap) {
  if (cls < 1 || cls > 3) fail(ErrorCode::InvalidArgument, "class must be 1, 2 or 3");
  std::vector<std::size_t> out;
  for (std::size_t n : spec.classes[cls - 1]) {
    if (n <= index_cap) out.push_back(n);
  }
  return out;
}

std::vector<SparseDyadic> subset_sums(const DigitSpec& spec, int cls, std::size_t index_cap,
                                      std::size_t count_cap) {
  const std::vector<std::size_t> idx = class_indices(spec, cls, index_cap);
  if (idx.size() >= 63) fail(ErrorCode::CapExceeded, "too many class indices for subset enumeration");
  const unsigned long long total = 1ull << idx.size();
  std::vector<SparseDyadic> out;
  for (unsigned long long mask = 0; mask < total && out.size() < count_cap; ++mask) {
    SparseDyadic s;
    for (std::size_t b = 0; b < idx.size(); ++b) {
      if (mask & (1ull << b)) s = s + spec.a(idx[b]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

TripleSumsetReport verify_triple_sumset(const DigitSpec& spec, std::size_t index_cap) {
  std::set<std::size_t> seen;
  for (const auto& c : spec.classes) {
    for (std::size_t n : c) {
      if (!seen.insert(n).second) fail(ErrorCode::PartitionOverlap, "index " + std::to_string(n) + " in two classes");
    }
  }
  if (index_cap > spec.N_max) fail(ErrorCode::UniverseExceeded, "index_cap beyond N_max");

  TripleSumsetReport rep;
  rep.index_cap = index_cap;
  std::array<std::vector<std::size_t>, 3> idx;
  std::array<std::vector<SparseDyadic>, 3> sums;
  for (int c = 0; c < 3; ++c) {
    idx[c] = class_indices(spec, c + 1, index_cap);
    sums[c] = subset_sums(spec, c + 1, index_cap);
    rep.class_sizes[c] = sums[c].size();
  }
  auto digits_of = [&](int c, std::size_t mask) {
    std::vector<std::size_t> d;
    for (std::size_t b = 0; b < idx[c].size(); ++b) {
      if (mask & (1ull << b)) d.push_back(idx[c][b]);
    }
    return d;
  };
  for (std::size_t i = 0; i < sums[0].size(); ++i) {
    for (std::size_t j = 0; j < sums[1].size(); ++j) {
      for (std::size_t k = 0; k < sums[2].size(); ++k) {
        ++rep.total;
        const Membership m = member_K(spec, sums[0][i] + sums[1][j] + sums[2][k]);
        if (!m.member) continue;
        ++rep.passed;
        std::vector<std::size_t> expect = digits_of(0, i);
        for (std::size_t n : digits_of(1, j)) expect.push_back(n);
        for (std::size_t n : digits_of(2, k)) expect.push_back(n);
        std::sort(expect.begin(), expect.end());
        if (expect == m.digits) ++rep.union_matches;
      }
    }
  }
  return rep;
}

DiagnosticTable dimension_zero_diagnostic(const DigitSpec& spec, const std::vector<mpq_class>& s_grid,
                                          const std::vector<std::size_t>& n_range, mpfr_prec_t precision) {
  DiagnosticTable table;
  table.s_grid = s_grid;
  const Bracket ln2 = ln2_bracket(precision);
  for (std::size_t n : n_range) {
    const TauBound tb = tau_bound(spec, n);
    if (tb.upper_exponent < 1) fail(ErrorCode::InvalidArgument, "tau bound too coarse for the gauge");
    // log(1/tau_n) in [(g(n+1)-1) ln2, g(n+1) ln2]
    const Bracket lo = bracket_of(tb.upper_exponent, precision) * ln2;
    const Bracket hi = bracket_of(tb.lower_exponent, precision) * ln2;
    const Bracket log_inv_tau{lo.lo, hi.hi};
    const Bracket count = bracket_of(mpz_class(mpz_class(1) << static_cast<mp_bitcnt_t>(n)), precision);
    DiagnosticRow row;
    row.n = n;
    for (const auto& s : s_grid) row.cells.push_back({s, count * pow(log_inv_tau, -s)});
    table.rows.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < s_grid.size(); ++c) {
    bool dec = true;
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
      dec = dec && certainly_less(table.rows[r].cells[c].value, table.rows[r - 1].cells[c].value);
    }
    table.decreasing.push_back(dec);
  }
  return table;
}

}  // namespace thinset
