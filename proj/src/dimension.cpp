#include "thinset/dimension.hpp"

#include <algorithm>
#include <sstream>

#include "thinset/error.hpp"

namespace thinset {

void validate(const GaugeParams& params) {
  if (params.s <= 0) fail(ErrorCode::InvalidArgument, "gauge exponent s must be positive");
  if (params.epsilon <= 0 || params.epsilon >= 2) fail(ErrorCode::InvalidArgument, "epsilon must lie in (0,2)");
  if (params.C <= 0) fail(ErrorCode::InvalidArgument, "C must be positive");
}

std::vector<Segment> merge_union(std::vector<Segment> segments) {
  std::sort(segments.begin(), segments.end(),
            [](const Segment& a, const Segment& b) { return compare(a.lo, b.lo) < 0; });
  std::vector<Segment> out;
  for (auto& s : segments) {
    if (compare(s.lo, s.hi) > 0) fail(ErrorCode::InvalidArgument, "segment with lo > hi");
    if (!out.empty() && compare(s.lo, out.back().hi) <= 0) {
      if (compare(s.hi, out.back().hi) > 0) out.back().hi = std::move(s.hi);
    } else {
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<Segment> cell_segments(const std::vector<WindowCell>& cells) {
  std::vector<Segment> out;
  for (const auto& c : cells) out.insert(out.end(), c.pieces.begin(), c.pieces.end());
  return out;
}

namespace {

mpz_class ceil_scaled(const SparseDyadic& x, const mpz_class& e) { return -floor_times_pow2(-x, e); }

}  // namespace

mpz_class covering_number(const std::vector<Segment>& segments, const mpz_class& d) {
  if (d < 0) fail(ErrorCode::InvalidArgument, "covering needs d >= 0");
  const std::vector<Segment> u = merge_union(segments);
  if (u.empty()) return 0;
  mpz_class count = 0;
  std::size_t idx = 0;
  SparseDyadic pos = u[0].lo;
  while (true) {
    // pos lies in u[idx]; lay k intervals of length 2^{-d} from pos
    const mpz_class k = std::max(mpz_class(1), ceil_scaled(u[idx].hi - pos, d));
    count += k;
    const SparseDyadic end = pos + SparseDyadic::term(d, k);
    while (idx < u.size() && compare(u[idx].hi, end) <= 0) ++idx;
    if (idx == u.size()) break;
    pos = compare(u[idx].lo, end) <= 0 ? end : u[idx].lo;
  }
  return count;
}

mpz_class packing_number(const std::vector<Segment>& segments, const mpz_class& d) {
  if (d < 1) fail(ErrorCode::InvalidArgument, "packing needs d >= 1");
  const std::vector<Segment> u = merge_union(segments);
  if (u.empty()) return 0;
  const mpz_class d2 = d - 1;  // 2 * 2^{-d} = 2^{-(d-1)}
  const SparseDyadic gap = SparseDyadic::pow2(d2);
  mpz_class count = 1;
  std::size_t idx = 0;
  SparseDyadic v = u[0].lo;
  while (true) {
    // Later points in the same segment sit just above v + 2j * 2^{-d}; the
    // infimum is never attained, so each needs v + j * gap < hi.
    const SparseDyadic len = u[idx].hi - v;
    mpz_class extra = 0;
    if (sign(len) > 0) extra = ceil_scaled(len, d2) - 1;
    count += extra;
    const SparseDyadic t = v + SparseDyadic::term(d2, extra + 1);
    while (idx < u.size() && compare(u[idx].hi, t) <= 0) ++idx;
    if (idx == u.size()) break;
    v = compare(u[idx].lo, t) > 0 ? u[idx].lo : t;
    ++count;
  }
  return count;
}

PackingCoveringReport packing_vs_covering_check(const std::vector<Segment>& segments,
                                                const std::vector<mpz_class>& grid,
                                                const CountHooks& hooks) {
  PackingCoveringReport rep;
  for (const auto& d : grid) {
    PackingCoveringRow row;
    row.d = d;
    row.packing = packing_number(segments, d);
    row.covering = covering_number(segments, d - 1);
    if (hooks.packing) row.packing = hooks.packing(row.packing);
    if (hooks.covering) row.covering = hooks.covering(row.covering);
    row.pass = row.packing <= row.covering;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

const char* to_string(ExponentMode mode) {
  return mode == ExponentMode::Packing2 ? "packing2" : "hausdorff1";
}

namespace {

PowerSum product_lhs(const ScaleChain& chain, std::size_t n) {
  PowerSum p = PowerSum::constant(1);
  for (std::size_t j = 1; j < n; ++j) {
    const mpz_class w = chain.M_at(j) * chain.e_at(j) - chain.rho_at(j);
    p = p * (PowerSum::constant(1) + PowerSum::pow2(w));
  }
  return p;
}

std::optional<mpq_class> rational_power(const mpz_class& base, const mpq_class& p) {
  if (p.get_den() != 1 || !p.get_num().fits_slong_p()) return std::nullopt;
  const long k = p.get_num().get_si();
  if (k > 4096 || k < -4096) return std::nullopt;
  mpz_class v;
  mpz_pow_ui(v.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(k < 0 ? -k : k));
  return k < 0 ? mpq_class(1, 1) / mpq_class(v) : mpq_class(v);
}

}  // namespace

ProductBoundReport product_bound(const ScaleChain& chain, std::size_t n, const GaugeParams& params,
                                 ExponentMode mode, LogConvention convention, mpfr_prec_t precision) {
  validate(params);
  const std::size_t m = mode == ExponentMode::Packing2 ? n - 1 : n;
  if (n < 1 || m < 1 || n > chain.depth) fail(ErrorCode::LevelOutOfRange, "product_bound level");
  const mpq_class p = mode == ExponentMode::Packing2 ? mpq_class(2 - params.epsilon) : mpq_class(1 - params.epsilon);
  // phi(q_m) log q_m = rho_m * log 2
  const mpz_class& rho = chain.rho_at(m);

  ProductBoundReport rep;
  rep.n = n;
  rep.mode = mode;
  rep.lhs = product_lhs(chain, n);

  std::optional<mpq_class> exact_rhs;
  if (p == 0) exact_rhs = params.C;
  else if (convention == LogConvention::Base2) {
    if (auto v = rational_power(rho, p)) exact_rhs = params.C * *v;
  }

  for (mpfr_prec_t prec = precision; prec <= kMaxPrecisionBits; prec *= 2) {
    Bracket base = bracket_of(rho, prec);
    if (convention == LogConvention::Natural) base = base * ln2_bracket(prec);
    rep.log_lhs = log_of(rep.lhs, prec);
    rep.log_rhs = log(bracket_of(params.C, prec));
    if (p != 0) rep.log_rhs = rep.log_rhs + bracket_of(p, prec) * log(base);
    rep.precision = prec;
    if (exact_rhs) {
      const mpz_class num = exact_rhs->get_num();
      const mpz_class den = exact_rhs->get_den();
      rep.holds = rep.lhs * PowerSum::constant(den) <= PowerSum::constant(num);
      rep.exact = true;
      return rep;
    }
    if (certainly_leq(rep.log_lhs, rep.log_rhs)) {
      rep.holds = true;
      return rep;
    }
    if (certainly_less(rep.log_rhs, rep.log_lhs)) {
      rep.holds = false;
      return rep;
    }
  }
  fail(ErrorCode::PrecisionExhausted, "product bound not separated at " + std::to_string(kMaxPrecisionBits) + " bits");
}

Bracket hs_cover_cost(const mpz_class& count, const mpz_class& d, const mpq_class& s, mpfr_prec_t precision) {
  if (d < 2) fail(ErrorCode::InvalidArgument, "hs_cover_cost needs d >= 2");
  if (count < 0) fail(ErrorCode::InvalidArgument, "negative count");
  if (s <= 0) fail(ErrorCode::InvalidArgument, "s must be positive");
  const Bracket scale = bracket_of(d, precision) * ln2_bracket(precision);
  return bracket_of(count, precision) * pow(scale, mpq_class(-s));
}

namespace {

void fill_counts(CoverReport& row, const std::vector<Segment>& segs, const mpz_class& d,
                 const std::vector<mpq_class>& s_grid, mpfr_prec_t precision) {
  row.delta_exponent = d;
  row.covering = covering_number(segs, d);
  row.packing = packing_number(segs, d);
  const Bracket loglog = log(bracket_of(d, precision) * ln2_bracket(precision));
  if (*row.covering > 0) row.box_estimate = log(bracket_of(*row.covering, precision)) / loglog;
  for (const auto& s : s_grid) row.hs_costs.emplace_back(hs_cover_cost(*row.covering, d, s, precision));
}

}  // namespace

DimensionTable dimension_report(const ScaleChain& chain, const std::vector<mpq_class>& s_grid,
                                const std::vector<std::size_t>& n_range, const ChainReportOptions& options) {
  DimensionTable table;
  table.s_grid = s_grid;
  if (n_range.empty()) return table;
  const std::size_t top = *std::max_element(n_range.begin(), n_range.end());
  const Segment unit{SparseDyadic{}, SparseDyadic::integer(1)};
  const WindowEnumeration all = enumerate_window_levels(chain, top, unit, options.cap);
  const mpfr_prec_t prec = options.precision;

  std::optional<Bracket> c1;
  for (std::size_t n : n_range) {
    CoverReport row;
    row.n = n;
    const mpz_class d = chain.rho_at(n) - 2;
    if (d >= 2) {
      fill_counts(row, cell_segments(all.levels[n - 1]), d, s_grid, prec);
      // C_1^n * prod >= N  =>  C_1 >= (N / prod)^{1/n}
      const Bracket lhs = log_of(product_lhs(chain, n), prec);
      const Bracket ratio =
          (log(bracket_of(*row.covering, prec)) - lhs) / bracket_of(mpz_class(static_cast<unsigned long>(n)), prec);
      Bracket fit = exp(ratio);
      if (c1 && mpfr_greater_p(c1->hi.get(), fit.hi.get())) fit = *c1;
      c1 = fit;
      row.fitted_C1 = c1;
    } else {
      row.hs_costs.assign(s_grid.size(), std::nullopt);
    }
    if (n >= 2) {
      row.product_verdict =
          product_bound(chain, n, options.params, ExponentMode::Packing2, options.log, prec).holds;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

DimensionTable dimension_report(const DigitSpec& spec, const std::vector<mpq_class>& s_grid,
                                const std::vector<std::size_t>& n_range, mpfr_prec_t precision) {
  DimensionTable table;
  table.s_grid = s_grid;
  for (std::size_t n : n_range) {
    CoverReport row;
    row.n = n;
    const mpz_class d = spec.g_at(n + 1) - 1;
    std::vector<Segment> segs;
    const SparseDyadic width = SparseDyadic::pow2(d);
    for (unsigned long long mask = 0; mask < (1ull << n); ++mask) {
      SparseDyadic p;
      for (std::size_t j = 0; j < n; ++j) {
        if (mask & (1ull << j)) p = p + spec.a(j + 1);
      }
      segs.push_back({p, p + width});
    }
    if (d >= 2) fill_counts(row, segs, d, s_grid, precision);
    else row.hs_costs.assign(s_grid.size(), std::nullopt);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string to_csv(const DimensionTable& table) {
  std::ostringstream out;
  out << "n,delta_exponent,covering,packing,box_estimate,box_err";
  for (const auto& s : table.s_grid) out << ",hs_cost(s=" << s.get_str() << ")";
  out << ",product_verdict\n";
  auto opt = [](const std::optional<mpz_class>& v) { return v ? v->get_str() : std::string("NA"); };
  for (const auto& r : table.rows) {
    out << r.n << ',' << opt(r.delta_exponent) << ',' << opt(r.covering) << ',' << opt(r.packing) << ',';
    if (r.box_estimate) out << midpoint_string(*r.box_estimate) << ',' << radius_string(*r.box_estimate);
    else out << "NA,NA";
    for (const auto& c : r.hs_costs) out << ',' << (c ? midpoint_string(*c) : std::string("NA"));
    out << ',' << (r.product_verdict ? (*r.product_verdict ? "true" : "false") : "NA") << '\n';
  }
  return out.str();
}

}  // namespace thinset
