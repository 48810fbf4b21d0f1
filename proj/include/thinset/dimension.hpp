#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "thinset/bracket.hpp"
#include "thinset/digit_cantor.hpp"
#include "thinset/falconer_set.hpp"
#include "thinset/power_sum.hpp"
#include "thinset/scale_chain.hpp"

namespace thinset {

/// h_s(r) = (log 1/r)^{-s}; epsilon is the dimension gap and C the constant
/// of the product hypothesis.
struct GaugeParams {
  mpq_class s = 1;
  mpq_class epsilon = 1;
  mpq_class C = mpq_class(1, 2);
};

void validate(const GaugeParams& params);

/// Sorted union with touching segments joined.
std::vector<Segment> merge_union(std::vector<Segment> segments);

/// Segments of the cells of one enumerated level.
std::vector<Segment> cell_segments(const std::vector<WindowCell>& cells);

/// Least number of closed intervals of length 2^{-d} covering the union.
mpz_class covering_number(const std::vector<Segment>& segments, const mpz_class& d);

/// Largest number of points of the union with pairwise distances > 2 * 2^{-d}
/// (disjoint closed balls of radius 2^{-d}). Needs d >= 1.
mpz_class packing_number(const std::vector<Segment>& segments, const mpz_class& d);

struct CountHooks {
  std::function<mpz_class(const mpz_class&)> covering;
  std::function<mpz_class(const mpz_class&)> packing;
};

struct PackingCoveringRow {
  mpz_class d;
  mpz_class packing;   // P at 2^{-d}
  mpz_class covering;  // N at 2^{-d+1}
  bool pass = false;
};

struct PackingCoveringReport {
  bool pass = true;
  std::vector<PackingCoveringRow> rows;
};

PackingCoveringReport packing_vs_covering_check(const std::vector<Segment>& segments,
                                                const std::vector<mpz_class>& grid,
                                                const CountHooks& hooks = {});

enum class ExponentMode { Packing2, Hausdorff1 };

const char* to_string(ExponentMode mode);

struct ProductBoundReport {
  std::size_t n = 0;
  ExponentMode mode = ExponentMode::Packing2;
  PowerSum lhs;
  Bracket log_lhs;
  Bracket log_rhs;
  bool holds = false;
  bool exact = false;  // decided without interval arithmetic
  mpfr_prec_t precision = 0;
};

/// prod_{j<n} (1 + q_j^{M_j - phi_j}) against C (phi(q_m) log q_m)^{p} with
/// (m, p) = (n-1, 2-eps) for Packing2 and (n, 1-eps) for Hausdorff1.
ProductBoundReport product_bound(const ScaleChain& chain, std::size_t n, const GaugeParams& params,
                                 ExponentMode mode, LogConvention convention = LogConvention::Natural,
                                 mpfr_prec_t precision = kDefaultPrecisionBits);

/// count * (d ln 2)^{-s}, the h_s cost of count sets of diameter 2^{-d}.
Bracket hs_cover_cost(const mpz_class& count, const mpz_class& d, const mpq_class& s,
                      mpfr_prec_t precision = kDefaultPrecisionBits);

struct CoverReport {
  std::size_t n = 0;
  std::optional<mpz_class> delta_exponent;
  std::optional<mpz_class> covering;
  std::optional<mpz_class> packing;
  std::optional<Bracket> box_estimate;  // log N / log log(1/delta)
  std::optional<Bracket> fitted_C1;
  std::vector<std::optional<Bracket>> hs_costs;  // one per s in the grid
  std::optional<bool> product_verdict;
};

struct DimensionTable {
  std::vector<mpq_class> s_grid;
  std::vector<CoverReport> rows;
};

struct ChainReportOptions {
  GaugeParams params;
  LogConvention log = LogConvention::Natural;
  std::size_t cap = kDefaultWindowCap;
  mpfr_prec_t precision = kDefaultPrecisionBits;
};

/// Rows use delta = 4 r_n, i.e. d = rho_n - 2; rows with d < 2 are left empty.
DimensionTable dimension_report(const ScaleChain& chain, const std::vector<mpq_class>& s_grid,
                                const std::vector<std::size_t>& n_range,
                                const ChainReportOptions& options = {});

/// Rows cover level-n cylinders [p_u, p_u + 2^{-(g(n+1)-1)}], d = g(n+1) - 1.
DimensionTable dimension_report(const DigitSpec& spec, const std::vector<mpq_class>& s_grid,
                                const std::vector<std::size_t>& n_range,
                                mpfr_prec_t precision = kDefaultPrecisionBits);

std::string to_csv(const DimensionTable& table);

}  // namespace thinset
