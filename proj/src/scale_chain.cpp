#include "thinset/scale_chain.hpp"

#include <algorithm>
#include <string>

#include "thinset/error.hpp"

namespace thinset {

namespace {

std::string level_name(std::size_t i) { return "level " + std::to_string(i); }

}  // namespace

const mpz_class& ScaleChain::e_at(std::size_t i) const {
  if (i < 1 || i > e.size()) fail(ErrorCode::LevelOutOfRange, "no e at " + level_name(i));
  return e[i - 1];
}

const mpz_class& ScaleChain::M_at(std::size_t i) const {
  if (!has_multiplier(i)) fail(ErrorCode::LevelOutOfRange, "no M at " + level_name(i));
  return M[i - 1];
}

const mpq_class& ScaleChain::phi_at(std::size_t i) const {
  if (i < 1 || i > phi.size()) fail(ErrorCode::LevelOutOfRange, "no phi at " + level_name(i));
  return phi[i - 1];
}

const mpz_class& ScaleChain::rho_at(std::size_t i) const {
  if (!has_radius(i)) fail(ErrorCode::LevelOutOfRange, "no radius at " + level_name(i));
  return rho[i - 1];
}

SparseDyadic ScaleChain::radius(std::size_t i) const { return SparseDyadic::pow2(rho_at(i)); }

SparseDyadic ScaleChain::spacing(std::size_t i) const { return SparseDyadic::pow2(e_at(i)); }

ScaleChain build_custom_chain(const std::vector<mpz_class>& M, const std::vector<mpq_class>& phi,
                              std::size_t depth) {
  if (depth == 0) fail(ErrorCode::InvalidArgument, "depth must be positive");
  if (M.size() + 1 < depth || phi.size() + 1 < depth) {
    fail(ErrorCode::InvalidArgument, "M and phi must cover levels 1.." + std::to_string(depth - 1));
  }
  ScaleChain chain;
  chain.depth = depth;
  chain.M.assign(M.begin(), M.begin() + static_cast<long>(std::min(M.size(), depth)));
  chain.phi.assign(phi.begin(), phi.begin() + static_cast<long>(std::min(phi.size(), depth)));

  for (std::size_t i = 0; i < chain.M.size(); ++i) {
    if (chain.M[i] <= 0) fail(ErrorCode::InvalidArgument, "M must be positive");
    if (i > 0 && chain.M[i] <= chain.M[i - 1]) {
      fail(ErrorCode::MonotonicityViolation, "M not strictly increasing at " + level_name(i + 1));
    }
  }
  for (std::size_t i = 0; i < chain.phi.size(); ++i) {
    if (chain.phi[i] <= 0) fail(ErrorCode::InvalidArgument, "phi must be positive");
    if (i > 0 && chain.phi[i] <= chain.phi[i - 1]) {
      fail(ErrorCode::MonotonicityViolation, "phi not strictly increasing at " + level_name(i + 1));
    }
  }

  chain.e.reserve(depth);
  chain.e.push_back(1);
  for (std::size_t i = 1; i < depth; ++i) chain.e.push_back(chain.M[i - 1] * chain.e[i - 1]);

  for (std::size_t i = 0; i < chain.phi.size(); ++i) {
    mpq_class r = chain.phi[i] * mpq_class(chain.e[i]);
    r.canonicalize();
    if (r.get_den() != 1) {
      fail(ErrorCode::NonIntegerRadiusExponent,
           "e*phi = " + r.get_str() + " is not an integer at " + level_name(i + 1));
    }
    chain.rho.push_back(r.get_num());
    if (i > 0 && chain.rho[i] <= chain.rho[i - 1]) {
      fail(ErrorCode::MonotonicityViolation, "rho not strictly increasing at " + level_name(i + 1));
    }
  }
  return chain;
}

PowerSum square_product(const std::vector<mpz_class>& e, std::size_t n) {
  PowerSum p = PowerSum::constant(1);
  for (std::size_t j = 0; j < n; ++j) p = p * (PowerSum::constant(1) + PowerSum::pow2(2 * e[j]));
  return p;
}

mpz_class explicit_ceiling(const std::vector<mpz_class>& e, std::size_t n,
                           const ExplicitChainOptions& options) {
  if (n < 1 || n > e.size()) fail(ErrorCode::LevelOutOfRange, "explicit_ceiling level");
  mpz_class bits = 1;
  for (std::size_t j = 0; j < n; ++j) bits += 2 * e[j] + 1;
  if (bits > options.bit_budget) {
    fail(ErrorCode::DepthTooLarge, "product for M_" + std::to_string(n) + " needs " +
                                       bits.get_str() + " bits, budget " +
                                       std::to_string(options.bit_budget));
  }
  const auto product = square_product(e, n).to_integer(options.bit_budget + 64);
  if (!product) fail(ErrorCode::InternalInvariant, "square product not materialised");
  const mpz_class numerator = 2 * *product;

  if (options.log == LogConvention::Base2) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), numerator.get_mpz_t(), e[n - 1].get_mpz_t());
    return q;
  }
  // 2P / (e_n ln 2): widen until both ends of the bracket share a ceiling.
  mpfr_prec_t precision = std::max<mpfr_prec_t>(options.precision, bits.get_ui() + 64);
  const mpfr_prec_t limit = std::max<mpfr_prec_t>(kMaxPrecisionBits, 4 * precision);
  for (; precision <= limit; precision *= 2) {
    const Bracket value = bracket_of(numerator, precision) /
                          (bracket_of(e[n - 1], precision) * ln2_bracket(precision));
    if (auto c = unambiguous_ceil(value)) return *c;
  }
  fail(ErrorCode::PrecisionExhausted, "ceiling for M_" + std::to_string(n) + " not separated");
}

ScaleChain build_explicit_chain(std::size_t depth, const ExplicitChainOptions& options) {
  if (depth == 0) fail(ErrorCode::InvalidArgument, "depth must be positive");
  ScaleChain chain;
  chain.depth = depth;
  chain.e.push_back(1);
  for (std::size_t n = 1; n <= depth; ++n) {
    mpz_class m;
    try {
      m = explicit_ceiling(chain.e, n, options) + 2;
    } catch (const Error& err) {
      // The top level only contributes phi_depth, so it may stay open.
      if (err.code() == ErrorCode::DepthTooLarge && n == depth) break;
      throw;
    }
    if (n == 1) m = std::max(m, mpz_class(4));
    else m = std::max(m, mpz_class(chain.M.back() + 1));
    chain.M.push_back(m);
    chain.phi.emplace_back(m - 2);
    chain.rho.push_back(chain.e[n - 1] * (m - 2));
    if (n < depth) chain.e.push_back(m * chain.e[n - 1]);
  }
  return chain;
}

const char* to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::Branching: return "Branching";
    case RegimeTag::Collapse: return "Collapse";
    case RegimeTag::Indeterminate: return "Indeterminate";
  }
  return "?";
}

bool branching_at(const ScaleChain& chain, std::size_t i) {
  return chain.phi_at(i) < mpq_class(chain.M_at(i) - 1);
}

bool collapse_at(const ScaleChain& chain, std::size_t i) {
  return chain.phi_at(i) > mpq_class(chain.M_at(i));
}

Regime classify_regime(const ScaleChain& chain) {
  const std::size_t levels = chain.parameter_levels();
  if (levels == 0) return {RegimeTag::Indeterminate, std::nullopt};
  RegimeTag claimed;
  if (branching_at(chain, 1)) claimed = RegimeTag::Branching;
  else if (collapse_at(chain, 1)) claimed = RegimeTag::Collapse;
  else return {RegimeTag::Indeterminate, 1};

  for (std::size_t i = 2; i <= levels; ++i) {
    const bool ok = claimed == RegimeTag::Branching ? branching_at(chain, i) : collapse_at(chain, i);
    if (!ok) return {RegimeTag::Indeterminate, i};
  }
  return {claimed, std::nullopt};
}

BranchingCount branching_count(const ScaleChain& chain, std::size_t i,
                               const mpz_class& g_numerator) {
  if (i < 1 || i >= chain.depth) fail(ErrorCode::LevelOutOfRange, "branching_count needs 1 <= i < depth");
  const mpz_class& ei = chain.e_at(i);
  const mpz_class& next = chain.e_at(i + 1);
  const mpz_class& rho = chain.rho_at(i);
  const PowerSum g = PowerSum::constant(g_numerator);
  if (g_numerator < 0 || g > PowerSum::pow2(ei)) {
    fail(ErrorCode::InvalidArgument, "g_numerator outside [0, q_i]");
  }
  // Work on the G_{i+1} scale: center m, reach W = floor(r_i * q_{i+1}).
  const PowerSum m = PowerSum::pow2(next - ei, g_numerator);
  const PowerSum reach = next >= rho ? PowerSum::pow2(next - rho) : PowerSum{};
  const PowerSum top = PowerSum::pow2(next);
  const PowerSum zero;

  const PowerSum lo = std::max(m - reach, zero);
  const PowerSum hi = std::min(m + reach, top);
  BranchingCount out;
  out.count = hi - lo + PowerSum::constant(1);
  out.clipped = (m - reach) < zero || (m + reach) > top;
  return out;
}

PowerSum branching_lower_bound(const ScaleChain& chain, std::size_t i) {
  const mpz_class w = chain.M_at(i) * chain.e_at(i) - chain.rho_at(i);
  // below 1 when w < 0; vacuous
  if (w < 0) return PowerSum::constant(0);
  return PowerSum::pow2(w, 2) - PowerSum::constant(1);
}

}  // namespace thinset
