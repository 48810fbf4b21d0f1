#include "thinset/falconer_set.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "thinset/error.hpp"

namespace thinset {

namespace {

std::string level_name(std::size_t i) { return "level " + std::to_string(i); }

const SparseDyadic& min_of(const SparseDyadic& a, const SparseDyadic& b) { return compare(a, b) <= 0 ? a : b; }
const SparseDyadic& max_of(const SparseDyadic& a, const SparseDyadic& b) { return compare(a, b) >= 0 ? a : b; }

// e_{i+1}, also past the top level when M_i is known.
mpz_class next_e(const ScaleChain& chain, std::size_t i) {
  if (i < chain.depth) return chain.e_at(i + 1);
  return chain.M_at(i) * chain.e_at(i);
}

// c * 2^{-e_N} <= r_n for every n < N
bool below_radii(const ScaleChain& chain, std::size_t N, long c) {
  const SparseDyadic lhs = SparseDyadic::term(chain.e_at(N), c);
  for (std::size_t n = 1; n < N; ++n) {
    if (compare(lhs, chain.radius(n)) > 0) return false;
  }
  return true;
}

void check_unit(const SparseDyadic& x) {
  if (sign(x) < 0 || compare(x, SparseDyadic::integer(1)) > 0) fail(ErrorCode::OutOfUnitInterval, to_string(x));
}

}  // namespace

MemberTrace member_depth(const ScaleChain& chain, const SparseDyadic& x, std::size_t n) {
  if (n > chain.depth) fail(ErrorCode::LevelOutOfRange, "membership depth beyond chain depth");
  check_unit(x);
  MemberTrace trace;
  for (std::size_t j = 1; j <= n; ++j) {
    LevelCheck c;
    c.level = j;
    c.radius_exponent = chain.rho_at(j);
    c.distance = dist_to_lattice(x, chain.e_at(j));
    c.pass = compare(c.distance, chain.radius(j)) <= 0;
    if (!c.pass && trace.member) {
      trace.member = false;
      trace.first_failure = j;
    }
    trace.levels.push_back(std::move(c));
  }
  return trace;
}

RapidTerm rapid_sequence(const ScaleChain& chain, std::size_t i) {
  if (i < 1 || i > chain.depth) fail(ErrorCode::LevelOutOfRange, "rapid_sequence " + level_name(i));
  for (std::size_t n = 1; n < i; ++n) {
    if (!branching_at(chain, n)) {
      fail(ErrorCode::RegimeViolation, "phi < M - 1 fails at " + level_name(n));
    }
  }
  RapidTerm out;
  out.index = i;
  out.value = chain.spacing(i);
  out.trace = member_depth(chain, out.value, std::min(chain.depth, chain.rho.size()));
  if (i >= 2) {
    const mpz_class ratio = chain.e_at(i) - chain.e_at(i - 1);
    out.ratio_exponent = ratio;
    const mpz_class law = chain.e_at(i - 1) * (chain.M_at(i - 1) - 1);
    out.ratio_matches = ratio == law && chain.spacing(i - 1).times_pow2(-ratio) == out.value;
  }
  return out;
}

TripleSumFamily family_from_indices(const ScaleChain& chain, const std::vector<std::size_t>& indices) {
  TripleSumFamily f;
  for (std::size_t N : indices) {
    f.indices.push_back(N);
    f.elements.push_back(chain.spacing(N));
  }
  return f;
}

TripleSumFamily select_triple_indices(const ScaleChain& chain, std::size_t k_max) {
  if (k_max == 0) fail(ErrorCode::InvalidArgument, "k_max must be positive");
  const Regime regime = classify_regime(chain);
  if (regime.tag != RegimeTag::Branching) {
    fail(ErrorCode::RegimeViolation, std::string("chain is ") + to_string(regime.tag));
  }
  std::vector<std::size_t> chosen;
  std::size_t N = 2;
  while (chosen.size() < k_max) {
    bool found = false;
    for (; N <= chain.depth; ++N) {
      if (chosen.empty()) {
        if (below_radii(chain, N, 3)) { found = true; break; }
        continue;
      }
      const bool halves = chain.e_at(N) >= chain.e_at(chosen.back()) + 1;
      if (halves && below_radii(chain, N, 6)) { found = true; break; }
    }
    if (!found) {
      fail(ErrorCode::ChainTooShallow, "no admissible N_" + std::to_string(chosen.size() + 1) +
                                           " within depth " + std::to_string(chain.depth));
    }
    chosen.push_back(N);
    ++N;
  }
  return family_from_indices(chain, chosen);
}

InvariantCheck check_family_invariants(const ScaleChain& chain, const TripleSumFamily& family) {
  InvariantCheck out;
  auto bad = [&](std::string why) {
    out.pass = false;
    out.detail = std::move(why);
    return out;
  };
  if (family.indices.size() != family.elements.size()) return bad("indices/elements size mismatch");
  for (std::size_t k = 0; k < family.indices.size(); ++k) {
    const std::size_t N = family.indices[k];
    if (N < 2 || N > chain.depth) return bad("N_" + std::to_string(k + 1) + " outside [2, depth]");
    if (k > 0 && N <= family.indices[k - 1]) return bad("indices not strictly increasing");
    if (!(family.elements[k] == chain.spacing(N))) return bad("a_" + std::to_string(k + 1) + " != 2^{-e_N}");
    if (!below_radii(chain, N, k == 0 ? 3 : 6)) {
      return bad(std::string(k == 0 ? "3" : "6") + "*a_" + std::to_string(k + 1) + " exceeds some r_n");
    }
    if (k > 0 && compare(family.elements[k].times_pow2(1), family.elements[k - 1]) > 0) {
      return bad("a_" + std::to_string(k + 1) + " > a_" + std::to_string(k) + "/2");
    }
  }
  return out;
}

namespace {

SumCheck check_sum(const ScaleChain& chain, const TripleSumFamily& family,
                   std::vector<std::size_t> terms, std::size_t depth) {
  SumCheck c;
  for (std::size_t t : terms) c.sum = c.sum + family.elements[t];
  c.terms = std::move(terms);
  try {
    const MemberTrace trace = member_depth(chain, c.sum, depth);
    c.pass = trace.member;
    c.failing_level = trace.first_failure;
  } catch (const Error& err) {
    if (err.code() != ErrorCode::OutOfUnitInterval) throw;
    c.pass = false;
    c.out_of_unit_interval = true;
  }
  return c;
}

}  // namespace

TripleSumReport verify_triple_sum(const ScaleChain& chain, const TripleSumFamily& family,
                                  std::size_t K, std::size_t depth) {
  if (K > family.elements.size()) fail(ErrorCode::InvalidArgument, "K exceeds family size");
  if (depth > chain.depth) fail(ErrorCode::LevelOutOfRange, "depth beyond chain depth");
  TripleSumReport r;
  r.K = K;
  r.depth = depth;
  const InvariantCheck inv = check_family_invariants(chain, family);
  r.invariant_pass = inv.pass;
  r.invariant_detail = inv.detail;

  for (std::size_t i = 0; i < K; ++i) r.singletons.push_back(check_sum(chain, family, {i}, depth));
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j) {
      for (std::size_t k = 0; k < K; ++k) r.triples.push_back(check_sum(chain, family, {i, j, k}, depth));
    }
  }
  for (const auto& c : r.singletons) r.failures += c.pass ? 0 : 1;
  for (const auto& c : r.triples) r.failures += c.pass ? 0 : 1;
  r.membership_pass = r.failures == 0;
  return r;
}

std::string tree_condition_failure(const ScaleChain& chain, std::size_t i) {
  const SparseDyadic gap = chain.radius(i) - chain.radius(i + 1);
  const mpz_class& e_next = chain.e_at(i + 1);
  if (compare(gap, SparseDyadic::term(e_next, 3)) <= 0) {
    return "(r_i - r_{i+1}) q_{i+1} > 3 fails at " + level_name(i);
  }
  if (compare(SparseDyadic::term(chain.rho_at(i + 1), 2), SparseDyadic::pow2(e_next)) >= 0) {
    return "2 r_{i+1} < 1/q_{i+1} fails at " + level_name(i);
  }
  return {};
}

TreePath binary_tree_point(const ScaleChain& chain, const std::string& bits,
                           std::optional<std::size_t> start_hint) {
  for (char b : bits) {
    if (b != '0' && b != '1') fail(ErrorCode::InvalidArgument, "bits must be over {0,1}");
  }
  const std::size_t needed = std::max<std::size_t>(bits.size(), 1);
  auto failure_from = [&](std::size_t i0) -> std::string {
    if (i0 + needed > chain.rho.size()) {
      fail(ErrorCode::LevelOutOfRange, "chain needs radii through " + level_name(i0 + needed));
    }
    for (std::size_t i = i0; i < i0 + needed; ++i) {
      std::string why = tree_condition_failure(chain, i);
      if (!why.empty()) return why;
    }
    return {};
  };

  std::size_t i0 = 0;
  if (start_hint) {
    if (*start_hint < 1) fail(ErrorCode::InvalidArgument, "start level must be >= 1");
    const std::string why = failure_from(*start_hint);
    if (!why.empty()) fail(ErrorCode::ConditionFailure, why);
    i0 = *start_hint;
  } else {
    std::string last;
    for (std::size_t cand = 1; cand + needed <= chain.rho.size(); ++cand) {
      last = failure_from(cand);
      if (last.empty()) {
        i0 = cand;
        break;
      }
    }
    if (i0 == 0) {
      if (last.empty()) fail(ErrorCode::LevelOutOfRange, "chain too shallow for the tree");
      fail(ErrorCode::ConditionFailure, last);
    }
  }

  TreePath path;
  path.i0 = i0;
  path.bits = bits;
  path.intervals.push_back({i0, SparseDyadic{}, chain.rho_at(i0)});
  for (std::size_t t = 0; t < bits.size(); ++t) {
    const std::size_t n = i0 + t;
    const TreeInterval& parent = path.intervals.back();
    const SparseDyadic step = chain.spacing(n + 1);
    const SparseDyadic r = chain.radius(n);
    const SparseDyadic r_next = chain.radius(n + 1);
    const SparseDyadic first = parent.left;
    const SparseDyadic second = parent.left + step;
    // siblings [first, first + r'] and [second, second + r'] must be disjoint,
    // and both must sit inside [x, x + r]
    if (compare(first + r_next, second) >= 0) {
      fail(ErrorCode::InternalInvariant, "tree siblings overlap at " + level_name(n + 1));
    }
    if (compare(second + r_next, parent.left + r) > 0) {
      fail(ErrorCode::InternalInvariant, "tree child escapes parent at " + level_name(n + 1));
    }
    path.intervals.push_back({n + 1, bits[t] == '0' ? first : second, chain.rho_at(n + 1)});
  }
  path.representative = path.intervals.back().left;
  return path;
}

std::vector<std::size_t> WindowEnumeration::counts() const {
  std::vector<std::size_t> out;
  out.reserve(levels.size());
  for (const auto& l : levels) out.push_back(l.size());
  return out;
}

namespace {

std::vector<Segment> merge_segments(std::vector<Segment> segs) {
  std::sort(segs.begin(), segs.end(),
            [](const Segment& a, const Segment& b) { return compare(a.lo, b.lo) < 0; });
  std::vector<Segment> out;
  for (auto& s : segs) {
    if (!out.empty() && compare(s.lo, out.back().hi) <= 0) {
      if (compare(s.hi, out.back().hi) > 0) out.back().hi = std::move(s.hi);
    } else {
      out.push_back(std::move(s));
    }
  }
  return out;
}

mpz_class ceil_times_pow2(const SparseDyadic& x, const mpz_class& e) {
  return -floor_times_pow2(-x, e);
}

}  // namespace

WindowEnumeration enumerate_window_levels(const ScaleChain& chain, std::size_t n,
                                          const Segment& window, std::size_t cap) {
  if (n < 1 || n > chain.depth) fail(ErrorCode::LevelOutOfRange, "window depth " + std::to_string(n));
  check_unit(window.lo);
  check_unit(window.hi);
  if (compare(window.lo, window.hi) >= 0) fail(ErrorCode::InvalidArgument, "window needs lo < hi");

  WindowEnumeration out;
  std::vector<WindowCell> parents{{LatticeInterval{}, {window}}};
  for (std::size_t j = 1; j <= n; ++j) {
    const mpz_class& e = chain.e_at(j);
    if (e > kDefaultBitBudget) fail(ErrorCode::CapExceeded, "lattice exponent too large at " + level_name(j));
    const SparseDyadic r = chain.radius(j);
    mpz_class top;
    mpz_ui_pow_ui(top.get_mpz_t(), 2, e.get_ui());

    std::map<mpz_class, std::vector<Segment>> cells;
    for (const auto& parent : parents) {
      for (const auto& piece : parent.pieces) {
        const mpz_class kmin = std::max(mpz_class(0), ceil_times_pow2(piece.lo - r, e));
        const mpz_class kmax = std::min(top, floor_times_pow2(piece.hi + r, e));
        if (kmax - kmin + 1 > cap) {
          fail(ErrorCode::CapExceeded, "more than " + std::to_string(cap) + " cells at " + level_name(j));
        }
        for (mpz_class k = kmin; k <= kmax; ++k) {
          const SparseDyadic g = SparseDyadic::term(e, k);
          SparseDyadic lo = max_of(piece.lo, g - r);
          SparseDyadic hi = min_of(piece.hi, g + r);
          if (compare(lo, hi) > 0) continue;
          cells[k].push_back({std::move(lo), std::move(hi)});
          if (cells.size() > cap) {
            fail(ErrorCode::CapExceeded, "more than " + std::to_string(cap) + " cells at " + level_name(j));
          }
        }
      }
    }
    std::vector<WindowCell> level;
    level.reserve(cells.size());
    for (auto& [k, segs] : cells) {
      level.push_back({LatticeInterval{j, k, chain.rho_at(j)}, merge_segments(std::move(segs))});
    }
    out.levels.push_back(level);
    parents = std::move(level);
  }
  return out;
}

std::vector<LatticeInterval> enumerate_window(const ScaleChain& chain, std::size_t n,
                                              const Segment& window, std::size_t cap) {
  const WindowEnumeration all = enumerate_window_levels(chain, n, window, cap);
  std::vector<LatticeInterval> out;
  for (const auto& c : all.levels.back()) out.push_back(c.interval);
  return out;
}

LocalizationReport localization_check(const ScaleChain& chain, std::size_t i,
                                      const mpz_class& g_numerator, std::size_t n, std::size_t cap) {
  if (n < i) fail(ErrorCode::InvalidArgument, "localization depth below level");
  const mpz_class& e = chain.e_at(i);
  const mpz_class& rho = chain.rho_at(i);
  // r_i < 1/(4 q_i)
  if (!(rho > e + 2)) {
    fail(ErrorCode::PreconditionFailure, "r_i >= 1/(4 q_i) at " + level_name(i));
  }
  const SparseDyadic g = SparseDyadic::term(e, g_numerator);
  check_unit(g);
  const SparseDyadic half = SparseDyadic::pow2(e + 1);
  const SparseDyadic zero;
  const SparseDyadic one = SparseDyadic::integer(1);
  const Segment window{max_of(zero, g - half), min_of(one, g + half)};

  LocalizationReport rep;
  rep.level = i;
  rep.g_numerator = g_numerator;
  rep.depth = n;
  rep.ratio_exponent = 3 + e - rho;
  const WindowEnumeration all = enumerate_window_levels(chain, n, window, cap);
  const SparseDyadic r = chain.radius(i);
  rep.pass = true;
  for (const auto& cell : all.levels.back()) {
    ++rep.cells;
    for (const auto& p : cell.pieces) {
      for (const SparseDyadic* end : {&p.lo, &p.hi}) {
        SparseDyadic d = *end - g;
        if (sign(d) < 0) d = -d;
        if (compare(d, rep.max_distance) > 0) rep.max_distance = d;
        if (compare(d, r) > 0) rep.pass = false;
      }
    }
  }
  return rep;
}

std::vector<mpz_class> ratio_bound_exponents(const ScaleChain& chain) {
  std::vector<mpz_class> out;
  for (std::size_t i = 1; i <= chain.rho.size(); ++i) out.push_back(3 + chain.e_at(i) - chain.rho_at(i));
  return out;
}

bool strictly_decreasing(const std::vector<mpz_class>& values) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] >= values[i - 1]) return false;
  }
  return true;
}

DichotomyReport dichotomy_probe(const ScaleChain& chain, std::size_t n, const Segment& window,
                                std::size_t cap) {
  const Regime regime = classify_regime(chain);
  if (regime.tag != RegimeTag::Collapse) {
    fail(ErrorCode::RegimeViolation, std::string("dichotomy probe needs Collapse, chain is ") + to_string(regime.tag));
  }
  const WindowEnumeration all = enumerate_window_levels(chain, n, window, cap);
  DichotomyReport rep;
  rep.counts = all.counts();
  for (std::size_t i = 1; i <= n && chain.has_radius(i); ++i) {
    if (i < chain.depth || chain.has_multiplier(i)) {
      if (chain.rho_at(i) > next_e(chain, i)) {
        rep.threshold_level = i;
        break;
      }
    }
  }
  if (!rep.threshold_level) return rep;

  const std::size_t t = *rep.threshold_level;
  rep.monotone = true;
  rep.stabilized = true;
  for (std::size_t j = t + 1; j <= n; ++j) {
    if (rep.counts[j - 1] > rep.counts[j - 2]) rep.monotone = false;
    if (rep.counts[j - 1] != rep.counts[t - 1]) rep.stabilized = false;
  }
  // every cell at level j >= t has its pieces meet exactly one cell of level j+1
  rep.single_descendant = true;
  for (std::size_t j = t; j < n; ++j) {
    const auto& upper = all.levels[j - 1];
    const auto& lower = all.levels[j];
    for (const auto& cell : upper) {
      std::size_t children = 0;
      for (const auto& child : lower) {
        bool meets = false;
        for (const auto& cp : child.pieces) {
          for (const auto& pp : cell.pieces) {
            if (compare(cp.lo, pp.hi) <= 0 && compare(pp.lo, cp.hi) <= 0) meets = true;
          }
        }
        children += meets ? 1 : 0;
      }
      if (children != 1) rep.single_descendant = false;
    }
  }
  return rep;
}

}  // namespace thinset
