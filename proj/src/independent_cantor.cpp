#include "thinset/independent_cantor.hpp"

#include <numeric>

#include "thinset/dimension.hpp"

namespace thinset {

mpz_class RationalForm::height() const {
  mpz_class h = 0;
  for (const auto& q : coefficients) {
    h = std::max(h, mpz_class(abs(q.get_num())));
    h = std::max(h, mpz_class(q.get_den()));
  }
  return h;
}

std::string to_string(const RationalForm& form) {
  std::string out;
  for (std::size_t i = 0; i < form.coefficients.size(); ++i) {
    const mpq_class& q = form.coefficients[i];
    if (i > 0) out += q < 0 ? " - " : " + ";
    else if (q < 0) out += "-";
    out += mpq_class(abs(q)).get_str() + "*x" + std::to_string(i + 1);
  }
  return out;
}

namespace {

unsigned long height_of(const mpq_class& q) {
  return std::max(mpz_class(abs(q.get_num())), mpz_class(q.get_den())).get_ui();
}

// Advances an odometer over [0, base)^m; false once it wraps.
bool next_tuple(std::vector<std::size_t>& digits, std::size_t base) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < base) return true;
    digits[i] = 0;
  }
  return false;
}

bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<mpq_class> coefficient_universe(unsigned long H) {
  std::vector<mpq_class> out;
  for (unsigned long h = 1; h <= H; ++h) {
    for (unsigned long den = 1; den <= h; ++den) {
      for (unsigned long num = 1; num <= h; ++num) {
        if (std::max(num, den) != h || std::gcd(num, den) != 1) continue;
        out.emplace_back(static_cast<long>(num), den);
        out.emplace_back(-static_cast<long>(num), den);
      }
    }
  }
  return out;
}

std::vector<RationalForm> enumerate_forms(unsigned long H, std::size_t m_max, std::optional<std::size_t> count) {
  if (H < 1 || m_max < 1) fail(ErrorCode::InvalidArgument, "enumerate_forms needs H >= 1 and m_max >= 1");
  const std::vector<mpq_class> universe = coefficient_universe(H);
  std::vector<RationalForm> out;
  auto done = [&] { return count && out.size() >= *count; };
  for (unsigned long h = 1; h <= H && !done(); ++h) {
    std::size_t prefix = 0;
    while (prefix < universe.size() && height_of(universe[prefix]) <= h) ++prefix;
    for (std::size_t m = 1; m <= m_max && !done(); ++m) {
      std::vector<std::size_t> digits(m, 0);
      do {
        bool reaches = false;
        for (std::size_t d : digits) reaches = reaches || height_of(universe[d]) == h;
        if (!reaches) continue;
        RationalForm f;
        for (std::size_t d : digits) f.coefficients.push_back(universe[d]);
        out.push_back(std::move(f));
      } while (!done() && next_tuple(digits, prefix));
    }
  }
  if (count && out.size() < *count) {
    fail(ErrorCode::ExhaustedUniverse, "only " + std::to_string(out.size()) + " forms within bounds");
  }
  return out;
}

namespace {

// Calls visit(tuple) for every ordered tuple of m distinct indices below n.
template <class Visit>
void for_each_distinct_tuple(std::size_t n, std::size_t m, Visit&& visit) {
  if (m > n) return;
  std::vector<std::size_t> comb(m);
  std::iota(comb.begin(), comb.end(), 0);
  do {
    std::vector<std::size_t> perm = comb;
    do {
      visit(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } while (next_combination(comb, n));
}

mpq_class evaluate(const RationalForm& f, const std::vector<mpq_class>& x, const std::vector<std::size_t>& idx) {
  mpq_class v = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) v += f.coefficients[i] * x[idx[i]];
  return v;
}

mpq_class abs_sum(const RationalForm& f) {
  mpq_class s = 0;
  for (const auto& q : f.coefficients) s += abs(q);
  return s;
}

constexpr std::size_t kMaxRetries = 8;
constexpr unsigned long kMaxShift = 1ul << 16;

}  // namespace

CantorTree build_independent_tree(std::size_t n_max, const std::vector<mpq_class>& rho,
                                  const std::vector<RationalForm>& forms) {
  if (n_max < 1 || n_max > kMaxTreeDepth) fail(ErrorCode::PreconditionFailure, "n_max must lie in 1..4");
  if (rho.size() < n_max) fail(ErrorCode::PreconditionFailure, "rho schedule shorter than n_max");
  mpz_class max_height = 1;
  for (const auto& f : forms) {
    if (f.arity() == 0 || f.arity() > kMaxTreeArity) fail(ErrorCode::PreconditionFailure, "form arity must lie in 1..3");
    for (const auto& q : f.coefficients) {
      if (q == 0) fail(ErrorCode::InvalidArgument, "form coefficient is zero");
    }
    max_height = std::max(max_height, f.height());
  }
  for (std::size_t n = 0; n < n_max; ++n) {
    if (rho[n] <= 0) fail(ErrorCode::PreconditionFailure, "rho must be positive");
    if (n > 0 && !(rho[n] < rho[n - 1] / 10)) {
      fail(ErrorCode::PreconditionFailure, "rho_" + std::to_string(n + 1) + " >= rho_" + std::to_string(n) + "/10");
    }
  }

  CantorTree tree;
  tree.n_max = n_max;
  tree.rho.assign(rho.begin(), rho.begin() + static_cast<long>(n_max));
  tree.levels.push_back({TreeNode{"", mpq_class(3, 2), mpq_class(3, 8), 0}});

  // Private primes above every form height: a point's own prime then appears
  // in no other denominator, which keeps bounded-height forms away from 0.
  mpz_class prime = std::max(max_height, mpz_class(4));
  auto fresh_prime = [&] {
    mpz_nextprime(prime.get_mpz_t(), prime.get_mpz_t());
    return prime.get_ui();
  };

  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto& parents = tree.levels.back();
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kMaxRetries && !placed; ++attempt) {
      std::vector<TreeNode> level;
      for (const auto& u : parents) {
        for (int bit = 0; bit < 2; ++bit) {
          const unsigned long p = fresh_prime();
          const mpq_class shift = bit == 0 ? mpq_class(-u.radius / 4) : mpq_class(u.radius / 4);
          level.push_back({u.word + (bit == 0 ? "0" : "1"), u.center + shift + u.radius / (8 * p), 0, p});
        }
      }
      std::vector<mpq_class> x;
      for (const auto& v : level) x.push_back(v.center);

      // epsilon must stay strictly below `strict` and at most rho_n / 2
      std::optional<mpq_class> strict;
      auto tighten = [&](const mpq_class& b) {
        if (!strict || b < *strict) strict = b;
      };
      bool vanished = false;
      for (std::size_t i = 0; i < level.size(); i += 2) {
        tighten(abs(x[i + 1] - x[i]) / 4);
        const TreeNode& u = parents[i / 2];
        for (std::size_t c = i; c < i + 2; ++c) tighten(u.radius - abs(x[c] - u.center));
      }
      for (const auto& f : forms) {
        const mpq_class weight = abs_sum(f);
        for_each_distinct_tuple(x.size(), f.arity(), [&](const std::vector<std::size_t>& idx) {
          ++tree.tuples_checked;
          const mpq_class v = evaluate(f, x, idx);
          if (v == 0) vanished = true;
          else tighten(abs(v) / weight);
        });
      }
      if (vanished) {
        ++tree.retries;
        continue;
      }
      const mpq_class cap = tree.rho[n - 1] / 2;
      unsigned long t = 0;
      mpq_class eps = 1;
      while (t <= kMaxShift && !(eps <= cap && (!strict || eps < *strict))) {
        ++t;
        eps /= 2;
      }
      if (t > kMaxShift) fail(ErrorCode::ChoiceFailure, "no dyadic epsilon at level " + std::to_string(n));
      for (auto& v : level) v.radius = eps;
      tree.epsilon.push_back(eps);
      tree.epsilon_shift.push_back(t);
      tree.levels.push_back(std::move(level));
      placed = true;
    }
    if (!placed) fail(ErrorCode::ChoiceFailure, "forms vanish at level " + std::to_string(n) + " after retries");
  }
  return tree;
}

TreeCheck verify_tree(const CantorTree& tree, const std::vector<RationalForm>& forms) {
  TreeCheck out;
  auto bad = [&](std::string why) {
    if (out.pass) out.failure = std::move(why);
    out.pass = false;
  };
  const TreeNode& root = tree.levels.at(0).at(0);
  if (!(root.lo() > 1 && root.hi() < 2)) bad("root interval not inside (1,2)");
  for (std::size_t n = 1; n < tree.levels.size(); ++n) {
    const auto& level = tree.levels[n];
    const auto& parents = tree.levels[n - 1];
    if (level.size() != 2 * parents.size()) bad("level " + std::to_string(n) + " has wrong size");
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      const TreeNode& u = parents[i / 2];
      for (std::size_t c = i; c < i + 2; ++c) {
        if (!(level[c].lo() > u.lo() && level[c].hi() < u.hi())) bad(level[c].word + " not inside parent interior");
        if (2 * level[c].radius > tree.rho[n - 1]) bad(level[c].word + " diameter exceeds rho");
      }
      if (!(level[i].hi() < level[i + 1].lo())) bad(level[i].word + " meets its sibling");
    }
    std::vector<mpq_class> x;
    for (const auto& v : level) x.push_back(v.center);
    for (const auto& f : forms) {
      const mpq_class reach = abs_sum(f) * level.at(0).radius;
      for_each_distinct_tuple(x.size(), f.arity(), [&](const std::vector<std::size_t>& idx) {
        ++out.tuples_checked;
        // L over the box is [L(x) - reach, L(x) + reach]
        if (abs(evaluate(f, x, idx)) <= reach) bad("0 in " + to_string(f) + " at level " + std::to_string(n));
      });
    }
  }
  return out;
}

std::vector<mpq_class> leaf_samples(const CantorTree& tree) {
  std::vector<mpq_class> out;
  for (const auto& v : tree.levels.back()) out.push_back(v.center);
  return out;
}

RelationResult relation_scan(const std::vector<mpq_class>& points, unsigned long H, std::size_t m_max) {
  if (points.size() > 8 || H > 4 || m_max > 4) {
    fail(ErrorCode::SearchSpaceTooLarge, "relation_scan is limited to 8 points, H <= 4, m_max <= 4");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i] == points[j]) fail(ErrorCode::DuplicateInput, "points must be distinct");
    }
  }
  const std::vector<mpq_class> universe = coefficient_universe(H);
  RelationResult out;
  for (std::size_t m = 1; m <= std::min(m_max, points.size()); ++m) {
    std::vector<std::size_t> comb(m);
    std::iota(comb.begin(), comb.end(), 0);
    do {
      std::vector<std::size_t> digits(m, 0);
      do {
        ++out.tuples_checked;
        mpq_class v = 0;
        for (std::size_t i = 0; i < m; ++i) v += universe[digits[i]] * points[comb[i]];
        if (v == 0) {
          Relation r;
          r.indices = comb;
          for (std::size_t d : digits) r.coefficients.push_back(universe[d]);
          out.relation = std::move(r);
          return out;
        }
      } while (next_tuple(digits, universe.size()));
    } while (next_combination(comb, points.size()));
  }
  return out;
}

std::vector<TreeGaugeRow> tree_gauge_costs(const CantorTree& tree, const std::vector<mpq_class>& s_grid,
                                           mpfr_prec_t precision) {
  std::vector<TreeGaugeRow> out;
  for (std::size_t n = 1; n <= tree.n_max; ++n) {
    TreeGaugeRow row;
    row.n = n;
    const mpq_class inv = 1 / tree.rho[n - 1];
    mpz_class whole;
    mpz_fdiv_q(whole.get_mpz_t(), inv.get_num_mpz_t(), inv.get_den_mpz_t());
    row.d = whole >= 1 ? mpz_class(static_cast<unsigned long>(mpz_sizeinbase(whole.get_mpz_t(), 2) - 1)) : mpz_class(0);
    if (row.d >= 2) {
      const mpz_class count = mpz_class(1) << static_cast<mp_bitcnt_t>(n);
      for (const auto& s : s_grid) row.costs.push_back(hs_cover_cost(count, row.d, s, precision));
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace thinset
