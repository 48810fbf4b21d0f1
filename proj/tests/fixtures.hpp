#pragma once

#include <gmpxx.h>

#include <random>
#include <vector>

#include "thinset/scale_chain.hpp"

namespace fixtures {

inline thinset::ScaleChain desk_chain() {
  return thinset::build_custom_chain({3, 4, 5, 6, 7}, {1, 2, 3, 4, 5}, 5);
}

inline thinset::ScaleChain collapse_chain() { return thinset::build_custom_chain({3, 4, 5}, {4, 5, 6}, 3); }

// Integer phi with 1 <= phi_i <= M_i - 2 and both sequences strictly increasing.
inline thinset::ScaleChain random_branching_chain(std::mt19937_64& rng, std::size_t depth, long m_lo = 3,
                                                  long m_step = 3) {
  std::vector<mpz_class> M;
  std::vector<mpq_class> phi;
  long m = m_lo - 1, p = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    m += std::uniform_int_distribution<long>(1, m_step)(rng);
    const long lo = p + 1;
    const long hi = std::max(lo, m - 2);
    if (m - 2 < lo) m = lo + 2;
    p = std::uniform_int_distribution<long>(lo, hi)(rng);
    M.push_back(m);
    phi.push_back(p);
  }
  return thinset::build_custom_chain(M, phi, depth);
}

}  // namespace fixtures
