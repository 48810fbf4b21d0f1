#pragma once

#include <json.hpp>

#include "thinset/bracket.hpp"
#include "thinset/digit_cantor.hpp"
#include "thinset/dimension.hpp"
#include "thinset/falconer_set.hpp"
#include "thinset/independent_cantor.hpp"
#include "thinset/scale_chain.hpp"
#include "thinset/sparse_dyadic.hpp"

namespace thinset {

using nlohmann::json;

json to_json(const SparseDyadic& x);
SparseDyadic sparse_from_json(const json& j);

json to_json(const PowerSum& x);
json to_json(const Bracket& b);

json to_json(const ScaleChain& chain);
/// Rebuilds from depth/M/phi and, when present, checks e and rho against the
/// rebuilt values (ConfigError on mismatch).
ScaleChain chain_from_json(const json& j);

json to_json(const Regime& r);
json to_json(const BranchingCount& c);
json to_json(const LatticeInterval& iv);
json to_json(const MemberTrace& t);
json to_json(const RapidTerm& t);
json to_json(const TripleSumFamily& f);
json to_json(const TripleSumReport& r);
json to_json(const TreePath& p);
json to_json(const LocalizationReport& r);
json to_json(const DichotomyReport& r);

json to_json(const PackingCoveringReport& r);
json to_json(const ProductBoundReport& r);
json to_json(const DimensionTable& t);

json to_json(const RationalForm& f);
json to_json(const CantorTree& t);
json to_json(const QuadrupleResult& r);
json to_json(const RelationResult& r);

json to_json(const DigitSpec& s);
DigitSpec digit_spec_from_json(const json& j);
json to_json(const SeparationReport& r);
json to_json(const TauBound& b);
json to_json(const Membership& m);
json to_json(const TripleSumsetReport& r);
json to_json(const DiagnosticTable& t);

/// "p/q" or "p" parsed into a canonical rational (ConfigError otherwise).
mpq_class parse_rational(const json& j);
mpz_class parse_integer(const json& j);

}  // namespace thinset
