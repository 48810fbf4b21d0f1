#include "thinset/serialize.hpp"

#include "thinset/error.hpp"

namespace thinset {

namespace {

std::string str(const mpz_class& v) { return v.get_str(); }

json opt_level(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

json strings(const std::vector<mpz_class>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(str(x));
  return out;
}

json rationals(const std::vector<mpq_class>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

}  // namespace

mpz_class parse_integer(const json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    mpz_class v;
    if (v.set_str(j.get<std::string>(), 10) != 0) fail(ErrorCode::ConfigError, "not an integer: " + j.dump());
    return v;
  }
  fail(ErrorCode::ConfigError, "expected an integer, got " + j.dump());
}

mpq_class parse_rational(const json& j) {
  if (j.is_number_integer()) return mpq_class(parse_integer(j));
  if (j.is_string()) {
    mpq_class v;
    if (v.set_str(j.get<std::string>(), 10) != 0 || v.get_den() == 0) {
      fail(ErrorCode::ConfigError, "not a rational: " + j.dump());
    }
    v.canonicalize();
    return v;
  }
  fail(ErrorCode::ConfigError, "expected a rational \"p/q\", got " + j.dump());
}

json to_json(const SparseDyadic& x) {
  json terms = json::array();
  for (const auto& t : x.terms()) terms.push_back({str(t.exponent), str(t.coefficient)});
  return {{"terms", terms}};
}

SparseDyadic sparse_from_json(const json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array()) {
    fail(ErrorCode::ConfigError, "SparseDyadic needs {\"terms\": [[f, c], ...]}");
  }
  std::vector<SparseDyadic::Term> terms;
  for (const auto& t : j["terms"]) {
    if (!t.is_array() || t.size() != 2) fail(ErrorCode::ConfigError, "term must be [f, c]");
    terms.push_back({parse_integer(t[0]), parse_integer(t[1])});
  }
  return SparseDyadic::from_terms(std::move(terms));
}

json to_json(const PowerSum& x) {
  json terms = json::array();
  for (const auto& t : x.terms()) terms.push_back({str(t.exponent), str(t.coefficient)});
  return {{"pow2_terms", terms}, {"text", to_string(x)}};
}

json to_json(const Bracket& b) {
  return {{"value", midpoint_string(b)}, {"err", radius_string(b)}, {"lo", to_decimal(b.lo)}, {"hi", to_decimal(b.hi)}};
}

json to_json(const ScaleChain& c) {
  json M = json::array();
  for (const auto& m : c.M) M.push_back(m.fits_slong_p() ? json(m.get_si()) : json(str(m)));
  return {{"depth", c.depth}, {"M", M}, {"phi", rationals(c.phi)}, {"e", strings(c.e)}, {"rho", strings(c.rho)}};
}

ScaleChain chain_from_json(const json& j) {
  if (!j.is_object() || !j.contains("M") || !j.contains("phi") || !j.contains("depth")) {
    fail(ErrorCode::ConfigError, "chain needs depth, M and phi");
  }
  std::vector<mpz_class> M;
  for (const auto& m : j["M"]) M.push_back(parse_integer(m));
  std::vector<mpq_class> phi;
  for (const auto& p : j["phi"]) phi.push_back(parse_rational(p));
  const ScaleChain chain = build_custom_chain(M, phi, j["depth"].get<std::size_t>());
  if (j.contains("e")) {
    std::vector<mpz_class> e;
    for (const auto& v : j["e"]) e.push_back(parse_integer(v));
    if (e != chain.e) fail(ErrorCode::ConfigError, "stored e disagrees with the recurrence");
  }
  if (j.contains("rho")) {
    std::vector<mpz_class> rho;
    for (const auto& v : j["rho"]) rho.push_back(parse_integer(v));
    if (rho != chain.rho) fail(ErrorCode::ConfigError, "stored rho disagrees with e*phi");
  }
  return chain;
}

json to_json(const Regime& r) {
  return {{"tag", to_string(r.tag)}, {"witness_level", opt_level(r.witness_level)}};
}

json to_json(const BranchingCount& c) { return {{"count", to_json(c.count)}, {"clipped", c.clipped}}; }

json to_json(const LatticeInterval& iv) {
  return {{"level", iv.level}, {"numerator", str(iv.center_numerator)}, {"radius_exponent", str(iv.radius_exponent)}};
}

json to_json(const MemberTrace& t) {
  json levels = json::array();
  for (const auto& l : t.levels) {
    levels.push_back({{"level", l.level},
                      {"distance", to_json(l.distance)},
                      {"distance_approx", approx_decimal(l.distance, 20).text},
                      {"radius_exponent", str(l.radius_exponent)},
                      {"pass", l.pass}});
  }
  return {{"member", t.member}, {"first_failure", opt_level(t.first_failure)}, {"levels", levels}};
}

json to_json(const RapidTerm& t) {
  return {{"index", t.index},
          {"value", to_json(t.value)},
          {"trace", to_json(t.trace)},
          {"ratio_exponent", t.ratio_exponent ? json(str(*t.ratio_exponent)) : json(nullptr)},
          {"ratio_matches", t.ratio_matches}};
}

json to_json(const TripleSumFamily& f) {
  json el = json::array();
  for (const auto& a : f.elements) el.push_back(to_json(a));
  return {{"indices", f.indices}, {"elements", el}};
}

namespace {

json sum_json(const SumCheck& c) {
  return {{"terms", c.terms},
          {"sum", to_json(c.sum)},
          {"pass", c.pass},
          {"failing_level", opt_level(c.failing_level)},
          {"out_of_unit_interval", c.out_of_unit_interval}};
}

}  // namespace

json to_json(const TripleSumReport& r) {
  json singles = json::array();
  for (const auto& c : r.singletons) singles.push_back(sum_json(c));
  json triples = json::array();
  for (const auto& c : r.triples) triples.push_back(sum_json(c));
  return {{"K", r.K},
          {"depth", r.depth},
          {"invariant_pass", r.invariant_pass},
          {"invariant_detail", r.invariant_detail},
          {"membership_pass", r.membership_pass},
          {"failures", r.failures},
          {"triples_checked", r.triples.size()},
          {"singletons", singles},
          {"triples", triples}};
}

json to_json(const TreePath& p) {
  json iv = json::array();
  for (const auto& t : p.intervals) {
    iv.push_back({{"level", t.level}, {"left", to_json(t.left)}, {"radius_exponent", str(t.radius_exponent)}});
  }
  return {{"i0", p.i0}, {"bits", p.bits}, {"intervals", iv}, {"representative", to_json(p.representative)}};
}

json to_json(const LocalizationReport& r) {
  return {{"level", r.level},
          {"g_numerator", str(r.g_numerator)},
          {"depth", r.depth},
          {"pass", r.pass},
          {"cells", r.cells},
          {"max_distance", to_json(r.max_distance)},
          {"ratio_exponent", str(r.ratio_exponent)}};
}

json to_json(const DichotomyReport& r) {
  return {{"counts", r.counts},
          {"threshold_level", opt_level(r.threshold_level)},
          {"monotone", r.monotone},
          {"stabilized", r.stabilized},
          {"single_descendant", r.single_descendant}};
}

json to_json(const PackingCoveringReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"d", str(row.d)}, {"packing", str(row.packing)}, {"covering_2delta", str(row.covering)}, {"pass", row.pass}});
  }
  return {{"pass", r.pass}, {"rows", rows}};
}

json to_json(const ProductBoundReport& r) {
  return {{"n", r.n},
          {"mode", to_string(r.mode)},
          {"lhs", to_json(r.lhs)},
          {"log_lhs", to_json(r.log_lhs)},
          {"log_rhs", to_json(r.log_rhs)},
          {"log_margin", to_json(r.log_rhs - r.log_lhs)},
          {"holds", r.holds},
          {"exact", r.exact},
          {"precision_bits", r.precision}};
}

json to_json(const DimensionTable& t) {
  json rows = json::array();
  auto opt = [](const std::optional<mpz_class>& v) { return v ? json(str(*v)) : json(nullptr); };
  for (const auto& r : t.rows) {
    json hs = json::array();
    for (const auto& c : r.hs_costs) hs.push_back(c ? to_json(*c) : json(nullptr));
    rows.push_back({{"n", r.n},
                    {"delta_exponent", opt(r.delta_exponent)},
                    {"covering", opt(r.covering)},
                    {"packing", opt(r.packing)},
                    {"box_estimate", r.box_estimate ? to_json(*r.box_estimate) : json(nullptr)},
                    {"fitted_C1", r.fitted_C1 ? to_json(*r.fitted_C1) : json(nullptr)},
                    {"hs_costs", hs},
                    {"product_verdict", r.product_verdict ? json(*r.product_verdict) : json(nullptr)}});
  }
  return {{"s_grid", rationals(t.s_grid)}, {"rows", rows}};
}

json to_json(const RationalForm& f) { return {{"coefficients", rationals(f.coefficients)}, {"text", to_string(f)}}; }

json to_json(const CantorTree& t) {
  json levels = json::array();
  for (const auto& level : t.levels) {
    json nodes = json::array();
    for (const auto& v : level) {
      nodes.push_back({{"word", v.word}, {"lo", v.lo().get_str()}, {"hi", v.hi().get_str()}, {"center", v.center.get_str()}, {"prime", v.prime}});
    }
    levels.push_back(nodes);
  }
  return {{"n_max", t.n_max},
          {"rho", rationals(t.rho)},
          {"epsilon", rationals(t.epsilon)},
          {"epsilon_shift", t.epsilon_shift},
          {"retries", t.retries},
          {"tuples_checked", t.tuples_checked},
          {"levels", levels}};
}

json to_json(const QuadrupleResult& r) {
  return {{"found", r.indices.has_value()},
          {"indices", r.indices ? json(*r.indices) : json(nullptr)},
          {"pairs_checked", r.pairs_checked}};
}

json to_json(const RelationResult& r) {
  json rel = nullptr;
  if (r.relation) rel = {{"indices", r.relation->indices}, {"coefficients", rationals(r.relation->coefficients)}};
  return {{"found", r.relation.has_value()}, {"relation", rel}, {"tuples_checked", r.tuples_checked}};
}

json to_json(const DigitSpec& s) {
  json part;
  if (s.mod3) part = "mod3";
  else part = json::array({s.classes[0], s.classes[1], s.classes[2]});
  return {{"g", strings(s.g)}, {"growth", to_string(s.growth)}, {"partition", part}, {"N_max", s.N_max}};
}

DigitSpec digit_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("N_max")) fail(ErrorCode::ConfigError, "digit spec needs N_max");
  const std::size_t N_max = j["N_max"].get<std::size_t>();
  std::vector<mpz_class> g;
  if (j.contains("g")) {
    for (const auto& v : j["g"]) g.push_back(parse_integer(v));
  } else if (j.contains("schedule")) {
    const std::string s = j["schedule"].get<std::string>();
    if (s == "linear") g = schedule_linear(N_max);
    else if (s == "pow2") g = schedule_pow2(N_max);
    else if (s == "pow2_square") g = schedule_pow2_square(N_max);
    else fail(ErrorCode::ConfigError, "unknown schedule '" + s + "'");
  } else {
    fail(ErrorCode::ConfigError, "digit spec needs g or schedule");
  }
  const GrowthProperty growth = parse_growth(j.value("growth", std::string()));
  std::optional<std::array<std::vector<std::size_t>, 3>> classes;
  if (j.contains("partition") && j["partition"].is_array()) {
    if (j["partition"].size() != 3) fail(ErrorCode::ConfigError, "partition needs three index lists");
    classes.emplace();
    for (int c = 0; c < 3; ++c) (*classes)[c] = j["partition"][c].get<std::vector<std::size_t>>();
  } else if (j.contains("partition") && j["partition"] != "mod3") {
    fail(ErrorCode::ConfigError, "partition must be \"mod3\" or three index lists");
  }
  return make_digit_spec(std::move(g), growth, N_max, classes);
}

json to_json(const SeparationReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n}, {"tail", to_json(row.tail)}, {"bound_exponent", str(row.bound_exponent)}, {"pass", row.pass}});
  }
  return {{"pass", r.pass}, {"growth", r.growth}, {"rows", rows}};
}

json to_json(const TauBound& b) {
  return {{"lower_exponent", str(b.lower_exponent)}, {"upper_exponent", str(b.upper_exponent)}, {"truncated_tail", to_json(b.truncated_tail)}};
}

json to_json(const Membership& m) { return {{"member", m.member}, {"digits", m.digits}}; }

json to_json(const TripleSumsetReport& r) {
  return {{"index_cap", r.index_cap},
          {"class_sizes", r.class_sizes},
          {"total", r.total},
          {"passed", r.passed},
          {"union_matches", r.union_matches},
          {"pass", r.pass()}};
}

json to_json(const DiagnosticTable& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json cells = json::array();
    for (const auto& c : row.cells) cells.push_back({{"s", c.s.get_str()}, {"value", to_json(c.value)}});
    rows.push_back({{"n", row.n}, {"cells", cells}});
  }
  return {{"s_grid", rationals(t.s_grid)}, {"rows", rows}, {"decreasing", t.decreasing}};
}

}  // namespace thinset
